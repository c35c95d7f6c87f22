"""Online unbounded knapsack with removal: algorithms, exact oracle, bounds and lower-bound games."""

from .core import (
    DomainError,
    IllegalMove,
    Instance,
    Item,
    Move,
    NotProportional,
    Session,
    Solution,
    Trace,
    cumulative_value,
    gain,
    multiplicity,
    replay,
    replay_gain,
)

__version__ = "0.1.0"
