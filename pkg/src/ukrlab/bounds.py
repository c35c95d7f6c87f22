"""Sylvester-sequence bounds: S_N, T_N, the S_inf bracket and the lower-bound constants c_N.

Everything in the certification path is exact rational arithmetic. Polynomials
are lists of Fractions, lowest degree first.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

DEFAULT_DEPTH = 8
SCAN_STEP = Fraction(1, 64)
DEFAULT_PRECISION = Fraction(1, 10**9)

_table = [2]
_lock = threading.Lock()


class NoRoot(ArithmeticError):
    pass


class PrecisionUnreachable(ArithmeticError):
    pass


def sylvester(n: int) -> int:
    """n-th Sylvester number (1-based) via ``a(n+1) = a(n)(a(n) - 1) + 1``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    with _lock:
        while len(_table) < n:
            a = _table[-1]
            _table.append(a * (a - 1) + 1)
        return _table[n - 1]


def sylvester_by_product(n: int) -> int:
    """Same numbers from the defining product ``a(n) = 1 + prod_{i<n} a(i)``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    seq: list[int] = []
    prod = 1
    for _ in range(n):
        seq.append(prod + 1)
        prod *= seq[-1]
    return seq[-1]


def sylvester_table(k: int = DEFAULT_DEPTH) -> list[int]:
    return [sylvester(i) for i in range(1, k + 1)]


def partial_sum_S(N: int) -> Fraction:
    """S_N = sum_{n<=N} 1/(a_n - 1), S_0 = 0."""
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    return sum((Fraction(1, sylvester(n) - 1) for n in range(1, N + 1)), Fraction(0))


def t_value(N: int) -> Fraction:
    """T_N = a_N/(a_N - 1)^2 + S_{N-1}."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    a = sylvester(N)
    return Fraction(a, (a - 1) ** 2) + partial_sum_S(N - 1)


def s_infinity_bracket(depth: int) -> tuple[Fraction, Fraction]:
    """Certified ``(lo, hi)`` with ``lo <= S_inf <= hi``; returns ``(S_depth, T_depth)``.

    Lower side: the terms are positive, so S_inf > S_depth.

    Upper side: with ``a(n+1) - 1 = a(n)(a(n) - 1)`` consecutive terms of the tail
    satisfy ``t(n+1) = t(n) / a(n) <= t(n) / a(depth)`` for ``n >= depth``, so the tail
    from ``depth`` on is at most the geometric series
    ``1/(a - 1) * sum_j a^-j = a/(a - 1)^2`` with ``a = a(depth)``. Adding S_{depth-1}
    gives exactly T_depth. ``hi - lo = 1/(a(depth) - 1)^2``.
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    return partial_sum_S(depth), t_value(depth)


@dataclass
class IdentityReport:
    N: int
    checks: list[tuple[str, bool]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.checks)

    def failures(self) -> list[str]:
        return [name for name, ok in self.checks if not ok]


def check_identities(N: int) -> IdentityReport:
    """Exact checks of the Sylvester/T_N identities up to ``N``."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    rep = IdentityReport(N)
    for n in range(1, N + 1):
        a = sylvester(n)
        rep.checks.append((f"recursion n={n}", sylvester(n + 1) == a * (a - 1) + 1))
        rep.checks.append((f"product n={n}", sylvester_by_product(n) == a))
        rhs = 1 - sum((Fraction(1, sylvester(j)) for j in range(1, n)), Fraction(0))
        rep.checks.append((f"remainder n={n}", Fraction(1, a - 1) == rhs))
    T = t_value(N)
    aN = sylvester(N)
    lhs = Fraction((aN - 1) ** 2, aN) * (1 - partial_sum_S(N - 1) / T)
    rep.checks.append((f"T-identity N={N}", lhs == 1 / T))
    for k in range(1, N + 1):
        ak = sylvester(k)
        lhs = Fraction(ak * (ak - 1), ak + 1) * (1 - partial_sum_S(k - 1) / T)
        rep.checks.append((f"T-inequality N={N} k={k}", lhs > 1 / T))
    return rep


# -- polynomial helpers ---------------------------------------------------------

Poly = list  # list[Fraction], low degree first


def poly_mul(p: Poly, q: Poly) -> Poly:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def poly_add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]


def poly_scale(p: Poly, s) -> Poly:
    return [s * a for a in p]


def poly_eval(p: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for a in reversed(p):
        acc = acc * x + a
    return acc


def poly_shift(p: Poly, h: Fraction) -> Poly:
    """Coefficients of ``p(x + h)``."""
    out = [Fraction(0)]
    for a in reversed(p):
        out = poly_add(poly_mul(out, [h, Fraction(1)]), [a])
    return out


def sign_changes(p: Sequence[Fraction]) -> int:
    signs = [a > 0 for a in p if a != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _linear_product(ds: Sequence[Fraction]) -> Poly:
    out: Poly = [Fraction(1)]
    for d in ds:
        out = poly_mul(out, [-d, Fraction(1)])
    return out


def lower_bound_polynomial(N: int) -> Poly:
    """The degree-N polynomial whose largest positive root is c_N.

    With ``d_i = 1/(a_i - 1)``::

        prod_{i=1..N}(c - d_i) - 1/2 prod_{i=3..N}(c - d_i)
            - (c - 1/2) sum_{i=3..N} d_i prod_{j=i+1..N}(c - d_j)
    """
    if N < 3:
        raise ValueError(f"N must be >= 3, got {N}")
    d = [Fraction(1, sylvester(i) - 1) for i in range(1, N + 1)]
    p = _linear_product(d)
    p = poly_add(p, poly_scale(_linear_product(d[2:]), Fraction(-1, 2)))
    tail: Poly = [Fraction(0)]
    for i in range(2, N):
        tail = poly_add(tail, poly_scale(_linear_product(d[i + 1:]), d[i]))
    p = poly_add(p, poly_scale(poly_mul([Fraction(-1, 2), Fraction(1)], tail), -1))
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def v_vector(N: int, c: Fraction) -> list[Fraction]:
    """v_1..v_N from c by back-substitution, with v_N = 1."""
    v = [Fraction(0)] * (N + 1)  # 1-based
    v[N] = Fraction(1)
    for i in range(N, 2, -1):
        v[i - 1] = (c - Fraction(1, sylvester(i) - 1)) * v[i]
    v[1] = v[2] / (c - Fraction(1, 2))
    return v[1:]


def residuals(N: int, c: Fraction, v: Sequence[Fraction]) -> dict[str, Fraction]:
    """Absolute residuals of the defining equations at ``(c, v)``; ``v`` is 0-based."""
    v = [None, *v]
    r_level = max(
        (abs(c - (v[i - 1] + v[i] / (sylvester(i) - 1)) / v[i]) for i in range(3, N + 1)),
        default=Fraction(0),
    )
    r_alt = abs(c - (v[2] + v[1] / 2) / v[1])
    total = v[2] + v[1] / 2 + sum((v[i] / (sylvester(i) - 1) for i in range(3, N + 1)), Fraction(0))
    r_final = abs(c - total / v[2])
    return {"level": r_level, "alternative": r_alt, "final": r_final, "normalisation": abs(v[N] - 1)}


@dataclass(frozen=True)
class LowerBoundSolution:
    N: int
    c_lo: Fraction
    c_hi: Fraction
    v: tuple[Fraction, ...]
    residuals: dict
    tolerance: Fraction
    polynomial: tuple[Fraction, ...]

    @property
    def c(self) -> Fraction:
        return (self.c_lo + self.c_hi) / 2

    @property
    def error_bound(self) -> Fraction:
        return (self.c_hi - self.c_lo) / 2

    def residuals_ok(self) -> bool:
        return all(r <= self.tolerance for r in self.residuals.values())


def _largest_root_bracket(p: Poly, lo: Fraction, hi: Fraction, step: Fraction) -> tuple[Fraction, Fraction]:
    """Scan down from ``hi`` and return the first interval with a sign change."""
    right = hi
    f_right = poly_eval(p, right)
    if f_right == 0:
        return right, right
    while right - step >= lo:
        left = right - step
        f_left = poly_eval(p, left)
        if f_left == 0 or (f_left > 0) != (f_right > 0):
            return left, right
        right, f_right = left, f_left
    raise NoRoot(f"no sign change in ({lo}, {hi}]")


def lower_bound_cN(N: int, precision: Fraction = DEFAULT_PRECISION, max_iter: int = 400) -> LowerBoundSolution:
    """Certified bracket for c_N plus the matching v-vector.

    The root is bracketed by an exact descending sign scan of (1, 2] and narrowed
    by bisection until the bracket is narrower than ``precision``. That no larger
    root exists is certified by Descartes' rule on ``p(x + 2)``.
    """
    if N < 3:
        raise ValueError(f"N must be >= 3, got {N}")
    precision = Fraction(precision)
    if precision <= 0:
        raise ValueError("precision must be positive")
    p = lower_bound_polynomial(N)
    if sign_changes(poly_shift(p, Fraction(2))) != 0:
        raise NoRoot("polynomial may have a root above 2")
    lo, hi = _largest_root_bracket(p, Fraction(1), Fraction(2), SCAN_STEP)
    if lo != hi:
        f_hi_pos = poly_eval(p, hi) > 0
        for _ in range(max_iter):
            if hi - lo < precision:
                break
            mid = (lo + hi) / 2
            f_mid = poly_eval(p, mid)
            if f_mid == 0:
                lo = hi = mid
                break
            if (f_mid > 0) == f_hi_pos:
                hi = mid
            else:
                lo = mid
        else:
            raise PrecisionUnreachable(f"bracket width {hi - lo} after {max_iter} bisections")
    c = (lo + hi) / 2
    v = v_vector(N, c)
    res = residuals(N, c, v)
    tol = _final_tolerance(p, N, lo, hi)
    return LowerBoundSolution(N, lo, hi, tuple(v), res, tol, tuple(p))


def _final_tolerance(p: Poly, N: int, lo: Fraction, hi: Fraction) -> Fraction:
    """Bound on the final-equation residual at the bracket midpoint.

    That residual equals ``-p(c) / ((c - 1/2) v_2(c))``. ``|p(c)|`` is at most the
    half-width times a derivative bound on ``[lo, hi]``; the denominator is
    increasing in ``c`` there, so its value at ``lo`` bounds it from below.
    """
    m = max(abs(lo), abs(hi))
    lip = sum((abs(k * a) * m ** (k - 1) for k, a in enumerate(p) if k), Fraction(0))
    v2_lo = v_vector(N, lo)[1]
    denom = (lo - Fraction(1, 2)) * v2_lo
    return (hi - lo) / 2 * lip / denom


def dense_scan_largest_root(coeffs: Sequence[float], lo: float = 1.0, hi: float = 2.0, step: float = 1e-6) -> float | None:
    """Float scan of (lo, hi] for the largest sign change; an independent cross-check."""
    import numpy as np

    xs = np.arange(hi, lo, -step)
    ys = np.polynomial.polynomial.polyval(xs, np.asarray(coeffs, dtype=float))
    s = np.sign(ys)
    idx = np.nonzero(s[1:] != s[:-1])[0]
    if len(idx) == 0:
        return None
    i = idx[0]
    return float((xs[i] + xs[i + 1]) / 2)
