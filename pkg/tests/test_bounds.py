from fractions import Fraction as F

import numpy as np
import pytest

from oracles import sylvester_direct
from ukrlab.bounds import (
    check_identities,
    dense_scan_largest_root,
    lower_bound_cN,
    lower_bound_polynomial,
    partial_sum_S,
    poly_eval,
    residuals,
    s_infinity_bracket,
    sylvester,
    sylvester_by_product,
    t_value,
)


def test_sylvester_values():
    assert [sylvester(n) for n in range(1, 6)] == [2, 3, 7, 43, 1807]
    assert sylvester(6) == 1807 * 1806 + 1 == 3263443
    assert [sylvester(n) for n in range(1, 10)] == sylvester_direct(9)
    assert all(sylvester_by_product(n) == sylvester(n) for n in range(1, 10))
    with pytest.raises(ValueError):
        sylvester(0)


def test_partial_sums():
    assert partial_sum_S(0) == 0
    assert partial_sum_S(2) == F(3, 2)
    assert partial_sum_S(4) == F(71, 42)


def test_t_values():
    assert t_value(1) == 2
    assert t_value(2) == F(7, 4)
    assert t_value(4) == F(2983, 1764)
    ts = [t_value(n) for n in range(1, 9)]
    assert all(a > b for a, b in zip(ts, ts[1:]))


def test_bracket_depth5():
    lo, hi = s_infinity_bracket(5)
    assert lo == partial_sum_S(5) and hi == t_value(5)
    assert hi - lo == F(1, 1806**2)
    assert hi < F(169104, 100000)


def test_brackets_nest():
    prev = None
    for k in range(1, 9):
        lo, hi = s_infinity_bracket(k)
        assert lo < hi
        if prev:
            assert prev[0] < lo and hi < prev[1]
        prev = (lo, hi)
    assert s_infinity_bracket(6)[0] > F(169103, 100000)


def test_identity_examples():
    assert check_identities(1).ok
    assert 1 - F(1, 2) - F(1, 3) == F(1, sylvester(3) - 1)
    assert F(2, 3) > 1 / t_value(4) == F(1764, 2983)
    for N in range(1, 9):
        report = check_identities(N)
        assert report.ok, report.failures()


def test_c5():
    sol = lower_bound_cN(5, F(1, 10**9))
    assert F(15877, 10000) < sol.c_lo <= sol.c_hi < F(15878, 10000)
    assert sol.c_hi - sol.c_lo < F(1, 10**9)
    assert sol.v[-1] == 1
    assert sol.residuals_ok()
    v1, v2 = sol.v[0], sol.v[1]
    assert abs((v2 + v1 / 2) / v1 - sol.c) < F(1, 10**8)


def _cubic_by_hand():
    # d_i = 1/(a_i - 1) for a = 2, 3, 7: d = 1, 1/2, 1/6
    # P(c) = (c-1)(c-1/2)(c-1/6) - 1/2 (c-1/6) - (c-1/2)(1/6)
    return [F(-1, 12) + F(1, 12) + F(1, 12), F(1, 2) + F(1, 6) + F(1, 12) - F(1, 2) - F(1, 6), -F(5, 3), F(1)]


def test_polynomial_n3_matches_hand_expansion():
    p = lower_bound_polynomial(3)
    hand = _cubic_by_hand()
    for c in (F(0), F(1), F(3, 2), F(7, 5), F(2)):
        assert poly_eval(p, c) == poly_eval(hand, c)


def test_c3_dense_scan():
    sol = lower_bound_cN(3)
    scan = dense_scan_largest_root([float(c) for c in _cubic_by_hand()], 1.0, 2.0, 1e-6)
    assert abs(scan - float(sol.c)) < 2e-6
    roots = np.roots([float(c) for c in reversed(_cubic_by_hand())])
    assert abs(max(r.real for r in roots if abs(r.imag) < 1e-12) - float(sol.c)) < 1e-9


def test_c_n_monotone():
    cs = [lower_bound_cN(N) for N in range(3, 8)]
    assert all(a.c_lo <= b.c_hi for a, b in zip(cs, cs[1:]))
    assert all(s.c_lo >= 1 and s.residuals_ok() for s in cs)


def test_residuals_detect_bad_vectors():
    sol = lower_bound_cN(4)
    bad = list(sol.v)
    bad[0] += F(1, 100)
    assert max(residuals(4, sol.c, bad).values()) > sol.tolerance


def test_lower_bound_domain():
    with pytest.raises(ValueError):
        lower_bound_cN(2)


def test_dense_scan_no_root():
    assert dense_scan_largest_root([1.0, 0.0, 1.0], 1.0, 2.0, 1e-3) is None
