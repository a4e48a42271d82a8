from __future__ import annotations

import itertools
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from newtonstrata.polygons import (breakpoints, gl_leq, gl_polygon_oracle, integral_points_between,
                                   isoclinic_blocks, polygon_values, slope_defect)

from conftest import F, GL4_NUS


def test_oracle_examples():
    assert gl_polygon_oracle(4, (1, 1, 0, 0)) == set(GL4_NUS)
    assert gl_polygon_oracle(2, (1, 0)) == {F(1, 0), F("1/2", "1/2")}
    assert gl_polygon_oracle(1, (3,)) == {F(3)}


def _brute_oracle(n, mu):
    """Every choice of integral breakpoints under p_mu whose segment slopes strictly decrease."""
    top = polygon_values(mu)
    end = top[-1]
    out = set()
    lo = min(0, end)
    for ys in itertools.product(*[range(int(lo) - 1, int(top[x]) + 1) for x in range(1, n)]):
        pts = [0, *ys, end]
        for keep in itertools.product([0, 1], repeat=n - 1):
            xs = [0] + [i + 1 for i in range(n - 1) if keep[i]] + [n]
            seg = []
            for a, b in zip(xs, xs[1:]):
                seg += [Fraction(pts[b] - pts[a], b - a)] * (b - a)
            if all(seg[a] > seg[b] for a, b in zip(xs[:-1], xs[1:-1])):
                if all(v <= t for v, t in zip(polygon_values(seg), top)):
                    out.add(tuple(seg))
    return out


def test_oracle_matches_brute_force_small():
    for n in range(1, 4):
        for mu in itertools.product(range(3), repeat=n):
            if list(mu) != sorted(mu, reverse=True):
                continue
            assert gl_polygon_oracle(n, mu) == _brute_oracle(n, mu), mu


def test_breakpoints_and_blocks():
    assert breakpoints(F(1, "1/3", "1/3", "1/3")) == [(0, 0), (1, 1), (4, 2)]
    assert isoclinic_blocks(F("1/2", "1/2", "1/2", "1/2")) == [(Fraction(1, 2), 2)]
    assert slope_defect(F("1/2", "1/2", "1/2", "1/2")) == 2
    assert slope_defect(F(1, "1/3", "1/3", "1/3")) == 2
    assert slope_defect(F(2, 1, 0)) == 0


def test_integral_point_example():
    assert integral_points_between(F("1/2", "1/2", "1/2", "1/2"), F(1, 1, 0, 0)) == 3
    assert integral_points_between(F(1, 1, 0, 0), F(1, 1, 0, 0)) == 0


@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=1, max_size=5))
def test_leq_reflexive_and_sorted(nu):
    assert gl_leq(nu, nu)
    assert gl_leq(sorted(nu), nu[::-1])
    avg = sum(nu) / len(nu)
    assert gl_leq([avg] * len(nu), nu)
