"""Type A: Newton polygons, enumerated directly.

Everything here works in diagonal GL_n coordinates and never touches the
root-datum machinery, so it can serve as an independent check on it.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from typing import Sequence


def polygon_values(nu: Sequence) -> list[Fraction]:
    """Values of the polygon p_nu at 0, 1, ..., n (slopes taken largest first)."""
    vals = [Fraction(0)]
    for x in sorted((Fraction(t) for t in nu), reverse=True):
        vals.append(vals[-1] + x)
    return vals


def breakpoints(nu: Sequence) -> list[tuple[int, Fraction]]:
    vals = polygon_values(nu)
    s = sorted((Fraction(t) for t in nu), reverse=True)
    pts = [(0, vals[0])]
    for i in range(1, len(s)):
        if s[i] != s[i - 1]:
            pts.append((i, vals[i]))
    pts.append((len(s), vals[-1]))
    return pts


def gl_leq(a: Sequence, b: Sequence) -> bool:
    """Polygon of b on or above polygon of a, same endpoints."""
    pa, pb = polygon_values(a), polygon_values(b)
    return pa[-1] == pb[-1] and all(x <= y for x, y in zip(pa, pb))


def gl_polygon_oracle(n: int, mu: Sequence[int]) -> set[tuple[Fraction, ...]]:
    """All concave polygons with integral breakpoints lying on or below p_mu with its endpoint."""
    mu = [Fraction(x) for x in mu]
    if len(mu) != n:
        raise ValueError(f"mu must have {n} entries")
    if any(x.denominator != 1 for x in mu):
        raise ValueError("mu must be integral")
    if n == 0:
        return {()}
    top = polygon_values(mu)
    end = top[-1]
    out = set()

    def extend(x, y, prev_slope, slopes):
        if x == n:
            if y == end:
                out.add(tuple(slopes))
            return
        for nx in range(x + 1, n + 1):
            # remaining polygon is concave and ends at (n, end): stays above that chord
            lo = math.ceil(y + (end - y) * Fraction(nx - x, n - x))
            hi = math.floor(top[nx])
            for ny in range(lo, hi + 1):
                s = Fraction(ny - y, nx - x)
                if prev_slope is not None and s >= prev_slope:
                    continue
                if nx == n and ny != end:
                    continue
                extend(nx, ny, s, slopes + [s] * (nx - x))

    extend(0, 0, None, [])
    return out


def slope_defect(nu: Sequence) -> int:
    """Sum over slopes p/q (lowest terms) of (#blocks) * (q - 1)."""
    total = 0
    for s, mult in Counter(Fraction(t) for t in nu).items():
        q = s.denominator
        if mult % q:
            raise ValueError(f"slope {s} has multiplicity {mult}, not divisible by {q}")
        total += (mult // q) * (q - 1)
    return total


def integral_points_between(lower: Sequence, upper: Sequence) -> int:
    """Lattice points on or below p_upper and strictly above p_lower."""
    pl, pu = polygon_values(lower), polygon_values(upper)
    count = 0
    for x in range(len(pl)):
        y = math.floor(pl[x]) + 1
        while y <= pu[x]:
            count += 1
            y += 1
    return count


def isoclinic_blocks(nu: Sequence) -> list[tuple[Fraction, int]]:
    """(slope, number of simple blocks) pairs, largest slope first."""
    out = []
    for s, mult in sorted(Counter(Fraction(t) for t in nu).items(), reverse=True):
        out.append((s, mult // s.denominator))
    return out
