"""Explicit representatives of classes in B(GL_n, mu) inside K mu(eps) K."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import CoweightError, InvariantViolation
from ..polygons import gl_polygon_oracle
from .field import FiniteField, LaurentPoly, field_of
from .matrix import LaurentMatrix, cartan_invariant, newton_point_gl
from .sampling import draw_rng


@dataclass(frozen=True)
class MonomialElement:
    """Permutation w (0-based images) times diag(eps^a): e_i -> eps^{a_i} e_{w(i)}."""

    w: tuple[int, ...]
    a: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.w) != list(range(len(self.w))):
            raise ValueError(f"{self.w} is not a permutation")
        if len(self.a) != len(self.w):
            raise ValueError("exponent vector and permutation differ in length")

    @property
    def n(self) -> int:
        return len(self.w)

    @classmethod
    def from_cycles(cls, n: int, cycles: Sequence[Sequence[int]], a: Sequence[int]) -> MonomialElement:
        """Cycles in 1-based notation, e.g. [[1], [2, 3, 4]]."""
        w = list(range(n))
        for cyc in cycles:
            for x, y in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                w[x - 1] = y - 1
        return cls(tuple(w), tuple(int(x) for x in a))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(self.n):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            nxt = self.w[start]
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self.w[nxt]
            out.append(tuple(cyc))
        return out

    def cycle_notation(self) -> str:
        return "".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in self.cycles())

    def newton_point(self) -> tuple[Fraction, ...]:
        """Sorted cycle averages of a."""
        out = []
        for c in self.cycles():
            avg = Fraction(sum(self.a[i] for i in c), len(c))
            out.extend([avg] * len(c))
        return tuple(sorted(out, reverse=True))

    def matrix(self, f: FiniteField | None = None) -> LaurentMatrix:
        f = f or field_of(2)
        zero = LaurentPoly.zero(f)
        rows = [[zero] * self.n for _ in range(self.n)]
        for i in range(self.n):
            rows[self.w[i]][i] = LaurentPoly.monomial(f, self.a[i])
        return LaurentMatrix(f, tuple(tuple(r) for r in rows))

    def to_dict(self) -> dict:
        return {"w": self.cycle_notation(), "a": list(self.a)}


def cyclic_b1(n: int) -> MonomialElement:
    """e_i -> e_{i+1} for i < n and e_n -> eps e_1."""
    return MonomialElement(tuple((i + 1) % n for i in range(n)), tuple(int(i == n - 1) for i in range(n)))


def verify_witness(mat: LaurentMatrix, mu: Sequence[int], nu: Sequence[Fraction]) -> bool:
    return (cartan_invariant(mat) == tuple(sorted(mu, reverse=True))
            and newton_point_gl(mat) == tuple(Fraction(x) for x in nu))


def _check_target(n: int, mu: Sequence[int], nu: Sequence) -> tuple[tuple[int, ...], tuple[Fraction, ...]]:
    mu = tuple(int(x) for x in mu)
    nu = tuple(sorted((Fraction(x) for x in nu), reverse=True))
    if len(mu) != n or len(nu) != n:
        raise CoweightError(f"mu and nu must have {n} entries")
    if nu not in gl_polygon_oracle(n, sorted(mu, reverse=True)):
        raise CoweightError(f"nu={[str(x) for x in nu]} is not in B(GL_{n}, {list(mu)})")
    return mu, nu


def kr_realize_minuscule(n: int, mu: Sequence[int], nu: Sequence, split_blocks: bool = False,
                         verify: bool = True, f: FiniteField | None = None) -> MonomialElement:
    """Monomial element with exponent vector mu and Newton point nu, for mu with 0/1 entries.

    Default: integral slopes become fixed points, and every other slope s
    with multiplicity M becomes one M-cycle carrying s*M ones. With
    split_blocks, a slope p/q is split into M/q cycles of length q with p
    ones each.
    """
    mu, nu = _check_target(n, mu, nu)
    if any(x not in (0, 1) for x in mu):
        raise CoweightError(f"mu={list(mu)} is not minuscule with entries in {{0, 1}}")
    ones = [i for i in range(n) if mu[i] == 1]
    zeros = [i for i in range(n) if mu[i] == 0]
    cycles = []
    for s, mult in sorted(Counter(nu).items(), reverse=True):
        if split_blocks or s.denominator == 1:
            pieces = [(s.denominator, s.numerator)] * (mult // s.denominator)
        else:
            pieces = [(mult, s * mult)]
        for length, k in pieces:
            k = int(k)
            cyc = ones[:k] + zeros[: length - k]
            ones, zeros = ones[k:], zeros[length - k:]
            cycles.append(sorted(cyc))
    w = list(range(n))
    for cyc in cycles:
        for x, y in zip(cyc, cyc[1:] + cyc[:1]):
            w[x] = y
    elem = MonomialElement(tuple(w), mu)
    if elem.newton_point() != nu:
        raise InvariantViolation(f"constructed {elem.cycle_notation()} has Newton point {elem.newton_point()}")
    if verify and not verify_witness(elem.matrix(f), mu, nu):
        raise InvariantViolation(f"oracle rejects monomial witness {elem.cycle_notation()}")
    return elem


@dataclass(frozen=True)
class KRResult:
    status: str  # "monomial", "perturbed" or "inconclusive"
    nu: tuple[Fraction, ...]
    element: MonomialElement | None = None
    matrix: LaurentMatrix | None = None
    tries: int = 0

    @property
    def found(self) -> bool:
        return self.status != "inconclusive"


def monomial_newton_points(mu: Sequence[int]) -> dict[tuple[Fraction, ...], MonomialElement]:
    """Newton point -> first monomial element (w, mu) realizing it, over all w in S_n."""
    mu = tuple(int(x) for x in mu)
    out = {}
    for w in itertools.permutations(range(len(mu))):
        e = MonomialElement(w, mu)
        out.setdefault(e.newton_point(), e)
    return out


def kr_search_general(n: int, mu: Sequence[int], nu: Sequence, budget: int = 2000, seed: int = 0,
                      f: FiniteField | None = None, monomial_limit: int = 6) -> KRResult:
    """Find x in K mu(eps) K with Newton point nu.

    Minuscule mu goes to the direct construction. Otherwise every
    monomial (w, mu) is tried when n <= monomial_limit, then random sparse
    perturbations of monomial matrices, up to `budget` attempts. Failure
    is reported as inconclusive, never as a counterexample.
    """
    mu, nu = _check_target(n, mu, nu)
    f = f or field_of(3)
    lo, hi = min(mu), max(mu)
    if hi - lo <= 1:
        elem = kr_realize_minuscule(n, [x - lo for x in mu], [x - lo for x in nu], verify=False, f=f)
        elem = MonomialElement(elem.w, mu)
        if not verify_witness(elem.matrix(f), mu, nu):
            raise InvariantViolation(f"oracle rejects monomial witness {elem.cycle_notation()}")
        return KRResult("monomial", nu, elem, elem.matrix(f), 0)
    if n <= monomial_limit:
        hit = monomial_newton_points(mu).get(nu)
        if hit is not None:
            mat = hit.matrix(f)
            if not verify_witness(mat, mu, nu):
                raise InvariantViolation(f"oracle rejects monomial witness {hit.cycle_notation()}")
            return KRResult("monomial", nu, hit, mat, 0)
    # sparse perturbations: the Cartan check keeps the candidate inside K mu(eps) K
    for t in range(budget):
        rng = draw_rng(seed, t)
        w = tuple(int(x) for x in rng.permutation(n))
        base = MonomialElement(w, mu).matrix(f)
        rows = [list(r) for r in base.entries]
        for _ in range(int(rng.integers(1, 3))):
            i, j = (int(x) for x in rng.integers(0, n, size=2))
            k = int(rng.integers(lo, hi + 1))
            rows[i][j] = rows[i][j] + LaurentPoly.monomial(f, k, f.random_element(rng, nonzero=True))
        mat = LaurentMatrix(f, tuple(tuple(r) for r in rows))
        if mat.det().is_zero():
            continue
        if verify_witness(mat, mu, nu):
            return KRResult("perturbed", nu, None, mat, t + 1)
    return KRResult("inconclusive", nu, None, None, budget)
