"""Random elements of K mu(eps) K, random sigma-conjugations and the Mazur experiment.

Every draw uses its own generator seeded by (seed, index), so results do
not depend on the order in which draws are evaluated.
"""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..errors import CoweightError, RejectionBudgetError
from ..polygons import gl_leq, gl_polygon_oracle
from .field import FiniteField, LaurentPoly, field_of
from .matrix import LaurentMatrix, cartan_invariant, kappa_gl, newton_point_gl

REJECTION_BUDGET = 1000


def draw_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(index)])


def random_poly(f: FiniteField, rng: np.random.Generator, degree_bound: int, low: int = 0) -> LaurentPoly:
    c = rng.integers(0, f.q, size=(degree_bound + 1, f.m))
    return LaurentPoly(f, low, c)


def random_k(f: FiniteField, n: int, rng: np.random.Generator, degree_bound: int,
             budget: int = REJECTION_BUDGET) -> LaurentMatrix:
    """Polynomial matrix whose constant term is invertible, i.e. an element of GL_n(O)."""
    for _ in range(budget):
        entries = tuple(tuple(random_poly(f, rng, degree_bound) for _ in range(n)) for _ in range(n))
        const = LaurentMatrix(f, tuple(tuple(e.truncate(1) for e in row) for row in entries))
        if not const.det().is_zero():
            return LaurentMatrix(f, entries)
    raise RejectionBudgetError(f"no invertible constant term in {budget} draws (q={f.q}, n={n})")


def random_in_double_coset(n: int, mu: Sequence[int], seed: int, degree_bound: int = 2, index: int = 0,
                           f: FiniteField | None = None) -> LaurentMatrix:
    """k1 mu(eps) k2 with k1, k2 random in GL_n(O)."""
    mu = [int(x) for x in mu]
    if len(mu) != n:
        raise CoweightError(f"mu must have {n} entries")
    if any(a < b for a, b in zip(mu, mu[1:])):
        raise CoweightError(f"mu={mu} is not dominant")
    if degree_bound < 0:
        raise ValueError("degree bound must be nonnegative")
    f = f or field_of(3)
    rng = draw_rng(seed, index)
    k1 = random_k(f, n, rng, degree_bound)
    k2 = random_k(f, n, rng, degree_bound)
    return k1 @ LaurentMatrix.diagonal(f, mu) @ k2


# -- sigma-conjugation ----------------------------------------------------------------


def _elementary(f: FiniteField, n: int, i: int, j: int, t: LaurentPoly) -> LaurentMatrix:
    one, zero = LaurentPoly.monomial(f, 0), LaurentPoly.zero(f)
    return LaurentMatrix(f, tuple(tuple(one if r == c else (t if (r, c) == (i, j) else zero)
                                        for c in range(n)) for r in range(n)))


def _scaling(f: FiniteField, n: int, i: int, d: LaurentPoly) -> LaurentMatrix:
    one, zero = LaurentPoly.monomial(f, 0), LaurentPoly.zero(f)
    return LaurentMatrix(f, tuple(tuple((d if r == i else one) if r == c else zero
                                        for c in range(n)) for r in range(n)))


def _swap(f: FiniteField, n: int, i: int, j: int) -> LaurentMatrix:
    perm = list(range(n))
    perm[i], perm[j] = perm[j], perm[i]
    return LaurentMatrix.from_exponents(f, [[0 if perm[r] == c else None for c in range(n)] for r in range(n)])


def random_gl_element(f: FiniteField, n: int, rng: np.random.Generator, factors: int = 4,
                      degree_bound: int = 2) -> tuple[LaurentMatrix, LaurentMatrix]:
    """(g, g^-1) for g a product of elementary, swap and eps-monomial scaling matrices."""
    g = LaurentMatrix.identity(f, n)
    g_inv = LaurentMatrix.identity(f, n)
    for _ in range(factors):
        kind = rng.integers(0, 3) if n > 1 else 2
        if kind == 0:
            i, j = rng.choice(n, size=2, replace=False)
            t = random_poly(f, rng, degree_bound, low=int(rng.integers(-1, 2)))
            a, b = _elementary(f, n, i, j, t), _elementary(f, n, i, j, -t)
        elif kind == 1:
            i, j = rng.choice(n, size=2, replace=False)
            a = b = _swap(f, n, i, j)
        else:
            i = int(rng.integers(0, n))
            c = f.random_element(rng, nonzero=True)
            k = int(rng.integers(-1, 2))
            a = _scaling(f, n, i, LaurentPoly.monomial(f, k, c))
            b = _scaling(f, n, i, LaurentPoly.monomial(f, -k, f.inv(c)))
        g = g @ a
        g_inv = b @ g_inv
    return g, g_inv


def sigma_conjugate(mat: LaurentMatrix, g: LaurentMatrix, g_inv: LaurentMatrix) -> LaurentMatrix:
    """g^-1 mat sigma(g)."""
    return g_inv @ mat @ g.sigma()


def random_matrix(f: FiniteField, n: int, rng: np.random.Generator, degree_bound: int = 2,
                  exponent_range: tuple[int, int] = (-1, 2)) -> LaurentMatrix:
    """A random invertible matrix: k1 mu(eps) k2 with a random dominant mu."""
    lo, hi = exponent_range
    mu = sorted((int(x) for x in rng.integers(lo, hi + 1, size=n)), reverse=True)
    k1 = random_k(f, n, rng, degree_bound)
    k2 = random_k(f, n, rng, degree_bound)
    return k1 @ LaurentMatrix.diagonal(f, mu) @ k2


# -- Mazur experiment --------------------------------------------------------------------


@dataclass
class MazurReport:
    n: int
    mu: tuple[int, ...]
    samples: int
    seed: int
    degree_bound: int
    field: str
    counts: dict[tuple[Fraction, ...], int]
    violations: list[dict] = field(default_factory=list)
    expected: tuple[tuple[Fraction, ...], ...] = ()

    @property
    def observed(self) -> list[tuple[Fraction, ...]]:
        return sorted(self.counts, reverse=True)

    @property
    def unobserved(self) -> list[tuple[Fraction, ...]]:
        return [nu for nu in self.expected if nu not in self.counts]


def _one_draw(args):
    n, mu, seed, index, degree_bound, q, m = args
    f = field_of(q, m)
    mat = random_in_double_coset(n, mu, seed, degree_bound, index=index, f=f)
    return index, cartan_invariant(mat), newton_point_gl(mat), kappa_gl(mat)


def worker_count() -> int:
    raw = os.environ.get("NEWTONSTRATA_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"NEWTONSTRATA_WORKERS must be a positive integer, got {raw!r}") from None


def mazur_experiment(n: int, mu: Sequence[int], samples: int, seed: int, degree_bound: int = 2,
                     q: int = 3, m: int = 1, workers: int | None = None) -> MazurReport:
    """Draw `samples` elements of K mu(eps) K and check nu <= mu and kappa = sum(mu) on each."""
    mu = tuple(int(x) for x in mu)
    if samples < 0:
        raise ValueError("samples must be nonnegative")
    f = field_of(q, m)
    jobs = [(n, mu, seed, i, degree_bound, q, m) for i in range(samples)]
    workers = workers or worker_count()
    if workers > 1 and samples > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_one_draw, jobs, chunksize=max(1, samples // (4 * workers))))
    else:
        results = [_one_draw(j) for j in jobs]
    results.sort(key=lambda r: r[0])
    counts: Counter = Counter()
    violations = []
    total = sum(mu)
    for index, cartan, nu, kappa in results:
        counts[nu] += 1
        problems = []
        if cartan != mu:
            problems.append(f"Cartan invariant {cartan} differs from mu")
        if not gl_leq(nu, mu):
            problems.append("nu is not below mu")
        if kappa != total:
            problems.append(f"kappa {kappa} differs from sum(mu) = {total}")
        if problems:
            violations.append({"index": index, "nu": nu, "kappa": kappa, "problems": problems})
    expected = tuple(sorted(gl_polygon_oracle(n, mu), reverse=True))
    return MazurReport(n, mu, samples, seed, degree_bound, f.describe(), dict(counts), violations, expected)
