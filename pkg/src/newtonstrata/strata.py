"""The ranked poset B(G, mu) and the length, defect and dimension formulas.

The enumerated poset is the ground truth. Closed formulas are evaluated
separately and compared against it by the callers (see ``checks``).
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import linalg as la
from .errors import CoweightError, FormulaDomainWarning, InvariantViolation, NotComparableError
from .polygons import slope_defect
from .rootdata import Pi1Element, RootDatum, all_frobenius_stable_subsets, fmt_vec

TYPE_A_FAMILIES = ("gl", "sl")


@dataclass(frozen=True, order=False)
class SigmaConjClass:
    nu: tuple[Fraction, ...]
    kappa: Pi1Element

    def label(self) -> str:
        return fmt_vec(self.nu)

    def __str__(self):
        return f"[nu={fmt_vec(self.nu)}, kappa={self.kappa}]"


@dataclass(frozen=True)
class StrataRecord:
    cls: SigmaConjClass
    defect: int
    length_to_mu: int
    dim_adlv: int
    dim_central_leaf: int
    dim_stratum: int
    codim_stratum: int


# -- order -------------------------------------------------------------------


def newton_leq(datum: RootDatum, a: Sequence, b: Sequence) -> bool:
    """a <= b: b - a is a nonnegative rational combination of positive coroots."""
    if len(a) != datum.rank or len(b) != datum.rank:
        raise ValueError(f"{datum.name}: expected vectors of length {datum.rank}")
    coords = datum.coroot_coords(la.vsub(la.fvec(b), la.fvec(a)))
    return coords is not None and all(c >= 0 for c in coords)


def newton_leq_convex_oracle(datum: RootDatum, a: Sequence, b: Sequence) -> bool:
    """Whether the convex hull of W.b contains a (hence the hull of W.a).

    Decided by a floating-point LP feasibility problem over the orbit
    points; independent of the coroot-cone test in ``newton_leq``.
    """
    from scipy.optimize import linprog

    pts = sorted(datum.weyl_orbit(b))
    k = len(pts)
    a_eq = np.array([[float(p[i]) for p in pts] for i in range(datum.rank)] + [[1.0] * k])
    b_eq = np.array([float(x) for x in a] + [1.0])
    res = linprog(np.zeros(k), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * k, method="highs")
    return res.status == 0


def kappa_of_cochar(datum: RootDatum, mu: Sequence) -> Pi1Element:
    return datum.pi1.project(la.fvec(mu))


def _check_mu(datum: RootDatum, mu: Sequence) -> tuple[Fraction, ...]:
    mu = la.fvec(mu)
    if len(mu) != datum.rank:
        raise CoweightError(f"{datum.name}: mu must have {datum.rank} coordinates, got {len(mu)}")
    if not la.is_integral(mu):
        raise CoweightError(f"mu={fmt_vec(mu)} is not integral")
    if not datum.is_dominant(mu):
        raise CoweightError(f"mu={fmt_vec(mu)} is not dominant")
    if not datum.is_frobenius_invariant(mu):
        raise CoweightError(f"mu={fmt_vec(mu)} is not Frobenius-invariant")
    return mu


# -- the poset -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StrataPoset:
    datum: RootDatum
    mu: tuple[Fraction, ...]
    classes: tuple[SigmaConjClass, ...]
    # coroot coordinates of mu - nu, scaled to integers by a common denominator
    _coords: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.classes)

    def index(self, c: SigmaConjClass | Sequence) -> int:
        if not isinstance(c, SigmaConjClass):
            nu = la.fvec(c)
            for i, x in enumerate(self.classes):
                if x.nu == nu:
                    return i
            raise KeyError(f"{fmt_vec(nu)} not in B({self.datum.name}, {fmt_vec(self.mu)})")
        return self.classes.index(c)

    def find(self, nu: Sequence) -> SigmaConjClass:
        return self.classes[self.index(nu)]

    @cached_property
    def leq_matrix(self) -> np.ndarray:
        c = self._coords
        diff = c[:, None, :] - c[None, :, :]  # c_i - c_j >= 0  <=>  nu_i <= nu_j
        return np.all(diff >= 0, axis=2)

    def leq(self, a, b) -> bool:
        return bool(self.leq_matrix[self.index(a), self.index(b)])

    @cached_property
    def _topo(self) -> np.ndarray:
        # strictly smaller elements have strictly larger coordinate sums
        # bottom first
        return np.argsort(-self._coords.sum(axis=1), kind="stable")

    @cached_property
    def rank_list(self) -> tuple[int, ...]:
        """Length of the longest chain from the bottom to each element."""
        n = len(self.classes)
        lt = self.leq_matrix & ~np.eye(n, dtype=bool)
        rank = np.zeros(n, dtype=np.int64)
        for j in self._topo:
            below = lt[:, j]
            if below.any():
                rank[j] = rank[below].max() + 1
        return tuple(int(x) for x in rank)

    @property
    def rank_of(self) -> dict[SigmaConjClass, int]:
        return dict(zip(self.classes, self.rank_list))

    @cached_property
    def cover_matrix(self) -> np.ndarray:
        n = len(self.classes)
        lt = (self.leq_matrix & ~np.eye(n, dtype=bool)).astype(np.float32)
        two_step = (lt @ lt) > 0
        return (lt > 0) & ~two_step

    @cached_property
    def covers(self) -> tuple[tuple[SigmaConjClass, SigmaConjClass], ...]:
        """Cover relations (smaller, larger), canonically sorted."""
        idx = np.argwhere(self.cover_matrix)
        return tuple((self.classes[i], self.classes[j]) for i, j in sorted(map(tuple, idx)))

    @cached_property
    def chain_lengths(self) -> tuple[np.ndarray, np.ndarray]:
        """(longest, shortest) maximal-chain lengths between all pairs; -1 where a is not below b."""
        n = len(self.classes)
        cov = self.cover_matrix
        big = np.iinfo(np.int64).max
        longest = np.full((n, n), -1, dtype=np.int64)
        shortest = np.full((n, n), big, dtype=np.int64)
        np.fill_diagonal(longest, 0)
        np.fill_diagonal(shortest, 0)
        for k in self._topo:  # bottom first, so every cover below k is final
            preds = np.nonzero(cov[:, k])[0]
            if preds.size == 0:
                continue
            lp = longest[:, preds]
            sp = shortest[:, preds]
            reach = lp >= 0
            cand_long = np.where(reach, lp + 1, -1).max(axis=1)
            cand_short = np.where(reach, sp + 1, big).min(axis=1)
            off = np.arange(n) != k
            longest[off, k] = np.maximum(longest[off, k], cand_long[off])
            shortest[off, k] = np.minimum(shortest[off, k], cand_short[off])
        shortest[longest < 0] = -1
        return longest, shortest

    def is_graded(self) -> bool:
        r = np.array(self.rank_list)
        i, j = np.nonzero(self.cover_matrix)
        return bool(np.all(r[j] - r[i] == 1))

    @cached_property
    def _top(self) -> SigmaConjClass:
        return _find_top(self)

    def top(self) -> SigmaConjClass:
        return mu_ordinary(self)

    def bottom(self) -> SigmaConjClass:
        return basic(self)


@lru_cache(maxsize=4096)
def _levi_data(datum: RootDatum, J: frozenset):
    """Projection onto the M_J-central part and the step vectors of the free orbits."""
    a = datum.cartan_matrix
    cor = datum.simple_coroots
    jl = sorted(J)
    mat = [[a[k][j] for k in jl] for j in jl]
    inv = la.inverse(mat) if jl else []

    def proj(x):
        x = la.fvec(x)
        if not jl:
            return x
        rhs = [datum.pair(x, datum.simple_roots[j]) for j in jl]
        t = la.matvec(inv, rhs)
        for tk, k in zip(t, jl):
            x = la.vsub(x, la.vscale(tk, cor[k]))
        return x

    free = [orb for orb in datum.orbits if not set(orb) <= J]
    steps = []
    for orb in free:
        v = datum.coroot_coords(datum.gamma_average(proj(cor[orb[0]])))
        if any(v[i] != Fraction(1, len(orb)) for i in orb):
            raise InvariantViolation(f"unexpected Levi step vector for orbit {orb}")
        steps.append(v)
    return proj, free, steps


def _levi_candidates(datum: RootDatum, mu, central_c, J: frozenset) -> list[tuple[Fraction, ...]]:
    """Coroot coordinates of mu - nu for the M_J-basic Newton points in B(G, mu).

    nu ranges over Gamma-averages of M_J-central projections of mu minus
    coroot-lattice vectors; kept when G-dominant, J-regular (strictly
    positive off J) and below mu.
    """
    l = datum.semisimple_rank
    a = datum.cartan_matrix
    proj, free, steps = _levi_data(datum, J)
    base = datum.gamma_average(proj(mu))
    c0 = datum.coroot_coords(la.vsub(mu, base))
    ranges = []
    for orb in free:
        i, s = orb[0], len(orb)
        lo = math.ceil(-c0[i] * s)
        hi = math.floor((central_c[i] - c0[i]) * s)
        if hi < lo:
            return []
        ranges.append(range(lo, hi + 1))

    denom = 1
    for x in list(c0) + [t for v in steps for t in v]:
        denom = math.lcm(denom, x.denominator)
    c0_int = np.array([int(x * denom) for x in c0], dtype=np.int64)
    steps_int = np.array([[int(x * denom) for x in v] for v in steps], dtype=np.int64).reshape(len(steps), l)
    mu_pair = np.array([int(datum.pair(mu, al) * denom) for al in datum.simple_roots], dtype=np.int64)
    cartan = np.array(a, dtype=np.int64).reshape(l, l)
    off_j = np.array([i not in J for i in range(l)], dtype=bool)

    found = []
    grid_iter = itertools.product(*ranges)
    while True:
        chunk = list(itertools.islice(grid_iter, 200_000))
        if not chunk:
            break
        d = np.array(chunk, dtype=np.int64).reshape(len(chunk), len(ranges))
        c = c0_int[None, :] + d @ steps_int
        g = mu_pair[None, :] - c @ cartan  # <nu, alpha_i> * denom
        ok = np.all(c >= 0, axis=1) & np.all(g[:, off_j] > 0, axis=1)
        if J:
            ok &= np.all(g[:, ~off_j] == 0, axis=1)
        for row in c[ok]:
            found.append(tuple(Fraction(int(x), denom) for x in row))
    return found


@lru_cache(maxsize=512)
def _enumerate_cached(datum: RootDatum, mu: tuple[Fraction, ...]) -> StrataPoset:
    mu = _check_mu(datum, mu)
    kappa = kappa_of_cochar(datum, mu)
    l = datum.semisimple_rank
    central = datum.central_part(mu)
    central_c = datum.coroot_coords(la.vsub(mu, central)) if l else ()
    coords = set()
    for J in all_frobenius_stable_subsets(datum):
        coords.update(_levi_candidates(datum, mu, central_c, J))
    if not l:
        coords = {()}
    classes = []
    for c in coords:
        nu = la.fvec(mu)
        for ci, cv in zip(c, datum.simple_coroots):
            nu = la.vsub(nu, la.vscale(ci, cv))
        if not datum.is_dominant(nu) or not datum.is_frobenius_invariant(nu):
            raise InvariantViolation(f"enumerated non-dominant or non-invariant point {fmt_vec(nu)}")
        if datum.pi1.rational_image(nu) != datum.pi1.free_image(kappa):
            raise InvariantViolation(f"nu={fmt_vec(nu)} and kappa={kappa} disagree in pi_1 (x) Q")
        classes.append((nu, c))
    classes.sort(key=lambda t: t[0], reverse=True)
    denom = 1
    for _, c in classes:
        for x in c:
            denom = math.lcm(denom, x.denominator)
    arr = np.array([[int(x * denom) for x in c] for _, c in classes], dtype=np.int64).reshape(len(classes), l)
    return StrataPoset(datum, mu, tuple(SigmaConjClass(nu, kappa) for nu, _ in classes), arr)


def enumerate_bg_mu(datum: RootDatum, mu: Sequence) -> StrataPoset:
    """B(G, mu) as a poset, via the standard-Levi parametrization of the Newton lattice."""
    return _enumerate_cached(datum, la.fvec(mu))


# -- poset queries -------------------------------------------------------------


def mu_ordinary(poset: StrataPoset) -> SigmaConjClass:
    return poset._top


def _find_top(poset: StrataPoset) -> SigmaConjClass:
    m = poset.leq_matrix
    tops = [i for i in range(len(poset)) if m[:, i].all()]
    if len(tops) != 1:
        raise InvariantViolation(f"expected a unique maximum, found {len(tops)}")
    top = poset.classes[tops[0]]
    if top.nu != poset.datum.dominant_rep(poset.mu):
        raise InvariantViolation("maximal element differs from mu")
    return top


def basic(poset: StrataPoset) -> SigmaConjClass:
    m = poset.leq_matrix
    bots = [i for i in range(len(poset)) if m[i, :].all()]
    if len(bots) != 1:
        raise InvariantViolation(f"expected a unique minimum, found {len(bots)}")
    return poset.classes[bots[0]]


def length_poset(poset: StrataPoset, a, b) -> int:
    """Common length of all maximal chains from a to b (longest and shortest cover paths)."""
    i, j = poset.index(a), poset.index(b)
    m = poset.leq_matrix
    if not m[i, j]:
        raise NotComparableError(f"{poset.classes[i].label()} is not below {poset.classes[j].label()}")
    inside = m[i, :] & m[:, j]
    cov = poset.cover_matrix
    longest = {i: 0}
    shortest = {i: 0}
    for k in poset._topo:  # bottom-up
        if not inside[k] or k == i:
            continue
        preds = [p for p in np.nonzero(cov[:, k] & inside)[0] if p in longest]
        if preds:
            longest[k] = max(longest[p] for p in preds) + 1
            shortest[k] = min(shortest[p] for p in preds) + 1
    if longest[j] != shortest[j]:
        raise InvariantViolation(
            f"maximal chains from {poset.classes[i].label()} to {poset.classes[j].label()} "
            f"have lengths {shortest[j]}..{longest[j]}")
    return longest[j]


def sup_inf(poset: StrataPoset, subset: Iterable) -> tuple[SigmaConjClass, SigmaConjClass]:
    idx = [poset.index(s) for s in subset]
    if not idx:
        raise ValueError("subset must be nonempty")
    m = poset.leq_matrix
    upper = np.all(m[idx, :], axis=0)
    lower = np.all(m[:, idx], axis=1)
    ub = np.nonzero(upper)[0]
    lb = np.nonzero(lower)[0]
    sups = [u for u in ub if m[u, ub].all()]
    infs = [w for w in lb if m[lb, w].all()]
    if len(sups) != 1 or len(infs) != 1:
        raise InvariantViolation(f"no unique sup/inf for {[poset.classes[k].label() for k in idx]}")
    return poset.classes[sups[0]], poset.classes[infs[0]]


def closure_downset(poset: StrataPoset, c) -> set[SigmaConjClass]:
    i = poset.index(c)
    return {poset.classes[k] for k in np.nonzero(poset.leq_matrix[:, i])[0]}


# -- formulas ------------------------------------------------------------------


def length_formula(datum: RootDatum, a: Sequence, b: Sequence) -> int:
    """Floor-sum over Frobenius-orbit sums of fundamental weights."""
    if not newton_leq(datum, a, b):
        raise NotComparableError(f"{fmt_vec(a)} is not below {fmt_vec(b)}")
    if not datum.formula_domain_ok():
        warnings.warn(f"{datum.name}: fundamental weights pair fractionally with X_*; "
                      "floor-sum length is outside its domain", FormulaDomainWarning, stacklevel=2)
    total = 0
    for w in datum.fundamental_weight_orbit_sums:
        total += math.floor(datum.pair(b, w)) - math.floor(datum.pair(a, w))
    return total


def floor_pairings(datum: RootDatum, nus: Sequence[Sequence]) -> np.ndarray:
    """Matrix of floor(<nu, w>) over the given points and the orbit sums w."""
    ws = datum.fundamental_weight_orbit_sums
    return np.array([[math.floor(datum.pair(nu, w)) for w in ws] for nu in nus], dtype=np.int64).reshape(len(nus), len(ws))


def _to_gl(datum: RootDatum, v) -> tuple[Fraction, ...]:
    if datum.gl_embedding is None or datum.family == "gl":
        return la.fvec(v)
    return la.matvec(datum.gl_embedding, la.fvec(v))


def kappa_for(datum: RootDatum, nu: Sequence) -> Pi1Element:
    """The unique kappa compatible with nu, for data whose pi_1 is torsion-free."""
    g = datum.pi1
    if g.torsion:
        raise CoweightError(f"{datum.name}: pi_1 has torsion, kappa is not determined by nu")
    img = g.rational_image(nu)
    if not la.is_integral(img):
        raise CoweightError(f"nu={fmt_vec(nu)} has non-integral image in pi_1")
    return Pi1Element(tuple(int(x) for x in img), g.invariants)


def auxiliary_cocharacters(datum: RootDatum, mu: Sequence, count: int = 3, bound: int = 2) -> list[tuple[Fraction, ...]]:
    """Integral dominant invariant mu* >= mu with the same kappa.

    mu* = mu + sum of multiples (up to ``bound``) of dominant Frobenius-orbit
    sums of positive coroots, smallest first.
    """
    mu = la.fvec(mu)
    shifts = set()
    for g in datum.positive_coroots:
        total, acc = la.fvec(g), la.fvec(g)
        for _ in range(datum.frobenius_order - 1):
            acc = datum.apply_frobenius(acc)
            total = la.vadd(total, acc)
        if datum.is_dominant(total):
            shifts.add(total)
    shifts = sorted(shifts)
    out = {mu}
    for ks in itertools.product(range(bound + 1), repeat=len(shifts)):
        x = mu
        for k, s in zip(ks, shifts):
            x = la.vadd(x, la.vscale(k, s))
        out.add(x)
    return sorted(out, key=lambda x: (sum(abs(t) for t in la.vsub(x, mu)), x))[:count]


def _find_base(datum: RootDatum, nu, kappa) -> tuple[Fraction, ...]:
    offsets = (-1, 0, 1, 2)
    for shift in itertools.product(offsets, repeat=datum.rank):
        x = tuple(Fraction(math.floor(t) + s) for t, s in zip(nu, shift))
        if (datum.is_frobenius_invariant(x) and datum.is_dominant(x)
                and kappa_of_cochar(datum, x) == kappa and newton_leq(datum, nu, x)):
            return x
    raise CoweightError(f"no integral mu* above {fmt_vec(nu)} found within search bound")


def defect_derived(datum: RootDatum, nu: Sequence, kappa: Pi1Element, mu_star: Sequence) -> int:
    """2 * (length([nu, mu*]) - <rho, mu* - nu>), read off the poset B(G, mu*)."""
    mu_star = la.fvec(mu_star)
    poset = enumerate_bg_mu(datum, mu_star)
    cls = SigmaConjClass(la.fvec(nu), kappa)
    if cls not in poset.classes:
        raise CoweightError(f"{cls} is not in B({datum.name}, {fmt_vec(mu_star)})")
    longest, shortest = poset.chain_lengths
    i, top = poset.index(cls), poset.index(mu_ordinary(poset))
    if longest[i, top] != shortest[i, top]:
        raise InvariantViolation(f"maximal chains from {cls.label()} to the top have unequal lengths")
    length = int(longest[i, top])
    val = 2 * (length - datum.pair(la.vsub(mu_star, cls.nu), datum.rho))
    if val.denominator != 1 or val < 0:
        raise InvariantViolation(f"derived defect {val} of {cls} is not a nonnegative integer")
    return int(val)


def defect(datum: RootDatum, nu: Sequence, kappa: Pi1Element | None = None, mu_star: Sequence | None = None) -> int:
    """rk G minus the F-rank of J_b.

    Type A (gl, sl) uses the slope-denominator rule; other data derive it
    from the rank of the poset B(G, mu*).
    """
    nu = la.fvec(nu)
    if datum.family in TYPE_A_FAMILIES:
        return slope_defect(_to_gl(datum, nu))
    if kappa is None:
        kappa = kappa_for(datum, nu)
    if mu_star is None:
        mu_star = _find_base(datum, nu, kappa)
    return defect_derived(datum, nu, kappa, mu_star)


def strata_table(datum: RootDatum, mu: Sequence) -> list[StrataRecord]:
    poset = enumerate_bg_mu(datum, mu)
    mu = poset.mu
    rho = datum.rho
    two_rho_mu = 2 * datum.pair(mu, rho)
    top = mu_ordinary(poset)
    rows = []
    for cls in poset.classes:
        d = defect(datum, cls.nu, cls.kappa, mu)
        length = length_poset(poset, cls, top)
        adlv = datum.pair(la.vsub(mu, cls.nu), rho) - Fraction(d, 2)
        leaf = 2 * datum.pair(cls.nu, rho)
        for what, val in (("dim X_mu(b)", adlv), ("dim C", leaf)):
            if val.denominator != 1 or val < 0:
                raise InvariantViolation(f"{what} = {val} for {cls} is not a nonnegative integer")
        dim = adlv + leaf
        if dim != datum.pair(la.vadd(mu, cls.nu), rho) - Fraction(d, 2):
            raise InvariantViolation("almost-product identity failed")
        if dim + length != two_rho_mu:
            raise InvariantViolation(
                f"{cls}: dim {dim} + codim {length} != <2rho, mu> = {two_rho_mu}")
        rows.append(StrataRecord(cls, d, length, int(adlv), int(leaf), int(dim), length))
    return rows
