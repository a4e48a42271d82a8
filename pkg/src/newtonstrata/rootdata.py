"""Based root data of unramified groups with a Frobenius action.

Coordinates: a datum fixes a basis of the cocharacter lattice X_* once.
Cocharacters are tuples of ``Fraction`` in that basis; characters are
tuples in the dual coordinates, and ``pair`` evaluates the canonical
pairing through ``pairing_matrix``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Sequence

from . import linalg as la
from .errors import CoweightError, DatumError

FAMILIES = ("gl", "sl", "pgl", "gsp", "u")
MAX_WEYL_RANK = 8
MAX_ROOTS = 5000

Coweight = tuple  # tuple[Fraction, ...]


@dataclass(frozen=True)
class Pi1Element:
    coords: tuple[int, ...]
    invariants: tuple[int, ...] = field(compare=False, repr=False)

    def __str__(self):
        parts = []
        for c, d in zip(self.coords, self.invariants):
            parts.append(f"{c} mod {d}" if d else str(c))
        return "(" + ", ".join(parts) + ")" if len(parts) != 1 else parts[0]

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True)
class Pi1Group:
    """Presentation of the Frobenius coinvariants of X_* modulo coroots.

    ``invariants`` lists one entry per generator: the torsion order, or 0
    for a free generator. ``rows`` are the integer functionals on X_* that
    realize the projection.
    """

    invariants: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariants if d == 0)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariants if d)

    def is_trivial(self) -> bool:
        return not self.invariants

    def project(self, x: Sequence) -> Pi1Element:
        if not la.is_integral(x):
            raise CoweightError(f"cannot project non-integral cocharacter {fmt_vec(x)}")
        coords = []
        for row, d in zip(self.rows, self.invariants):
            val = int(la.dot(row, [int(Fraction(t)) for t in x]))
            coords.append(val % d if d else val)
        return Pi1Element(tuple(coords), self.invariants)

    def rational_image(self, v: Sequence) -> tuple[Fraction, ...]:
        """Image of a rational cocharacter in pi_1 (x) Q, i.e. the free coordinates."""
        return tuple(la.dot(row, la.fvec(v)) for row, d in zip(self.rows, self.invariants) if d == 0)

    def free_image(self, elem: Pi1Element) -> tuple[Fraction, ...]:
        return tuple(Fraction(c) for c, d in zip(elem.coords, self.invariants) if d == 0)

    def describe(self) -> str:
        if not self.invariants:
            return "0"
        parts = [f"Z/{d}Z" for d in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts)


@dataclass(frozen=True)
class RootDatum:
    rank: int
    simple_roots: tuple[tuple[int, ...], ...]
    simple_coroots: tuple[tuple[int, ...], ...]
    pairing_matrix: tuple[tuple[int, ...], ...]
    frobenius: tuple[tuple[int, ...], ...]
    name: str
    family: str | None = None
    # matrix from datum coordinates to diagonal GL_N coordinates, if any
    gl_embedding: tuple[tuple[int, ...], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        self._validate()

    # -- validation --------------------------------------------------------

    def _validate(self):
        r = self.rank
        if r < 1:
            raise DatumError("rank must be positive")
        if len(self.simple_roots) != len(self.simple_coroots):
            raise DatumError("need as many simple roots as simple coroots")
        for v in self.simple_roots + self.simple_coroots:
            if len(v) != r:
                raise DatumError(f"vector {v} does not have length {r}")
        for m, what in ((self.pairing_matrix, "pairing"), (self.frobenius, "frobenius")):
            if len(m) != r or any(len(row) != r for row in m):
                raise DatumError(f"{what} matrix must be {r}x{r}")
        if abs(la.det_int(self.pairing_matrix)) != 1:
            raise DatumError("pairing must be perfect (unimodular)")
        if abs(la.det_int(self.frobenius)) != 1:
            raise DatumError("frobenius must be a lattice automorphism")
        l = self.semisimple_rank
        if l and la.rank([list(c) for c in self.simple_coroots]) != l:
            raise DatumError("simple coroots must be linearly independent")
        a = self.cartan_matrix
        for i in range(l):
            if a[i][i] != 2:
                raise DatumError(f"<a_{i}^v, a_{i}> = {a[i][i]}, expected 2")
            for j in range(l):
                if i != j and (a[i][j] > 0 or (a[i][j] == 0) != (a[j][i] == 0)):
                    raise DatumError("not a generalized Cartan matrix")
        self.simple_permutation  # noqa: B018 - raises if frobenius does not permute
        self.frobenius_order  # noqa: B018
        if len(self._positive_root_coeffs) > MAX_ROOTS:
            raise DatumError("Weyl group is not finite")

    # -- basic structure ---------------------------------------------------

    @property
    def semisimple_rank(self) -> int:
        return len(self.simple_coroots)

    def pair(self, x: Sequence, y: Sequence) -> Fraction:
        """<x, y> for x in X_*, y in X^*."""
        if len(x) != self.rank or len(y) != self.rank:
            raise ValueError(f"dimension mismatch: expected {self.rank}, got {len(x)} and {len(y)}")
        if self._standard_pairing:
            return Fraction(la.dot(x, y))
        return Fraction(la.dot(x, la.matvec(self.pairing_matrix, y)))

    @cached_property
    def _standard_pairing(self) -> bool:
        return [list(r) for r in self.pairing_matrix] == la.identity(self.rank)

    @cached_property
    def cartan_matrix(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(self.pair(ci, aj)) for aj in self.simple_roots) for ci in self.simple_coroots)

    @cached_property
    def frobenius_dual(self) -> tuple[tuple[int, ...], ...]:
        # <F x, F* y> = <x, y>  =>  F* = P^{-1} F^{-T} P
        p = [list(r) for r in self.pairing_matrix]
        finv_t = la.transpose(la.inverse(self.frobenius))
        m = la.matmul(la.matmul(la.inverse(p), finv_t), p)
        if not all(x.denominator == 1 for row in m for x in row):
            raise DatumError("dual frobenius is not integral")
        return tuple(tuple(int(x) for x in row) for row in m)

    def apply_frobenius(self, x: Sequence) -> tuple:
        return la.matvec(self.frobenius, x)

    @cached_property
    def frobenius_order(self) -> int:
        m = la.identity(self.rank)
        for k in range(1, 25):
            m = la.matmul(self.frobenius, m)
            if m == la.identity(self.rank):
                return k
        raise DatumError("frobenius does not have finite order")

    @cached_property
    def simple_permutation(self) -> tuple[int, ...]:
        """pi with F(a_i^v) = a_{pi(i)}^v (and dually for simple roots)."""
        cor = [tuple(c) for c in self.simple_coroots]
        perm = []
        for i, c in enumerate(cor):
            img = la.matvec(self.frobenius, c)
            if img not in cor:
                raise DatumError(f"frobenius does not permute simple coroots (image of coroot {i})")
            j = cor.index(img)
            if la.matvec(self.frobenius_dual, self.simple_roots[i]) != tuple(self.simple_roots[j]):
                raise DatumError("frobenius does not permute simple roots compatibly")
            perm.append(j)
        return tuple(perm)

    @cached_property
    def orbits(self) -> tuple[tuple[int, ...], ...]:
        """Frobenius orbits on simple indices, each sorted, ordered by first index."""
        seen, out = set(), []
        for i in range(self.semisimple_rank):
            if i in seen:
                continue
            orb, j = [], i
            while j not in orb:
                orb.append(j)
                j = self.simple_permutation[j]
            seen.update(orb)
            out.append(tuple(sorted(orb)))
        return tuple(out)

    def gamma_average(self, x: Sequence) -> tuple[Fraction, ...]:
        acc = la.fvec(x)
        total = acc
        for _ in range(self.frobenius_order - 1):
            acc = la.matvec(self.frobenius, acc)
            total = la.vadd(total, acc)
        return la.vscale(Fraction(1, self.frobenius_order), total)

    @cached_property
    def frobenius_trivial(self) -> bool:
        return [list(r) for r in self.frobenius] == la.identity(self.rank)

    def is_frobenius_invariant(self, x: Sequence) -> bool:
        if self.frobenius_trivial:
            if len(x) != self.rank:
                raise ValueError(f"dimension mismatch: expected {self.rank}, got {len(x)}")
            return True
        return la.fvec(self.apply_frobenius(x)) == la.fvec(x)

    # -- Weyl group --------------------------------------------------------

    def reflect(self, i: int, x: Sequence) -> tuple[Fraction, ...]:
        x = la.fvec(x)
        c = self.pair(x, self.simple_roots[i])
        return la.vsub(x, la.vscale(c, self.simple_coroots[i]))

    def reflect_character(self, i: int, y: Sequence) -> tuple[Fraction, ...]:
        y = la.fvec(y)
        c = self.pair(self.simple_coroots[i], y)
        return la.vsub(y, la.vscale(c, self.simple_roots[i]))

    def simple_pairings(self, x: Sequence) -> tuple[Fraction, ...]:
        return tuple(self.pair(x, a) for a in self.simple_roots)

    def is_dominant(self, x: Sequence) -> bool:
        return all(c >= 0 for c in self.simple_pairings(x))

    def dominant_rep(self, x: Sequence) -> tuple[Fraction, ...]:
        x = la.fvec(x)
        if len(x) != self.rank:
            raise ValueError(f"dimension mismatch: expected {self.rank}, got {len(x)}")
        while True:
            neg = next((i for i, c in enumerate(self.simple_pairings(x)) if c < 0), None)
            if neg is None:
                return x
            x = self.reflect(neg, x)

    def weyl_orbit(self, x: Sequence) -> set[tuple[Fraction, ...]]:
        if self.rank > MAX_WEYL_RANK:
            raise DatumError(f"orbit enumeration limited to rank <= {MAX_WEYL_RANK}")
        start = la.fvec(x)
        orbit = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for v in frontier:
                for i in range(self.semisimple_rank):
                    w = self.reflect(i, v)
                    if w not in orbit:
                        orbit.add(w)
                        nxt.append(w)
            frontier = nxt
        return orbit

    @cached_property
    def weyl_group(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """All Weyl group elements as integer matrices acting on X_*."""
        if self.rank > MAX_WEYL_RANK:
            raise DatumError(f"Weyl group enumeration limited to rank <= {MAX_WEYL_RANK}")
        gens = []
        for i in range(self.semisimple_rank):
            pa = la.matvec(self.pairing_matrix, self.simple_roots[i])
            gens.append(tuple(tuple(int(r == c) - self.simple_coroots[i][r] * pa[c]
                                    for c in range(self.rank)) for r in range(self.rank)))
        ident = tuple(tuple(row) for row in la.identity(self.rank))
        group = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for g in frontier:
                for s in gens:
                    h = tuple(tuple(row) for row in la.matmul(s, g))
                    if h not in group:
                        group.add(h)
                        nxt.append(h)
            frontier = nxt
        return tuple(sorted(group))

    # -- roots, rho, weights -----------------------------------------------

    def _closure(self, cartan_rows) -> list[tuple[int, ...]]:
        l = self.semisimple_rank
        simple = [tuple(int(i == j) for j in range(l)) for i in range(l)]
        found = set(simple)
        frontier = list(simple)
        while frontier:
            nxt = []
            for c in frontier:
                for i in range(l):
                    k = sum(c[j] * cartan_rows(i, j) for j in range(l))
                    if k == 0:
                        continue
                    d = tuple(c[j] - (k if j == i else 0) for j in range(l))
                    if all(t >= 0 for t in d) and d not in found:
                        found.add(d)
                        nxt.append(d)
                if len(found) > MAX_ROOTS:
                    return sorted(found)
            frontier = nxt
        return sorted(found, key=lambda c: (sum(c), c))

    @cached_property
    def _positive_root_coeffs(self) -> list[tuple[int, ...]]:
        a = self.cartan_matrix
        return self._closure(lambda i, j: a[i][j])

    @cached_property
    def positive_roots(self) -> tuple[tuple[int, ...], ...]:
        out = []
        for c in self._positive_root_coeffs:
            out.append(tuple(sum(c[j] * self.simple_roots[j][k] for j in range(len(c))) for k in range(self.rank)))
        return tuple(out)

    @cached_property
    def positive_coroots(self) -> tuple[tuple[int, ...], ...]:
        a = self.cartan_matrix
        coeffs = self._closure(lambda i, j: a[j][i])
        out = []
        for c in coeffs:
            out.append(tuple(sum(c[j] * self.simple_coroots[j][k] for j in range(len(c))) for k in range(self.rank)))
        return tuple(out)

    @cached_property
    def rho(self) -> tuple[Fraction, ...]:
        total = (0,) * self.rank
        for r in self.positive_roots:
            total = la.vadd(total, r)
        return la.vscale(Fraction(1, 2), total)

    @cached_property
    def _dual_basis(self):
        """Complement of the coroots in X_*, and the dual basis of X^*_Q.

        Returns (complement vectors, fundamental weights, central characters).
        """
        r, l = self.rank, self.semisimple_rank
        cor = [list(c) for c in self.simple_coroots]
        cols = la.transpose(cor) if l else [[] for _ in range(r)]
        index = 1
        if l:
            _, d, _ = la.smith_normal_form(cols)
            for i in range(l):
                index *= d[i][i]
        # prefer standard basis vectors, scanning from the last one
        picks = []
        for k in reversed(range(r)):
            if l + len(picks) == r:
                break
            e = [int(t == k) for t in range(r)]
            if la.rank(cor + picks + [e]) == l + len(picks) + 1:
                picks.append(e)
        if abs(la.det_int(cor + picks)) != index:
            u, _, _ = la.smith_normal_form(cols)
            uinv = la.inverse(u)
            picks = [[int(uinv[row][k]) for row in range(r)] for k in range(l, r)]
        basis = cor + picks  # rows are basis vectors of X_*_Q
        # Y with <b_i, y_j> = delta_ij:  B P Y = I
        bp = la.matmul(basis, [list(row) for row in self.pairing_matrix])
        y = la.inverse(bp)
        dual = [tuple(y[k][j] for k in range(r)) for j in range(r)]
        return tuple(tuple(p) for p in picks), tuple(dual[:l]), tuple(dual[l:])

    @property
    def fundamental_weights(self) -> tuple[tuple[Fraction, ...], ...]:
        """Absolute fundamental weights: <a_i^v, w_j> = delta_ij, vanishing on a fixed complement."""
        return self._dual_basis[1]

    @property
    def central_characters(self) -> tuple[tuple[Fraction, ...], ...]:
        """Basis of characters vanishing on every coroot."""
        return self._dual_basis[2]

    @cached_property
    def fundamental_weight_orbit_sums(self) -> tuple[tuple[Fraction, ...], ...]:
        omegas = self.fundamental_weights
        out = []
        for orb in self.orbits:
            total = (Fraction(0),) * self.rank
            for i in orb:
                total = la.vadd(total, omegas[i])
            out.append(total)
        seen = set()
        for z in self.central_characters:
            total = la.fvec(z)
            acc = la.fvec(z)
            for _ in range(self.frobenius_order - 1):
                acc = la.matvec(self.frobenius_dual, acc)
                total = la.vadd(total, acc)
            if any(total) and total not in seen:
                seen.add(total)
                out.append(total)
        return tuple(out)

    def formula_domain_ok(self) -> bool:
        """True when every orbit sum pairs integrally with X_*."""
        return self._formula_domain

    @cached_property
    def _formula_domain(self) -> bool:
        return all(la.is_integral(la.matvec(self.pairing_matrix, w)) for w in self.fundamental_weight_orbit_sums)

    @cached_property
    def _paired_dual(self):
        # P.w for the fundamental weights and central characters, so coordinates are plain dots
        p = self.pairing_matrix
        return (tuple(la.matvec(p, w) for w in self.fundamental_weights),
                tuple(la.matvec(p, z) for z in self.central_characters))

    def coroot_coords(self, x: Sequence) -> tuple[Fraction, ...] | None:
        """Coefficients of x in the simple coroots, or None if x is outside their span."""
        if len(x) != self.rank:
            raise ValueError(f"dimension mismatch: expected {self.rank}, got {len(x)}")
        fund, cent = self._paired_dual
        if any(la.dot(x, z) != 0 for z in cent):
            return None
        return tuple(Fraction(la.dot(x, w)) for w in fund)

    def central_part(self, x: Sequence) -> tuple[Fraction, ...]:
        """Projection of x onto the orthogonal of all roots along the coroots."""
        x = la.fvec(x)
        c = self.coroot_coords_any(x)
        for ci, cor in zip(c, self.simple_coroots):
            x = la.vsub(x, la.vscale(ci, cor))
        return x

    def coroot_coords_any(self, x: Sequence) -> tuple[Fraction, ...]:
        # coefficients t with <x - sum t_k a_k^v, a_j> = 0 for all j
        a = self.cartan_matrix
        l = self.semisimple_rank
        if not l:
            return ()
        rhs = [self.pair(x, aj) for aj in self.simple_roots]
        at = [[a[k][j] for k in range(l)] for j in range(l)]
        return la.solve(at, rhs)

    @cached_property
    def pi1(self) -> Pi1Group:
        return pi1_coinvariants(self)

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "rank": self.rank,
            "simple_roots": [list(v) for v in self.simple_roots],
            "simple_coroots": [list(v) for v in self.simple_coroots],
            "pairing": [list(v) for v in self.pairing_matrix],
            "frobenius": [list(v) for v in self.frobenius],
        }


def pi1_coinvariants(datum: RootDatum) -> Pi1Group:
    r = datum.rank
    cols = [list(c) for c in datum.simple_coroots]
    f = datum.frobenius
    for k in range(r):
        col = [int(i == k) - f[i][k] for i in range(r)]
        if any(col):
            cols.append(col)
    if not cols:
        rows = la.hermite_rows(la.identity(r))
        return Pi1Group(tuple([0] * r), tuple(tuple(x) for x in rows))
    rel = la.transpose(cols)  # r x (#relations)
    u, d, _ = la.smith_normal_form(rel)
    diag = [d[i][i] for i in range(min(r, len(cols)))]
    s = sum(1 for x in diag if x)
    torsion_rows, invariants = [], []
    for i in range(s):
        if diag[i] > 1:
            row = [x % diag[i] for x in u[i]]
            lead = next(x for x in row if x)
            # rescale by a unit so the leading entry becomes gcd(lead, d)
            g = _gcd(lead, diag[i])
            unit = next(k for k in range(1, diag[i]) if _gcd(k, diag[i]) == 1 and (k * lead) % diag[i] == g)
            torsion_rows.append(tuple((unit * x) % diag[i] for x in row))
            invariants.append(diag[i])
    free_rows = la.hermite_rows(u[s:]) if s < r else []
    rows = torsion_rows + [tuple(x) for x in free_rows]
    invariants += [0] * len(free_rows)
    return Pi1Group(tuple(invariants), tuple(rows))


def _gcd(a, b):
    import math
    return math.gcd(a, b)


# -- presets -----------------------------------------------------------------


def _e(n, i):
    return tuple(int(j == i) for j in range(n))


def _diff(n, i, j):
    return tuple(int(k == i) - int(k == j) for k in range(n))


def _ident(n):
    return tuple(tuple(row) for row in la.identity(n))


def preset(family: str, n: int) -> RootDatum:
    """Root datum for gl_n, sl_n, pgl_n, gsp_n (n = 2g) or quasi-split unitary u_n."""
    family = family.lower()
    if family not in FAMILIES:
        raise DatumError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    if n < 1:
        raise DatumError("size must be positive")
    if family == "gl":
        cor = tuple(_diff(n, i, i + 1) for i in range(n - 1))
        return RootDatum(n, cor, cor, _ident(n), _ident(n), f"gl{n}", "gl", _ident(n))
    if family == "sl":
        if n < 2:
            raise DatumError("sl needs n >= 2")
        r = n - 1
        cor = tuple(_e(r, i) for i in range(r))
        roots = tuple(tuple(2 if k == j else (-1 if abs(k - j) == 1 else 0) for k in range(r)) for j in range(r))
        emb = tuple(tuple(int(k == i) - int(k == i + 1) for i in range(r)) for k in range(n))
        return RootDatum(r, roots, cor, _ident(r), _ident(r), f"sl{n}", "sl", emb)
    if family == "pgl":
        if n < 2:
            raise DatumError("pgl needs n >= 2")
        r = n - 1
        # basis: images of e_1..e_{n-1}; e_n = -(e_1 + ... + e_{n-1})
        cor = [_diff(r, i, i + 1) for i in range(r - 1)]
        cor.append(tuple(1 + int(k == r - 1) for k in range(r)))
        # dual basis f_k = e_k - e_n of the sum-zero character lattice
        roots = [_diff(r, i, i + 1) for i in range(r - 1)] + [_e(r, r - 1)]
        return RootDatum(r, tuple(roots), tuple(cor), _ident(r), _ident(r), f"pgl{n}", "pgl")
    if family == "gsp":
        if n % 2:
            raise DatumError("gsp takes the even size 2g")
        g = n // 2
        r = g + 1
        cor = [_diff(r, i, i + 1) for i in range(g - 1)] + [_e(r, g - 1)]
        roots = [_diff(r, i, i + 1) for i in range(g - 1)]
        roots.append(tuple(2 if k == g - 1 else (-1 if k == g else 0) for k in range(r)))
        emb = [_e(r, i) for i in range(g)]
        emb += [tuple(int(k == g) - int(k == g - 1 - i) for k in range(r)) for i in range(g)]
        return RootDatum(r, tuple(roots), tuple(cor), _ident(r), _ident(r), f"gsp{n}", "gsp", tuple(emb))
    # quasi-split unitary: GL_n coordinates, frobenius x -> -w0 x
    if n < 2:
        raise DatumError("u needs n >= 2")
    cor = tuple(_diff(n, i, i + 1) for i in range(n - 1))
    frob = tuple(tuple(-int(j == n - 1 - i) for j in range(n)) for i in range(n))
    return RootDatum(n, cor, cor, _ident(n), frob, f"u{n}", "u", _ident(n))


# -- file format -------------------------------------------------------------


def _int_matrix(rows, what) -> tuple[tuple[int, ...], ...]:
    out = []
    for row in rows:
        vals = la.fvec(row)
        if not la.is_integral(vals):
            raise DatumError(f"{what} entries must be integers, got {row}")
        out.append(tuple(int(v) for v in vals))
    return tuple(out)


def datum_from_dict(d: dict) -> RootDatum:
    try:
        rank = int(d["rank"])
        roots = _int_matrix(d["simple_roots"], "simple_roots")
        coroots = _int_matrix(d["simple_coroots"], "simple_coroots")
    except KeyError as exc:
        raise DatumError(f"root-datum document lacks field {exc.args[0]!r}") from None
    pairing = _int_matrix(d["pairing"], "pairing") if d.get("pairing") is not None else _ident(rank)
    frob = _int_matrix(d["frobenius"], "frobenius") if d.get("frobenius") is not None else _ident(rank)
    return RootDatum(rank, roots, coroots, pairing, frob, str(d.get("name", "custom")), None)


def load_datum(path: str | Path) -> RootDatum:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DatumError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return datum_from_dict(doc)


# -- formatting ----------------------------------------------------------------


def fmt_frac(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_vec(v) -> str:
    return "(" + ",".join(fmt_frac(x) for x in v) + ")"


def all_frobenius_stable_subsets(datum: RootDatum):
    """Every union of Frobenius orbits of simple indices, as frozensets."""
    orbs = datum.orbits
    for mask in itertools.product((0, 1), repeat=len(orbs)):
        yield frozenset(i for bit, orb in zip(mask, orbs) if bit for i in orb)
