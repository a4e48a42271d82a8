"""Matrices over F_{q^m}((eps)): Cartan invariant, Newton point, Kottwitz point."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from ..errors import DatumError, InvariantViolation, NonStabilizingError, SingularMatrixError
from .field import DEFAULT_SUPPORT_CEILING, FiniteField, LaurentPoly


@dataclass(frozen=True, eq=False)
class LaurentMatrix:
    field: FiniteField
    entries: tuple[tuple[LaurentPoly, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        if n == 0 or any(len(row) != n for row in self.entries):
            raise ValueError("matrix must be square and nonempty")
        object.__setattr__(self, "entries", tuple(tuple(row) for row in self.entries))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return isinstance(other, LaurentMatrix) and self.entries == other.entries

    def __repr__(self):
        return "LaurentMatrix(" + "; ".join(", ".join(map(repr, r)) for r in self.entries) + ")"

    # -- constructors ------------------------------------------------------------

    @classmethod
    def identity(cls, f: FiniteField, n: int) -> LaurentMatrix:
        one, zero = LaurentPoly.monomial(f, 0), LaurentPoly.zero(f)
        return cls(f, tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, f: FiniteField, exps: Sequence[int]) -> LaurentMatrix:
        zero = LaurentPoly.zero(f)
        n = len(exps)
        return cls(f, tuple(tuple(LaurentPoly.monomial(f, int(exps[i])) if i == j else zero
                                  for j in range(n)) for i in range(n)))

    @classmethod
    def from_exponents(cls, f: FiniteField, rows) -> LaurentMatrix:
        """Shorthand for 0/1-coefficient monomial entries: None is zero, k is eps^k."""
        zero = LaurentPoly.zero(f)
        return cls(f, tuple(tuple(zero if k is None else LaurentPoly.monomial(f, k) for k in row) for row in rows))

    # -- arithmetic --------------------------------------------------------------

    def __matmul__(self, other: LaurentMatrix) -> LaurentMatrix:
        return self.mul_truncated(other, None)

    def mul_truncated(self, other: LaurentMatrix, bound: int | None) -> LaurentMatrix:
        n = self.n
        if other.n != n:
            raise ValueError("size mismatch")
        zero = LaurentPoly.zero(self.field)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                row.append(acc if bound is None else acc.truncate(bound))
            rows.append(tuple(row))
        return LaurentMatrix(self.field, tuple(rows))

    def sigma(self, times: int = 1) -> LaurentMatrix:
        return LaurentMatrix(self.field, tuple(tuple(e.sigma(times) for e in row) for row in self.entries))

    def shift(self, k: int) -> LaurentMatrix:
        return LaurentMatrix(self.field, tuple(tuple(e.shift(k) for e in row) for row in self.entries))

    def min_valuation(self) -> float:
        return min(e.valuation for row in self.entries for e in row)

    def sigma_norm(self) -> LaurentMatrix:
        """M sigma(M) ... sigma^{m-1}(M)."""
        out = self
        for k in range(1, self.field.m):
            out = out @ self.sigma(k)
        return out

    def charpoly(self) -> list[LaurentPoly]:
        """Coefficients [1, c_1, ..., c_n] of det(x - M) = x^n + c_1 x^{n-1} + ... (Berkowitz)."""
        n = self.n
        a = self.entries
        f = self.field
        one, zero = LaurentPoly.monomial(f, 0), LaurentPoly.zero(f)
        vec = [one]
        for r in range(n):
            t = [one, -a[r][r]]
            v = [a[i][r] for i in range(r)]
            for k in range(r):
                t.append(-_dot(a[r][:r], v, zero))
                if k < r - 1:
                    v = [_dot(a[i][:r], v, zero) for i in range(r)]
            # new = T vec with T the lower-triangular Toeplitz matrix of t
            vec = [_dot([t[i - j] for j in range(max(0, i - len(t) + 1), min(i, r) + 1)],
                        vec[max(0, i - len(t) + 1): min(i, r) + 1], zero) for i in range(r + 2)]
        return vec

    def det(self) -> LaurentPoly:
        c = self.charpoly()[-1]
        return c if self.n % 2 == 0 else -c

    def to_dict(self) -> dict:
        f = self.field
        return {"q": f.q, "m": f.m, "modulus": list(f.modulus), "n": self.n,
                "entries": [[e.terms() for e in row] for row in self.entries]}


def _dot(u, v, zero):
    acc = zero
    for x, y in zip(u, v):
        if not x.is_zero() and not y.is_zero():
            acc = acc + x * y
    return acc


def matrix_from_dict(d: dict) -> LaurentMatrix:
    try:
        q, n = int(d["q"]), int(d["n"])
        m = int(d.get("m", 1))
        modulus = d.get("modulus")
        f = FiniteField(q, m, tuple(int(c) for c in modulus) if modulus is not None else None)
        rows = d["entries"]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise DatumError(f"entries must be an {n}x{n} array")
        return LaurentMatrix(f, tuple(tuple(LaurentPoly.from_terms(f, e) for e in row) for row in rows))
    except KeyError as exc:
        raise DatumError(f"matrix file is missing field {exc}") from None


def load_matrix(path: str | Path) -> LaurentMatrix:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DatumError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return matrix_from_dict(data)


# -- Cartan invariant --------------------------------------------------------------


def _det_valuation_bound(mat: LaurentMatrix) -> int:
    """Upper bound for v(det) of a matrix with entries in F[[eps]]: sum of row degrees."""
    total = 0
    for row in mat.entries:
        d = max((e.degree for e in row), default=-math.inf)
        if d == -math.inf:
            raise SingularMatrixError("matrix has a zero row")
        total += int(d)
    return total


def _elementary_divisors(rows: list[list[LaurentPoly]], bound: int) -> list[int] | None:
    """Pivot valuations of a matrix over F[[eps]] / eps^bound; None if some divisor is >= bound.

    Each step takes an entry of least valuation v as pivot, writes it as
    u eps^v with u a unit and clears its column with the division-free
    update row_j <- u row_j - (a_j / eps^v) row_i.  The pivot row is then
    dropped: its other entries can be cleared by column operations that
    touch nothing else.
    """
    rows = [[e.truncate(bound) for e in row] for row in rows]
    cols = list(range(len(rows)))
    out = []
    while rows:
        best = None
        for i, row in enumerate(rows):
            for j in cols:
                v = row[j].valuation
                if v < bound and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            return None
        v, i, j = best
        prow = rows.pop(i)
        unit = prow[j].shift(-v)
        new_rows = []
        for row in rows:
            a = row[j]
            if a.is_zero():
                new_rows.append(row)
                continue
            fac = a.shift(-v)
            new_rows.append([(unit * row[k] - fac * prow[k]).truncate(bound) if k != j else row[k]
                             for k in range(len(row))])
        rows = new_rows
        cols.remove(j)
        out.append(int(v))
    return out


def cartan_invariant(mat: LaurentMatrix) -> tuple[int, ...]:
    """The dominant mu with mat in K mu(eps) K, K = GL_n(F_{q^m}[[eps]])."""
    low = mat.min_valuation()
    if low == math.inf:
        raise SingularMatrixError("zero matrix")
    low = int(low)
    shifted = mat.shift(-low)
    bound = _det_valuation_bound(shifted) + 1
    divs = _elementary_divisors([list(r) for r in shifted.entries], bound)
    if divs is None:
        raise SingularMatrixError("matrix is singular")
    return tuple(sorted((d + low for d in divs), reverse=True))


def kappa_gl(mat: LaurentMatrix) -> int:
    d = mat.det()
    if d.is_zero():
        raise SingularMatrixError("matrix is singular")
    return int(d.valuation)


# -- Newton point -------------------------------------------------------------------


def newton_slopes_from_valuations(vals: Sequence[float]) -> list[Fraction]:
    """Valuations of the roots of x^n + c_1 x^{n-1} + ... + c_n given v(c_0=1), v(c_1), ..., v(c_n).

    Lower convex hull of the points (n - k, v(c_k)); a hull edge of slope s
    and width w gives w roots of valuation -s.
    """
    n = len(vals) - 1
    pts = [(n - k, vals[k]) for k in range(n + 1) if vals[k] != math.inf]
    pts.sort()
    if pts[0][0] != 0:
        raise SingularMatrixError("constant term vanishes: matrix is singular")
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = Fraction(int(y2 - y1), x2 - x1)
        out.extend([-s] * (x2 - x1))
    return sorted(out, reverse=True)


def newton_point_charpoly(mat: LaurentMatrix) -> tuple[Fraction, ...]:
    """Slopes of (L^n, mat.sigma): Newton polygon of charpoly of the sigma-norm, divided by m."""
    low = mat.min_valuation()
    if low == math.inf:
        raise SingularMatrixError("zero matrix")
    low = int(low)
    norm = mat.shift(-low).sigma_norm()
    coeffs = norm.charpoly()
    slopes = newton_slopes_from_valuations([c.valuation for c in coeffs])
    m = mat.field.m
    return tuple(s / m + low for s in slopes)


def _snap(x: Fraction, n: int) -> Fraction:
    return x.limit_denominator(n)


def newton_point_cartan_limit(mat: LaurentMatrix, max_doublings: int = 10, stable: int = 3) -> tuple[Fraction, ...]:
    """Newton point as the limit of Cartan(N(M)^j) / (j m) over j = 1, 2, 4, ...

    Each coordinate is snapped to the nearest fraction of denominator <= n
    and the snapped vector must repeat at `stable` consecutive checkpoints
    while the raw values are within 1/(2n^2) of it.
    """
    n = mat.n
    m = mat.field.m
    low = mat.min_valuation()
    if low == math.inf:
        raise SingularMatrixError("zero matrix")
    low = int(low)
    a = mat.shift(-low).sigma_norm()
    vdet = sum(cartan_invariant(a))
    history = []
    power = a
    j = 1
    for _ in range(max_doublings + 1):
        bound = j * vdet + 1
        divs = _elementary_divisors([list(r) for r in power.entries], bound)
        if divs is None:
            raise SingularMatrixError("power of the norm is singular")
        raw = sorted((Fraction(d, j) for d in divs), reverse=True)
        snapped = tuple(_snap(x, n) for x in raw)
        close = all(abs(x - s) <= Fraction(1, 2 * n * n) for x, s in zip(raw, snapped))
        history.append(snapped if close else None)
        if len(history) >= stable and history[-1] is not None and all(h == history[-1] for h in history[-stable:]):
            return tuple(s / m + low for s in snapped)
        # exact squaring: a truncated power would lose the precision the next check needs
        power = check_support(power @ power)
        j *= 2
    raise NonStabilizingError(f"Cartan-limit Newton point did not stabilize after {max_doublings} doublings")


def newton_point_gl(mat: LaurentMatrix, verify: bool = False) -> tuple[Fraction, ...]:
    nu = newton_point_charpoly(mat)
    if verify:
        other = newton_point_cartan_limit(mat)
        if other != nu:
            raise InvariantViolation(f"Newton methods disagree: charpoly {nu}, Cartan limit {other}")
    return nu


def check_support(mat: LaurentMatrix, ceiling: int = DEFAULT_SUPPORT_CEILING) -> LaurentMatrix:
    for row in mat.entries:
        for e in row:
            e.check_support(ceiling)
    return mat


def to_numpy_exponents(mat: LaurentMatrix) -> np.ndarray:
    """Valuation of each entry (inf for zero); handy for display."""
    return np.array([[e.valuation for e in row] for row in mat.entries], dtype=float)
