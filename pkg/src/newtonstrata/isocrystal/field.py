"""F_{q^m} as F_q[x]/(f) and Laurent polynomials over it.

Field elements are integer vectors of length m (coefficients of
1, x, ..., x^{m-1}). A Laurent polynomial is a valuation plus an integer
array of shape (length, m); row k holds the coefficient of eps^(val + k).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np
from scipy.signal import fftconvolve

from ..errors import DatumError, SupportCeilingError

# switch from direct to FFT convolution above this length
_FFT_THRESHOLD = 400
DEFAULT_SUPPORT_CEILING = 1 << 20


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, math.isqrt(q) + 1))


def _poly_mod(a: list[int], b: list[int], q: int) -> list[int]:
    """Remainder of a by monic b over F_q (coefficient lists, constant first)."""
    a = [x % q for x in a]
    db = len(b) - 1
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            for t in range(db + 1):
                a[k - db + t] = (a[k - db + t] - c * b[t]) % q
    return a[:db]


def is_irreducible(f: list[int], q: int) -> bool:
    """Trial division of monic f by every monic polynomial of degree <= deg f / 2."""
    m = len(f) - 1
    for d in range(1, m // 2 + 1):
        for low in itertools.product(range(q), repeat=d):
            if not any(_poly_mod(f, list(low) + [1], q)):
                return False
    return True


def least_irreducible(q: int, m: int) -> tuple[int, ...]:
    """Least monic irreducible of degree m, comparing coefficients from x^{m-1} down to 1."""
    if m == 1:
        return (0, 1)
    for high_first in itertools.product(range(q), repeat=m):
        f = list(reversed(high_first)) + [1]
        if f[0] and is_irreducible(f, q):
            return tuple(f)
    raise DatumError(f"no irreducible polynomial of degree {m} over F_{q}")


@dataclass(frozen=True)
class FiniteField:
    """F_{q^m} = F_q[x]/(modulus), modulus monic of degree m (constant term first)."""

    q: int
    m: int = 1
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        if not _is_prime(self.q):
            raise DatumError(f"q={self.q} is not prime")
        if self.m < 1:
            raise DatumError("extension degree must be positive")
        if self.modulus is None:
            object.__setattr__(self, "modulus", least_irreducible(self.q, self.m))
        f = tuple(int(c) % self.q for c in self.modulus)
        if len(f) != self.m + 1 or f[-1] != 1:
            raise DatumError(f"modulus must be monic of degree {self.m}")
        if self.m > 1 and not is_irreducible(list(f), self.q):
            raise DatumError(f"modulus {f} is reducible over F_{self.q}")
        object.__setattr__(self, "modulus", f)
        fr = self.frobenius_matrix
        power = np.eye(self.m, dtype=np.int64)
        for k in range(1, self.m + 1):
            power = power @ fr % self.q
            if k < self.m and np.array_equal(power, np.eye(self.m, dtype=np.int64)):
                raise DatumError("Frobenius has order smaller than m")
        if not np.array_equal(power, np.eye(self.m, dtype=np.int64)):
            raise DatumError("Frobenius does not have order m")

    @property
    def order(self) -> int:
        return self.q ** self.m

    @cached_property
    def reduction(self) -> np.ndarray:
        """(2m-1, m) matrix sending x^t to its residue mod the modulus."""
        rows = []
        for t in range(2 * self.m - 1):
            rows.append(_poly_mod([0] * t + [1], list(self.modulus), self.q) if t >= self.m
                         else [int(s == t) for s in range(self.m)])
        return np.array(rows, dtype=np.int64).reshape(2 * self.m - 1, self.m)

    @cached_property
    def frobenius_matrix(self) -> np.ndarray:
        """Right-multiplication matrix of c -> c^q on coefficient rows."""
        rows = []
        for t in range(self.m):
            basis = np.zeros(self.m, dtype=np.int64)
            basis[t] = 1
            rows.append(self.power(basis, self.q))
        return np.array(rows, dtype=np.int64).reshape(self.m, self.m)

    # -- scalar arithmetic ---------------------------------------------------

    def element(self, coeffs) -> np.ndarray:
        v = np.zeros(self.m, dtype=np.int64)
        c = np.asarray(list(coeffs), dtype=np.int64)
        if c.size > self.m:
            raise ValueError(f"element of F_{self.q}^{self.m} has at most {self.m} coefficients")
        v[: c.size] = c % self.q
        return v

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.convolve(a, b) @ self.reduction[: 2 * self.m - 1] % self.q

    def power(self, a: np.ndarray, k: int) -> np.ndarray:
        out = self.element([1])
        base = np.asarray(a, dtype=np.int64) % self.q
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def inv(self, a: np.ndarray) -> np.ndarray:
        if not np.any(a % self.q):
            raise ZeroDivisionError("zero has no inverse")
        return self.power(a, self.order - 2)

    def frob(self, a: np.ndarray) -> np.ndarray:
        return a @ self.frobenius_matrix % self.q

    def elements(self):
        for c in itertools.product(range(self.q), repeat=self.m):
            yield np.array(c, dtype=np.int64)

    def random_element(self, rng: np.random.Generator, nonzero: bool = False) -> np.ndarray:
        while True:
            v = rng.integers(0, self.q, size=self.m)
            if not nonzero or v.any():
                return v.astype(np.int64)

    def describe(self) -> str:
        if self.m == 1:
            return f"F_{self.q}"
        terms = [f"{c}" if k == 0 else (f"x^{k}" if c == 1 else f"{c}x^{k}")
                 for k, c in enumerate(self.modulus) if c]
        return f"F_{self.q}[x]/({' + '.join(reversed(terms))})"


@dataclass(frozen=True, eq=False)
class LaurentPoly:
    """Finite Laurent polynomial sum_k c_k eps^(val + k) over a FiniteField."""

    field: FiniteField
    val: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.int64).reshape(-1, self.field.m) % self.field.q
        live = c.any(axis=1)
        if live.size and live[0] and live[-1]:  # already trimmed
            object.__setattr__(self, "coeffs", c)
            object.__setattr__(self, "val", int(self.val))
            return
        nz = live.nonzero()[0]
        if nz.size == 0:
            object.__setattr__(self, "coeffs", c[:0])
            object.__setattr__(self, "val", 0)
            return
        object.__setattr__(self, "coeffs", c[nz[0]: nz[-1] + 1])
        object.__setattr__(self, "val", int(self.val) + int(nz[0]))

    # -- constructors ----------------------------------------------------------

    @classmethod
    def zero(cls, f: FiniteField) -> LaurentPoly:
        return cls(f, 0, np.zeros((0, f.m), dtype=np.int64))

    @classmethod
    def monomial(cls, f: FiniteField, k: int, c=(1,)) -> LaurentPoly:
        return cls(f, k, f.element(c)[None, :])

    @classmethod
    def from_terms(cls, f: FiniteField, terms) -> LaurentPoly:
        """From (exponent, coefficient vector) pairs; repeated exponents add."""
        terms = [(int(k), f.element(c)) for k, c in terms]
        if not terms:
            return cls.zero(f)
        lo = min(k for k, _ in terms)
        hi = max(k for k, _ in terms)
        arr = np.zeros((hi - lo + 1, f.m), dtype=np.int64)
        for k, c in terms:
            arr[k - lo] += c
        return cls(f, lo, arr)

    # -- queries ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.coeffs.shape[0] == 0

    @property
    def valuation(self) -> float:
        return math.inf if self.is_zero() else self.val

    @property
    def degree(self) -> float:
        return -math.inf if self.is_zero() else self.val + self.coeffs.shape[0] - 1

    def lowest(self) -> np.ndarray:
        return self.coeffs[0] if not self.is_zero() else np.zeros(self.field.m, dtype=np.int64)

    def coefficient(self, k: int) -> np.ndarray:
        i = k - self.val
        if self.is_zero() or i < 0 or i >= self.coeffs.shape[0]:
            return np.zeros(self.field.m, dtype=np.int64)
        return self.coeffs[i]

    def terms(self) -> list[tuple[int, list[int]]]:
        return [(self.val + i, [int(x) for x in row]) for i, row in enumerate(self.coeffs) if row.any()]

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return (self.field == other.field and self.val == other.val
                and np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.val, self.coeffs.tobytes()))

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k, c in self.terms():
            coef = _fmt_elem(c)
            parts.append(coef if k == 0 else f"{coef}*e^{k}" if coef != "1" else f"e^{k}")
        return " + ".join(parts)

    # -- arithmetic --------------------------------------------------------------

    def _check(self, other: LaurentPoly):
        if other.field != self.field:
            raise ValueError("Laurent polynomials over different fields")

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        self._check(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.val, other.val)
        hi = max(self.degree, other.degree)
        arr = np.zeros((hi - lo + 1, self.field.m), dtype=np.int64)
        arr[self.val - lo: self.val - lo + len(self.coeffs)] += self.coeffs
        arr[other.val - lo: other.val - lo + len(other.coeffs)] += other.coeffs
        return LaurentPoly(self.field, lo, arr)

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly(self.field, self.val, -self.coeffs)

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return self + (-other)

    def __mul__(self, other: LaurentPoly) -> LaurentPoly:
        self._check(other)
        if self.is_zero() or other.is_zero():
            return LaurentPoly.zero(self.field)
        f = self.field
        m = f.m
        prod = _kron_convolve(self.coeffs, other.coeffs, m, f.q)
        return LaurentPoly(f, self.val + other.val, prod @ f.reduction % f.q)

    def scale(self, c: np.ndarray) -> LaurentPoly:
        """Multiply by a field element."""
        return self * LaurentPoly(self.field, 0, np.asarray(c)[None, :])

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by eps^k."""
        return LaurentPoly(self.field, self.val + k, self.coeffs)

    def truncate(self, n: int) -> LaurentPoly:
        """Drop all terms of exponent >= n."""
        keep = max(0, min(len(self.coeffs), n - self.val))
        return LaurentPoly(self.field, self.val, self.coeffs[:keep])

    def sigma(self, times: int = 1) -> LaurentPoly:
        """Coefficientwise Frobenius, applied `times` times."""
        c = self.coeffs
        fr = self.field.frobenius_matrix
        for _ in range(times % self.field.m):
            c = c @ fr % self.field.q
        return LaurentPoly(self.field, self.val, c)

    def check_support(self, ceiling: int) -> LaurentPoly:
        if len(self.coeffs) > ceiling:
            raise SupportCeilingError(f"Laurent polynomial support {len(self.coeffs)} exceeds ceiling {ceiling}")
        return self


def _fmt_elem(c) -> str:
    if len(c) == 1 or not any(c[1:]):
        return str(c[0])
    terms = [f"{x}" if k == 0 else (f"x^{k}" if x == 1 else f"{x}x^{k}") for k, x in enumerate(c) if x]
    return "(" + "+".join(terms) + ")"


def _kron_convolve(a: np.ndarray, b: np.ndarray, m: int, q: int) -> np.ndarray:
    """Product of (la, m) and (lb, m) coefficient arrays; result has shape (la+lb-1, 2m-1)."""
    w = 2 * m - 1
    la, lb = a.shape[0], b.shape[0]
    if m == 1:
        flat_a, flat_b = a[:, 0], b[:, 0]
    else:
        pa = np.zeros((la, w), dtype=np.int64)
        pb = np.zeros((lb, w), dtype=np.int64)
        pa[:, :m] = a
        pb[:, :m] = b
        flat_a, flat_b = pa.ravel(), pb.ravel()
    if min(flat_a.size, flat_b.size) > _FFT_THRESHOLD:
        # entries < q and at most min(len) * m terms per sum: float64 is exact here
        prod = np.rint(fftconvolve(flat_a.astype(np.float64), flat_b.astype(np.float64))).astype(np.int64)
    else:
        prod = np.convolve(flat_a, flat_b)
    prod %= q
    total = (la + lb - 1) * w
    out = np.zeros(total, dtype=np.int64)
    out[: prod.size] = prod[:total]
    return out.reshape(la + lb - 1, w)


@lru_cache(maxsize=64)
def field_of(q: int, m: int = 1) -> FiniteField:
    return FiniteField(q, m)
