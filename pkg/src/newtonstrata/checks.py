"""Cross-checks between the enumerated poset, its oracles and the closed formulas.

Every check returns a list of findings instead of raising, so one run
reports everything it sees. Severity ``fail`` is a real discrepancy;
``warn`` marks a formula evaluated outside its known domain.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from . import linalg as la
from .errors import NewtonStrataError
from .polygons import gl_polygon_oracle, integral_points_between
from .rootdata import RootDatum, fmt_vec
from .strata import (TYPE_A_FAMILIES, StrataPoset, _to_gl, auxiliary_cocharacters, defect, defect_derived,
                     enumerate_bg_mu, floor_pairings, newton_leq_convex_oracle, strata_table)

FAIL = "fail"
WARN = "warn"


@dataclass(frozen=True)
class Finding:
    severity: str
    check: str
    message: str
    data: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _label(poset: StrataPoset, i: int) -> str:
    return poset.classes[i].label()


def check_partial_order(poset: StrataPoset) -> list[Finding]:
    m = poset.leq_matrix
    out = []
    if not np.all(np.diag(m)):
        out.append(Finding(FAIL, "order", "relation is not reflexive"))
    anti = m & m.T & ~np.eye(len(poset), dtype=bool)
    if anti.any():
        i, j = np.argwhere(anti)[0]
        out.append(Finding(FAIL, "order", f"{_label(poset, i)} and {_label(poset, j)} are mutually below"))
    two = (m.astype(np.int64) @ m.astype(np.int64)) > 0
    if (two & ~m).any():
        out.append(Finding(FAIL, "order", "relation is not transitive"))
    return out


def check_convex_oracle(poset: StrataPoset) -> list[Finding]:
    d = poset.datum
    out = []
    for i, j in itertools.product(range(len(poset)), repeat=2):
        a, b = poset.classes[i].nu, poset.classes[j].nu
        if bool(poset.leq_matrix[i, j]) != newton_leq_convex_oracle(d, a, b):
            out.append(Finding(FAIL, "convex-oracle", f"coroot-cone and convex-hull tests disagree on "
                               f"{fmt_vec(a)} <= {fmt_vec(b)}"))
    return out


def check_extrema(poset: StrataPoset) -> list[Finding]:
    try:
        poset.top()
        poset.bottom()
    except NewtonStrataError as exc:
        return [Finding(FAIL, "extrema", str(exc))]
    return []


def check_ranked(poset: StrataPoset) -> list[Finding]:
    longest, shortest = poset.chain_lengths
    out = []
    bad = np.argwhere(longest != shortest)
    for i, j in bad[:5]:
        out.append(Finding(FAIL, "ranked", f"maximal chains from {_label(poset, i)} to {_label(poset, j)} "
                           f"have lengths {shortest[i, j]}..{longest[i, j]}"))
    if not poset.is_graded():
        out.append(Finding(FAIL, "ranked", "some cover does not raise the rank by one"))
    return out


def _unique_extremum(bounds: np.ndarray, above: np.ndarray) -> np.ndarray:
    """Per row of `bounds` (a set of bounds), whether exactly one bound sits below/above all the others.

    above[u, v] must say that u is on the right side of v.
    """
    b = bounds.astype(np.int32)
    # u qualifies when it is a bound and no bound v violates above[u, v]
    bad = b @ (~above).T.astype(np.int32)
    return ((bounds & (bad == 0)).sum(axis=1)) == 1


def check_lattice(poset: StrataPoset, max_subset: int = 3) -> list[Finding]:
    """sup and inf exist for every subset of size <= max_subset (every subset if <= 12 classes)."""
    m = poset.leq_matrix
    n = len(poset)
    sizes = range(1, n + 1) if n <= 12 else range(1, min(max_subset, n) + 1)
    out = []
    for k in sizes:
        combos = itertools.combinations(range(n), k)
        while True:
            chunk = np.array(list(itertools.islice(combos, 50_000)), dtype=np.int64)
            if chunk.size == 0:
                break
            upper = np.all(m[chunk, :], axis=1)  # v above every member
            lower = np.all(m.T[chunk, :], axis=1)  # v below every member
            ok = _unique_extremum(upper, m) & _unique_extremum(lower, m.T)
            for row in chunk[~ok][:5]:
                out.append(Finding(FAIL, "lattice", "no unique sup/inf for "
                                   + ", ".join(_label(poset, i) for i in row)))
            if len(out) >= 5:
                return out
    return out


def check_length_formula(poset: StrataPoset) -> list[Finding]:
    d = poset.datum
    longest, _ = poset.chain_lengths
    domain = d.formula_domain_ok()
    out = []
    mismatches = []
    floors = floor_pairings(d, [c.nu for c in poset.classes]).sum(axis=1)
    formula = floors[None, :] - floors[:, None]  # [i, j]: value for classes[i] below classes[j]
    for i, j in np.argwhere((longest >= 0) & (formula != longest)):
        a, b = poset.classes[i].nu, poset.classes[j].nu
        val = int(formula[i, j])
        if val != longest[i, j]:
            mismatches.append({"lower": fmt_vec(a), "upper": fmt_vec(b), "poset": int(longest[i, j]), "formula": val})
    if not domain:
        msg = f"{d.name}: fundamental-weight orbit sums pair fractionally with X_*; floor-sum formula is outside its domain"
        if mismatches:
            ex = mismatches[0]
            msg += f" (e.g. {ex['lower']} to {ex['upper']}: poset {ex['poset']}, formula {ex['formula']})"
        out.append(Finding(WARN, "formula-domain", msg, {"mismatches": mismatches[:10]}))
    else:
        for ex in mismatches[:5]:
            out.append(Finding(FAIL, "length-formula", f"{ex['lower']} to {ex['upper']}: poset length "
                               f"{ex['poset']} but floor-sum gives {ex['formula']}", ex))
    return out


def check_integral_points(poset: StrataPoset) -> list[Finding]:
    """Type A only: floor-sum length equals the lattice-point count between polygons."""
    d = poset.datum
    if d.family not in TYPE_A_FAMILIES:
        return []
    longest, _ = poset.chain_lengths
    out = []
    for i, j in np.argwhere(longest >= 0):
        a, b = _to_gl(d, poset.classes[i].nu), _to_gl(d, poset.classes[j].nu)
        count = integral_points_between(a, b)
        if count != longest[i, j]:
            out.append(Finding(FAIL, "integral-points", f"{fmt_vec(a)} to {fmt_vec(b)}: {count} lattice points "
                               f"but poset length {longest[i, j]}"))
    return out


def check_polygon_oracle(poset: StrataPoset) -> list[Finding]:
    d = poset.datum
    if d.family != "gl":
        return []
    got = {c.nu for c in poset.classes}
    want = gl_polygon_oracle(d.rank, poset.mu)
    if got == want:
        return []
    return [Finding(FAIL, "polygon-oracle", f"enumeration and polygon oracle differ: "
                    f"{len(got - want)} extra, {len(want - got)} missing")]


def check_defect(poset: StrataPoset, aux: int = 3) -> list[Finding]:
    """Derived defect is independent of mu*, and matches the slope rule in type A."""
    d = poset.datum
    out = []
    stars = auxiliary_cocharacters(d, poset.mu, count=aux)
    for cls in poset.classes:
        vals = {}
        for ms in stars:
            try:
                vals[fmt_vec(ms)] = defect_derived(d, cls.nu, cls.kappa, ms)
            except NewtonStrataError as exc:
                out.append(Finding(FAIL, "defect", f"{cls.label()} with mu*={fmt_vec(ms)}: {exc}"))
        if len(set(vals.values())) > 1:
            out.append(Finding(FAIL, "defect", f"derived defect of {cls.label()} depends on mu*", {"values": vals}))
        if d.family in TYPE_A_FAMILIES and vals:
            slope = defect(d, cls.nu)
            derived = next(iter(vals.values()))
            if slope != derived:
                out.append(Finding(FAIL, "defect", f"{cls.label()}: slope rule gives {slope}, "
                                   f"poset gives {derived}"))
    return out


def check_dimensions(poset: StrataPoset) -> list[Finding]:
    d = poset.datum
    try:
        rows = strata_table(d, poset.mu)
    except NewtonStrataError as exc:
        return [Finding(FAIL, "dimensions", str(exc))]
    out = []
    total = 2 * d.pair(poset.mu, d.rho)
    for r in rows:
        if r.dim_stratum + r.codim_stratum != total:
            out.append(Finding(FAIL, "dimensions", f"{r.cls.label()}: dim + codim != <2rho, mu>"))
        if r.dim_stratum != r.dim_adlv + r.dim_central_leaf:
            out.append(Finding(FAIL, "dimensions", f"{r.cls.label()}: dim != dim X_mu(b) + dim C"))
        expect = d.pair(la.vsub(poset.mu, r.cls.nu), d.rho) + Fraction(r.defect, 2)
        if r.codim_stratum != expect:
            out.append(Finding(FAIL, "codimension", f"{r.cls.label()}: length to mu {r.codim_stratum} "
                               f"but <rho, mu - nu> + def/2 = {expect}"))
    return out


ALL_CHECKS = ("order", "extrema", "ranked", "lattice", "length-formula", "integral-points",
              "polygon-oracle", "defect", "dimensions", "convex-oracle")


def run_checks(datum: RootDatum, mu, convex_oracle: bool = False, defect_aux: int = 3) -> list[Finding]:
    """All cross-identities for B(datum, mu). The convex-hull oracle runs only when requested."""
    try:
        poset = enumerate_bg_mu(datum, mu)
    except NewtonStrataError as exc:
        return [Finding(FAIL, "enumeration", str(exc))]
    findings = []
    findings += check_partial_order(poset)
    findings += check_extrema(poset)
    findings += check_ranked(poset)
    findings += check_lattice(poset)
    findings += check_length_formula(poset)
    findings += check_integral_points(poset)
    findings += check_polygon_oracle(poset)
    findings += check_defect(poset, defect_aux)
    findings += check_dimensions(poset)
    if convex_oracle:
        findings += check_convex_oracle(poset)
    return findings


def has_failures(findings) -> bool:
    return any(f.severity == FAIL for f in findings)
