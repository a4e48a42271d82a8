"""The ten acceptance criteria, each printing one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import sys
import time
import warnings
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from newtonstrata import enumerate_bg_mu, gl_polygon_oracle, preset, strata_table  # noqa: E402
from newtonstrata.catalog import CATALOG, catalog_entries  # noqa: E402
from newtonstrata.checks import (WARN, check_defect, check_dimensions, check_integral_points,  # noqa: E402
                                 check_lattice, check_length_formula, check_ranked)
from newtonstrata.errors import FormulaDomainWarning  # noqa: E402
from newtonstrata.isocrystal import (cartan_invariant, field_of, kappa_gl, newton_point_cartan_limit,  # noqa: E402
                                     newton_point_charpoly, newton_point_gl)
from newtonstrata.isocrystal.kr import kr_realize_minuscule, monomial_newton_points, cyclic_b1  # noqa: E402
from newtonstrata.isocrystal.matrix import LaurentMatrix  # noqa: E402
from newtonstrata.isocrystal.sampling import (draw_rng, mazur_experiment, random_gl_element,  # noqa: E402
                                              random_matrix, sigma_conjugate)
from newtonstrata.strata import _enumerate_cached, _levi_data, basic, length_poset, mu_ordinary  # noqa: E402

from conftest import ACCEPTANCE_LINES, F, GL4_NUS  # noqa: E402

SEED = 20240601


def report(number: int, ok: bool, detail: str):
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _fresh():
    _enumerate_cached.cache_clear()
    _levi_data.cache_clear()


def _dominant_gl(n, top=3):
    return itertools.combinations_with_replacement(range(top, -1, -1), n)


def test_criterion_01_gl4_minuscule():
    _fresh()
    t = time.perf_counter()
    p = enumerate_bg_mu(preset("gl", 4), (1, 1, 0, 0))
    dt = time.perf_counter() - t
    covers = {(lo.nu, hi.nu) for lo, hi in p.covers}
    expected = {(GL4_NUS[1], GL4_NUS[0]), (GL4_NUS[2], GL4_NUS[1]), (GL4_NUS[3], GL4_NUS[1]),
                (GL4_NUS[4], GL4_NUS[2]), (GL4_NUS[4], GL4_NUS[3])}
    ok = {c.nu for c in p.classes} == set(GL4_NUS) and covers == expected and dt < 1
    report(1, ok, f"5 classes, 5 covers match the expected poset ({dt:.3f}s < 1s)")


def test_criterion_02_oracle_equivalence():
    _fresh()
    t = time.perf_counter()
    bad, count = [], 0
    for n in range(1, 7):
        d = preset("gl", n)
        for mu in _dominant_gl(n):
            count += 1
            if {c.nu for c in enumerate_bg_mu(d, mu).classes} != gl_polygon_oracle(n, mu):
                bad.append(mu)
    dt = time.perf_counter() - t
    report(2, not bad and dt < 60, f"{count} (n, mu) pairs, {len(bad)} mismatches ({dt:.1f}s < 60s)")


def test_criterion_03_ranked_and_lattice():
    _fresh()
    t = time.perf_counter()
    findings, posets = [], 0
    for _, d, mu in catalog_entries():
        p = enumerate_bg_mu(d, mu)
        posets += 1
        findings += check_ranked(p) + check_lattice(p, max_subset=3)
    dt = time.perf_counter() - t
    report(3, not findings and dt < 120, f"{posets} catalog posets, {len(findings)} findings ({dt:.1f}s < 120s)")


def test_criterion_04_length_formula():
    findings, pairs = [], 0
    for token, d, mu in catalog_entries():
        if d.family not in ("gl", "sl"):
            continue
        p = enumerate_bg_mu(d, mu)
        findings += check_length_formula(p)
        if d.family == "gl":
            findings += check_integral_points(p)
        pairs += int(p.leq_matrix.sum())
    d = preset("pgl", 2)
    p = enumerate_bg_mu(d, (1,))
    pgl_findings = check_length_formula(p)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        from newtonstrata import length_formula
        formula = length_formula(d, basic(p).nu, mu_ordinary(p).nu)
    warned = any(issubclass(w.category, FormulaDomainWarning) for w in caught)
    pgl_ok = (warned and formula == 0 and length_poset(p, basic(p), mu_ordinary(p)) == 1
              and pgl_findings and all(f.severity == WARN for f in pgl_findings))
    report(4, not findings and pgl_ok,
           f"{pairs} comparable gl/sl pairs exact, {len(findings)} findings; pgl:2 warns (length 1, formula {formula})")


def test_criterion_05_defect():
    _fresh()
    t = time.perf_counter()
    findings, classes = [], 0
    for n in range(1, 7):
        d = preset("gl", n)
        for mu in _dominant_gl(n):
            p = enumerate_bg_mu(d, mu)
            classes += len(p)
            findings += check_defect(p, aux=3)
    dt = time.perf_counter() - t
    report(5, not findings, f"{classes} classes, slope rule = derived defect over 3 auxiliary mu*, "
                            f"{len(findings)} findings ({dt:.1f}s)")


def test_criterion_06_dimensions():
    findings, classes = [], 0
    for _, d, mu in catalog_entries():
        p = enumerate_bg_mu(d, mu)
        classes += len(p)
        findings += check_dimensions(p)
    gsp = strata_table(preset("gsp", 4), (1, 1, 1))
    total = {r.dim_stratum + r.codim_stratum for r in gsp}
    basic_dim = min(gsp, key=lambda r: r.dim_stratum)
    gsp_ok = total == {3} and basic_dim.dim_stratum == 1 and basic_dim.cls.nu == F("1/2", "1/2", 1)
    report(6, not findings and gsp_ok, f"{classes} classes, {len(findings)} findings; gsp:4 minuscule total "
                                       f"{sorted(total)}, basic dim {basic_dim.dim_stratum}")


def test_criterion_07_mazur():
    t = time.perf_counter()
    parts, ok = [], True
    for mu in ((1, 0), (2, 1, 0), (1, 1, 0, 0)):
        rep = mazur_experiment(len(mu), mu, 1000, SEED)
        ok &= not rep.violations and sum(rep.counts.values()) == 1000
        parts.append(f"{mu}: {len(rep.violations)} violations")
    dt = time.perf_counter() - t
    report(7, ok and dt < 120, "; ".join(parts) + f" ({dt:.1f}s < 120s)")


def test_criterion_08_kr_minuscule():
    f = field_of(3)
    bad, witnesses, agree = [], 0, True
    for n in range(1, 7):
        for k in range(n + 1):
            mu = (1,) * k + (0,) * (n - k)
            classes = {c.nu for c in enumerate_bg_mu(preset("gl", n), mu).classes}
            for nu in classes:
                e = kr_realize_minuscule(n, mu, nu, verify=False)
                mat = e.matrix(f)
                if cartan_invariant(mat) != mu or newton_point_gl(mat) != nu:
                    bad.append((mu, nu))
                witnesses += 1
            agree &= set(monomial_newton_points(mu)) == classes
    report(8, not bad and agree, f"{witnesses} witnesses verified by the oracle, {len(bad)} failures; "
                                 f"exhaustive monomials = enumeration: {agree}")


def test_criterion_09_isocrystal_self_consistency():
    t = time.perf_counter()
    disagree = noninvariant = 0
    for i in range(200):
        rng = draw_rng(SEED, i)
        n, m = int(rng.integers(1, 5)), int(rng.integers(1, 4))
        f = field_of(int(rng.choice([2, 3, 5])), m)
        mat = random_matrix(f, n, rng, degree_bound=2)
        if newton_point_charpoly(mat) != newton_point_cartan_limit(mat):
            disagree += 1
    for i in range(200):
        rng = draw_rng(SEED + 1, i)
        n, m = int(rng.integers(1, 5)), int(rng.integers(1, 4))
        f = field_of(int(rng.choice([2, 3, 5])), m)
        mat = random_matrix(f, n, rng, degree_bound=1)
        g, g_inv = random_gl_element(f, n, rng)
        if newton_point_gl(sigma_conjugate(mat, g, g_inv)) != newton_point_gl(mat):
            noninvariant += 1
    dt = time.perf_counter() - t
    report(9, disagree == 0 and noninvariant == 0 and dt < 180,
           f"200 matrices: {disagree} disagreements; 200 sigma-conjugations: {noninvariant} changes ({dt:.1f}s < 180s)")


def test_criterion_10_pgl_example():
    f = field_of(3)
    bad = []
    for n in (2, 3, 4):
        b1 = cyclic_b1(n).matrix(f)
        power = LaurentMatrix.identity(f, n)
        pgl = preset("pgl", n)
        for ell in range(1, 2 * n + 1):
            power = power @ b1
            nu = newton_point_gl(power)
            # image in the pgl quotient: e_i - e_n coordinates of nu
            image = tuple(nu[i] - nu[-1] for i in range(n - 1))
            kappa = kappa_gl(power)
            k_pgl = pgl.pi1.project((kappa,) + (0,) * (n - 2)).coords[0]
            if nu != (Fraction(ell, n),) * n or any(image) or k_pgl != ell % n:
                bad.append((n, ell))
    report(10, not bad, f"b1^l for n in 2..4, l in 1..2n: nu image 0 and kappa = l mod n, {len(bad)} failures")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
