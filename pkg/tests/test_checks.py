from __future__ import annotations

import numpy as np
import pytest

from newtonstrata import enumerate_bg_mu, preset
from newtonstrata.catalog import CATALOG, catalog_entries
from newtonstrata.checks import (FAIL, WARN, check_lattice, check_partial_order, check_ranked, has_failures,
                                 run_checks)
from newtonstrata.strata import SigmaConjClass, StrataPoset

from conftest import F


def _fake_poset(coords):
    """Poset on made-up classes ordered by the given coordinate vectors (larger coords = lower)."""
    d = preset("gl", len(coords[0]))
    kappa = d.pi1.project((0,) * d.rank)
    classes = tuple(SigmaConjClass(F(*([i] + [0] * (d.rank - 1))), kappa) for i in range(len(coords)))
    return StrataPoset(d, classes[0].nu, classes, np.array(coords, dtype=np.int64))


def test_gl4_clean():
    assert run_checks(preset("gl", 4), (1, 1, 0, 0), convex_oracle=True) == []


def test_gl1_vacuous():
    assert run_checks(preset("gl", 1), (2,)) == []


def test_pgl2_warns_without_failing():
    findings = run_checks(preset("pgl", 2), (1,))
    assert findings and all(f.severity == WARN for f in findings)
    assert any(f.check == "formula-domain" for f in findings)
    assert not has_failures(findings)


def test_lattice_negative_control():
    # top, a, b, c, d, bottom with c, d both below a and b: {c, d} has no least upper bound
    p = _fake_poset([(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 1, 0), (1, 1, 0, 1), (1, 1, 1, 1)])
    assert check_partial_order(p) == []
    found = check_lattice(p)
    assert found and all(f.severity == FAIL and f.check == "lattice" for f in found)


def test_ranked_negative_control():
    # chains top > a > bottom and top > b > c > bottom have different lengths
    p = _fake_poset([(0, 0, 0), (1, 0, 0), (0, 2, 0), (0, 3, 0), (4, 4, 0)])
    found = check_ranked(p)
    assert any(f.severity == FAIL for f in found)


@pytest.mark.parametrize("token", sorted(CATALOG))
def test_catalog_has_no_failures(token):
    for tok, d, mu in catalog_entries():
        if tok != token:
            continue
        findings = run_checks(d, mu)
        assert not has_failures(findings), [f.message for f in findings]
        if d.formula_domain_ok():
            assert findings == []


def test_catalog_covers_required_data():
    need = {f"gl:{n}" for n in range(2, 7)} | {f"sl:{n}" for n in range(2, 6)} | {f"pgl:{n}" for n in range(2, 5)}
    need |= {"gsp:4", "gsp:6", "u:3"}
    assert need <= set(CATALOG)


def test_findings_serialize():
    findings = run_checks(preset("pgl", 2), (1,))
    d = findings[0].to_dict()
    assert set(d) == {"severity", "check", "message", "data"}


def test_enumeration_feeds_checks():
    p = enumerate_bg_mu(preset("gsp", 6), (1, 1, 1, 1))
    assert check_partial_order(p) == [] and check_lattice(p) == [] and check_ranked(p) == []
