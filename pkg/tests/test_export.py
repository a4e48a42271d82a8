from __future__ import annotations

import json
from fractions import Fraction

from newtonstrata import enumerate_bg_mu, preset, strata_table
from newtonstrata.export import (SCHEMA_VERSION, TABLE_COLUMNS, envelope, hasse_graph, jsonable, table_rows, to_csv,
                                 to_dot, to_json, to_markdown)


def _doc():
    d = preset("gl", 4)
    p = enumerate_bg_mu(d, (1, 1, 0, 0))
    recs = strata_table(d, (1, 1, 0, 0))
    return p, recs, envelope("table", {"seed": 0}, group="gl:4", mu=list(p.mu), rows=table_rows(p, recs))


def test_jsonable():
    assert jsonable({"a": (Fraction(1, 3), 2)}) == {"a": ["1/3", 2]}
    assert jsonable(Fraction(4, 2)) == "2"


def test_envelope_and_json():
    _, _, doc = _doc()
    assert doc["schema"] == "newtonstrata/table" and doc["schema_version"] == SCHEMA_VERSION
    text = to_json(doc)
    assert json.loads(text) == doc and text == to_json(json.loads(text))


def test_csv_and_markdown():
    _, _, doc = _doc()
    text = to_csv(doc, TABLE_COLUMNS, doc["rows"])
    lines = text.splitlines()
    header = [l for l in lines if l.startswith("# ")]
    assert len(header) == 5 and lines[len(header)] == ",".join(TABLE_COLUMNS)
    assert len(lines) == len(header) + 1 + 5
    md = to_markdown(doc, TABLE_COLUMNS, doc["rows"], "t")
    assert md.count("\n| ") == 6
    assert "(no rows)" in to_markdown(doc, TABLE_COLUMNS, [], "t")


def test_hasse_graph_and_dot():
    p, recs, doc = _doc()
    g = hasse_graph(p, recs)
    assert len(g["nodes"]) == 5 and len(g["edges"]) == 5
    index = {n["id"]: n for n in g["nodes"]}
    for a, b in g["edges"]:  # larger -> smaller
        assert index[a]["rank"] == index[b]["rank"] + 1
    assert g["edges"] == sorted(g["edges"], key=lambda e: (int(e[0][1:]), int(e[1][1:])))
    dot = to_dot(doc, g, "B")
    assert dot.count(" -> ") == 5 and dot.rstrip().endswith("}")
