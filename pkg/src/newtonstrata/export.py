"""Serialization of tables, Hasse diagrams and reports (json, csv, md, dot).

Output is deterministic: keys are sorted, rows follow the canonical class
order, and no timestamps are written. Every document carries the schema
version and the resolved run configuration.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any, Sequence

from .rootdata import fmt_frac, fmt_vec
from .strata import StrataPoset, StrataRecord

SCHEMA_VERSION = "1.0"
FORMATS = ("json", "csv", "dot", "md")


def jsonable(x: Any) -> Any:
    """Exact rationals become "p/q" strings; containers are converted recursively."""
    if isinstance(x, Fraction):
        return fmt_frac(x)
    if isinstance(x, bool) or x is None or isinstance(x, (str, float)):
        return x
    if isinstance(x, int):
        return int(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "item"):  # numpy scalar
        return x.item()
    return str(x)


def envelope(kind: str, config: dict, **body) -> dict:
    doc = {"schema": f"newtonstrata/{kind}", "schema_version": SCHEMA_VERSION, "config": config}
    doc.update(body)
    return jsonable(doc)


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _header(doc: dict) -> list[str]:
    lines = [f"schema: {doc['schema']}", f"schema_version: {doc['schema_version']}",
             f"config: {json.dumps(doc['config'], sort_keys=True)}"]
    for key in ("group", "mu"):
        if key in doc:
            lines.append(f"{key}: {json.dumps(doc[key])}")
    return lines


def to_csv(doc: dict, columns: Sequence[str], rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    for line in _header(doc):
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def to_markdown(doc: dict, columns: Sequence[str], rows: Sequence[dict], title: str) -> str:
    lines = [f"# {title}", ""]
    lines += [f"- {line}" for line in _header(doc)]
    lines.append("")
    if not rows:
        lines.append("(no rows)")
        return "\n".join(lines) + "\n"
    lines.append("| " + " | ".join(columns) + " |")
    lines.append("|" + "|".join("---" for _ in columns) + "|")
    for r in rows:
        lines.append("| " + " | ".join(_cell(r.get(c)) for c in columns) + " |")
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (list, tuple)):
        return "(" + ",".join(_cell(x) for x in v) + ")"
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True)
    return str(v)


# -- strata tables -------------------------------------------------------------------

TABLE_COLUMNS = ("nu", "kappa", "rank", "defect", "length_to_mu", "dim_adlv", "dim_central_leaf",
                 "dim_stratum", "codim_stratum")


def table_rows(poset: StrataPoset, records: Sequence[StrataRecord]) -> list[dict]:
    ranks = poset.rank_of
    return [{
        "nu": fmt_vec(r.cls.nu),
        "kappa": str(r.cls.kappa),
        "rank": ranks[r.cls],
        "defect": r.defect,
        "length_to_mu": r.length_to_mu,
        "dim_adlv": r.dim_adlv,
        "dim_central_leaf": r.dim_central_leaf,
        "dim_stratum": r.dim_stratum,
        "codim_stratum": r.codim_stratum,
    } for r in records]


def hasse_graph(poset: StrataPoset, records: Sequence[StrataRecord] | None = None) -> dict:
    """Nodes in canonical order and cover edges (larger, smaller), sorted."""
    index = {c: i for i, c in enumerate(poset.classes)}
    info = {r.cls: r for r in records or ()}
    nodes = []
    for c in poset.classes:
        node = {"id": f"n{index[c]}", "nu": fmt_vec(c.nu), "rank": poset.rank_of[c]}
        if c in info:
            r = info[c]
            node.update(defect=r.defect, dim=r.dim_stratum, codim=r.codim_stratum)
        nodes.append(node)
    edges = sorted((index[hi], index[lo]) for lo, hi in poset.covers)
    return {"nodes": nodes, "edges": [[f"n{a}", f"n{b}"] for a, b in edges]}


def to_dot(doc: dict, graph: dict, title: str) -> str:
    lines = [f"// {line}" for line in _header(doc)]
    lines.append(f"digraph {json.dumps(title)} {{")
    lines.append("  rankdir=TB;")
    lines.append("  node [shape=box, fontname=\"Helvetica\"];")
    for node in graph["nodes"]:
        label = node["nu"]
        if "defect" in node:
            label += f"\\ndef={node['defect']} dim={node['dim']} codim={node['codim']}"
        lines.append(f"  {node['id']} [label=\"{label}\"];")
    for a, b in graph["edges"]:
        lines.append(f"  {a} -> {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
