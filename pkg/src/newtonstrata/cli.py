"""Command-line front end: table, hasse, check, oracle, mazur, kr.

Exit codes: 0 clean, 1 findings, 2 usage or parse error, 3 internal
assertion (a structural identity failed, which signals a bug).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, fields, replace
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .catalog import CATALOG
from .checks import FAIL, run_checks
from .errors import InvariantViolation, NewtonStrataError
from .export import (TABLE_COLUMNS, envelope, hasse_graph, table_rows, to_csv, to_dot, to_json, to_markdown)
from .rootdata import FAMILIES, RootDatum, fmt_vec, load_datum, preset

EXIT_OK, EXIT_FINDINGS, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    samples: int = 1000
    degree_bound: int = 2
    format: str | None = None
    verify: bool = False
    support_ceiling: int = 1 << 20
    q: int = 3
    m: int = 1
    budget: int = 2000
    dominantize: bool = False

    def validate(self) -> RunConfig:
        for name in ("samples", "degree_bound", "support_ceiling", "q", "m", "budget"):
            if getattr(self, name) < (0 if name in ("degree_bound", "samples") else 1):
                raise UsageError(f"config: {name} must be positive, got {getattr(self, name)}")
        if self.format is not None and self.format not in ("json", "csv", "dot", "md"):
            raise UsageError(f"config: unknown format {self.format!r}")
        return self

    def resolved(self, fmt: str) -> dict:
        d = asdict(self)
        d["format"] = fmt
        return d


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"--config: cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"--config {path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise UsageError(f"--config {path}: expected a JSON object")
    data = {str(k).replace("-", "_"): v for k, v in data.items()}
    types = {f.name: type(f.default) for f in fields(RunConfig)}
    extra = sorted(set(data) - set(types))
    if extra:
        raise UsageError(f"--config {path}: unknown keys {', '.join(extra)}")
    for k, v in data.items():
        if k == "format" and v is None:
            continue
        want = str if k == "format" else types[k]
        if not isinstance(v, want) or (want is int and isinstance(v, bool)):
            raise UsageError(f"--config {path}: {k} must be of type {want.__name__}, got {v!r}")
    return data


# -- parsing -------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupSpec:
    token: str
    datum: RootDatum

    def __str__(self):
        return self.token


def parse_group(token: str) -> GroupSpec:
    family, sep, arg = token.partition(":")
    if not sep or not arg:
        raise UsageError(f"group {token!r}: expected family:n (families: {', '.join(FAMILIES)}) or custom:<path>")
    family = family.lower()
    if family == "custom":
        try:
            return GroupSpec(token, load_datum(arg))
        except OSError as exc:
            raise UsageError(f"group {token!r}: cannot read {arg}: {exc.strerror}") from None
    if family not in FAMILIES:
        raise UsageError(f"group {token!r}: unknown family {family!r} (expected {', '.join(FAMILIES)} or custom)")
    try:
        n = int(arg)
    except ValueError:
        raise UsageError(f"group {token!r}: size {arg!r} is not an integer") from None
    return GroupSpec(f"{family}:{n}", preset(family, n))


def parse_mu(text: str, datum: RootDatum, dominantize: bool = False) -> tuple[Fraction, ...]:
    parts = text.split(",")
    out = []
    for k, p in enumerate(parts, start=1):
        try:
            out.append(Fraction(p.strip()))
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--mu: entry {k} ({p.strip()!r}) is not a rational number") from None
    if len(out) != datum.rank:
        raise UsageError(f"--mu: {datum.name} needs {datum.rank} coordinates, got {len(out)}")
    bad = next((k for k, x in enumerate(out, start=1) if x.denominator != 1), None)
    if bad is not None:
        raise UsageError(f"--mu: entry {bad} ({out[bad - 1]}) is not an integer")
    mu = tuple(out)
    if not datum.is_dominant(mu):
        if not dominantize:
            neg = [k for k, c in enumerate(datum.simple_pairings(mu), start=1) if c < 0]
            raise UsageError(f"--mu: {fmt_vec(mu)} is not dominant (negative pairing with simple root(s) "
                             f"{', '.join(map(str, neg))}); pass --dominantize to replace it by its dominant representative")
        mu = datum.dominant_rep(mu)
    return mu


# -- commands ------------------------------------------------------------------------


def _emit(text: str, out: str | None):
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _fmt(args, cfg: RunConfig, default: str, allowed: Sequence[str]) -> str:
    fmt = args.format or cfg.format or default
    if fmt not in allowed:
        raise UsageError(f"--format {fmt} is not available for {args.command} (choose from {', '.join(allowed)})")
    return fmt


def _require_mu(args, spec: GroupSpec, cfg: RunConfig):
    if args.mu is None:
        raise UsageError(f"{args.command}: --mu is required")
    return parse_mu(args.mu, spec.datum, cfg.dominantize)


def cmd_table(args, cfg: RunConfig) -> int:
    from .strata import enumerate_bg_mu, strata_table
    spec = parse_group(args.group)
    mu = _require_mu(args, spec, cfg)
    fmt = _fmt(args, cfg, "json", ("json", "csv", "md"))
    poset = enumerate_bg_mu(spec.datum, mu)
    records = strata_table(spec.datum, mu)
    rows = table_rows(poset, records)
    doc = envelope("table", cfg.resolved(fmt), group=str(spec), mu=list(mu), rows=rows)
    if fmt == "json":
        text = to_json(doc)
    elif fmt == "csv":
        text = to_csv(doc, TABLE_COLUMNS, doc["rows"])
    else:
        text = to_markdown(doc, TABLE_COLUMNS, doc["rows"], f"Newton strata of B({spec}, {fmt_vec(mu)})")
    _emit(text, args.out)
    if args.figure:
        from .plotting import hasse_figure
        hasse_figure(poset, args.figure, records)
    return EXIT_OK


def cmd_hasse(args, cfg: RunConfig) -> int:
    from .strata import enumerate_bg_mu, strata_table
    spec = parse_group(args.group)
    mu = _require_mu(args, spec, cfg)
    fmt = _fmt(args, cfg, "dot", ("dot", "json"))
    poset = enumerate_bg_mu(spec.datum, mu)
    records = strata_table(spec.datum, mu)
    graph = hasse_graph(poset, records)
    doc = envelope("hasse", cfg.resolved(fmt), group=str(spec), mu=list(mu), **graph)
    text = to_dot(doc, graph, f"B({spec}, {fmt_vec(mu)})") if fmt == "dot" else to_json(doc)
    _emit(text, args.out)
    if args.figure:
        from .plotting import hasse_figure
        hasse_figure(poset, args.figure, records)
    return EXIT_OK


def cmd_check(args, cfg: RunConfig) -> int:
    spec = parse_group(args.group)
    fmt = _fmt(args, cfg, "json", ("json", "csv", "md"))
    if args.mu is not None:
        mus = [_require_mu(args, spec, cfg)]
    elif str(spec) in CATALOG:
        mus = [tuple(Fraction(x) for x in mu) for mu in CATALOG[str(spec)]]
    else:
        mus = [(Fraction(0),) * spec.datum.rank]
    runs = []
    for mu in mus:
        found = run_checks(spec.datum, mu, convex_oracle=cfg.verify)
        runs.append({"mu": list(mu), "findings": [f.to_dict() for f in found]})
    total = sum(len(r["findings"]) for r in runs)
    failures = sum(1 for r in runs for f in r["findings"] if f["severity"] == FAIL)
    doc = envelope("check", cfg.resolved(fmt), group=str(spec), runs=runs,
                   summary={"findings": total, "failures": failures, "warnings": total - failures})
    columns = ("mu", "severity", "check", "message")
    flat = [{"mu": fmt_vec(r["mu"]), **{k: f[k] for k in columns[1:]}} for r in doc["runs"] for f in r["findings"]]
    if fmt == "json":
        text = to_json(doc)
    elif fmt == "csv":
        text = to_csv(doc, columns, flat)
    else:
        text = to_markdown(doc, columns, flat, f"Checks for {spec}")
    _emit(text, args.out)
    return EXIT_FINDINGS if total else EXIT_OK


def cmd_oracle(args, cfg: RunConfig) -> int:
    from .isocrystal.matrix import (cartan_invariant, check_support, kappa_gl, load_matrix,
                                    newton_point_cartan_limit, newton_point_charpoly)
    fmt = _fmt(args, cfg, "json", ("json", "md"))
    try:
        mat = load_matrix(args.matrix)
    except OSError as exc:
        raise UsageError(f"cannot read {args.matrix}: {exc.strerror}") from None
    check_support(mat, cfg.support_ceiling)
    body = {"matrix": args.matrix, "field": mat.field.describe(), "n": mat.n,
            "cartan": list(cartan_invariant(mat)), "newton": list(newton_point_charpoly(mat)),
            "kappa": kappa_gl(mat)}
    findings = []
    if cfg.verify:
        other = newton_point_cartan_limit(mat)
        body["newton_cartan_limit"] = list(other)
        if tuple(other) != tuple(body["newton"]):
            findings.append("Newton methods disagree")
    body["findings"] = findings
    doc = envelope("oracle", cfg.resolved(fmt), **body)
    if fmt == "json":
        text = to_json(doc)
    else:
        rows = [{"quantity": k, "value": doc[k]} for k in ("cartan", "newton", "kappa") + (
            ("newton_cartan_limit",) if cfg.verify else ())]
        text = to_markdown(doc, ("quantity", "value"), rows, f"Isocrystal oracle for {args.matrix}")
    _emit(text, args.out)
    return EXIT_FINDINGS if findings else EXIT_OK


def _gl_only(spec: GroupSpec, command: str) -> int:
    if spec.datum.family != "gl":
        raise UsageError(f"{command}: the matrix oracle works with gl:n only, got {spec}")
    return spec.datum.rank


def cmd_mazur(args, cfg: RunConfig) -> int:
    from .isocrystal.sampling import mazur_experiment
    spec = parse_group(args.group)
    n = _gl_only(spec, "mazur")
    mu = _require_mu(args, spec, cfg)
    fmt = _fmt(args, cfg, "json", ("json", "csv", "md"))
    report = mazur_experiment(n, [int(x) for x in mu], cfg.samples, cfg.seed, cfg.degree_bound, q=cfg.q, m=cfg.m)
    rows = [{"nu": fmt_vec(nu), "count": report.counts.get(nu, 0)} for nu in report.expected]
    rows += [{"nu": fmt_vec(nu), "count": c} for nu, c in sorted(report.counts.items(), reverse=True)
             if nu not in report.expected]
    doc = envelope("mazur", cfg.resolved(fmt), group=str(spec), mu=list(mu), field=report.field, classes=rows,
                   violations=report.violations, unobserved=[fmt_vec(nu) for nu in report.unobserved])
    if fmt == "json":
        text = to_json(doc)
    elif fmt == "csv":
        text = to_csv(doc, ("nu", "count"), doc["classes"])
    else:
        text = to_markdown(doc, ("nu", "count"), doc["classes"],
                           f"Mazur experiment for {spec}, {len(report.violations)} violations")
    _emit(text, args.out)
    if args.figure:
        from .plotting import mazur_figure
        mazur_figure(report, args.figure)
    return EXIT_FINDINGS if report.violations else EXIT_OK


def cmd_kr(args, cfg: RunConfig) -> int:
    from .isocrystal.field import field_of
    from .isocrystal.kr import kr_search_general
    from .strata import enumerate_bg_mu
    spec = parse_group(args.group)
    n = _gl_only(spec, "kr")
    mu = _require_mu(args, spec, cfg)
    fmt = _fmt(args, cfg, "json", ("json", "csv", "md"))
    f = field_of(cfg.q, cfg.m)
    mu_int = [int(x) for x in mu]
    rows = []
    for cls in enumerate_bg_mu(spec.datum, mu).classes:
        res = kr_search_general(n, mu_int, cls.nu, budget=cfg.budget, seed=cfg.seed, f=f)
        row = {"nu": fmt_vec(cls.nu), "status": res.status, "tries": res.tries}
        if res.element is not None:
            row["w"] = res.element.cycle_notation()
            row["a"] = list(res.element.a)
        elif res.matrix is not None:
            row["matrix"] = repr(res.matrix)
        rows.append(row)
    inconclusive = sum(r["status"] == "inconclusive" for r in rows)
    doc = envelope("kr", cfg.resolved(fmt), group=str(spec), mu=list(mu), field=f.describe(), witnesses=rows,
                   summary={"classes": len(rows), "inconclusive": inconclusive})
    columns = ("nu", "status", "w", "a", "matrix", "tries")
    if fmt == "json":
        text = to_json(doc)
    elif fmt == "csv":
        text = to_csv(doc, columns, doc["witnesses"])
    else:
        text = to_markdown(doc, columns, doc["witnesses"], f"Witnesses in K mu(eps) K for {spec}")
    _emit(text, args.out)
    return EXIT_FINDINGS if inconclusive else EXIT_OK


# -- entry point ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "dot", "md"), help="output format")
    common.add_argument("--out", help="write the document here instead of stdout")
    common.add_argument("--config", help="JSON file with RunConfig defaults")
    common.add_argument("--seed", type=int)
    common.add_argument("--samples", type=int)
    common.add_argument("--degree-bound", type=int, dest="degree_bound")
    common.add_argument("--verify", action="store_true", default=None, help="also run the cross-oracles")
    common.add_argument("--dominantize", action="store_true", default=None,
                        help="accept a non-dominant --mu and use its dominant representative")

    parser = argparse.ArgumentParser(prog="newtonstrata", description="Newton strata combinatorics and an isocrystal oracle.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def group_cmd(name, help_text, figure=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("group", help="gl:n, sl:n, pgl:n, gsp:2g, u:n or custom:<path>")
        p.add_argument("--mu", help="comma-separated cocharacter in the datum's coordinates")
        if figure:
            p.add_argument("--figure", help="also render a figure to this path (png, svg or pdf)")
        return p

    group_cmd("table", "strata table: defect, dimensions and codimensions per class")
    group_cmd("hasse", "Hasse diagram of B(G, mu) as DOT")
    group_cmd("check", "run every cross-identity and report findings", figure=False)
    p = sub.add_parser("oracle", parents=[common], help="Cartan invariant, Newton point and kappa of a matrix file")
    p.add_argument("matrix", help="JSON matrix file")
    group_cmd("mazur", "sample K mu(eps) K and test Mazur's inequality")
    group_cmd("kr", "explicit representatives for every class of B(GL_n, mu)", figure=False)
    return parser


COMMANDS = {"table": cmd_table, "hasse": cmd_hasse, "check": cmd_check, "oracle": cmd_oracle,
            "mazur": cmd_mazur, "kr": cmd_kr}


def resolve_config(args) -> RunConfig:
    base = {}
    if args.config:
        base = load_config(args.config)
    cfg = RunConfig(**base)
    overrides = {k: getattr(args, k) for k in ("seed", "samples", "degree_bound", "format", "verify", "dominantize")
                 if getattr(args, k, None) is not None}
    return replace(cfg, **overrides).validate()


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(f"newtonstrata {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"newtonstrata {args.command}: internal assertion failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except NewtonStrataError as exc:
        print(f"newtonstrata {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"newtonstrata {args.command}: internal assertion failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
