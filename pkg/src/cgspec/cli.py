"""Command-line front end.

    cgspec spectrum   --catalog dihedral:8
    cgspec invariants --cayley table.json --format text
    cgspec export     --generators gens.txt --format dot --out graph.dot
    cgspec verify     --cap 8

Exit codes: 0 success, 1 verification failure, 2 invalid group input,
3 size cap exceeded, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .catalog import catalog
from .errors import (
    ClosureCapExceeded,
    NotAGroup,
    SizeCapExceeded,
    UnknownSpec,
)
from .graph import build, export_dot, export_json
from .groups import GroupTable, Permutation, from_cayley, from_generators
from .invariants import DEFAULT_CAP, HARD_CAP, full_report
from .jacobi import DEFAULT_TOL
from .spectrum import inconclusive_classes, spectrum_verdict
from .verify import run_checks, summary

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_CAP, EXIT_IO = 0, 1, 2, 3, 4


@dataclass(frozen=True)
class RunConfig:
    command: str
    catalog: str | None = None
    cayley: str | None = None
    generators: str | None = None
    format: str = "json"
    out: str | None = None
    cap: int = DEFAULT_CAP
    tol: float = DEFAULT_TOL
    iso_strict: bool = False
    inject_fault: str | None = None

    @property
    def source(self) -> str:
        if self.catalog is not None:
            return f"catalog:{self.catalog}"
        if self.cayley is not None:
            return f"cayley:{self.cayley}"
        return f"generators:{self.generators}"


class InputError(Exception):
    """Malformed group input; reported with exit code 2."""


# --------------------------------------------------------------------------
# Group input
# --------------------------------------------------------------------------

def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def load_cayley(path: str) -> GroupTable:
    """``{"names": [...], "table": [[...], ...]}``; entries may be indices or names."""
    try:
        data = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None
    if isinstance(data, list):
        data = {"table": data}
    if not isinstance(data, dict) or "table" not in data:
        raise InputError(f"{path}: expected an object with a 'table' field")
    table = data["table"]
    names = data.get("names")
    if names is not None and any(isinstance(x, str) for row in table for x in row):
        pos = {str(s): i for i, s in enumerate(names)}
        try:
            table = [[pos[str(x)] for x in row] for row in table]
        except KeyError as exc:
            raise NotAGroup(f"table entry {exc.args[0]!r} is not an element name") from None
    return from_cayley(table, names)


def load_generators(path: str) -> GroupTable:
    """A JSON list of cycle strings, or one cycle string per line (1-based points)."""
    text = _read(path)
    try:
        items = json.loads(text)
        if not isinstance(items, list) or not all(isinstance(s, str) for s in items):
            raise InputError(f"{path}: expected a list of cycle strings")
    except json.JSONDecodeError:
        items = [ln.strip() for ln in text.splitlines()
                 if ln.strip() and not ln.lstrip().startswith("#")]
    try:
        perms = [Permutation.from_cycles(s) for s in items]
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None
    degree = max((p.degree for p in perms), default=1)
    return from_generators(perms, degree=max(degree, 1))


def load_group(cfg: RunConfig) -> GroupTable:
    if cfg.catalog is not None:
        return catalog(cfg.catalog)
    if cfg.cayley is not None:
        return load_cayley(cfg.cayley)
    return load_generators(cfg.generators)


# --------------------------------------------------------------------------
# JSON helpers
# --------------------------------------------------------------------------

def _num(x):
    """Exact values as ints or "p/q" strings; floats rounded for stable output."""
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return round(x, 10)
    if isinstance(x, (list, tuple)):
        return [_num(v) for v in x]
    return x


def _group_info(cfg: RunConfig, G: GroupTable) -> dict:
    return {"source": cfg.source, "order": G.order}


def _dump(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------

def cmd_spectrum(cfg: RunConfig) -> tuple[str, int]:
    G = load_group(cfg)
    v = spectrum_verdict(G, tol=cfg.tol)
    names = G.names
    doc = {
        "schema": 1,
        "group": _group_info(cfg, G),
        "closed_form": None if v.closed_form is None else {
            "pairs": [list(p) for p in v.closed_form.pairs]},
        "certificates": [
            {"eigenvalue": c.eigenvalue, "min_multiplicity": c.min_multiplicity,
             "provenance": c.provenance,
             "classes": [[names[i] for i in cls] for cls in c.classes]}
            for c in v.certificates],
        "inconclusive": [] if v.closed_form is not None else
        [[names[i] for i in cls] for cls in inconclusive_classes(G)],
        "numeric": {"pairs": [[_num(a), b] for a, b in v.numeric.pairs]},
        "verdict": v.verdict,
    }
    if cfg.format == "json":
        return _dump(doc), EXIT_OK
    lines = [f"group {cfg.source} (order {G.order})"]
    if v.closed_form is not None:
        lines.append("closed form: " + _pairs_text(v.closed_form.pairs))
    else:
        lines.append("closed form: not applicable")
        for c in v.certificates:
            lines.append(f"certificate: eigenvalue {c.eigenvalue}, multiplicity >= "
                         f"{c.min_multiplicity} ({c.provenance})")
        for cls in doc["inconclusive"]:
            lines.append(f"inconclusive class: {', '.join(cls)}")
    lines.append("numeric:     " + _pairs_text(v.numeric.pairs))
    lines.append(f"verdict: {v.verdict}")
    return "\n".join(lines) + "\n", EXIT_OK


def _pairs_text(pairs) -> str:
    return ", ".join(f"{_num(a)}^{m}" for a, m in pairs)


def cmd_invariants(cfg: RunConfig) -> tuple[str, int]:
    G = load_group(cfg)
    rep = full_report(G, cap=cfg.cap, iso_strict=cfg.iso_strict, tol=cfg.tol)
    entries = {}
    for name, e in rep.entries.items():
        d = e.as_dict()
        entries[name] = {k: _num(d[k]) for k in ("exact", "formula", "bounds", "witness", "status")}
    doc = {
        "schema": 1,
        "group": _group_info(cfg, G),
        "iso_strict": cfg.iso_strict,
        "cap": cfg.cap,
        "invariants": entries,
        "claims": [{"name": c.name, "status": c.status, "detail": c.detail} for c in rep.claims],
        "all_pass": rep.all_pass,
    }
    if cfg.format == "json":
        return _dump(doc), EXIT_OK
    lines = [f"group {cfg.source} (order {G.order})"]
    for name, e in entries.items():
        parts = [f"exact={_text(e['exact'])}"]
        if e["formula"] is not None:
            parts.append(f"formula={_text(e['formula'])}")
        if e["bounds"] is not None:
            parts.append(f"bounds={_text(e['bounds'])}")
        lines.append(f"{name:24s} {' '.join(parts)}  [{e['status']}]")
    lines.append("claims:")
    for c in rep.claims:
        lines.append(f"  {c.status.upper():15s} {c.name}  {c.detail}")
    lines.append("all claims pass" if rep.all_pass else "SOME CLAIMS FAIL")
    return "\n".join(lines) + "\n", EXIT_OK


def _text(x) -> str:
    if isinstance(x, list):
        return "[" + ", ".join(_text(v) for v in x) + "]"
    return "-" if x is None else str(x)


def cmd_export(cfg: RunConfig) -> tuple[str, int]:
    g = build(load_group(cfg))
    if cfg.format == "json":
        return export_json(g), EXIT_OK
    if cfg.format == "dot":
        return export_dot(g), EXIT_OK
    lines = []
    for u, name in enumerate(g.names):
        nbrs = [g.names[v] for v in range(g.order) if g.has_edge(u, v)]
        mark = " *" if u in g.center else ""
        lines.append(f"{name}{mark}: {', '.join(nbrs)}")
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    results = run_checks(cap=cfg.cap, tol=cfg.tol, fault=cfg.inject_fault)
    doc = summary(results)
    code = EXIT_OK if doc["ok"] else EXIT_VERIFY
    for name in doc["failed"]:
        print(f"verify: FAILED {name}", file=sys.stderr)
    if cfg.format == "json":
        return _dump(doc), code
    lines = [f"{r.status.upper():7s} {r.name}  {r.detail}" for r in results]
    c = doc["counts"]
    lines.append(f"{c['pass']} passed, {c['fail']} failed, {c['skipped']} skipped")
    return "\n".join(lines) + "\n", code


COMMANDS = {
    "spectrum": cmd_spectrum,
    "invariants": cmd_invariants,
    "export": cmd_export,
    "verify": cmd_verify,
}


# --------------------------------------------------------------------------
# Argument parsing
# --------------------------------------------------------------------------

def _cap_arg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid cap {text!r}") from None
    if not 1 <= n <= HARD_CAP:
        raise argparse.ArgumentTypeError(f"cap must be between 1 and {HARD_CAP}")
    return n


def _tol_arg(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid tolerance {text!r}") from None
    if not (x > 0 and math.isfinite(x)):
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return x


def build_parser() -> argparse.ArgumentParser:
    env_cap = os.environ.get("CGSPEC_CAP")
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--catalog", metavar="SPEC", help="built-in group, e.g. dihedral:8")
    src.add_argument("--cayley", metavar="PATH", help='JSON file {"names": [...], "table": [[...]]}')
    src.add_argument("--generators", metavar="PATH",
                     help="permutation generators in cycle notation (JSON list or one per line)")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--cap", type=_cap_arg, default=None,
                        help=f"exhaustive subset-scan cap (default {DEFAULT_CAP} or $CGSPEC_CAP, "
                             f"at most {HARD_CAP})")
    common.add_argument("--tol", type=_tol_arg, default=DEFAULT_TOL,
                        help="Jacobi off-diagonal tolerance")
    common.add_argument("--iso-strict", action="store_true",
                        help="isoperimetric number over |S| < n/2 instead of |S| <= n/2")
    common.add_argument("--inject-fault", metavar="SPEC", help=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="cgspec", description="Commuting graphs of finite groups: spectra and invariants.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fmt, fmts, help_text in [
        ("spectrum", "json", ("json", "text"), "Laplacian spectrum with cross-checks"),
        ("invariants", "json", ("json", "text"), "graph invariants and claim ledger"),
        ("export", "dot", ("dot", "json", "text"), "write the commuting graph"),
        ("verify", "text", ("json", "text"), "run the self-check over the catalog"),
    ]:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--format", choices=fmts, default=fmt)
    parser.set_defaults(env_cap=env_cap)
    return parser


def parse_config(argv: list[str] | None = None) -> RunConfig:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command != "verify" and not (args.catalog or args.cayley or args.generators):
        parser.error("one of --catalog, --cayley, --generators is required")
    cap = args.cap
    if cap is None:
        try:
            cap = _cap_arg(args.env_cap) if args.env_cap else DEFAULT_CAP
        except argparse.ArgumentTypeError as exc:
            parser.error(f"CGSPEC_CAP: {exc}")
    return RunConfig(
        command=args.command, catalog=args.catalog, cayley=args.cayley,
        generators=args.generators, format=args.format, out=args.out, cap=cap,
        tol=args.tol, iso_strict=args.iso_strict, inject_fault=args.inject_fault,
    )


def run(cfg: RunConfig) -> int:
    try:
        text, code = COMMANDS[cfg.command](cfg)
    except (NotAGroup, InputError, UnknownSpec) as exc:
        print(f"cgspec: invalid group: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SizeCapExceeded, ClosureCapExceeded) as exc:
        print(f"cgspec: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except OSError as exc:
        print(f"cgspec: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        if cfg.out:
            Path(cfg.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"cgspec: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


def main(argv: list[str] | None = None) -> int:
    return run(parse_config(argv))


if __name__ == "__main__":
    sys.exit(main())
