"""Self-check over the built-in catalog.

Each check compares two independent computations (closed form against the
Jacobi eigenvalues, formula against direct count, bound against exhaustive
search).  Checks that need a ``2**n`` subset scan are skipped for groups
above the scan cap.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .catalog import BUILTIN, catalog
from .errors import ConditionNotSatisfied, HypothesisViolated, SizeCapExceeded
from .graph import CommutingGraph, build
from .groups import GroupTable, Subset
from .invariants import (
    _check_cap,
    all_boundaries,
    boundary_formula,
    boundary_lower_bounds_check,
    default_cap,
    edge_boundary,
    full_report,
    lower_bound_case,
)
from .spectrum import (
    basis_rank,
    closed_form_spectrum,
    laplacian,
    spectrum_certificates,
    spectrum_verdict,
    verify_eigenpair,
)

# Laplacian of the dihedral group of order 8 in catalog order
L8 = np.array([
    [7, -1, -1, -1, -1, -1, -1, -1],
    [-1, 7, -1, -1, -1, -1, -1, -1],
    [-1, -1, 3, -1, 0, 0, 0, 0],
    [-1, -1, -1, 3, 0, 0, 0, 0],
    [-1, -1, 0, 0, 3, -1, 0, 0],
    [-1, -1, 0, 0, -1, 3, 0, 0],
    [-1, -1, 0, 0, 0, 0, 3, -1],
    [-1, -1, 0, 0, 0, 0, -1, 3],
])

BOUNDARY_GROUPS = ("dihedral:6", "dihedral:8", "quaternion:8", "dihedral:12", "dihedral:16")
RATIO_GROUPS = ("dihedral:8", "quaternion:8")


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # pass, fail, skipped
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail}


def corrupt(g: CommutingGraph) -> CommutingGraph:
    """Drop the edge between the first and last vertex (test hook)."""
    n = g.order
    if n < 2:
        return g
    adj = list(g.adjacency)
    adj[0] &= ~(1 << (n - 1))
    adj[n - 1] &= ~1
    return replace(g, adjacency=tuple(adj))


class _Context:
    def __init__(self, cap: int, tol: float, fault: str | None):
        self.cap, self.tol, self.fault = cap, tol, fault
        self._groups: dict[str, tuple[GroupTable, CommutingGraph]] = {}

    def group(self, spec: str) -> tuple[GroupTable, CommutingGraph]:
        if spec not in self._groups:
            G = catalog(spec)
            g = build(G)
            if spec == self.fault:
                g = corrupt(g)
            self._groups[spec] = (G, g)
        return self._groups[spec]


Check = Callable[[_Context], "tuple[bool, str]"]


def _spectrum(spec: str) -> Check:
    def run(ctx):
        G, g = ctx.group(spec)
        v = spectrum_verdict(G, g, ctx.tol)
        return v.ok, v.verdict
    return run


def _eigenbasis(spec: str) -> Check:
    def run(ctx):
        G, g = ctx.group(spec)
        L = laplacian(g)
        try:
            bases = [(b.eigenvalue, b.vectors) for b in closed_form_spectrum(G).bases]
            full_rank = True
        except ConditionNotSatisfied:
            bases = [(c.eigenvalue, c.basis.vectors) for c in spectrum_certificates(G)]
            full_rank = False
        bad = [lam for lam, vecs in bases
               if not all(verify_eigenpair(L, lam, y) for y in vecs)
               or basis_rank(vecs) != len(vecs)]
        if full_rank and sum(len(v) for _, v in bases) != g.order:
            bad.append("total")
        return not bad, f"failing eigenvalues {bad}" if bad else f"{len(bases)} eigenspaces"
    return run


def _invariants(spec: str) -> Check:
    def run(ctx):
        G, g = ctx.group(spec)
        rep = full_report(G, cap=ctx.cap, g=g, tol=ctx.tol)
        failed = [c.name for c in rep.claims if c.status == "fail"]
        capped = [c.name for c in rep.claims if c.status == "cap_exceeded"]
        detail = f"failed claims {failed}" if failed else f"{len(rep.claims)} claims"
        if capped:
            detail += f"; beyond cap: {capped}"
        return not failed, detail
    return run


def _boundary_formula(spec: str) -> Check:
    def run(ctx):
        G, g = ctx.group(spec)
        n = G.order
        _check_cap(n, ctx.cap, "boundary scan")
        b, _ = all_boundaries(g, ctx.cap)
        formula_bad = inequality_bad = checked = 0
        for m in range(1, (1 << n) - 1):
            S = Subset(n, m)
            try:
                if boundary_formula(G, S) != b[m]:
                    formula_bad += 1
                checked += 1
            except HypothesisViolated:
                pass
            if lower_bound_case(G, S) is not None and not boundary_lower_bounds_check(G, S, g):
                inequality_bad += 1
        ok = formula_bad == 0 and inequality_bad == 0
        return ok, f"{checked} formula subsets, {formula_bad} formula and {inequality_bad} inequality violations"
    return run


def _ratio_bounds(spec: str) -> Check:
    def run(ctx):
        G, g = ctx.group(spec)
        n = G.order
        _check_cap(n, ctx.cap, "ratio scan")
        z = G.center_mask.bit_count()
        bad = 0
        for m in range(1, (1 << n) - 1):
            s = m.bit_count()
            bd = edge_boundary(g, Subset(n, m)).boundary_size
            if not (z * s * (n - s) <= bd * n and bd <= s * (n - s)):
                bad += 1
        return bad == 0, f"{(1 << n) - 2} subsets, {bad} violations"
    return run


def _s3_values(ctx):
    G, g = ctx.group("symmetric:3")
    v = spectrum_verdict(G, g, ctx.tol)
    want = ((0, 1), (1, 3), (3, 1), (6, 1))
    return v.closed_form.pairs == want and v.numeric.pairs == want, str(v.numeric.pairs)


def _d8_q8(ctx):
    _, gd = ctx.group("dihedral:8")
    _, gq = ctx.group("quaternion:8")
    same = gd.adjacency == gq.adjacency
    matches = np.array_equal(laplacian(gd).entries, L8)
    return same and matches, f"same graph {same}, Laplacian matches {matches}"


def _s4_certificate(ctx):
    G, g = ctx.group("symmetric:4")
    v = spectrum_verdict(G, g, ctx.tol)
    cert = {c.eigenvalue: c.min_multiplicity for c in v.certificates}
    ok = cert.get(3, 0) >= 4 and v.numeric.multiplicity(3) >= 4
    return ok, f"certified {cert.get(3)}, numeric {v.numeric.multiplicity(3)}"


def checklist() -> list[tuple[str, Check]]:
    checks: list[tuple[str, Check]] = [
        ("symmetric:3/spectrum-values", _s3_values),
        ("dihedral:8/quaternion:8/same-laplacian", _d8_q8),
        ("symmetric:4/certificate-3", _s4_certificate),
    ]
    for spec in BUILTIN:
        checks.append((f"{spec}/spectrum", _spectrum(spec)))
        checks.append((f"{spec}/eigenbasis", _eigenbasis(spec)))
        checks.append((f"{spec}/invariants", _invariants(spec)))
    for spec in BOUNDARY_GROUPS:
        checks.append((f"{spec}/boundary-formula", _boundary_formula(spec)))
    for spec in RATIO_GROUPS:
        checks.append((f"{spec}/ratio-bounds", _ratio_bounds(spec)))
    return checks


def run_checks(cap: int | None = None, tol: float = 1e-9,
               fault: str | None = None) -> list[CheckResult]:
    ctx = _Context(default_cap() if cap is None else cap, tol, fault)
    results = []
    for name, check in checklist():
        try:
            ok, detail = check(ctx)
            results.append(CheckResult(name, "pass" if ok else "fail", detail))
        except SizeCapExceeded as exc:
            results.append(CheckResult(name, "skipped", str(exc)))
        except Exception as exc:  # a crash is a failed check, not a crashed run
            results.append(CheckResult(name, "fail", f"{type(exc).__name__}: {exc}"))
    return results


def summary(results: list[CheckResult]) -> dict:
    counts = {s: sum(r.status == s for r in results) for s in ("pass", "fail", "skipped")}
    return {
        "schema": 1,
        "ok": counts["fail"] == 0,
        "counts": counts,
        "failed": [r.name for r in results if r.status == "fail"],
        "checks": [r.as_dict() for r in results],
    }
