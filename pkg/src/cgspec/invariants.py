"""Graph invariants of commuting graphs: exact values by search, closed-form
values and bounds from group data, and the checks tying them together.

Exhaustive subset scans are vectorized over all ``2**n`` bitmasks with numpy
and are limited to ``n <= cap`` (16 by default, 24 at most).  Ratios are
compared exactly by cross-multiplication.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .errors import (
    ConditionNotSatisfied,
    EmptyOrFullSubset,
    HypothesisViolated,
    SizeCapExceeded,
)
from .graph import CommutingGraph, build, diameter, distance_sum
from .groups import GroupTable, Subset, _bits, is_abelian, satisfies_con
from .spectrum import closed_form_spectrum, numeric_report

DEFAULT_CAP = 16
HARD_CAP = 24
# branch and bound is not a subset scan; it gets its own, larger limit
SEARCH_CAP = 64


def default_cap() -> int:
    return int(os.environ.get("CGSPEC_CAP", DEFAULT_CAP))


def _check_cap(n: int, cap: int | None, what: str) -> int:
    cap = default_cap() if cap is None else cap
    if cap > HARD_CAP:
        raise ValueError(f"cap {cap} exceeds the hard limit {HARD_CAP}")
    if n > cap:
        raise SizeCapExceeded(f"{what}: order {n} exceeds exhaustive cap {cap}")
    return cap


def _check_search(n: int, what: str) -> None:
    if n > SEARCH_CAP:
        raise SizeCapExceeded(f"{what}: order {n} exceeds search cap {SEARCH_CAP}")


# --------------------------------------------------------------------------
# Edge boundaries
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SubsetBoundary:
    subset: Subset
    boundary_size: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.boundary_size, self.subset.size)


def edge_boundary(g: CommutingGraph, S: Subset) -> SubsetBoundary:
    if S.size == 0 or S.size == g.order:
        raise EmptyOrFullSubset("boundary needs a nonempty proper subset")
    outside = ~S.mask
    size = sum((g.adjacency[u] & outside).bit_count() for u in S)
    return SubsetBoundary(S, size)


def boundary_formula(G: GroupTable, S: Subset) -> int:
    """Boundary size computed from the center and the centralizers.

    Valid when ``S`` contains some but not all central elements.
    """
    if is_abelian(G):
        raise HypothesisViolated("group is abelian")
    z = G.center_mask
    if not S.mask & z or not z & ~S.mask:
        raise HypothesisViolated("S must meet the center without containing it")
    n = G.order
    cm = G.centralizer_masks
    s, zs = S.size, z.bit_count()
    m = (S.mask & z).bit_count()
    z_out = (z & ~S.mask).bit_count()
    tail = sum((cm[u] & ~z & ~S.mask).bit_count() for u in _bits(S.mask & ~z))
    return s * zs + m * (n - 2 * s - z_out) + tail


def lower_bound_case(G: GroupTable, S: Subset) -> str | None:
    """Which of the three ratio-bound hypotheses ``S`` satisfies, if any."""
    z = G.center_mask
    if S.size == 0:
        return None
    if not S.mask & z:
        return "disjoint_from_center"
    if z & ~S.mask == 0 and 2 * S.size <= G.order:
        return "contains_center"
    if S.mask & ~z == 0:
        return "inside_center"
    return None


def boundary_lower_bounds_check(G: GroupTable, S: Subset, g: CommutingGraph | None = None) -> bool:
    """``|dS| / |S| >= |Z(G)|`` for subsets meeting one of the hypotheses."""
    if is_abelian(G):
        raise HypothesisViolated("group is abelian")
    if lower_bound_case(G, S) is None:
        raise HypothesisViolated(f"{S} meets none of the hypotheses")
    g = build(G) if g is None else g
    return edge_boundary(g, S).boundary_size >= S.size * G.center_mask.bit_count()


def subset_ratio_bounds_check(G: GroupTable, S: Subset, g: CommutingGraph | None = None) -> bool:
    """``|Z|/|G| <= |dS| / (|S| |S^c|) <= 1``."""
    if is_abelian(G):
        raise HypothesisViolated("group is abelian")
    con = satisfies_con(G)
    if not con.holds:
        raise HypothesisViolated(f"centralizer condition fails at {con.witness}")
    if S.size == 0 or S.size == G.order:
        raise HypothesisViolated("S must be a nonempty proper subset")
    g = build(G) if g is None else g
    b = edge_boundary(g, S).boundary_size
    ratio = Fraction(b, S.size * (G.order - S.size))
    return Fraction(G.center_mask.bit_count(), G.order) <= ratio <= 1


# --------------------------------------------------------------------------
# Exhaustive scans
# --------------------------------------------------------------------------

def all_boundaries(g: CommutingGraph, cap: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Boundary size and cardinality for every bitmask ``0 .. 2**n - 1``.

    Adding vertex ``u`` to a set ``S`` of lower vertices changes the boundary
    by ``deg(u) - 2 |N(u) & S|``, which fills the table one bit at a time.
    """
    n = g.order
    _check_cap(n, cap, "exhaustive scan")
    total = 1 << n
    dtype = np.int32 if n < 31 else np.int64
    masks = np.arange(total, dtype=np.uint32)
    pc = np.bitwise_count(masks).astype(np.int8)
    b = np.zeros(total, dtype=dtype)
    for u in range(n):
        lo = 1 << u
        inside = np.bitwise_count(masks[:lo] & np.uint32(g.adjacency[u] & (lo - 1))).astype(dtype)
        b[lo:2 * lo] = b[:lo] + g.adjacency[u].bit_count() - 2 * inside
    return b, pc


def _max_size(n: int, strict: bool) -> int:
    return (n - 1) // 2 if strict else n // 2


def isoperimetric_exact(g: CommutingGraph, cap: int | None = None,
                        strict: bool = False) -> tuple[Fraction, Subset]:
    """Minimum of ``|dS| / |S|`` over nonempty ``S`` with ``|S| <= n/2``.

    With ``strict`` the size bound is ``|S| < n/2``.  Ties go to the subset
    with the smallest bitmask value.
    """
    n = g.order
    if n < 2:
        raise ValueError("isoperimetric number needs at least two vertices")
    smax = _max_size(n, strict)
    if smax < 1:
        raise ValueError(f"no admissible subsets for n={n} under the strict size bound")
    b, pc = all_boundaries(g, cap)
    valid = (pc >= 1) & (pc <= smax)
    best = None
    for s in range(1, smax + 1):
        sel = pc == s
        cand = Fraction(int(b[sel].min()), s)
        if best is None or cand < best:
            best = cand
    hits = np.flatnonzero(valid & (b.astype(np.int64) * best.denominator
                                   == pc.astype(np.int64) * best.numerator))
    return best, Subset(n, int(hits[0]))


def bipartition_width_exact(g: CommutingGraph, cap: int | None = None) -> tuple[int, Subset]:
    n = g.order
    if n < 2:
        raise ValueError("bipartition width needs at least two vertices")
    b, pc = all_boundaries(g, cap)
    sel = np.flatnonzero(pc == n // 2)
    k = int(np.argmin(b[sel]))
    return int(b[sel[k]]), Subset(n, int(sel[k]))


def bipartition_lower_bound(g: CommutingGraph) -> Fraction | None:
    """Spectral lower bound; available for non-abelian groups meeting the condition."""
    if g.is_complete or not g.satisfies_con:
        return None
    n, z = g.order, g.center.size
    if n % 2 == 0:
        return Fraction(n * z, 4)
    return Fraction((n * n - 1) * z, 4 * n)


def bipartition_width(g: CommutingGraph, cap: int | None = None) -> tuple[int | None, Fraction | None]:
    """Exact width (``None`` above the cap) and the lower bound (``None`` when
    it does not apply)."""
    try:
        exact = bipartition_width_exact(g, cap)[0]
    except SizeCapExceeded:
        exact = None
    return exact, bipartition_lower_bound(g)


# --------------------------------------------------------------------------
# Isoperimetric number from group data
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class IsoperimetricClaim:
    kind: str  # "exact", "bounds" or "unknown"
    value: Fraction | None = None
    lower: Fraction | None = None
    upper_squared: Fraction | None = None
    reason: str = ""

    @property
    def upper(self) -> float | None:
        return None if self.upper_squared is None else math.sqrt(self.upper_squared)

    def admits(self, x: Fraction) -> bool:
        """Whether an exact value is consistent with this claim."""
        if self.kind == "exact":
            return x == self.value
        if self.kind == "bounds":
            return self.lower <= x and x * x <= self.upper_squared
        return True


def isoperimetric_theorem(G: GroupTable) -> IsoperimetricClaim:
    n = G.order
    if n < 2:
        return IsoperimetricClaim("unknown", reason="fewer than two elements")
    if is_abelian(G):
        return IsoperimetricClaim("exact", Fraction((n + 1) // 2), reason="complete graph")
    if not satisfies_con(G).holds:
        return IsoperimetricClaim("unknown", reason="centralizer condition fails")
    z_mask = G.center_mask
    z = z_mask.bit_count()
    if z == 1:
        return IsoperimetricClaim("exact", Fraction(1), reason="trivial center")
    if z == 2:
        sizes = {(m & ~z_mask).bit_count() for u, m in enumerate(G.centralizer_masks)
                 if not z_mask >> u & 1}
        if len(sizes) == 1:
            (l,) = sizes
            if 2 * l < n and (n // 2 - 1) % l != 0:
                return IsoperimetricClaim("exact", Fraction(2),
                                          reason=f"center of order 2, uniform component size {l}")
    return IsoperimetricClaim("bounds", lower=Fraction(z, 2),
                              upper_squared=Fraction(z * (2 * (n - 1) - z)),
                              reason="spectral bounds")


def smallest_component_witness(g: CommutingGraph) -> SubsetBoundary:
    """Boundary of the smallest non-central component (first one on ties)."""
    comp = min(g.component_partition, key=lambda c: (c.size, c.members()))
    return edge_boundary(g, comp)


# --------------------------------------------------------------------------
# Cliques and independent sets
# --------------------------------------------------------------------------

def _color_sort(P: int, adj) -> tuple[list[int], list[int]]:
    order, colors = [], []
    uncolored = P
    k = 0
    while uncolored:
        k += 1
        avail = uncolored
        while avail:
            v = (avail & -avail).bit_length() - 1
            order.append(v)
            colors.append(k)
            uncolored &= ~(1 << v)
            avail &= ~adj[v] & ~(1 << v)
    return order, colors


def max_clique(adj, n: int) -> int:
    """Bitmask of a maximum clique; branch and bound with a greedy colouring bound."""
    best = [0, 0]  # size, mask

    def expand(R: int, size: int, P: int) -> None:
        order, colors = _color_sort(P, adj)
        for v, c in zip(reversed(order), reversed(colors)):
            if size + c <= best[0]:
                return
            bit = 1 << v
            newP = P & adj[v]
            if newP:
                expand(R | bit, size + 1, newP)
            elif size + 1 > best[0]:
                best[0], best[1] = size + 1, R | bit
            P &= ~bit

    if n:
        expand(0, 0, (1 << n) - 1)
    return best[1]


@dataclass(frozen=True)
class CliqueResult:
    exact: int | None
    witness: Subset | None
    formula: int | None


def _formula_spectrum(g: CommutingGraph):
    try:
        return closed_form_spectrum(g)
    except ConditionNotSatisfied:
        return None


def big_C_set(G: GroupTable | CommutingGraph) -> Subset:
    """Vertices whose degree exceeds the order of the center."""
    g = G if isinstance(G, CommutingGraph) else build(G)
    z = g.center.size
    return Subset.of(g.order, [v for v, d in enumerate(g.degrees) if d - z > 0])


def clique_formula(g: CommutingGraph) -> int | None:
    if g.is_complete:
        return g.order
    if not g.satisfies_con:
        return None
    z = g.center.size
    if big_C_set(g).mask == g.center.mask:
        return z + 1
    distinct = closed_form_spectrum(g).distinct()
    return distinct[-2]


def clique_number(g: CommutingGraph) -> CliqueResult:
    """Exact clique number by branch and bound, plus the closed-form value.

    The search is not a subset scan, so it is limited by ``SEARCH_CAP``
    rather than by the scan cap.
    """
    formula = clique_formula(g)
    try:
        _check_search(g.order, "clique search")
    except SizeCapExceeded:
        return CliqueResult(None, None, formula)
    mask = max_clique(g.adjacency, g.order)
    return CliqueResult(mask.bit_count(), Subset(g.order, mask), formula)


@dataclass(frozen=True)
class IndependenceResult:
    exact: int | None
    witness: Subset | None
    bounds: tuple[int, int]
    sharp_bounds: tuple[int, int] | None


def independence_bounds(g: CommutingGraph) -> tuple[tuple[int, int], tuple[int, int] | None]:
    """``[1, n - c + 1]`` with ``c`` the smallest centralizer order, and the
    spectral interval ``[1, n - lambda_3 + 1]`` when every vertex lies in the
    big-C set and the closed form applies.  ``lambda_3`` is the third
    smallest distinct eigenvalue."""
    n = g.order
    c = min(g.degrees) + 1
    basic = (1, n - c + 1)
    sharp = None
    if big_C_set(g).size == n and g.satisfies_con and not g.is_complete:
        distinct = closed_form_spectrum(g).distinct()
        if len(distinct) >= 3:
            sharp = (1, n - distinct[2] + 1)
    return basic, sharp


def independence_number(g: CommutingGraph) -> IndependenceResult:
    basic, sharp = independence_bounds(g)
    try:
        _check_search(g.order, "independent set search")
    except SizeCapExceeded:
        return IndependenceResult(None, None, basic, sharp)
    full = (1 << g.order) - 1
    comp = [full & ~row & ~(1 << u) for u, row in enumerate(g.adjacency)]
    mask = max_clique(comp, g.order)
    return IndependenceResult(mask.bit_count(), Subset(g.order, mask), basic, sharp)


# --------------------------------------------------------------------------
# Distances
# --------------------------------------------------------------------------

def mean_distance(g: CommutingGraph, G: GroupTable | None = None) -> tuple[Fraction, Fraction | None]:
    """Direct all-pairs value and the degree-sum formula, both over ``n**2``.

    The formula is reported for abelian groups and groups meeting the
    centralizer condition.
    """
    n = g.order
    direct = Fraction(distance_sum(g), n * n)
    con = g.satisfies_con if G is None else satisfies_con(G).holds
    formula = None
    if g.is_complete:
        formula = Fraction(n - 1, n)
    elif con:
        formula = Fraction(2 * n * n - 2 * n - sum(g.degrees), n * n)
    return direct, formula


# --------------------------------------------------------------------------
# Aggregate report
# --------------------------------------------------------------------------

@dataclass
class Entry:
    exact: Any = None
    formula: Any = None
    bounds: tuple | None = None
    witness: list | None = None
    status: str = "not_applicable"

    def as_dict(self) -> dict:
        return {"exact": self.exact, "formula": self.formula, "bounds": self.bounds,
                "witness": self.witness, "status": self.status}


@dataclass
class Claim:
    name: str
    status: str  # pass, fail, not_applicable, cap_exceeded
    detail: str = ""


@dataclass
class InvariantReport:
    order: int
    entries: dict[str, Entry] = field(default_factory=dict)
    claims: list[Claim] = field(default_factory=list)

    def __getitem__(self, key: str) -> Entry:
        return self.entries[key]

    @property
    def all_pass(self) -> bool:
        return all(c.status != "fail" for c in self.claims)

    def claim(self, name: str, ok: bool | None, detail: str = "", status: str | None = None) -> None:
        if status is None:
            status = "not_applicable" if ok is None else ("pass" if ok else "fail")
        self.claims.append(Claim(name, status, detail))


def _status(checks: list[bool | None], exact_missing: bool = False) -> str:
    real = [c for c in checks if c is not None]
    if real and not all(real):
        return "fail"
    if exact_missing:
        return "cap_exceeded"
    return "pass" if real else "not_applicable"


def full_report(G: GroupTable, cap: int | None = None, iso_strict: bool = False,
                tol: float = 1e-9, g: CommutingGraph | None = None) -> InvariantReport:
    """Every applicable invariant with its exact, formula and bound values.

    ``g`` defaults to the commuting graph of ``G``; passing another graph
    checks it against the group's formulas.  Values beyond the scan cap are
    reported as ``cap_exceeded`` rather than raised.
    """
    g = build(G) if g is None else g
    n = g.order
    z = g.center.size
    abelian = g.is_complete
    con = g.satisfies_con
    rep = InvariantReport(n)
    names = g.names

    def named(S: Subset | None):
        return None if S is None else [names[i] for i in S]

    # diameter
    d = diameter(g)
    expected = 0 if n == 1 else (1 if abelian else 2)
    ok = d == expected
    rep.entries["diameter"] = Entry(d, expected, None, None, _status([ok]))
    rep.claim("diameter", ok, f"{d} vs {expected}")

    # mean distance
    direct, formula = mean_distance(g)
    ok = None if formula is None else direct == formula
    rep.entries["mean_distance"] = Entry(direct, formula, None, None, _status([ok]))
    rep.claim("mean_distance_formula", ok, f"{direct} vs {formula}")

    # spectrum-derived values
    closed = None if not (abelian or con) else closed_form_spectrum(g)
    numeric = numeric_report(g, tol=tol)
    trace = sum(g.degrees)
    if closed is not None:
        rep.claim("trace_identity", closed.weighted_sum() == trace, f"{closed.weighted_sum()} vs {trace}")
    else:
        total = float(sum(v * m for v, m in numeric.pairs))
        rep.claim("trace_identity", abs(total - trace) <= 1e-6 * max(1, trace), f"{total} vs {trace}")
    if closed is not None:
        rep.claim("numeric_matches_closed_form", numeric.pairs == closed.pairs)
    if n >= 2:
        ac = numeric.values()[1]
        ac_formula = n if abelian else (z if con else None)
        ok = None if ac_formula is None else ac == ac_formula
        rep.entries["algebraic_connectivity"] = Entry(ac, ac_formula, None, None, _status([ok]))
        rep.claim("algebraic_connectivity", ok, f"{ac} vs {ac_formula}")

    # c_min and big C
    c_min = min(g.degrees) + 1
    rep.entries["c_min"] = Entry(c_min, None, None, None, "pass")
    bigc = big_C_set(g)
    rep.entries["big_C"] = Entry(bigc.size, None, None, named(bigc), "pass")

    # clique number
    cl = clique_number(g)
    ok = None if cl.exact is None or cl.formula is None else cl.exact == cl.formula
    rep.entries["clique_number"] = Entry(cl.exact, cl.formula, None, named(cl.witness),
                                         _status([ok], cl.exact is None))
    rep.claim("clique_formula", ok, f"{cl.exact} vs {cl.formula}",
              status="cap_exceeded" if cl.exact is None and cl.formula is not None else None)

    # independence number
    ind = independence_number(g)
    checks = []
    if ind.exact is not None:
        checks.append(ind.bounds[0] <= ind.exact <= ind.bounds[1])
        if ind.sharp_bounds is not None:
            checks.append(ind.sharp_bounds[0] <= ind.exact <= ind.sharp_bounds[1])
    bounds = ind.sharp_bounds or ind.bounds
    rep.entries["independence_number"] = Entry(ind.exact, None, list(bounds), named(ind.witness),
                                               _status(checks, ind.exact is None))
    rep.claim("independence_interval", checks[0] if checks else None,
              f"{ind.exact} in {list(ind.bounds)}",
              status="cap_exceeded" if ind.exact is None else None)
    if ind.sharp_bounds is not None:
        rep.claim("independence_spectral_interval", checks[1] if len(checks) > 1 else None,
                  f"{ind.exact} in {list(ind.sharp_bounds)}",
                  status="cap_exceeded" if ind.exact is None else None)
        rep.claim("min_centralizer_is_third_eigenvalue", ind.sharp_bounds == ind.bounds)

    # isoperimetric number
    if n >= 2:
        theorem = isoperimetric_theorem(G)
        capped = False
        try:
            iso, iso_set = isoperimetric_exact(g, cap, strict=iso_strict)
        except SizeCapExceeded:
            iso, iso_set, capped = None, None, True
        except ValueError:  # strict bound leaves no subsets (n = 2)
            iso, iso_set = None, None
        ok = None if iso is None or theorem.kind == "unknown" else theorem.admits(iso)
        bounds = None
        if theorem.kind == "bounds":
            bounds = [theorem.lower, theorem.upper]
        rep.entries["isoperimetric"] = Entry(iso, theorem.value, bounds, named(iso_set),
                                             _status([ok], capped))
        convention = " (strict size bound)" if iso_strict else ""
        rep.claim(f"isoperimetric_{theorem.kind}", ok, f"{iso}{convention} vs {theorem.reason}",
                  status="cap_exceeded" if capped and theorem.kind != "unknown" else None)
        if con and not abelian:
            w = smallest_component_witness(g)
            rep.claim("component_witness_ratio", w.ratio == z, f"{w.ratio} vs {z}")
            if iso is not None:
                rep.claim("isoperimetric_at_most_witness", iso <= w.ratio)

        # bipartition width
        exact_bw, lower = bipartition_width(g, cap)
        ok = None if exact_bw is None or lower is None else exact_bw >= lower
        rep.entries["bipartition_width"] = Entry(exact_bw, None,
                                                 None if lower is None else [lower, None], None,
                                                 _status([ok], exact_bw is None))
        rep.claim("bipartition_lower_bound", ok, f"{exact_bw} >= {lower}",
                  status="cap_exceeded" if exact_bw is None and lower is not None else None)
    return rep
