"""Laplacian spectra of commuting graphs.

Three routes are provided:

* :func:`closed_form_spectrum` reads the full spectrum, with explicit integer
  eigenvectors, off the center and the non-central components.  It applies to
  abelian groups and to groups where any two non-central centralizers are
  equal or meet exactly in the center.
* :func:`spectrum_certificates` gives eigenvalues with lower bounds on their
  multiplicities for any non-abelian group.
* :func:`numeric_spectrum` (Jacobi) plus :func:`cluster_multiplicities` is the
  independent floating-point check.

Everything except the Jacobi oracle is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .errors import AmbiguousClustering, ConditionNotSatisfied
from .graph import CommutingGraph, build
from .groups import GroupTable, _bits, condi_elements, is_abelian, satisfies_con
from .jacobi import DEFAULT_TOL, numeric_spectrum

__all__ = [
    "LaplacianMatrix", "SpectrumReport", "EigenBasis", "Certificate",
    "laplacian", "closed_form_spectrum", "spectrum_certificates",
    "inconclusive_classes", "verify_eigenpair", "numeric_spectrum",
    "cluster_multiplicities", "basis_rank", "SpectrumVerdict", "spectrum_verdict",
    "certificates_hold", "numeric_report",
]

DEFAULT_GAP = 1e-6

Number = Union[int, float, Fraction]


@dataclass(frozen=True)
class LaplacianMatrix:
    entries: np.ndarray

    def __post_init__(self):
        E = self.entries
        if E.ndim != 2 or E.shape[0] != E.shape[1]:
            raise ValueError("Laplacian must be square")
        if not np.array_equal(E, E.T):
            raise ValueError("Laplacian must be symmetric")
        if E.shape[0] and E.sum(axis=1).any():
            raise ValueError("Laplacian rows must sum to zero")
        off = E[~np.eye(E.shape[0], dtype=bool)]
        if not np.isin(off, (0, -1)).all():
            raise ValueError("off-diagonal entries must be 0 or -1")
        E.setflags(write=False)

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    @property
    def trace(self) -> int:
        return int(np.trace(self.entries))

    def apply(self, y) -> np.ndarray:
        return self.entries @ np.asarray(y, dtype=np.int64)


@dataclass(frozen=True)
class EigenBasis:
    eigenvalue: int
    vectors: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class SpectrumReport:
    pairs: tuple[tuple[Number, int], ...]
    source: str
    bases: tuple[EigenBasis, ...] = ()

    def __post_init__(self):
        values = [v for v, _ in self.pairs]
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("eigenvalues must be strictly increasing")
        if any(m < 1 for _, m in self.pairs):
            raise ValueError("multiplicities must be positive")

    @property
    def total(self) -> int:
        return sum(m for _, m in self.pairs)

    def as_dict(self) -> dict:
        return {v: m for v, m in self.pairs}

    def multiplicity(self, value: Number) -> int:
        return self.as_dict().get(value, 0)

    def weighted_sum(self) -> Number:
        return sum(v * m for v, m in self.pairs)

    def distinct(self) -> list[Number]:
        return [v for v, _ in self.pairs]

    def values(self) -> list[Number]:
        """Eigenvalues listed with repetition, ascending."""
        return [v for v, m in self.pairs for _ in range(m)]


@dataclass(frozen=True)
class Certificate:
    eigenvalue: int
    min_multiplicity: int
    basis: EigenBasis
    provenance: str
    classes: tuple[tuple[int, ...], ...] = field(default=())


# --------------------------------------------------------------------------

def _as_graph(G: GroupTable | CommutingGraph) -> CommutingGraph:
    return G if isinstance(G, CommutingGraph) else build(G)


def laplacian(g: CommutingGraph) -> LaplacianMatrix:
    n = g.order
    E = np.zeros((n, n), dtype=np.int64)
    for u, row in enumerate(g.adjacency):
        for v in _bits(row):
            E[u, v] = -1
        E[u, u] = row.bit_count()
    return LaplacianMatrix(E)


def verify_eigenpair(L: LaplacianMatrix, lam: int, y: Sequence[int]) -> bool:
    """Exact check of ``L y == lam * y`` for a nonzero integer vector ``y``."""
    y = [int(x) for x in y]
    if len(y) != L.order:
        raise ValueError("dimension mismatch")
    if not any(y):
        return False
    rows = L.entries.tolist()
    return all(sum(a * b for a, b in zip(row, y)) == lam * yu for row, yu in zip(rows, y))


def basis_rank(vectors: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals by Bareiss (fraction-free) elimination.

    Dividing by the previous pivot keeps every entry a minor of the input,
    so the integers stay polynomially sized.
    """
    rows = [[int(x) for x in v] for v in vectors]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        p = pr[col]
        for r in range(rank + 1, len(rows)):
            f = rows[r][col]
            rows[r] = [(p * a - f * b) // prev for a, b in zip(rows[r], pr)]
        prev = p
        rank += 1
        if rank == len(rows):
            break
    return rank


# --- eigenvector constructions ---------------------------------------------

def _ones(n: int) -> tuple[int, ...]:
    return (1,) * n


def _spike_vectors(n: int, points: Sequence[int]) -> list[tuple[int, ...]]:
    """``n - 1`` at one vertex and ``-1`` elsewhere, one vector per point."""
    out = []
    for p in points:
        y = [-1] * n
        y[p] = n - 1
        out.append(tuple(y))
    return out


def _difference_vectors(n: int, members: Sequence[int]) -> list[tuple[int, ...]]:
    """``e_v - e_last`` for each member ``v`` other than the last."""
    *head, last = members
    out = []
    for v in head:
        y = [0] * n
        y[v], y[last] = 1, -1
        out.append(tuple(y))
    return out


def _balancing_vectors(n: int, comps: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """``|F_0|`` on ``F_i`` and ``-|F_i|`` on ``F_0``, for ``i >= 1``."""
    first = comps[0]
    out = []
    for comp in comps[1:]:
        y = [0] * n
        for v in comp:
            y[v] = len(first)
        for v in first:
            y[v] = -len(comp)
        out.append(tuple(y))
    return out


def _merge(entries: list[tuple[int, list[tuple[int, ...]]]]) -> dict[int, list]:
    merged: dict[int, list] = {}
    for value, vecs in entries:
        if vecs:
            merged.setdefault(value, []).extend(vecs)
    return merged


def closed_form_spectrum(G: GroupTable | CommutingGraph) -> SpectrumReport:
    """Full Laplacian spectrum with an explicit integer eigenbasis per value.

    Raises :class:`ConditionNotSatisfied` for non-abelian groups where two
    non-central centralizers differ yet share a non-central element.
    """
    g = _as_graph(G)
    n = g.order
    if isinstance(G, GroupTable):
        con = satisfies_con(G)
        if not con.holds:
            raise ConditionNotSatisfied(con.witness)
    elif not g.satisfies_con:
        raise ConditionNotSatisfied(_graph_witness(g))

    parts: list[tuple[int, list]] = [(0, [_ones(n)])]
    if g.is_complete:
        parts.append((n, _spike_vectors(n, range(n - 1))))
    else:
        z = g.center.size
        comps = [c.members() for c in g.component_partition]
        parts.append((n, _spike_vectors(n, g.center.members())))
        parts.append((z, _balancing_vectors(n, comps)))
        for comp in comps:
            lam = g.degrees[comp[0]] + 1
            if lam <= z:
                raise RuntimeError(f"component eigenvalue {lam} not above center size {z}")
            parts.append((lam, _difference_vectors(n, comp)))
    merged = _merge(parts)
    pairs = tuple((v, len(merged[v])) for v in sorted(merged))
    bases = tuple(EigenBasis(v, tuple(merged[v])) for v in sorted(merged))
    report = SpectrumReport(pairs, "closed_form", bases)
    if report.total != n:
        raise RuntimeError(f"multiplicities sum to {report.total}, expected {n}")
    return report


def _graph_witness(g: CommutingGraph) -> tuple[int, int]:
    z = g.center.mask
    nc = [u for u in range(g.order) if not z >> u & 1]
    for a, u in enumerate(nc):
        cu = g.closed_neighborhood(u)
        for v in nc[a + 1:]:
            cv = g.closed_neighborhood(v)
            if cu != cv and cu & cv != z:
                return (u, v)
    raise RuntimeError("no witness although the condition was reported to fail")


def _condi_classes(G: GroupTable) -> list[tuple[int, ...]]:
    """Elements passing the single-element trichotomy, grouped by centralizer."""
    cm = G.centralizer_masks
    groups: dict[int, list[int]] = {}
    for u in condi_elements(G):
        groups.setdefault(cm[u], []).append(u)
    return [tuple(v) for v in groups.values()]


def inconclusive_classes(G: GroupTable) -> list[tuple[int, ...]]:
    """Centralizer classes of qualifying elements whose non-central part is a
    single element, for which no eigenvalue can be certified."""
    z = G.center_mask
    cm = G.centralizer_masks
    return [cls for cls in _condi_classes(G) if (cm[cls[0]] & ~z).bit_count() == 1]


def spectrum_certificates(G: GroupTable) -> list[Certificate]:
    """Certified eigenvalues with multiplicity lower bounds for non-abelian ``G``.

    Centralizer classes sharing the same eigenvalue are pooled into one
    certificate; their eigenvectors have disjoint supports.
    """
    if is_abelian(G):
        raise ValueError("certificates are defined for non-abelian groups")
    n = G.order
    z = G.center_mask
    cm = G.centralizer_masks
    center = list(_bits(z))
    certs = [
        Certificate(0, 1, EigenBasis(0, (_ones(n),)), "connected graph; all-ones kernel vector"),
        Certificate(n, len(center), EigenBasis(n, tuple(_spike_vectors(n, center))),
                    "one spike vector per central element"),
    ]

    by_value: dict[int, tuple[list, list]] = {}
    for cls in _condi_classes(G):
        comp = list(_bits(cm[cls[0]] & ~z))
        if len(comp) < 2:
            continue
        lam = cm[cls[0]].bit_count()
        vecs, classes = by_value.setdefault(lam, ([], []))
        vecs.extend(_difference_vectors(n, comp))
        classes.append(cls)
    for lam, (vecs, classes) in by_value.items():
        certs.append(Certificate(lam, len(vecs), EigenBasis(lam, tuple(vecs)),
                                 f"difference vectors over {len(classes)} centralizer class(es)",
                                 tuple(classes)))

    g = build(G)
    if g.satisfies_con:
        comps = [c.members() for c in g.component_partition]
        vecs = _balancing_vectors(n, comps)
        if vecs:
            certs.append(Certificate(len(center), len(vecs), EigenBasis(len(center), tuple(vecs)),
                                     "balancing vectors across non-central components"))
    return sorted(certs, key=lambda c: c.eigenvalue)


def cluster_multiplicities(eigs: Sequence[float], gap: float = DEFAULT_GAP) -> SpectrumReport:
    """Group nearly equal eigenvalues and count them.

    Neighbours closer than ``gap`` merge; a neighbour distance in
    ``[gap, 10 * gap)`` raises :class:`AmbiguousClustering`.  A cluster mean
    within ``gap`` of an integer is reported as that integer.
    """
    eigs = sorted(float(x) for x in eigs)
    if not eigs:
        return SpectrumReport((), "numeric")
    clusters = [[eigs[0]]]
    for prev, x in zip(eigs, eigs[1:]):
        d = x - prev
        if d < gap:
            clusters[-1].append(x)
        elif d < 10 * gap:
            raise AmbiguousClustering(f"eigenvalues {prev!r} and {x!r} are {d:.3e} apart")
        else:
            clusters.append([x])
    pairs = []
    for cl in clusters:
        mean = sum(cl) / len(cl)
        r = round(mean)
        value = int(r) if abs(mean - r) < gap else mean
        pairs.append((value, len(cl)))
    return SpectrumReport(tuple(pairs), "numeric")


def numeric_report(g: CommutingGraph | GroupTable, tol: float = DEFAULT_TOL,
                   gap: float = DEFAULT_GAP) -> SpectrumReport:
    return cluster_multiplicities(numeric_spectrum(laplacian(_as_graph(g)), tol), gap)


@dataclass(frozen=True)
class SpectrumVerdict:
    numeric: SpectrumReport
    closed_form: SpectrumReport | None
    certificates: tuple[Certificate, ...]
    verdict: str

    @property
    def ok(self) -> bool:
        return self.verdict in ("agree", "certificates-consistent")


def certificates_hold(certs: Sequence[Certificate], numeric: SpectrumReport) -> bool:
    """Each certified eigenvalue appears numerically at least as often as claimed."""
    return all(numeric.multiplicity(c.eigenvalue) >= c.min_multiplicity for c in certs)


def spectrum_verdict(G: GroupTable, g: CommutingGraph | None = None, tol: float = DEFAULT_TOL,
                     gap: float = DEFAULT_GAP) -> SpectrumVerdict:
    """Compare the numeric spectrum of ``g`` (default: the graph of ``G``)
    against the closed form, or against the certificates when the closed
    form does not apply."""
    g = build(G) if g is None else g
    numeric = numeric_report(g, tol, gap)
    try:
        closed = closed_form_spectrum(G)
    except ConditionNotSatisfied:
        closed = None
    if closed is not None:
        certs = ()
        verdict = "agree" if closed.pairs == numeric.pairs else "disagree"
    else:
        certs = tuple(spectrum_certificates(G))
        verdict = "certificates-consistent" if certificates_hold(certs, numeric) \
            else "certificates-inconsistent"
    return SpectrumVerdict(numeric, closed, certs, verdict)
