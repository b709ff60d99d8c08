"""The commuting graph of a finite group.

Vertices are group elements; distinct ``u`` and ``v`` are adjacent when
they commute.  Adjacency rows are integer bitsets so that boundary counts
elsewhere reduce to popcounts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import EmptyNoncentralPart
from .groups import GroupTable, Subset, _bits, satisfies_con


@dataclass(frozen=True)
class CommutingGraph:
    names: tuple[str, ...]
    adjacency: tuple[int, ...]
    center: Subset
    component_partition: tuple[Subset, ...]
    satisfies_con: bool

    @property
    def order(self) -> int:
        return len(self.adjacency)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(row.bit_count() for row in self.adjacency)

    @property
    def is_complete(self) -> bool:
        return self.center.size == self.order

    def closed_neighborhood(self, u: int) -> int:
        """Bitset of ``C(u)``: the neighbours of ``u`` together with ``u``."""
        return self.adjacency[u] | 1 << u

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, row in enumerate(self.adjacency):
            for v in _bits(row >> (u + 1)):
                yield u, u + 1 + v

    @property
    def edge_count(self) -> int:
        return sum(self.degrees) // 2


def build(G: GroupTable) -> CommutingGraph:
    n = G.order
    adjacency = tuple(m & ~(1 << u) for u, m in enumerate(G.centralizer_masks))
    center = Subset(n, G.center_mask)
    comps = _components(adjacency, center.mask, n)
    return CommutingGraph(
        names=G.names,
        adjacency=adjacency,
        center=center,
        component_partition=tuple(Subset(n, m) for m in comps),
        satisfies_con=satisfies_con(G).holds,
    )


def _components(adjacency, excluded: int, n: int) -> list[int]:
    remaining = ((1 << n) - 1) & ~excluded
    out = []
    while remaining:
        comp = frontier = remaining & -remaining
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= adjacency[v]
            frontier = nxt & remaining & ~comp
            comp |= frontier
        remaining &= ~comp
        out.append(comp)
    return out


def components_noncentral(g: CommutingGraph) -> list[Subset]:
    """Components of the graph induced on the non-central vertices,
    ordered by smallest member."""
    if g.is_complete:
        raise EmptyNoncentralPart("abelian group: every vertex is central")
    return [Subset(g.order, m) for m in _components(g.adjacency, g.center.mask, g.order)]


def bfs_distances(g: CommutingGraph, source: int) -> list[int]:
    n = g.order
    if not 0 <= source < n:
        raise IndexError(f"vertex {source} out of range")
    dist = [-1] * n
    dist[source] = 0
    seen = frontier = 1 << source
    level = 0
    while frontier:
        level += 1
        nxt = 0
        for v in _bits(frontier):
            nxt |= g.adjacency[v]
        frontier = nxt & ~seen
        seen |= frontier
        for v in _bits(frontier):
            dist[v] = level
    return dist


def distance_matrix(g: CommutingGraph) -> list[list[int]]:
    return [bfs_distances(g, s) for s in range(g.order)]


def diameter(g: CommutingGraph) -> int:
    return max(max(row) for row in distance_matrix(g))


def distance_sum(g: CommutingGraph) -> int:
    return sum(sum(row) for row in distance_matrix(g))


def _dot_id(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: CommutingGraph) -> str:
    lines = ["graph {"]
    for v, name in enumerate(g.names):
        attr = " [central=true, shape=doublecircle]" if v in g.center else ""
        lines.append(f"  {_dot_id(name)}{attr};")
    for u, v in g.edges():
        lines.append(f"  {_dot_id(g.names[u])} -- {_dot_id(g.names[v])};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json_dict(g: CommutingGraph) -> dict:
    return {
        "n": g.order,
        "names": list(g.names),
        "edges": [[u, v] for u, v in g.edges()],
        "center": list(g.center.members()),
        "components": [list(c.members()) for c in g.component_partition],
    }


def export_json(g: CommutingGraph) -> str:
    return json.dumps({"schema": 1, **to_json_dict(g)}, indent=2) + "\n"


def mean_distance_direct(g: CommutingGraph) -> Fraction:
    """Sum of all pairwise distances divided by ``n**2`` (diagonal included)."""
    return Fraction(distance_sum(g), g.order ** 2)
