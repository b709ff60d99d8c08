"""Finite groups as validated Cayley tables, plus centralizer machinery.

Elements are integer indices ``0..n-1``.  Sets of elements are carried as
:class:`Subset` values, which wrap a Python ``int`` used as a bitset
(bit ``i`` set means element ``i`` is a member).
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ClosureCapExceeded, NotAGroup

FULL_ASSOC_CHECK_MAX = 256
ASSOC_SPOT_CHECKS = 100_000
CLOSURE_CAP = 1024


# --------------------------------------------------------------------------
# Subsets
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Subset:
    """A set of element indices drawn from a ground set of size ``n``."""

    n: int
    mask: int
    size: int = field(init=False, compare=False)

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.n:
            raise ValueError(f"mask {self.mask:#x} out of range for n={self.n}")
        object.__setattr__(self, "size", self.mask.bit_count())

    @classmethod
    def of(cls, n: int, members: Iterable[int]) -> Subset:
        mask = 0
        for i in members:
            if not 0 <= i < n:
                raise ValueError(f"element {i} out of range for n={n}")
            mask |= 1 << i
        return cls(n, mask)

    @classmethod
    def full(cls, n: int) -> Subset:
        return cls(n, (1 << n) - 1)

    @classmethod
    def empty(cls, n: int) -> Subset:
        return cls(n, 0)

    def members(self) -> tuple[int, ...]:
        return tuple(_bits(self.mask))

    def __iter__(self) -> Iterator[int]:
        return _bits(self.mask)

    def __len__(self) -> int:
        return self.size

    def __contains__(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def __and__(self, other: Subset) -> Subset:
        return Subset(self.n, self.mask & other.mask)

    def __or__(self, other: Subset) -> Subset:
        return Subset(self.n, self.mask | other.mask)

    def __sub__(self, other: Subset) -> Subset:
        return Subset(self.n, self.mask & ~other.mask)

    def complement(self) -> Subset:
        return Subset(self.n, ((1 << self.n) - 1) & ~self.mask)

    def issubset(self, other: Subset) -> bool:
        return self.mask & ~other.mask == 0

    def __repr__(self) -> str:
        return f"Subset(n={self.n}, {set(self.members()) or '{}'})"


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _row_to_mask(row: np.ndarray) -> int:
    return int.from_bytes(np.packbits(row.astype(bool), bitorder="little").tobytes(), "little")


# --------------------------------------------------------------------------
# Permutations
# --------------------------------------------------------------------------

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class Permutation:
    """A bijection on ``{0, ..., degree-1}`` stored as its image tuple.

    Products compose right to left: ``(p * q)(i) == p(q(i))``.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, text: str, degree: int | None = None) -> Permutation:
        """Parse cycle notation with 1-based points, e.g. ``"(1 2 3)(4 5)"``."""
        cycles = parse_cycles(text)
        largest = max((p for c in cycles for p in c), default=0)
        degree = largest if degree is None else degree
        if largest > degree:
            raise ValueError(f"point {largest} exceeds degree {degree}")
        images = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a - 1] = b - 1
        return cls(tuple(images))

    def __mul__(self, other: Permutation) -> Permutation:
        return Permutation(tuple(self.images[j] for j in other.images))

    def __call__(self, i: int) -> int:
        return self.images[i]

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, 0-based, each starting at its smallest point."""
        seen = set()
        out = []
        for start in range(self.degree):
            if start in seen or self.images[start] == start:
                continue
            cyc = [start]
            seen.add(start)
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def cycle_notation(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "id"
        return "".join("(" + " ".join(str(p + 1) for p in c) + ")" for c in cycles)


def parse_cycles(text: str) -> list[list[int]]:
    text = text.strip()
    if text in ("", "id", "()"):
        return []
    if _CYCLE_RE.sub("", text).strip():
        raise ValueError(f"malformed cycle notation: {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(text):
        points = [int(tok) for tok in re.split(r"[\s,]+", body.strip()) if tok]
        if any(p < 1 for p in points) or len(set(points)) != len(points):
            raise ValueError(f"malformed cycle {body!r}")
        if len(points) > 1:
            cycles.append(points)
    return cycles


# --------------------------------------------------------------------------
# Group tables
# --------------------------------------------------------------------------

class GroupTable:
    """A finite group given by its multiplication table.

    ``cayley[i, j]`` is the index of ``g_i * g_j``.  Instances are only
    produced by the constructors in this module, which validate the axioms.
    """

    def __init__(self, cayley: np.ndarray, names: Sequence[str], identity: int):
        cayley = np.array(cayley, dtype=np.int64)
        cayley.setflags(write=False)
        self.cayley = cayley
        self.names = tuple(names)
        self.identity = identity

    @property
    def order(self) -> int:
        return self.cayley.shape[0]

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"GroupTable(order={self.order})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupTable):
            return NotImplemented
        return (self.names == other.names and self.identity == other.identity
                and np.array_equal(self.cayley, other.cayley))

    __hash__ = None

    def mul(self, i: int, j: int) -> int:
        return int(self.cayley[i, j])

    def index(self, name: str) -> int:
        return self.names.index(name)

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        rows, cols = np.nonzero(self.cayley == self.identity)
        inv = np.empty(self.order, dtype=np.int64)
        inv[rows] = cols
        return tuple(int(x) for x in inv)

    @cached_property
    def commute_matrix(self) -> np.ndarray:
        m = self.cayley == self.cayley.T
        m.setflags(write=False)
        return m

    @cached_property
    def centralizer_masks(self) -> tuple[int, ...]:
        return tuple(_row_to_mask(row) for row in self.commute_matrix)

    @cached_property
    def center_mask(self) -> int:
        return _row_to_mask(self.commute_matrix.all(axis=1))

    def subset(self, members: Iterable[int | str]) -> Subset:
        idx = [self.index(m) if isinstance(m, str) else m for m in members]
        return Subset.of(self.order, idx)


def from_cayley(raw, names: Sequence[str] | None = None) -> GroupTable:
    """Validate a raw multiplication table and wrap it as a :class:`GroupTable`.

    The identity is discovered from the table.  Raises :class:`NotAGroup`
    naming the offending indices when an axiom fails.
    """
    try:
        table = np.asarray(raw, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise NotAGroup(f"table is not an integer array: {exc}") from None
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
        raise NotAGroup(f"table must be a non-empty square array, got shape {table.shape}")
    n = table.shape[0]
    if names is None:
        names = [str(i) for i in range(n)]
    names = [str(s) for s in names]
    if len(names) != n:
        raise NotAGroup(f"{len(names)} names given for a table of order {n}")
    if len(set(names)) != n:
        raise NotAGroup("element names are not distinct")
    bad = np.argwhere((table < 0) | (table >= n))
    if len(bad):
        i, j = bad[0]
        raise NotAGroup(f"entry [{i}][{j}] = {table[i, j]} outside 0..{n - 1}")

    ref = np.arange(n)
    for i in range(n):
        if not np.array_equal(np.sort(table[i]), ref):
            raise NotAGroup(f"non-Latin row {i}")
    for j in range(n):
        if not np.array_equal(np.sort(table[:, j]), ref):
            raise NotAGroup(f"non-Latin column {j}")

    left = np.flatnonzero((table == ref).all(axis=1))
    right = np.flatnonzero((table == ref[:, None]).all(axis=0))
    ids = np.intersect1d(left, right)
    if len(ids) == 0:
        raise NotAGroup("no two-sided identity element")
    e = int(ids[0])

    _check_associative(table)

    for i in range(n):
        if not (table[i] == e).any():
            raise NotAGroup(f"element {i} has no inverse")
    return GroupTable(table, names, e)


def _check_associative(table: np.ndarray) -> None:
    n = table.shape[0]
    if n <= FULL_ASSOC_CHECK_MAX:
        small = table.astype(np.int16 if n < 2 ** 15 else np.int32)
        # both indexed [i, j, k]
        lhs = small[small]       # (i*j)*k
        rhs = small[:, small]    # i*(j*k)
        bad = np.argwhere(lhs != rhs)
    else:
        rng = np.random.default_rng(0)
        i, j, k = rng.integers(0, n, size=(3, ASSOC_SPOT_CHECKS))
        lhs = table[table[i, j], k]
        rhs = table[i, table[j, k]]
        miss = np.flatnonzero(lhs != rhs)
        bad = np.stack([i[miss], j[miss], k[miss]], axis=1)
    if len(bad):
        i, j, k = (int(x) for x in bad[0])
        raise NotAGroup(f"non-associative triple ({i}, {j}, {k})")


def from_permutations(perms: Sequence[Permutation], names: Sequence[str] | None = None) -> GroupTable:
    """Build the table of an explicitly listed, closed set of permutations.

    The listed order is kept, so element ``i`` of the result is ``perms[i]``.
    """
    perms = list(perms)
    if not perms:
        raise NotAGroup("empty element list")
    degree = perms[0].degree
    if any(p.degree != degree for p in perms):
        raise ValueError("permutations of mixed degree")
    P = np.array([p.images for p in perms], dtype=np.int64).reshape(len(perms), degree)
    table = _compose_table(P)
    if names is None:
        names = [p.cycle_notation() for p in perms]
    return from_cayley(table, names)


def _compose_table(P: np.ndarray) -> np.ndarray:
    n, d = P.shape
    index = {row.tobytes(): i for i, row in enumerate(P)}
    if len(index) != n:
        raise NotAGroup("repeated permutation in element list")
    # products[i, j] = P[i] o P[j], i.e. P[i][P[j][k]]
    products = np.ascontiguousarray(P[np.arange(n)[:, None, None], P[None, :, :]])
    raw = products.tobytes()
    step = d * products.itemsize
    table = np.empty(n * n, dtype=np.int64)
    for k in range(n * n):
        try:
            table[k] = index[raw[k * step:(k + 1) * step]]
        except KeyError:
            i, j = divmod(k, n)
            raise NotAGroup(f"product of elements {i} and {j} is not in the list") from None
    return table.reshape(n, n)


def from_generators(gens: Sequence[Permutation], degree: int | None = None,
                    cap: int = CLOSURE_CAP) -> GroupTable:
    """Close a set of permutations under composition.

    Elements are found breadth first from the identity, which is element 0.
    Names are cycle notations.
    """
    gens = list(gens)
    if degree is None:
        degree = gens[0].degree if gens else 1
    gens = [_pad(g, degree) for g in gens]
    ident = Permutation.identity(degree)
    seen = {ident.images: 0}
    order = [ident]
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = g * s
            if h.images not in seen:
                if len(order) >= cap:
                    raise ClosureCapExceeded(f"closure exceeds {cap} elements")
                seen[h.images] = len(order)
                order.append(h)
                queue.append(h)
    return from_permutations(order)


def _pad(p: Permutation, degree: int) -> Permutation:
    if p.degree == degree:
        return p
    if p.degree > degree:
        raise ValueError(f"generator of degree {p.degree} exceeds degree {degree}")
    return Permutation(p.images + tuple(range(p.degree, degree)))


def relabel(G: GroupTable, order: Sequence[int]) -> GroupTable:
    """Return an isomorphic copy whose element ``k`` is ``G``'s element ``order[k]``."""
    order = np.asarray(order, dtype=np.int64)
    n = G.order
    if sorted(order.tolist()) != list(range(n)):
        raise ValueError("order must be a permutation of the element indices")
    inv = np.empty(n, dtype=np.int64)
    inv[order] = np.arange(n)
    table = inv[G.cayley[np.ix_(order, order)]]
    return GroupTable(table, [G.names[i] for i in order], int(inv[G.identity]))


def canonical_order(G: GroupTable) -> list[int]:
    """Identity first, then the rest of the center, then non-central elements
    grouped by connected component of the non-central commuting graph.

    Components are ordered by their smallest current index; members keep
    their current relative order.
    """
    z = G.center_mask
    head = [G.identity] + [i for i in _bits(z) if i != G.identity]
    comps = noncentral_components(G)
    return head + [i for comp in comps for i in comp]


def noncentral_components(G: GroupTable) -> list[list[int]]:
    """Connected components of the commuting graph restricted to ``G - Z(G)``."""
    z = G.center_mask
    cm = G.centralizer_masks
    remaining = ((1 << G.order) - 1) & ~z
    comps = []
    while remaining:
        start = remaining & -remaining
        comp = start
        frontier = start
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= cm[v]
            nxt &= remaining & ~comp
            comp |= nxt
            frontier = nxt
        remaining &= ~comp
        comps.append(list(_bits(comp)))
    return comps


# --------------------------------------------------------------------------
# Centers, centralizers and the trichotomy condition
# --------------------------------------------------------------------------

def center(G: GroupTable) -> Subset:
    return Subset(G.order, G.center_mask)


def centralizer(G: GroupTable, v: int) -> Subset:
    if not 0 <= v < G.order:
        raise IndexError(f"element {v} out of range")
    return Subset(G.order, G.centralizer_masks[v])


def is_abelian(G: GroupTable) -> bool:
    return bool(G.commute_matrix.all())


@dataclass(frozen=True)
class ConCheckResult:
    holds: bool
    witness: tuple[int, int] | None = None


def _pair_ok(cu: int, cv: int, z: int) -> bool:
    return cu == cv or (cu & cv) == z


def satisfies_con(G: GroupTable) -> ConCheckResult:
    """Check that any two non-central elements have equal centralizers or
    centralizers meeting exactly in the center.

    Abelian groups hold vacuously.  On failure the first offending pair
    ``(u, v)`` with ``u < v`` is returned as the witness.
    """
    z = G.center_mask
    cm = G.centralizer_masks
    nc = [i for i in range(G.order) if not z >> i & 1]
    for a, u in enumerate(nc):
        cu = cm[u]
        for v in nc[a + 1:]:
            if not _pair_ok(cu, cm[v], z):
                return ConCheckResult(False, (u, v))
    return ConCheckResult(True)


def condi_elements(G: GroupTable) -> list[int]:
    """Non-central ``u`` for which the trichotomy holds against every non-central ``v``."""
    z = G.center_mask
    cm = G.centralizer_masks
    nc = [i for i in range(G.order) if not z >> i & 1]
    return [u for u in nc if all(_pair_ok(cm[u], cm[v], z) for v in nc)]


def _is_abelian_set(G: GroupTable, mask: int) -> bool:
    cm = G.centralizer_masks
    return all(cm[u] & mask == mask for u in _bits(mask))


def is_centralizer_abelian(G: GroupTable) -> bool:
    cm = G.centralizer_masks
    return all(_is_abelian_set(G, cm[v]) for v in range(G.order) if v != G.identity)


def is_abelian_subset(G: GroupTable, S: Subset) -> bool:
    """True when the elements of ``S`` pairwise commute."""
    return _is_abelian_set(G, S.mask)
