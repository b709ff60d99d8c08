"""Named groups built from short spec strings such as ``dihedral:8``.

Supported specs::

    cyclic:n                 Z_n
    dihedral:2m              <x, y : x^m = y^2 = id, yx = x^(m-1) y>, order 2m, m >= 2
    symmetric:n              S_n on the points 1..n, n <= 6
    quaternion:8             <a, b, c, d : a^2 = id, b^2 = c^2 = d^2 = bcd = a>
    elementary_abelian:p^k   (Z_p)^k
    product:AxB[xC...]       direct product of catalog groups (no nested products)

Every catalog group is relabelled into canonical order (see
:func:`cgspec.groups.canonical_order`).
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import SizeCapExceeded, UnknownSpec
from .groups import (
    CLOSURE_CAP,
    GroupTable,
    Permutation,
    canonical_order,
    from_cayley,
    from_generators,
    relabel,
)

SYMMETRIC_MAX = 6

# groups exercised by the verify command and the acceptance suite
BUILTIN = (
    ["cyclic:%d" % n for n in (1, 2, 3, 4, 6, 8, 10)]
    + ["elementary_abelian:2^3", "product:cyclic:4xcyclic:2"]
    + ["dihedral:%d" % n for n in (6, 8, 10, 12, 16)]
    + ["quaternion:8", "symmetric:3", "symmetric:4"]
)


def catalog(spec: str) -> GroupTable:
    return relabel_canonical(_raw(spec.strip()))


def relabel_canonical(G: GroupTable) -> GroupTable:
    return relabel(G, canonical_order(G))


def _int(text: str, spec: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UnknownSpec(f"bad integer {text!r} in {spec!r}") from None


def _check_order(n: int, spec: str) -> None:
    if n > CLOSURE_CAP:
        raise SizeCapExceeded(f"{spec}: order {n} exceeds cap {CLOSURE_CAP}")


def _raw(spec: str) -> GroupTable:
    kind, sep, arg = spec.partition(":")
    if not sep:
        raise UnknownSpec(f"unknown group spec {spec!r}")
    if kind == "cyclic":
        n = _int(arg, spec)
        if n < 1:
            raise UnknownSpec(f"{spec}: order must be positive")
        _check_order(n, spec)
        return cyclic(n)
    if kind == "dihedral":
        n = _int(arg, spec)
        if n < 4 or n % 2:
            raise UnknownSpec(f"{spec}: dihedral order must be even and at least 4")
        _check_order(n, spec)
        return dihedral(n // 2)
    if kind == "symmetric":
        n = _int(arg, spec)
        if n < 1:
            raise UnknownSpec(f"{spec}: degree must be positive")
        if n > SYMMETRIC_MAX:
            raise SizeCapExceeded(f"{spec}: symmetric degree capped at {SYMMETRIC_MAX}")
        return symmetric(n)
    if kind == "quaternion":
        if arg != "8":
            raise UnknownSpec(f"{spec}: only quaternion:8 is supported")
        return quaternion8()
    if kind == "elementary_abelian":
        p_text, caret, k_text = arg.partition("^")
        if not caret:
            raise UnknownSpec(f"{spec}: expected p^k")
        p, k = _int(p_text, spec), _int(k_text, spec)
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)) or k < 1:
            raise UnknownSpec(f"{spec}: p must be prime and k >= 1")
        _check_order(p ** k, spec)
        return direct_product([cyclic(p)] * k)
    if kind == "product":
        parts = arg.split("x")
        if len(parts) < 2 or any(p.startswith("product:") for p in parts):
            raise UnknownSpec(f"{spec}: expected product:AxB with non-product factors")
        factors = [_raw(p) for p in parts]
        _check_order(int(np.prod([f.order for f in factors])), spec)
        return direct_product(factors)
    raise UnknownSpec(f"unknown group spec {spec!r}")


def _power_name(base: str, k: int) -> str:
    if k == 0:
        return ""
    return base if k == 1 else f"{base}^{k}"


def cyclic(n: int) -> GroupTable:
    idx = np.arange(n)
    names = ["id"] + [_power_name("g", k) for k in range(1, n)]
    return from_cayley((idx[:, None] + idx[None, :]) % n, names)


def dihedral(m: int) -> GroupTable:
    """Order ``2m``; element ``k + m*e`` is ``x^k y^e``."""
    n = 2 * m
    table = np.empty((n, n), dtype=np.int64)
    for a, e, b, f in itertools.product(range(m), range(2), range(m), range(2)):
        k = (a + (-1) ** e * b) % m
        table[a + m * e, b + m * f] = k + m * ((e + f) % 2)
    names = []
    for e in range(2):
        for k in range(m):
            name = _power_name("x", k) + ("y" if e else "")
            names.append(name or "id")
    return from_cayley(table, names)


def symmetric(n: int) -> GroupTable:
    """Elements with larger support come first, ties broken by cycle notation."""
    if n == 1:
        return from_generators([], degree=1)
    gens = [Permutation.from_cycles("(1 2)", n)]
    if n > 2:
        gens.append(Permutation.from_cycles("(" + " ".join(map(str, range(1, n + 1))) + ")", n))
    G = from_generators(gens, degree=n)
    perms = [Permutation.from_cycles(name if name != "id" else "", n) for name in G.names]

    def key(i):
        moved = sum(len(c) for c in perms[i].cycles())
        return (-moved if moved else -n - 1, perms[i].cycles())

    return relabel(G, sorted(range(G.order), key=key))


# unit quaternions 1, i, j, k as 0..3; _QMUL[p][q] = (sign, unit)
_QMUL = [
    [(1, 0), (1, 1), (1, 2), (1, 3)],
    [(1, 1), (-1, 0), (1, 3), (-1, 2)],
    [(1, 2), (-1, 3), (-1, 0), (1, 1)],
    [(1, 3), (1, 2), (-1, 1), (-1, 0)],
]


def quaternion8() -> GroupTable:
    """Elements ordered id, a, b, ab, c, ac, d, ad with a = -1, b = i, c = j, d = k."""
    elems = [(s, u) for u in range(4) for s in (1, -1)]
    pos = {e: i for i, e in enumerate(elems)}
    table = np.empty((8, 8), dtype=np.int64)
    for (i, (s1, u1)), (j, (s2, u2)) in itertools.product(enumerate(elems), repeat=2):
        s, u = _QMUL[u1][u2]
        table[i, j] = pos[(s1 * s2 * s, u)]
    return from_cayley(table, ["id", "a", "b", "ab", "c", "ac", "d", "ad"])


def direct_product(factors: list[GroupTable]) -> GroupTable:
    """Elements are tuples in lexicographic order of the factors' indices."""
    tables = [f.cayley for f in factors]
    orders = [f.order for f in factors]
    tuples = list(itertools.product(*[range(n) for n in orders]))
    strides = np.cumprod([1] + orders[::-1])[:-1][::-1]
    T = np.array(tuples, dtype=np.int64).reshape(len(tuples), len(factors))
    n = len(tuples)
    table = np.zeros((n, n), dtype=np.int64)
    for c, tab in enumerate(tables):
        table += tab[T[:, c][:, None], T[:, c][None, :]] * strides[c]
    names = ["(" + ",".join(f.names[i] for f, i in zip(factors, t)) + ")" for t in tuples]
    return from_cayley(table, names)
