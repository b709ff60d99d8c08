import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cgspec.catalog import BUILTIN, catalog, cyclic, dihedral, symmetric
from cgspec.errors import ClosureCapExceeded, NotAGroup, SizeCapExceeded, UnknownSpec
from cgspec.groups import (
    Permutation,
    Subset,
    canonical_order,
    center,
    centralizer,
    condi_elements,
    from_cayley,
    from_generators,
    from_permutations,
    is_abelian,
    is_abelian_subset,
    is_centralizer_abelian,
    parse_cycles,
    relabel,
    satisfies_con,
)


def brute_axioms(G):
    """Independent check of the group axioms straight from the table."""
    n = G.order
    T = G.cayley
    e = G.identity
    assert all(T[e, a] == a == T[a, e] for a in range(n))
    assert all(T[T[a, b], c] == T[a, T[b, c]] for a, b, c in itertools.product(range(n), repeat=3))
    assert all(any(T[a, b] == e for b in range(n)) for a in range(n))


# ---------------------------------------------------------------- tables

def test_from_cayley_accepts_z3():
    G = from_cayley([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    assert G.order == 3
    assert G.identity == 0
    assert G.names == ("0", "1", "2")


def test_identity_discovered_anywhere():
    # Z_2 with the identity stored at index 1
    G = from_cayley([[1, 0], [0, 1]], ["a", "e"])
    assert G.identity == 1
    assert G.mul(0, 0) == 1


def test_non_latin_row_rejected():
    with pytest.raises(NotAGroup, match="non-Latin row 1"):
        from_cayley([[0, 1], [0, 0]])


def test_out_of_range_entry_rejected():
    with pytest.raises(NotAGroup, match="outside"):
        from_cayley([[0, 2], [1, 0]])


def test_non_square_rejected():
    with pytest.raises(NotAGroup):
        from_cayley([[0, 1, 2], [1, 2, 0]])


def test_no_identity_rejected():
    # a Latin square without an identity element
    with pytest.raises(NotAGroup, match="identity"):
        from_cayley([[1, 0, 2], [0, 2, 1], [2, 1, 0]])


def test_non_associative_loop_rejected():
    # smallest non-associative loop (order 5): has identity 0, Latin, not a group
    loop = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(NotAGroup, match="non-associative"):
        from_cayley(loop)


def test_duplicate_names_rejected():
    with pytest.raises(NotAGroup):
        from_cayley([[0, 1], [1, 0]], ["a", "a"])


def test_table_is_read_only():
    G = cyclic(4)
    with pytest.raises(ValueError):
        G.cayley[0, 0] = 1


def test_group_equality_and_index():
    assert cyclic(5) == cyclic(5)
    assert cyclic(5) != cyclic(6)
    assert cyclic(5).index("g^3") == 3


# ---------------------------------------------------------------- permutations

def test_cycle_parsing():
    assert parse_cycles("(1 2 3)(4 5)") == [[1, 2, 3], [4, 5]]
    assert parse_cycles("(1,2)") == [[1, 2]]
    assert parse_cycles("id") == []
    with pytest.raises(ValueError):
        parse_cycles("(1 2")
    with pytest.raises(ValueError):
        parse_cycles("(1 1)")


def test_permutation_composition_right_to_left():
    a = Permutation.from_cycles("(1 2)", 3)
    b = Permutation.from_cycles("(2 3)", 3)
    # apply b first: 1 -> 1 -> 2, 2 -> 3 -> 3, 3 -> 2 -> 1
    assert (a * b).cycle_notation() == "(1 2 3)"
    assert Permutation.identity(3).cycle_notation() == "id"


def test_from_generators_s3():
    G = from_generators([Permutation.from_cycles("(1 2)", 3), Permutation.from_cycles("(1 2 3)")],
                        degree=3)
    assert G.order == 6
    assert G.identity == 0
    brute_axioms(G)


def test_from_generators_cap():
    gens = [Permutation.from_cycles("(1 2)", 5), Permutation.from_cycles("(1 2 3 4 5)")]
    with pytest.raises(ClosureCapExceeded):
        from_generators(gens, degree=5, cap=100)


def test_from_permutations_requires_closure():
    with pytest.raises(NotAGroup, match="not in the list"):
        from_permutations([Permutation.identity(3), Permutation.from_cycles("(1 2 3)")])


@settings(max_examples=30, deadline=None)
@given(st.lists(st.permutations(range(4)), min_size=1, max_size=3))
def test_closure_of_random_generators_is_a_group(images):
    gens = [Permutation(tuple(p)) for p in images]
    G = from_generators(gens, degree=4)
    assert 24 % G.order == 0  # Lagrange inside S_4
    brute_axioms(G)


# ---------------------------------------------------------------- catalog

@pytest.mark.parametrize("spec,order", [
    ("cyclic:1", 1), ("cyclic:7", 7), ("dihedral:6", 6), ("dihedral:48", 48),
    ("symmetric:4", 24), ("quaternion:8", 8), ("elementary_abelian:2^3", 8),
    ("elementary_abelian:3^2", 9), ("product:cyclic:4xcyclic:2", 8),
    ("product:cyclic:2xcyclic:2xcyclic:3", 12),
])
def test_catalog_orders(spec, order):
    assert catalog(spec).order == order


@pytest.mark.parametrize("spec", BUILTIN)
def test_catalog_groups_are_groups(spec):
    brute_axioms(catalog(spec))


@pytest.mark.parametrize("spec", ["cyclic:0", "dihedral:7", "dihedral:2", "foo:3", "cyclic",
                                  "quaternion:16", "elementary_abelian:4^2", "product:cyclic:2",
                                  "cyclic:x"])
def test_catalog_rejects_bad_specs(spec):
    with pytest.raises(UnknownSpec):
        catalog(spec)


def test_catalog_size_caps():
    with pytest.raises(SizeCapExceeded):
        catalog("symmetric:7")
    with pytest.raises(SizeCapExceeded):
        catalog("cyclic:2000")


def test_s3_catalog_order():
    G = catalog("symmetric:3")
    assert G.names == ("id", "(1 2 3)", "(1 3 2)", "(1 2)", "(1 3)", "(2 3)")


def test_d8_catalog_order():
    G = catalog("dihedral:8")
    assert G.names == ("id", "x^2", "x", "x^3", "y", "x^2y", "xy", "x^3y")


def test_dihedral_relation():
    G = dihedral(5)
    # y x = x^(m-1) y
    assert G.mul(G.index("y"), G.index("x")) == G.index("x^4y")


def test_q8_center():
    G = catalog("quaternion:8")
    assert center(G).members() == (G.index("id"), G.index("a"))


def test_relabel_is_isomorphism():
    G = catalog("dihedral:8")
    order = [3, 1, 0, 2, 7, 6, 5, 4]
    H = relabel(G, order)
    for i, j in itertools.product(range(8), repeat=2):
        assert H.names[H.mul(i, j)] == G.names[G.mul(order[i], order[j])]


def test_canonical_order_puts_center_first():
    G = symmetric(3)
    order = canonical_order(G)
    assert order[0] == G.identity


# ---------------------------------------------------------------- centralizers

def brute_centralizer(G, v):
    return {u for u in range(G.order) if G.mul(u, v) == G.mul(v, u)}


@pytest.mark.parametrize("spec", BUILTIN)
def test_centralizers_match_brute_force(spec):
    G = catalog(spec)
    for v in range(G.order):
        assert set(centralizer(G, v).members()) == brute_centralizer(G, v)
    z = set.intersection(*(brute_centralizer(G, v) for v in range(G.order)))
    assert set(center(G).members()) == z
    assert is_abelian(G) == (len(z) == G.order)


def brute_con(G):
    z = set(center(G).members())
    nc = [u for u in range(G.order) if u not in z]
    for u, v in itertools.combinations(nc, 2):
        cu, cv = brute_centralizer(G, u), brute_centralizer(G, v)
        if cu != cv and cu & cv != z:
            return False
    return True


@pytest.mark.parametrize("spec", BUILTIN + ["dihedral:18", "symmetric:5"])
def test_condition_matches_brute_force(spec):
    G = catalog(spec)
    assert satisfies_con(G).holds == brute_con(G)


def test_s4_fails_condition_with_valid_witness():
    G = catalog("symmetric:4")
    res = satisfies_con(G)
    assert not res.holds
    u, v = res.witness
    z = set(center(G).members())
    cu, cv = brute_centralizer(G, u), brute_centralizer(G, v)
    assert u not in z and v not in z
    assert cu != cv and cu & cv != z


def test_s4_condi_elements_are_three_cycles():
    G = catalog("symmetric:4")
    names = sorted(G.names[u] for u in condi_elements(G))
    assert len(names) == 8
    assert all(len(Permutation.from_cycles(s, 4).cycles()[0]) == 3 and s.count("(") == 1
               for s in names)


def test_centralizer_abelian():
    assert is_centralizer_abelian(catalog("symmetric:3"))
    assert is_centralizer_abelian(catalog("dihedral:10"))
    assert not is_centralizer_abelian(catalog("dihedral:8"))  # C(id) = D8
    assert not is_centralizer_abelian(catalog("symmetric:4"))


def test_abelian_subset():
    G = catalog("dihedral:8")
    assert is_abelian_subset(G, G.subset(["id", "x", "x^2", "x^3"]))
    assert not is_abelian_subset(G, G.subset(["x", "y"]))


# ---------------------------------------------------------------- subsets

@given(st.integers(1, 20).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(0, (1 << n) - 1), st.integers(0, (1 << n) - 1))))
def test_subset_algebra(args):
    n, a, b = args
    A, B = Subset(n, a), Subset(n, b)
    sa, sb = set(A.members()), set(B.members())
    assert set((A & B).members()) == sa & sb
    assert set((A | B).members()) == sa | sb
    assert set((A - B).members()) == sa - sb
    assert set(A.complement().members()) == set(range(n)) - sa
    assert len(A) == len(sa)
    assert A.issubset(A | B)


def test_subset_range_checks():
    with pytest.raises(ValueError):
        Subset(3, 8)
    with pytest.raises(ValueError):
        Subset.of(3, [3])


def test_spot_check_associativity_large_table():
    # order above the exhaustive threshold still validates (spot checks)
    G = cyclic(300)
    assert G.order == 300
    T = np.array(G.cayley)
    T[[1, 2]] = T[[2, 1]]  # swap two rows: still Latin, identity lost
    with pytest.raises(NotAGroup):
        from_cayley(T)
