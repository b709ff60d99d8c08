import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cgspec.catalog import BUILTIN, catalog, dihedral
from cgspec.errors import AmbiguousClustering, ConditionNotSatisfied, NoConvergence
from cgspec.graph import build
from cgspec.groups import satisfies_con
from cgspec.jacobi import numeric_spectrum, round_robin
from cgspec.spectrum import (
    LaplacianMatrix,
    SpectrumReport,
    basis_rank,
    certificates_hold,
    closed_form_spectrum,
    cluster_multiplicities,
    inconclusive_classes,
    laplacian,
    numeric_report,
    spectrum_certificates,
    spectrum_verdict,
    verify_eigenpair,
)

CON_GROUPS = [s for s in BUILTIN if satisfies_con(catalog(s)).holds]


def oracle_pairs(L):
    """Eigenvalue multiset from LAPACK, rounded to integers (test oracle only)."""
    vals = np.linalg.eigvalsh(np.asarray(L, dtype=float))
    ints = np.rint(vals).astype(int)
    assert np.allclose(vals, ints, atol=1e-8)
    u, c = np.unique(ints, return_counts=True)
    return tuple((int(a), int(b)) for a, b in zip(u, c))


# ---------------------------------------------------------------- Laplacian

def test_laplacian_validation():
    with pytest.raises(ValueError):
        LaplacianMatrix(np.array([[1, -1], [0, 0]]))
    with pytest.raises(ValueError):
        LaplacianMatrix(np.array([[2, -2], [-2, 2]]))
    L = laplacian(build(catalog("symmetric:3")))
    assert L.trace == 12
    with pytest.raises(ValueError):
        L.entries[0, 0] = 3


def test_s3_laplacian():
    L = laplacian(build(catalog("symmetric:3"))).entries
    expected = np.array([
        [5, -1, -1, -1, -1, -1],
        [-1, 2, -1, 0, 0, 0],
        [-1, -1, 2, 0, 0, 0],
        [-1, 0, 0, 1, 0, 0],
        [-1, 0, 0, 0, 1, 0],
        [-1, 0, 0, 0, 0, 1],
    ])
    assert np.array_equal(L, expected)


# ---------------------------------------------------------------- closed form

@pytest.mark.parametrize("spec,pairs", [
    ("symmetric:3", ((0, 1), (1, 3), (3, 1), (6, 1))),
    ("dihedral:8", ((0, 1), (2, 2), (4, 3), (8, 2))),
    ("quaternion:8", ((0, 1), (2, 2), (4, 3), (8, 2))),
    ("cyclic:8", ((0, 1), (8, 7))),
    ("cyclic:1", ((0, 1),)),
])
def test_closed_form_examples(spec, pairs):
    assert closed_form_spectrum(catalog(spec)).pairs == pairs


@pytest.mark.parametrize("spec", CON_GROUPS + ["dihedral:18", "dihedral:30", "dihedral:48"])
def test_closed_form_matches_lapack(spec):
    G = catalog(spec)
    L = laplacian(build(G))
    assert closed_form_spectrum(G).pairs == oracle_pairs(L.entries)


@pytest.mark.parametrize("spec", CON_GROUPS)
def test_closed_form_bases_are_exact_and_full_rank(spec):
    G = catalog(spec)
    L = laplacian(build(G))
    rep = closed_form_spectrum(G)
    for b, (value, mult) in zip(rep.bases, rep.pairs):
        assert b.eigenvalue == value
        assert len(b.vectors) == mult
        assert all(verify_eigenpair(L, value, y) for y in b.vectors)
        assert basis_rank(b.vectors) == mult
    every = [y for b in rep.bases for y in b.vectors]
    assert basis_rank(every) == G.order


def test_closed_form_rejects_s4():
    with pytest.raises(ConditionNotSatisfied) as err:
        closed_form_spectrum(catalog("symmetric:4"))
    assert len(err.value.witness) == 2


def test_verify_eigenpair_rejects_zero_and_wrong_value():
    L = laplacian(build(catalog("symmetric:3")))
    assert not verify_eigenpair(L, 0, [0] * 6)
    assert verify_eigenpair(L, 0, [1] * 6)
    assert not verify_eigenpair(L, 1, [1] * 6)


def test_basis_rank_exact():
    assert basis_rank([(1, 0, 0), (0, 1, 0), (1, 1, 0)]) == 2
    assert basis_rank([(2, -1, -1), (-1, 2, -1), (-1, -1, 2)]) == 2
    assert basis_rank([]) == 0


# ---------------------------------------------------------------- certificates

def test_s4_certificates():
    G = catalog("symmetric:4")
    certs = {c.eigenvalue: c.min_multiplicity for c in spectrum_certificates(G)}
    assert certs == {0: 1, 3: 4, 24: 1}
    L = laplacian(build(G))
    for c in spectrum_certificates(G):
        assert all(verify_eigenpair(L, c.eigenvalue, y) for y in c.basis.vectors)
        assert basis_rank(c.basis.vectors) == c.min_multiplicity


def test_s4_certificates_hold_against_lapack():
    G = catalog("symmetric:4")
    vals = np.linalg.eigvalsh(laplacian(build(G)).entries.astype(float))
    for c in spectrum_certificates(G):
        assert np.sum(np.abs(vals - c.eigenvalue) < 1e-8) >= c.min_multiplicity


def test_certificates_for_condition_groups_cover_closed_form():
    G = catalog("dihedral:8")
    closed = closed_form_spectrum(G).as_dict()
    for c in spectrum_certificates(G):
        assert closed[c.eigenvalue] >= c.min_multiplicity


def test_certificates_reject_abelian():
    with pytest.raises(ValueError):
        spectrum_certificates(catalog("cyclic:4"))


def test_inconclusive_classes_s3():
    # reflections of S3 have centralizer {id, s}: a single non-central element
    G = catalog("symmetric:3")
    assert sorted(G.names[c[0]] for c in inconclusive_classes(G)) == ["(1 2)", "(1 3)", "(2 3)"]


# ---------------------------------------------------------------- Jacobi

def test_round_robin_covers_each_pair_once():
    for n in range(1, 12):
        seen = []
        for p, q in round_robin(n):
            assert len(set(p.tolist()) | set(q.tolist())) == 2 * len(p)  # disjoint
            seen += list(zip(p.tolist(), q.tolist()))
        assert sorted(seen) == [(i, j) for i in range(n) for j in range(i + 1, n)]


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 9), st.integers(1, 9)).map(lambda t: (t[0], t[0])),
              elements=st.floats(-100, 100)))
def test_jacobi_matches_lapack_on_random_symmetric(M):
    A = (M + M.T) / 2
    got = np.array(numeric_spectrum(A, tol=1e-12))
    want = np.linalg.eigvalsh(A)
    scale = max(1.0, float(np.abs(A).max()))
    assert np.allclose(got, want, atol=1e-8 * scale * len(A))


def test_jacobi_diagonal_input():
    assert numeric_spectrum(np.diag([3.0, 1.0, 2.0])) == [1.0, 2.0, 3.0]


def test_jacobi_rejects_asymmetric():
    with pytest.raises(ValueError):
        numeric_spectrum(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_jacobi_no_convergence():
    A = np.ones((6, 6)) + np.diag(np.arange(6.0))
    with pytest.raises(NoConvergence):
        numeric_spectrum(A, tol=1e-300, max_sweeps=1)


@pytest.mark.parametrize("spec", BUILTIN + ["symmetric:5"])
def test_numeric_laplacian_matches_lapack(spec):
    L = laplacian(build(catalog(spec))).entries
    got = np.array(numeric_spectrum(L))
    assert np.allclose(got, np.linalg.eigvalsh(L.astype(float)), atol=1e-8)


# ---------------------------------------------------------------- clustering

def test_cluster_basic():
    rep = cluster_multiplicities([0.0, 1e-10, 2.0 - 1e-9, 2.0, 2.0 + 1e-9, 3.5])
    assert rep.pairs == ((0, 2), (2, 3), (3.5, 1))
    assert rep.source == "numeric"


def test_cluster_ambiguous_gap():
    with pytest.raises(AmbiguousClustering):
        cluster_multiplicities([1.0, 1.0 + 5e-6])


def test_cluster_empty():
    assert cluster_multiplicities([]).pairs == ()


@given(st.lists(st.tuples(st.integers(-50, 50), st.integers(1, 5)), min_size=1, max_size=8,
                unique_by=lambda t: t[0]),
       st.randoms(use_true_random=False))
def test_cluster_recovers_integer_multiset(pairs, rnd):
    eigs = [v + rnd.uniform(-1e-9, 1e-9) for v, m in pairs for _ in range(m)]
    rnd.shuffle(eigs)
    rep = cluster_multiplicities(eigs)
    assert rep.pairs == tuple(sorted(pairs))
    assert rep.total == len(eigs)


def test_report_validation():
    with pytest.raises(ValueError):
        SpectrumReport(((2, 1), (1, 1)), "x")
    with pytest.raises(ValueError):
        SpectrumReport(((1, 0),), "x")


# ---------------------------------------------------------------- verdicts

def test_verdicts():
    assert spectrum_verdict(catalog("dihedral:8")).verdict == "agree"
    v = spectrum_verdict(catalog("symmetric:4"))
    assert v.verdict == "certificates-consistent"
    assert v.closed_form is None
    assert v.numeric.multiplicity(3) >= 4
    assert spectrum_verdict(catalog("cyclic:1")).numeric.pairs == ((0, 1),)


def test_verdict_detects_wrong_graph():
    G = catalog("dihedral:8")
    other = build(catalog("dihedral:10"))
    assert spectrum_verdict(catalog("dihedral:10")).ok
    # graph of a different group against D8's closed form
    assert spectrum_verdict(G, other).verdict == "disagree"


def test_certificates_hold_detects_shortfall():
    certs = spectrum_certificates(catalog("symmetric:4"))
    fake = SpectrumReport(((0, 1), (3, 2), (24, 1)), "numeric")
    assert not certificates_hold(certs, fake)


@pytest.mark.parametrize("m", range(2, 25))
def test_dihedral_family_numeric_agrees(m):
    G = dihedral(m)
    assert numeric_report(G).pairs == closed_form_spectrum(G).pairs


@given(arrays(np.int64, st.tuples(st.integers(1, 7), st.integers(1, 7)), elements=st.integers(-4, 4)))
def test_basis_rank_matches_numpy(A):
    assert basis_rank(A.tolist()) == np.linalg.matrix_rank(A.astype(float))


def test_basis_rank_large_spike_family_is_fast():
    n = 48
    spikes = [tuple(n - 1 if i == j else -1 for i in range(n)) for j in range(n - 1)]
    assert basis_rank(spikes) == n - 1
