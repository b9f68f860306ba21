import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dsspectra import exactmat as em
from dsspectra import permsim
from dsspectra.exactmat import ExactMatrix
from dsspectra.permsim import are_perm_similar, canonical_form

from conftest import ds_matrices, permutations_of


def brute_witnesses(A, B):
    return [p for p in itertools.permutations(range(A.n)) if A.permuted(p) == B]


def brute_canonical(M):
    return min(
        (tuple(tuple(r) for r in M.permuted(p).rows) for p in itertools.permutations(range(M.n)))
    )


def test_vertex_permutations_are_similar():
    X, Y, Z = (em.vertex3(c) for c in "XYZ")
    for A, B in itertools.permutations((X, Y, Z), 2):
        w = are_perm_similar(A, B)
        assert w and A.permuted(w.permutation) == B
    assert canonical_form(X) == canonical_form(Y) == canonical_form(Z)


def test_entry_multiset_separates_J_sums():
    A = em.direct_sum(em.J(2), em.J(4))
    B = em.direct_sum(em.J(3), em.J(3))
    w = are_perm_similar(A, B)
    assert not w and w.invariant_report == "entry multiset"
    assert not brute_witnesses(A, B)
    assert permsim.entry_multiset(B) == {F(1, 3): 18, F(0): 18}
    assert permsim.entry_multiset(A) == {F(1, 2): 4, F(1, 4): 16, F(0): 16}


def test_diagonal_prefilter():
    A = em.direct_sum(em.identity(2), em.C(2))
    B = em.direct_sum(em.C(2), em.C(2))
    assert permsim.prefilter(A, B) is not None
    assert permsim.diagonal_multiset(A) == {F(1): 2, F(0): 2}


def test_triangle_mate_not_similar():
    M = ExactMatrix([[F(1, 2), 0, F(1, 2)], [0, F(1, 2), F(1, 2)], [F(1, 2), F(1, 2), 0]])
    W = em.vertex3("X").scale(F(1, 2)) + em.J(3).scale(F(1, 2))
    assert not are_perm_similar(M, W)
    assert not brute_witnesses(M, W)


def test_canonical_J_and_transpositions():
    assert canonical_form(em.J(5)) == em.J(5)
    reps = {canonical_form(em.permutation_matrix(p)) for p in ([1, 0, 2], [0, 2, 1], [2, 1, 0])}
    assert len(reps) == 1


def test_one_based_rendering():
    w = are_perm_similar(em.vertex3("X"), em.vertex3("Y"))
    assert w.one_based().startswith("[") and "0" not in w.one_based()
    assert permsim.PermWitness(None).one_based() == "none"


def test_guards():
    with pytest.raises(em.DimensionError):
        are_perm_similar(em.J(2), em.J(3))
    big = em.J(13)
    with pytest.raises(permsim.BudgetError):
        are_perm_similar(big, em.C(13).scale(F(1)), use_prefilters=False)
    with pytest.raises(permsim.BudgetError):
        canonical_form(big)


@given(ds_matrices(n=4), st.data())
def test_witness_for_permuted_copy(M, data):
    p = data.draw(permutations_of(4))
    B = M.permuted(p)
    w = are_perm_similar(M, B)
    assert w and M.permuted(w.permutation) == B
    # the reported witness is the lexicographically least one
    assert w.permutation == min(brute_witnesses(M, B))
    assert canonical_form(M) == canonical_form(B)


@given(ds_matrices(n=4), ds_matrices(n=4))
def test_decision_matches_brute_force(A, B):
    want = bool(brute_witnesses(A, B))
    assert bool(are_perm_similar(A, B)) == want
    assert bool(are_perm_similar(A, B, use_prefilters=False)) == want
    assert (canonical_form(A) == canonical_form(B)) == want


@given(ds_matrices(n=5, max_terms=3))
def test_canonical_form_is_lexmin(M):
    assert tuple(canonical_form(M).rows) == brute_canonical(M)


@given(st.lists(st.lists(st.integers(0, 1), min_size=5, max_size=5), min_size=5, max_size=5))
def test_lexmin_relabeling_on_integer_rows(rows):
    mat, perm = permsim.lexmin_relabeling(rows)
    M = ExactMatrix(rows)
    assert M.permuted(perm) == ExactMatrix(mat)
    assert tuple(tuple(F(x) for x in r) for r in mat) == brute_canonical(M)


@given(ds_matrices(n=3), ds_matrices(n=3), ds_matrices(n=3))
def test_equivalence_relation(A, B, C):
    assert are_perm_similar(A, A)
    assert bool(are_perm_similar(A, B)) == bool(are_perm_similar(B, A))
    if are_perm_similar(A, B) and are_perm_similar(B, C):
        assert are_perm_similar(A, C)


@given(ds_matrices(n=4), ds_matrices(n=4))
def test_similar_implies_cospectral_and_prefilter_sound(A, B):
    from dsspectra.spectra import cospectral
    if are_perm_similar(A, B):
        assert cospectral(A, B)
    if permsim.prefilter(A, B) is not None:
        assert not brute_witnesses(A, B)


@given(ds_matrices(n=6, max_terms=3), st.data())
def test_canonical_form_invariant_n6(M, data):
    p = data.draw(permutations_of(6))
    assert canonical_form(M.permuted(p)) == canonical_form(M)
