import random
from fractions import Fraction as F

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from dsspectra import exactmat as em
from dsspectra import spectra
from dsspectra.exactmat import ExactMatrix
from dsspectra.spectra import CharPoly, char_poly

from conftest import ds_matrices, permutations_of, rational_matrices

lam = sympy.Symbol("lam")


def sympy_charpoly(M: ExactMatrix) -> tuple:
    S = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in M.rows])
    coeffs = sympy.Poly(S.charpoly(lam).as_expr(), lam).all_coeffs()[::-1]
    return tuple(F(int(sympy.Rational(c).p), int(sympy.Rational(c).q)) for c in coeffs)


A_ZERO_DIAG = ExactMatrix([[0, F(2, 3), F(1, 3)], [F(2, 3), 0, F(1, 3)], [F(1, 3), F(1, 3), F(1, 3)]])


def test_small_examples():
    assert char_poly(em.J(3)).coefficients == (0, 0, -1, 1)
    assert char_poly(em.C(2)).coefficients == (-1, 0, 1)
    assert char_poly(A_ZERO_DIAG).coefficients == (0, F(-2, 3), F(-1, 3), 1)
    assert sorted(char_poly(A_ZERO_DIAG).roots()) == [(F(-2, 3), 1), (0, 1), (1, 1)]


@given(rational_matrices())
def test_char_poly_matches_sympy(M):
    assert char_poly(M).coefficients == sympy_charpoly(M)


@given(ds_matrices(n=4))
def test_char_poly_vanishes_at_one(M):
    p = char_poly(M)
    assert p(1) == 0
    assert p.degree == M.n and p.coefficients[-1] == 1
    assert p.coefficients[-2] == -M.trace()


@given(ds_matrices(), st.data())
def test_char_poly_permutation_invariant(M, data):
    p = data.draw(permutations_of(M.n))
    assert char_poly(M.permuted(p)) == char_poly(M)


@given(ds_matrices(n=2), ds_matrices(n=3))
def test_char_poly_direct_sum_multiplies(A, B):
    assert char_poly(em.direct_sum(A, B)) == char_poly(A) * char_poly(B)


def test_quadratic_char_poly():
    r = F(1, 2) * sympy_sqrt2()
    M = ExactMatrix([[r, 1 - r], [1 - r, r]])
    p = char_poly(M)
    assert not p.is_rational
    assert p(1) == 0


def sympy_sqrt2():
    from dsspectra.scalars import sqrt_rational
    return sqrt_rational(2)


def test_cospectral():
    assert spectra.cospectral(em.direct_sum(em.J(2), em.J(4)), em.direct_sum(em.J(3), em.J(3)))
    assert spectra.cospectral(em.block_bipartite(em.identity(2)), em.block_J(2))
    assert not spectra.cospectral(em.identity(3), em.J(3))
    with pytest.raises(em.DimensionError):
        spectra.cospectral(em.J(2), em.J(3))


@pytest.mark.parametrize("family,n,a", [
    ("C", 3, None), ("C", 5, None), ("J", 4, None), ("identity", 3, None),
    ("D_of_trace", 3, 2), ("D_of_trace", 4, F(1, 2)), ("D_of_trace", 5, 0), ("D_of_trace", 6, 6),
])
def test_closed_form_matches_char_poly(family, n, a):
    vals = spectra.closed_form_spectrum(family, n, a)
    M = em.construct(family, n, a=a) if a is not None else em.construct(family, n)
    assert CharPoly.from_roots(vals) == char_poly(M)
    num = spectra.eigenvalues_symmetric(M).values
    assert max(abs(x - float(v)) for x, v in zip(num, vals)) <= 1e-10


def test_closed_form_examples():
    assert spectra.closed_form_spectrum("C", 3) == [1, F(-1, 2), F(-1, 2)]
    assert spectra.closed_form_spectrum("block_J", 2) == [1, 0, 0, -1]
    assert spectra.closed_form_spectrum("D_of_trace", 3, 2) == [1, F(1, 2), F(1, 2)]
    assert CharPoly.from_roots(spectra.closed_form_spectrum("block_J", 3)) == char_poly(em.block_J(3))


def test_eigensolver_examples():
    for M, want in ((em.C(4), [1, -1 / 3, -1 / 3, -1 / 3]), (em.vertex3("X"), [1, 1, -1])):
        got = spectra.eigenvalues_symmetric(M).values
        assert np.allclose(got, want, atol=1e-10)
    with pytest.raises(ValueError):
        spectra.eigenvalues_symmetric(em.permutation_matrix([1, 2, 0]))


@given(ds_matrices(symmetric=True))
def test_eigensolver_matches_numpy(M):
    res = spectra.eigenvalues_symmetric(M)
    ref = sorted(np.linalg.eigvalsh(np.array(M.to_float())), reverse=True)
    assert np.allclose(res.values, ref, atol=1e-10)
    assert abs(res.values[0] - 1) <= res.residual_bound + 1e-12
    assert all(abs(v) <= 1 + res.residual_bound + 1e-12 for v in res.values)


def test_similarity_decisions():
    A = em.direct_sum(em.J(2), em.J(4))
    B = em.direct_sum(em.J(3), em.J(3))
    assert spectra.are_similar_exact(A, B)
    M = em.block_bipartite(em.identity(2))
    assert not spectra.are_similar_exact(M, em.block_J(2))
    assert M @ M @ M != M
    assert em.block_J(2) @ em.block_J(2) @ em.block_J(2) == em.block_J(2)
    assert spectra.minimal_polynomial(M) != spectra.minimal_polynomial(em.block_J(2))


@given(ds_matrices(n=4), st.data())
def test_similar_to_permuted_copy(M, data):
    p = data.draw(permutations_of(4))
    assert spectra.are_similar_exact(M, M.permuted(p))


def test_similarity_jordan_block():
    N = ExactMatrix([[1, 1, 0], [0, 1, 0], [0, 0, 2]])
    D = ExactMatrix([[1, 0, 0], [0, 1, 0], [0, 0, 2]])
    assert spectra.cospectral(N, D)
    assert not spectra.are_similar_exact(N, D)


@given(rational_matrices(n=3, lo=-3, hi=3))
def test_minimal_polynomial_annihilates(M):
    mp = spectra.minimal_polynomial(M)
    acc = em.zeros(3)
    for c in reversed(mp):
        acc = acc @ M + em.identity(3).scale(c)
    assert acc == em.zeros(3)
    # divides the characteristic polynomial
    q, r = spectra.poly_divmod(list(char_poly(M).coefficients), mp)
    assert not any(r)


def test_block_det_examples():
    I3, J3 = em.identity(3), em.J(3)
    assert spectra.block_det(em.identity(2), em.J(2), em.identity(2), em.J(2)) == 0
    A2 = I3.scale(2)
    Ap = em.vertex3("Y")
    assert spectra.block_det(A2, J3, Ap, A2) == 48
    assert spectra.block_det(em.C(2), em.identity(2), em.identity(2), em.C(2)) == 0
    with pytest.raises(ValueError):
        spectra.block_det(em.permutation_matrix([1, 2, 0]), I3, em.vertex3("X"), I3)


def test_block_det_random_commuting():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randint(2, 4)
        A = ExactMatrix([[F(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)])
        c0, c1, c2 = (F(rng.randint(-2, 2)) for _ in range(3))
        C = em.identity(n).scale(c0) + A.scale(c1) + (A @ A).scale(c2)
        B = ExactMatrix([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        D = ExactMatrix([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        assert spectra.block_det(A, B, C, D) == em.det(A @ D - C @ B)


def test_quasi_stochastic_inverse():
    rng = random.Random(11)
    done = 0
    while done < 50:
        n = rng.randint(2, 5)
        rows = [[F(rng.randint(-4, 4), rng.randint(1, 4)) for _ in range(n - 1)] for _ in range(n - 1)]
        # complete to row and column sums equal to 1
        for r in rows:
            r.append(1 - sum(r))
        rows.append([1 - sum(rows[i][j] for i in range(n - 1)) for j in range(n)])
        M = ExactMatrix(rows)
        if em.det(M) == 0:
            continue
        assert em.is_doubly_quasi_stochastic(em.inverse(M))
        done += 1


def test_char_poly_json_round_trip():
    p = char_poly(A_ZERO_DIAG)
    assert CharPoly.from_json_obj(p.to_json_obj()) == p
    assert p.to_json_obj()[0] == "0/1"
