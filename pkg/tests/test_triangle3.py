import itertools
import time
from fractions import Fraction as F

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from dsspectra import exactmat as em
from dsspectra import permsim, spectra
from dsspectra import triangle3 as t3
from dsspectra.exactmat import ExactMatrix
from dsspectra.scalars import sqrt_rational
from dsspectra.triangle3 import TriPoint, f, tri_to_matrix

from conftest import ds_matrices

A = ExactMatrix([[0, F(2, 3), F(1, 3)], [F(2, 3), 0, F(1, 3)], [F(1, 3), F(1, 3), F(1, 3)]])


@st.composite
def tri_points(draw, den=60):
    i = draw(st.integers(0, den))
    j = draw(st.integers(0, den - i))
    return TriPoint(F(i, den), F(j, den))


def test_f_values():
    assert f(TriPoint(F(1, 3), F(1, 3))) == 0
    assert f(TriPoint(F(1, 2), 0)) == F(1, 4)
    assert f(TriPoint(0, 0)) == 1


def test_tri_to_matrix_examples():
    assert tri_to_matrix(TriPoint(F(1, 3), F(1, 3))) == em.J(3)
    assert tri_to_matrix(TriPoint(1, 0)) == t3.X
    h = F(1, 2)
    assert tri_to_matrix(TriPoint(h, h)) == ExactMatrix([[h, 0, h], [0, h, h], [h, h, 0]])
    assert tri_to_matrix(TriPoint(0, 1)) == t3.Y and tri_to_matrix(TriPoint(0, 0)) == t3.Z


def test_domain_guard():
    with pytest.raises(t3.DomainError):
        TriPoint(F(2, 3), F(2, 3))
    with pytest.raises(t3.DomainError):
        TriPoint(F(-1, 10), 0)


def test_vertex_identity():
    assert (t3.X + t3.Y + t3.Z).scale(F(1, 3)) == em.J(3)


def test_eigenvalue_examples():
    assert t3.tri_eigenvalues(TriPoint(F(1, 2), F(1, 2))) == (1, F(1, 2), F(-1, 2))
    assert t3.tri_eigenvalues(TriPoint(F(1, 3), F(1, 3))) == (1, 0, 0)
    assert t3.tri_eigenvalues(TriPoint(1, 0)) == (1, 1, -1)


@given(tri_points())
def test_eigenvalues_exact(p):
    one, a, b = t3.tri_eigenvalues(p)
    assert a * a == f(p) and b == -a
    M = tri_to_matrix(p)
    # exact check via the characteristic polynomial (lambda - 1)(lambda^2 - f)
    cp = spectra.char_poly(M)
    assert cp == spectra.CharPoly(tuple(spectra.poly_mul([-1, 1], [-f(p), 0, 1])))


def test_eigen_grid_agreement():
    N = 100
    worst = 0.0
    for i in range(N + 1):
        for j in range(N + 1 - i):
            p = TriPoint(F(i, N), F(j, N))
            exact = sorted((float(v) for v in t3.tri_eigenvalues(p)), reverse=True)
            num = spectra.eigenvalues_symmetric(tri_to_matrix(p)).values
            worst = max(worst, max(abs(a - b) for a, b in zip(exact, num)))
    assert worst <= 1e-10


@given(tri_points(den=997))
def test_f_bounds(p):
    assert 0 <= f(p) <= 1


def test_extrema():
    ex = t3.f_extrema(101)
    assert ex.interior_critical == (F(1, 3), F(1, 3))
    assert ex.minimum[0] == 0 and ex.minimum[1] == [(F(1, 3), F(1, 3))]
    assert ex.maximum[0] == 1 and len(ex.maximum[1]) == 3
    assert all(v == F(1, 4) for _, v in ex.boundary_critical)
    assert 0 <= ex.grid_min and ex.grid_max <= 1


# --- slices --------------------------------------------------------------------

def test_projection_examples():
    p, lift = t3.project_to_slice1(A)
    assert tri_to_matrix(p) == t3.Z and lift.center == "C" and lift.t == 3
    D2 = em.D_of_trace(3, 2)
    p, lift = t3.project_to_slice1(D2)
    assert tri_to_matrix(p) == em.J(3) and lift.center == "I" and lift.t == 2
    M1 = tri_to_matrix(TriPoint(F(1, 5), F(2, 5)))
    p, lift = t3.project_to_slice1(M1)
    assert tri_to_matrix(p) == M1 and lift.t == 1


@given(ds_matrices(n=3, symmetric=True))
def test_lift_round_trip(M):
    p, lift = t3.project_to_slice1(M)
    assert t3.lift_from_slice1(tri_to_matrix(p), lift) == M
    assert tri_to_matrix(p).trace() == 1


# --- classification ------------------------------------------------------------

def test_classify_examples():
    c = t3.classify(A)
    assert c.is_ds and c.segment_name == "[C,Z]" and c.t == F(1, 3)
    assert em.C(3).scale(F(2, 3)) + t3.Z.scale(F(1, 3)) == A
    c = t3.classify(em.J(3))
    assert c.segment_name == "[I,C]" and c.t == F(2, 3)
    assert not t3.classify(tri_to_matrix(TriPoint(F(1, 2), F(1, 2)))).is_ds
    assert t3.classify(em.identity(3)).segment_name == "[I,C]"
    assert t3.classify(em.C(3)).segment_name == "[I,C]"


def test_segment_spectra():
    # [I,X] runs from (1,1,1) to (1,1,-1), [C,X] from (1,-1/2,-1/2) to (1,1,-1)
    for t in (F(0), F(1, 4), F(1, 2), F(1)):
        M = em.segment_point(em.identity(3), t3.X, t)
        assert spectra.char_poly(M) == spectra.CharPoly.from_roots([1, 1, 1 - 2 * t])
        M = em.segment_point(em.C(3), t3.X, t)
        assert spectra.char_poly(M) == spectra.CharPoly.from_roots([1, -F(1, 2) + F(3, 2) * t, -F(1, 2) - t / 2])


def _random_off_segment(M):
    return not t3.classify(M).is_ds


@given(ds_matrices(n=3, symmetric=True))
def test_not_ds_always_gets_an_exact_mate(M):
    assume(_random_off_segment(M))
    B = t3.mate_for(M)
    assert em.is_symmetric(B) and em.is_doubly_stochastic(B)
    assert spectra.cospectral(M, B)
    assert not permsim.are_perm_similar(M, B)
    assert not any(M.permuted(p) == B for p in itertools.permutations(range(3)))


@pytest.mark.parametrize("den", [3, 4, 5, 7, 10, 13, 20, 50])
def test_ray_points_get_mates(den):
    for k in range(1, den):
        for V in (t3.X, t3.Y, t3.Z):
            d = F(k, den)
            M = V.scale(d) + em.J(3).scale(1 - d)
            B = t3.mate_for(M)
            assert spectra.cospectral(M, B) and not permsim.are_perm_similar(M, B)


def test_mate_examples():
    h = F(1, 2)
    M = tri_to_matrix(TriPoint(h, h))
    B = t3.mate_for(M)
    assert B == t3.X.scale(h) + em.J(3).scale(h)
    assert B == ExactMatrix([[F(2, 3), F(1, 6), F(1, 6)], [F(1, 6), F(1, 6), F(2, 3)], [F(1, 6), F(2, 3), F(1, 6)]])
    assert t3.mate_for(B) == M
    B = t3.mate_for(tri_to_matrix(TriPoint(h, F(3, 10))))
    alpha = sqrt_rational(F(7, 100))
    assert B.d == 7 and B == t3.X.scale(alpha) + em.J(3).scale(1 - alpha)


def test_mate_rejects_ds_input():
    with pytest.raises(ValueError):
        t3.mate_for(A)


def test_level_curve_points():
    pts = t3.level_curve_points(F(1, 2), 40)
    got = {(p.x, p.y) for p in pts}
    for want in [(F(1, 2), F(1, 2)), (0, F(1, 2)), (F(1, 2), 0), (F(1, 6), F(2, 3)), (F(2, 3), F(1, 6))]:
        assert want in got
    assert all(f(p) == F(1, 4) for p in pts)
    assert len(got) == len(pts)
    near_one = t3.level_curve_points(F(99, 100), 10)
    assert all(min(p.x + p.y, 1 - p.x, 1 - p.y) < F(1, 5) for p in near_one)
    with pytest.raises(ValueError):
        t3.level_curve_points(0, 3)


def test_hw_inequality():
    assert t3.hw_inequality([1, 0, F(-2, 3)]) == 0
    assert t3.hw_inequality([1, 1, 1, 1]) > 0
    assert t3.hw_inequality([1, -1]) == 0
    with pytest.raises(ValueError):
        t3.hw_inequality([1, F(-2, 3), 0])


def test_slice_scan_positive_direction():
    start = time.perf_counter()
    scan = t3.slice_scan(A, grid=201)
    assert scan.cospectral and not scan.non_perm_similar
    assert all(permsim.are_perm_similar(A, K) for K in scan.cospectral)
    assert time.perf_counter() - start < 30


def test_slice_scan_finds_mates_off_segment():
    M = tri_to_matrix(TriPoint(F(1, 2), F(1, 2)))
    scan = t3.slice_scan(M, grid=7)
    assert scan.non_perm_similar


@given(st.integers(1, 999).flatmap(lambda q: st.tuples(st.integers(1, q), st.just(q + 1))),
       st.sampled_from("XYZ"), st.sampled_from([F(1, 3), F(1), F(2)]))
def test_ray_mates_any_level_any_trace(kq, name, trace):
    k, q = kq
    d = F(k, q)
    Mp = t3.VERTICES[name].scale(d) + em.J(3).scale(1 - d)
    # lift the ray point to the requested trace along the line through I or C
    M = Mp if trace == 1 else t3.lift_from_slice1(Mp, t3.project_to_slice1(em.D_of_trace(3, trace))[1])
    if not em.is_doubly_stochastic(M):
        return
    B = t3.mate_for(M)
    assert spectra.cospectral(M, B) and not permsim.are_perm_similar(M, B)
