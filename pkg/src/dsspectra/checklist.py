"""Machine checks of the desk-checkable facts behind the package.

Each check returns a :class:`CheckResult`; ``run_all`` runs them in a fixed
order.  The ``verify-paper`` CLI verb prints one PASS/FAIL line per item.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import certify as cert
from . import exactmat as em
from . import graphbridge as gb
from . import permsim, spectra, triangle3
from .exactmat import ExactMatrix

F = Fraction

A_COUNTEREXAMPLE = ExactMatrix([[0, F(2, 3), F(1, 3)], [F(2, 3), 0, F(1, 3)], [F(1, 3), F(1, 3), F(1, 3)]])


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def _frob2(A: ExactMatrix, B: ExactMatrix):
    D = A - B
    return sum(x * x for r in D.rows for x in r)


def check_inequality() -> tuple[bool, str]:
    v3 = triangle3.hw_inequality([1, 0, F(-2, 3)])
    v2 = triangle3.hw_inequality([1, -1])
    return v3 == 0 and v2 == 0, f"value at (1,0,-2/3) = {v3}, at (1,-1) = {v2}"


def check_counterexample_chain() -> tuple[bool, str]:
    rep = cert.positive_realization_report(A_COUNTEREXAMPLE)
    ok = (
        rep["spectrum"] == ["1/1", "0/1", "-2/3"]
        and rep["inequality_value"] == 0
        and rep["certified"]
        and rep["has_zero_entry"]
        and rep["conclusion"] == "no positive symmetric doubly stochastic realization exists"
    )
    seg = A_COUNTEREXAMPLE == em.segment_point(em.C(3), triangle3.Z, F(1, 3))
    return ok and seg, f"{rep['certificate']}; {rep['conclusion']}"


def check_order3_identities() -> tuple[bool, str]:
    X, Y, Z, I, C, J = triangle3.X, triangle3.Y, triangle3.Z, em.identity(3), em.C(3), em.J(3)
    ok1 = J == (X + Y + Z).scale(F(1, 3))
    ok2 = C == J.scale(F(3, 2)) - I.scale(F(1, 2))
    sides = {_frob2(X, Y), _frob2(Y, Z), _frob2(Z, X)}
    ok3 = len(sides) == 1
    # relabelings fix I and C and permute {X, Y, Z}: [I, C] is an axis of symmetry
    ok4 = True
    for p in [(0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (2, 1, 0)]:
        ok4 &= I.permuted(p) == I and C.permuted(p) == C
        ok4 &= {X.permuted(p), Y.permuted(p), Z.permuted(p)} == {X, Y, Z}
    ok5 = True
    for a in (0, F(1, 2), 1, 2, 3):
        D = em.D_of_trace(3, a)
        for V in (I, X, Y, Z, C):
            ok5 &= D @ V == V @ D
    ok = ok1 and ok2 and ok3 and ok4 and ok5
    return ok, f"J3=(X+Y+Z)/3 {ok1}, C3=3/2 J3-1/2 I3 {ok2}, equilateral {ok3}, axis {ok4}, commuting {ok5}"


def check_eigen_grid(grid: int = 101) -> tuple[bool, str]:
    N = grid - 1
    worst = 0.0
    for i in range(N + 1):
        for j in range(N + 1 - i):
            p = triangle3.TriPoint(F(i, N), F(j, N))
            exact = sorted(float(x) for x in triangle3.tri_eigenvalues(p))
            num = sorted(spectra.eigenvalues_symmetric(triangle3.tri_to_matrix(p)).values)
            worst = max(worst, max(abs(a - b) for a, b in zip(exact, num)))
    return worst <= 1e-10, f"{grid}x{grid} grid, max deviation {worst:.2e}"


def check_extrema() -> tuple[bool, str]:
    ex = triangle3.f_extrema()
    f = lambda x, y: triangle3.f(triangle3.TriPoint(x, y))  # noqa: E731
    ok = (
        ex.interior_critical == (F(1, 3), F(1, 3))
        and f(F(1, 3), F(1, 3)) == 0
        and f(0, 0) == f(1, 0) == f(0, 1) == 1
        and f(F(1, 2), 0) == f(0, F(1, 2)) == f(F(1, 2), F(1, 2)) == F(1, 4)
        and ex.grid_min >= 0
        and ex.grid_max <= 1
        and ex.minimum[0] == 0
        and ex.maximum[0] == 1
    )
    return ok, f"min {ex.minimum[0]} at {ex.minimum[1]}, max {ex.maximum[0]}, grid [{ex.grid_min}, {ex.grid_max}]"


def check_level_sets() -> tuple[bool, str]:
    counts = {}
    for d in (F(1, 4), F(1, 2), F(3, 4), F(9, 10)):
        counts[str(d)] = len(triangle3.level_curve_points(d, 20))
    N = 60
    zeros, ones = [], []
    for i in range(N + 1):
        for j in range(N + 1 - i):
            v = triangle3.f(triangle3.TriPoint(F(i, N), F(j, N)))
            if v == 0:
                zeros.append((F(i, N), F(j, N)))
            if v == 1:
                ones.append((F(i, N), F(j, N)))
    ok = all(c >= 5 for c in counts.values())
    ok &= zeros == [(F(1, 3), F(1, 3))]
    ok &= sorted(ones) == [(0, 0), (0, 1), (1, 0)]
    return ok, f"points per level {counts}; f=0 at {len(zeros)} point, f=1 at {len(ones)} points"


def check_trace_one_slice() -> tuple[bool, str]:
    ok = True
    for M in (em.J(3), triangle3.X, triangle3.Y, triangle3.Z):
        ok &= cert.certify(M).status == cert.CERTIFIED
    for x, y in ((F(1, 2), F(1, 2)), (F(1, 2), F(3, 10)), (F(1, 5), F(1, 5))):
        M = triangle3.tri_to_matrix(triangle3.TriPoint(x, y))
        ok &= cert.certify(M).status == cert.REFUTED
    return ok, "J3, X, Y, Z certified; sampled interior points refuted"


def check_segments_and_spectra() -> tuple[bool, str]:
    ok = True
    V = triangle3.VERTICES
    for p, q in triangle3.DS_SEGMENTS:
        for t in (F(1, 4), F(1, 2), F(3, 4)):
            M = em.segment_point(V[p], V[q], t)
            ok &= cert.certify(M).status == cert.CERTIFIED
            cls = triangle3.classify(M)
            ok &= cls.segment == (p, q) and em.segment_point(V[p], V[q], cls.t) == M
    # spectra of the segments are the segments of spectra
    for p, q, lo, hi in (("I", "X", (1, 1, 1), (1, 1, -1)), ("C", "X", (1, F(-1, 2), F(-1, 2)), (1, 1, -1))):
        for t in (0, F(1, 3), F(2, 3), 1):
            M = em.segment_point(V[p], V[q], t)
            lam = [(1 - t) * a + t * b for a, b in zip(lo, hi)]
            ok &= spectra.char_poly(M) == spectra.CharPoly.from_roots(lam)
            ok &= cert.spectrum_characterization(lam).status == "characterizes"
    for lam in ([1, F(1, 2), F(1, 4)], [1, F(1, 5), F(-1, 5)]):
        ok &= cert.spectrum_characterization(lam).status == "does-not-characterize"
    return ok, "seven segments certified at t in {1/4,1/2,3/4}; segment spectra characterize"


def check_section2_identities() -> tuple[bool, str]:
    ok = True
    for n in range(2, 7):
        ok &= em.J(n) == em.C(n).scale(F(n - 1, n)) + em.identity(n).scale(F(1, n))
        for a in (0, F(1, 2), 1, 2, n):
            D = em.D_of_trace(n, a)
            ok &= D == em.J(n).scale(F(n - a, n - 1)) - em.identity(n).scale(F(1 - a, n - 1))
            ok &= D.trace() == a
    for m in range(2, 5):
        ok &= em.block_C(m) == em.block_J(m).scale(F(m, m - 1)) - em.block_I(m).scale(F(1, m - 1))
    M = ExactMatrix([[F(3, 2), F(-1, 2)], [F(-1, 2), F(3, 2)]])
    ok &= em.is_doubly_quasi_stochastic(em.inverse(M))
    ok &= M @ em.J(2) == em.J(2) @ M == em.J(2)
    return ok, "J_n, D_a and block C identities; inverse of a quasi-stochastic matrix"


def check_J_pairs() -> tuple[bool, str]:
    ok = True
    for k in (3, 4, 5):
        A = em.direct_sum(em.J(2), em.J(2 * k - 2))
        B = em.direct_sum(em.J(k), em.J(k))
        ok &= spectra.cospectral(A, B)
        ok &= F(1, k) in permsim.entry_multiset(B) and F(1, k) not in permsim.entry_multiset(A)
        ok &= not permsim.are_perm_similar(A, B)
        ok &= not permsim.are_perm_similar(A, B, use_prefilters=False)
    ok &= cert.certify(em.direct_sum(em.J(3), em.J(3))).status == cert.REFUTED
    return ok, "J_2+J_{2k-2} vs J_k+J_k cospectral and not permutation-similar for k=3,4,5"


def check_C_sums() -> tuple[bool, str]:
    ok = True
    for sizes in ((2, 2), (3, 3), (4, 4), (2, 3), (2, 3, 4)):
        M = em.direct_sum([em.C(m) for m in sizes])
        v = cert.certify(M, "full")
        ok &= v.status == cert.CERTIFIED
    return ok, "C_n+C_n and mixed C sums certified among all doubly stochastic matrices"


def check_block_segment() -> tuple[bool, str]:
    ok = True
    for m in (2, 3):
        for t in (0, F(1, 3), F(m - 1, m), 1):
            M = em.segment_point(em.block_I(m), em.block_C(m), t)
            ok &= cert.certify(M).status == cert.CERTIFIED
    return ok, "points of the block segment [I,C] certified (half sizes 2, 3)"


def check_bipartite_cospectral(samples: int = 20, seed: int = 2016) -> tuple[bool, str]:
    rng = random.Random(seed)
    ok = True
    target = spectra.char_poly(em.block_J(3))
    for _ in range(samples):
        ws = [rng.randint(0, 9) for _ in range(6)]
        if not any(ws):
            ws[0] = 1
        total = sum(ws)
        A = em.zeros(3)
        for w, p in zip(ws, itertools.permutations(range(3))):
            A = A + em.permutation_matrix(p).scale(F(w, total))
        ok &= spectra.char_poly(em.block_bipartite(A)) == target
    M = em.block_bipartite(em.identity(2))
    Jb = em.block_J(2)
    ok &= spectra.cospectral(M, Jb)
    ok &= M @ M @ M != M and Jb @ Jb @ Jb == Jb
    ok &= not spectra.are_similar_exact(M, Jb)
    return ok, f"{samples} seeded samples cospectral with block J; [[0,J2],[I2,0]] not similar to it"


def check_graph_bridge() -> tuple[bool, str]:
    ok = gb.scale_to_ds(gb.complete(4)) == em.C(4)
    ok &= bool(permsim.are_perm_similar(gb.scale_to_ds(gb.complete_bipartite(2, 2)), em.block_J(2)))
    ok &= gb.scale_to_ds(gb.disjoint_union(gb.complete(3), gb.complete(3))) == em.direct_sum(em.C(3), em.C(3))
    for G in (gb.complete(5), gb.complete_bipartite(3, 3), gb.perfect_matching(6),
              gb.disjoint_union(gb.complete(4), gb.complete(4))):
        ok &= cert.certify(gb.scale_to_ds(G)).status == cert.CERTIFIED
    ok &= gb.adjacency_char_poly(gb.cycle(6)) != gb.adjacency_char_poly(
        gb.disjoint_union(gb.complete(3), gb.complete(3)))
    ok &= gb.cospectral_mates(6, 2) == []
    return ok, "K_n -> C_n, K_{n,n} -> block J, matchings and unions of cliques certified"


def check_zero_trace_anchors() -> tuple[bool, str]:
    ok = True
    for n in (3, 4, 5, 6):
        ok &= cert.certify(em.C(n)).status == cert.CERTIFIED
    for perm in ([1, 0, 3, 2], [1, 2, 0], [1, 2, 3, 4, 0], [1, 0, 3, 4, 2]):
        ok &= cert.certify(em.permutation_matrix(perm), "full").status == cert.CERTIFIED
    return ok, "C_n and zero-trace permutation matrices certified"


CHECKS: tuple[tuple[str, Callable[[], tuple[bool, str]]], ...] = (
    ("positivity inequality at (1,0,-2/3) and (1,-1)", check_inequality),
    ("counterexample matrix: certified, zero entry, no positive realization", check_counterexample_chain),
    ("order-3 polytope identities", check_order3_identities),
    ("trace-one eigenvalue formula on a grid", check_eigen_grid),
    ("extrema of f over D", check_extrema),
    ("level sets of f", check_level_sets),
    ("DS points of the trace-one slice", check_trace_one_slice),
    ("seven DS segments and their spectra", check_segments_and_spectra),
    ("J_n, D_a and block identities", check_section2_identities),
    ("cospectral J-block pairs", check_J_pairs),
    ("direct sums of C blocks", check_C_sums),
    ("block segment [I,C]", check_block_segment),
    ("[[0,J],[A,0]] cospectral with block J", check_bipartite_cospectral),
    ("regular graph bridge", check_graph_bridge),
    ("zero-trace anchors", check_zero_trace_anchors),
)


def run_all() -> list[CheckResult]:
    out = []
    for name, fn in CHECKS:
        start = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check, reported as such
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(ok), detail, time.perf_counter() - start))
    return out
