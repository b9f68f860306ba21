"""Symmetric doubly stochastic 3x3 matrices: the trace-one triangle and its lifts.

The trace-one slice is the triangle with vertices X, Y, Z; a point with
barycentric weights (x, y, 1 - x - y) is ``tri_to_matrix(x, y)`` and has
eigenvalues 1 and +-sqrt(f(x, y)).  Slices of other traces are homothetic
copies reached along lines through I_3 (trace >= 1) or C_3 (trace <= 1).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from . import exactmat as em
from . import permsim, spectra
from .exactmat import ExactMatrix
from .scalars import Scalar, as_scalar, sqrt_rational

I3 = em.identity(3)
C3 = em.C(3)
J3 = em.J(3)
X = em.vertex3("X")
Y = em.vertex3("Y")
Z = em.vertex3("Z")

VERTICES = {"I": I3, "X": X, "Y": Y, "Z": Z, "C": C3}

# the seven segments of the classification, in reporting order
DS_SEGMENTS = (("I", "X"), ("I", "Y"), ("I", "Z"), ("C", "X"), ("C", "Y"), ("C", "Z"), ("I", "C"))

MATE_SLOPE_BUDGET = 1000


class DomainError(ValueError):
    pass


class MateSearchFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class TriPoint:
    """Barycentric coordinates of a point of the trace-one triangle."""

    x: Scalar
    y: Scalar

    def __post_init__(self):
        x, y = as_scalar(self.x), as_scalar(self.y)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if not (0 <= x <= 1 and 0 <= y <= 1 and 0 <= x + y <= 1):
            raise DomainError(f"({x}, {y}) lies outside the domain D")


def f(p: TriPoint) -> Scalar:
    """3x^2 + 3y^2 + 3xy + 1 - 3x - 3y, the squared nontrivial eigenvalue."""
    x, y = p.x, p.y
    return 3 * x * x + 3 * y * y + 3 * x * y + 1 - 3 * x - 3 * y


def tri_to_matrix(p: TriPoint) -> ExactMatrix:
    x, y = p.x, p.y
    z = 1 - x - y
    return ExactMatrix([[x, z, y], [z, y, x], [y, x, z]])


def matrix_to_tri(M: ExactMatrix) -> TriPoint:
    """Inverse of :func:`tri_to_matrix` for trace-one symmetric doubly stochastic M."""
    p = TriPoint(M[0, 0], M[1, 1])
    if tri_to_matrix(p) != M:
        raise DomainError("matrix is not a point of the trace-one triangle")
    return p


def tri_eigenvalues(p: TriPoint) -> tuple[Scalar, Scalar, Scalar]:
    """(1, sqrt f, -sqrt f), exact; rational whenever f is a rational square."""
    fv = f(p)
    if isinstance(fv, Fraction):
        alpha = sqrt_rational(fv)
    else:
        raise ValueError("eigenvalue radical of a non-rational point is not supported")
    return (Fraction(1), alpha, -alpha)


# ---------------------------------------------------------------------------
# extrema of f


@dataclass(frozen=True)
class Extrema:
    minimum: tuple[Fraction, list[tuple[Fraction, Fraction]]]
    maximum: tuple[Fraction, list[tuple[Fraction, Fraction]]]
    boundary_critical: list[tuple[tuple[Fraction, Fraction], Fraction]]
    interior_critical: tuple[Fraction, Fraction]
    grid_min: Fraction
    grid_max: Fraction
    grid: int


def f_extrema(grid: int = 201) -> Extrema:
    """Exact extremal data of f over D, re-derived and grid-checked."""
    # interior: 6x + 3y = 3, 3x + 6y = 3 (Cramer)
    a11, a12, b1 = Fraction(6), Fraction(3), Fraction(3)
    a21, a22, b2 = Fraction(3), Fraction(6), Fraction(3)
    det = a11 * a22 - a12 * a21
    xc = (b1 * a22 - a12 * b2) / det
    yc = (a11 * b2 - b1 * a21) / det
    candidates = {(xc, yc)}
    corners = [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]
    candidates.update(corners)
    # each edge restricts f to 3s^2 - 3s + 1, stationary at s = 1/2
    boundary = [(Fraction(1, 2), Fraction(0)), (Fraction(0), Fraction(1, 2)), (Fraction(1, 2), Fraction(1, 2))]
    candidates.update(boundary)
    values = {c: f(TriPoint(*c)) for c in candidates}
    lo = min(values.values())
    hi = max(values.values())
    # exact grid check with integer numerators: f(i/N, j/N) = num / N^2
    N = grid - 1
    gmin = gmax = None
    for i in range(N + 1):
        for j in range(N + 1 - i):
            num = 3 * i * i + 3 * j * j + 3 * i * j + N * N - 3 * i * N - 3 * j * N
            if gmin is None or num < gmin:
                gmin = num
            if gmax is None or num > gmax:
                gmax = num
    return Extrema(
        minimum=(lo, sorted(c for c, v in values.items() if v == lo)),
        maximum=(hi, sorted(c for c, v in values.items() if v == hi)),
        boundary_critical=[(c, values[c]) for c in boundary],
        interior_critical=(xc, yc),
        grid_min=Fraction(gmin, N * N),
        grid_max=Fraction(gmax, N * N),
        grid=grid,
    )


# ---------------------------------------------------------------------------
# slices of constant trace


@dataclass(frozen=True)
class LiftData:
    """M = (M' - (1 - t) center) / t, or a fixed point when t is None."""

    center: str  # "I" or "C"
    t: Fraction | None
    fixed: ExactMatrix | None = None


def _check_sym_ds3(M: ExactMatrix) -> None:
    if M.n != 3 or not em.is_symmetric(M) or not em.is_doubly_stochastic(M):
        raise ValueError("expected a symmetric doubly stochastic 3x3 matrix")


def project_to_slice1(M: ExactMatrix) -> tuple[TriPoint, LiftData]:
    """Push M along the line through I_3 or C_3 into the trace-one triangle."""
    _check_sym_ds3(M)
    a = M.trace()
    if a == 3:
        return TriPoint(Fraction(1, 3), Fraction(1, 3)), LiftData("I", None, M)
    if a == 0:
        return TriPoint(Fraction(1, 3), Fraction(1, 3)), LiftData("C", None, M)
    if a == 1:
        return matrix_to_tri(M), LiftData("I", Fraction(1))
    if a > 1:
        t = 2 / (3 - a)
        center = "I"
    else:
        t = 1 / a
        center = "C"
    Mp = VERTICES[center].scale(1 - t) + M.scale(t)
    return matrix_to_tri(Mp), LiftData(center, t)


def lift_from_slice1(Mp: ExactMatrix, lift: LiftData) -> ExactMatrix:
    if lift.t is None:
        return lift.fixed
    t = lift.t
    return (Mp - VERTICES[lift.center].scale(1 - t)).scale(1 / t)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Classification3:
    verdict: str  # "OnSegment" or "NotDS"
    segment: tuple[str, str] | None
    t: Scalar | None
    trace: Scalar
    slice_point: TriPoint
    d: Scalar | None  # position on a ray [J_3, vertex] of the trace-one slice
    ray: str | None = None

    @property
    def is_ds(self) -> bool:
        return self.verdict == "OnSegment"

    @property
    def segment_name(self) -> str | None:
        return None if self.segment is None else f"[{self.segment[0]},{self.segment[1]}]"


def segment_parameter(M: ExactMatrix, P: ExactMatrix, Q: ExactMatrix):
    """t in [0, 1] with M = (1 - t) P + t Q, or None.

    M - P and Q - P must be collinear (rank <= 1 when stacked as vectors).
    """
    dm = [x - y for r, s in zip(M.rows, P.rows) for x, y in zip(r, s)]
    dq = [x - y for r, s in zip(Q.rows, P.rows) for x, y in zip(r, s)]
    if not any(dq):
        return Fraction(0) if not any(dm) else None
    if em.rank([dm, dq]) > 1:
        return None
    k = next(i for i, v in enumerate(dq) if v != 0)
    t = dm[k] / dq[k]
    if not 0 <= t <= 1:
        return None
    return t


def _ray_position(Mp: ExactMatrix):
    """(name, d) when Mp = d V + (1 - d) J_3 for a vertex V in {X, Y, Z}."""
    if Mp == J3:
        return None, Fraction(0)
    for name in ("X", "Y", "Z"):
        d = segment_parameter(Mp, J3, VERTICES[name])
        if d is not None:
            return name, d
    return None, None


def classify(M: ExactMatrix) -> Classification3:
    _check_sym_ds3(M)
    a = M.trace()
    point, lift = project_to_slice1(M)
    Mp = tri_to_matrix(point)
    ray, d = _ray_position(Mp)
    if M == I3:
        return Classification3("OnSegment", ("I", "C"), Fraction(0), a, point, d, ray)
    if M == C3:
        return Classification3("OnSegment", ("I", "C"), Fraction(1), a, point, d, ray)
    for p_name, q_name in DS_SEGMENTS:
        t = segment_parameter(M, VERTICES[p_name], VERTICES[q_name])
        if t is not None:
            return Classification3("OnSegment", (p_name, q_name), t, a, point, d, ray)
    return Classification3("NotDS", None, None, a, point, d, ray)


# ---------------------------------------------------------------------------
# level curves and mates


def _stern_brocot() -> Iterator[Fraction]:
    # breadth-first traversal of the Stern-Brocot tree (Calkin-Wilf order)
    q = Fraction(1)
    while True:
        yield q
        q = 1 / (2 * (q.numerator // q.denominator) + 1 - q)


def _slopes() -> Iterator[Fraction | None]:
    """0, vertical (None), then +-q for q in Stern-Brocot order."""
    yield Fraction(0)
    yield None
    for q in _stern_brocot():
        yield q
        yield -q


def _arc_slopes(d: Fraction, x0: Fraction) -> Iterator[Fraction]:
    """Rational slopes of chords from the pivot (x0, x0) that stay on its own arc.

    For d > 1/2 the level curve meets D in three short arcs near the corners;
    the window of usable slopes around the tangent slope -1 is estimated in
    floating point and enumerated by increasing denominator.  Exactness does
    not depend on the estimate: every point is re-checked.
    """
    xe = (3 - math.sqrt(max(0.0, 12 * float(d) ** 2 - 3))) / 6
    fx0 = float(x0)
    if xe <= fx0:
        return
    m1 = -fx0 / (xe - fx0)
    m2 = (xe - fx0) / -fx0
    lo, hi = min(m1, m2), max(m1, m2)
    den = 1
    while True:
        for num in range(math.ceil(lo * den), math.floor(hi * den) + 1):
            if math.gcd(num, den) == 1 and num != -den:
                yield Fraction(num, den)
        den += 1


def _in_domain(x, y) -> bool:
    return 0 <= x and 0 <= y and x + y <= 1


def _level_points(d, slope_budget: int) -> Iterator[TriPoint]:
    seen = set()
    plus = (1 + d) / 3
    minus = (1 - d) / 3
    for c in (plus, minus):
        if _in_domain(c, c) and (c, c) not in seen:
            seen.add((c, c))
            yield TriPoint(c, c)
    x0 = y0 = minus
    lin_x = 6 * x0 + 3 * y0 - 3
    lin_y = 6 * y0 + 3 * x0 - 3
    slopes = _slopes() if d <= Fraction(1, 2) else itertools.chain([Fraction(0), None], _arc_slopes(d, x0))
    for k, m in enumerate(slopes):
        if k >= slope_budget:
            return
        if m is None:
            s = -lin_y / 3
            x, y = x0, y0 + s
        else:
            s = -(lin_x + m * lin_y) / (3 * (1 + m + m * m))
            x, y = x0 + s, y0 + m * s
        if not _in_domain(x, y) or (x, y) in seen:
            continue
        seen.add((x, y))
        yield TriPoint(x, y)


def level_curve_points(d, count: int, slope_budget: int = MATE_SLOPE_BUDGET) -> list[TriPoint]:
    """Distinct points of D on f = d^2, from the two diagonal pivots and rational chords."""
    d = as_scalar(d)
    if not 0 < d < 1:
        raise ValueError("level d must satisfy 0 < d < 1")
    out = []
    for p in _level_points(d, slope_budget):
        if f(p) != d * d:
            raise AssertionError(f"chord point {p} is off the level curve")
        out.append(p)
        if len(out) >= count:
            break
    return out


def mate_for(M: ExactMatrix) -> ExactMatrix:
    """A cospectral symmetric doubly stochastic matrix not permutation-similar to M."""
    cls = classify(M)
    if cls.is_ds:
        raise ValueError(f"matrix lies on segment {cls.segment_name}; it has no mate")
    point, lift = project_to_slice1(M)
    Mp = tri_to_matrix(point)
    if cls.ray is None:
        fv = f(point)
        if not isinstance(fv, Fraction):
            raise ValueError("mate would need a field beyond a single quadratic extension")
        alpha = sqrt_rational(fv)
        Bp = X.scale(alpha) + J3.scale(1 - alpha)
    else:
        Bp = None
        tried = 0
        for cand in _level_points(cls.d, MATE_SLOPE_BUDGET):
            tried += 1
            K = tri_to_matrix(cand)
            if not permsim.are_perm_similar(Mp, K):
                Bp = K
                break
        if Bp is None:
            raise MateSearchFailure(
                f"no mate on level d={cls.d} after {tried} candidate points "
                f"({MATE_SLOPE_BUDGET} chord slopes)"
            )
    B = lift_from_slice1(Bp, lift)
    if not spectra.cospectral(M, B) or permsim.are_perm_similar(M, B):
        raise MateSearchFailure("constructed mate failed exact verification")
    return B


# ---------------------------------------------------------------------------
# brute-force scan of a slice


@dataclass(frozen=True)
class SliceScan:
    trace: Fraction
    grid: int
    points: int
    cospectral: list[ExactMatrix]
    non_perm_similar: list[ExactMatrix]


def slice_scan(M: ExactMatrix, grid: int = 201) -> SliceScan:
    """Enumerate a grid of the slice of trace(M) and collect cospectral points.

    The slice is parametrized by two off-diagonal entries (p, q) on a
    ``grid`` x ``grid`` lattice over its bounding box; the third
    off-diagonal entry and the diagonal follow from the row sums.
    """
    _check_sym_ds3(M)
    if not M.is_rational:
        raise ValueError("slice_scan needs a rational matrix")
    a = M.trace()
    s = (3 - a) / 2  # p + q + r
    lo = max(Fraction(0), s - 1)
    hi = min(Fraction(1), s) - lo
    target = spectra.char_poly(M)
    steps = grid - 1
    width = hi - lo
    found = []
    bad = []
    count = 0
    for i in range(grid):
        p = lo + width * i / steps if steps else lo
        for j in range(grid):
            q = lo + width * j / steps if steps else lo
            r = s - p - q
            d1, d2, d3 = 1 - p - q, 1 - p - r, 1 - q - r
            if r < 0 or d1 < 0 or d2 < 0 or d3 < 0:
                continue
            count += 1
            # trace is fixed, so compare the other two invariants directly
            K = ExactMatrix._trusted(((d1, p, q), (p, d2, r), (q, r, d3)), 1)
            if spectra.char_poly(K) == target:
                found.append(K)
                if not permsim.are_perm_similar(M, K):
                    bad.append(K)
    return SliceScan(a, grid, count, found, bad)


def hw_inequality(lam) -> Fraction:
    """1/n + sum_{i>=2} lam_i / ((n-i+2)(n-i+1)) for a descending spectrum with lam_1 = 1."""
    lam = [as_scalar(x) for x in lam]
    n = len(lam)
    if n < 1 or lam[0] != 1:
        raise ValueError("spectrum must start with 1")
    if any(lam[i] < lam[i + 1] for i in range(n - 1)):
        raise ValueError("spectrum must be sorted in descending order")
    if any(abs(x) > 1 for x in lam):
        raise ValueError("eigenvalues must lie in [-1, 1]")
    total = Fraction(1, n)
    for i in range(2, n + 1):
        total += lam[i - 1] / ((n - i + 2) * (n - i + 1))
    return total
