"""Characteristic polynomials, cospectrality and exact similarity tests.

Every cospectrality or similarity verdict in the package is decided here in
exact arithmetic.  :func:`eigenvalues_symmetric` is a floating-point Jacobi
solver kept for cross-validation only.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

from . import exactmat as em
from .exactmat import ExactMatrix, DimensionError
from .scalars import QuadScalar, Scalar, as_scalar, format_scalar, parse_scalar

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


class SimilarityUndecided(Exception):
    """The partial similarity procedure cannot separate or identify the pair."""


class ConvergenceError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# dense polynomials over Q, coefficient lists with the constant term first


def _trim(p: list) -> list:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_mul(p: Sequence, q: Sequence) -> list:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def poly_divmod(p: Sequence, q: Sequence) -> tuple[list, list]:
    p = _trim([Fraction(x) for x in p])
    q = _trim([Fraction(x) for x in q])
    if q == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    if len(p) < len(q):
        return [Fraction(0)], p
    quot = [Fraction(0)] * (len(p) - len(q) + 1)
    rem = p[:]
    lead = q[-1]
    for k in range(len(p) - len(q), -1, -1):
        c = rem[k + len(q) - 1] / lead
        quot[k] = c
        if c:
            for j, b in enumerate(q):
                rem[k + j] -= c * b
    rem = _trim(rem[: len(q) - 1] or [Fraction(0)])
    return _trim(quot), rem


def poly_monic(p: Sequence) -> list:
    p = _trim(list(p))
    return [x / p[-1] for x in p]


def poly_gcd(p: Sequence, q: Sequence) -> list:
    a, b = _trim([Fraction(x) for x in p]), _trim([Fraction(x) for x in q])
    while b != [0]:
        a, b = b, poly_divmod(a, b)[1]
    return poly_monic(a) if a != [0] else a


def poly_deriv(p: Sequence) -> list:
    return _trim([i * p[i] for i in range(1, len(p))] or [Fraction(0)])


def poly_eval(p: Sequence, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def squarefree_decomposition(p: Sequence) -> list[list]:
    """Yun's algorithm: monic p = prod s_i ** i; returns [s_1, s_2, ...]."""
    p = poly_monic(p)
    if len(p) == 1:
        return []
    dp = poly_deriv(p)
    a = poly_gcd(p, dp)
    b = poly_divmod(p, a)[0]
    c = poly_divmod(dp, a)[0]
    d = [x - y for x, y in _zip_pad(c, poly_deriv(b))]
    out = []
    while len(b) > 1:
        a = poly_gcd(b, _trim(d))
        out.append(a)
        b = poly_divmod(b, a)[0]
        c = poly_divmod(_trim(d), a)[0]
        d = [x - y for x, y in _zip_pad(c, poly_deriv(b))]
    while out and len(out[-1]) == 1:
        out.pop()
    return out


def _zip_pad(p, q):
    m = max(len(p), len(q))
    p = list(p) + [Fraction(0)] * (m - len(p))
    q = list(q) + [Fraction(0)] * (m - len(q))
    return zip(p, q)


def rational_roots(p: Sequence, radius: Fraction | None = None) -> list[tuple[Fraction, int]]:
    """Rational roots of a rational polynomial with multiplicities, ascending.

    Roots are found exactly: the polynomial is rescaled to a monic integer
    polynomial whose rational roots are integers, and integer candidates
    up to the root bound are tested.  ``radius`` (an upper bound on the
    modulus of all roots) can be supplied to shorten the search.
    """
    p = poly_monic([Fraction(x) for x in p])
    found: list[tuple[Fraction, int]] = []
    zero_mult = 0
    while len(p) > 1 and p[0] == 0:
        p = p[1:]
        zero_mult += 1
    if zero_mult:
        found.append((Fraction(0), zero_mult))
    n = len(p) - 1
    if n == 0:
        return found
    L = reduce(math.lcm, (c.denominator for c in p), 1)
    # g(y) = L**n p(y/L) is monic with integer coefficients
    g = [int(p[j] * L ** (n - j)) for j in range(n + 1)]
    if radius is None:
        # Fujiwara bound on |x|
        radius = 2 * max(abs(float(p[n - k])) ** (1.0 / k) for k in range(1, n + 1))
        bound = math.ceil(radius * L) + 1
    else:
        bound = math.floor(Fraction(radius) * L) + 1
    const = g[0]
    y = 1
    roots_y: list[int] = []
    while y <= bound:
        if const % y == 0:
            for cand in (y, -y):
                if _int_eval(g, cand) == 0:
                    roots_y.append(cand)
        y += 1
    for ry in sorted(roots_y):
        mult = 0
        while len(g) > 1 and _int_eval(g, ry) == 0:
            g = _int_synthetic_div(g, ry)
            mult += 1
        found.append((Fraction(ry, L), mult))
    found.sort()
    return found


def _int_eval(g: list[int], y: int) -> int:
    acc = 0
    for c in reversed(g):
        acc = acc * y + c
    return acc


def _int_synthetic_div(g: list[int], r: int) -> list[int]:
    # divide by (y - r); exact division assumed
    n = len(g) - 1
    out = [0] * n
    carry = g[n]
    for k in range(n - 1, -1, -1):
        out[k] = carry
        carry = g[k] + carry * r
    return out


# ---------------------------------------------------------------------------
# characteristic polynomial


@dataclass(frozen=True)
class CharPoly:
    """Monic characteristic polynomial; ``coefficients[i]`` multiplies lambda**i."""

    coefficients: tuple

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __mul__(self, other: "CharPoly") -> "CharPoly":
        out = [Fraction(0)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] = out[i + j] + a * b
        return CharPoly(tuple(as_scalar(x) for x in out))

    @property
    def is_rational(self) -> bool:
        return not any(isinstance(c, QuadScalar) for c in self.coefficients)

    def roots(self, radius=None) -> list[tuple[Fraction, int]]:
        """Rational roots with multiplicities (rational coefficients only)."""
        if not self.is_rational:
            raise ValueError("root extraction needs rational coefficients")
        return rational_roots(self.coefficients, radius)

    def to_json_obj(self) -> list[str]:
        return [format_scalar(c) for c in self.coefficients]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: list[str]) -> "CharPoly":
        coeffs = tuple(parse_scalar(c) for c in obj)
        if coeffs[-1] != 1:
            raise ValueError("characteristic polynomial must be monic")
        return cls(coeffs)

    @classmethod
    def from_roots(cls, roots: Sequence) -> "CharPoly":
        p = [Fraction(1)]
        for r in roots:
            p = poly_mul(p, [-Fraction(r), Fraction(1)])
        return cls(tuple(p))

    def __str__(self) -> str:
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("λ" if k == 1 else f"λ^{k}")
            if c == 1 and k:
                s = mono
            elif c == -1 and k:
                s = "-" + mono
            else:
                s = str(c) + ("*" + mono if mono else "")
            terms.append(s)
        return " + ".join(terms).replace("+ -", "- ") or "0"


def char_poly(M: ExactMatrix) -> CharPoly:
    """det(lambda I - M) by the Faddeev-LeVerrier recursion in exact arithmetic."""
    n = M.n
    if M.is_rational:
        L, N = em._integer_rows(M)
        cN = _faddeev_int(N)
        coeffs = tuple(Fraction(cN[j], L ** (n - j)) for j in range(n + 1))
        return CharPoly(coeffs)
    return CharPoly(tuple(as_scalar(c) for c in _faddeev_generic([list(r) for r in M.rows])))


def _faddeev_int(A: list[list[int]]) -> list[int]:
    n = len(A)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    Mk = [[0] * n for _ in range(n)]
    cols = list(zip(*A))
    for k in range(1, n + 1):
        c_prev = coeffs[n - k + 1]
        # Mk <- A Mk + c_prev I
        if k == 1:
            Mk = [[c_prev if i == j else 0 for j in range(n)] for i in range(n)]
        else:
            Mk_cols = list(zip(*Mk))
            Mk = [[sum(a * b for a, b in zip(row, col)) for col in Mk_cols] for row in A]
            for i in range(n):
                Mk[i][i] += c_prev
        # trace(A Mk)
        tr = 0
        for i in range(n):
            tr += sum(a * b for a, b in zip(A[i], (Mk[j][i] for j in range(n))))
        q, r = divmod(-tr, k)
        if r:
            raise ArithmeticError("non-integral Faddeev-LeVerrier step")
        coeffs[n - k] = q
    return coeffs


def _faddeev_generic(A: list[list]) -> list:
    n = len(A)
    zero, one = Fraction(0), Fraction(1)
    coeffs: list = [zero] * (n + 1)
    coeffs[n] = one
    Mk = [[zero] * n for _ in range(n)]
    for k in range(1, n + 1):
        c_prev = coeffs[n - k + 1]
        if k == 1:
            Mk = [[c_prev if i == j else zero for j in range(n)] for i in range(n)]
        else:
            Mk_cols = list(zip(*Mk))
            Mk = [[em._dot(row, col) for col in Mk_cols] for row in A]
            for i in range(n):
                Mk[i][i] = Mk[i][i] + c_prev
        tr = zero
        for i in range(n):
            tr = tr + em._dot(A[i], [Mk[j][i] for j in range(n)])
        coeffs[n - k] = -tr / k
    return coeffs


def cospectral(A: ExactMatrix, B: ExactMatrix) -> bool:
    if A.n != B.n:
        raise DimensionError(f"dimension mismatch: {A.n} vs {B.n}")
    return char_poly(A) == char_poly(B)


# ---------------------------------------------------------------------------
# closed forms


def closed_form_spectrum(family: str, n: int, a=None) -> list[Fraction]:
    """Exact eigenvalue multiset (descending) of a named family member.

    ``block_J`` takes the half size ``n`` and returns 2n eigenvalues.
    """
    if family == "identity":
        vals = [Fraction(1)] * n
    elif family == "J":
        vals = [Fraction(1)] + [Fraction(0)] * (n - 1)
    elif family == "C":
        if n < 2:
            raise ValueError("C_n needs n >= 2")
        vals = [Fraction(1)] + [Fraction(-1, n - 1)] * (n - 1)
    elif family == "D_of_trace":
        a = Fraction(a)
        if n < 2 or not 0 <= a <= n:
            raise ValueError("invalid D_of_trace parameters")
        mu = (a - 1) / (n - 1) if a >= 1 else -(1 - a) / (n - 1)
        vals = [Fraction(1)] + [mu] * (n - 1)
    elif family == "block_J":
        vals = [Fraction(1)] + [Fraction(0)] * (2 * n - 2) + [Fraction(-1)]
    else:
        raise ValueError(f"no closed form for family {family!r}")
    return sorted(vals, reverse=True)


# ---------------------------------------------------------------------------
# numeric symmetric eigensolver (validation only)


@dataclass(frozen=True)
class NumericSpectrum:
    values: tuple[float, ...]
    residual_bound: float


def eigenvalues_symmetric(M, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS) -> NumericSpectrum:
    """Cyclic Jacobi rotations on a symmetric matrix.

    Accepts an :class:`ExactMatrix` or a nested list of floats.  Sweeps until
    the off-diagonal Frobenius norm is below ``tol``.  The reported bound adds
    that norm (a Weyl-type perturbation bound) to a rounding allowance.
    """
    if isinstance(M, ExactMatrix):
        if not em.is_symmetric(M):
            raise ValueError("eigenvalues_symmetric needs a symmetric matrix")
        a = M.to_float()
    else:
        a = [list(map(float, r)) for r in M]
        n = len(a)
        if any(abs(a[i][j] - a[j][i]) > 0 for i in range(n) for j in range(i)):
            raise ValueError("eigenvalues_symmetric needs a symmetric matrix")
    n = len(a)
    scale = math.sqrt(sum(x * x for r in a for x in r))

    def off_norm() -> float:
        return math.sqrt(2.0 * sum(a[p][q] ** 2 for p in range(n) for q in range(p + 1, n)))

    off = off_norm()
    sweeps = 0
    while off > tol:
        if sweeps >= max_sweeps:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps (off={off:.3e})")
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if apq == 0.0:
                    continue
                theta = (a[q][q] - a[p][p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = c * akp - s * akq
                    a[k][q] = s * akp + c * akq
                for k in range(n):
                    apk, aqk = a[p][k], a[q][k]
                    a[p][k] = c * apk - s * aqk
                    a[q][k] = s * apk + c * aqk
                a[p][q] = a[q][p] = 0.0
        off = off_norm()
    values = tuple(sorted((a[i][i] for i in range(n)), reverse=True))
    bound = off + 4.0 * n * 2.220446049250313e-16 * max(scale, 1.0)
    return NumericSpectrum(values, bound)


# ---------------------------------------------------------------------------
# exact similarity


def _poly_of_matrix(p: Sequence, M: ExactMatrix) -> ExactMatrix:
    n = M.n
    acc = em.zeros(n)
    I = em.identity(n)
    for c in reversed(p):
        acc = acc @ M + I.scale(c)
    return acc


def minimal_polynomial(M: ExactMatrix) -> list:
    """Monic minimal polynomial, from the first linear dependency among I, M, M^2, ..."""
    n = M.n
    powers = [em.identity(n)]
    vecs = [[x for r in powers[0].rows for x in r]]
    while True:
        nxt = powers[-1] @ M
        v = [x for r in nxt.rows for x in r]
        k = len(powers)
        # solve sum_{i<k} c_i vec_i = v
        cols = vecs + [v]
        sol = _solve_dependency(cols)
        if sol is not None:
            return [-c for c in sol] + [Fraction(1)]
        powers.append(nxt)
        vecs.append(v)
        if k > n:
            raise ArithmeticError("minimal polynomial degree exceeded n")


def _solve_dependency(cols: list[list]):
    """If cols[-1] is a combination of cols[:-1], return the coefficients."""
    k = len(cols) - 1
    m = len(cols[0])
    rows = [[cols[j][i] for j in range(k + 1)] for i in range(m)]
    # reduced row echelon form of the augmented system
    a = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(k + 1):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        if c == k:
            return None  # inconsistent
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    if len(pivots) < k:
        return None  # earlier powers dependent; caller stops earlier
    sol = [Fraction(0)] * k
    for row_idx, c in enumerate(pivots):
        sol[c] = a[row_idx][k]
    return sol


def _rank_profile(p: Sequence, A: ExactMatrix, upto: int) -> list[int]:
    P = _poly_of_matrix(p, A)
    out = []
    Q = P
    for _ in range(upto):
        out.append(em.rank(Q))
        Q = Q @ P
    return out


def are_similar_exact(A: ExactMatrix, B: ExactMatrix) -> bool:
    """Decide similarity over Q of two rational matrices.

    Equal characteristic polynomials are required; then, for every rational
    root and every repeated irreducible factor of degree 2 or 3, the ranks of
    p(A)^j and p(B)^j are compared.  Symmetric pairs are similar as soon as
    they are cospectral.  Repeated factors that might split further are only
    separated by minimal polynomials or rank mismatches; otherwise
    :class:`SimilarityUndecided` is raised.
    """
    if A.n != B.n:
        raise DimensionError(f"dimension mismatch: {A.n} vs {B.n}")
    if not (A.is_rational and B.is_rational):
        raise ValueError("are_similar_exact needs rational entries")
    pa = char_poly(A)
    if pa != char_poly(B):
        return False
    if em.is_symmetric(A) and em.is_symmetric(B):
        return True
    radius = max(_row_norm(A), _row_norm(B))
    coeffs = list(pa.coefficients)
    rest = coeffs
    for r, mult in rational_roots(coeffs, radius):
        lin = [-r, Fraction(1)]
        for _ in range(mult):
            rest = poly_divmod(rest, lin)[0]
        if mult > 1 and _rank_profile(lin, A, mult) != _rank_profile(lin, B, mult):
            return False
    undecided = False
    for i, s in enumerate(squarefree_decomposition(rest), start=1):
        deg = len(s) - 1
        if deg == 0 or i == 1:
            continue
        same = _rank_profile(s, A, i) == _rank_profile(s, B, i)
        if not same:
            return False
        if deg >= 4:
            undecided = True
    if undecided:
        if minimal_polynomial(A) != minimal_polynomial(B):
            return False
        raise SimilarityUndecided("repeated factor of degree >= 4 with matching rank profiles")
    return True


def _row_norm(M: ExactMatrix) -> Fraction:
    return max(sum(abs(x) for x in r) for r in M.rows)


# ---------------------------------------------------------------------------
# block determinants


def block_det(A: ExactMatrix, B: ExactMatrix, C: ExactMatrix, D: ExactMatrix) -> Scalar:
    """det [[A, B], [C, D]] for commuting A and C, computed two ways.

    Returns the common value of the direct determinant and det(AD - CB).
    """
    if A @ C != C @ A:
        raise ValueError("block_det requires AC = CA")
    direct = em.det(em.assemble_blocks(A, B, C, D))
    reduced = em.det(A @ D - C @ B)
    if direct != reduced:
        raise AssertionError(f"block determinant paths disagree: {direct} != {reduced}")
    return direct
