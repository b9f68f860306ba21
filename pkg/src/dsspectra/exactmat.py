"""Exact square matrices over Q or Q(sqrt d), named constructors and predicates."""
from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .scalars import QuadScalar, Scalar, as_scalar, format_scalar, parse_scalar, radicand

MAX_DIMENSION = 64

ZERO = Fraction(0)
ONE = Fraction(1)


class SingularMatrixError(ArithmeticError):
    pass


class DimensionError(ValueError):
    pass


class ExactMatrix:
    """Immutable n x n matrix of exact scalars.

    Entries are Fractions, or QuadScalars sharing a single radicand ``d``.
    ``M[i, j]`` indexes an entry, ``M.rows`` exposes the tuple of rows.
    """

    __slots__ = ("_rows", "_d", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(as_scalar(x) for x in row) for row in rows)
        n = len(data)
        if n == 0:
            raise DimensionError("matrix must have dimension >= 1")
        if n > MAX_DIMENSION:
            raise DimensionError(f"dimension {n} exceeds {MAX_DIMENSION}")
        if any(len(row) != n for row in data):
            raise DimensionError("matrix must be square")
        d = 1
        for row in data:
            for x in row:
                r = radicand(x)
                if r != 1:
                    if d not in (1, r):
                        raise ValueError(f"entries mix sqrt({d}) and sqrt({r})")
                    d = r
        self._rows = data
        self._d = d
        self._hash = None

    @classmethod
    def _trusted(cls, data: tuple, d: int | None = None) -> "ExactMatrix":
        # internal constructor for rows already made of exact scalars
        obj = cls.__new__(cls)
        obj._rows = data
        if d is None:
            d = 1
            for row in data:
                for x in row:
                    if isinstance(x, QuadScalar):
                        d = x.d
                        break
                if d != 1:
                    break
        obj._d = d
        obj._hash = None
        return obj

    # -- basic protocol -------------------------------------------------
    @property
    def n(self) -> int:
        return len(self._rows)

    @property
    def d(self) -> int:
        return self._d

    @property
    def rows(self) -> tuple[tuple[Scalar, ...], ...]:
        return self._rows

    @property
    def is_rational(self) -> bool:
        return self._d == 1

    def __getitem__(self, ij: tuple[int, int]) -> Scalar:
        i, j = ij
        return self._rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(format_scalar(x) for x in row) + "]" for row in self._rows)
        return f"ExactMatrix([{body}])"

    def __str__(self) -> str:
        cells = [[format_scalar(x).replace("/1*", "*") for x in row] for row in self._rows]
        cells = [[c[:-2] if c.endswith("/1") and "sqrt" not in c else c for c in row] for row in cells]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("  ".join(c.rjust(width) for c in row) for row in cells)

    # -- arithmetic -----------------------------------------------------
    def _check_same(self, other: "ExactMatrix") -> None:
        if not isinstance(other, ExactMatrix):
            raise TypeError("expected an ExactMatrix")
        if other.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        return ExactMatrix._trusted(
            tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self._rows, other._rows))
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        return ExactMatrix._trusted(
            tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(self._rows, other._rows))
        )

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix._trusted(tuple(tuple(-x for x in r) for r in self._rows), self._d)

    def scale(self, c) -> "ExactMatrix":
        c = as_scalar(c)
        return ExactMatrix._trusted(tuple(tuple(c * x for x in r) for r in self._rows))

    def __mul__(self, c) -> "ExactMatrix":
        if isinstance(c, ExactMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        cols = list(zip(*other._rows))
        out = []
        for r in self._rows:
            out.append(tuple(_dot(r, c) for c in cols))
        return ExactMatrix._trusted(tuple(out))

    def __pow__(self, k: int) -> "ExactMatrix":
        if k < 0:
            return inverse(self) ** (-k)
        result = identity(self.n)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix._trusted(tuple(zip(*self._rows)), self._d)

    def trace(self) -> Scalar:
        return sum((self._rows[i][i] for i in range(self.n)), ZERO)

    def diagonal(self) -> tuple[Scalar, ...]:
        return tuple(self._rows[i][i] for i in range(self.n))

    def row_sums(self) -> list[Scalar]:
        return [sum(r, ZERO) for r in self._rows]

    def col_sums(self) -> list[Scalar]:
        return [sum(c, ZERO) for c in zip(*self._rows)]

    def to_float(self) -> list[list[float]]:
        return [[float(x) for x in r] for r in self._rows]

    def permuted(self, perm: Sequence[int]) -> "ExactMatrix":
        """Return ``P^T M P`` where ``(P^T M P)[i, j] = M[perm[i], perm[j]]``."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError("not a permutation of 0..n-1")
        r = self._rows
        return ExactMatrix._trusted(tuple(tuple(r[pi][pj] for pj in perm) for pi in perm), self._d)

    def submatrix(self, idx: Sequence[int]) -> "ExactMatrix":
        r = self._rows
        return ExactMatrix._trusted(tuple(tuple(r[i][j] for j in idx) for i in idx))

    # -- serialization --------------------------------------------------
    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "d": self._d,
            "entries": [[format_scalar(x) for x in r] for r in self._rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ExactMatrix":
        entries = obj["entries"]
        m = cls([[parse_scalar(x) if isinstance(x, str) else as_scalar(x) for x in r] for r in entries])
        if "n" in obj and obj["n"] != m.n:
            raise DimensionError(f"declared n={obj['n']} but entries give {m.n}")
        declared = obj.get("d", 1)
        if m.d != 1 and m.d != declared:
            raise ValueError(f"declared d={declared} but entries use sqrt({m.d})")
        return m

    @classmethod
    def from_json(cls, text: str) -> "ExactMatrix":
        return cls.from_json_obj(json.loads(text))


def _dot(r, c):
    acc = ZERO
    for x, y in zip(r, c):
        if x and y:
            acc = acc + x * y
    return acc


def matrix(rows) -> ExactMatrix:
    return rows if isinstance(rows, ExactMatrix) else ExactMatrix(rows)


# ---------------------------------------------------------------------------
# predicates


def is_doubly_quasi_stochastic(M: ExactMatrix) -> bool:
    return all(s == 1 for s in M.row_sums()) and all(s == 1 for s in M.col_sums())


def is_doubly_stochastic(M: ExactMatrix) -> bool:
    return all(x >= 0 for r in M.rows for x in r) and is_doubly_quasi_stochastic(M)


def is_symmetric(M: ExactMatrix) -> bool:
    r = M.rows
    return all(r[i][j] == r[j][i] for i in range(M.n) for j in range(i + 1, M.n))


def is_permutation_matrix(M: ExactMatrix) -> bool:
    return is_doubly_stochastic(M) and all(x in (0, 1) for r in M.rows for x in r)


# ---------------------------------------------------------------------------
# constructors


def identity(n: int) -> ExactMatrix:
    return ExactMatrix._trusted(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), 1)


def zeros(n: int) -> ExactMatrix:
    return ExactMatrix._trusted(tuple((ZERO,) * n for _ in range(n)), 1)


def J(n: int) -> ExactMatrix:
    v = Fraction(1, n)
    return ExactMatrix._trusted(tuple((v,) * n for _ in range(n)), 1)


def C(n: int) -> ExactMatrix:
    if n < 2:
        raise ValueError("C_n needs n >= 2")
    v = Fraction(1, n - 1)
    return ExactMatrix._trusted(tuple(tuple(ZERO if i == j else v for j in range(n)) for i in range(n)), 1)


def permutation_matrix(perm: Sequence[int]) -> ExactMatrix:
    """Permutation matrix with a 1 at ``(i, perm[i])`` (zero-based images)."""
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"not a permutation of 0..{n - 1}: {perm}")
    return ExactMatrix._trusted(
        tuple(tuple(ONE if perm[i] == j else ZERO for j in range(n)) for i in range(n)), 1
    )


_VERTEX3 = {"X": (0, 2, 1), "Y": (2, 1, 0), "Z": (1, 0, 2)}


def vertex3(name: str) -> ExactMatrix:
    """One of the three symmetric transposition matrices X, Y, Z of order 3."""
    try:
        return permutation_matrix(_VERTEX3[name])
    except KeyError:
        raise ValueError(f"vertex3 name must be X, Y or Z, not {name!r}") from None


def D_of_trace(n: int, a) -> ExactMatrix:
    """The point of trace ``a`` on the segment [I_n, C_n]."""
    a = Fraction(a)
    if n < 2:
        if n == 1 and a == 1:
            return identity(1)
        raise ValueError("D_of_trace needs n >= 2")
    if not 0 <= a <= n:
        raise ValueError(f"trace {a} outside [0, {n}]")
    if a <= 1:
        return J(n).scale(a) + C(n).scale(1 - a)
    w = (a - 1) / (n - 1)
    return identity(n).scale(w) + J(n).scale(1 - w)


def _block2(top_right: ExactMatrix, bottom_left: ExactMatrix) -> ExactMatrix:
    n = top_right.n
    z = (ZERO,) * n
    rows = [z + tr for tr in top_right.rows] + [bl + z for bl in bottom_left.rows]
    return ExactMatrix._trusted(tuple(rows))


def block_I(n: int) -> ExactMatrix:
    return _block2(identity(n), identity(n))


def block_J(n: int) -> ExactMatrix:
    return _block2(J(n), J(n))


def block_C(n: int) -> ExactMatrix:
    return _block2(C(n), C(n))


def construct(family: str, n: int, **params) -> ExactMatrix:
    """Build a named matrix family.

    Families: ``identity``, ``J``, ``C``, ``vertex3`` (``which='X'|'Y'|'Z'``),
    ``permutation`` (``perm=[...]`` zero-based images), ``D_of_trace``
    (``a=...``), and the 2n x 2n forms ``block_I``, ``block_J``, ``block_C``
    (``n`` is the half size).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if family == "identity":
        return identity(n)
    if family == "J":
        return J(n)
    if family == "C":
        return C(n)
    if family == "vertex3":
        if n != 3:
            raise ValueError("vertex3 matrices have n = 3")
        return vertex3(params.get("which", "X"))
    if family == "permutation":
        perm = list(params["perm"])
        if len(perm) != n:
            raise ValueError("permutation length must equal n")
        return permutation_matrix(perm)
    if family == "D_of_trace":
        return D_of_trace(n, params["a"])
    if family == "block_I":
        return block_I(n)
    if family == "block_J":
        return block_J(n)
    if family == "block_C":
        if n < 2:
            raise ValueError("block_C needs half size n >= 2")
        return block_C(n)
    raise ValueError(f"unknown family {family!r}")


def segment_point(A: ExactMatrix, B: ExactMatrix, t) -> ExactMatrix:
    """The point ``(1 - t) A + t B`` of the segment [A, B]."""
    A._check_same(B)
    t = as_scalar(t)
    if not 0 <= t <= 1:
        raise ValueError(f"segment parameter {t} outside [0, 1]")
    s = 1 - t
    return ExactMatrix._trusted(
        tuple(tuple(s * x + t * y for x, y in zip(r, q)) for r, q in zip(A.rows, B.rows))
    )


def direct_sum(*blocks: ExactMatrix) -> ExactMatrix:
    if len(blocks) == 1 and not isinstance(blocks[0], ExactMatrix):
        blocks = tuple(blocks[0])
    if not blocks:
        raise ValueError("direct_sum needs at least one block")
    n = sum(b.n for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        left = (ZERO,) * offset
        right = (ZERO,) * (n - offset - b.n)
        rows.extend(left + r + right for r in b.rows)
        offset += b.n
    return ExactMatrix(rows)


def block_bipartite(A: ExactMatrix) -> ExactMatrix:
    """The 2n x 2n matrix [[0, J_n], [A, 0]] for doubly stochastic A."""
    if not is_doubly_stochastic(A):
        raise ValueError("block_bipartite needs a doubly stochastic matrix")
    return _block2(J(A.n), A)


def assemble_blocks(A: ExactMatrix, B: ExactMatrix, C_: ExactMatrix, D: ExactMatrix) -> ExactMatrix:
    """The matrix [[A, B], [C, D]] for four n x n blocks."""
    for X in (B, C_, D):
        A._check_same(X)
    rows = [ra + rb for ra, rb in zip(A.rows, B.rows)] + [rc + rd for rc, rd in zip(C_.rows, D.rows)]
    return ExactMatrix._trusted(tuple(rows))


# ---------------------------------------------------------------------------
# structure of the support digraph


def support_digraph(M: ExactMatrix) -> list[list[int]]:
    """Adjacency lists of the digraph with an edge i -> j iff M[i, j] > 0."""
    return [[j for j, x in enumerate(r) if x > 0] for r in M.rows]


def strongly_connected_components(adj: list[list[int]]) -> list[list[int]]:
    """Tarjan's algorithm, iterative; components sorted by smallest member."""
    n = len(adj)
    index = [None] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for k in range(pos, len(adj[v])):
                w = adj[v][k]
                if index[w] is None:
                    work.append((v, k + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
    comps.sort(key=lambda c: c[0])
    return comps


def irreducible_components(M: ExactMatrix) -> list[tuple[tuple[int, ...], ExactMatrix]]:
    """Index sets and diagonal blocks of the irreducible components of M.

    Concatenating the index sets gives a permutation ``p`` with
    ``M.permuted(p) == direct_sum(blocks)`` whenever M is doubly stochastic.
    """
    if not is_doubly_stochastic(M):
        raise ValueError("irreducible_components expects a doubly stochastic matrix")
    comps = strongly_connected_components(support_digraph(M))
    return [(tuple(c), M.submatrix(c)) for c in comps]


def is_irreducible(M: ExactMatrix) -> bool:
    return len(strongly_connected_components(support_digraph(M))) == 1


def imprimitivity_index(M: ExactMatrix) -> tuple[int, list[list[int]] | None]:
    """Return ``(k, classes)`` for an irreducible nonnegative matrix.

    ``k`` is the gcd of the cycle lengths of the support digraph.  For
    ``k > 1`` the classes are ordered so that every edge leaves class ``c``
    for class ``c + 1 (mod k)``, i.e. the cyclic block form.
    """
    adj = support_digraph(M)
    if len(strongly_connected_components(adj)) != 1:
        raise ValueError("imprimitivity_index needs an irreducible matrix")
    level = [-1] * M.n
    level[0] = 0
    queue = [0]
    g = 0
    for v in queue:
        for w in adj[v]:
            if level[w] < 0:
                level[w] = level[v] + 1
                queue.append(w)
            else:
                g = math.gcd(g, level[v] + 1 - level[w])
    k = abs(g)
    if k <= 1:
        return 1, None
    classes: list[list[int]] = [[] for _ in range(k)]
    for v in range(M.n):
        classes[level[v] % k].append(v)
    return k, classes


# ---------------------------------------------------------------------------
# elimination: determinant, rank, inverse


def _integer_rows(M: ExactMatrix) -> tuple[int, list[list[int]]]:
    """Scale a rational matrix to integers: returns (L, N) with M = N / L."""
    L = reduce(math.lcm, (x.denominator for r in M.rows for x in r), 1)
    return L, [[x.numerator * (L // x.denominator) for x in r] for r in M.rows]


def _bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    a = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def _gauss(rows: list[list], want_inverse: bool = False):
    """Row-reduce over the field of the entries; returns (rank, det, inverse|None)."""
    n = len(rows)
    m = len(rows[0]) if rows else 0
    a = [list(r) for r in rows]
    inv = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)] if want_inverse else None
    det = ONE
    rank = 0
    for col in range(m):
        piv = next((i for i in range(rank, n) if a[i][col] != 0), None)
        if piv is None:
            det = ZERO
            continue
        if piv != rank:
            a[rank], a[piv] = a[piv], a[rank]
            if inv is not None:
                inv[rank], inv[piv] = inv[piv], inv[rank]
            det = -det
        p = a[rank][col]
        det = det * p
        pinv = 1 / p
        a[rank] = [x * pinv for x in a[rank]]
        if inv is not None:
            inv[rank] = [x * pinv for x in inv[rank]]
        for i in range(n):
            if i != rank and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
                if inv is not None:
                    inv[i] = [x - f * y for x, y in zip(inv[i], inv[rank])]
        rank += 1
        if rank == n:
            break
    if rank < n:
        det = ZERO
    return rank, det, inv


def det(M: ExactMatrix) -> Scalar:
    if M.is_rational:
        L, N = _integer_rows(M)
        return Fraction(_bareiss_det(N), L**M.n)
    return _gauss([list(r) for r in M.rows])[1]


def rank(M: ExactMatrix | list[list]) -> int:
    rows = [list(r) for r in (M.rows if isinstance(M, ExactMatrix) else M)]
    if not rows:
        return 0
    return _gauss(rows)[0]


def inverse(M: ExactMatrix) -> ExactMatrix:
    r, _, inv = _gauss([list(row) for row in M.rows], want_inverse=True)
    if r < M.n:
        raise SingularMatrixError("matrix is singular")
    return ExactMatrix._trusted(tuple(tuple(row) for row in inv))
