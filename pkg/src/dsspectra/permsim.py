"""Permutation similarity: B = P^T A P, canonical forms and invariant prefilters.

Permutations are zero-based image lists ``p``; ``A.permuted(p)`` is the
matrix with entries ``A[p[i], p[j]]``.  A witness ``p`` for the pair (A, B)
satisfies ``A.permuted(p) == B``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Sequence

from .exactmat import DimensionError, ExactMatrix

MAX_SEARCH_N = 12


class BudgetError(ValueError):
    pass


@dataclass(frozen=True)
class PermWitness:
    permutation: tuple[int, ...] | None
    invariant_report: str | None = None

    @property
    def found(self) -> bool:
        return self.permutation is not None

    def __bool__(self) -> bool:
        return self.found

    def one_based(self) -> str:
        if self.permutation is None:
            return "none"
        return "[" + ",".join(str(i + 1) for i in self.permutation) + "]"


def entry_multiset(M: ExactMatrix) -> Counter:
    return Counter(x for r in M.rows for x in r)


def diagonal_multiset(M: ExactMatrix) -> Counter:
    return Counter(M.diagonal())


def _row_signature(M: ExactMatrix, i: int) -> tuple:
    r = M.rows
    return (r[i][i], tuple(sorted(r[i])), tuple(sorted(row[i] for row in r)))


def _joint_refinement(A: ExactMatrix, B: ExactMatrix, rounds: int | None = None):
    """Colour refinement run on both matrices with a shared colour table.

    Returns ``(colours_A, colours_B)`` or ``None`` as soon as the colour
    histograms differ (which proves the pair is not permutation-similar).
    """
    n = A.n
    sig_a = [_row_signature(A, i) for i in range(n)]
    sig_b = [_row_signature(B, i) for i in range(n)]
    while True:
        table = {s: k for k, s in enumerate(sorted(set(sig_a) | set(sig_b)))}
        col_a = [table[s] for s in sig_a]
        col_b = [table[s] for s in sig_b]
        if Counter(col_a) != Counter(col_b):
            return None
        ncol = len(set(col_a))
        ra, rb = A.rows, B.rows
        nxt_a = [
            (col_a[i], tuple(sorted((ra[i][j], col_a[j]) for j in range(n))),
             tuple(sorted((ra[j][i], col_a[j]) for j in range(n))))
            for i in range(n)
        ]
        nxt_b = [
            (col_b[i], tuple(sorted((rb[i][j], col_b[j]) for j in range(n))),
             tuple(sorted((rb[j][i], col_b[j]) for j in range(n))))
            for i in range(n)
        ]
        table2 = {s: k for k, s in enumerate(sorted(set(nxt_a) | set(nxt_b)))}
        new_a = [table2[s] for s in nxt_a]
        new_b = [table2[s] for s in nxt_b]
        if Counter(new_a) != Counter(new_b):
            return None
        if len(set(new_a)) == ncol:
            return col_a, col_b
        sig_a, sig_b = nxt_a, nxt_b


def prefilter(A: ExactMatrix, B: ExactMatrix) -> str | None:
    """Name of the first invariant separating A and B, or None."""
    if entry_multiset(A) != entry_multiset(B):
        return "entry multiset"
    if diagonal_multiset(A) != diagonal_multiset(B):
        return "diagonal multiset"
    if Counter(_row_signature(A, i) for i in range(A.n)) != Counter(_row_signature(B, i) for i in range(B.n)):
        return "row/column multisets"
    return None


def are_perm_similar(A: ExactMatrix, B: ExactMatrix, use_prefilters: bool = True) -> PermWitness:
    """Find the lexicographically least p with ``A.permuted(p) == B``.

    Cheap invariants are checked first (at any size); the exhaustive
    backtracking search needs ``n <= 12``.  With ``use_prefilters=False`` the
    invariants are skipped and the plain search decides.
    """
    if A.n != B.n:
        raise DimensionError(f"dimension mismatch: {A.n} vs {B.n}")
    n = A.n
    if use_prefilters:
        why = prefilter(A, B)
        if why:
            return PermWitness(None, why)
    if n > MAX_SEARCH_N:
        raise BudgetError(f"permutation search limited to n <= {MAX_SEARCH_N}, got {n}")
    if use_prefilters:
        cols = _joint_refinement(A, B)
        if cols is None:
            return PermWitness(None, "colour refinement")
        col_a, col_b = cols
    else:
        col_a = col_b = [0] * n
    ra, rb = A.rows, B.rows
    perm = [-1] * n
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        for v in range(n):
            if used[v] or col_a[v] != col_b[i]:
                continue
            if ra[v][v] != rb[i][i]:
                continue
            ok = True
            for j in range(i):
                w = perm[j]
                if ra[v][w] != rb[i][j] or ra[w][v] != rb[j][i]:
                    ok = False
                    break
            if not ok:
                continue
            perm[i] = v
            used[v] = True
            if extend(i + 1):
                return True
            used[v] = False
        perm[i] = -1
        return False

    if extend(0):
        return PermWitness(tuple(perm), None)
    return PermWitness(None, "exhaustive search")


def twin_classes(rows: Sequence[Sequence[Hashable]]) -> list[int]:
    """Representative index for each vertex; twins share one.

    ``v`` and ``w`` are twins when the transposition (v w) is an automorphism
    of the matrix.
    """
    n = len(rows)
    rep = list(range(n))
    for v in range(n):
        if rep[v] != v:
            continue
        for w in range(v + 1, n):
            if rep[w] != w:
                continue
            if rows[v][v] != rows[w][w] or rows[v][w] != rows[w][v]:
                continue
            if all(rows[v][x] == rows[w][x] and rows[x][v] == rows[x][w]
                   for x in range(n) if x != v and x != w):
                rep[w] = v
    return rep


def lexmin_relabeling(rows: Sequence[Sequence]) -> tuple[tuple[tuple, ...], tuple[int, ...]]:
    """Row-major lexicographically least ``rows[p[i]][p[j]]`` over permutations p.

    Positions are filled in order; the vertex for position k is drawn from the
    first cell of an ordered partition that earlier rows force, and ties are
    branched on, skipping twins.  Returns ``(matrix, p)``.
    """
    n = len(rows)
    rep = twin_classes(rows)
    best: list = [None, None]

    def search(placed: list[int], cells: list[list[int]], prefix: list[tuple]) -> None:
        k = len(placed)
        if k == n:
            cand = tuple(prefix)
            if best[0] is None or cand < best[0]:
                best[0], best[1] = cand, tuple(placed)
            return
        first = cells[0]
        keyed = []
        seen_reps = set()
        for v in first:
            if rep[v] in seen_reps:
                continue
            seen_reps.add(rep[v])
            rv = rows[v]
            tail = []
            new_cells = []
            for ci, cell in enumerate(cells):
                members = [u for u in cell if u != v] if ci == 0 else cell
                if not members:
                    continue
                members = sorted(members, key=lambda u: (rv[u], u))
                tail.extend(rv[u] for u in members)
                # split into runs of equal value
                run = [members[0]]
                for u in members[1:]:
                    if rv[u] == rv[run[-1]]:
                        run.append(u)
                    else:
                        new_cells.append(run)
                        run = [u]
                new_cells.append(run)
            row = tuple(rv[u] for u in placed) + (rv[v],) + tuple(tail)
            keyed.append((row, v, new_cells))
        best_row = min(r for r, _, _ in keyed)
        if best[0] is not None:
            incumbent = best[0][: k + 1]
            current = tuple(prefix) + (best_row,)
            if current > incumbent:
                return
        for row, v, new_cells in keyed:
            if row != best_row:
                continue
            search(placed + [v], new_cells, prefix + [row])

    search([], [list(range(n))], [])
    return best[0], best[1]


def canonical_form(M: ExactMatrix) -> ExactMatrix:
    """Lexicographically least P^T M P, entries compared by exact value."""
    if M.n > MAX_SEARCH_N:
        raise BudgetError(f"canonical form limited to n <= {MAX_SEARCH_N}, got {M.n}")
    mat, _ = lexmin_relabeling(M.rows)
    return ExactMatrix._trusted(mat, M.d)


def canonical_relabeling(M: ExactMatrix) -> tuple[int, ...]:
    if M.n > MAX_SEARCH_N:
        raise BudgetError(f"canonical form limited to n <= {MAX_SEARCH_N}, got {M.n}")
    return lexmin_relabeling(M.rows)[1]
