"""Regular graphs as symmetric doubly stochastic matrices.

A k-regular graph G on n vertices gives (1/k) A(G), a symmetric doubly
stochastic matrix of zero trace; cospectral non-isomorphic regular graphs
therefore give matrices that are not DS.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from . import exactmat as em
from . import permsim, spectra
from .exactmat import ExactMatrix

MAX_GRAPH_N = 32
MAX_ENUM_N = 10


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; ``adj[i]`` is the neighbour bitset of vertex i."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_GRAPH_N:
            raise GraphError(f"graphs are limited to {MAX_GRAPH_N} vertices")
        if len(self.adj) != self.n:
            raise GraphError("adjacency length must equal n")
        full = (1 << self.n) - 1
        for i, row in enumerate(self.adj):
            if row & ~full or row >> i & 1:
                raise GraphError(f"row {i} has a loop or an out-of-range bit")
            for j in range(self.n):
                if (row >> j & 1) != (self.adj[j] >> i & 1):
                    raise GraphError("adjacency is not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError("loops are not allowed")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def from_matrix(cls, A: ExactMatrix) -> "Graph":
        adj = []
        for i, row in enumerate(A.rows):
            bits = 0
            for j, x in enumerate(row):
                if x not in (0, 1):
                    raise GraphError("adjacency entries must be 0 or 1")
                if x == 1:
                    bits |= 1 << j
            adj.append(bits)
        return cls(A.n, tuple(adj))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return bin(self.adj[v]).count("1")

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n) if self.has_edge(u, v)]

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, tuple(full & ~row & ~(1 << i) for i, row in enumerate(self.adj)))

    def to_matrix(self) -> ExactMatrix:
        return ExactMatrix([[1 if self.has_edge(i, j) else 0 for j in range(self.n)] for i in range(self.n)])

    def adjacency_rows(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(row >> j & 1 for j in range(self.n)) for row in self.adj)

    def relabel(self, perm) -> "Graph":
        """The graph with adjacency ``A[perm[i]][perm[j]]``."""
        return Graph.from_edges(
            self.n,
            [(i, j) for i in range(self.n) for j in range(i + 1, self.n) if self.has_edge(perm[i], perm[j])],
        )

    def graph6(self) -> str:
        return to_graph6(self)


# ---------------------------------------------------------------------------
# named graphs


def complete(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycles need n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def perfect_matching(n: int) -> Graph:
    if n % 2:
        raise GraphError("perfect matchings need even n")
    return Graph.from_edges(n, [(2 * i, 2 * i + 1) for i in range(n // 2)])


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0
    for g in graphs:
        edges += [(u + offset, v + offset) for u, v in g.edges()]
        offset += g.n
    return Graph.from_edges(offset, edges)


# ---------------------------------------------------------------------------
# graph6


def to_graph6(G: Graph) -> str:
    """Standard graph6: N(n), then the upper triangle column by column, 6 bits per char + 63."""
    n = G.n
    if n > 62:
        raise GraphError("graph6 short form needs n <= 62")
    bits = [1 if G.has_edge(i, j) else 0 for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(n + 63)]
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k:k + 6]:
            v = v << 1 | b
        out.append(chr(v + 63))
    return "".join(out)


def from_graph6(text: str) -> Graph:
    text = text.strip()
    if text.startswith(">>graph6<<"):
        text = text[10:]
    if not text or any(not 63 <= ord(c) <= 126 for c in text):
        raise GraphError(f"malformed graph6 string {text!r}")
    n = ord(text[0]) - 63
    if n > 62:
        raise GraphError("only the short graph6 form (n <= 62) is supported")
    need = n * (n - 1) // 2
    bits = []
    for c in text[1:]:
        v = ord(c) - 63
        bits += [(v >> s) & 1 for s in range(5, -1, -1)]
    if len(bits) < need or len(text) - 1 != (need + 5) // 6:
        raise GraphError("graph6 string has the wrong length")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph.from_edges(n, edges)


# ---------------------------------------------------------------------------
# regularity and scaling


def is_k_regular(G: Graph) -> int | None:
    if G.n == 0:
        return 0
    degs = {G.degree(v) for v in range(G.n)}
    return degs.pop() if len(degs) == 1 else None


def scale_to_ds(G: Graph) -> ExactMatrix:
    """(1/k) A(G) for a k-regular graph with k >= 1."""
    k = is_k_regular(G)
    if not k:
        raise GraphError("scale_to_ds needs a k-regular graph with k >= 1")
    w = Fraction(1, k)
    return ExactMatrix._trusted(
        tuple(tuple(w if G.has_edge(i, j) else Fraction(0) for j in range(G.n)) for i in range(G.n))
    )


@dataclass(frozen=True)
class SrgParams:
    v: int
    k: int
    lam: int
    mu: int

    def consistent(self) -> bool:
        return self.k * (self.k - self.lam - 1) == (self.v - self.k - 1) * self.mu


def srg_params(G: Graph) -> SrgParams | None:
    k = is_k_regular(G)
    if k is None or k == 0 or k == G.n - 1:
        return None
    lam = mu = None
    for u in range(G.n):
        for v in range(u + 1, G.n):
            common = bin(G.adj[u] & G.adj[v]).count("1")
            if G.has_edge(u, v):
                if lam is None:
                    lam = common
                elif lam != common:
                    return None
            else:
                if mu is None:
                    mu = common
                elif mu != common:
                    return None
    return SrgParams(G.n, k, lam or 0, mu or 0)


# ---------------------------------------------------------------------------
# enumeration


def canonical_key(G: Graph) -> tuple[tuple[int, ...], ...]:
    return permsim.lexmin_relabeling(G.adjacency_rows())[0]


def canonical_graph(G: Graph) -> Graph:
    rows = canonical_key(G)
    return Graph(G.n, tuple(sum(b << j for j, b in enumerate(r)) for r in rows))


def are_isomorphic(G: Graph, H: Graph) -> bool:
    return G.n == H.n and bool(permsim.are_perm_similar(G.to_matrix(), H.to_matrix()))


def _generate(n: int, k: int) -> Iterable[tuple[int, ...]]:
    """Labelled k-regular graphs covering every isomorphism class.

    Rows are filled in order.  Candidates j > i with the same adjacency to
    the earlier vertices are interchangeable, so only the first members of
    each such class are ever chosen.
    """
    adj = [0] * n
    deg = [0] * n

    def rec(i: int):
        if i == n:
            yield tuple(adj)
            return
        need = k - deg[i]
        cands = [j for j in range(i + 1, n) if deg[j] < k]
        if need < 0 or need > len(cands):
            return
        if need == 0:
            yield from rec(i + 1)
            return
        mask = (1 << i) - 1
        classes: dict[int, list[int]] = {}
        for j in cands:
            classes.setdefault(adj[j] & mask, []).append(j)
        groups = list(classes.values())

        def choose(g: int, left: int, picked: list[int]):
            if left == 0:
                for j in picked:
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
                    deg[j] += 1
                deg[i] += len(picked)
                if feasible(i):
                    yield from rec(i + 1)
                deg[i] -= len(picked)
                for j in picked:
                    adj[i] &= ~(1 << j)
                    adj[j] &= ~(1 << i)
                    deg[j] -= 1
                return
            if g == len(groups):
                return
            room = sum(len(x) for x in groups[g:])
            if room < left:
                return
            members = groups[g]
            for c in range(min(left, len(members)), -1, -1):
                yield from choose(g + 1, left - c, picked + members[:c])

        yield from choose(0, need, [])

    def feasible(i: int) -> bool:
        rest = [j for j in range(i + 1, n)]
        needs = [k - deg[j] for j in rest]
        if any(x < 0 for x in needs) or sum(needs) % 2:
            return False
        active = sum(1 for x in needs if x > 0)
        return all(x <= active - 1 for x in needs if x > 0)

    yield from rec(0)


@lru_cache(maxsize=None)
def _enumerate_keys(n: int, k: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    if 2 * k > n - 1 and k > 0:
        comp = _enumerate_keys(n, n - 1 - k)
        keys = set()
        for rows in comp:
            G = Graph(n, tuple(sum(b << j for j, b in enumerate(r)) for r in rows)).complement()
            keys.add(canonical_key(G))
        return tuple(sorted(keys))
    keys = set()
    for adj in _generate(n, k):
        keys.add(canonical_key(Graph(n, adj)))
    return tuple(sorted(keys))


def enumerate_regular(n: int, k: int) -> list[Graph]:
    """All k-regular graphs on n vertices up to isomorphism, canonical-form ascending."""
    if not 1 <= n <= MAX_ENUM_N:
        raise GraphError(f"enumeration supports 1 <= n <= {MAX_ENUM_N}")
    if not 0 <= k < n:
        raise GraphError("need 0 <= k < n")
    if n * k % 2:
        raise GraphError(f"no {k}-regular graph on {n} vertices (nk odd)")
    return [
        Graph(n, tuple(sum(b << j for j, b in enumerate(r)) for r in rows))
        for rows in _enumerate_keys(n, k)
    ]


def adjacency_char_poly(G: Graph) -> spectra.CharPoly:
    return spectra.char_poly(G.to_matrix())


@dataclass(frozen=True)
class MatePair:
    G: Graph
    H: Graph
    char_poly: spectra.CharPoly

    @property
    def witnesses(self) -> tuple[ExactMatrix, ExactMatrix]:
        return scale_to_ds(self.G), scale_to_ds(self.H)


def cospectral_mates(n: int, k: int) -> list[MatePair]:
    graphs = enumerate_regular(n, k)
    polys = [adjacency_char_poly(g) for g in graphs]
    pairs = []
    for i in range(len(graphs)):
        for j in range(i + 1, len(graphs)):
            if polys[i] == polys[j]:
                pairs.append(MatePair(graphs[i], graphs[j], polys[i]))
    return pairs


def mate_scan(max_n: int) -> dict[tuple[int, int], list[MatePair]]:
    """Cospectral mate pairs for every feasible (n, k) with k >= 1 and n <= max_n."""
    out = {}
    for n in range(2, max_n + 1):
        for k in range(1, n):
            if n * k % 2 == 0:
                out[(n, k)] = cospectral_mates(n, k)
    return out


@dataclass
class GraphDSReport:
    n: int
    k: int
    graph_ds: bool
    graph_mates: list[Graph]
    verdict: "object"

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "ds_among_regular_graphs": self.graph_ds,
            "graph_mates": [g.graph6() for g in self.graph_mates],
            "matrix_verdict": self.verdict.to_json_obj(),
        }


def graph_ds_report(G: Graph, budget: int = 200, seed: int = 0) -> GraphDSReport:
    """Graph-level and matrix-level DS evidence side by side; no implication is drawn."""
    from . import certify

    k = is_k_regular(G)
    if not k:
        raise GraphError("graph_ds_report needs a k-regular graph with k >= 1")
    if G.n > MAX_ENUM_N:
        raise GraphError(f"graph_ds_report needs n <= {MAX_ENUM_N}")
    poly = adjacency_char_poly(G)
    key = canonical_key(G)
    mates = [
        H for H in enumerate_regular(G.n, k)
        if canonical_key(H) != key and adjacency_char_poly(H) == poly
    ]
    verdict = certify.certify(scale_to_ds(G), "sym", budget=budget, seed=seed)
    return GraphDSReport(G.n, k, not mates, mates, verdict)
