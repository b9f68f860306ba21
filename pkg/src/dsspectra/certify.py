"""Decide whether a doubly stochastic matrix is determined by its spectrum (DS).

``certify`` runs a fixed pipeline of family matchers, constructive
refutations and a bounded mate search.  Certified verdicts name the family
that proves DS; refuted verdicts carry an exactly re-verified mate; anything
else is reported as Unknown together with the search statistics.

Two scopes are supported: ``"sym"`` (the ambient class is the symmetric
doubly stochastic matrices) and ``"full"`` (all doubly stochastic matrices).
A family is only used in the scope where DS is known to hold.
"""
from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence

import numpy as np

from . import exactmat as em
from . import permsim, spectra, triangle3
from .exactmat import ExactMatrix
from .scalars import as_scalar, format_scalar

CERTIFIED = "CertifiedDS"
REFUTED = "RefutedDS"
UNKNOWN = "Unknown"
SCOPES = ("sym", "full")

DEFAULT_BUDGET = 2000
DEFAULT_SEED = 0
RECONSTRUCT_DENOMINATOR = 10**4
RECONSTRUCT_RESIDUAL = 1e-9
GRAPH_MATE_MAX_N = 10


class VerificationError(AssertionError):
    """A witness failed exact re-verification."""


# ---------------------------------------------------------------------------
# witness checks


def witness_problem(M: ExactMatrix, W: ExactMatrix, scope: str) -> str | None:
    """Why ``W`` is not a valid refutation witness for ``M``, or None if it is."""
    if W.n != M.n:
        return "dimension mismatch"
    if not em.is_doubly_stochastic(W):
        return "witness is not doubly stochastic"
    if scope == "sym" and not em.is_symmetric(W):
        return "witness is not symmetric"
    if not spectra.cospectral(M, W):
        return "witness is not cospectral"
    if not (em.is_symmetric(M) and em.is_symmetric(W)) and W != M.T:
        # cospectral is not enough outside the symmetric case
        try:
            if not spectra.are_similar_exact(M, W):
                return "witness is not similar"
        except spectra.SimilarityUndecided:
            return "similarity undecided"
    if permsim.prefilter(M, W) is None:
        if M.n > permsim.MAX_SEARCH_N:
            return "permutation similarity not decidable at this size"
        if permsim.are_perm_similar(M, W):
            return "witness is permutation-similar"
    return None


def _verified(M: ExactMatrix, W: ExactMatrix, scope: str) -> bool:
    return witness_problem(M, W, scope) is None


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class Verdict:
    status: str
    scope: str
    subject: ExactMatrix
    certificate: str | None = None
    witness: ExactMatrix | None = None
    evidence: str | None = None
    also: list[str] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.status not in (CERTIFIED, REFUTED, UNKNOWN):
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == REFUTED:
            if self.witness is None:
                raise VerificationError("refutation without a witness")
            why = witness_problem(self.subject, self.witness, self.scope)
            if why:
                raise VerificationError(f"refutation witness rejected: {why}")
        if self.status == CERTIFIED and not self.certificate:
            raise ValueError("certified verdict needs a certificate")

    @property
    def certificates(self) -> list[str]:
        return ([self.certificate] if self.certificate else []) + self.also

    @property
    def exit_code(self) -> int:
        return {CERTIFIED: 0, REFUTED: 3, UNKNOWN: 4}[self.status]

    def to_json_obj(self) -> dict:
        return {
            "status": self.status,
            "scope": self.scope,
            "certificate": self.certificate,
            "also": list(self.also),
            "witness": None if self.witness is None else self.witness.to_json_obj(),
            "evidence": self.evidence,
            "seed": self.seed,
            "budget": self.budget,
            "stats": self.stats,
        }


# ---------------------------------------------------------------------------
# family matchers; each returns a short description or None


def match_permutation(M: ExactMatrix) -> str | None:
    return "permutation matrix" if em.is_permutation_matrix(M) else None


def match_IJC(M: ExactMatrix) -> str | None:
    n = M.n
    if M == em.identity(n):
        return "family I_n"
    if M == em.J(n):
        return "family J_n"
    if n >= 2 and M == em.C(n):
        return "family C_n"
    return None


def segment_IC_parameter(M: ExactMatrix):
    """Trace ``a`` when M = D_a lies on [I_n, C_n], else None."""
    n = M.n
    if n < 2:
        return None
    a = M.trace()
    if not isinstance(a, Fraction) or not 0 <= a <= n:
        return None
    return a if M == em.D_of_trace(n, a) else None


def match_segment_IC(M: ExactMatrix) -> str | None:
    a = segment_IC_parameter(M)
    return None if a is None else f"segment [I_n,C_n] at trace {format_scalar(a)}"


def _components(M: ExactMatrix) -> list[tuple[tuple[int, ...], ExactMatrix]]:
    return em.irreducible_components(M)


def match_C_sum(M: ExactMatrix) -> str | None:
    comps = _components(M)
    sizes = []
    for _, block in comps:
        m = block.n
        if m < 2 or block != em.C(m):
            return None
        sizes.append(m)
    return "direct sum of C blocks " + "+".join(str(m) for m in sorted(sizes))


def _block_segment_candidates(M: ExactMatrix) -> Iterator[tuple[int, Fraction, ExactMatrix]]:
    n = M.n
    if n % 2 or n < 4:
        return
    m = n // 2
    values = sorted({x for r in M.rows for x in r if x != 0 and isinstance(x, Fraction)})
    ts = set()
    for v in values:
        ts.add(1 - v)
        ts.add(v * (m - 1))
    ts.update({Fraction(0), Fraction(1)})
    bI, bC = em.block_I(m), em.block_C(m)
    for t in sorted(ts):
        if 0 <= t <= 1:
            yield m, t, em.segment_point(bI, bC, t)


def block_segment_parameter(M: ExactMatrix):
    """(half size, t) when M is permutation-similar to (1-t) I + t C in block form."""
    if not em.is_symmetric(M) or M.trace() != 0:
        return None
    if M.n > permsim.MAX_SEARCH_N:
        return None
    for m, t, K in _block_segment_candidates(M):
        if permsim.are_perm_similar(M, K):
            return m, t
    return None


def match_block_segment(M: ExactMatrix) -> str | None:
    hit = block_segment_parameter(M)
    if hit is None:
        return None
    return f"block segment [I,C] half size {hit[0]} at t={format_scalar(hit[1])}"


def J_partition(M: ExactMatrix) -> list[int] | None:
    """Block sizes when M is permutation-similar to a direct sum of J blocks."""
    sizes = []
    for _, block in _components(M):
        if block != em.J(block.n):
            return None
        sizes.append(block.n)
    return sorted(sizes)


def J_partition_mate(sizes: Sequence[int]) -> list[int] | None:
    """Another partition with the same number of parts, or None if unique.

    The smallest block of size >= 2 loses one row, the largest other block
    gains it; for {3, 3} this gives {2, 4}.
    """
    sizes = sorted(sizes)
    n, k = sum(sizes), len(sizes)
    if not 2 <= k <= n - 2:
        return None
    i = next(idx for idx, s in enumerate(sizes) if s >= 2)
    others = [idx for idx in range(k) if idx != i]
    j = max(others, key=lambda idx: (sizes[idx], idx))
    new = list(sizes)
    new[i] -= 1
    new[j] += 1
    new.sort()
    return new if new != sizes else None


# matchers that certify DS, in pipeline order, with the scopes they hold in
FAMILY_MATCHERS: tuple[tuple[str, Callable[[ExactMatrix], str | None], tuple[str, ...]], ...] = (
    ("permutation", match_permutation, ("sym", "full")),
    ("IJC", match_IJC, ("sym", "full")),
    ("segment_IC", match_segment_IC, ("sym", "full")),
    ("C_sum", match_C_sum, ("sym", "full")),
    ("block_segment", match_block_segment, ("sym", "full")),
)


# ---------------------------------------------------------------------------
# mate search


@dataclass
class MateSearchResult:
    witness: ExactMatrix | None
    strategy: str | None
    stats: dict


def _partitions(total: int, parts: int, lo: int = 1) -> Iterator[tuple[int, ...]]:
    """Nondecreasing partitions of ``total`` into exactly ``parts`` parts >= lo."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(lo, total // parts + 1):
        for rest in _partitions(total - first, parts - 1, first):
            yield (first,) + rest


def _D_block(m: int, mu: Fraction) -> ExactMatrix | None:
    # mu I + (1 - mu) J_m, spectrum (1, mu, ..., mu)
    if m == 1:
        return em.identity(1)
    if mu < Fraction(-1, m - 1) or mu > 1:
        return None
    return em.identity(m).scale(mu) + em.J(m).scale(1 - mu)


def _D_block_mu(block: ExactMatrix) -> Fraction | None:
    m = block.n
    if m == 1:
        return None
    mu = block[0, 0] - block[0, 1]
    if not isinstance(mu, Fraction):
        return None
    return mu if block == _D_block(m, mu) else None


def _structured_candidates(M: ExactMatrix, budget: int) -> Iterator[tuple[str, ExactMatrix]]:
    comps = _components(M)
    blocks = [b for _, b in comps]
    # D-block recombination
    units = sum(1 for b in blocks if b.n == 1)
    groups: dict[Fraction, list[int]] = {}
    rest: list[ExactMatrix] = []
    for b in blocks:
        if b.n == 1:
            continue
        mu = _D_block_mu(b)
        if mu is None:
            rest.append(b)
        else:
            groups.setdefault(mu, []).append(b.n)
    for mu in sorted(groups):
        for extra in range(units + 1):
            sizes = sorted(groups[mu] + [1] * extra)
            total, k = sum(sizes), len(sizes)
            options = []
            rule = J_partition_mate(sizes)
            if rule:
                options.append(tuple(rule))
            options.extend(p for p in _partitions(total, k) if list(p) != sizes and p not in options)
            for part in options[:budget]:
                new_blocks = [_D_block(m, mu) for m in part]
                if any(b is None for b in new_blocks):
                    continue
                others = rest + [em.identity(1)] * (units - extra)
                for nu in sorted(groups):
                    if nu != mu:
                        others += [_D_block(m, nu) for m in groups[nu]]
                yield "D-block recombination", em.direct_sum(new_blocks + others)
    # substitute one component by a mate of its own
    for idx, b in enumerate(blocks):
        if b.n < 3 or b.n == M.n or not em.is_symmetric(b):
            continue
        sub = certify(b, "sym", budget=max(1, budget // 4), _depth=1)
        if sub.status == REFUTED:
            new_blocks = list(blocks)
            new_blocks[idx] = sub.witness
            yield "component substitution", em.direct_sum(new_blocks)


def _graph_candidates(M: ExactMatrix) -> Iterator[tuple[str, ExactMatrix]]:
    if M.n > GRAPH_MATE_MAX_N or M.trace() != 0:
        return
    vals = {x for r in M.rows for x in r if x != 0}
    if len(vals) != 1:
        return
    (v,) = vals
    if not isinstance(v, Fraction) or v.numerator != 1:
        return
    k = v.denominator
    from . import graphbridge

    target = spectra.char_poly(M)
    for H in graphbridge.enumerate_regular(M.n, k):
        W = graphbridge.scale_to_ds(H)
        if spectra.char_poly(W) == target:
            yield "regular graph mate", W


def _random_sym_ds(n: int, rng: random.Random) -> np.ndarray:
    Y = np.zeros((n, n))
    weights = [rng.random() for _ in range(n)]
    total = sum(weights)
    for w in weights:
        p = list(range(n))
        rng.shuffle(p)
        P = np.zeros((n, n))
        P[np.arange(n), p] = 1.0
        Y += (w / total) * (P + P.T) / 2
    return Y


def _project_sds(Y: np.ndarray, rounds: int = 30) -> np.ndarray:
    """Approximate nearest symmetric doubly stochastic matrix (Dykstra)."""
    n = Y.shape[0]
    Y = (Y + Y.T) / 2
    ones = np.ones(n)
    p = np.zeros_like(Y)
    q = np.zeros_like(Y)
    for _ in range(rounds):
        Z = Y + p
        r = ones - Z @ ones
        s = r.sum() / (2 * n)
        v = (r - s) / n
        A = Z + np.outer(v, ones) + np.outer(ones, v)
        p = Z - A
        W = A + q
        B = np.maximum(W, 0.0)
        q = W - B
        Y = B
    return Y


def _reconstruct(Y: np.ndarray) -> ExactMatrix | None:
    n = Y.shape[0]
    off = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = Fraction(float(Y[i, j])).limit_denominator(RECONSTRUCT_DENOMINATOR)
            off[i][j] = off[j][i] = v
    rows = []
    for i in range(n):
        row = list(off[i])
        row[i] = 1 - sum(off[i])
        if row[i] < 0:
            return None
        rows.append(row)
    W = ExactMatrix(rows)
    if float(np.max(np.abs(np.array(W.to_float()) - Y))) > RECONSTRUCT_RESIDUAL:
        return None
    return W


def _numeric_candidates(M: ExactMatrix, budget: int, seed: int, stats: dict) -> Iterator[tuple[str, ExactMatrix]]:
    n = M.n
    target = np.linalg.eigvalsh(np.array(M.to_float()))
    rng = random.Random(seed)
    per_restart = 200
    used = 0
    while used < budget:
        Y = _random_sym_ds(n, rng)
        steps = min(per_restart, budget - used)
        for _ in range(steps):
            _, U = np.linalg.eigh(Y)
            Y = (U * target) @ U.T
            Y = _project_sds(Y)
        used += steps
        stats["numeric_iterations"] = used
        stats["numeric_restarts"] = stats.get("numeric_restarts", 0) + 1
        err = float(np.max(np.abs(np.linalg.eigvalsh(Y) - target)))
        if err > 1e-6:
            continue
        W = _reconstruct(Y)
        if W is not None:
            yield "numeric isospectral search", W


def mate_search(M: ExactMatrix, budget: int = DEFAULT_BUDGET, seed: int = DEFAULT_SEED,
                scope: str = "sym") -> MateSearchResult:
    """Look for an exactly verified cospectral, non-permutation-similar mate.

    Absence of a witness is never a claim that none exists.
    """
    stats: dict = {"candidates": 0, "strategies": []}
    sources = [
        ("structured", lambda: _structured_candidates(M, budget)),
        ("graph", lambda: _graph_candidates(M)),
        ("numeric", lambda: _numeric_candidates(M, budget, seed, stats)),
    ]
    if not em.is_symmetric(M):
        sources = [("transpose", lambda: iter([("transpose", M.T)]))]
    for name, make in sources:
        stats["strategies"].append(name)
        for label, W in make():
            stats["candidates"] += 1
            if _verified(M, W, scope):
                return MateSearchResult(W, label, stats)
    return MateSearchResult(None, None, stats)


# ---------------------------------------------------------------------------
# the pipeline


def _check_scope(M: ExactMatrix, scope: str) -> None:
    if scope not in SCOPES:
        raise ValueError(f"scope must be one of {SCOPES}, got {scope!r}")
    if not M.is_rational:
        raise ValueError("certify needs a rational matrix")
    if not em.is_doubly_stochastic(M):
        raise ValueError("matrix is not doubly stochastic")
    if scope == "sym" and not em.is_symmetric(M):
        raise ValueError("scope 'sym' needs a symmetric matrix")


def _family_hits(M: ExactMatrix, scope: str) -> list[str]:
    hits = []
    for _, matcher, scopes in FAMILY_MATCHERS:
        if scope in scopes:
            tag = matcher(M)
            if tag:
                hits.append(tag)
    return hits


def certify(M: ExactMatrix, scope: str = "sym", budget: int = DEFAULT_BUDGET,
            seed: int = DEFAULT_SEED, _depth: int = 0) -> Verdict:
    """Run the DS decision pipeline on ``M``; the first decisive step wins."""
    _check_scope(M, scope)
    subject = M
    n = M.n
    if n <= permsim.MAX_SEARCH_N:
        M = permsim.canonical_form(M)

    def done(status, **kw) -> Verdict:
        return Verdict(status, scope, subject, seed=seed, budget=budget, **kw)

    if n <= 2:
        return done(CERTIFIED, certificate="order<=2", also=_family_hits(M, scope))
    triangle_tag = None
    if n == 3 and em.is_symmetric(M):
        # segment names depend on the labelling, so classify the input itself
        cls = triangle3.classify(subject)
        if cls.is_ds:
            triangle_tag = f"triangle3 segment {cls.segment_name} t={format_scalar(cls.t)}"
        else:
            W = triangle3.mate_for(subject)
            return done(REFUTED, witness=W, evidence="triangle3 level-curve mate")
    hits = _family_hits(M, scope)
    if scope == "sym" and triangle_tag:
        hits = [triangle_tag] + hits
    if hits:
        return done(CERTIFIED, certificate=hits[0], also=hits[1:])
    sizes = J_partition(M)
    if sizes is not None:
        new = J_partition_mate(sizes)
        if new is not None:
            W = em.direct_sum([em.J(m) for m in new])
            return done(REFUTED, witness=W, evidence=f"J-block repartition {sizes} -> {new}")
    found = mate_search(M, budget=budget, seed=seed, scope=scope)
    if found.witness is not None:
        return done(REFUTED, witness=found.witness, evidence=found.strategy, stats=found.stats)
    stats = dict(found.stats)
    if triangle_tag:
        stats["note"] = f"{triangle_tag} holds only among symmetric matrices"
    return done(UNKNOWN, stats=stats)


# ---------------------------------------------------------------------------
# spectra that characterize a matrix


@dataclass
class Characterization:
    status: str  # "characterizes", "does-not-characterize", "unknown"
    reason: str
    realization: ExactMatrix | None = None
    mate: ExactMatrix | None = None


def _normalize_spectrum(lam) -> list[Fraction]:
    lam = sorted((as_scalar(x) for x in lam), reverse=True)
    if not lam or lam[0] != 1:
        raise ValueError("spectrum must contain 1 as its largest element")
    if any(not isinstance(x, Fraction) for x in lam):
        raise ValueError("only rational spectra are supported")
    if any(abs(x) > 1 for x in lam):
        raise ValueError("eigenvalues must lie in [-1, 1]")
    return lam


def triangle_realization(lam: list[Fraction]) -> tuple[ExactMatrix, Fraction] | None:
    """Symmetric realization of a descending order-3 spectrum, with its slice parameter.

    Every matrix of trace a projects to a trace-one point with nontrivial
    eigenvalues +-alpha; the realization returned is the lift of
    alpha X + (1 - alpha) J_3.  None when no symmetric realization exists.
    """
    _, l2, l3 = lam
    a = 1 + l2 + l3
    if not 0 <= a <= 3:
        return None
    s = (3 - a) / 2 if a >= 1 else a
    if s == 0:
        return (em.D_of_trace(3, a), Fraction(0)) if l2 == l3 else None
    alpha = (l2 - l3) / (2 * s)
    if alpha > 1:
        return None
    base = triangle3.X.scale(alpha) + em.J(3).scale(1 - alpha)
    if a >= 1:
        center, t = em.identity(3), 2 / (3 - a)
    else:
        center, t = em.C(3), 1 / a
    R = (base - center.scale(1 - t)).scale(1 / t)
    return R, alpha


def _D_realization(lam: list[Fraction]) -> ExactMatrix | None:
    n = len(lam)
    mus = set(lam[1:])
    if len(mus) != 1:
        return None
    (mu,) = mus
    if mu < Fraction(-1, n - 1):
        return None
    return em.D_of_trace(n, 1 + (n - 1) * mu)


def _pm1_realization(lam: list[Fraction]) -> ExactMatrix | None:
    if any(x not in (1, -1) for x in lam) or sum(lam) < 0:
        return None
    n = len(lam)
    swaps = sum(1 for x in lam if x == -1)
    perm = list(range(n))
    for i in range(swaps):
        perm[2 * i], perm[2 * i + 1] = 2 * i + 1, 2 * i
    return em.permutation_matrix(perm)


def _block_realizations(lam: list[Fraction]) -> list[ExactMatrix]:
    """Direct sums of D blocks realizing lam: one block per eigenvalue 1."""
    n = len(lam)
    ones = sum(1 for x in lam if x == 1)
    rest = Counter(x for x in lam if x != 1)
    out = []
    # assign each non-unit eigenvalue value to a single block, the remaining
    # unit eigenvalues become blocks of size 1 or join D blocks with mu = 1
    values = sorted(rest)
    if len(values) > ones:
        return out
    blocks = []
    for mu in values:
        b = _D_block(rest[mu] + 1, mu)
        if b is None:
            return out
        blocks.append(b)
    blocks += [em.identity(1)] * (ones - len(values))
    if sum(b.n for b in blocks) == n:
        out.append(em.direct_sum(blocks))
    return out


def spectrum_characterization(lam, n: int | None = None, budget: int = 200,
                              seed: int = DEFAULT_SEED) -> Characterization:
    """Does the spectrum ``lam`` characterize a symmetric DS matrix up to permutation?"""
    lam = _normalize_spectrum(lam)
    if n is not None and n != len(lam):
        raise ValueError(f"spectrum has {len(lam)} entries, expected {n}")
    n = len(lam)
    target = spectra.CharPoly.from_roots(lam)
    if n == 1:
        return Characterization("characterizes", "order 1", em.identity(1))
    if n == 2:
        M = em.D_of_trace(2, 1 + lam[1])
        return Characterization("characterizes", "order 2: every point of the segment", M)
    if n == 3:
        hit = triangle_realization(lam)
        if hit is None:
            return Characterization("does-not-characterize", "no symmetric doubly stochastic realization")
        R, alpha = hit
        if alpha in (0, 1):
            return Characterization("characterizes", "spectrum of one of the order-3 segments", R)
        return Characterization("does-not-characterize", "realization off the segments has a mate",
                                R, triangle3.mate_for(R))
    R = _pm1_realization(lam)
    if R is not None:
        return Characterization("characterizes", "vertex spectrum (all +-1)", R)
    R = _D_realization(lam)
    if R is not None:
        return Characterization("characterizes", "equal nontrivial eigenvalues: unique D_a", R)
    for R in _block_realizations(lam):
        if spectra.char_poly(R) != target:
            continue
        v = certify(R, "sym", budget=budget, seed=seed)
        if v.status == REFUTED:
            return Characterization("does-not-characterize", f"realization refuted ({v.evidence})", R, v.witness)
        return Characterization("unknown", f"realization found, certify: {v.status}", R)
    return Characterization("unknown", "no realization found")


def positive_realization_report(M: ExactMatrix) -> dict:
    """Check the chain: DS among symmetric matrices plus a zero entry ==> no positive realization.

    Any symmetric doubly stochastic matrix with the spectrum of M is similar
    to M, hence of the form P^T M P when M is DS, hence has a zero entry too.
    """
    roots = sorted((r for r, m in spectra.char_poly(M).roots() for _ in range(m)), reverse=True)
    complete = len(roots) == M.n
    hw = triangle3.hw_inequality(roots) if complete else None
    v = certify(M, "sym")
    zero = any(x == 0 for r in M.rows for x in r)
    conclusive = complete and v.status == CERTIFIED and zero
    return {
        "spectrum": [format_scalar(x) for x in roots],
        "inequality_value": hw,
        "inequality_holds": hw is not None and hw >= 0,
        "certified": v.status == CERTIFIED,
        "certificate": v.certificate,
        "has_zero_entry": zero,
        "conclusion": (
            "no positive symmetric doubly stochastic realization exists" if conclusive else "inconclusive"
        ),
    }


# ---------------------------------------------------------------------------
# conjecture explorer


def _cycles(perm: Sequence[int]) -> list[list[int]]:
    seen = [False] * len(perm)
    out = []
    for s in range(len(perm)):
        if seen[s]:
            continue
        cyc = []
        v = s
        while not seen[v]:
            seen[v] = True
            cyc.append(v)
            v = perm[v]
        out.append(cyc)
    return out


def sym_vertex(perm: Sequence[int]) -> ExactMatrix:
    P = em.permutation_matrix(perm)
    return (P + P.T).scale(Fraction(1, 2))


def is_sym_vertex(V: ExactMatrix) -> bool:
    """V = (P + P^T)/2 with no even cycle of length >= 4 (an extreme point)."""
    n = V.n
    half = Fraction(1, 2)
    if not em.is_symmetric(V) or not em.is_doubly_stochastic(V):
        return False
    if any(x not in (0, half, 1) for r in V.rows for x in r):
        return False
    if any(V[i, i] == half for i in range(n)):
        return False
    adj = [[j for j in range(n) if j != i and V[i, j] == half] for i in range(n)]
    seen = [False] * n
    for s in range(n):
        if seen[s] or not adj[s]:
            continue
        if len(adj[s]) != 2:
            return False
        size, stack = 0, [s]
        seen[s] = True
        while stack:
            v = stack.pop()
            size += 1
            if len(adj[v]) != 2:
                return False
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        if size % 2 == 0:
            return False
    return True


def conjectured_segment(M: ExactMatrix) -> str | None:
    """Name of a conjectured DS segment containing M: [I,C], [I,V] or [C,V]."""
    n = M.n
    if segment_IC_parameter(M) is not None:
        return "[I_n,C_n]"
    I, C = em.identity(n), em.C(n)
    off = sorted({M[i, j] for i in range(n) for j in range(n) if i != j})
    ts = set()
    for v in off:
        if v != 0:
            ts.update({v, 2 * v})
        u = Fraction(1, n - 1)
        for w in (0, Fraction(1, 2), 1):
            if w != u:
                ts.add((v - u) / (w - u))
    for t in sorted(ts):
        if not 0 < t <= 1:
            continue
        for center, name in ((I, "I"), (C, "C")):
            V = (M - center.scale(1 - t)).scale(1 / t)
            if is_sym_vertex(V):
                return f"[{name},V]"
    return None


def _sample_trace(n: int, a: Fraction, rng: random.Random, grain: int = 12) -> ExactMatrix:
    if a == 0:
        while True:
            perm = list(range(n))
            rng.shuffle(perm)
            if all(perm[i] != i for i in range(n)):
                break
        k = rng.randint(1, 3)
        acc = em.zeros(n)
        ws = [rng.randint(1, grain) for _ in range(k)]
        for w in ws:
            while True:
                rng.shuffle(perm)
                if all(perm[i] != i for i in range(n)):
                    break
            acc = acc + sym_vertex(perm).scale(Fraction(w, sum(ws)))
        return acc
    k = rng.randint(2, 4)
    ws = [rng.randint(1, grain) for _ in range(k)]
    acc = em.zeros(n)
    for w in ws:
        perm = list(range(n))
        rng.shuffle(perm)
        acc = acc + sym_vertex(perm).scale(Fraction(w, sum(ws)))
    a0 = acc.trace()
    if a0 == a:
        return acc
    if a0 < a:
        s = (n - a) / (n - a0)
        return em.identity(n).scale(1 - s) + acc.scale(s)
    s = a / a0
    return em.C(n).scale(1 - s) + acc.scale(s)


@dataclass
class ScanReport:
    n: int
    a: Fraction
    samples: int
    seed: int
    budget: int
    on_segment: int = 0
    on_segment_certified: int = 0
    off_segment: int = 0
    refuted: int = 0
    unknown: int = 0
    certified_off_segment: int = 0
    candidates: list[ExactMatrix] = field(default_factory=list)
    anchors: list[tuple[str, str]] = field(default_factory=list)

    @property
    def refuted_fraction(self) -> float:
        return self.refuted / self.off_segment if self.off_segment else 1.0

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "a": format_scalar(self.a),
            "samples": self.samples,
            "seed": self.seed,
            "budget": self.budget,
            "on_segment": self.on_segment,
            "on_segment_certified": self.on_segment_certified,
            "off_segment": self.off_segment,
            "refuted": self.refuted,
            "unknown": self.unknown,
            "certified_off_segment": self.certified_off_segment,
            "conjecture_applies": self.a > 0,
            "counterexample_candidates": [c.to_json_obj() for c in self.candidates],
            "anchors": [list(x) for x in self.anchors],
        }


def conjecture_scan(n: int, a, samples: int = 500, seed: int = DEFAULT_SEED,
                    budget: int = 200) -> ScanReport:
    """Sample the trace-a slice and test the conjectured DS segments.

    Samples are convex combinations of symmetric vertex forms (P + P^T)/2,
    moved along a line through I_n or C_n to trace a.  An off-segment sample
    certified DS is a counterexample candidate when a > 0; the zero-trace
    slice lies outside the conjecture and only gets counted.
    """
    a = as_scalar(a)
    if not 3 <= n <= 6:
        raise ValueError("conjecture_scan supports 3 <= n <= 6")
    if not 0 <= a <= n:
        raise ValueError(f"trace must lie in [0, {n}]")
    rng = random.Random(seed)
    rep = ScanReport(n, a, samples, seed, budget)
    if a == 0:
        anchors = [("C_n", em.C(n))]
        seen = set()
        for perm in itertools.permutations(range(n)):
            if any(perm[perm[i]] != i or perm[i] == i for i in range(n)):
                continue
            P = permsim.canonical_form(em.permutation_matrix(perm))
            if P not in seen:
                seen.add(P)
                anchors.append((f"involution {list(perm)}", P))
        for name, A in anchors:
            rep.anchors.append((name, certify(A, "sym", budget=budget, seed=seed).status))
    for i in range(samples):
        M = _sample_trace(n, a, rng)
        seg = conjectured_segment(M)
        v = certify(M, "sym", budget=budget, seed=seed + i)
        if seg is not None:
            rep.on_segment += 1
            rep.on_segment_certified += v.status == CERTIFIED
            continue
        rep.off_segment += 1
        if v.status == REFUTED:
            rep.refuted += 1
        elif v.status == UNKNOWN:
            rep.unknown += 1
        else:
            rep.certified_off_segment += 1
            # the conjecture is only stated for positive trace
            if a > 0:
                rep.candidates.append(M)
    return rep
