import itertools
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from dsspectra import exactmat as em

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def _perms(n):
    return list(itertools.permutations(range(n)))


@st.composite
def ds_matrices(draw, n=None, symmetric=False, max_terms=4):
    """Rational doubly stochastic matrices as convex combinations of permutation matrices."""
    if n is None:
        n = draw(st.integers(min_value=2, max_value=5))
    perms = _perms(n)
    k = draw(st.integers(min_value=1, max_value=max_terms))
    picks = draw(st.lists(st.sampled_from(perms), min_size=k, max_size=k))
    weights = draw(st.lists(st.integers(min_value=1, max_value=9), min_size=k, max_size=k))
    total = sum(weights)
    M = em.zeros(n)
    for w, p in zip(weights, picks):
        P = em.permutation_matrix(p)
        if symmetric:
            P = (P + P.T).scale(Fraction(1, 2))
        M = M + P.scale(Fraction(w, total))
    return M


@st.composite
def rational_matrices(draw, n=None, lo=-5, hi=5, dens=(1, 2, 3, 4, 6)):
    if n is None:
        n = draw(st.integers(min_value=1, max_value=5))
    ent = st.builds(Fraction, st.integers(min_value=lo, max_value=hi), st.sampled_from(dens))
    rows = draw(st.lists(st.lists(ent, min_size=n, max_size=n), min_size=n, max_size=n))
    return em.ExactMatrix(rows)


permutations_of = lambda n: st.permutations(list(range(n)))  # noqa: E731


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
