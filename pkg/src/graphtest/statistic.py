"""Max-discrepancy statistics for graph samples and their brute-force oracle.

The statistic of interest is the largest absolute gap, over every graph g on
the vertex set, between the mean edge-disagreement distance from g to a sample
and the expected distance from g to a reference distribution (one-sample), or
between the mean distances to two samples (two-sample). That maximum has a
closed form: the sum over canonical pairs of absolute differences between
edge frequencies (one side) and reference edge probabilities (other side).

All values are computed in exact rational arithmetic so that equal statistics
compare equal; Monte Carlo and permutation procedures rely on that to resolve
ties deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatchError, EnumerationRefusedError
from .graphs import (
    EdgeMarginals,
    Graph,
    GraphSample,
    hamming_distance,
    num_pairs,
)

__all__ = [
    "TestStatistic",
    "mean_distance",
    "one_sample_statistic",
    "two_sample_statistic",
    "signed_gap",
    "one_sample_brute_force",
    "two_sample_brute_force",
    "extremal_graphs",
    "BRUTE_FORCE_MAX_V",
]

# 2^E graphs are visited by the brute-force maximizer; v=5 means 1024.
BRUTE_FORCE_MAX_V = 5


@dataclass(frozen=True)
class TestStatistic:
    """Value of the max-discrepancy statistic, with its exact rational form.

    kind is "one_sample" or "two_sample"; sample_sizes holds (n, m) with
    m = None for the one-sample case. The value always lies in [0, E].
    """

    value: float
    exact: Fraction
    kind: str
    sample_sizes: tuple[int, int | None]

    def __post_init__(self):
        if self.kind not in ("one_sample", "two_sample"):
            raise ValueError(f"unknown statistic kind {self.kind!r}")
        if self.exact < 0:
            raise ValueError("statistic cannot be negative")


def _check_marginal_dims(sample: GraphSample, marginals: EdgeMarginals) -> None:
    if sample.v != marginals.v:
        raise DimensionMismatchError(
            f"sample has v={sample.v} but marginals have v={marginals.v}"
        )


def mean_distance(sample: GraphSample, g: Graph) -> float:
    """Mean edge-disagreement distance from g to the members of a sample."""
    if g.v != sample.v:
        raise DimensionMismatchError(
            f"graph has v={g.v} but sample has v={sample.v}"
        )
    total = sum(hamming_distance(g, member) for member in sample)
    return total / sample.n


def one_sample_statistic(
    sample: GraphSample, null_marginals: EdgeMarginals
) -> TestStatistic:
    """Sum over canonical pairs of |edge frequency - reference probability|.

    Equals the maximum over all graphs of the absolute mean-distance gap
    between the sample and the reference distribution, and is computable in
    O(v^2 * n) time.
    """
    _check_marginal_dims(sample, null_marginals)
    n = sample.n
    counts = sample.edge_counts
    exact = sum(
        abs(Fraction(int(c), n) - p)
        for c, p in zip(counts, null_marginals.fractions)
    )
    return TestStatistic(
        value=float(exact),
        exact=exact,
        kind="one_sample",
        sample_sizes=(n, None),
    )


def two_sample_statistic(s: GraphSample, t: GraphSample) -> TestStatistic:
    """Sum over canonical pairs of absolute edge-frequency differences.

    Symmetric in its arguments; the exact value is an integer over n*m.
    """
    if s.v != t.v:
        raise DimensionMismatchError(
            f"samples have v={s.v} and v={t.v}"
        )
    n, m = s.n, t.n
    numerator = sum(
        abs(m * int(a) - n * int(b))
        for a, b in zip(s.edge_counts, t.edge_counts)
    )
    exact = Fraction(numerator, n * m)
    return TestStatistic(
        value=float(exact),
        exact=exact,
        kind="two_sample",
        sample_sizes=(n, m),
    )


def signed_gap(
    sample: GraphSample, null_marginals: EdgeMarginals, g: Graph
) -> Fraction:
    """Mean distance from g to the sample minus expected distance under the reference.

    The expectation over the reference distribution depends only on its edge
    marginals: each canonical pair contributes g_ij - 2*g_ij*p_ij + p_ij.
    """
    _check_marginal_dims(sample, null_marginals)
    if g.v != sample.v:
        raise DimensionMismatchError(
            f"graph has v={g.v} but sample has v={sample.v}"
        )
    total = sum(hamming_distance(g, member) for member in sample)
    d_bar = Fraction(total, sample.n)
    expected = Fraction(0)
    for k, p in enumerate(null_marginals.fractions):
        if g.bits >> k & 1:
            expected += 1 - p
        else:
            expected += p
    return d_bar - expected


def _check_enumerable(v: int) -> None:
    if v > BRUTE_FORCE_MAX_V:
        raise EnumerationRefusedError(
            f"brute-force maximization enumerates 2^{num_pairs(v)} graphs; "
            f"refusing v={v} > {BRUTE_FORCE_MAX_V}"
        )


def _gray_flip(t: int) -> int:
    """Slot flipped between Gray codes of t and t+1 (lowest set bit of t+1)."""
    s = t + 1
    return (s & -s).bit_length() - 1


def one_sample_brute_force(
    sample: GraphSample, null_marginals: EdgeMarginals
) -> tuple[TestStatistic, Graph]:
    """Maximize the absolute mean-distance gap by visiting every graph.

    Graphs are enumerated in Gray-code order so each step flips one edge and
    updates the summed member distances and the expected-distance term in
    O(1). Returns the maximum and the first maximizer in enumeration order.
    Exists to validate the closed form; refuses v > BRUTE_FORCE_MAX_V.
    """
    _check_marginal_dims(sample, null_marginals)
    _check_enumerable(sample.v)
    n = sample.n
    E = num_pairs(sample.v)
    counts = [int(c) for c in sample.edge_counts]

    # Start at the empty graph: distance to a member is its edge count.
    sum_d = sum(counts)
    pi_term = sum(null_marginals.fractions)

    best = abs(Fraction(sum_d, n) - pi_term)
    best_code = 0

    code = 0
    for t in range((1 << E) - 1):
        a = _gray_flip(t)
        code ^= 1 << a
        if code >> a & 1:
            sum_d += n - 2 * counts[a]
            pi_term += 1 - 2 * null_marginals.fractions[a]
        else:
            sum_d += 2 * counts[a] - n
            pi_term -= 1 - 2 * null_marginals.fractions[a]
        w = abs(Fraction(sum_d, n) - pi_term)
        if w > best:
            best = w
            best_code = code

    stat = TestStatistic(
        value=float(best),
        exact=best,
        kind="one_sample",
        sample_sizes=(n, None),
    )
    return stat, Graph(sample.v, best_code)


def two_sample_brute_force(
    s: GraphSample, t: GraphSample
) -> tuple[TestStatistic, Graph]:
    """Maximize |mean distance to s - mean distance to t| over every graph.

    Same Gray-code scheme as the one-sample maximizer; refuses v above
    BRUTE_FORCE_MAX_V.
    """
    if s.v != t.v:
        raise DimensionMismatchError(f"samples have v={s.v} and v={t.v}")
    _check_enumerable(s.v)
    n, m = s.n, t.n
    E = num_pairs(s.v)
    cs = [int(c) for c in s.edge_counts]
    ct = [int(c) for c in t.edge_counts]

    sum_s = sum(cs)
    sum_t = sum(ct)
    best = abs(Fraction(sum_s, n) - Fraction(sum_t, m))
    best_code = 0

    code = 0
    for step in range((1 << E) - 1):
        a = _gray_flip(step)
        code ^= 1 << a
        if code >> a & 1:
            sum_s += n - 2 * cs[a]
            sum_t += m - 2 * ct[a]
        else:
            sum_s += 2 * cs[a] - n
            sum_t += 2 * ct[a] - m
        w = abs(Fraction(sum_s, n) - Fraction(sum_t, m))
        if w > best:
            best = w
            best_code = code

    stat = TestStatistic(
        value=float(best),
        exact=best,
        kind="two_sample",
        sample_sizes=(n, m),
    )
    return stat, Graph(s.v, best_code)


def extremal_graphs(
    sample: GraphSample, null_marginals: EdgeMarginals
) -> tuple[Graph, Graph]:
    """The two graphs attaining the maximal signed gaps.

    The first has an edge exactly where the sample frequency is <= the
    reference probability (maximizes the gap), the second where it is >=
    (maximizes the negated gap). Ties put the edge in both graphs. The
    absolute gap at either graph equals the closed-form statistic.
    """
    _check_marginal_dims(sample, null_marginals)
    n = sample.n
    lo_bits = 0
    hi_bits = 0
    for k, (c, p) in enumerate(
        zip(sample.edge_counts, null_marginals.fractions)
    ):
        freq = Fraction(int(c), n)
        if freq <= p:
            lo_bits |= 1 << k
        if freq >= p:
            hi_bits |= 1 << k
    return Graph(sample.v, lo_bits), Graph(sample.v, hi_bits)
