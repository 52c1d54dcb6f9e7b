"""Hypothesis tests built on the maximum mean-distance-gap statistic.

The one-sample test compares the statistic of an observed sample against an
empirical null quantile obtained by Monte Carlo simulation. The two-sample
test uses a permutation distribution over re-partitions of the pooled sample.
A per-edge exact binomial procedure with Bonferroni correction is provided as
a baseline, along with power-curve estimation over a grid of alternatives.

All comparisons that decide rejection are carried out in exact integer or
rational arithmetic: Monte Carlo and permutation replicates of the statistic
are held as integer numerators over a common denominator, so ties are real
ties and results cannot drift with float summation order.

Replication loops draw each replicate from its own generator spawned off the
caller's generator, so results are identical whatever ``threads`` is set to.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigurationError, DimensionMismatchError, EnumerationRefusedError
from .graphs import EdgeMarginals, GraphSample, num_pairs
from .models import ErdosRenyi, ModifiedErdosRenyi, ModelSpec
from .statistic import TestStatistic, one_sample_statistic, two_sample_statistic

__all__ = [
    "TestResult",
    "PowerPoint",
    "null_quantile_mc",
    "one_sample_test",
    "two_sample_permutation_test",
    "binom_two_sided_pvalue",
    "bonferroni_edge_test",
    "power_curve",
]


@dataclass(frozen=True)
class TestResult:
    """Outcome of one hypothesis test.

    ``critical_value`` is set by quantile-based tests (reject when the
    statistic exceeds it strictly); ``p_value`` by permutation and binomial
    tests (reject when it is at most alpha). Decisions are made on the exact
    rational values before any float conversion.
    """

    method: str
    statistic: TestStatistic | None
    alpha: float
    reject: bool
    critical_value: float | None = None
    critical_exact: Fraction | None = None
    p_value: float | None = None
    replications: int | None = None
    marginals_source: str | None = None
    per_edge_p_values: tuple[float, ...] | None = None
    seed: int | None = None


@dataclass(frozen=True)
class PowerPoint:
    """Empirical rejection rate at one alternative parameter value."""

    parameter: float
    power: float
    replications: int
    power_baseline: float | None = None


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")


def _resolve_marginals(
    null: ModelSpec, override: EdgeMarginals | None
) -> tuple[EdgeMarginals, str]:
    if override is not None:
        if override.v != null.v:
            raise DimensionMismatchError(
                f"marginals have v={override.v} but null model has v={null.v}"
            )
        return override, "supplied"
    try:
        return null.exact_marginals(), "exact"
    except EnumerationRefusedError as e:
        raise ConfigurationError(
            f"null model has no computable marginals ({e}); "
            "pass an explicit marginals estimate"
        ) from e


def _count_sampler(model: ModelSpec) -> Callable[[int, np.random.Generator], np.ndarray]:
    """Per-sample edge-count draw, bypassing graph objects when edges are independent.

    For independent-edge models the per-pair counts of a size-n sample are
    independent Binomial(n, p_ij) variables, and the statistic depends on the
    sample only through those counts, so drawing counts directly is
    distributionally exact. Dependent-edge models sample actual graphs.
    """
    if isinstance(model, ErdosRenyi):
        probs = np.full(num_pairs(model.v), model.p, dtype=np.float64)
    elif isinstance(model, ModifiedErdosRenyi):
        probs = model.pair_probabilities()
    else:
        def draw_graphs(n: int, rng: np.random.Generator) -> np.ndarray:
            return model.sample(n, rng).edge_counts

        return draw_graphs

    def draw_counts(n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.binomial(n, probs)

    return draw_counts


def _run_replications(
    fn: Callable[[int, np.random.Generator], object],
    R: int,
    rng: np.random.Generator,
    threads: int,
) -> list:
    """fn(r, child_rng) for r in 0..R-1, with one spawned stream per replicate.

    The stream-to-replicate mapping is fixed before any work starts, so the
    result list does not depend on the number of worker threads.
    """
    if threads < 1:
        raise ValueError("threads must be >= 1")
    children = rng.spawn(R)
    if threads == 1:
        return [fn(r, children[r]) for r in range(R)]
    results: list = [None] * R
    bounds = [R * t // threads for t in range(threads + 1)]

    def run_chunk(lo: int, hi: int) -> None:
        for r in range(lo, hi):
            results[r] = fn(r, children[r])

    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(run_chunk, bounds[t], bounds[t + 1])
            for t in range(threads)
        ]
        for fut in futures:
            fut.result()
    return results


class _ScaledStatistic:
    """Statistic values as integer numerators over the fixed denominator n*den.

    ``den`` is the common denominator of the null marginals, so the numerator
    sum(|den*c_ij - n*num_ij|) is an exact integer for any count vector. A
    vectorized int64 path is used when the worst-case numerator fits well
    inside int64; otherwise arbitrary-precision Python integers take over.
    """

    def __init__(self, n: int, marginals: EdgeMarginals):
        nums, den = marginals.common_ratio()
        self.n = n
        self.den = den
        self.nums = nums
        self.E = len(nums)
        self.scaled_targets = [n * w for w in nums]
        self.fast = n * den * self.E < 2**62
        if self.fast:
            self._targets_arr = np.array(self.scaled_targets, dtype=np.int64)

    def numerator(self, counts: np.ndarray) -> int:
        if self.fast:
            scaled = self.den * counts.astype(np.int64) - self._targets_arr
            return int(np.abs(scaled).sum())
        return sum(
            abs(self.den * int(c) - t)
            for c, t in zip(counts, self.scaled_targets)
        )

    def as_fraction(self, numerator: int) -> Fraction:
        return Fraction(numerator, self.n * self.den)


def _quantile_index(alpha: float, R: int) -> int:
    """1-based order-statistic index of the empirical (1-alpha) quantile."""
    k = math.ceil((1 - Fraction(alpha)) * R)
    return min(max(k, 1), R)


def _null_numerators(
    null: ModelSpec,
    scaler: _ScaledStatistic,
    n: int,
    R: int,
    rng: np.random.Generator,
    threads: int,
) -> list[int]:
    draw = _count_sampler(null)

    def one(r: int, child: np.random.Generator) -> int:
        return scaler.numerator(draw(n, child))

    return _run_replications(one, R, rng, threads)


def _critical_numerator(
    null: ModelSpec,
    scaler: _ScaledStatistic,
    n: int,
    alpha: float,
    R: int,
    rng: np.random.Generator,
    threads: int,
) -> int:
    values = sorted(_null_numerators(null, scaler, n, R, rng, threads))
    return values[_quantile_index(alpha, R) - 1]


def null_quantile_mc(
    null: ModelSpec,
    n: int,
    alpha: float,
    R: int,
    rng: np.random.Generator,
    *,
    threads: int = 1,
    marginals: EdgeMarginals | None = None,
) -> float:
    """Empirical (1-alpha) quantile of the statistic under the null model.

    Draws R independent samples of size n from ``null``, computes the
    statistic of each against the null's exact marginals, and returns the
    order statistic at index ceil((1-alpha)*R). For a null whose marginals
    cannot be computed exactly (dependent edges above the enumeration limit),
    pass an explicit ``marginals`` estimate.
    """
    if R < 100:
        raise ValueError(f"need at least 100 replications, got {R}")
    if n < 1:
        raise ValueError("sample size must be >= 1")
    _check_alpha(alpha)
    marg, _ = _resolve_marginals(null, marginals)
    scaler = _ScaledStatistic(n, marg)
    crit = _critical_numerator(null, scaler, n, alpha, R, rng, threads)
    return float(scaler.as_fraction(crit))


def one_sample_test(
    s: GraphSample,
    null: ModelSpec,
    alpha: float = 0.05,
    R: int = 10000,
    rng: np.random.Generator | None = None,
    *,
    threads: int = 1,
    marginals: EdgeMarginals | None = None,
) -> TestResult:
    """Test whether ``s`` was drawn from ``null`` at level ``alpha``.

    The observed statistic is compared against the Monte Carlo critical value
    from ``null_quantile_mc``; rejection means strict exceedance. The
    comparison happens on exact rationals.
    """
    if rng is None:
        raise ValueError("an explicit random generator is required")
    if s.v != null.v:
        raise DimensionMismatchError(
            f"sample has v={s.v} but null model has v={null.v}"
        )
    if R < 100:
        raise ValueError(f"need at least 100 replications, got {R}")
    _check_alpha(alpha)
    marg, source = _resolve_marginals(null, marginals)
    stat = one_sample_statistic(s, marg)
    scaler = _ScaledStatistic(s.n, marg)
    crit = _critical_numerator(null, scaler, s.n, alpha, R, rng, threads)
    crit_exact = scaler.as_fraction(crit)
    return TestResult(
        method="one_sample_mc",
        statistic=stat,
        alpha=alpha,
        reject=stat.exact > crit_exact,
        critical_value=float(crit_exact),
        critical_exact=crit_exact,
        replications=R,
        marginals_source=source,
    )


def two_sample_permutation_test(
    s: GraphSample,
    t: GraphSample,
    R: int = 1000,
    rng: np.random.Generator | None = None,
    alpha: float = 0.05,
    *,
    strict: bool = False,
    smoothing: bool = False,
) -> TestResult:
    """Permutation test of whether two samples share one distribution.

    Each of the R rounds re-partitions the pooled graphs, without
    replacement, into pseudo-samples of the two original sizes and recomputes
    the statistic. The p-value is the fraction of rounds at or above the
    observed value (``strict=True`` counts strictly above; ``smoothing=True``
    uses (1+count)/(1+R)). The pooled graphs are put in a canonical order
    first, so swapping the two input labels changes nothing.
    """
    if rng is None:
        raise ValueError("an explicit random generator is required")
    if s.v != t.v:
        raise DimensionMismatchError(
            f"samples have different vertex counts: {s.v} and {t.v}"
        )
    if R < 100:
        raise ValueError(f"need at least 100 permutations, got {R}")
    _check_alpha(alpha)

    stat = two_sample_statistic(s, t)
    n, m = s.n, t.n
    N = n + m
    k = min(n, m)
    obs_num = stat.exact.numerator * ((n * m) // stat.exact.denominator)

    pooled = sorted(list(s) + list(t), key=lambda g: g.bits)
    indicators = np.vstack([g.indicator_row() for g in pooled]).astype(np.int64)
    totals = indicators.sum(axis=0)

    order = rng.permuted(np.tile(np.arange(N), (R, 1)), axis=1)
    mask = np.zeros((R, N), dtype=np.int64)
    np.put_along_axis(mask, order[:, :k], 1, axis=1)
    counts_small = mask @ indicators
    counts_big = totals[None, :] - counts_small
    # Pseudo-samples have sizes (k, N-k) = (n, m) as a multiset, so these
    # numerators share the observed denominator n*m.
    perm_nums = np.abs((N - k) * counts_small - k * counts_big).sum(axis=1)

    count = int((perm_nums > obs_num).sum() if strict else (perm_nums >= obs_num).sum())
    p_exact = Fraction(1 + count, 1 + R) if smoothing else Fraction(count, R)
    return TestResult(
        method="two_sample_permutation",
        statistic=stat,
        alpha=alpha,
        reject=p_exact <= Fraction(alpha),
        p_value=float(p_exact),
        replications=R,
    )


@lru_cache(maxsize=512)
def _binom_weights(n: int, p0: Fraction) -> tuple[tuple[int, ...], int]:
    """Integer outcome weights w_k with P(X=k) = w_k / total for X ~ Bin(n, p0)."""
    num, den = p0.numerator, p0.denominator
    weights = tuple(
        math.comb(n, k) * num**k * (den - num) ** (n - k) for k in range(n + 1)
    )
    return weights, den**n


def _binom_pvalue_fraction(k: int, n: int, p0: Fraction) -> Fraction:
    weights, total = _binom_weights(n, p0)
    w_k = weights[k]
    return Fraction(sum(w for w in weights if w <= w_k), total)


def binom_two_sided_pvalue(k: int, n: int, p0: float) -> float:
    """Exact two-sided binomial p-value by the minimum-likelihood method.

    Sums the Binomial(n, p0) probabilities of every outcome no more likely
    than the observed one, computed in exact rational arithmetic.
    """
    if n < 1:
        raise ValueError(f"need at least one trial, got n={n}")
    if not 0 <= k <= n:
        raise ValueError(f"successes k={k} outside [0, {n}]")
    if not 0.0 <= p0 <= 1.0:
        raise ValueError(f"p0 must lie in [0, 1], got {p0}")
    return float(_binom_pvalue_fraction(k, n, Fraction(p0)))


def bonferroni_edge_test(
    s: GraphSample,
    null_marginals: EdgeMarginals,
    alpha: float = 0.05,
) -> TestResult:
    """Per-edge exact binomial tests with a Bonferroni-corrected global decision.

    Each canonical pair's edge count is tested against its null marginal;
    the global null is rejected iff some per-edge p-value is at most
    alpha/E. The reported p_value is the Bonferroni-adjusted minimum,
    min(1, E * min_p).
    """
    if s.v != null_marginals.v:
        raise DimensionMismatchError(
            f"sample has v={s.v} but marginals have v={null_marginals.v}"
        )
    _check_alpha(alpha)
    n = s.n
    E = num_pairs(s.v)
    p_values = [
        _binom_pvalue_fraction(int(c), n, p0)
        for c, p0 in zip(s.edge_counts, null_marginals.fractions)
    ]
    threshold = Fraction(alpha) / E
    reject = any(p <= threshold for p in p_values)
    adjusted = min(Fraction(1), E * min(p_values))
    return TestResult(
        method="bonferroni",
        statistic=None,
        alpha=alpha,
        reject=reject,
        p_value=float(adjusted),
        per_edge_p_values=tuple(float(p) for p in p_values),
    )


def _bc_reject_table(n: int, marginals: EdgeMarginals, alpha: float) -> np.ndarray:
    """Boolean (E, n+1) lookup: does count k at pair a reject at level alpha/E."""
    E = num_pairs(marginals.v)
    threshold = Fraction(alpha) / E
    table = np.zeros((E, n + 1), dtype=bool)
    for a, p0 in enumerate(marginals.fractions):
        weights, total = _binom_weights(n, p0)
        for k in range(n + 1):
            w_k = weights[k]
            tail = sum(w for w in weights if w <= w_k)
            table[a, k] = Fraction(tail, total) <= threshold
    return table


def power_curve(
    null: ModelSpec,
    alternatives: Sequence[ModelSpec],
    n: int,
    M: int,
    alpha: float = 0.05,
    R_quantile: int = 10000,
    rng: np.random.Generator | None = None,
    *,
    baseline_bonferroni: bool = False,
    threads: int = 1,
    marginals: EdgeMarginals | None = None,
) -> list[PowerPoint]:
    """Empirical power against each alternative, at one shared critical value.

    One Monte Carlo critical value is drawn from the null, then each
    alternative contributes M fresh samples of size n; its power is the
    fraction whose statistic exceeds the critical value. With
    ``baseline_bonferroni`` the same samples are also run through the
    per-edge binomial baseline, filling ``power_baseline``.
    """
    if rng is None:
        raise ValueError("an explicit random generator is required")
    if not alternatives:
        raise ValueError("need at least one alternative model")
    for alt in alternatives:
        if alt.v != null.v:
            raise DimensionMismatchError(
                f"alternative has v={alt.v} but null has v={null.v}"
            )
    if M < 100:
        raise ValueError(f"need at least 100 replications per point, got {M}")
    if n < 1:
        raise ValueError("sample size must be >= 1")
    _check_alpha(alpha)

    marg, _ = _resolve_marginals(null, marginals)
    scaler = _ScaledStatistic(n, marg)
    streams = rng.spawn(1 + len(alternatives))
    crit = _critical_numerator(
        null, scaler, n, alpha, R_quantile, streams[0], threads
    )
    bc_table = _bc_reject_table(n, marg, alpha) if baseline_bonferroni else None
    pair_idx = np.arange(scaler.E)

    points = []
    for alt, stream in zip(alternatives, streams[1:]):
        draw = _count_sampler(alt)

        def one(r: int, child: np.random.Generator) -> tuple[bool, bool]:
            counts = draw(n, child)
            w_reject = scaler.numerator(counts) > crit
            if bc_table is None:
                return w_reject, False
            return w_reject, bool(bc_table[pair_idx, counts].any())

        outcomes = _run_replications(one, M, stream, threads)
        w_power = sum(1 for w, _ in outcomes if w) / M
        bc_power = (
            sum(1 for _, b in outcomes if b) / M if baseline_bonferroni else None
        )
        points.append(
            PowerPoint(
                parameter=alt.sweep_parameter,
                power=w_power,
                replications=M,
                power_baseline=bc_power,
            )
        )
    return points
