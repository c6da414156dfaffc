"""Significance machinery: percentile bootstrap, one-tailed paired t-test, marks."""

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (BootstrapDegenerateError, DataError, EmptyCorpusError,
                     ZeroVarianceError)

DEFAULT_REPLICATES = 1000
DEFAULT_LEVEL = 0.95
DEFAULT_SEED = 12345
MAX_SKIPPED_FRACTION = 0.10


@dataclass(frozen=True)
class BootstrapCI:
    point: float
    lower: float
    upper: float
    level: float
    n_replicates: int
    seed: int
    n_skipped: int = 0

    def __post_init__(self):
        if not 0 < self.level < 1:
            raise ValueError(f"confidence level must lie in (0, 1), got {self.level}")
        if self.lower > self.upper:
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")


@dataclass(frozen=True)
class TTestResult:
    t: float
    df: int
    p_one_tailed: float
    n: int


def _score(value):
    return getattr(value, "corpus_score", value)


def percentile_index(n: int, q: float) -> int:
    """Index of the q-quantile order statistic in a sorted sample of size n.

    This is the inverse of the empirical CDF: the smallest k with
    (k + 1) / n >= q.
    """
    # (1 - 0.95) / 2 is slightly above 0.025; round off that float noise
    return min(n - 1, max(0, math.ceil(round(n * q, 9)) - 1))


def bootstrap_ci(sentences: Sequence, statistic: Callable,
                 level: float = DEFAULT_LEVEL,
                 n_replicates: int = DEFAULT_REPLICATES,
                 seed: int = DEFAULT_SEED) -> BootstrapCI:
    """Percentile bootstrap interval for a corpus-level statistic.

    Sentences are resampled with replacement. Replicate indices come from
    numpy's PCG64 generator seeded with ``seed``, drawn replicate by
    replicate, so the result depends only on the inputs. ``statistic`` may
    return a number or a :class:`MetricResult`. Replicates on which it
    raises a :class:`DataError` are skipped; more than 10% skipped is an
    error.
    """
    n = len(sentences)
    if n == 0:
        raise EmptyCorpusError("bootstrap over an empty corpus")
    if n_replicates < 100:
        raise ValueError(f"need at least 100 bootstrap replicates, got {n_replicates}")
    if not 0 < level < 1:
        raise ValueError(f"confidence level must lie in (0, 1), got {level}")
    point = float(_score(statistic(sentences)))
    rng = np.random.Generator(np.random.PCG64(seed))
    values = []
    skipped = 0
    for _ in range(n_replicates):
        idx = rng.integers(0, n, size=n)
        sample = [sentences[i] for i in idx]
        try:
            values.append(float(_score(statistic(sample))))
        except DataError:
            skipped += 1
    if skipped > MAX_SKIPPED_FRACTION * n_replicates:
        raise BootstrapDegenerateError(
            f"statistic failed on {skipped} of {n_replicates} bootstrap replicates")
    values.sort()
    alpha = (1 - level) / 2
    lower = values[percentile_index(len(values), alpha)]
    upper = values[percentile_index(len(values), 1 - alpha)]
    return BootstrapCI(point, lower, upper, level, n_replicates, seed, skipped)


def ci_significance(baseline: BootstrapCI, others: Sequence[BootstrapCI]) -> bool:
    """True iff the baseline interval lies entirely above every other interval."""
    if not others:
        raise ValueError("ci_significance needs at least one interval to compare against")
    for o in others:
        if o.level != baseline.level or o.n_replicates != baseline.n_replicates:
            raise ValueError("confidence intervals were built with different settings")
    return baseline.lower > max(o.upper for o in others)


def _betacf(a, b, x, max_iter=300, eps=3e-16):
    # modified Lentz evaluation of the incomplete beta continued fraction
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and 0 <= x <= 1."""
    if a <= 0 or b <= 0:
        raise ValueError("incomplete beta needs a, b > 0")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"incomplete beta needs 0 <= x <= 1, got {x}")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_sf(t: float, df: float) -> float:
    """Upper tail P(T > t) of Student's t distribution with ``df`` degrees of freedom."""
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    if math.isinf(t):
        return 0.0 if t > 0 else 1.0
    tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))
    return tail if t > 0 else 1.0 - tail


def student_t_cdf(t: float, df: float) -> float:
    return 1.0 - student_t_sf(t, df)


def paired_t_test(a: Sequence[float], b: Sequence[float]) -> TTestResult:
    """One-tailed paired t-test of H1: mean(a) > mean(b)."""
    if len(a) != len(b):
        raise ValueError(f"paired samples differ in length ({len(a)} vs {len(b)})")
    n = len(a)
    if n < 2:
        raise ValueError("paired t-test needs at least two pairs")
    d = [x - y for x, y in zip(a, b)]
    mean = math.fsum(d) / n
    var = math.fsum((x - mean) ** 2 for x in d) / (n - 1)
    if var == 0.0:
        raise ZeroVarianceError("paired differences have zero variance; t is undefined")
    t = mean / math.sqrt(var / n)
    return TTestResult(t, n - 1, student_t_sf(t, n - 1), n)


def significance_mark(p: float) -> str:
    if p < 0.001:
        return "‡"
    if p < 0.01:
        return "†"
    if p < 0.05:
        return "*"
    return ""


def relative_difference(baseline: float, value: float) -> float:
    """Percentage change of ``value`` relative to ``baseline``."""
    if baseline == 0:
        raise ZeroDivisionError("relative difference against a zero baseline")
    return 100.0 * (value - baseline) / baseline
