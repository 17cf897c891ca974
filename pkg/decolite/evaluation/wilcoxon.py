"""
Two-sided Wilcoxon signed-rank test.

Zero differences are dropped and tied absolute differences share their
average rank. Up to ``EXACT_MAX_N`` non-zero pairs the null distribution of
the positive rank sum is enumerated exactly; beyond that a normal
approximation with tie and continuity corrections is used.
"""
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import norm, rankdata

from decolite.utils.exceptions import DimensionError, UsageError

EXACT_MAX_N = 25
P_DISPLAY_FLOOR = 1e-12

AUTO = "auto"
EXACT = "exact"
NORMAL = "normal"
DEGENERATE = "degenerate"


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float
    p_value: float
    n: int
    degenerate: bool = False
    method: str = EXACT

    @property
    def p_display(self):
        return format_p_value(self.p_value)

    def to_dict(self):
        values = asdict(self)
        values["p_display"] = self.p_display
        return values


def format_p_value(p_value):
    if p_value < P_DISPLAY_FLOOR:
        return "< 1e-12"
    return "{0:.6g}".format(p_value)


def signed_ranks(a, b):
    """Non-zero differences ``a - b`` and the average ranks of their magnitudes."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionError("wilcoxon needs two vectors of equal length")
    if a.size < 1:
        raise UsageError("wilcoxon needs at least one pair")
    differences = a - b
    differences = differences[differences != 0]
    return differences, rankdata(np.abs(differences))


def exact_counts(doubled_ranks):
    """
    ``counts[s]`` is the number of sign assignments whose positive doubled
    rank sum equals ``s``. Doubled ranks are integers even with ties.
    """
    counts = [1] + [0] * int(sum(doubled_ranks))
    reached = 0
    for rank in doubled_ranks:
        reached += rank
        for total in range(reached, rank - 1, -1):
            counts[total] += counts[total - rank]
    return counts


def exact_p_value(ranks, positive_sum):
    doubled = [int(round(2 * rank)) for rank in ranks]
    observed = int(round(2 * positive_sum))
    counts = exact_counts(doubled)
    n_assignments = 2 ** len(doubled)
    lower = sum(counts[: observed + 1])
    upper = sum(counts[observed:])
    return min(1.0, 2 * min(lower, upper) / n_assignments)


def normal_p_value(ranks, positive_sum):
    n = len(ranks)
    mean = n * (n + 1) / 4.0
    _, tie_sizes = np.unique(ranks, return_counts=True)
    variance = n * (n + 1) * (2 * n + 1) / 24.0 - (tie_sizes ** 3 - tie_sizes).sum() / 48.0
    if variance <= 0:
        return 1.0
    deviation = max(abs(positive_sum - mean) - 0.5, 0.0)
    return float(min(1.0, 2 * norm.sf(deviation / np.sqrt(variance))))


def wilcoxon_signed_rank(a, b, method=AUTO) -> WilcoxonResult:
    """
    ``statistic`` is the smaller of the positive and negative rank sums.
    All-zero differences give a degenerate result with p = 1.
    """
    if method not in (AUTO, EXACT, NORMAL):
        raise UsageError("unknown wilcoxon method {0!r}".format(method))
    differences, ranks = signed_ranks(a, b)
    n = len(differences)
    if n == 0:
        return WilcoxonResult(0.0, 1.0, 0, degenerate=True, method=DEGENERATE)

    positive_sum = float(ranks[differences > 0].sum())
    negative_sum = float(ranks[differences < 0].sum())
    statistic = min(positive_sum, negative_sum)
    if method == EXACT or (method == AUTO and n <= EXACT_MAX_N):
        return WilcoxonResult(statistic, exact_p_value(ranks, positive_sum), n, method=EXACT)
    return WilcoxonResult(statistic, normal_p_value(ranks, positive_sum), n, method=NORMAL)
