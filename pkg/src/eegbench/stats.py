"""Paired statistical comparison of pipelines and meta-analytic combination.

Within a dataset, two pipelines are compared on per-subject mean scores
with a one-tailed paired test chosen by sample size: exhaustive sign-flip
permutation for N < 13, Monte-Carlo permutation for 13 <= N <= 20, and a
Wilcoxon signed-rank normal approximation for N > 20.  Effect sizes are
standardized mean differences of the paired differences with a
small-sample correction.  Across datasets, evidence combines by weighted
Stouffer Z with weights proportional to the square root of each dataset's
subject count.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import EffectUndefined, InsufficientUnits, InvalidInput, NotFound
from .evaluation import derive_seed

P_FLOOR = 1e-12
MC_THRESHOLD = 13  # below: exhaustive flips; from here to WILCOXON_THRESHOLD: Monte-Carlo
WILCOXON_THRESHOLD = 20  # above: rank test


@dataclass(frozen=True)
class PairedScores:
    """Per-subject mean scores of two pipelines on one dataset, aligned."""

    dataset_id: str
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if a.ndim != 1 or a.shape != b.shape:
            raise InvalidInput("paired scores must be equal-length vectors")
        if a.size < 2:
            raise InvalidInput("paired comparison needs at least 2 subjects")
        if not (np.isfinite(a).all() and np.isfinite(b).all()):
            raise InvalidInput("paired scores must be finite")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n_subjects(self) -> int:
        return int(self.a.size)


@dataclass(frozen=True)
class DatasetStat:
    dataset_id: str
    n_subjects: int
    p_value: float
    smd: float
    method: str


@dataclass(frozen=True)
class CombinedStat:
    z: float
    p_value: float
    combined_smd: float
    weights: dict
    clamped: bool = False


def _diffs(a, b, alternative: str) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise InvalidInput("paired samples must be equal-length vectors")
    if a.size < 2:
        raise InvalidInput("need at least 2 pairs")
    if alternative == "greater":
        return a - b
    if alternative == "less":
        return b - a
    raise InvalidInput(f"alternative must be 'greater' or 'less', got {alternative!r}")


def _t_statistics(flipped: np.ndarray) -> np.ndarray:
    """Paired t statistic per row; zero-spread rows resolve to signed infinity."""
    n = flipped.shape[1]
    means = flipped.mean(axis=1)
    stds = flipped.std(axis=1, ddof=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = means / (stds / math.sqrt(n))
    return t


def perm_paired_ttest(a, b, n_mc: int = 10000, seed: int = 0, alternative: str = "greater") -> float:
    """One-tailed sign-flip permutation test of the paired t statistic.

    All 2^N sign patterns are enumerated when N < 13; otherwise ``n_mc``
    seeded patterns with the identity always among them, so the p-value
    never drops below 1/#perms.  All-zero differences return 1.0.
    """
    d = _diffs(a, b, alternative)
    if np.all(d == 0):
        return 1.0
    n = d.size
    if n < MC_THRESHOLD:
        signs = np.array(list(itertools.product((1.0, -1.0), repeat=n)))
        signs[0] = 1.0  # identity first: its statistic is the observed one
    else:
        rng = np.random.default_rng(seed)
        signs = rng.choice((1.0, -1.0), size=(n_mc, n))
        signs[0] = 1.0
    t = _t_statistics(signs * d)
    return float(np.count_nonzero(t >= t[0]) / signs.shape[0])


def wilcoxon_signed_rank(a, b, alternative: str = "greater") -> float:
    """One-tailed Wilcoxon signed-rank test, normal approximation.

    Zero differences are dropped; midranks resolve ties in |d| and the
    variance carries the tie correction; the z score applies a 0.5
    continuity correction toward the mean.  All zeros give 1.0.
    """
    d = _diffs(a, b, alternative)
    d = d[d != 0]
    n = d.size
    if n == 0:
        return 1.0
    ranks = rankdata(np.abs(d))
    w_plus = float(ranks[d > 0].sum())
    mean = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0
    _, tie_counts = np.unique(ranks, return_counts=True)
    var -= float((tie_counts**3 - tie_counts).sum()) / 48.0
    shift = 0.5 * np.sign(w_plus - mean)
    z = (w_plus - mean - shift) / math.sqrt(var)
    return 1.0 - normal_cdf(z)


def smd(a, b) -> float:
    """Standardized mean difference of paired scores, corrected for small N.

    mean(a - b) over the unbiased standard deviation of the differences,
    shrunk by 1 - 3/(4(N-1) - 1).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = _diffs(a, b, "greater")
    sd = d.std(ddof=1)
    if sd == 0:
        raise EffectUndefined("paired differences have zero variance")
    n = d.size
    correction = 1.0 - 3.0 / (4.0 * (n - 1) - 1.0)
    return float(d.mean() / sd * correction)


def compare_pipelines(
    scores: PairedScores, n_mc: int = 10000, seed: int = 0, alternative: str = "greater",
    undefined_smd: float | None = None,
) -> DatasetStat:
    """Within-dataset comparison with the sample-size-matched test.

    N < 13 exhaustive permutation, 13 <= N <= 20 Monte-Carlo permutation,
    N > 20 Wilcoxon signed-rank.  The effect size is always attached;
    zero-variance differences raise EffectUndefined unless the caller
    supplies ``undefined_smd`` to stand in (as report commands do when a
    pipeline is compared with itself).
    """
    n = scores.n_subjects
    if n < MC_THRESHOLD:
        method = "perm_exact"
        p = perm_paired_ttest(scores.a, scores.b, alternative=alternative)
    elif n <= WILCOXON_THRESHOLD:
        method = "perm_mc"
        p = perm_paired_ttest(scores.a, scores.b, n_mc=n_mc, seed=seed, alternative=alternative)
    else:
        method = "wilcoxon"
        p = wilcoxon_signed_rank(scores.a, scores.b, alternative=alternative)
    try:
        effect = smd(scores.a, scores.b)
    except EffectUndefined:
        if undefined_smd is None:
            raise
        effect = float(undefined_smd)
    return DatasetStat(scores.dataset_id, n, p, effect, method)


def _clamp_p(p: float) -> tuple[float, bool]:
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise InvalidInput(f"p-value {p} outside [0, 1]")
    clipped = min(max(p, P_FLOOR), 1.0 - P_FLOOR)
    return clipped, clipped != p


def stouffer_combine(stats: list) -> CombinedStat:
    """Combine per-dataset evidence by weighted Stouffer Z.

    Z_i = phi_inv(1 - p_i), weighted by w_i = sqrt(N_i / sum N_j) so the
    squared weights sum to one; the combined effect is the same weighted
    average of the per-dataset effect sizes.  Degenerate p-values clamp
    into [1e-12, 1 - 1e-12] and set the ``clamped`` flag.
    """
    if not stats:
        raise InvalidInput("nothing to combine")
    total_n = sum(s.n_subjects for s in stats)
    z_sum, smd_sum = 0.0, 0.0
    weights = {}
    clamped = False
    for s in stats:
        p, was_clamped = _clamp_p(s.p_value)
        clamped = clamped or was_clamped
        w = math.sqrt(s.n_subjects / total_n)
        weights[s.dataset_id] = w
        z_sum += w * phi_inv(1.0 - p)
        smd_sum += w * s.smd
    p_combined, _ = _clamp_p(1.0 - normal_cdf(z_sum))
    return CombinedStat(z_sum, p_combined, smd_sum, weights, clamped)


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _normal_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


# Piecewise rational approximation of the inverse normal CDF: a central
# branch on [0.02425, 0.97575] and reflected tail branches outside it.
_PHI_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
          1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_PHI_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
          6.680131188771972e+01, -1.328068155288572e+01)
_PHI_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
          -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_PHI_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
          3.754408661907416e+00)
_PHI_SPLIT = 0.02425


def _phi_inv_lower(q: float) -> float:
    """phi_inv restricted to q in (0, 0.5], where x <= 0.

    There the CDF evaluates as erfc of a nonnegative argument, keeping the
    Newton residual accurate even deep in the tail.
    """
    a, b, c, d = _PHI_A, _PHI_B, _PHI_C, _PHI_D
    if q < _PHI_SPLIT:
        u = math.sqrt(-2.0 * math.log(q))
        x = ((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]
        x /= (((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0
    else:
        u = q - 0.5
        r = u * u
        x = ((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]
        x *= u
        x /= ((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0
    return x - (normal_cdf(x) - q) / _normal_pdf(x)


def phi_inv(q: float) -> float:
    """Inverse standard normal CDF, rational seed plus one Newton step.

    Accurate to better than 1e-9 absolutely; arguments at 0 or 1 clamp to
    the working range first.  The upper half reflects onto the lower one,
    so phi_inv(q) == -phi_inv(1 - q) holds by construction.
    """
    if not 0.0 <= q <= 1.0 or math.isnan(q):
        raise InvalidInput(f"quantile {q} outside [0, 1]")
    q, _ = _clamp_p(q)
    if q > 0.5:
        return -_phi_inv_lower(1.0 - q)
    return _phi_inv_lower(q)


def paired_scores(rows, pipeline_a: str, pipeline_b: str) -> list[PairedScores]:
    """Aggregate result rows into per-dataset paired score vectors.

    Rows need ``dataset``, ``subject``, ``pipeline``, and ``score``
    attributes; scores average over a subject's sessions and folds.  Only
    subjects scored by both pipelines pair up, and datasets with fewer
    than two such subjects are dropped.  A pipeline absent from the rows
    entirely raises NotFound.
    """
    rows = list(rows)
    present = {r.pipeline for r in rows}
    missing = [p for p in dict.fromkeys((pipeline_a, pipeline_b)) if p not in present]
    if missing:
        raise NotFound(f"no results for pipeline(s) {', '.join(map(repr, missing))}")
    by_ds: dict = {}
    for r in rows:
        if r.pipeline not in (pipeline_a, pipeline_b):
            continue
        by_ds.setdefault(r.dataset, {}).setdefault(r.subject, {}).setdefault(
            r.pipeline, []
        ).append(r.score)
    pairs = []
    for dataset_id in sorted(by_ds):
        subjects = by_ds[dataset_id]
        common = sorted(
            s for s, scores in subjects.items() if pipeline_a in scores and pipeline_b in scores
        )
        if len(common) < 2:
            continue
        a = np.array([np.mean(subjects[s][pipeline_a]) for s in common])
        b = np.array([np.mean(subjects[s][pipeline_b]) for s in common])
        pairs.append(PairedScores(dataset_id, a, b))
    if not pairs:
        raise InsufficientUnits(
            f"no dataset holds both {pipeline_a!r} and {pipeline_b!r} for 2+ subjects"
        )
    return pairs


def stats_report(
    pairs: list, n_mc: int = 10000, seed: int = 0, alternative: str = "greater",
    undefined_smd: float | None = None,
) -> dict:
    """Per-dataset test results plus their Stouffer combination, JSON-ready."""
    per_dataset = [
        compare_pipelines(
            p, n_mc=n_mc, seed=derive_seed(seed, p.dataset_id, "stats"),
            alternative=alternative, undefined_smd=undefined_smd,
        )
        for p in pairs
    ]
    combined = stouffer_combine(per_dataset)
    return {
        "datasets": [
            {
                "dataset_id": s.dataset_id,
                "n_subjects": s.n_subjects,
                "p_value": s.p_value,
                "smd": s.smd,
                "method": s.method,
            }
            for s in per_dataset
        ],
        "combined": {
            "z": combined.z,
            "p_value": combined.p_value,
            "smd": combined.combined_smd,
            "weights": combined.weights,
            "clamped": combined.clamped,
        },
    }
