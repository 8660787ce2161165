"""Evaluation strategies, splitting, grid search, metrics, and metering.

Every strategy reduces to independent work units (dataset x subject x
session x pipeline) whose results merge order-independently; each unit
derives its random stream from a stable hash of its coordinates, so serial
and parallel executions produce identical rows.
"""

from __future__ import annotations

import hashlib
import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.stats import rankdata

from .datasets import Dataset
from .dsp import Epochs, concat_epochs
from .errors import (
    BenchError,
    DimensionMismatch,
    GridExhausted,
    IncompleteGrid,
    InsufficientUnits,
    InvalidConfig,
    StratificationImpossible,
    UndefinedMetric,
)
from .pipelines import PipelineSpec, lookup, make_pipeline

DEFAULT_CPU_POWER_W = 100.0
DEFAULT_CARBON_INTENSITY = 475.0
CARBON_INTENSITY_ENV = "BENCH_CARBON_INTENSITY_G_PER_KWH"


@dataclass(frozen=True)
class EvaluationPlan:
    """How to evaluate: strategy, fold counts, metric, and master seed."""

    strategy: str = "within_session"
    outer_folds: int = 5
    inner_folds: int = 3
    seed: int = 42
    metric: str = "roc_auc"

    def __post_init__(self):
        if self.strategy not in ("within_session", "cross_session", "cross_subject"):
            raise InvalidConfig(f"unknown strategy {self.strategy!r}")
        if self.metric not in ("roc_auc", "accuracy"):
            raise InvalidConfig(f"unknown metric {self.metric!r}")
        if self.outer_folds < 2 or self.inner_folds < 2:
            raise InvalidConfig("fold counts must be at least 2")


@dataclass(frozen=True)
class ResultRow:
    dataset: str
    subject: str
    session: str
    pipeline: str
    fold: int
    metric: str
    score: float
    n_train: int
    n_test: int
    fit_time_s: float
    predict_time_s: float
    energy_wh: float
    co2_g: float


@dataclass(frozen=True)
class MeterConfig:
    """Resource accounting constants.

    ``enabled=False`` reports exact zeros, making result files a pure
    function of (data, config, seed); timing is inherently run-dependent.
    """

    cpu_power_w: float = DEFAULT_CPU_POWER_W
    carbon_intensity_g_per_kwh: float | None = None
    enabled: bool = True

    def __post_init__(self):
        if self.cpu_power_w < 0:
            raise InvalidConfig("cpu_power_w must be nonnegative")
        if (
            self.carbon_intensity_g_per_kwh is not None
            and self.carbon_intensity_g_per_kwh < 0
        ):
            raise InvalidConfig("carbon intensity must be nonnegative")

    @property
    def intensity(self) -> float:
        if self.carbon_intensity_g_per_kwh is not None:
            return self.carbon_intensity_g_per_kwh
        env = os.environ.get(CARBON_INTENSITY_ENV)
        return float(env) if env else DEFAULT_CARBON_INTENSITY


class Measurement:
    """Filled in by :func:`meter` when its block exits."""

    wall_s = 0.0
    cpu_s = 0.0
    energy_wh = 0.0
    co2_g = 0.0
    degraded = False


def emissions(cpu_s: float, config: MeterConfig) -> tuple[float, float]:
    """(energy_wh, co2_g) for a CPU-time expenditure under the config."""
    energy_wh = cpu_s * config.cpu_power_w / 3600.0
    co2_g = energy_wh * config.intensity / 1000.0
    return energy_wh, co2_g


@contextmanager
def meter(config: MeterConfig):
    """Measure wall time, process CPU time, and derived energy/CO2.

    Degrades to zeros (with ``degraded`` set) if the platform offers no
    process CPU clock.
    """
    m = Measurement()
    if not config.enabled:
        yield m
        return
    try:
        c0 = time.process_time()
    except OSError:
        m.degraded = True
        c0 = None
    t0 = time.perf_counter()
    try:
        yield m
    finally:
        m.wall_s = time.perf_counter() - t0
        if c0 is not None:
            m.cpu_s = time.process_time() - c0
        m.energy_wh, m.co2_g = emissions(m.cpu_s, config)


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from a tuple of work-unit coordinates."""
    token = "\x1f".join(str(p) for p in parts)
    digest = hashlib.blake2b(token.encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def stratified_kfold(labels, k: int, seed: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Seeded stratified k-fold split.

    Indices of each class are shuffled and dealt into ``k`` folds whose
    per-class sizes differ by at most one; leftover samples rotate across
    folds so total fold sizes stay balanced too.  Returns (train, test)
    index pairs; the test folds partition the input exactly.
    """
    labels = np.asarray(labels)
    if k < 2:
        raise InvalidConfig("k must be at least 2")
    rng = np.random.default_rng(seed)
    classes, counts = np.unique(labels, return_counts=True)
    if counts.min() < k:
        raise StratificationImpossible(
            f"smallest class has {counts.min()} trials, fewer than k={k}"
        )
    test_folds: list[list] = [[] for _ in range(k)]
    offset = 0
    for c in classes:
        idx = np.flatnonzero(labels == c)
        rng.shuffle(idx)
        base = idx.size // k
        rem = idx.size % k
        pos = 0
        for j in range(k):
            size = base + (1 if (j - offset) % k < rem else 0)
            test_folds[j].extend(idx[pos : pos + size])
            pos += size
        offset += rem
    all_idx = np.arange(labels.size)
    out = []
    for fold in test_folds:
        test = np.sort(np.asarray(fold, dtype=int))
        train = np.setdiff1d(all_idx, test)
        out.append((train, test))
    return out


def roc_auc(scores, binary_labels) -> float:
    """Area under the ROC curve via the Mann-Whitney rank statistic.

    Midranks handle tied scores: the value is P(score+ > score-) +
    0.5 P(score+ = score-).
    """
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(binary_labels)
    if scores.shape != labels.shape:
        raise DimensionMismatch("scores and labels differ in length")
    classes = np.unique(labels)
    if classes.size != 2:
        raise UndefinedMetric(f"AUC needs exactly 2 classes, got {classes.size}")
    pos = labels == classes[1]
    n_pos = int(pos.sum())
    n_neg = labels.size - n_pos
    ranks = rankdata(scores)
    return float((ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def accuracy(pred_labels, labels) -> float:
    pred = np.asarray(pred_labels)
    true = np.asarray(labels)
    if pred.shape != true.shape:
        raise DimensionMismatch("prediction and label lengths differ")
    return float(np.mean(pred == true))


def score_model(model, test: Epochs, metric: str) -> float:
    if metric == "accuracy":
        return accuracy(model.predict(test), test.labels)
    proba = model.predict_proba(test)
    positive = model.classes_[-1]
    col = int(np.flatnonzero(model.classes_ == positive)[0])
    return roc_auc(proba[:, col], test.labels)


def nested_grid_search(
    spec: PipelineSpec,
    train: Epochs,
    grid: dict | None = None,
    inner_folds: int = 3,
    seed: int = 0,
    metric: str = "roc_auc",
) -> dict:
    """Exhaustive hyperparameter search by inner cross-validation.

    Candidates enumerate the Cartesian product of the grid in declaration
    order; each is scored by the mean inner-fold metric and ties keep the
    earliest candidate.  An empty grid passes through to defaults.  If
    every candidate fails, :class:`GridExhausted` reports each failure.
    """
    grid = dict(spec.grid if grid is None else grid)
    if not grid:
        return {}
    keys = list(grid)
    candidates = [
        dict(zip(keys, values)) for values in itertools.product(*(grid[k] for k in keys))
    ]
    splits = stratified_kfold(train.labels, inner_folds, seed)
    best_score, best = -np.inf, None
    causes = []
    for hyper in candidates:
        try:
            scores = []
            for train_idx, test_idx in splits:
                assert np.intersect1d(train_idx, test_idx).size == 0
                model = make_pipeline(spec.name, hyper, seed).fit(train.select(train_idx))
                scores.append(score_model(model, train.select(test_idx), metric))
            mean_score = float(np.mean(scores))
        except BenchError as exc:
            causes.append({"hyper": hyper, "error": type(exc).__name__, "message": str(exc)})
            continue
        if mean_score > best_score:
            best_score, best = mean_score, hyper
    if best is None:
        raise GridExhausted("every grid candidate failed", causes=causes)
    return best


class EvalOutcome(NamedTuple):
    """Rows plus the skip/failure records accumulated along the way."""

    rows: list
    warnings: list
    errors: list


@dataclass(frozen=True)
class _Unit:
    """One schedulable work unit: a pipeline on one train/test arrangement."""

    dataset_id: str
    subject: str
    session: str
    spec: PipelineSpec
    train: Epochs
    test: Epochs | None  # None: within-session folds over `train`
    folds: tuple | None
    metric: str
    seed: int
    inner_folds: int
    meter_config: MeterConfig


def _evaluate_fold(unit: _Unit, fold: int, train: Epochs, test: Epochs):
    fold_seed = derive_seed(
        unit.seed, unit.dataset_id, unit.subject, unit.session, unit.spec.name, fold
    )
    hyper = nested_grid_search(
        unit.spec, train, inner_folds=unit.inner_folds, seed=fold_seed, metric=unit.metric
    )
    with meter(unit.meter_config) as fit_m:
        model = make_pipeline(unit.spec.name, hyper, fold_seed).fit(train)
    with meter(unit.meter_config) as pred_m:
        score = score_model(model, test, unit.metric)
    return ResultRow(
        dataset=unit.dataset_id,
        subject=unit.subject,
        session=unit.session,
        pipeline=unit.spec.name,
        fold=fold,
        metric=unit.metric,
        score=score,
        n_train=train.n_trials,
        n_test=test.n_trials,
        fit_time_s=fit_m.wall_s,
        predict_time_s=pred_m.wall_s,
        energy_wh=fit_m.energy_wh + pred_m.energy_wh,
        co2_g=fit_m.co2_g + pred_m.co2_g,
    )


def _run_unit(unit: _Unit) -> tuple[list, list]:
    rows, errors = [], []
    if unit.folds is not None:
        arrangements = [
            (fold, unit.train.select(tr), unit.train.select(te))
            for fold, (tr, te) in enumerate(unit.folds)
        ]
    else:
        arrangements = [(0, unit.train, unit.test)]
    for fold, train, test in arrangements:
        try:
            rows.append(_evaluate_fold(unit, fold, train, test))
        except BenchError as exc:
            errors.append(
                {
                    "dataset": unit.dataset_id,
                    "subject": unit.subject,
                    "session": unit.session,
                    "pipeline": unit.spec.name,
                    "fold": fold,
                    "error": type(exc).__name__,
                    "message": str(exc),
                }
            )
    return rows, errors


_ROW_KEY = ("dataset", "subject", "session", "pipeline", "fold")


def sort_rows(rows) -> list:
    return sorted(rows, key=lambda r: (r.dataset, r.subject, r.session, r.pipeline, r.fold))


def _execute(units: list, jobs: int) -> tuple[list, list]:
    rows, errors = [], []
    if jobs > 1 and len(units) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for unit_rows, unit_errors in pool.map(_run_unit, units):
                rows.extend(unit_rows)
                errors.extend(unit_errors)
    else:
        for unit in units:
            unit_rows, unit_errors = _run_unit(unit)
            rows.extend(unit_rows)
            errors.extend(unit_errors)
    return sort_rows(rows), errors


def _resolve_specs(pipelines) -> list[PipelineSpec]:
    return [p if isinstance(p, PipelineSpec) else lookup(p).spec() for p in pipelines]


def _check_metric(plan: EvaluationPlan, epochs: Epochs):
    if plan.metric == "roc_auc" and np.unique(epochs.labels).size > 2:
        raise InvalidConfig("roc_auc is defined for binary problems only")


def within_session_evaluate(
    dataset: Dataset,
    pipelines,
    plan: EvaluationPlan,
    meter_config: MeterConfig | None = None,
    jobs: int = 1,
) -> EvalOutcome:
    """Five stratified folds per subject and session, one row per fold.

    Sessions with a single class are skipped with a warning record;
    per-unit failures become error records and the run continues.
    """
    specs = _resolve_specs(pipelines)
    meter_config = meter_config or MeterConfig()
    units, warnings = [], []
    for subject, session, epochs in dataset.iter_units():
        if np.unique(epochs.labels).size < 2:
            warnings.append(
                {
                    "dataset": dataset.dataset_id,
                    "subject": subject,
                    "session": session,
                    "reason": "degenerate session: single class present",
                }
            )
            continue
        _check_metric(plan, epochs)
        split_seed = derive_seed(plan.seed, dataset.dataset_id, subject, session, "split")
        try:
            folds = tuple(stratified_kfold(epochs.labels, plan.outer_folds, split_seed))
        except StratificationImpossible as exc:
            warnings.append(
                {
                    "dataset": dataset.dataset_id,
                    "subject": subject,
                    "session": session,
                    "reason": str(exc),
                }
            )
            continue
        for spec in specs:
            units.append(
                _Unit(
                    dataset.dataset_id,
                    subject,
                    session,
                    spec,
                    epochs,
                    None,
                    folds,
                    plan.metric,
                    plan.seed,
                    plan.inner_folds,
                    meter_config,
                )
            )
    rows, errors = _execute(units, jobs)
    return EvalOutcome(rows, warnings, errors)


def cross_session_evaluate(
    dataset: Dataset,
    pipelines,
    plan: EvaluationPlan,
    meter_config: MeterConfig | None = None,
    jobs: int = 1,
) -> EvalOutcome:
    """Leave one session out per subject; one row per held-out session."""
    specs = _resolve_specs(pipelines)
    meter_config = meter_config or MeterConfig()
    units, warnings = [], []
    for subject in dataset.subject_ids:
        session_ids = dataset.session_ids(subject)
        if len(session_ids) < 2:
            raise InsufficientUnits(
                f"subject {subject!r} has {len(session_ids)} session(s); need 2"
            )
        for held_out in session_ids:
            test = dataset.epochs(subject, held_out)
            train = concat_epochs(
                [dataset.epochs(subject, s) for s in session_ids if s != held_out]
            )
            _check_metric(plan, test)
            for spec in specs:
                units.append(
                    _Unit(
                        dataset.dataset_id,
                        subject,
                        held_out,
                        spec,
                        train,
                        test,
                        None,
                        plan.metric,
                        plan.seed,
                        plan.inner_folds,
                        meter_config,
                    )
                )
    rows, errors = _execute(units, jobs)
    return EvalOutcome(rows, warnings, errors)


def cross_subject_evaluate(
    dataset: Dataset,
    pipelines,
    plan: EvaluationPlan,
    meter_config: MeterConfig | None = None,
    jobs: int = 1,
) -> EvalOutcome:
    """Leave one subject out; one row per held-out subject per pipeline."""
    specs = _resolve_specs(pipelines)
    meter_config = meter_config or MeterConfig()
    subjects = dataset.subject_ids
    if len(subjects) < 2:
        raise InsufficientUnits(f"{len(subjects)} subject(s); need at least 2")
    pooled = {
        s: concat_epochs([dataset.epochs(s, ses) for ses in dataset.session_ids(s)])
        for s in subjects
    }
    units, warnings = [], []
    for held_out in subjects:
        train = concat_epochs([pooled[s] for s in subjects if s != held_out])
        test = pooled[held_out]
        _check_metric(plan, test)
        for spec in specs:
            units.append(
                _Unit(
                    dataset.dataset_id,
                    held_out,
                    "all",
                    spec,
                    train,
                    test,
                    None,
                    plan.metric,
                    plan.seed,
                    plan.inner_folds,
                    meter_config,
                )
            )
    rows, errors = _execute(units, jobs)
    return EvalOutcome(rows, warnings, errors)


STRATEGIES = {
    "within_session": within_session_evaluate,
    "cross_session": cross_session_evaluate,
    "cross_subject": cross_subject_evaluate,
}


def evaluate(dataset, pipelines, plan, meter_config=None, jobs=1) -> EvalOutcome:
    """Dispatch to the strategy named in the plan."""
    return STRATEGIES[plan.strategy](dataset, pipelines, plan, meter_config, jobs)


def rank_pipelines(rows) -> dict:
    """Per-session pipeline ranking with midrank ties.

    Each (dataset, subject, session) contributes one ranking of the mean
    scores; rank 1 is best.  Returns {pipeline: {rank: session count}}.
    Every pipeline must appear in every session, otherwise the ranking is
    ill-posed and :class:`IncompleteGrid` is raised.
    """
    sessions: dict = {}
    pipelines = set()
    for r in rows:
        key = (r.dataset, r.subject, r.session)
        sessions.setdefault(key, {}).setdefault(r.pipeline, []).append(r.score)
        pipelines.add(r.pipeline)
    ordered = sorted(pipelines)
    counts = {p: {} for p in ordered}
    for key, by_pipeline in sessions.items():
        missing = pipelines - set(by_pipeline)
        if missing:
            raise IncompleteGrid(
                f"session {key} lacks scores for {sorted(missing)}"
            )
        means = np.array([np.mean(by_pipeline[p]) for p in ordered])
        ranks = rankdata(-means)
        for p, rank in zip(ordered, ranks):
            rank = float(rank)
            counts[p][rank] = counts[p].get(rank, 0) + 1
    return counts
