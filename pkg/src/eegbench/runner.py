"""Benchmark execution: materialize datasets, evaluate, write artifacts.

A run produces four files in the output directory:

* ``results.csv``: one row per successful fold, canonically sorted;
* ``errors.json``: per-unit failures and skip warnings (the run
  continues past individual failures);
* ``summary.md``: score table and rank histogram;
* ``stats.json``: pairwise pipeline comparisons (per-dataset tests
  combined across datasets), one entry per ordered pipeline pair.

With metering disabled the artifacts are byte-identical across repeat
runs and worker counts: rows are sorted before writing, all seeds derive
from the configuration, and timing/energy columns are zeroed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import BenchmarkConfig, DatasetSource
from .bundle import load_dataset
from .datasets import Dataset
from .errors import EffectUndefined, InsufficientUnits, InvalidConfig, NotFound
from .evaluation import derive_seed, evaluate
from .registry import DatasetDescriptor, registry_lookup
from .reporting import render_summary, write_results_csv
from .stats import paired_scores, stats_report
from .synth import SynthSpec, synth_dataset

STANDIN_SNR = 1.0


def standin_spec(descriptor: DatasetDescriptor, seed: int) -> SynthSpec:
    """Synthetic stand-in dimensions for a registry corpus."""
    trials = descriptor.trials_per_class_per_session
    if isinstance(trials, dict):
        if descriptor.paradigm == "erp":
            per_class = trials.get("Target", min(trials.values()))
        else:
            per_class = float(np.mean(list(trials.values())))
    else:
        per_class = float(trials)
    return SynthSpec(
        paradigm=descriptor.paradigm,
        n_subjects=descriptor.n_subjects,
        n_sessions=descriptor.n_sessions,
        n_channels=descriptor.n_channels,
        n_classes=2 if descriptor.paradigm == "erp" else descriptor.n_classes,
        n_trials_per_class=max(2, round(per_class)),
        trial_len_s=descriptor.trial_len_s,
        sfreq=descriptor.sfreq_hz,
        snr=STANDIN_SNR,
        seed=seed,
    )


def standin_freqs(descriptor: DatasetDescriptor):
    """Stimulation frequencies for an ssvep stand-in.

    Class names are used when they parse as frequencies; otherwise the
    classes spread evenly from 8 Hz up to the highest rate the sampling
    frequency supports (keeping first harmonics comfortably alias-free).
    """
    if descriptor.paradigm != "ssvep":
        return None
    try:
        named = tuple(float(name) for name in descriptor.class_names)
        if len(named) == descriptor.n_classes:
            return named
    except ValueError:
        pass
    top = min(descriptor.sfreq_hz / 4.0 - 0.6, 44.0)
    return tuple(np.linspace(8.0, top, descriptor.n_classes))


def materialize_dataset(source: DatasetSource, seed: int) -> Dataset:
    """Produce the epochs behind one configured dataset entry."""
    if source.kind == "path":
        return load_dataset(source.path, source.id)
    if source.kind == "registry":
        descriptor = registry_lookup(source.id)
        spec = standin_spec(descriptor, derive_seed(seed, source.id, "standin"))
        return synth_dataset(spec, freqs=standin_freqs(descriptor),
                             dataset_id=source.id)
    params = dict(source.synth)
    if "seed" not in params:
        params["seed"] = derive_seed(seed, source.id, "synth")
    return synth_dataset(SynthSpec(**params), freqs=source.freqs,
                         dataset_id=source.id)


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode("utf-8")


def _record_key(rec: dict):
    return tuple(str(rec.get(k, "")) for k in
                 ("dataset", "subject", "session", "pipeline", "fold"))


def pairwise_stats(rows, pipeline_names, n_mc: int = 10000, seed: int = 0) -> list:
    """Ordered pairwise comparisons over result rows.

    Pairs whose effect size or pairing is undefined (zero-variance
    differences, fewer than two common subjects everywhere) are recorded
    as error entries instead of aborting the report.
    """
    comparisons = []
    names = sorted(pipeline_names)
    for a in names:
        for b in names:
            if a == b:
                continue
            entry = {"pipeline_a": a, "pipeline_b": b}
            try:
                pairs = paired_scores(rows, a, b)
                entry["report"] = stats_report(
                    pairs, n_mc=n_mc, seed=derive_seed(seed, a, b, "stats"))
            except (EffectUndefined, InsufficientUnits, NotFound) as exc:
                entry["error"] = type(exc).__name__
                entry["message"] = str(exc)
            comparisons.append(entry)
    return comparisons


@dataclass(frozen=True)
class RunResult:
    rows: list
    warnings: list
    errors: list
    output_dir: Path
    all_failed: bool


def run(config: BenchmarkConfig) -> RunResult:
    """Execute a benchmark configuration and write its artifacts."""
    if config.output_dir is None:
        raise InvalidConfig("configuration needs an output_dir (or pass --out)")
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    rows, warnings, errors = [], [], []
    for source in config.datasets:
        dataset = materialize_dataset(source, config.seed)
        outcome = evaluate(dataset, list(config.pipelines), config.plan,
                           meter_config=config.meter, jobs=config.jobs)
        rows.extend(outcome.rows)
        warnings.extend(outcome.warnings)
        errors.extend(outcome.errors)

    warnings = sorted(warnings, key=_record_key)
    errors = sorted(errors, key=_record_key)

    write_results_csv(out / "results.csv", rows)
    (out / "errors.json").write_bytes(
        _json_bytes({"errors": errors, "warnings": warnings}))

    if rows:
        summary = render_summary(rows)
        comparisons = pairwise_stats(
            rows, [p.name for p in config.pipelines], seed=config.seed)
    else:
        summary = "# Benchmark summary\n\nNo successful evaluations.\n"
        comparisons = []
    (out / "summary.md").write_bytes(summary.encode("utf-8"))
    (out / "stats.json").write_bytes(_json_bytes({
        "seed": config.seed,
        "alternative": "greater",
        "comparisons": comparisons,
    }))

    return RunResult(rows=rows, warnings=warnings, errors=errors,
                     output_dir=out, all_failed=not rows)
