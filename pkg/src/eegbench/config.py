"""Benchmark run configuration: one JSON document, validated up front.

Schema (all keys optional unless noted)::

    {
      "datasets": [...],            # required, see below
      "pipelines": [...],           # required, catalog names or overrides
      "plan": {"strategy": ..., "outer_folds": ..., "inner_folds": ...,
               "seed": ..., "metric": ...},
      "meter": {"cpu_power_w": ..., "carbon_intensity_g_per_kwh": ...,
                "enabled": ...},
      "output_dir": "out",
      "jobs": 1,
      "seed": 42
    }

Dataset entries come in three forms:

* a registry id (e.g. ``"BNCI2014_001"``): a deterministic synthetic
  stand-in is generated with that corpus's dimensions (subjects,
  sessions, channels, classes, trials, rate);
* a filesystem path: a directory tree of epoch bundles;
* ``{"id": ..., "synth": {...}}``: explicit synthetic generation
  parameters, with optional ``"freqs"`` for ssvep stimuli.

All datasets in one run must share a paradigm, and every pipeline must
belong to that paradigm.  When the plan omits ``metric``, binary
problems score by ROC-AUC and multiclass ones by accuracy.  When the
plan omits ``seed``, the top-level seed is used.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import InvalidConfig, InvalidInput, NotFound
from .evaluation import EvaluationPlan, MeterConfig
from .pipelines import PipelineSpec, lookup
from .registry import REGISTRY
from .synth import SynthSpec

_TOP_KEYS = {"datasets", "pipelines", "plan", "meter", "output_dir", "jobs", "seed"}


@dataclass(frozen=True)
class DatasetSource:
    """One resolved dataset entry: where the epochs come from."""

    id: str
    kind: str  # "registry" | "path" | "synth"
    paradigm: str
    n_classes: int
    path: str | None = None
    synth: dict | None = None
    freqs: tuple | None = None


@dataclass(frozen=True)
class BenchmarkConfig:
    datasets: tuple
    pipelines: tuple
    plan: EvaluationPlan
    meter: MeterConfig
    output_dir: str | None
    jobs: int
    seed: int

    @property
    def paradigm(self) -> str:
        return self.datasets[0].paradigm


def _peek_bundle_tree(path: Path):
    """Paradigm and class count of a bundle tree, from its first bundle."""
    metas = sorted(path.rglob("meta.json")) if path.is_dir() else []
    if not metas:
        raise InvalidConfig(f"no epoch bundles under {path}")
    try:
        meta = json.loads(metas[0].read_text(encoding="utf-8"))
        return str(meta["paradigm"]), len(set(meta["labels"]))
    except (ValueError, KeyError, TypeError) as exc:
        raise InvalidConfig(f"unreadable bundle metadata in {metas[0]}") from exc


def _dataset_source(entry, seen_ids: set) -> DatasetSource:
    if isinstance(entry, str):
        if entry in REGISTRY:
            d = REGISTRY[entry]
            src = DatasetSource(id=entry, kind="registry",
                                paradigm=d.paradigm, n_classes=d.n_classes)
        else:
            path = Path(entry)
            if not path.exists():
                raise InvalidConfig(
                    f"dataset {entry!r} is neither a registry id nor a path")
            paradigm, n_classes = _peek_bundle_tree(path)
            src = DatasetSource(id=path.name, kind="path", paradigm=paradigm,
                                n_classes=n_classes, path=str(path))
    elif isinstance(entry, dict):
        unknown = set(entry) - {"id", "synth", "freqs"}
        if unknown:
            raise InvalidConfig(f"unknown dataset entry keys {sorted(unknown)}")
        if "id" not in entry or "synth" not in entry:
            raise InvalidConfig(
                "inline dataset entries need 'id' and 'synth' keys")
        params = dict(entry["synth"])
        params.setdefault("seed", 0)
        try:
            spec = SynthSpec(**params)
        except (InvalidInput, TypeError) as exc:
            raise InvalidConfig(
                f"bad synth parameters for dataset {entry.get('id')!r}: {exc}"
            ) from exc
        freqs = tuple(float(f) for f in entry["freqs"]) if "freqs" in entry else None
        if freqs is not None and len(freqs) != spec.n_classes:
            raise InvalidConfig("freqs must list one frequency per class")
        src = DatasetSource(id=str(entry["id"]), kind="synth",
                            paradigm=spec.paradigm, n_classes=spec.n_classes,
                            synth=dict(entry["synth"]), freqs=freqs)
    else:
        raise InvalidConfig(f"unsupported dataset entry {entry!r}")
    if src.id in seen_ids:
        raise InvalidConfig(f"duplicate dataset id {src.id!r}")
    seen_ids.add(src.id)
    return src


def _pipeline_spec(entry, seen: set) -> PipelineSpec:
    if isinstance(entry, str):
        spec = lookup(entry).spec()
    elif isinstance(entry, dict):
        unknown = set(entry) - {"name", "grid"}
        if unknown:
            raise InvalidConfig(f"unknown pipeline entry keys {sorted(unknown)}")
        if "name" not in entry:
            raise InvalidConfig("pipeline entries need a 'name'")
        catalog_entry = lookup(entry["name"])
        grid = entry.get("grid")
        if grid is not None:
            if not isinstance(grid, dict):
                raise InvalidConfig("pipeline grid must be an object")
            grid = {k: tuple(v) for k, v in grid.items()}
            for k, v in grid.items():
                if not v:
                    raise InvalidConfig(f"grid axis {k!r} has no candidates")
        spec = catalog_entry.spec(grid)
    else:
        raise InvalidConfig(f"unsupported pipeline entry {entry!r}")
    if spec.name in seen:
        raise InvalidConfig(f"duplicate pipeline {spec.name!r}")
    seen.add(spec.name)
    return spec


def parse_config(doc: dict, output_dir=None, jobs=None, seed=None) -> BenchmarkConfig:
    """Validate a configuration document; keyword arguments override it."""
    if not isinstance(doc, dict):
        raise InvalidConfig("configuration must be a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise InvalidConfig(f"unknown configuration keys {sorted(unknown)}")

    seed = int(doc.get("seed", 42)) if seed is None else int(seed)
    jobs = int(doc.get("jobs", 1)) if jobs is None else int(jobs)
    if jobs < 1:
        raise InvalidConfig("jobs must be at least 1")
    output_dir = doc.get("output_dir") if output_dir is None else output_dir
    if output_dir is not None:
        output_dir = str(output_dir)

    raw_datasets = doc.get("datasets")
    if not raw_datasets or not isinstance(raw_datasets, list):
        raise InvalidConfig("'datasets' must be a non-empty list")
    seen_ids: set = set()
    datasets = tuple(_dataset_source(e, seen_ids) for e in raw_datasets)
    paradigms = {d.paradigm for d in datasets}
    if len(paradigms) > 1:
        raise InvalidConfig(
            f"datasets mix paradigms {sorted(paradigms)}; run them separately")
    paradigm = datasets[0].paradigm

    raw_pipelines = doc.get("pipelines")
    if not raw_pipelines or not isinstance(raw_pipelines, list):
        raise InvalidConfig("'pipelines' must be a non-empty list")
    seen_names: set = set()
    try:
        pipelines = tuple(_pipeline_spec(e, seen_names) for e in raw_pipelines)
    except NotFound as exc:
        raise InvalidConfig(str(exc)) from exc
    for spec in pipelines:
        if spec.paradigm != paradigm:
            raise InvalidConfig(
                f"pipeline {spec.name!r} is a {spec.paradigm} pipeline but "
                f"the datasets are {paradigm}")

    plan_doc = doc.get("plan", {})
    if not isinstance(plan_doc, dict):
        raise InvalidConfig("'plan' must be an object")
    plan_doc = dict(plan_doc)
    plan_doc.setdefault("seed", seed)
    if "metric" not in plan_doc:
        n_classes = max(d.n_classes for d in datasets)
        plan_doc["metric"] = "roc_auc" if n_classes == 2 else "accuracy"
    try:
        plan = EvaluationPlan(**plan_doc)
    except TypeError as exc:
        raise InvalidConfig(f"bad plan: {exc}") from exc

    meter_doc = doc.get("meter", {})
    if not isinstance(meter_doc, dict):
        raise InvalidConfig("'meter' must be an object")
    try:
        meter = MeterConfig(**meter_doc)
    except TypeError as exc:
        raise InvalidConfig(f"bad meter: {exc}") from exc

    return BenchmarkConfig(datasets=datasets, pipelines=pipelines, plan=plan,
                           meter=meter, output_dir=output_dir, jobs=jobs,
                           seed=seed)


def load_config(path, output_dir=None, jobs=None, seed=None) -> BenchmarkConfig:
    path = Path(path)
    if not path.is_file():
        raise NotFound(f"no configuration file at {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except ValueError as exc:
        raise InvalidConfig(f"configuration is not valid JSON: {exc}") from exc
    return parse_config(doc, output_dir=output_dir, jobs=jobs, seed=seed)
