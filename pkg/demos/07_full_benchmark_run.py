"""End to end: a config file in, four reproducible artifacts out.

The orchestration layer ties everything together. A JSON config names
datasets (inline synthetic specs, on-disk bundle trees, or corpus
registry ids) and pipelines; `bench run` evaluates every pipeline on
every dataset and writes results.csv, summary.md, stats.json, and
errors.json. The same entry points are importable, which is what this
script uses; the installed `bench` console command is identical.

Run with: python3 demos/07_full_benchmark_run.py
"""

import json
import tempfile
from pathlib import Path

from eegbench.cli import main as bench
from eegbench.reporting import (
    fixture_names,
    fixture_stats,
    load_fixture,
    render_score_table,
)

tmp = Path(tempfile.mkdtemp(prefix="bench_demo_"))
config = tmp / "benchmark.json"
config.write_text(json.dumps({
    "datasets": [
        {"id": "demo_synth", "synth": {
            "paradigm": "mi", "n_subjects": 3, "n_sessions": 1,
            "n_channels": 6, "n_trials_per_class": 12, "snr": 2.0}},
    ],
    "pipelines": ["MDM", "CSP+LDA", "TS+LR"],
    "plan": {"strategy": "within_session"},
    "meter": {"enabled": True},
    "seed": 7,
}, indent=2))

print("=== 1. bench run ===")
out = tmp / "results"
code = bench(["run", "--config", str(config), "--out", str(out)])
print(f"exit code {code}; artifacts: "
      f"{sorted(p.name for p in out.iterdir())}\n")

print("--- results.csv (first rows) ---")
print("\n".join((out / "results.csv").read_text().splitlines()[:4]), "\n")

print("--- summary.md (score table) ---")
summary = (out / "summary.md").read_text().splitlines()
print("\n".join(summary[:12]), "\n")

print("--- stats.json (pairwise comparisons) ---")
stats = json.loads((out / "stats.json").read_text())
first = stats["comparisons"][0]
print(f"{first['pipeline_a']} vs {first['pipeline_b']}: combined "
      f"p={first['report']['combined']['p_value']:.3f} "
      f"(alternative: {stats['alternative']})\n")

print("=== 2. bench synth: materialize bundles, then run from disk ===")
spec = tmp / "spec.json"
spec.write_text(json.dumps({"n_subjects": 2, "n_sessions": 1,
                            "n_trials_per_class": 10, "n_channels": 6,
                            "snr": 2.0, "seed": 3}))
bundles = tmp / "bundles"
bench(["synth", "--paradigm", "mi", "--spec", str(spec),
       "--out", str(bundles)])
config2 = tmp / "from_disk.json"
config2.write_text(json.dumps({
    "datasets": [{"id": "bundles", "path": str(bundles)}],
    "pipelines": ["MDM", "LogVar+LDA"],
    "meter": {"enabled": False},
}))
bench(["run", "--config", str(config2), "--out", str(tmp / "results2")])
print()

print("=== 3. bench stats / bench report on existing results ===")
bench(["stats", "--results", str(out / "results.csv"),
       "--compare", "TS+LR", "MDM"])
bench(["report", "--results", str(out / "results.csv"), "--format", "md"])
print()

print("=== 4. Reference tables ship as render fixtures ===")
print(f"available fixtures: {fixture_names()}")
doc = load_fixture("within_mi_all")
table = render_score_table(fixture_stats(doc))
print(f"\n{doc['title']} — {doc['label']}")
print("\n".join(table.splitlines()[:5]))
print("...")
print(f"\nworkspace left at {tmp} for inspection")
