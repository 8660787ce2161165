"""The ``bench`` command line: run, synth, stats, report.

* ``bench run --config cfg.json [--out DIR] [--jobs N] [--seed S]``
  executes a benchmark configuration and writes results.csv,
  errors.json, summary.md, and stats.json.  The exit code is nonzero
  only when every evaluation unit failed.
* ``bench synth --paradigm mi|erp|ssvep --spec spec.json --out DIR``
  generates a synthetic dataset and writes it as an epoch-bundle tree.
* ``bench stats --results results.csv --compare A B`` compares two
  pipelines (per-dataset tests combined across datasets) and writes
  stats.json next to the results file.
* ``bench report --results results.csv --format csv|md`` re-renders a
  results file: canonical CSV or the markdown summary, on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bundle import save_dataset
from .config import load_config
from .errors import BenchError, InvalidConfig, NotFound
from .reporting import read_results_csv, render_summary, rows_to_csv
from .runner import run
from .stats import paired_scores, stats_report
from .synth import SynthSpec, synth_dataset


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bench", description="EEG benchmark runner and report tools")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute a benchmark configuration")
    p.add_argument("--config", required=True, help="configuration JSON file")
    p.add_argument("--out", help="output directory (overrides the config)")
    p.add_argument("--jobs", type=int, help="worker processes (overrides)")
    p.add_argument("--seed", type=int, help="master seed (overrides)")

    p = sub.add_parser("synth", help="generate a synthetic dataset")
    p.add_argument("--paradigm", required=True, choices=("mi", "erp", "ssvep"))
    p.add_argument("--spec", required=True, help="generation spec JSON file")
    p.add_argument("--out", required=True, help="bundle tree directory")

    p = sub.add_parser("stats", help="compare two pipelines in a results file")
    p.add_argument("--results", required=True, help="results CSV")
    p.add_argument("--compare", required=True, nargs=2, metavar=("A", "B"))

    p = sub.add_parser("report", help="re-render a results file")
    p.add_argument("--results", required=True, help="results CSV")
    p.add_argument("--format", default="md", choices=("csv", "md"))
    return parser


def run_command(args) -> int:
    config = load_config(args.config, output_dir=args.out, jobs=args.jobs,
                         seed=args.seed)
    result = run(config)
    print(f"{len(result.rows)} result rows, {len(result.errors)} failed "
          f"units, {len(result.warnings)} skipped; artifacts in "
          f"{result.output_dir}")
    if result.all_failed:
        print("all evaluation units failed", file=sys.stderr)
        return 1
    return 0


def synth_command(args) -> int:
    spec_path = Path(args.spec)
    if not spec_path.is_file():
        raise NotFound(f"no spec file at {spec_path}")
    try:
        doc = json.loads(spec_path.read_text(encoding="utf-8"))
    except ValueError as exc:
        raise InvalidConfig(f"spec is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InvalidConfig("spec must be a JSON object")
    doc = dict(doc)
    dataset_id = doc.pop("id", None)
    freqs = doc.pop("freqs", None)
    paradigm = doc.pop("paradigm", args.paradigm)
    if paradigm != args.paradigm:
        raise InvalidConfig(
            f"--paradigm {args.paradigm} conflicts with spec paradigm {paradigm}")
    try:
        spec = SynthSpec(paradigm=args.paradigm, **doc)
    except TypeError as exc:
        raise InvalidConfig(f"bad spec: {exc}") from exc
    dataset = synth_dataset(
        spec, freqs=tuple(freqs) if freqs is not None else None,
        dataset_id=dataset_id)
    out = save_dataset(Path(args.out), dataset)
    n = sum(len(v) for v in dataset.sessions.values())
    print(f"wrote {n} bundles ({spec.n_subjects} subjects x "
          f"{spec.n_sessions} sessions) to {out}")
    return 0


def stats_command(args) -> int:
    a, b = args.compare
    results_path = Path(args.results)
    rows = read_results_csv(results_path)
    pairs = paired_scores(rows, a, b)
    report = stats_report(pairs, undefined_smd=0.0 if a == b else None)
    out = results_path.parent / "stats.json"
    out.write_bytes(
        (json.dumps(report, sort_keys=True, indent=2) + "\n").encode("utf-8"))
    combined = report["combined"]
    for d in report["datasets"]:
        print(f"{d['dataset_id']}: N={d['n_subjects']} p={d['p_value']:.4g} "
              f"smd={d['smd']:.4g} ({d['method']})")
    print(f"combined: z={combined['z']:.4g} p={combined['p_value']:.4g} "
          f"smd={combined['smd']:.4g}")
    print(f"wrote {out}")
    return 0


def report_command(args) -> int:
    rows = read_results_csv(args.results)
    if args.format == "csv":
        sys.stdout.write(rows_to_csv(rows))
    else:
        sys.stdout.write(render_summary(rows) + "\n")
    return 0


_COMMANDS = {
    "run": run_command,
    "synth": synth_command,
    "stats": stats_command,
    "report": report_command,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except BenchError as exc:
        print(f"bench {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
