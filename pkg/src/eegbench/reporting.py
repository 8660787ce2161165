"""Result serialization and report rendering.

Results travel as flat rows (one per evaluation fold).  The CSV form is
canonical: rows sorted by (dataset, subject, session, pipeline, fold),
UTF-8, LF line endings, decimal-point floats formatted by shortest
round-trip so identical runs produce identical bytes.

Summary tables aggregate subject-first: every subject contributes one
score per (dataset, pipeline) — the mean over their sessions and folds —
and the table reports mean +- std over subjects, scaled by 100.  The best
pipeline per dataset column is bolded, an Average column averages the
per-dataset means, and a rank histogram counts per-unit ranks.

``fixtures/`` holds published reference tables in the same layout,
labeled "reference (not reproduced)"; they exercise the renderer and can
be displayed next to fresh runs, but no local run regenerates them.
"""

from __future__ import annotations

import csv
import io
import json
from collections import defaultdict
from pathlib import Path

import numpy as np

from .errors import IncompleteGrid, InvalidInput, NotFound
from .evaluation import ResultRow, rank_pipelines, sort_rows

CSV_COLUMNS = (
    "dataset", "subject", "session", "pipeline", "fold", "metric", "score",
    "n_train", "n_test", "fit_time_s", "predict_time_s", "energy_wh", "co2_g",
)

_FIXTURE_DIR = Path(__file__).parent / "fixtures"


def _cell(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows) -> str:
    """Canonical CSV text for a set of result rows."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in sort_rows(rows):
        writer.writerow(_cell(getattr(row, c)) for c in CSV_COLUMNS)
    return buf.getvalue()


def write_results_csv(path, rows) -> Path:
    path = Path(path)
    path.write_bytes(rows_to_csv(rows).encode("utf-8"))
    return path


def read_results_csv(path) -> list:
    """Parse a results CSV back into rows."""
    path = Path(path)
    if not path.is_file():
        raise NotFound(f"no results file at {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
            raise InvalidInput(
                f"results file must have columns {','.join(CSV_COLUMNS)}")
        rows = []
        for rec in reader:
            try:
                rows.append(ResultRow(
                    dataset=rec["dataset"], subject=rec["subject"],
                    session=rec["session"], pipeline=rec["pipeline"],
                    fold=int(rec["fold"]), metric=rec["metric"],
                    score=float(rec["score"]), n_train=int(rec["n_train"]),
                    n_test=int(rec["n_test"]),
                    fit_time_s=float(rec["fit_time_s"]),
                    predict_time_s=float(rec["predict_time_s"]),
                    energy_wh=float(rec["energy_wh"]),
                    co2_g=float(rec["co2_g"]),
                ))
            except (KeyError, TypeError, ValueError) as exc:
                raise InvalidInput(f"malformed results row {rec!r}") from exc
    return rows


def subject_scores(rows) -> dict:
    """Per-subject mean score: {dataset: {pipeline: {subject: mean}}}."""
    acc: dict = defaultdict(lambda: defaultdict(lambda: defaultdict(list)))
    for r in rows:
        acc[r.dataset][r.pipeline][r.subject].append(r.score)
    return {
        ds: {pip: {s: float(np.mean(v)) for s, v in subs.items()}
             for pip, subs in pips.items()}
        for ds, pips in acc.items()
    }


def dataset_stats(rows) -> dict:
    """{dataset: {pipeline: (mean, std, n_subjects)}} over subject means."""
    out = {}
    for ds, pips in subject_scores(rows).items():
        stats = {}
        for pip, subs in pips.items():
            v = np.array(sorted(subs.values()))
            sd = float(np.std(v, ddof=1)) if v.size > 1 else 0.0
            stats[pip] = (float(np.mean(v)), sd, v.size)
        out[ds] = stats
    return out


def _fmt_rank(rank: float) -> str:
    return str(int(rank)) if float(rank).is_integer() else f"{rank:g}"


def _md_table(header, body_rows) -> str:
    lines = ["| " + " | ".join(header) + " |",
             "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(r) + " |" for r in body_rows]
    return "\n".join(lines)


def render_score_table(stats) -> str:
    """Markdown score table from {dataset: {pipeline: (mean, std, ...)}}.

    Scores render as percent with two decimals; the per-dataset best mean
    (and the best Average) is bolded.  A closing row holds column means.
    """
    if not stats:
        raise InvalidInput("no scores to summarize")
    datasets = sorted(stats)
    pipelines = sorted({p for pips in stats.values() for p in pips})

    means = {(d, p): stats[d][p][0]
             for d in datasets for p in stats[d]}
    averages = {
        p: float(np.mean([means[(d, p)] for d in datasets if (d, p) in means]))
        for p in pipelines
    }
    best = {d: max(v[0] for v in stats[d].values()) for d in datasets}
    best["Average"] = max(averages.values())

    body = []
    for p in pipelines:
        cells = [p]
        for d in datasets:
            if (d, p) not in means:
                cells.append("")
                continue
            mean, sd = stats[d][p][0], stats[d][p][1]
            txt = f"{100 * mean:.2f} ± {100 * sd:.2f}"
            cells.append(f"**{txt}**" if mean == best[d] else txt)
        avg_txt = f"{100 * averages[p]:.2f}"
        cells.append(f"**{avg_txt}**" if averages[p] == best["Average"]
                     else avg_txt)
        body.append(cells)
    closing = ["Average"]
    for d in datasets:
        col = [means[(d, p)] for p in pipelines if (d, p) in means]
        closing.append(f"{100 * float(np.mean(col)):.2f}")
    closing.append(f"{100 * float(np.mean(list(averages.values()))):.2f}")
    body.append(closing)
    return _md_table(["pipeline"] + datasets + ["Average"], body)


def render_rank_table(ranks) -> str:
    """Markdown histogram from {pipeline: {rank: count}}."""
    if not ranks:
        raise InvalidInput("no ranks to summarize")
    levels = sorted({r for hist in ranks.values() for r in hist})
    header = ["pipeline"] + [_fmt_rank(r) for r in levels]
    body = [[p] + [str(hist.get(r, 0)) for r in levels]
            for p, hist in sorted(ranks.items())]
    return _md_table(header, body)


def render_summary(rows) -> str:
    """Full markdown summary for a set of result rows."""
    rows = list(rows)
    if not rows:
        raise InvalidInput("no result rows to summarize")
    metrics = ", ".join(sorted({r.metric for r in rows}))
    try:
        rank_section = render_rank_table(rank_pipelines(rows))
    except IncompleteGrid as exc:
        rank_section = f"Not available: {exc}"
    parts = [
        "# Benchmark summary",
        "",
        f"Metric: {metrics}. Cells are mean ± std over subjects, × 100;",
        "each subject counts once per dataset (sessions and folds averaged),",
        "and the best pipeline per column is bolded.",
        "",
        "## Scores",
        "",
        render_score_table(dataset_stats(rows)),
        "",
        "## Rank histogram",
        "",
        rank_section,
        "",
    ]
    return "\n".join(parts)


def fixture_names() -> list:
    return sorted(p.stem for p in _FIXTURE_DIR.glob("*.json"))


def load_fixture(name: str) -> dict:
    """A stored reference table (see module docstring)."""
    path = _FIXTURE_DIR / f"{name}.json"
    if not path.is_file():
        raise NotFound(
            f"no fixture {name!r}; available: {', '.join(fixture_names())}")
    return json.loads(path.read_text(encoding="utf-8"))


def fixture_stats(doc: dict) -> dict:
    """Stored percent scores -> renderer input (fraction means/stds)."""
    out: dict = {d: {} for d in doc["datasets"]}
    for row in doc["rows"]:
        for d, cell in row["scores"].items():
            out[d][row["pipeline"]] = (cell["mean"] / 100.0,
                                       cell["std"] / 100.0, 0)
    return out
