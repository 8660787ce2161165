"""Result serialization, aggregation, markdown rendering, and fixtures."""

import dataclasses

import numpy as np
import pytest

from eegbench.errors import InvalidInput, NotFound
from eegbench.evaluation import ResultRow
from eegbench.reporting import (
    CSV_COLUMNS,
    dataset_stats,
    fixture_names,
    fixture_stats,
    load_fixture,
    read_results_csv,
    render_rank_table,
    render_score_table,
    render_summary,
    rows_to_csv,
    subject_scores,
    write_results_csv,
)


def make_row(**kw):
    base = dict(dataset="d", subject="01", session="s0", pipeline="p", fold=0,
                metric="roc_auc", score=0.5, n_train=8, n_test=2,
                fit_time_s=0.1, predict_time_s=0.05, energy_wh=0.001,
                co2_g=0.0005)
    base.update(kw)
    return ResultRow(**base)


class TestCsv:
    def test_header_and_row_layout(self):
        text = rows_to_csv([make_row()])
        lines = text.splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 2
        assert text.endswith("\n")
        assert "\r" not in text

    def test_rows_sorted_canonically(self):
        rows = [make_row(dataset="b"), make_row(dataset="a", fold=1),
                make_row(dataset="a", fold=0)]
        lines = rows_to_csv(rows).splitlines()[1:]
        assert [l.split(",")[0] for l in lines] == ["a", "a", "b"]
        assert [l.split(",")[4] for l in lines][:2] == ["0", "1"]

    def test_float_cells_survive_round_trip_exactly(self, tmp_path):
        rows = [make_row(score=1 / 3, energy_wh=0.1 + 0.2)]
        path = write_results_csv(tmp_path / "results.csv", rows)
        back = read_results_csv(path)
        assert back == rows

    def test_serialization_deterministic(self):
        rows = [make_row(fold=i, score=i / 7) for i in range(5)]
        assert rows_to_csv(rows) == rows_to_csv(list(reversed(rows)))

    def test_read_missing_file(self, tmp_path):
        with pytest.raises(NotFound):
            read_results_csv(tmp_path / "none.csv")

    def test_read_rejects_wrong_header(self, tmp_path):
        p = tmp_path / "r.csv"
        p.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(InvalidInput):
            read_results_csv(p)

    def test_read_rejects_malformed_row(self, tmp_path):
        p = tmp_path / "r.csv"
        good = rows_to_csv([make_row()])
        p.write_text(good + "only,three,cells\n")
        with pytest.raises(InvalidInput):
            read_results_csv(p)
        p.write_text(good.replace("0.5", "not-a-number"))
        with pytest.raises(InvalidInput):
            read_results_csv(p)


class TestAggregation:
    def rows(self):
        return [
            make_row(subject="01", session="s0", fold=0, score=0.8),
            make_row(subject="01", session="s0", fold=1, score=0.6),
            make_row(subject="01", session="s1", fold=0, score=0.7),
            make_row(subject="02", session="s0", fold=0, score=0.9),
        ]

    def test_subject_scores_average_sessions_and_folds(self):
        scores = subject_scores(self.rows())
        assert scores["d"]["p"]["01"] == pytest.approx(0.7)
        assert scores["d"]["p"]["02"] == pytest.approx(0.9)

    def test_dataset_stats(self):
        stats = dataset_stats(self.rows())
        mean, sd, n = stats["d"]["p"]
        assert mean == pytest.approx(0.8)
        assert sd == pytest.approx(np.std([0.7, 0.9], ddof=1))
        assert n == 2

    def test_single_subject_std_zero(self):
        stats = dataset_stats([make_row()])
        assert stats["d"]["p"][1] == 0.0


class TestScoreTable:
    def test_layout_and_bolding(self):
        stats = {
            "d1": {"a": (0.70, 0.10, 3), "b": (0.60, 0.05, 3)},
            "d2": {"a": (0.50, 0.10, 3), "b": (0.80, 0.05, 3)},
        }
        table = render_score_table(stats).splitlines()
        assert table[0] == "| pipeline | d1 | d2 | Average |"
        row_a = table[2]
        row_b = table[3]
        assert "**70.00 ± 10.00**" in row_a and "50.00 ± 10.00" in row_a
        assert "**80.00 ± 5.00**" in row_b
        # averages: a 60.00, b 70.00 -> b bolded
        assert row_a.endswith("| 60.00 |")
        assert row_b.endswith("| **70.00** |")
        assert table[-1] == "| Average | 65.00 | 65.00 | 65.00 |"

    def test_missing_cells_render_empty(self):
        stats = {"d1": {"a": (0.7, 0.1, 3)}, "d2": {"b": (0.6, 0.1, 3)}}
        table = render_score_table(stats)
        assert "|  |" in table  # pipeline absent from one dataset

    def test_empty_stats_rejected(self):
        with pytest.raises(InvalidInput):
            render_score_table({})


class TestRankTable:
    def test_histogram_layout(self):
        ranks = {"a": {1: 2, 2.5: 1}, "b": {2.5: 2, 1: 1}}
        table = render_rank_table(ranks).splitlines()
        assert table[0] == "| pipeline | 1 | 2.5 |"
        assert table[2] == "| a | 2 | 1 |"
        assert table[3] == "| b | 1 | 2 |"

    def test_empty_rejected(self):
        with pytest.raises(InvalidInput):
            render_rank_table({})


class TestSummary:
    def test_contains_sections(self):
        rows = [make_row(pipeline=p, subject=s, score=x)
                for p, x in (("a", 0.8), ("b", 0.6))
                for s, x in (("01", x), ("02", x - 0.05))]
        text = render_summary(rows)
        assert "## Scores" in text and "## Rank histogram" in text
        assert "| a |" in text

    def test_incomplete_grid_degrades_gracefully(self):
        rows = [make_row(pipeline="a", subject="01"),
                make_row(pipeline="b", subject="01"),
                make_row(pipeline="a", subject="02")]
        text = render_summary(rows)
        assert "Not available:" in text
        assert "## Scores" in text

    def test_empty_rejected(self):
        with pytest.raises(InvalidInput):
            render_summary([])


class TestFixtures:
    def test_inventory(self):
        assert fixture_names() == ["within_erp", "within_mi_all",
                                   "within_mi_lhrh", "within_mi_rhf",
                                   "within_ssvep"]

    def test_unknown_fixture(self):
        with pytest.raises(NotFound) as err:
            load_fixture("within_meg")
        assert "within_mi_all" in str(err.value)

    def test_fixtures_are_labeled_as_reference(self):
        for name in fixture_names():
            doc = load_fixture(name)
            assert doc["label"] == "reference (not reproduced)"
            assert doc["datasets"]
            assert doc["rows"]

    def test_fixture_stats_converts_percent_to_fractions(self):
        doc = load_fixture("within_mi_all")
        stats = fixture_stats(doc)
        row = next(r for r in doc["rows"] if r["pipeline"] == "TS+EL")
        for d, cell in row["scores"].items():
            mean, sd, n = stats[d]["TS+EL"]
            assert mean == pytest.approx(cell["mean"] / 100.0)
            assert sd == pytest.approx(cell["std"] / 100.0)
            assert n == 0  # subject counts are not part of the stored table

    def test_reference_table_renders_with_stored_bolding(self):
        doc = load_fixture("within_mi_all")
        table = render_score_table(fixture_stats(doc))
        lines = {l.split(" | ")[0].strip("| "): l for l in table.splitlines()}
        datasets = doc["datasets"]
        for row in doc["rows"]:
            cells = lines[row["pipeline"]].split(" | ")[1:]
            for d, cell in zip(datasets, cells):
                assert cell.startswith("**") == (d in row["bold"])

    def test_reference_average_column(self):
        doc = load_fixture("within_mi_all")
        table = render_score_table(fixture_stats(doc))
        ts_el = next(l for l in table.splitlines() if l.startswith("| TS+EL"))
        assert ts_el.rstrip(" |").endswith("**72.67**")
