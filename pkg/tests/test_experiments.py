import csv
import io
import json
import math
from fractions import Fraction

import pytest

from modres import Graph
from modres.charsums import prob_symmetric
from modres.experiments import (ExperimentConfig, expectation_reference, run)


def rows_of(record):
    return list(csv.DictReader(io.StringIO(record.to_csv())))


def test_expectation_reference_is_exact_product():
    ref = expectation_reference(14, 6, 3, 0)
    assert ref == pytest.approx(math.comb(14, 6) * float(prob_symmetric((0,) * 6, 3).value))
    assert expectation_reference(8, 3, 2, 1) == 0


def test_single_trial_summary():
    rec = run(ExperimentConfig(kind="expect", n=10, k=4, q=2, r=0, trials=1, seed=3))
    assert rec.summary["mean"] == rec.rows[0]["value"]
    assert rec.summary["se"] == 0


def test_summary_recomputes_from_rows():
    rec = run(ExperimentConfig(kind="expect", n=12, k=4, q=2, r=0, trials=40, seed=5))
    trial_rows = [r for r in rows_of(rec) if r["row"] == "trial"]
    values = [int(r["value"]) for r in trial_rows]
    assert rec.summary["mean"] == float(Fraction(sum(values), len(values)))
    assert [int(r["trial"]) for r in trial_rows] == list(range(40))


def test_scan_reference_k():
    rec = run(ExperimentConfig(kind="scan", n=10, q=3, r=0, trials=5, seed=1))
    assert all(row["k"] == 5 for row in rec.rows)
    assert sum(rec.summary["diff_distribution"].values()) == 5


def test_partition_exact_gallai():
    rec = run(ExperimentConfig(kind="partition", mode="exact", n=9, q=2, r=0, cap=2,
                               trials=60, seed=2))
    assert rec.summary["success_rate"] == 1.0 and rec.summary["verified_all"] == 1


def test_partition_exact_empty_graph():
    rec = run(ExperimentConfig(kind="partition", mode="exact", n=6, q=5, r=0, cap=2,
                               graph=Graph.empty(6), trials=1))
    assert rec.rows[0]["value"] == 1


def test_partition_heuristic_rows_verified():
    rec = run(ExperimentConfig(kind="partition", mode="heuristic", n=14, q=2, r=0, t=3,
                               trials=4, seed=1))
    for row in rec.rows:
        assert row["verified"] == row["success"]


def test_decay_sum_mode_within_bound():
    rec = run(ExperimentConfig(kind="decay", q=3, mode="sum", n_min=1, n_max=30))
    assert rec.summary["all_within_bound"] == 1
    assert len(rec.rows) == 30


def test_decay_symmetric_slope():
    rec = run(ExperimentConfig(kind="decay", q=3, mode="symmetric", n_min=4, n_max=7))
    assert rec.summary["log_slope"] < 0


def test_json_output_parses():
    rec = run(ExperimentConfig(kind="expect", n=8, k=3, q=3, r=0, trials=3, seed=0))
    doc = json.loads(rec.to_json())
    assert len(doc["rows"]) == 3 and "summary" in doc
