import csv
import io
import json
import math

import numpy as np
import pytest

from nicolas_lab import error_term, nicolas, prime_zeta, scanner, summatory
from nicolas_lab.errors import DomainError, RangeError
from nicolas_lab.scanner import CSV_COLUMNS, ScanConfig, first_holding, scan


@pytest.fixture(scope="module")
def small():
    return scan(ScanConfig(10, 100, prime_limit_for_tails=10**6))


@pytest.fixture(scope="module")
def medium():
    return scan(ScanConfig(3, 10**5, prime_limit_for_tails=10**6))


def test_every_prime_rows(small):
    assert len(small) == 22
    assert small.columns["x"].tolist() == [10] + [int(p) for p in summatory.primes_to(100) if p > 10]


def test_geometric_rows():
    cfg = ScanConfig(10, 10**5, checkpoint_mode="geometric", ratio=10.0)
    assert cfg.checkpoints().tolist() == [10, 100, 1000, 10**4, 10**5]
    assert len(scan(cfg, thresholds=False)) == 5


def test_explicit_points():
    cfg = ScanConfig(10, 1000, checkpoint_mode="explicit", points=(500, 10, 500, 77))
    assert cfg.checkpoints().tolist() == [10, 77, 500]


@pytest.mark.parametrize("kwargs, exc", [
    ({"x_min": 2, "x_max": 10}, DomainError),
    ({"x_min": 10, "x_max": 10}, DomainError),
    ({"x_min": 10, "x_max": 20, "checkpoint_mode": "bogus"}, DomainError),
    ({"x_min": 10, "x_max": 20, "checkpoint_mode": "geometric", "ratio": 1.0}, DomainError),
    ({"x_min": 10, "x_max": 20, "output_format": "xml"}, DomainError),
    ({"x_min": 10, "x_max": 20, "checkpoint_mode": "explicit", "points": (30,)}, DomainError),
    ({"x_min": 10, "x_max": 2**40}, RangeError),
])
def test_config_errors(kwargs, exc):
    with pytest.raises(exc):
        ScanConfig(**kwargs)


def test_columns_match_pointwise(small):
    for row in small.rows():
        x = row.x
        assert row.theta == pytest.approx(summatory.theta(x), rel=1e-15)
        assert row.psi == pytest.approx(summatory.psi(x), rel=1e-15)
        assert row.S == pytest.approx(summatory.prime_reciprocal_sum(x), rel=1e-15)
        assert row.R == pytest.approx(summatory.R(x), abs=1e-14)
        assert row.E.value == pytest.approx(error_term.E(x), abs=1e-14)
        assert row.B.value == pytest.approx(prime_zeta.B(x, 10**6).value, abs=1e-14)
        assert row.margin == pytest.approx(nicolas.nicolas_margin(x), abs=1e-13)
        assert row.nicolas_holds
        assert row.theta_minus_x_sign == -1


def test_monotone_columns(medium):
    c = medium.columns
    assert np.all(np.diff(c["theta"]) > 0)
    assert np.all(np.diff(c["psi"]) >= 0)
    assert np.all(np.diff(c["S"]) > 0)
    assert np.all(c["B_value"] < 0)
    assert np.all(np.diff(c["B_value"]) > 0)
    assert np.all(c["theta"] <= c["psi"])


def test_verdicts(medium):
    for v in medium.reproduction_verdicts:
        assert v.passed, v.name
    assert medium.sign_events == []
    with pytest.raises(KeyError):
        medium.verdict("nope")


def test_thresholds(medium):
    t = medium.empirical_thresholds
    assert t["theta_below_x"].held_from_start
    assert t["R_window"].held_from_start
    assert t["E_log_window"].held_from_start
    assert t["frac_ratio_window"].first_x is not None


def test_first_holding():
    xs = np.array([1, 2, 3, 4, 5])
    assert first_holding("a", xs, [True] * 5).first_x == 1
    t = first_holding("b", xs, [True, False, True, False, True])
    assert (t.first_x, t.failures, t.held_from_start) == (5, 2, False)
    assert first_holding("c", xs, [True, True, True, True, False]).first_x is None
    assert first_holding("d", xs[:0], []).evaluated == 0


def test_sign_event_detection_synthetic():
    xs = np.array([10, 11, 13, 17, 19])
    events, flagged = scanner._sign_events("E", xs, [1, 1, -1, 0, 1], [False, False, False, True, False])
    assert [(e.x, e.old_sign, e.new_sign) for e in events] == [(13, 1, -1), (19, -1, 1)]
    assert flagged == [("E", 17)]


def test_csv_schema(small):
    text = small.to_csv()
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == list(CSV_COLUMNS)
    assert len(rows) == 22
    assert rows[0]["x"] == "10"
    assert rows[0]["nicolas_holds"] == "true"
    assert rows[0]["corollary_branch"] == "II_applies_holds"
    assert float(rows[0]["theta"]) == small.columns["theta"][0]


def test_json_schema(small):
    data = json.loads(small.to_json())
    assert len(data) == 22
    assert list(data[0]) == list(CSV_COLUMNS)
    assert data[0]["nicolas_holds"] is True
    assert data[0]["theta"] == small.columns["theta"][0]


def test_precision_digits(small):
    first = small.to_csv(6).splitlines()[1].split(",")
    assert first[1] == f"{math.log(210):.6g}"


def test_json_null_for_infinite_margin():
    cols, _, _ = scanner.evaluate(np.array([2]), 10**6)
    assert math.isinf(cols["margin"][0])
    data = json.loads(scanner.format_json(cols))
    assert data[0]["margin"] is None
    assert data[0]["S"] == 0.5


def test_checkpoint_row():
    row = scanner.checkpoint(2)
    assert row.theta == pytest.approx(math.log(2))
    assert row.S == 0.5
    with pytest.raises(DomainError):
        scanner.checkpoint(1)


def test_threads_and_shards_identical():
    cfg = ScanConfig(1000, 200000)
    seq = scan(cfg, thresholds=False)
    par = scan(cfg, threads=3, thresholds=False)
    assert seq.to_csv() == par.to_csv()
    first = scan(ScanConfig(1000, 77777), thresholds=False)
    second = scan(ScanConfig(77777, 200000), carry=first.state, thresholds=False)
    for col in CSV_COLUMNS:
        joined = np.concatenate([first.columns[col], second.columns[col]])
        ref = seq.columns[col]
        if col == "B_value":
            # The tail sum over (x, L] is regrouped per shard.
            np.testing.assert_allclose(joined, ref, rtol=1e-12, atol=0)
        else:
            np.testing.assert_array_equal(joined, ref)
