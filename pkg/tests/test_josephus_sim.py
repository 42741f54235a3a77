"""Tests for the Josephus simulator, round labels and trace export."""

import json

import pandas as pd
import pytest

from grundy_core import InvalidArgumentError
from josephus_sim import (
    EliminationTrace,
    Engine,
    first_stage,
    jj_by_definition,
    jj_values,
    label_rounds,
    simulate,
    trace_to_csv,
    trace_to_json,
    write_trace,
)

EXAMPLE_ORDER = (3, 6, 9, 2, 7, 1, 8, 5, 10, 4)


# ============================================================================
# Test Fixtures
# ============================================================================

@pytest.fixture
def example_trace() -> EliminationTrace:
    """Circle of 10 with every third number removed."""
    return simulate(10, 3)


# ============================================================================
# Tests
# ============================================================================

class TestSimulate:
    """Tests for simulate."""

    @pytest.mark.parametrize("engine", list(Engine))
    def test_worked_example(self, engine):
        trace = simulate(10, 3, engine)
        assert trace.order == EXAMPLE_ORDER
        assert trace.survivor == 4

    @pytest.mark.parametrize("engine", list(Engine))
    def test_single_number(self, engine):
        for k in (2, 3, 7):
            trace = simulate(1, k, engine)
            assert trace.order == (1,)
            assert trace.survivor == 1

    def test_n5_k2(self):
        trace = simulate(5, 2)
        assert trace.order == (2, 4, 1, 5, 3)
        assert trace.survivor == 3

    def test_engines_agree(self):
        for k in range(2, 11):
            for n in range(1, 501):
                assert simulate(n, k, Engine.NAIVE) == simulate(n, k, Engine.OSTREE), (n, k)

    @pytest.mark.parametrize("k", [10**10, 10**15 + 7])
    def test_naive_with_huge_k(self, k):
        assert simulate(12, k, Engine.NAIVE) == simulate(12, k, Engine.OSTREE)

    def test_order_is_permutation_and_starts_at_k(self):
        for k in range(2, 9):
            for n in range(1, 120):
                trace = simulate(n, k)
                assert sorted(trace.order) == list(range(1, n + 1))
                assert trace.survivor == trace.order[-1]
                if k <= n:
                    assert trace.order[0] == k

    @pytest.mark.parametrize("n, k, message", [
        (0, 3, "n must be >= 1"),
        (5, 1, "k must be >= 2"),
    ])
    def test_invalid_arguments(self, n, k, message):
        with pytest.raises(InvalidArgumentError, match=message):
            simulate(n, k)


class TestJJ:
    """Tests for JJ_k(n, m) by definition."""

    @pytest.mark.parametrize("m, expected", [
        (3, 9),
        (6, 8),
        (5, 2),
        (10, 1),
        (4, 0),
    ])
    def test_worked_example_values(self, m, expected):
        assert jj_by_definition(10, 3, m) == expected

    def test_out_of_range(self):
        with pytest.raises(InvalidArgumentError, match="m must be in 1..10"):
            jj_by_definition(10, 3, 11)

    def test_bijection(self):
        for k in range(2, 6):
            for n in range(1, 60):
                values = jj_values(simulate(n, k))
                assert sorted(values.values()) == list(range(n))
                assert sorted(values) == list(range(1, n + 1))

    def test_position_of(self, example_trace):
        assert example_trace.position_of(3) == 1
        assert example_trace.position_of(4) == 10

    def test_first_stage(self):
        assert first_stage(10, 3) == (3, 6, 9)
        assert first_stage(2, 3) == ()
        trace = simulate(23, 4)
        stage = first_stage(23, 4)
        assert trace.order[:len(stage)] == stage


class TestRounds:
    """Tests for wrap-based round labels."""

    def test_worked_example_rounds(self, example_trace):
        labelled = label_rounds(example_trace)
        rounds = dict(zip(labelled.order, labelled.rounds))
        assert [rounds[m] for m in (3, 6, 9)] == [1, 1, 1]
        assert [rounds[m] for m in (2, 7)] == [2, 2]
        assert [rounds[m] for m in (1, 8)] == [3, 3]
        assert rounds[5] == 4
        # the worked example narrates 10 in a sixth round; wraps put it in the fifth
        assert rounds[10] == 5

    def test_single_number(self):
        assert label_rounds(simulate(1, 5)).rounds == (1,)

    def test_rounds_non_decreasing(self):
        for k in range(2, 8):
            for n in range(1, 80):
                rounds = label_rounds(simulate(n, k)).rounds
                assert len(rounds) == n
                assert all(a <= b for a, b in zip(rounds, rounds[1:]))
                assert rounds[0] == 1 or k > n

    def test_deterministic(self, example_trace):
        assert label_rounds(example_trace) == label_rounds(example_trace)

    def test_rejects_foreign_order(self):
        bogus = EliminationTrace(n=3, k=2, order=(1, 2, 3), survivor=3)
        with pytest.raises(ValueError, match="diverges"):
            label_rounds(bogus)


class TestExport:
    """Tests for CSV and JSON trace export."""

    def test_csv_header_and_rows(self, example_trace):
        text = trace_to_csv(example_trace)
        lines = text.strip().splitlines()
        assert lines[0] == "i,removed,round"
        assert lines[1] == "1,3,1"
        assert len(lines) == 11

    def test_csv_file(self, example_trace, tmp_path):
        path = tmp_path / "nested" / "trace.csv"
        write_trace(example_trace, path)
        frame = pd.read_csv(path)
        assert list(frame.columns) == ["i", "removed", "round"]
        assert tuple(frame["removed"]) == EXAMPLE_ORDER

    def test_json(self, example_trace):
        data = json.loads(trace_to_json(example_trace))
        assert data["n"] == 10
        assert data["k"] == 3
        assert tuple(data["order"]) == EXAMPLE_ORDER
        assert data["survivor"] == 4
        assert len(data["rounds"]) == 10

    def test_json_file_trailing_newline(self, example_trace, tmp_path):
        path = write_trace(example_trace, tmp_path / "trace.json")
        assert path.read_bytes().endswith(b"\n")

    def test_unknown_format(self, example_trace, tmp_path):
        with pytest.raises(InvalidArgumentError, match="unsupported trace format"):
            write_trace(example_trace, tmp_path / "trace.xml")
