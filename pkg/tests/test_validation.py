"""
Input validation tests.

Validators return (is_valid, error_message, cleaned_value) tuples.
"""

from fractions import Fraction

import pytest

from app.utils.validation import (
    MAX_SEED,
    validate_density,
    validate_edges,
    validate_node_count,
    validate_params,
    validate_positive_int,
    validate_rational,
    validate_seed,
    validate_step,
)


class TestNodeCount:
    """Test node count validation."""

    @pytest.mark.parametrize("value, expected", [(4, 4), ("10", 10), (" 6 ", 6)])
    def test_valid(self, value, expected):
        assert validate_node_count(value) == (True, "", expected)

    @pytest.mark.parametrize("value", [0, "x", None, True, 65])
    def test_invalid(self, value):
        is_valid, error, cleaned = validate_node_count(value)
        assert not is_valid
        assert error
        assert cleaned is None

    def test_minimum(self):
        assert not validate_node_count(1, minimum=2)[0]


class TestParams:
    """Test delta/cost validation."""

    def test_valid(self):
        is_valid, _, params = validate_params("1/2", "0.3")
        assert is_valid
        assert params.cost == Fraction(3, 10)

    @pytest.mark.parametrize("delta, cost", [(None, "1/2"), ("1/2", "abc"), ("1", "1/2"), ("1/2", "0")])
    def test_invalid(self, delta, cost):
        assert not validate_params(delta, cost)[0]

    def test_relaxed_upper_bound(self):
        assert validate_params("1", "1", relaxed=True)[0]


class TestGridValues:
    """Test density, step and rational validation."""

    @pytest.mark.parametrize(
        "value, valid", [("0", True), ("7/10", True), ("1", True), ("-1/10", False), ("3/2", False)]
    )
    def test_density(self, value, valid):
        assert validate_density(value)[0] is valid

    @pytest.mark.parametrize(
        "value, valid", [("1/20", True), ("0.25", True), ("1", True), ("3/10", False), ("0", False)]
    )
    def test_step(self, value, valid):
        assert validate_step(value)[0] is valid

    def test_rational_required(self):
        assert validate_rational(None, "tau")[1] == "tau is required"


class TestIntegers:
    """Test positive integers and seeds."""

    def test_positive_int(self):
        assert validate_positive_int("5", "reps", 10) == (True, "", 5)
        assert not validate_positive_int("0", "reps", 10)[0]
        assert not validate_positive_int("11", "reps", 10)[0]

    def test_seed(self):
        assert validate_seed("0x10") == (True, "", 16)
        assert validate_seed(MAX_SEED)[0]
        assert not validate_seed(-1)[0]
        assert not validate_seed("seed")[0]


class TestEdges:
    """Test JSON edge list validation."""

    def test_valid(self):
        is_valid, _, graph = validate_edges(4, [[0, 1], [2, 3]])
        assert is_valid
        assert graph.edges == [(0, 1), (2, 3)]

    @pytest.mark.parametrize(
        "edges",
        [None, [[0]], [[0, "1"]], [[0, True]], [[0, 4]], [[1, 1]], [[0, 1], [1, 0]]],
    )
    def test_invalid(self, edges):
        is_valid, error, graph = validate_edges(4, edges)
        assert not is_valid
        assert error
        assert graph is None
