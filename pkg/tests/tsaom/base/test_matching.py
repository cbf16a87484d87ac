"""Tests for partial matching of names."""

import pytest

from tsaom.base.matching import match_arg, match_enum, pmatch
from tsaom.heuristics import AlgorithmKind
from tsaom.transvections import TransvectionClass

CLASSES = ["general", "unconstrained", "commuting", "unique_source", "unique_destination"]


class TestPmatch:
    @pytest.mark.parametrize(
        ("query", "expected"),
        [
            ("commuting", 2),
            ("comm", 2),
            ("unique", -1),
            ("unique_s", 3),
            ("xyz", None),
            ("", None),
        ],
    )
    def test_pmatch_scenarios(self, query, expected):
        assert pmatch(query, CLASSES) == expected

    def test_exact_match_wins_over_longer_choices(self):
        assert pmatch("ea", ["ea10", "ea"]) == 1


class TestMatchArg:
    @pytest.mark.parametrize(
        ("arg", "expected"),
        [("general", "general"), ("gen", "general"), ("unique_d", "unique_destination")],
    )
    def test_single(self, arg, expected):
        assert match_arg(arg, CLASSES) == expected

    def test_no_match_lists_choices(self):
        with pytest.raises(ValueError, match="Available choices are: general"):
            match_arg("spectral", CLASSES)

    def test_ambiguous(self):
        with pytest.raises(ValueError, match="matches multiple choices"):
            match_arg("unique", CLASSES)

    def test_several_ok_returns_all_partial_matches(self):
        assert match_arg("unique", CLASSES, several_ok=True) == [
            "unique_source",
            "unique_destination",
        ]

    def test_iterable_needs_several_ok(self):
        with pytest.raises(ValueError, match="several_ok=True"):
            match_arg(["gen", "comm"], CLASSES)

    def test_iterable(self):
        assert match_arg(["gen", "comm"], CLASSES, several_ok=True) == ["general", "commuting"]

    def test_iterable_reports_failing_element(self):
        with pytest.raises(ValueError, match="element 1"):
            match_arg(["gen", "nope"], CLASSES, several_ok=True)

    def test_duplicate_choices_are_dropped(self):
        assert match_arg("gen", ["general", "general"]) == "general"


class TestMatchEnum:
    @pytest.mark.parametrize(
        ("arg", "expected"),
        [
            ("disj", TransvectionClass.DISJOINT),
            ("noncomm", TransvectionClass.NONCOMMUTING_CONSECUTIVE),
            (TransvectionClass.COMMUTING, TransvectionClass.COMMUTING),
        ],
    )
    def test_transvection_classes(self, arg, expected):
        assert match_enum(arg, TransvectionClass) is expected

    def test_exact_value_is_preferred(self):
        assert match_enum("ea", AlgorithmKind) is AlgorithmKind.EA
        assert match_enum("ea1", AlgorithmKind) is AlgorithmKind.EA10

    def test_ambiguous_prefix(self):
        with pytest.raises(ValueError, match="multiple"):
            match_enum("r", AlgorithmKind)
