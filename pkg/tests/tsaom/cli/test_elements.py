"""Tests for the status messages, styles and symbols of the command line."""

import sys
from io import StringIO

import pytest

from tsaom.cli import elements, styles, symbols


class StderrWithNoneEncoding(StringIO):
    encoding = None  # type: ignore[assignment]


@pytest.fixture
def ascii_stderr(monkeypatch):
    stream = StderrWithNoneEncoding()
    monkeypatch.setattr(sys, "stderr", stream)
    monkeypatch.delenv("FORCE_COLOR", raising=False)
    return stream


class TestStyles:
    @pytest.mark.parametrize("style_func", [styles.bold, styles.green, styles.red, styles.blue])
    def test_forced_color(self, monkeypatch, style_func):
        monkeypatch.delenv("NO_COLOR", raising=False)
        monkeypatch.setenv("FORCE_COLOR", "1")
        result = style_func("test")
        assert result != "test"
        assert result.endswith("\033[0m")

    @pytest.mark.parametrize("style_func", [styles.bold, styles.green, styles.yellow])
    def test_no_color(self, monkeypatch, style_func):
        monkeypatch.setenv("NO_COLOR", "1")
        monkeypatch.setenv("FORCE_COLOR", "1")
        assert style_func("test") == "test"

    def test_not_a_terminal(self, ascii_stderr, monkeypatch):
        monkeypatch.delenv("NO_COLOR", raising=False)
        assert not styles.supports_color()
        assert styles.bold("test") == "test"

    def test_unknown_color(self):
        with pytest.raises(ValueError, match="Unknown color"):
            styles.color("test", "purple")  # type: ignore[arg-type]


class TestSymbols:
    @pytest.mark.parametrize(
        ("name", "expected"),
        [("tick", "v"), ("cross", "x"), ("warning", "!"), ("info", "i"), ("bullet", "*")],
    )
    def test_ascii_fallback(self, ascii_stderr, name, expected):
        assert symbols.symbol(name) == expected

    def test_ascii_only(self, monkeypatch):
        monkeypatch.setenv("ASCII_ONLY", "1")
        assert symbols.symbol("line") == "-"

    def test_unknown_symbol(self):
        with pytest.raises(ValueError, match="Unknown symbol"):
            symbols.symbol("star")  # type: ignore[arg-type]


class TestElements:
    @pytest.mark.parametrize(
        ("alert_func", "mark"),
        [
            (elements.alert_success, "v"),
            (elements.alert_danger, "x"),
            (elements.alert_warning, "!"),
            (elements.alert_info, "i"),
        ],
    )
    def test_alerts_go_to_stderr(self, ascii_stderr, alert_func, mark):
        alert_func("message")
        assert ascii_stderr.getvalue() == f"{mark} message\n"

    def test_heading(self, ascii_stderr):
        elements.h2("bench")
        assert ascii_stderr.getvalue() == "\n-- bench --\n\n"

    def test_bullets_with_list(self, ascii_stderr):
        elements.bullets(["first", 42, True])
        assert ascii_stderr.getvalue() == "  * first\n  * 42\n  * True\n"

    def test_bullets_with_dict(self, ascii_stderr):
        elements.bullets({"rows": 15, "files": ["a.csv", "b.csv"]})
        assert ascii_stderr.getvalue() == "  * rows: 15\n  * files: a.csv, b.csv\n"

    def test_nothing_on_stdout(self, capsys):
        elements.alert_info("message")
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "message" in captured.err
