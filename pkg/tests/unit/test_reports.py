"""Unit tests for reports module."""

import json
from fractions import Fraction

import pytest

from src.errors import HypergraphFormatError
from src.reports import (
    BoundReport,
    format_rational,
    jsonable,
    parse_rational,
    reports_to_csv,
    reports_to_json,
    rows_to_csv,
)


@pytest.fixture
def report():
    return BoundReport(
        "lb_gamma", Fraction(25, 3), "gamma*(n-|V|)+|E|-1", n=6, witness={"m": 1}
    )


def test_format_and_parse_rational():
    assert format_rational(Fraction(8, 3)) == "8/3"
    assert format_rational(4) == "4/1"
    assert parse_rational("-13/3") == Fraction(-13, 3)
    assert parse_rational(7) == 7
    with pytest.raises(HypergraphFormatError):
        parse_rational("one half")
    with pytest.raises(HypergraphFormatError):
        parse_rational(True)


def test_bound_report(report):
    assert report.ceiling == 9
    assert report.to_dict()["value"] == "25/3"
    assert report.to_dict()["status"] == "exact"


def test_reports_to_json(report):
    payload = json.loads(reports_to_json([report], {"pattern": "K4"}))

    assert payload["pattern"] == "K4"
    assert payload["reports"][0]["witness"] == {"m": 1}

    keyed = json.loads(reports_to_json([report], key="result"))
    assert keyed["result"][0]["value"] == "25/3"
    assert "reports" not in keyed


def test_reports_to_csv(report):
    lines = reports_to_csv([report]).splitlines()

    assert lines[0] == "name,value,n,formula,witness,status"
    assert lines[1].startswith("lb_gamma,25/3,6,")


def test_rows_to_csv():
    text = rows_to_csv([{"n": 5, "gap": Fraction(1, 2)}, {"n": 6, "gap": None}])

    assert text.splitlines() == ["n,gap", "5,1/2", "6,"]
    assert rows_to_csv([]) == ""


def test_jsonable(report):
    data = jsonable({"bounds": (report, Fraction(3, 2)), "count": 2})

    assert data == {"bounds": [report.to_dict(), "3/2"], "count": 2}
