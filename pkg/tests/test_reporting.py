import json
from fractions import Fraction

import pytest

from src.graph_core import Side
from src.reporting import RunReport, dyadic_parts, render_json, render_text, to_jsonable


def test_dyadic_parts():
    assert dyadic_parts(Fraction(3, 4)) == {"numerator": 3, "exponent": 2}
    assert dyadic_parts(Fraction(5)) == {"numerator": 5, "exponent": 0}
    with pytest.raises(ValueError):
        dyadic_parts(Fraction(1, 3))


def test_to_jsonable_handles_nested_values():
    value = {"sides": (Side.LEFT, Side.RIGHT), "mass": [Fraction(1, 2)], 3: None}
    assert to_jsonable(value) == {
        "sides": ["left", "right"],
        "mass": [{"numerator": 1, "exponent": 1}],
        "3": None,
    }


def test_payload_excludes_timings():
    report = RunReport(command="bounds colors", results={"b": 2, "a": Fraction(1, 4)})
    with report.phase("work"):
        pass
    assert "work" in report.timings
    assert "timings" not in report.payload()
    data = json.loads(render_json(report))
    assert data["results"]["a"] == {"numerator": 1, "exponent": 2}
    assert list(json.loads(render_json(report, include_timings=False))) == sorted(
        ["schema", "command", "seed", "inputs", "results"]
    )


def test_render_text_tables():
    report = RunReport(command="peel", results={"rounds": [{"n": 4, "w": 8}], "k": 4})
    text = render_text(report)
    assert text.startswith("[peel]\n")
    assert "k: 4" in text
    assert "rounds:" in text
