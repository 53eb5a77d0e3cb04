"""Report serialization."""

import json

import numpy as np

from dualcr.report import Report, SCHEMA_VERSION


def test_json_round_trip():
    rep = Report(command="demo", surface="sphere", grid="8")
    rep.add("a", "a-label", 1e-12, 1e-8)
    rep.add("b", "b-label", 2.0, 1e-8, value=1 + 2j,
            arr=np.array([1.0, 2.0]))
    data = json.loads(rep.finish().to_json())
    assert data["version"] == SCHEMA_VERSION
    assert data["passed"] is False
    assert data["checks"][0]["verdict"] is True
    assert data["checks"][1]["detail"]["value"] == {"re": 1.0, "im": 2.0}
    assert data["checks"][1]["detail"]["arr"] == [1.0, 2.0]


def test_auto_verdict_and_csv():
    rep = Report(command="demo")
    rep.add("ok", "l", 0.5, 1.0)
    rep.add("bad", "l", 2.0, 1.0)
    assert rep.checks[0].verdict and not rep.checks[1].verdict
    csv_text = rep.to_csv()
    lines = csv_text.strip().splitlines()
    assert lines[0].startswith("name,label")
    assert len(lines) == 3
