import math
import xml.etree.ElementTree as ET

import numpy as np

from graphonlab import report


def test_fmt_round_trip():
    for v in (0.1, 1 / 3, 2.9237815252063252, 1e-300, -7.5):
        assert float(report.fmt(v)) == v
    assert report.fmt(None) == "" and report.fmt(math.nan) == ""
    assert report.fmt(True) == "true" and report.fmt(np.int64(3)) == "3"


def test_csv_rfc4180(tmp_path):
    p = tmp_path / "t.csv"
    report.write_csv(p, ["a", "b"], [{"a": 1.5, "b": "x,y"}, [None, 'q"t']])
    raw = p.read_bytes()
    assert raw.startswith(b"a,b\r\n")
    assert b'"x,y"' in raw and b'"q""t"' in raw
    rows = report.read_csv(p)
    assert rows == [{"a": "1.5", "b": "x,y"}, {"a": "", "b": 'q"t'}]


def test_line_chart_valid_svg(tmp_path):
    p = tmp_path / "c.svg"
    series = [{"label": "a", "x": [10, 100, 1000], "y": [1.0, 0.1, 0.01]},
              {"label": "b", "x": [10, 100, 1000], "y": [2.0, float("nan"), 0.5],
               "dash": True}]
    report.line_chart(p, series, title="t <&>", xlabel="n", ylabel="y", log_x=True, log_y=True)
    root = ET.parse(p).getroot()
    assert root.tag.endswith("svg")
    assert "t &lt;&amp;&gt;" in p.read_text()


def test_heatmap_valid_svg(tmp_path):
    p = tmp_path / "h.svg"
    report.heatmap(p, np.outer(np.linspace(0, 1, 200), np.linspace(0, 1, 200)), title="h")
    root = ET.parse(p).getroot()
    rects = [e for e in root.iter() if e.tag.endswith("rect")]
    # 200 rows block-average by 3 to 66 cells per side; 11 extra rects for
    # the background and legend
    assert len(rects) == 66 * 66 + 11
