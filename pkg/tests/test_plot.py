import re
import xml.etree.ElementTree as ET

import pytest

from kdecomp.codec import TupleDataset
from kdecomp.plot import scatter_svg, write_scatter


def test_corners_map_to_plot_frame():
    svg = scatter_svg(TupleDataset.from_rows([[-1, -1], [1, 1], [0, 0]]), "x", "t")
    circles = re.findall(r'cx="([\d.]+)" cy="([\d.]+)"', svg)
    assert circles == [("40.00", "380.00"), ("380.00", "40.00"), ("210.00", "210.00")]


def test_svg_is_well_formed():
    svg = scatter_svg(TupleDataset.from_rows([[0.25, -0.5]]), "x<", "t&", "title")
    root = ET.fromstring(svg.encode())
    assert root.tag.endswith("svg")
    assert "x&lt;" in svg and "t&amp;" in svg


def test_empty_and_deterministic(tmp_path):
    empty = scatter_svg(TupleDataset.empty(2), "a", "b")
    assert "<circle" not in empty
    d = TupleDataset.from_rows([[0.1, 0.2], [0.3, -0.4]])
    a = write_scatter(d, tmp_path / "a.svg", "x", "y").read_bytes()
    b = write_scatter(d, tmp_path / "b.svg", "x", "y").read_bytes()
    assert a == b


def test_rejects_wrong_width():
    with pytest.raises(ValueError):
        scatter_svg(TupleDataset.from_rows([[1, 2, 3]]), "x", "y")
