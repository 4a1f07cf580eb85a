"""Marching squares, polyline chaining, and SVG rendering."""

import xml.etree.ElementTree as ET

import numpy as np
import pytest

from gridstat import GridField, KernelKind, TestFunction, sample
from gridstat.plotting import chain_polyline, marching_squares, render_svg


def linear_field(nx=10, ny=8):
    xs = np.arange(nx, dtype=float)
    v = np.tile(xs, (ny, 1))
    return GridField(nx=nx, ny=ny, dx=1.0, dy=1.0, origin=(0.0, 0.0),
                     values=v.ravel())


def test_marching_squares_linear_field():
    g = linear_field()
    segs = marching_squares(g, level=4.5)
    assert len(segs) == g.ny - 1  # one vertical crossing per cell row
    for p0, p1 in segs:
        assert p0[0] == pytest.approx(4.5)
        assert p1[0] == pytest.approx(4.5)


def test_marching_squares_no_crossings():
    g = linear_field()
    assert marching_squares(g, level=99.0) == []


def test_marching_squares_closed_loop():
    # radial bump: the isoline is a closed loop, endpoints match up
    n = 15
    xs = np.linspace(-1, 1, n)
    X, Y = np.meshgrid(xs, xs)
    g = GridField(nx=n, ny=n, dx=xs[1] - xs[0], dy=xs[1] - xs[0],
                  origin=(-1.0, -1.0), values=(X ** 2 + Y ** 2).ravel())
    segs = marching_squares(g, level=0.25)
    assert segs
    for p0, p1 in segs:
        for p in (p0, p1):
            assert np.hypot(*p) == pytest.approx(0.5, abs=0.1)


def test_chain_polyline_orders_line():
    rng = np.random.default_rng(41)
    xs = np.linspace(0, 1, 12)
    pts = np.column_stack([xs, 2 * xs])
    perm = rng.permutation(12)
    order = chain_polyline(pts[perm])
    chained = pts[perm][order]
    diffs = np.diff(chained[:, 0])
    assert np.all(diffs > 0) or np.all(diffs < 0)
    assert chain_polyline(pts[:2]) == [0, 1]


def fake_report(positions, curve_members=(), isolated_members=()):
    return {
        "stationary_points": [
            {"x": float(x), "y": float(y), "value": 0.0,
             "class": "degenerate", "merged": 1}
            for x, y in positions],
        "bindings": ([{"kind": "curve", "members": list(m)} for m in curve_members]
                     + [{"kind": "isolated", "members": [i]} for i in isolated_members]),
    }


def test_render_svg_well_formed_and_layered():
    g = sample(TestFunction.F2, 12, 12)
    report = fake_report([(0.0, 0.0), (1.0, 1.0), (1.1, 1.1)],
                         curve_members=[(1, 2)], isolated_members=[0])
    gt = {"isolated": [[0.5, 0.5]], "curves": [[[0, 0], [1, 1]]]}
    svg = render_svg(g, report=report, ground_truth=gt)
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")
    groups = [el.get("id") for el in root
              if el.tag.endswith("g")]
    assert groups == ["contours", "detected", "ground-truth"]


def test_render_svg_empty_report_has_no_glyphs():
    g = sample(TestFunction.F2, 12, 12)
    svg = render_svg(g, report=fake_report([]))
    assert "<circle" not in svg
    root = ET.fromstring(svg)
    detected = [el for el in root if el.get("id") == "detected"]
    assert len(list(detected[0])) == 0


def test_render_svg_f2_has_24_circles(pipeline):
    report, g, _ = pipeline(TestFunction.F2, KernelKind.GAUSSIAN)
    svg = render_svg(g, report=report)
    assert svg.count("<circle") == 24
    ET.fromstring(svg)  # well-formed
