"""Sweep CSVs and SVG plots."""
import re

import numpy as np
import pandas as pd
import pytest

from approx_discontinuity.bijection import boundary_sweep
from approx_discontinuity.errors import ContractError
from approx_discontinuity.metrics import SweepResult
from approx_discontinuity.plotting import (
    curve_from_frame,
    decade_label,
    emit_boundary_csv,
    emit_plot_svg,
    emit_sweep_csv,
    read_sweep_csv,
)


def _result():
    return SweepResult(
        etas=np.array([1e-1, 1e-3]),
        noise_seeds=(8, 3),
        mean_r=np.array([[1.0 / 3.0, 2.5], [7.25, np.pi]]),
        std_r=np.array([[0.1, 0.2], [0.3, 0.4]]),
        n_discarded=np.array([[0, 1], [2, 0]]),
        input_indices=(0, 1, 2),
        instability_count=3,
    )


def _series_points(svg: str, index: int):
    match = re.search(rf'<g id="series-{index}">\s*<path d="([^"]*)"', svg)
    assert match, f"series-{index} not found"
    return [(float(x), float(y)) for x, y in re.findall(r"[ML]\s+([-\d.e+]+)\s+([-\d.e+]+)", match.group(1))]


class TestSweepCsv:
    def test_rows_and_order(self, tmp_path):
        path = emit_sweep_csv(_result(), tmp_path / "sweep.csv")
        lines = open(path).read().splitlines()
        assert lines[0] == "eta,noise_seed,mean_r,std_r,n_discarded"
        assert len(lines) == 5
        frame = read_sweep_csv(path)
        assert frame["eta"].tolist() == [1e-1, 1e-1, 1e-3, 1e-3]
        assert frame["noise_seed"].tolist() == [3, 8, 3, 8]
        assert frame["mean_r"].tolist() == [2.5, 1.0 / 3.0, np.pi, 7.25]
        assert frame["n_discarded"].tolist() == [1, 0, 0, 2]

    def test_floats_round_trip(self, tmp_path):
        path = emit_sweep_csv(_result(), tmp_path / "sweep.csv")
        assert read_sweep_csv(path)["mean_r"].iloc[1] == 1.0 / 3.0

    def test_empty_result(self, tmp_path):
        empty = SweepResult(np.array([]), (), np.empty((0, 0)), np.empty((0, 0)),
                            np.empty((0, 0), dtype=int), (), 0)
        with pytest.raises(ContractError):
            emit_sweep_csv(empty, tmp_path / "empty.csv")

    def test_not_a_sweep_csv(self, tmp_path):
        path = tmp_path / "other.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(ContractError):
            read_sweep_csv(path)

    def test_curve_from_frame(self, tmp_path):
        frame = read_sweep_csv(emit_sweep_csv(_result(), tmp_path / "sweep.csv"))
        curve = curve_from_frame(frame)
        assert [e for e, _ in curve] == [1e-1, 1e-3]
        assert curve[0][1] == pytest.approx((1.0 / 3.0 + 2.5) / 2)

    def test_boundary_csv(self, tmp_path):
        path = emit_boundary_csv(boundary_sweep(6), tmp_path / "boundary.csv")
        frame = pd.read_csv(path)
        assert list(frame.columns) == ["k", "ratio"]
        assert frame["ratio"].iloc[0] == 2.75


class TestSvg:
    def test_constant_series_is_horizontal(self, tmp_path):
        curve = [(1e-1, 2.0), (1e-2, 2.0), (1e-3, 2.0), (1e-4, 2.0)]
        svg = open(emit_plot_svg({"flat": curve}, tmp_path / "flat.svg")).read()
        points = _series_points(svg, 0)
        assert len(points) >= 2
        assert len({y for _, y in points}) == 1

    def test_large_eta_on_the_left(self, tmp_path):
        curve = [(1e-1, 1.0), (1e-2, 2.0), (1e-3, 3.0)]
        svg = open(emit_plot_svg({"rising": curve}, tmp_path / "rising.svg")).read()
        xs = [x for x, _ in _series_points(svg, 0)]
        assert xs == sorted(xs)

    def test_two_series_and_legend(self, tmp_path):
        curves = {"alpha": [(1e-1, 1.0), (1e-5, 2.0)], "beta": [(1e-1, 3.0), (1e-5, 1.0)]}
        svg = open(emit_plot_svg(curves, tmp_path / "two.svg", log_y=True)).read()
        assert 'id="series-0"' in svg and 'id="series-1"' in svg
        assert "alpha" in svg and "beta" in svg

    def test_decade_tick_labels(self, tmp_path):
        curve = [(1e-1, 1.0), (1e-3, 1.5), (1e-5, 2.0)]
        svg = open(emit_plot_svg({"s": curve}, tmp_path / "ticks.svg")).read()
        for d in range(-5, 0):
            assert f">{decade_label(d)}<" in svg

    def test_decade_label(self):
        assert decade_label(-3) == "1e-3"

    def test_rejects_short_series(self, tmp_path):
        with pytest.raises(ContractError):
            emit_plot_svg({"one": [(1e-1, 1.0)]}, tmp_path / "x.svg")

    def test_rejects_no_series(self, tmp_path):
        with pytest.raises(ContractError):
            emit_plot_svg({}, tmp_path / "x.svg")

    def test_rejects_non_positive_eta(self, tmp_path):
        with pytest.raises(ContractError):
            emit_plot_svg({"bad": [(0.0, 1.0), (1e-2, 1.0)]}, tmp_path / "x.svg")
