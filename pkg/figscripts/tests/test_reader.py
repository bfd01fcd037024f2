"""Format-compatibility checks against golden files written by diracwave."""

import struct
from pathlib import Path

import numpy as np
import pytest

from figscripts.reader import GridReadError, read_curve_table, read_grid_file

GOLDEN = Path(__file__).parent / "golden"


def test_reads_golden_grid():
    grid = read_grid_file(GOLDEN / "slice_t000.dwg")
    assert grid.axis_names == ("x3", "x1")
    assert grid.values.shape == (128, 25, 4)
    assert grid.density.shape == (128, 25)
    assert grid.time == 0.0
    assert grid.params["mass"] == 1.0
    assert grid.params["group_velocity"] == 2.0
    # density column is consistent with the stored spinor values
    assert np.allclose(
        grid.density, np.sum(np.abs(grid.values) ** 2, axis=-1), rtol=0, atol=1e-14
    )


def test_golden_times_and_axes_match():
    grids = [read_grid_file(GOLDEN / f"slice_t{t:03d}.dwg") for t in (0, 150, 300)]
    assert [g.time for g in grids] == [0.0, 150.0, 300.0]
    assert grids[0].same_axes(grids[1]) and grids[1].same_axes(grids[2])


def test_golden_packet_moves_superluminally():
    # no physics recomputed, just read two slices: the density maximum
    # advances by roughly v_a * dt = 600
    g0 = read_grid_file(GOLDEN / "slice_t000.dwg")
    g2 = read_grid_file(GOLDEN / "slice_t300.dwg")
    x3 = g0.axis("x3")
    peak0 = x3[np.argmax(g0.density.max(axis=1))]
    peak2 = x3[np.argmax(g2.density.max(axis=1))]
    assert abs((peak2 - peak0) - 600.0) < 40.0


def test_reads_golden_curves():
    curves = read_curve_table(GOLDEN / "momentum_curves.tsv")
    assert sorted(curves) == [1.5, 2.0, 2.5]
    for P, points in curves.items():
        vertex = points[points[:, 0] == 0.0]
        assert vertex.shape == (1, 2)
        assert vertex[0, 1] == pytest.approx(P, abs=1e-12)


def test_bad_magic_rejected(tmp_path):
    bad = tmp_path / "bad.dwg"
    bad.write_bytes(b"something-else 1\n\n")
    with pytest.raises(GridReadError):
        read_grid_file(bad)


def test_truncated_payload_rejected(tmp_path):
    raw = (GOLDEN / "slice_t000.dwg").read_bytes()
    bad = tmp_path / "short.dwg"
    bad.write_bytes(raw[:-8])
    with pytest.raises(GridReadError):
        read_grid_file(bad)


def test_synthetic_minimal_grid(tmp_path):
    # hand-built file following the documented layout byte for byte
    header = (
        "diracwave-grid 1\n"
        "axis_count = 1\n"
        "axis_0_name = x3\n"
        "axis_0_count = 2\n"
        "axis_0_coords = 0.0,1.0\n"
        "fixed_x0 = 0.0\n"
        "components = 4c+1r\n"
        "param_mass = 1.0\n"
        "\n"
    )
    values = [
        (1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.25),
        (0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 4.0),
    ]
    body = b"".join(struct.pack("<9d", *row) for row in values)
    path = tmp_path / "mini.dwg"
    path.write_bytes(header.encode() + body)
    grid = read_grid_file(path)
    assert grid.values[0, 0] == 1.0 + 0.5j
    assert grid.values[1, 1] == 2.0 + 0.0j
    assert grid.density[1] == 4.0


def test_malformed_curve_table(tmp_path):
    bad = tmp_path / "bad.tsv"
    bad.write_text("1.0\t2.0\n")
    with pytest.raises(GridReadError):
        read_curve_table(bad)
