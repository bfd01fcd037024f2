"""Grid file format: bit-exact round trips and format errors."""

import numpy as np
import pytest

from diracwave.errors import GridFormatError
from diracwave.grids import FieldGrid
from diracwave.gridio import MAGIC, read_grid, write_grid


def sample_grid() -> FieldGrid:
    rng = np.random.default_rng(31)
    x3 = np.linspace(-5.0, 7.0, 13)
    x1 = np.linspace(-2.0, 2.0, 5)
    values = rng.normal(size=(13, 5, 4)) + 1j * rng.normal(size=(13, 5, 4))
    return FieldGrid(
        axes=(("x3", x3), ("x1", x1)),
        fixed={"x0": 150.0, "x2": 0.0},
        values=values,
        params={"mass": 1.0, "v_a": 2.0, "method": "paraxial", "n_perp": 48},
    )


def test_round_trip_bit_exact(tmp_path):
    grid = sample_grid()
    path = tmp_path / "grid.dwg"
    write_grid(grid, path)
    back = read_grid(path)
    assert back.axis_names == grid.axis_names
    for (na, ca), (nb, cb) in zip(grid.axes, back.axes):
        assert na == nb
        assert np.array_equal(ca, cb)
    assert np.array_equal(back.values, grid.values)
    assert np.array_equal(back.density, grid.density)
    assert back.fixed == grid.fixed
    assert back.params == grid.params


def test_writes_are_deterministic(tmp_path):
    grid = sample_grid()
    p1 = tmp_path / "a.dwg"
    p2 = tmp_path / "b.dwg"
    write_grid(grid, p1)
    write_grid(grid, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_header_is_self_describing(tmp_path):
    path = tmp_path / "grid.dwg"
    write_grid(sample_grid(), path)
    head = path.read_bytes().split(b"\n\n", 1)[0].decode()
    assert head.splitlines()[0] == MAGIC
    assert "axis_0_name = x3" in head
    assert "components = 4c+1r" in head
    assert "param_mass = 1.0" in head
    assert "fixed_x0 = 150.0" in head


def test_bad_magic_rejected(tmp_path):
    path = tmp_path / "bad.dwg"
    path.write_bytes(b"not-a-grid 9\naxis_count = 0\n\n")
    with pytest.raises(GridFormatError):
        read_grid(path)


def test_truncated_payload_rejected(tmp_path):
    path = tmp_path / "grid.dwg"
    write_grid(sample_grid(), path)
    raw = path.read_bytes()
    path.write_bytes(raw[:-16])
    with pytest.raises(GridFormatError):
        read_grid(path)


def test_missing_blank_line_rejected(tmp_path):
    path = tmp_path / "noblank.dwg"
    path.write_bytes(MAGIC.encode() + b"\naxis_count = 0\n")
    with pytest.raises(GridFormatError):
        read_grid(path)
