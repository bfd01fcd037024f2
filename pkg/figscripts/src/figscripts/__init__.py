"""Figure scripts for diracwave exports: pure readers, no physics."""

from .reader import GridFile, GridReadError, read_curve_table, read_grid_file

__all__ = ["GridFile", "GridReadError", "read_curve_table", "read_grid_file"]
