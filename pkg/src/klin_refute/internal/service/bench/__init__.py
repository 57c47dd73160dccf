"""Seeded parameter sweeps with CSV output."""

from ._csv import SweepRow, format_sweep_csv, to_csv_text
from .sweep import Sweep, cmd_bench, first_kikuchi_values, parse_sweep, run_point
