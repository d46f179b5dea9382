"""Benchmark harness: batch runs, metrics, reports."""

from .report import BenchResult, ObjectiveRow, aggregate_traces, render_figures, write_report
from .runner import BenchConfig, read_molecules, run_benchmark

__all__ = [
    "BenchConfig",
    "BenchResult",
    "ObjectiveRow",
    "aggregate_traces",
    "read_molecules",
    "render_figures",
    "run_benchmark",
    "write_report",
]
