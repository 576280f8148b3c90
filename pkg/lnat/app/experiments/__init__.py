"""Experiment engine behind the command line: cost sources, runs, traces and sweeps."""

from .functions import (
    FunctionSpec,
    LinearFunction,
    TableFunction,
    build_function,
    build_sequence,
    load_function_spec,
    parse_function_spec,
)
from .runner import (
    ExperimentRunner,
    RunSummary,
    SeedFailedError,
    SeedResult,
    regret_statistics,
    run_seed,
    theoretical_bound,
)
from .sweep import SweepPoint, SweepResult, fit_exponent, run_sweep
from .traces import TRACE_HEADER, TraceWriteError, emit_trace, read_trace, sidecar_path

__all__ = [
    "TRACE_HEADER",
    "ExperimentRunner",
    "FunctionSpec",
    "LinearFunction",
    "RunSummary",
    "SeedFailedError",
    "SeedResult",
    "SweepPoint",
    "SweepResult",
    "TableFunction",
    "TraceWriteError",
    "build_function",
    "build_sequence",
    "emit_trace",
    "fit_exponent",
    "load_function_spec",
    "parse_function_spec",
    "read_trace",
    "regret_statistics",
    "run_seed",
    "run_sweep",
    "sidecar_path",
    "theoretical_bound",
]
