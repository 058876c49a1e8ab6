"""Solver telemetry."""

from .metrics import PROMETHEUS_AVAILABLE, SolverMetrics, get_metrics

__all__ = ["PROMETHEUS_AVAILABLE", "SolverMetrics", "get_metrics"]
