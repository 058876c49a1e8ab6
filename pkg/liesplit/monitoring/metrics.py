"""
Prometheus metrics for liesplit solvers.

Tracks solver runs, iteration counts and final residuals. prometheus_client
is optional: without it, recording is a no-op.
"""

import logging
from pathlib import Path
from typing import Optional, Union

try:
    from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram, write_to_textfile
    PROMETHEUS_AVAILABLE = True
except ImportError:
    PROMETHEUS_AVAILABLE = False
    logging.warning("prometheus_client not available. Install with: pip install prometheus-client")

logger = logging.getLogger(__name__)


class SolverMetrics:
    """Prometheus collectors for solver runs, in a private registry."""

    def __init__(self):
        self.enabled = PROMETHEUS_AVAILABLE
        if not self.enabled:
            return

        self.registry = CollectorRegistry()

        self.runs_total = Counter(
            'liesplit_solver_runs_total',
            'Total number of solver runs',
            ['method', 'status'],
            registry=self.registry,
        )

        self.iterations = Histogram(
            'liesplit_solver_iterations',
            'Iterations used per solver run',
            ['method'],
            buckets=[1, 5, 10, 50, 100, 500, 1000, 5000, 10000],
            registry=self.registry,
        )

        self.final_residual = Gauge(
            'liesplit_solver_final_residual',
            'Relative residual at the end of the last run',
            ['method'],
            registry=self.registry,
        )

        self.spectral_radius = Gauge(
            'liesplit_solver_spectral_radius',
            'Spectral radius of the last analysed iteration matrix',
            ['method'],
            registry=self.registry,
        )

    def record_solve(self, method: str, iterations: int, converged: bool,
                     residual: float, rho: Optional[float] = None):
        """Record one finished solver run."""
        if not self.enabled:
            return
        status = "converged" if converged else "not_converged"
        self.runs_total.labels(method=method, status=status).inc()
        self.iterations.labels(method=method).observe(iterations)
        self.final_residual.labels(method=method).set(residual)
        if rho is not None:
            self.spectral_radius.labels(method=method).set(rho)

    def write(self, path: Union[str, Path]) -> bool:
        """
        Write the registry in text exposition format.

        Returns:
            False when prometheus_client is unavailable.
        """
        if not self.enabled:
            logger.warning(f"Metrics requested at {path} but prometheus_client is not installed")
            return False
        write_to_textfile(str(path), self.registry)
        return True


_metrics: Optional[SolverMetrics] = None


def get_metrics() -> SolverMetrics:
    """Process-wide SolverMetrics instance."""
    global _metrics
    if _metrics is None:
        _metrics = SolverMetrics()
    return _metrics
