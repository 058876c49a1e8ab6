"""
Tolerance and default-parameter configuration for liesplit.

All defaults live in a single YAML table (defaults.yaml next to this module).
Operations read their fallbacks from the cached config returned by
get_config(); callers override per call.
"""

import os
import logging
from dataclasses import dataclass, fields
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

logger = logging.getLogger(__name__)

CONFIG_ENV_VAR = "LIESPLIT_CONFIG"
DEFAULTS_PATH = Path(__file__).parent / "defaults.yaml"


@dataclass(frozen=True)
class MatkitDefaults:
    """Kernel tolerances."""
    pivot_rel: float
    symmetry_rel: float
    jacobi_offdiag_rel: float
    jacobi_max_sweeps: int
    qr_sweeps_per_n: int
    eig_max_n: int
    expm_scaled_norm: float
    expm_terms: int
    sqrtm_residual_rel: float
    sqrtm_max_iter: int
    negative_axis_rel: float


@dataclass(frozen=True)
class StructureDefaults:
    membership_rel: float


@dataclass(frozen=True)
class SplittingDefaults:
    kron_subspace_rel: float


@dataclass(frozen=True)
class FactorizationDefaults:
    """Factorization and linearization-check defaults."""
    minor_rel: float
    qr_singular_rel: float
    polar_tol: float
    polar_max_iter: int
    polar_scaling_until: float
    linearization_steps: List[float]
    linearization_exact_abs: float
    min_order: float


@dataclass(frozen=True)
class SolverDefaults:
    """Iterative solver defaults."""
    tol: float
    max_iter: int
    definiteness_rel: float
    default_alpha: float
    gmres_restart: int
    adi_max_n: int
    adi_explicit_max_n: int
    shift_pivot_rel: float


@dataclass(frozen=True)
class CliDefaults:
    seed: int
    verify_size: int
    verify_residual_rel: float
    alpha_grid_low: float
    alpha_grid_high: float
    alpha_grid_points: int


_SECTIONS = {
    "matkit": MatkitDefaults,
    "structures": StructureDefaults,
    "splittings": SplittingDefaults,
    "factorizations": FactorizationDefaults,
    "solvers": SolverDefaults,
    "cli": CliDefaults,
}


def _read_yaml(path: Path) -> Dict[str, Any]:
    if not path.exists():
        raise FileNotFoundError(f"liesplit config not found: {path}")
    with open(path, "r") as f:
        data = yaml.safe_load(f) or {}
    unknown = set(data) - set(_SECTIONS)
    if unknown:
        raise ValueError(f"Unknown config sections: {sorted(unknown)}")
    return data


class LiesplitConfig:
    """Typed view over the defaults YAML table."""

    def __init__(self, config_path: Optional[str] = None):
        """
        Load configuration.

        Args:
            config_path: Optional YAML file overriding any subset of the
                        packaged defaults.yaml keys.
        """
        self.defaults_path = Path(DEFAULTS_PATH)
        self.config_path = Path(config_path) if config_path is not None else self.defaults_path
        self._load_config()

    def _load_config(self):
        """Load the packaged table, then overlay the override file."""
        base = _read_yaml(self.defaults_path)
        override = _read_yaml(self.config_path) if self.config_path != self.defaults_path else {}
        self.config: Dict[str, Any] = {}

        for name, cls in _SECTIONS.items():
            allowed = {f.name for f in fields(cls)}
            raw = dict(base.get(name) or {})
            missing = allowed - set(raw)
            if missing:
                raise ValueError(f"{self.defaults_path} lacks keys in section '{name}': {sorted(missing)}")
            updates = override.get(name) or {}
            extra = (set(raw) | set(updates)) - allowed
            if extra:
                raise ValueError(f"Unknown keys in config section '{name}': {sorted(extra)}")
            raw.update(updates)
            self.config[name] = raw
            setattr(self, name, cls(**raw))

        logger.debug(f"Loaded liesplit defaults from {self.config_path}")


@lru_cache(maxsize=1)
def get_config() -> LiesplitConfig:
    """Return the process-wide config, honouring LIESPLIT_CONFIG."""
    return LiesplitConfig(os.environ.get(CONFIG_ENV_VAR))


def pick(value, default):
    """Per-call override helper: `value` unless it is None."""
    return default if value is None else value
