"""
Run manifest for the liesplit command line.

A RunManifest captures one invocation: command, inputs, selectors, solver
parameters and outputs. It renders to YAML and parses back to an equal
manifest. Checks that need the filesystem live in check_inputs() so a
manifest can be rendered and parsed anywhere.
"""

import logging
import re
from enum import Enum
from pathlib import Path
from typing import List, Literal, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, field_validator

from ..config import get_config
from ..errors import ManifestError

logger = logging.getLogger(__name__)

_J_SELECTOR = re.compile(r"^(identity|pq:\d+,\d+|symplectic:\d+|custom:.+)$")


class Command(str, Enum):
    SPLIT = "split"
    FACTOR = "factor"
    SOLVE = "solve"
    ANALYZE = "analyze"
    VERIFY = "verify"


SPLIT_SCHEMES = (
    "j-split", "doolittle", "crout", "ldu", "jacobi",
    "skew-upper", "skew-lower", "iwasawa", "levi", "kronecker",
)
FACTOR_SCHEMES = ("lu-doolittle", "lu-crout", "ldu", "qr", "lq", "qdr", "polar", "jpolar")
VERIFY_SCHEMES = ("polar", "jpolar", "qr", "lq", "qdr", "ldu")
SOLVE_METHODS = (
    "j-hss", "hss", "sts-upper", "sts-lower", "adi", "jacobi",
    "gauss-seidel-forward", "gauss-seidel-backward", "gmres", "gmres-jhss",
)


def _default_seed() -> int:
    return get_config().cli.seed


def _default_size() -> int:
    return get_config().cli.verify_size


class RunManifest(BaseModel):
    """One CLI invocation."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Command
    matrix: Optional[Path] = None
    matrix_b: Optional[Path] = None
    rhs: Optional[Path] = None
    j: str = "identity"
    scheme: Optional[str] = None
    schemes: List[str] = Field(default_factory=list)
    method: Optional[str] = None
    alpha: Union[Literal["auto"], PositiveFloat] = "auto"
    tol: Optional[PositiveFloat] = None
    max_iter: Optional[PositiveInt] = None
    seed: int = Field(default_factory=_default_seed)
    size: PositiveInt = Field(default_factory=_default_size)
    out: Optional[Path] = None
    no_timestamp: bool = False
    metrics_out: Optional[Path] = None

    @field_validator("j")
    @classmethod
    def _check_j(cls, value: str) -> str:
        if not _J_SELECTOR.match(value):
            raise ValueError(f"J selector must be identity | pq:p,q | symplectic:m | custom:path, got '{value}'")
        return value

    @field_validator("scheme")
    @classmethod
    def _check_scheme(cls, value: Optional[str]) -> Optional[str]:
        if value is not None and value not in SPLIT_SCHEMES + FACTOR_SCHEMES:
            raise ValueError(f"unknown scheme '{value}'")
        return value

    @field_validator("schemes")
    @classmethod
    def _check_schemes(cls, value: List[str]) -> List[str]:
        if value == ["all"]:
            return list(VERIFY_SCHEMES)
        unknown = [s for s in value if s not in VERIFY_SCHEMES]
        if unknown:
            raise ValueError(f"unknown verify schemes {unknown}")
        return value

    @field_validator("method")
    @classmethod
    def _check_method(cls, value: Optional[str]) -> Optional[str]:
        if value is not None and value not in SOLVE_METHODS:
            raise ValueError(f"unknown method '{value}'")
        return value

    @property
    def auto_alpha(self) -> bool:
        return self.alpha == "auto"

    @property
    def custom_j_path(self) -> Optional[Path]:
        if self.j.startswith("custom:"):
            return Path(self.j.split(":", 1)[1])
        return None

    def render(self) -> str:
        """YAML text with sorted keys."""
        return yaml.safe_dump(self.model_dump(mode="json"), sort_keys=True)

    @classmethod
    def parse(cls, text: str) -> "RunManifest":
        return cls.model_validate(yaml.safe_load(text))

    def check_inputs(self):
        """
        Validate the command's required inputs and that referenced files exist.

        Raises:
            ManifestError: a required input is missing or a file does not exist.
        """
        required = {
            Command.SPLIT: ("matrix", "scheme"),
            Command.FACTOR: ("matrix", "scheme"),
            Command.SOLVE: ("matrix", "method"),
            Command.ANALYZE: ("matrix",),
            Command.VERIFY: (),
        }[self.command]
        for name in required:
            if getattr(self, name) is None:
                raise ManifestError(f"'{self.command.value}' needs --{name.replace('_', '-')}")

        if self.command is Command.SPLIT and self.scheme not in SPLIT_SCHEMES:
            raise ManifestError(f"'{self.scheme}' is not a splitting scheme")
        if self.command is Command.FACTOR and self.scheme not in FACTOR_SCHEMES:
            raise ManifestError(f"'{self.scheme}' is not a factorization scheme")
        if self.command is Command.SOLVE and self.method == "adi" and self.matrix_b is None:
            raise ManifestError("'adi' needs --matrix-b")

        for path in (self.matrix, self.matrix_b, self.rhs, self.custom_j_path):
            if path is not None and not path.is_file():
                raise ManifestError(f"input file not found: {path}")
