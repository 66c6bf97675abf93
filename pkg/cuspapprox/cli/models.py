"""
Pydantic Models for Run Configuration

Defines the validated configuration of one CLI run and YAML loading.
"""

from pathlib import Path
from typing import Any, Dict, Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from cuspapprox.core.errors import InvalidArgumentError
from cuspapprox.core.quadint import SUPPORTED_RINGS

Command = Literal["enum", "ford", "approx", "hurwitz", "torus"]
TorusAction = Literal["h2", "oracle", "grid"]
Emit = Literal["json", "csv", "svg"]


class RunConfig(BaseModel):
    """Configuration of a single command"""

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "command": "hurwitz",
                "ring": 0,
                "c_max": 3,
                "trace_max": 6,
                "word_len": 6,
                "emit": "json",
            }
        },
    )

    command: Command = Field(..., description="Command to run")
    ring: int = Field(0, description="0 for PSL2(Z), else d of the Bianchi group")
    c_max: Optional[float] = Field(None, gt=0, description="Bound on |c|; command default when unset")
    trace_max: float = Field(6.0, ge=1, description="Bound on |tr| for the Hurwitz search")
    word_len: int = Field(6, ge=0, description="Conjugate search depth or oracle word length")
    spectrum: bool = Field(False, description="Emit the height spectrum instead of the estimate")
    xi: Optional[str] = Field(None, description="Boundary point, or 'random'")
    xi_radius: float = Field(0.0, ge=0, description="Absolute error of xi")
    steps: int = Field(20, ge=1, le=10_000, description="Length of the approximating sequence")
    torus_action: Optional[TorusAction] = Field(None, description="h2, oracle or grid")
    ell: Optional[float] = Field(None, gt=0, description="Length of the curve")
    theta: Optional[float] = Field(None, description="Twist")
    n: int = Field(10, ge=1, le=2000, description="Grid size per axis")
    emit: Emit = Field("json", description="Output format")
    out: Optional[str] = Field(None, description="Output path; stdout when unset")
    threads: int = Field(1, ge=1, le=256, description="Worker threads")
    seed: Optional[int] = Field(None, description="Seed for xi=random")
    precision: int = Field(30, ge=10, le=1000, description="Decimal digits for interval checks")
    verbose: bool = Field(False, description="DEBUG logging")

    @field_validator("ring")
    @classmethod
    def _supported_ring(cls, ring: int) -> int:
        if ring not in SUPPORTED_RINGS:
            raise ValueError(f"ring must be one of {sorted(SUPPORTED_RINGS)}")
        return ring

    @model_validator(mode="after")
    def _command_requirements(self) -> "RunConfig":
        if self.command == "approx" and not self.xi:
            raise ValueError("approx needs --xi")
        if self.command == "torus":
            if self.torus_action is None:
                raise ValueError("torus needs an action: h2, oracle or grid")
            if self.torus_action != "grid" and (self.ell is None or self.theta is None):
                raise ValueError(f"torus {self.torus_action} needs --ell and --theta")
        if self.command in ("ford", "hurwitz") and self.c_max is not None and self.c_max < 1:
            raise ValueError(f"{self.command} needs c_max >= 1")
        if self.emit == "svg" and self.command not in ("ford", "approx"):
            raise ValueError("svg output exists for ford and approx only")
        if self.emit == "csv" and self.command == "ford":
            raise ValueError("ford emits json or svg")
        return self


def load_config(path: str) -> Dict[str, Any]:
    """
    Read a YAML mapping of RunConfig fields.

    Raises:
        InvalidArgumentError: If the file does not hold a mapping
    """
    try:
        with open(Path(path), "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except (OSError, yaml.YAMLError) as exc:
        raise InvalidArgumentError(f"cannot read config: {exc}", path=str(path)) from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise InvalidArgumentError("config file must hold a mapping", path=str(path))
    return data
