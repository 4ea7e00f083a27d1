from pydantic import BaseModel, Field, model_validator
from typing import Literal, Optional, Tuple

from src import config

Command = Literal["secant", "cotangent", "verify", "table"]
MethodName = Literal["arakawa", "lrr", "both"]
OutputFormat = Literal["exact", "decimal", "json", "csv"]


class JobConfig(BaseModel):
    command: Command
    alpha_expr: Optional[str] = None
    k: Optional[int] = Field(default=None, ge=1)
    k_range: Optional[Tuple[int, int]] = None
    d_range: Optional[Tuple[int, int]] = None
    method: MethodName = Field(default_factory=lambda: config.DEFAULT_METHOD)
    terms: int = Field(default_factory=lambda: config.DEFAULT_TERMS, ge=1)
    prec_bits: int = Field(default_factory=lambda: config.DEFAULT_PREC_BITS, ge=16)
    format: OutputFormat = "exact"
    c_cap: int = Field(default_factory=lambda: config.C_CAP, ge=1)
    workers: int = Field(default_factory=lambda: config.WORKERS, ge=1)
    value_expr: Optional[str] = None  # verify: check this value instead of recomputing it
    kind: Literal["secant", "cotangent", "lerch"] = "secant"

    @model_validator(mode="after")
    def check_command_fields(self) -> "JobConfig":
        if self.command == "table":
            if self.d_range is None or self.k_range is None:
                raise ValueError("table needs both a d range and a k range")
            for lo, hi in (self.d_range, self.k_range):
                if lo > hi:
                    raise ValueError(f"empty range {lo}..{hi}")
            if self.d_range[0] < 1 or self.k_range[0] < 1:
                raise ValueError("table ranges must start at 1 or above")
        else:
            if not self.alpha_expr:
                raise ValueError(f"{self.command} needs --alpha")
            if self.k is None:
                raise ValueError(f"{self.command} needs --k")
            if self.format == "csv":
                raise ValueError("csv output is only available for table")
        return self
