from fractions import Fraction
from pydantic import BaseModel, Field
from typing import List, Optional

from src.quad_field import QuadElem


class ExactValue(BaseModel):
    """x + y*sqrt(D) with x, y as "p/q" strings."""
    x: str
    y: str
    D: int

    @classmethod
    def from_quad(cls, value: QuadElem) -> "ExactValue":
        return cls(x=str(value.x), y=str(value.y), D=value.D)

    def to_quad(self) -> QuadElem:
        return QuadElem(Fraction(self.x), Fraction(self.y), self.D)


class MethodResult(BaseModel):
    method: str
    value: ExactValue


class OracleSummary(BaseModel):
    terms: int
    prec_bits: int
    series: str
    error_bound: str
    oscillation: str
    max_term: str
    tail_note: str


class SecantReport(BaseModel):
    alpha_expr: str
    alpha: ExactValue
    k: int
    value: ExactValue
    exact: str
    decimal: str
    psi_decimal: str
    methods: List[MethodResult] = Field(default_factory=list)
    methods_agree: bool
    residual: str
    tolerance: float
    within_tolerance: bool = True
    oracle: OracleSummary


class CotangentReport(BaseModel):
    alpha_expr: str
    alpha: ExactValue
    k: int
    magnitude: str
    formula_value: str
    sign: int
    value: str
    adjudicated: bool
    xi_decimal: str
    residual: Optional[str] = None
    provenance: str
    oracle: OracleSummary


class LerchSummary(BaseModel):
    plus: str
    minus: str
    fitting_sign: int


class VerifyReport(BaseModel):
    alpha_expr: str
    alpha: ExactValue
    k: int
    kind: str
    value: Optional[ExactValue] = None
    exact: Optional[str] = None
    residual: str
    tolerance: float
    passed: bool
    lerch: Optional[LerchSummary] = None
    oracle: Optional[OracleSummary] = None


class TableRow(BaseModel):
    d: int
    k: int
    value_x: str
    value_y: str
    D: int
    decimal: str
    methods_agree: bool
    residual: str
