"""Serializable verdicts of the diagnostics module (schema "idpath-diag/1")."""

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

SCHEMA_VERSION = "idpath-diag/1"

Status = Literal["pass", "fail", "inconclusive"]
Method = Literal["analytic", "numeric"]


class Verdict(BaseModel):
    """Outcome of one assumption check; `curve` keeps the raw numbers behind it."""

    model_config = ConfigDict(frozen=True)

    status: Status
    value: Optional[float] = None
    method: Method = "analytic"
    curve: List[Dict[str, Any]] = Field(default_factory=list)
    notes: Dict[str, Any] = Field(default_factory=dict)


class TailEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    alpha_hat: float
    se: float
    k: int


class DiagnosticsReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    rep_id: str
    kernel_id: str
    assumption_2a: Verdict
    assumption_2b: Verdict
    assumption_2c: Verdict
    assumption_3a: Verdict
    assumption_3b: Verdict
    regularity_c1: List[Optional[float]]
    cf_distance: Optional[float] = None
    # pass / fail against 4/√n + 1e-3, or inconclusive when the oracle did not converge
    cf_status: Optional[Status] = None
    normality_p: Optional[float] = None
    tail_alpha_hat: Optional[TailEstimate] = None
    extra: Dict[str, Any] = Field(default_factory=dict)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    @classmethod
    def from_json(cls, text: str) -> "DiagnosticsReport":
        return cls.model_validate_json(text)
