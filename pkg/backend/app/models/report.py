"""Pydantic models for analysis requests and the JSON report."""
from typing import Any

from pydantic import BaseModel, Field

from app.config import settings
from app.models.certificate import (
    CompactnessCertificate,
    CoveringReport,
    SumSetReport,
    ValidationReport,
    WitnessReport,
)
from app.models.spectral import InverseRelations, SpectralProfile
from app.models.verdict import Verdict
from app.models.weights import WeightRule


class CertifyRequest(BaseModel):
    """Certificate request for one basis vector; c defaults to the suggested midpoint."""

    k: int = 0
    eps: float = Field(1e-3, gt=0.0)
    c: float | None = Field(None, gt=0.0)
    validate_samples: int = Field(0, ge=0)  # 0 skips sampled validation
    max_degree: int | None = Field(None, ge=1)

    @classmethod
    def parse(cls, text: str) -> "CertifyRequest":
        """Parse "k=0,eps=1e-3,c=1.2" style command-line values."""
        fields: dict[str, Any] = {}
        for item in filter(None, (part.strip() for part in text.split(","))):
            key, _, value = item.partition("=")
            fields[key.strip()] = value.strip()
        return cls.model_validate(fields)


class AnalysisOptions(BaseModel):
    """Horizons, seeds and optional stages of an analysis run."""

    horizon_n: int = Field(default_factory=lambda: settings.horizon_n, ge=2)
    horizon_k: int = Field(default_factory=lambda: settings.horizon_k, ge=1)
    sliding_horizon_n: int = Field(default_factory=lambda: settings.sliding_horizon_n, ge=2)
    certify: list[CertifyRequest] = Field(default_factory=list)
    witness: bool = False
    forward_witness: bool = False  # let the forward orbit witness decide W
    witness_horizon: int = Field(default_factory=lambda: settings.witness_horizon, ge=2)
    inverse_relations: bool = False
    seed: int = Field(default_factory=lambda: settings.default_seed)


class AnalysisRequest(BaseModel):
    rule: WeightRule
    options: AnalysisOptions = Field(default_factory=AnalysisOptions)


class CoverRequest(BaseModel):
    """Covering experiment over sampled orbit points p(W)e_k."""

    rule: WeightRule
    k: int = 0
    eps: float = Field(..., gt=0.0)
    samples: int = Field(200, ge=1)
    max_degree: int = Field(60, ge=0)
    full_degree: bool = False
    seed: int = Field(default_factory=lambda: settings.default_seed)
    sum_set: bool = False


class CoverResult(BaseModel):
    covering: CoveringReport
    sum_set: SumSetReport | None = None


class AnalysisReport(BaseModel):
    """Self-contained analysis result: every number follows from the echoed inputs."""

    schema_: str = Field(default_factory=lambda: settings.report_schema, alias="schema")
    version: str
    rule: WeightRule
    options: AnalysisOptions
    profile: SpectralProfile
    verdicts: list[Verdict]
    certificates: list[CompactnessCertificate] = Field(default_factory=list)
    validations: list[ValidationReport] = Field(default_factory=list)
    witnesses: list[WitnessReport] = Field(default_factory=list)
    inverse_relations: InverseRelations | None = None
    notes: list[str] = Field(default_factory=list)

    model_config = {"populate_by_name": True}
