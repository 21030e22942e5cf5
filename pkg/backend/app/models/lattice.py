"""Pydantic models for operator-norm estimates and orbit decompositions."""
from pydantic import BaseModel, Field


class NormEstimate(BaseModel):
    """‖P_N p(W) P_N‖ estimate bracketed by [lower, upper]."""

    half_width: int = Field(..., ge=1)
    method: str
    estimate: float = Field(..., ge=0.0)
    lower: float
    upper: float
    converged: bool
    iterations: int | None = None


class SplitReport(BaseModel):
    """‖p(W)e_k + q(W⁻¹)e_k‖² against ‖p(W)e_k‖² + ‖q(W⁻¹)e_k‖² for q(0) = 0."""

    basis_index: int
    forward_norm: float
    inverse_norm: float
    sum_norm: float
    supports_disjoint: bool
    pythagoras_deviation: float
    forward_dominated: bool
    inverse_dominated: bool
