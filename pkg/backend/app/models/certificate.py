"""Pydantic models for compactness certificates, covering experiments and witnesses."""
from enum import Enum

from pydantic import BaseModel, Field, model_validator


class CompactnessCertificate(BaseModel):
    """
    Finite-horizon data (d, c, n₀, n₁, ε) for one basis vector e_k.

    Every p with ‖p(W)‖ ≤ 1 moves e_k into F + εB, where F = span{e_k, …, W^{n₁}e_k}
    is the coordinate block {k, …, k + n₁}.
    """

    basis_index: int
    d: float = Field(..., gt=0.0)
    c: float = Field(..., gt=0.0)
    n0: int = Field(..., ge=0)
    n1: int = Field(..., ge=0)
    epsilon: float = Field(..., gt=0.0)
    horizon_checked: int = Field(..., gt=0)
    tail_bound: float  # (c/d)^{n1+1} / (1 − c/d)
    caveat: bool = True  # ‖Wⁿe_k‖ ≤ cⁿ verified only up to horizon_checked
    local_radius_estimate: float | None = None

    @model_validator(mode="after")
    def _check_constants(self) -> "CompactnessCertificate":
        if self.c >= self.d:
            raise ValueError(f"c={self.c} must be strictly below d={self.d}")
        if self.n1 < self.n0:
            raise ValueError(f"n1={self.n1} must be at least n0={self.n0}")
        if self.tail_bound >= self.epsilon:
            raise ValueError(f"tail bound {self.tail_bound} does not reach epsilon {self.epsilon}")
        return self

    @property
    def subspace(self) -> tuple[int, int]:
        """First and last coordinate of F."""
        return self.basis_index, self.basis_index + self.n1


class ValidationReport(BaseModel):
    """Residuals dist(p(W)e_k, F) over seeded random polynomials."""

    basis_index: int
    n1: int
    epsilon: float
    normalization: str
    num_samples: int
    max_degree: int
    sample_seed: int
    max_residual: float
    exact_zero_samples: int  # samples of degree ≤ n1, whose residual is exactly 0
    violations: int
    worst_sample: int | None = None


class CauchyReport(BaseModel):
    """Margins d⁻ⁿ + tol − |a_n| of a normalized polynomial (or of a sampled batch)."""

    d: float
    tolerance: float
    samples: int = 1
    min_margin: float
    worst_degree: int
    holds: bool


class CoveringReport(BaseModel):
    """Greedy farthest-point ε-net of a finite point set."""

    epsilon: float = Field(..., gt=0.0)
    num_points: int
    net_size: int
    max_residual: float  # largest distance from a point to its nearest center
    sample_seed: int | None = None
    centers: list[int] = Field(default_factory=list)  # positions of the centers in the input list

    @model_validator(mode="after")
    def _check_size(self) -> "CoveringReport":
        if self.net_size > self.num_points:
            raise ValueError("net_size cannot exceed num_points")
        return self


class WitnessSubject(str, Enum):
    W = "W"
    W_INVERSE = "W_inverse"


class WitnessReport(BaseModel):
    """Uniformly separated orbit inside the unit-ball orbit of W or W⁻¹."""

    subject: WitnessSubject
    direction: str
    found: bool
    horizon: int
    delta: float
    min_distance: float | None = None
    explanation: str


class SumSetReport(BaseModel):
    """Net of {a(W, W⁻¹)e_k} against the product of the nets of its two orthogonal parts."""

    basis_index: int
    epsilon: float
    part_epsilon: float
    num_points: int
    net_size: int
    forward_net_size: int
    inverse_net_size: int
    product_bound: int
    bound_holds: bool
    sample_seed: int
