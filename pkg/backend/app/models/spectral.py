"""Pydantic models for finite-horizon spectral estimates."""
from enum import Enum

from pydantic import BaseModel, Field


class QuantityName(str, Enum):
    """The eight sliding-product quantities of a bilateral weighted shift."""

    R_MINUS = "r_minus"
    R_PLUS = "r_plus"
    R1_MINUS = "r1_minus"
    R1_PLUS = "r1_plus"
    R2_MINUS = "r2_minus"
    R2_PLUS = "r2_plus"
    R3_MINUS = "r3_minus"
    R3_PLUS = "r3_plus"

    @property
    def side(self) -> str:
        return "minus" if self.value.endswith("minus") else "plus"

    @property
    def sliding(self) -> bool:
        """True for quantities taking a sup/inf over window positions."""
        return self.value.startswith(("r_", "r1_"))


class BoundDirection(str, Enum):
    """How the finite-horizon estimate relates to the true limit."""

    LOWER = "lower"
    UPPER = "upper"
    TWO_SIDED = "two_sided"
    HEURISTIC = "heuristic"


class QuantityEstimate(BaseModel):
    """Per-n sequence a_1, …, a_N of one quantity and its tail-aggregated estimate."""

    name: QuantityName
    horizon_n: int = Field(..., ge=1)
    horizon_k: int = Field(..., ge=1)
    sequence: list[float]
    estimate: float = Field(..., gt=0.0)
    bound_direction: BoundDirection
    reconciled: bool = False  # estimate raised/lowered to respect the ordering chain


class SpectralProfile(BaseModel):
    """All eight quantities together with r(W), r₁(W) and the lower bound m(W)."""

    r_minus: QuantityEstimate
    r_plus: QuantityEstimate
    r1_minus: QuantityEstimate
    r1_plus: QuantityEstimate
    r2_minus: QuantityEstimate
    r2_plus: QuantityEstimate
    r3_minus: QuantityEstimate
    r3_plus: QuantityEstimate
    r: float
    r1: float
    invertible: bool
    m_of_W: float
    minus_window_alignment: str = "{-n-k+1, ..., -k}"

    def quantity(self, name: QuantityName | str) -> QuantityEstimate:
        return getattr(self, QuantityName(name).value)

    def estimates(self) -> dict[str, float]:
        return {name.value: self.quantity(name).estimate for name in QuantityName}


class LocalRadiusEstimate(BaseModel):
    """Sequence ‖Wⁿe_k‖^{1/n} and its running-sup tail estimate of r(e_k, W)."""

    basis_index: int
    horizon_n: int = Field(..., ge=1)
    sequence: list[float]
    estimate: float


class IdentityReport(BaseModel):
    """Max deviation of the orbit-norm regrouping identities at a basis vector."""

    basis_index: int
    horizon_n: int
    checked: int
    max_deviation: float


class InverseRelations(BaseModel):
    """Quantities of V = U*W⁻¹U against the reciprocal quantities of W."""

    r3_plus_of_V: float
    reciprocal_r2_minus_of_W: float
    r_of_V: float
    reciprocal_r1_of_W: float
    inverse_norm: float  # ‖W⁻¹‖ = 1/m(W)
    r3_deviation: float
    r_deviation: float
