"""Pydantic models for compactness verdicts."""
from enum import Enum

from pydantic import BaseModel, model_validator

from app.models.certificate import WitnessReport


class Subject(str, Enum):
    W = "W"
    W_INVERSE = "W_inverse"
    ALGEBRA = "algebra_W_and_inverse"
    COMMUTANT = "commutant_W"


class Conclusion(str, Enum):
    STRONGLY_COMPACT = "strongly_compact"
    NOT_STRONGLY_COMPACT = "not_strongly_compact"
    INCONCLUSIVE = "inconclusive"


class Rule(str, Enum):
    """Decision rules, each citing the criterion it applies."""

    R1_THM_SHIFT = "R1_thm_shift"  # r₃⁺ < r ⇒ W strongly compact
    R2_COR_INVERSE = "R2_cor_inverse"  # r₁ < r₂⁻ ⇒ W⁻¹ strongly compact
    R3_THM_RATIONAL = "R3_thm_rational"  # R1 and R2 ⇒ algebra of W and W⁻¹
    R4_COMMUTANT_QUOTED = "R4_commutant_quoted"  # r₃⁺ < r₂⁻ ⇒ commutant, quoted criterion
    R5_ORBIT_WITNESS = "R5_orbit_witness"
    NONE = "none"


class Verdict(BaseModel):
    """Conclusion about one subject with the deciding rule and its signed margin."""

    subject: Subject
    conclusion: Conclusion
    rule: Rule
    margin: float | None = None  # radius units; positive when the strict inequality holds
    caveats: list[str] = []
    witness: WitnessReport | None = None

    @model_validator(mode="after")
    def _check_support(self) -> "Verdict":
        if self.conclusion == Conclusion.NOT_STRONGLY_COMPACT and (self.witness is None or not self.witness.found):
            raise ValueError("not_strongly_compact needs an attached witness")
        return self
