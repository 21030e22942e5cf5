"""Rule engine turning a spectral profile and orbit witnesses into verdicts."""
import logging

from app.config import settings
from app.exceptions import VerdictConflict
from app.models.certificate import WitnessReport, WitnessSubject
from app.models.spectral import SpectralProfile
from app.models.verdict import Conclusion, Rule, Subject, Verdict

logger = logging.getLogger(__name__)

_WITNESS_SUBJECTS = {WitnessSubject.W: Subject.W, WitnessSubject.W_INVERSE: Subject.W_INVERSE}

_R1_CAVEAT = (
    "r3_plus is a finite-horizon limsup proxy; r is a lower bound, so an underestimated "
    "r3_plus is the only way the R1 margin can be overstated"
)


class VerdictEngine:
    """Applies the sliding-product criteria R1 to R4 and the orbit witness rule R5."""

    def __init__(self, relative_tau: float | None = None):
        self.relative_tau = relative_tau if relative_tau is not None else settings.verdict_relative_tau

    def decide(self, profile: SpectralProfile, witnesses: list[WitnessReport] | None = None) -> list[Verdict]:
        """
        Decide W, W⁻¹, their algebra and the commutant of W.

        A strict inequality counts only when its margin exceeds τ = relative_tau · r.

        Args:
            profile: Spectral profile (chain-consistent)
            witnesses: Orbit witness reports for W and/or W⁻¹

        Returns:
            One Verdict per subject

        Raises:
            VerdictConflict: If a rule and a witness disagree on a subject
        """
        tau = self.relative_tau * profile.r
        r3_plus = profile.r3_plus.estimate
        r2_minus = profile.r2_minus.estimate

        r1_margin = profile.r - r3_plus
        r2_margin = r2_minus - profile.r1 if profile.invertible else None
        r4_margin = r2_minus - r3_plus
        r1_fires = r1_margin > tau
        r2_fires = r2_margin is not None and r2_margin > tau
        r4_fires = r4_margin > tau

        found = {
            _WITNESS_SUBJECTS[report.subject]: report for report in (witnesses or []) if report.found
        }
        if found:
            # the witnessed orbit lies in the unit-ball orbit of the algebra as well
            found.setdefault(Subject.ALGEBRA, next(iter(found.values())))

        verdicts = [
            self._verdict(Subject.W, r1_fires, Rule.R1_THM_SHIFT, r1_margin, tau, found, [_R1_CAVEAT]),
            self._verdict(
                Subject.W_INVERSE,
                r2_fires,
                Rule.R2_COR_INVERSE,
                r2_margin,
                tau,
                found,
                [] if profile.invertible else ["W is not invertible"],
            ),
            self._verdict(
                Subject.ALGEBRA,
                r1_fires and r2_fires,
                Rule.R3_THM_RATIONAL,
                min(r1_margin, r2_margin) if r2_margin is not None else None,
                tau,
                found,
                [] if r1_fires and r2_fires else ["needs both R1 and R2"],
            ),
            self._verdict(
                Subject.COMMUTANT,
                r4_fires,
                Rule.R4_COMMUTANT_QUOTED,
                r4_margin,
                tau,
                found,
                ["criterion quoted from prior work on commutants of weighted shifts"],
            ),
        ]
        for verdict in verdicts:
            logger.info(f"{verdict.subject.value}: {verdict.conclusion.value} ({verdict.rule.value})")
        return verdicts

    @staticmethod
    def _verdict(
        subject: Subject,
        fires: bool,
        rule: Rule,
        margin: float | None,
        tau: float,
        witnesses: dict[Subject, WitnessReport],
        caveats: list[str],
    ) -> Verdict:
        witness = witnesses.get(subject)
        if fires and witness is not None:
            raise VerdictConflict(f"{rule.value} and an orbit witness disagree on {subject.value}")
        if fires:
            return Verdict(
                subject=subject, conclusion=Conclusion.STRONGLY_COMPACT, rule=rule, margin=margin, caveats=caveats
            )
        if witness is not None:
            return Verdict(
                subject=subject,
                conclusion=Conclusion.NOT_STRONGLY_COMPACT,
                rule=Rule.R5_ORBIT_WITNESS,
                margin=margin,
                caveats=[witness.explanation],
                witness=witness,
            )
        blocked = f"{rule.value} blocked: margin {margin:.6g} <= tau {tau:.3g}" if margin is not None else (
            f"{rule.value} not applicable"
        )
        return Verdict(
            subject=subject, conclusion=Conclusion.INCONCLUSIVE, rule=Rule.NONE, margin=margin,
            caveats=[blocked, *caveats],
        )
