"""Constructive compactness certificates for the orbit of a basis vector."""
import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from app.config import settings
from app.exceptions import (
    BoundViolated,
    CertificateViolated,
    DegenerateSpectrum,
    HypothesisUnmet,
    PreconditionViolated,
)
from app.models.certificate import CauchyReport, CompactnessCertificate, ValidationReport
from app.models.spectral import SpectralProfile
from app.services.shift_calculus import ShiftCalculus
from app.services.spectral_estimator import SpectralEstimator
from app.services.weight_sequence import WeightSequence
from app.utils.lattice_vector import LatticeVector
from app.utils.sequence_tails import tail_length
from app.utils.shift_polynomial import ShiftPolynomial, random_polynomial

logger = logging.getLogger(__name__)

# slack on ln‖Wⁿe_k‖ ≤ n·ln c, absorbs rounding in the prefix sums
_LOG_SLACK = 1e-12


def geometric_tail(ratio: float, n1: int) -> float:
    """Σ_{n > n1} ratioⁿ = ratio^{n1+1} / (1 − ratio) for 0 < ratio < 1."""
    return ratio ** (n1 + 1) / (1.0 - ratio)


def tail_cutoff(ratio: float, epsilon: float) -> int:
    """Smallest n1 ≥ 0 with ratio^{n1+1} / (1 − ratio) < epsilon."""
    n1 = max(0, math.floor(math.log(epsilon * (1.0 - ratio)) / math.log(ratio)))
    # the closed form can be off by one after rounding
    while geometric_tail(ratio, n1) >= epsilon:
        n1 += 1
    while n1 > 0 and geometric_tail(ratio, n1 - 1) < epsilon:
        n1 -= 1
    return n1


class CompactnessCertifier:
    """Service building and validating certificates (d, c, n₀, n₁, ε) for basis vectors."""

    def __init__(
        self,
        calculus: ShiftCalculus | None = None,
        estimator: SpectralEstimator | None = None,
        cauchy_tolerance: float | None = None,
        workers: int = 1,
    ):
        """
        Initialize the certifier.

        Args:
            calculus: Functional calculus used for residuals and normalization
            estimator: Spectral estimator used for local radii
            cauchy_tolerance: Slack added to the Cauchy coefficient bound
            workers: Threads used for independent samples
        """
        self.calculus = calculus or ShiftCalculus()
        self.estimator = estimator or SpectralEstimator()
        self.cauchy_tolerance = cauchy_tolerance if cauchy_tolerance is not None else settings.cauchy_tolerance
        self.workers = max(1, workers)

    @staticmethod
    def full_spectrum_radius(profile: SpectralProfile) -> float:
        """
        Radius d of the disk η(σ(W)); 0 is interior exactly when r(W) > 0.

        Raises:
            DegenerateSpectrum: If the profile's spectral radius is 0
        """
        if not profile.r > 0:
            raise DegenerateSpectrum("spectral radius estimate is 0, the full spectrum has no interior")
        return profile.r

    @staticmethod
    def suggest_c(local_radius: float, d: float) -> float:
        """Midpoint of (r(e_k, W), d)."""
        return (local_radius + d) / 2.0

    def build_certificate(
        self,
        w: WeightSequence,
        k: int,
        c: float,
        epsilon: float,
        horizon: int,
        d: float,
        local_radius: float | None = None,
    ) -> CompactnessCertificate:
        """
        Find n₀ and n₁ for e_k.

        n₀ is the first index after which ‖Wⁿe_k‖ ≤ cⁿ holds up to the horizon;
        n₁ ≥ n₀ is the smallest cutoff whose geometric tail Σ_{n>n₁}(c/d)ⁿ is below ε.

        Args:
            w: Weight sequence
            k: Basis index
            c: Growth constant with r(e_k, W) < c < d
            epsilon: Target distance to F
            horizon: Largest n for which the orbit bound is checked
            d: Full-spectrum radius
            local_radius: Estimate of r(e_k, W), checked against c when given

        Returns:
            CompactnessCertificate

        Raises:
            PreconditionViolated: If c, d, epsilon or horizon are out of range
            HypothesisUnmet: If ‖Wⁿe_k‖ > cⁿ still occurs in the last quarter of the horizon
        """
        if not (0 < c < d):
            raise PreconditionViolated(f"need 0 < c < d, got c={c}, d={d}")
        if epsilon <= 0 or horizon < 1:
            raise PreconditionViolated(f"need epsilon > 0 and horizon >= 1, got {epsilon}, {horizon}")
        if local_radius is not None and not local_radius < c:
            raise PreconditionViolated(f"c={c} does not exceed the local radius estimate {local_radius}")

        logs = self.estimator.orbit_log_norms(w, k, horizon)
        ns = np.arange(horizon + 1)
        violations = np.flatnonzero(logs > ns * math.log(c) + _LOG_SLACK)
        n0 = 0
        if violations.size:
            last = int(violations[-1])
            if last > horizon - tail_length(horizon, 0.25):
                raise HypothesisUnmet(
                    f"‖Wⁿe_{k}‖ > {c}ⁿ at n={last}, inside the last quarter of horizon {horizon}",
                    last_violation=last,
                )
            n0 = last + 1

        ratio = c / d
        n1 = max(n0, tail_cutoff(ratio, epsilon))
        certificate = CompactnessCertificate(
            basis_index=k,
            d=d,
            c=c,
            n0=n0,
            n1=n1,
            epsilon=epsilon,
            horizon_checked=horizon,
            tail_bound=geometric_tail(ratio, n1),
            local_radius_estimate=local_radius,
        )
        logger.info(f"Certificate for e_{k}: n0={n0}, n1={n1}, c={c:.6g}, d={d:.6g}")
        return certificate

    def certify(
        self, w: WeightSequence, profile: SpectralProfile, k: int, epsilon: float,
        c: float | None = None, horizon: int | None = None,
    ) -> CompactnessCertificate:
        """Certificate for e_k with d from the profile and c defaulting to the suggested midpoint."""
        d = self.full_spectrum_radius(profile)
        horizon = horizon or profile.r3_plus.horizon_n
        local = self.estimator.local_radius(w, k, horizon).estimate
        if c is None:
            c = self.suggest_c(local, d)
        return self.build_certificate(w, k, c, epsilon, horizon, d, local_radius=local)

    # -- validation ---------------------------------------------------------

    def _normalizer(self, w: WeightSequence, p: ShiftPolynomial, k: int, normalization: str) -> float:
        if normalization == "upper":
            return self.calculus.op_norm_upper_bound(w, p)
        if normalization == "truncated":
            return self.calculus.op_norm_truncated(w, p, abs(k) + p.bandwidth + 1).estimate
        raise PreconditionViolated(f"Unknown normalization: {normalization}")

    def _sample_residual(
        self, w: WeightSequence, cert: CompactnessCertificate, rng: np.random.Generator,
        max_degree: int, normalization: str,
    ) -> tuple[ShiftPolynomial, float]:
        p = random_polynomial(rng, max_degree)
        scale = self._normalizer(w, p, cert.basis_index, normalization)
        if scale > 0:
            p = p.scaled(1.0 / scale)
        image = self.calculus.apply_polynomial(w, p, LatticeVector.basis(cert.basis_index))
        return p, image.restrict(lo=cert.basis_index + cert.n1 + 1).norm()

    def validate_certificate(
        self,
        w: WeightSequence,
        cert: CompactnessCertificate,
        num_samples: int | None = None,
        max_degree: int | None = None,
        seed: int | None = None,
        normalization: str = "upper",
    ) -> ValidationReport:
        """
        Check p(W)e_k ∈ F + εB on seeded random polynomials.

        Each sample gets its own child stream of the seed, so results do not depend
        on how samples are scheduled. With normalization="truncated" the samples are
        scaled by a compression norm, which may be below ‖p(W)‖; that mode only
        reports residuals and never raises.

        Args:
            w: Weight sequence
            cert: Certificate to validate
            num_samples: Number of random polynomials
            max_degree: Largest sampled degree (> cert.n1)
            seed: Root seed
            normalization: "upper" (sound) or "truncated" (diagnostic)

        Returns:
            ValidationReport

        Raises:
            CertificateViolated: If a residual reaches epsilon under upper-bound normalization
        """
        num_samples = num_samples or settings.validation_samples
        max_degree = max_degree or settings.validation_max_degree
        seed = settings.default_seed if seed is None else seed
        if max_degree <= cert.n1:
            raise PreconditionViolated(f"max_degree {max_degree} must exceed n1={cert.n1}")

        streams = [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(num_samples)]

        def run(rng: np.random.Generator) -> tuple[ShiftPolynomial, float]:
            return self._sample_residual(w, cert, rng, max_degree, normalization)

        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                results = list(pool.map(run, streams))
        else:
            results = [run(rng) for rng in streams]

        residuals = np.array([residual for _, residual in results])
        worst = int(np.argmax(residuals)) if residuals.size else None
        violations = int(np.count_nonzero(residuals >= cert.epsilon))
        report = ValidationReport(
            basis_index=cert.basis_index,
            n1=cert.n1,
            epsilon=cert.epsilon,
            normalization=normalization,
            num_samples=num_samples,
            max_degree=max_degree,
            sample_seed=seed,
            max_residual=float(residuals.max()) if residuals.size else 0.0,
            exact_zero_samples=sum(1 for p, residual in results if p.degree <= cert.n1 and residual == 0.0),
            violations=violations,
            worst_sample=worst,
        )
        if violations and normalization == "upper":
            polynomial, residual = results[worst]
            raise CertificateViolated(
                f"sample {worst} left the {cert.epsilon}-neighbourhood of F (residual {residual:.3e})",
                polynomial=polynomial.to_json(),
                residual=residual,
            )
        if violations:
            logger.warning(f"{violations} truncated-normalized samples exceed epsilon={cert.epsilon}")
        logger.info(f"Validated e_{cert.basis_index}: max residual {report.max_residual:.3e} over {num_samples} samples")
        return report

    # -- Cauchy coefficient bound ------------------------------------------

    def cauchy_coefficient_check(
        self, w: WeightSequence, p: ShiftPolynomial, d: float, strict: bool = True
    ) -> CauchyReport:
        """
        Check |a_n| ≤ d⁻ⁿ + tol for a polynomial already normalized to ‖p(W)‖ ≤ 1.

        A failure means d overshoots the true full-spectrum radius.

        Args:
            w: Weight sequence (kept for symmetry with the other checks)
            p: Normalized polynomial
            d: Claimed full-spectrum radius
            strict: Raise on failure instead of reporting it

        Returns:
            CauchyReport

        Raises:
            BoundViolated: If strict and some coefficient exceeds its bound
        """
        if d <= 0:
            raise PreconditionViolated(f"d must be positive, got {d}")
        coefficients = np.abs(np.asarray(p.coefficients, dtype=np.complex128))
        if coefficients.size == 0:
            return CauchyReport(d=d, tolerance=self.cauchy_tolerance, min_margin=math.inf, worst_degree=0, holds=True)
        ns = np.arange(coefficients.size)
        margins = np.exp(-ns * math.log(d)) + self.cauchy_tolerance - coefficients
        worst = int(np.argmin(margins))
        report = CauchyReport(
            d=d,
            tolerance=self.cauchy_tolerance,
            min_margin=float(margins[worst]),
            worst_degree=worst,
            holds=bool(margins[worst] >= 0),
        )
        if strict and not report.holds:
            raise BoundViolated(
                f"|a_{worst}| exceeds d^-{worst} for d={d} by {-report.min_margin:.3e}",
                degree=worst,
                margin=report.min_margin,
            )
        return report

    def sampled_cauchy_check(
        self, w: WeightSequence, d: float, num_samples: int, max_degree: int, seed: int | None = None
    ) -> CauchyReport:
        """Cauchy check over seeded random polynomials normalized by op_norm_upper_bound."""
        seed = settings.default_seed if seed is None else seed
        worst: CauchyReport | None = None
        for child in np.random.SeedSequence(seed).spawn(num_samples):
            p = random_polynomial(np.random.default_rng(child), max_degree)
            p = p.scaled(1.0 / self.calculus.op_norm_upper_bound(w, p))
            report = self.cauchy_coefficient_check(w, p, d, strict=False)
            if worst is None or report.min_margin < worst.min_margin:
                worst = report
        if worst is None:
            raise PreconditionViolated("num_samples must be positive")
        return worst.model_copy(update={"samples": num_samples})

    def adversarial_cauchy_search(self, w: WeightSequence, d: float, max_power: int = 64) -> CauchyReport:
        """
        Scan monomials λᵐ/‖Wᵐ‖ for m ≤ max_power and return the first violating one.

        ‖Wᵐ‖^{1/m} tends to r(W), so any d above r(W) is exposed for large m.
        """
        last: CauchyReport | None = None
        for m in range(1, max_power + 1):
            p = ShiftPolynomial.monomial(m)
            p = p.scaled(1.0 / self.calculus.op_norm_upper_bound(w, p))
            last = self.cauchy_coefficient_check(w, p, d, strict=False)
            if not last.holds:
                logger.info(f"Cauchy bound with d={d} fails at monomial degree {m}")
                return last
        return last
