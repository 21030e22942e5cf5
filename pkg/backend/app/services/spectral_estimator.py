"""Finite-horizon estimators for the sliding-product quantities of a weighted shift."""
import logging

import numpy as np

from app.config import settings
from app.exceptions import ChainViolation, PreconditionViolated
from app.models.spectral import (
    BoundDirection,
    IdentityReport,
    InverseRelations,
    LocalRadiusEstimate,
    QuantityEstimate,
    QuantityName,
    SpectralProfile,
)
from app.services.weight_sequence import WeightSequence
from app.utils.sequence_tails import running_inf_tail, running_sup_tail

logger = logging.getLogger(__name__)


class SpectralEstimator:
    """Service estimating r±, r₁±, r₂±, r₃±, r(W), r₁(W) and local spectral radii."""

    def __init__(
        self,
        tail_fraction: float | None = None,
        chain_tolerance: float | None = None,
        sliding_horizon_n: int | None = None,
    ):
        """
        Initialize the estimator.

        Args:
            tail_fraction: Share of each sequence used by the limsup/liminf proxies
            chain_tolerance: Log-domain slack allowed in ordering-chain checks
            sliding_horizon_n: Window lengths scanned for the sup/inf-over-k quantities
        """
        self.tail_fraction = tail_fraction or settings.tail_fraction
        self.chain_tolerance = chain_tolerance if chain_tolerance is not None else settings.chain_tolerance
        self.sliding_horizon_n = sliding_horizon_n or settings.sliding_horizon_n

    # -- per-n log sequences ------------------------------------------------

    @staticmethod
    def anchored_logs(w: WeightSequence, side: str, horizon_n: int) -> np.ndarray:
        """(1/n)·ln|w_0⋯w_{n-1}| (plus) or (1/n)·ln|w_{-1}⋯w_{-n}| (minus), n = 1..N."""
        ns = np.arange(1, horizon_n + 1, dtype=np.int64)
        if side == "plus":
            prefix = w.prefix_sums(0, horizon_n)
            return prefix.log_sum(0, ns) / ns
        prefix = w.prefix_sums(-horizon_n, 0)
        return prefix.log_sum(-ns, 0) / ns

    @staticmethod
    def sliding_logs(
        w: WeightSequence, side: str, horizon_n: int, horizon_k: int
    ) -> tuple[np.ndarray, np.ndarray]:
        """
        Sup and inf over window positions of (1/n)·ln|window product|, n = 1..N.

        Plus windows are {k, …, n+k-1} for 0 ≤ k ≤ K; minus windows are
        {-n-k+1, …, -k} for 1 ≤ k ≤ K, so k = 1 is the anchored minus window.

        Args:
            w: Weight sequence
            side: "plus" or "minus"
            horizon_n: Largest window length N
            horizon_k: Position range K

        Returns:
            Tuple of (sup_logs, inf_logs), each of length N
        """
        if side == "plus":
            starts = np.arange(0, horizon_k + 1, dtype=np.int64)
            prefix = w.prefix_sums(0, horizon_k + horizon_n)
        else:
            starts = -np.arange(1, horizon_k + 1, dtype=np.int64) + 1
            prefix = w.prefix_sums(-horizon_k - horizon_n + 1, 0)
        sup_logs = np.empty(horizon_n)
        inf_logs = np.empty(horizon_n)
        for n in range(1, horizon_n + 1):
            if side == "plus":
                sums = prefix.log_sum(starts, starts + n)
            else:
                sums = prefix.log_sum(starts - n, starts)
            sup_logs[n - 1] = sums.max() / n
            inf_logs[n - 1] = sums.min() / n
        return sup_logs, inf_logs

    # -- operations -----------------------------------------------------------

    def _estimate_from_logs(
        self, name: QuantityName, logs: np.ndarray, horizon_n: int, horizon_k: int
    ) -> QuantityEstimate:
        sequence = np.exp(logs)
        if name in (QuantityName.R2_MINUS, QuantityName.R2_PLUS):
            estimate, direction = running_inf_tail(sequence, self.tail_fraction), BoundDirection.HEURISTIC
        elif name in (QuantityName.R3_MINUS, QuantityName.R3_PLUS):
            estimate, direction = running_sup_tail(sequence, self.tail_fraction), BoundDirection.HEURISTIC
        elif name in (QuantityName.R_MINUS, QuantityName.R_PLUS):
            # a finite position range undercounts the sup
            estimate, direction = float(sequence[-1]), BoundDirection.LOWER
        else:
            estimate, direction = float(sequence[-1]), BoundDirection.UPPER
        return QuantityEstimate(
            name=name,
            horizon_n=horizon_n,
            horizon_k=horizon_k,
            sequence=sequence.tolist(),
            estimate=estimate,
            bound_direction=direction,
        )

    def estimate_quantity(
        self, w: WeightSequence, name: QuantityName | str, horizon_n: int, horizon_k: int = 1
    ) -> QuantityEstimate:
        """
        Estimate one of the eight quantities at a finite horizon.

        Args:
            w: Weight sequence
            name: Quantity name (r_minus, r_plus, r1_minus, ..., r3_plus)
            horizon_n: Sequence length (≥ 2)
            horizon_k: Window-position range for sup/inf quantities (≥ 1)

        Returns:
            QuantityEstimate with per-n values and the tail-aggregated estimate
        """
        name = QuantityName(name)
        self._check_horizons(horizon_n, horizon_k)
        if name.sliding:
            sup_logs, inf_logs = self.sliding_logs(w, name.side, horizon_n, horizon_k)
            logs = sup_logs if name.value.startswith("r_") else inf_logs
        else:
            logs = self.anchored_logs(w, name.side, horizon_n)
        return self._estimate_from_logs(name, logs, horizon_n, horizon_k)

    def spectral_profile(
        self,
        w: WeightSequence,
        horizon_n: int | None = None,
        horizon_k: int | None = None,
        sliding_horizon_n: int | None = None,
    ) -> SpectralProfile:
        """
        Aggregate all eight quantities, r(W) = max(r⁻, r⁺) and r₁(W) = min(r₁⁻, r₁⁺).

        Anchored quantities use horizon_n; the sup/inf-over-k quantities scan
        window lengths up to sliding_horizon_n over horizon_k positions.

        Args:
            w: Weight sequence
            horizon_n: Anchored horizon
            horizon_k: Window-position range
            sliding_horizon_n: Largest window length for sliding quantities

        Returns:
            SpectralProfile with chain-consistent estimates

        Raises:
            ChainViolation: If inf_k ≤ anchored ≤ sup_k fails at some n
        """
        horizon_n = horizon_n or settings.horizon_n
        horizon_k = horizon_k or settings.horizon_k
        sliding_n = max(2, min(sliding_horizon_n or self.sliding_horizon_n, horizon_n))
        self._check_horizons(horizon_n, horizon_k)
        logger.info(
            f"Spectral profile of {w!r}: horizon_n={horizon_n}, horizon_k={horizon_k}, sliding_n={sliding_n}"
        )

        estimates: dict[QuantityName, QuantityEstimate] = {}
        for side in ("minus", "plus"):
            anchored = self.anchored_logs(w, side, horizon_n)
            sup_logs, inf_logs = self.sliding_logs(w, side, sliding_n, horizon_k)
            self._check_chain_per_n(side, inf_logs, anchored[:sliding_n], sup_logs)
            names = {
                "r": QuantityName(f"r_{side}"),
                "r1": QuantityName(f"r1_{side}"),
                "r2": QuantityName(f"r2_{side}"),
                "r3": QuantityName(f"r3_{side}"),
            }
            estimates[names["r"]] = self._estimate_from_logs(names["r"], sup_logs, sliding_n, horizon_k)
            estimates[names["r1"]] = self._estimate_from_logs(names["r1"], inf_logs, sliding_n, horizon_k)
            estimates[names["r2"]] = self._estimate_from_logs(names["r2"], anchored, horizon_n, horizon_k)
            estimates[names["r3"]] = self._estimate_from_logs(names["r3"], anchored, horizon_n, horizon_k)
            self._reconcile(estimates, names)

        r = max(estimates[QuantityName.R_MINUS].estimate, estimates[QuantityName.R_PLUS].estimate)
        r1 = min(estimates[QuantityName.R1_MINUS].estimate, estimates[QuantityName.R1_PLUS].estimate)
        profile = SpectralProfile(
            **{name.value: estimate for name, estimate in estimates.items()},
            r=r,
            r1=r1,
            invertible=w.invertible,
            m_of_W=w.magnitude_inf,
        )
        logger.debug(f"Profile estimates: {profile.estimates()}")
        return profile

    def local_radius(self, w: WeightSequence, k: int, horizon_n: int) -> LocalRadiusEstimate:
        """
        Sequence ‖Wⁿe_k‖^{1/n} = |w_k ⋯ w_{n+k-1}|^{1/n} and its limsup proxy r(e_k, W).

        Args:
            w: Weight sequence
            k: Basis index
            horizon_n: Sequence length (≥ 2)

        Returns:
            LocalRadiusEstimate
        """
        self._check_horizons(horizon_n, 1)
        logs = self.orbit_log_norms(w, k, horizon_n)[1:] / np.arange(1, horizon_n + 1)
        sequence = np.exp(logs)
        return LocalRadiusEstimate(
            basis_index=k,
            horizon_n=horizon_n,
            sequence=sequence.tolist(),
            estimate=running_sup_tail(sequence, self.tail_fraction),
        )

    @staticmethod
    def orbit_log_norms(w: WeightSequence, k: int, horizon_n: int) -> np.ndarray:
        """ln‖Wⁿe_k‖ for n = 0..N (entry 0 is ln‖e_k‖ = 0)."""
        prefix = w.prefix_sums(k, k + horizon_n)
        return prefix.log_sum(k, np.arange(k, k + horizon_n + 1, dtype=np.int64))

    def check_local_radius_identities(self, w: WeightSequence, k: int, horizon_n: int) -> IdentityReport:
        """
        Compare ln‖Wⁿe_k‖ against its regrouping through the orbit of e_0.

        k > 0: ln‖Wⁿe_k‖ = ln‖W^{n+k}e_0‖ − ln‖Wᵏe_0‖.
        k < 0, n > −k: ln‖Wⁿe_k‖ = ln‖W^{−k}e_k‖ + ln‖W^{n+k}e_0‖.

        Args:
            w: Weight sequence
            k: Nonzero basis index
            horizon_n: Largest power checked (> |k|)

        Returns:
            IdentityReport with the max absolute deviation
        """
        if k == 0 or horizon_n <= abs(k):
            raise PreconditionViolated(f"need k != 0 and horizon_n > |k|, got k={k}, horizon_n={horizon_n}")
        direct = np.cumsum(w.log_magnitudes(k, k + horizon_n))  # entry n-1 is ln‖Wⁿe_k‖
        ns = np.arange(1, horizon_n + 1, dtype=np.int64)
        prefix = w.prefix_sums(min(k, 0), max(k, 0) + horizon_n)
        if k > 0:
            regrouped = prefix.log_sum(0, ns + k) - prefix.log_sum(0, k)
            valid = np.ones(horizon_n, dtype=bool)
        else:
            valid = ns > -k
            regrouped = prefix.log_sum(k, 0) + prefix.log_sum(0, np.maximum(ns + k, 0))
        deviation = np.abs(direct - regrouped)[valid]
        return IdentityReport(
            basis_index=k,
            horizon_n=horizon_n,
            checked=int(valid.sum()),
            max_deviation=float(deviation.max()) if deviation.size else 0.0,
        )

    def local_radius_agreement(self, w: WeightSequence, ks: list[int], horizon_n: int) -> dict[int, float]:
        """|r(e_k, W) − r(e_0, W)| at the given horizon for each k."""
        reference = self.local_radius(w, 0, horizon_n).estimate
        return {k: abs(self.local_radius(w, k, horizon_n).estimate - reference) for k in ks}

    def inverse_relations(self, w: WeightSequence, profile: SpectralProfile) -> InverseRelations:
        """
        Profile V = U*W⁻¹U and compare r₃⁺(V) with 1/r₂⁻(W) and r(V) with 1/r₁(W).

        Args:
            w: Invertible weight sequence
            profile: Profile of w

        Returns:
            InverseRelations with both deviations
        """
        horizon_n = profile.r2_minus.horizon_n
        horizon_k = profile.r_plus.horizon_k
        sliding_n = profile.r_plus.horizon_n
        table_horizon = max(horizon_n, horizon_k + sliding_n) + 2
        v = w.inverse_conjugate(horizon=table_horizon)
        v_profile = self.spectral_profile(v, horizon_n, horizon_k, sliding_n)
        reciprocal_r2 = 1.0 / profile.r2_minus.estimate
        reciprocal_r1 = 1.0 / profile.r1
        return InverseRelations(
            r3_plus_of_V=v_profile.r3_plus.estimate,
            reciprocal_r2_minus_of_W=reciprocal_r2,
            r_of_V=v_profile.r,
            reciprocal_r1_of_W=reciprocal_r1,
            inverse_norm=1.0 / w.magnitude_inf,
            r3_deviation=abs(v_profile.r3_plus.estimate - reciprocal_r2),
            r_deviation=abs(v_profile.r - reciprocal_r1),
        )

    # -- helpers ------------------------------------------------------------

    @staticmethod
    def _check_horizons(horizon_n: int, horizon_k: int) -> None:
        if horizon_n < 2 or horizon_k < 1:
            raise PreconditionViolated(f"need horizon_n >= 2 and horizon_k >= 1, got {horizon_n}, {horizon_k}")

    def _check_chain_per_n(
        self, side: str, inf_logs: np.ndarray, anchored: np.ndarray, sup_logs: np.ndarray
    ) -> None:
        below = inf_logs - anchored
        above = anchored - sup_logs
        for gaps in (below, above):
            worst = int(np.argmax(gaps))
            if gaps[worst] > self.chain_tolerance:
                raise ChainViolation(
                    f"{side} chain broken at n={worst + 1}: gap {gaps[worst]:.3e}",
                    n=worst + 1,
                    gap=float(gaps[worst]),
                )

    def _reconcile(self, estimates: dict[QuantityName, QuantityEstimate], names: dict[str, QuantityName]) -> None:
        """Enforce r₁ ≤ r₂ ≤ r₃ ≤ r on estimates (true relations of the limits)."""
        r, r1, r2, r3 = (estimates[names[key]] for key in ("r", "r1", "r2", "r3"))
        if r.estimate < r3.estimate:
            estimates[names["r"]] = r.model_copy(update={"estimate": r3.estimate, "reconciled": True})
        if r1.estimate > r2.estimate:
            estimates[names["r1"]] = r1.model_copy(update={"estimate": r2.estimate, "reconciled": True})
        if r2.estimate > r3.estimate + self.chain_tolerance:
            raise ChainViolation(f"{names['r2'].value} exceeds {names['r3'].value}")
