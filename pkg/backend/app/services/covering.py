"""Empirical precompactness probes: greedy ε-nets, orbit witnesses and sum-set coverings."""
import logging

import numpy as np

from app.config import settings
from app.exceptions import NotInvertible, PreconditionViolated
from app.models.certificate import CoveringReport, SumSetReport, WitnessReport, WitnessSubject
from app.services.shift_calculus import ShiftCalculus
from app.services.weight_sequence import WeightSequence
from app.utils.lattice_vector import LatticeVector
from app.utils.shift_polynomial import random_polynomial

logger = logging.getLogger(__name__)


def _stack(points: list[LatticeVector]) -> np.ndarray:
    """Dense rows over the union of the supports."""
    supports = [p.indices for p in points if not p.is_zero]
    if not supports:
        return np.zeros((len(points), 1), dtype=np.complex128)
    lo = int(min(s.min() for s in supports))
    hi = int(max(s.max() for s in supports)) + 1
    return np.vstack([p.to_dense(lo, hi) for p in points])


class CoveringAnalyzer:
    """Service probing precompactness of unit-ball orbits on finite samples."""

    def __init__(self, calculus: ShiftCalculus | None = None, witness_delta: float | None = None):
        self.calculus = calculus or ShiftCalculus()
        self.witness_delta = witness_delta or settings.witness_delta

    def greedy_net(
        self, points: list[LatticeVector], epsilon: float, sample_seed: int | None = None
    ) -> CoveringReport:
        """
        Farthest-point greedy ε-net.

        The first point is the first center; each further center is the point
        farthest from the current net, until every point is within epsilon.

        Args:
            points: Finite point set (order matters for ties)
            epsilon: Covering radius
            sample_seed: Seed that produced the points, echoed in the report

        Returns:
            CoveringReport
        """
        if epsilon <= 0:
            raise PreconditionViolated(f"epsilon must be positive, got {epsilon}")
        if not points:
            return CoveringReport(epsilon=epsilon, num_points=0, net_size=0, max_residual=0.0, sample_seed=sample_seed)

        rows = _stack(points)
        centers = [0]
        nearest = np.linalg.norm(rows - rows[0], axis=1)
        while True:
            farthest = int(np.argmax(nearest))
            if nearest[farthest] <= epsilon:
                break
            centers.append(farthest)
            nearest = np.minimum(nearest, np.linalg.norm(rows - rows[farthest], axis=1))

        logger.debug(f"Greedy net: {len(centers)} centers for {len(points)} points at eps={epsilon}")
        return CoveringReport(
            epsilon=epsilon,
            num_points=len(points),
            net_size=len(centers),
            max_residual=float(nearest.max()),
            sample_seed=sample_seed,
            centers=centers,
        )

    def orbit_witness_noncompact(
        self, w: WeightSequence, horizon: int | None = None, direction: str = "inverse"
    ) -> WitnessReport:
        """
        Look for a uniformly separated orbit {W⁻ⁿe_0} (or {Wⁿe_0}) inside the unit-ball orbit.

        When m(W) ≥ 1 every W⁻ⁿ is a contraction, so the monomials μⁿ have norm ≤ 1
        at W⁻¹ and the orbit lies in its unit-ball orbit. The vectors sit on distinct
        basis coordinates, so the pairwise distances are √(sᵢ² + sⱼ²) and the minimum
        comes from the two smallest norms.

        Args:
            w: Weight sequence
            horizon: Number of orbit vectors
            direction: "inverse" probes W⁻¹, "forward" probes W (requires ‖W‖ ≤ 1)

        Returns:
            WitnessReport, found only when the minimum distance is at least delta

        Raises:
            NotInvertible: For the inverse direction on a non-invertible shift
        """
        horizon = horizon or settings.witness_horizon
        delta = self.witness_delta
        if horizon < 2:
            raise PreconditionViolated(f"witness horizon must be at least 2, got {horizon}")
        ns = np.arange(1, horizon + 1, dtype=np.int64)

        if direction == "inverse":
            if not w.invertible:
                raise NotInvertible("the inverse orbit needs an invertible shift")
            subject = WitnessSubject.W_INVERSE
            if w.magnitude_inf < 1.0:
                return WitnessReport(
                    subject=subject, direction=direction, found=False, horizon=horizon, delta=delta,
                    explanation=f"m(W) = {w.magnitude_inf:.6g} < 1, so ‖W⁻¹‖ > 1 and the orbit may leave the unit ball",
                )
            log_norms = -w.prefix_sums(-horizon, 0).log_sum(-ns, 0)
        elif direction == "forward":
            subject = WitnessSubject.W
            if w.magnitude_sup > 1.0:
                return WitnessReport(
                    subject=subject, direction=direction, found=False, horizon=horizon, delta=delta,
                    explanation=f"‖W‖ = {w.magnitude_sup:.6g} > 1, so the orbit may leave the unit ball",
                )
            log_norms = w.prefix_sums(0, horizon).log_sum(0, ns)
        else:
            raise PreconditionViolated(f"Unknown witness direction: {direction}")

        smallest = np.sort(log_norms)[:2]
        min_distance = float(np.exp(0.5 * np.logaddexp(2.0 * smallest[0], 2.0 * smallest[1])))
        found = min_distance >= delta
        explanation = (
            f"{horizon} orbit vectors pairwise at least {min_distance:.6g} apart, no finite {delta / 2}-net"
            if found
            else f"orbit vectors come within {min_distance:.6g} < {delta} of each other"
        )
        logger.info(f"Witness scan ({direction}, horizon={horizon}): min distance {min_distance:.12g}")
        return WitnessReport(
            subject=subject, direction=direction, found=found, horizon=horizon, delta=delta,
            min_distance=min_distance, explanation=explanation,
        )

    def exact_orbit(self, w: WeightSequence, horizon: int, power_sign: int = -1) -> list[LatticeVector]:
        """W^{±n}e_0 for n = 1..horizon."""
        e_0 = LatticeVector.basis(0)
        return [self.calculus.apply_shift(w, e_0, power_sign * n) for n in range(1, horizon + 1)]

    def sample_orbit(
        self,
        w: WeightSequence,
        k: int,
        num_samples: int,
        max_degree: int,
        seed: int | None = None,
        inverse_degree: int = 0,
        forward: bool = True,
        full_degree: bool = False,
    ) -> list[LatticeVector]:
        """Seeded points p(W)e_k with p normalized by op_norm_upper_bound, one stream per sample."""
        seed = settings.default_seed if seed is None else seed
        e_k = LatticeVector.basis(k)
        points = []
        for child in np.random.SeedSequence(seed).spawn(num_samples):
            p = random_polynomial(np.random.default_rng(child), max_degree, inverse_degree, forward, full_degree)
            p = p.scaled(1.0 / self.calculus.op_norm_upper_bound(w, p))
            points.append(self.calculus.apply_polynomial(w, p, e_k))
        return points

    def sum_set_covering(
        self,
        w: WeightSequence,
        k: int,
        epsilon: float,
        num_samples: int,
        max_degree: int,
        seed: int | None = None,
    ) -> SumSetReport:
        """
        Compare the net of {a(W, W⁻¹)e_k} with the nets of its forward and inverse parts.

        Each sampled a = p + q with q(0) = 0 is normalized by op_norm_upper_bound, so
        p(W)e_k and q(W⁻¹)e_k have orthogonal supports and norms dominated by the sum.
        A greedy ε-net is ε-separated, and the part nets at ε/4 sum to an ε/2-cover,
        so net_size ≤ forward_net_size · inverse_net_size.

        Args:
            w: Invertible weight sequence
            k: Basis index
            epsilon: Covering radius for the combined points
            num_samples: Number of sampled polynomials
            max_degree: Largest degree of both parts
            seed: Root seed

        Returns:
            SumSetReport
        """
        if not w.invertible:
            raise NotInvertible("the algebra generated by W and W⁻¹ needs an invertible shift")
        seed = settings.default_seed if seed is None else seed
        e_k = LatticeVector.basis(k)
        combined, forward_parts, inverse_parts = [], [], []
        for child in np.random.SeedSequence(seed).spawn(num_samples):
            a = random_polynomial(np.random.default_rng(child), max_degree, inverse_degree=max_degree)
            a = a.scaled(1.0 / self.calculus.op_norm_upper_bound(w, a))
            forward = self.calculus.apply_polynomial(w, a.forward_part(), e_k)
            backward = self.calculus.apply_polynomial(w, a.inverse_part(), e_k)
            forward_parts.append(forward)
            inverse_parts.append(backward)
            combined.append(forward + backward)

        part_epsilon = epsilon / 4.0
        net = self.greedy_net(combined, epsilon, seed)
        forward_net = self.greedy_net(forward_parts, part_epsilon, seed)
        inverse_net = self.greedy_net(inverse_parts, part_epsilon, seed)
        product = forward_net.net_size * inverse_net.net_size
        return SumSetReport(
            basis_index=k,
            epsilon=epsilon,
            part_epsilon=part_epsilon,
            num_points=num_samples,
            net_size=net.net_size,
            forward_net_size=forward_net.net_size,
            inverse_net_size=inverse_net.net_size,
            product_bound=product,
            bound_holds=net.net_size <= product,
            sample_seed=seed,
        )

    def covering_sweep(self, points: list[LatticeVector], epsilons: list[float]) -> list[CoveringReport]:
        """Greedy nets of one point set over several radii (sizes are non-increasing in epsilon)."""
        return [self.greedy_net(points, eps) for eps in sorted(epsilons)]

