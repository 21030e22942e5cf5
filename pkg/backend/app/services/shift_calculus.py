"""Exact functional calculus of a weighted shift on finitely supported vectors."""
import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from app.config import settings
from app.exceptions import NoConvergence, NotInvertible, PreconditionViolated
from app.models.lattice import NormEstimate, SplitReport
from app.services.weight_sequence import WeightSequence
from app.utils.lattice_vector import LatticeVector, combine
from app.utils.shift_polynomial import ShiftPolynomial

logger = logging.getLogger(__name__)

# relative headroom so rounding in the bound never drops it below a computed norm
UPPER_BOUND_SLACK = 1e-12


@dataclass(frozen=True)
class TruncatedOperator:
    """Compression P_N p(W) P_N to coordinates [−N, N] as a banded sparse matrix."""

    half_width: int
    matrix: sp.csr_matrix

    @property
    def dimension(self) -> int:
        return 2 * self.half_width + 1

    def adjoint(self) -> sp.csr_matrix:
        # conjugate transpose of the band, no numerical differentiation
        return self.matrix.conj().T.tocsr()

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


class ShiftCalculus:
    """Service applying Wⁿ, p(W) + q(W⁻¹) and estimating truncated operator norms."""

    def __init__(self, norm_tolerance: float | None = None):
        """
        Initialize the calculus.

        Args:
            norm_tolerance: Default convergence tolerance for norm estimation
        """
        self.norm_tolerance = norm_tolerance or settings.norm_tolerance

    def apply_shift(self, w: WeightSequence, x: LatticeVector, power: int) -> LatticeVector:
        """
        Exact image W^power x.

        We_n = w_n e_{n+1} and W⁻¹e_n = e_{n-1}/w_{n-1}, so the support moves by power
        and each amplitude picks up a window product computed in the log domain.

        Args:
            w: Weight sequence
            x: Finitely supported vector
            power: Integer power (negative powers need an invertible shift)

        Returns:
            LatticeVector W^power x

        Raises:
            NotInvertible: For a negative power of a non-invertible shift
        """
        if power < 0 and not w.invertible:
            raise NotInvertible("negative powers need an invertible shift")
        if power == 0 or x.is_zero:
            return x
        idx = x.indices
        if power > 0:
            prefix = w.prefix_sums(int(idx.min()), int(idx.max()) + power)
            log_factors = prefix.log_sum(idx, idx + power)
            arg_factors = prefix.arg_sum(idx, idx + power)
        else:
            steps = -power
            prefix = w.prefix_sums(int(idx.min()) - steps, int(idx.max()))
            log_factors = -prefix.log_sum(idx - steps, idx)
            arg_factors = -prefix.arg_sum(idx - steps, idx)
        return x.reweighted(power, log_factors, arg_factors)

    def apply_polynomial(self, w: WeightSequence, p: ShiftPolynomial, x: LatticeVector) -> LatticeVector:
        """
        Exact Σ a_n Wⁿx + Σ b_n W⁻ⁿx; finitely supported vectors are closed under p(W).

        Args:
            w: Weight sequence
            p: Shift polynomial
            x: Finitely supported vector

        Returns:
            LatticeVector p(W)x
        """
        return combine([self.apply_shift(w, x, power).scaled(c) for power, c in p.terms()])

    def truncate(self, w: WeightSequence, p: ShiftPolynomial, half_width: int) -> TruncatedOperator:
        """
        Assemble P_N p(W) P_N; Wⁿ fills the n-th subdiagonal, W⁻ⁿ the n-th superdiagonal.

        Args:
            w: Weight sequence
            p: Shift polynomial
            half_width: N, so coordinates run over [−N, N]

        Returns:
            TruncatedOperator
        """
        if half_width < max(p.bandwidth, 1):
            raise PreconditionViolated(f"half_width {half_width} is below the polynomial degree {p.bandwidth}")
        dimension = 2 * half_width + 1
        prefix = w.prefix_sums(-half_width - p.inverse_degree, half_width + p.degree + 1)
        diagonals, offsets = [], []
        for power, coefficient in p.terms():
            if abs(power) >= dimension:
                continue
            if power >= 0:
                # column j maps to row j + power, j in [−N, N − power]
                cols = np.arange(-half_width, half_width - power + 1, dtype=np.int64)
                logs = prefix.log_sum(cols, cols + power)
                args = prefix.arg_sum(cols, cols + power)
            else:
                steps = -power
                cols = np.arange(-half_width + steps, half_width + 1, dtype=np.int64)
                logs = -prefix.log_sum(cols - steps, cols)
                args = -prefix.arg_sum(cols - steps, cols)
            diagonals.append(coefficient * np.exp(logs + 1j * args))
            offsets.append(-power)
        if not diagonals:
            matrix = sp.csr_matrix((dimension, dimension), dtype=np.complex128)
        else:
            matrix = sp.diags(diagonals, offsets, shape=(dimension, dimension), format="csr", dtype=np.complex128)
        return TruncatedOperator(half_width=half_width, matrix=matrix)

    def op_norm_upper_bound(self, w: WeightSequence, p: ShiftPolynomial) -> float:
        """
        Triangle-inequality bound Σ|a_n|·‖Wⁿ‖ + Σ|b_n|·‖W⁻ⁿ‖.

        ‖Wⁿ‖ = sup_k |w_k ⋯ w_{k+n-1}| is taken from the rule-level window extrema,
        so every term is exact and the bound dominates every compression norm. The sum
        is inflated by UPPER_BOUND_SLACK to absorb floating rounding.

        Args:
            w: Weight sequence
            p: Shift polynomial

        Returns:
            Upper bound on ‖p(W)‖
        """
        total = 0.0
        for power, coefficient in p.terms():
            total += abs(coefficient) * float(np.exp(w.operator_power_log_norm(power)))
        return total * (1.0 + UPPER_BOUND_SLACK)

    def op_norm_truncated(
        self,
        w: WeightSequence,
        p: ShiftPolynomial,
        half_width: int,
        tol: float | None = None,
        method: str = "lanczos",
    ) -> NormEstimate:
        """
        Estimate ‖P_N p(W) P_N‖ from the top eigenvalue of the Gram operator.

        Both methods start from the normalized all-ones vector and share the
        iteration budget 10·N·degree. "power" is plain power iteration stopping
        when successive Rayleigh estimates differ by less than tol; "lanczos"
        runs the implicitly restarted Lanczos iteration of ARPACK on the same
        Gram operator.

        Args:
            w: Weight sequence
            p: Shift polynomial
            half_width: N ≥ degree(p)
            tol: Convergence tolerance
            method: "lanczos" or "power"

        Returns:
            NormEstimate bracketed by [estimate·(1 − 10·tol), op_norm_upper_bound]

        Raises:
            NoConvergence: If the iteration budget is exhausted
        """
        tol = tol or self.norm_tolerance
        operator = self.truncate(w, p, half_width)
        matrix, adjoint = operator.matrix, operator.adjoint()
        budget = 10 * half_width * max(p.bandwidth, 1)
        start = np.ones(operator.dimension, dtype=np.complex128) / np.sqrt(operator.dimension)

        if method == "power":
            estimate, iterations = self._power_iteration(matrix, adjoint, start, tol, budget)
        elif method == "lanczos":
            gram = LinearOperator(
                (operator.dimension, operator.dimension),
                matvec=lambda v: adjoint @ (matrix @ v),
                dtype=np.complex128,
            )
            try:
                top = eigsh(gram, k=1, which="LA", v0=start, tol=tol, maxiter=budget, return_eigenvectors=False)
            except ArpackNoConvergence as exc:
                raise NoConvergence(f"Lanczos did not converge within {budget} iterations") from exc
            estimate, iterations = float(np.sqrt(max(float(np.real(top[0])), 0.0))), None
        else:
            raise PreconditionViolated(f"Unknown norm method: {method}")

        upper = self.op_norm_upper_bound(w, p)
        logger.debug(f"Truncated norm N={half_width} ({method}): {estimate:.12g} <= {upper:.12g}")
        return NormEstimate(
            half_width=half_width,
            method=method,
            estimate=estimate,
            lower=estimate * (1.0 - 10.0 * tol),
            upper=upper,
            converged=True,
            iterations=iterations,
        )

    @staticmethod
    def _power_iteration(matrix, adjoint, start: np.ndarray, tol: float, budget: int) -> tuple[float, int]:
        vector = start
        previous = None
        for iteration in range(1, budget + 1):
            image = matrix @ vector
            estimate = float(np.linalg.norm(image))
            gram_image = adjoint @ image
            size = float(np.linalg.norm(gram_image))
            if size == 0.0:
                return 0.0, iteration
            vector = gram_image / size
            if previous is not None and abs(estimate - previous) < tol:
                return estimate, iteration
            previous = estimate
        raise NoConvergence(f"Power iteration did not converge within {budget} iterations", last_estimate=previous)

    def check_orthogonality_split(
        self, w: WeightSequence, p: ShiftPolynomial, q: ShiftPolynomial, k: int
    ) -> SplitReport:
        """
        Compare p(W)e_k + q(W⁻¹)e_k with its two parts for q(0) = 0.

        p(W)e_k lives on indices ≥ k and q(W⁻¹)e_k on indices < k, so the parts are orthogonal.

        Args:
            w: Invertible weight sequence
            p: Polynomial in W (its inverse part is ignored)
            q: Polynomial in W⁻¹ (its W-part is ignored)
            k: Basis index

        Returns:
            SplitReport
        """
        e_k = LatticeVector.basis(k)
        forward = self.apply_polynomial(w, p.forward_part(), e_k)
        backward = self.apply_polynomial(w, q.inverse_part(), e_k)
        total = forward + backward
        disjoint = bool(
            (forward.is_zero or forward.indices.min() >= k) and (backward.is_zero or backward.indices.max() < k)
        )
        forward_norm, inverse_norm, sum_norm = forward.norm(), backward.norm(), total.norm()
        slack = 1e-12 * sum_norm
        return SplitReport(
            basis_index=k,
            forward_norm=forward_norm,
            inverse_norm=inverse_norm,
            sum_norm=sum_norm,
            supports_disjoint=disjoint,
            pythagoras_deviation=abs(sum_norm**2 - forward_norm**2 - inverse_norm**2),
            forward_dominated=forward_norm <= sum_norm + slack,
            inverse_dominated=inverse_norm <= sum_norm + slack,
        )
