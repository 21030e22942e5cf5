"""Bi-infinite weight sequences of injective bilateral weighted shifts."""
import logging
import threading
from dataclasses import dataclass
from typing import Any

import numpy as np
from pydantic import ValidationError

from app.config import settings
from app.exceptions import InvalidRule, NotInvertible, PreconditionViolated
from app.models.weights import (
    ConstantRule,
    LacunaryBlocksRule,
    PeriodicRule,
    TableRule,
    TwoSidedStepRule,
    WeightRule,
    weight_rule_adapter,
)

logger = logging.getLogger(__name__)


def lacunary_mask(indices: np.ndarray) -> np.ndarray:
    """
    Mark the indices k with 2^m ≤ k ≤ 2^m + m for some integer m ≥ 1.

    Since m < 2^m, such an m must equal floor(log2 k), so one exponent per index suffices.

    Args:
        indices: Integer indices

    Returns:
        Boolean mask, True inside a block
    """
    k = np.asarray(indices, dtype=np.int64)
    positive = np.where(k >= 2, k, 2)
    _, exponent = np.frexp(positive.astype(np.float64))
    m = exponent.astype(np.int64) - 1
    return (k >= 2) & (positive - np.left_shift(np.int64(1), m) <= m)


@dataclass(frozen=True)
class PrefixSums:
    """Cumulative ln|w_j| and arg(w_j) over the index window [lo, hi)."""

    lo: int
    hi: int
    log_cumulative: np.ndarray
    arg_cumulative: np.ndarray

    def covers(self, a: int, b: int) -> bool:
        return self.lo <= a and b <= self.hi

    def log_sum(self, a, b):
        """Σ_{j=a}^{b-1} ln|w_j|; accepts scalars or integer arrays."""
        return self.log_cumulative[np.asarray(b) - self.lo] - self.log_cumulative[np.asarray(a) - self.lo]

    def arg_sum(self, a, b):
        """Σ_{j=a}^{b-1} arg w_j; accepts scalars or integer arrays."""
        return self.arg_cumulative[np.asarray(b) - self.lo] - self.arg_cumulative[np.asarray(a) - self.lo]


class WeightSequence:
    """Immutable weight data (w_n) for We_n = w_n e_{n+1}, with exact magnitude bounds."""

    def __init__(self, rule: WeightRule):
        """
        Initialize the sequence and compute its exact magnitude bounds.

        Args:
            rule: Validated weight rule
        """
        self.rule = rule
        self._table = self._rule_table(rule)
        self.magnitude_sup, self.magnitude_inf = self._magnitude_bounds(rule)
        self._prefix_cache: dict[tuple[int, int], PrefixSums] = {}
        self._lock = threading.Lock()

    @classmethod
    def from_config(cls, config: dict[str, Any] | WeightRule) -> "WeightSequence":
        """Build a sequence from a JSON-style rule object with a "kind" discriminator."""
        if not isinstance(config, dict):
            return cls(config)
        try:
            rule = weight_rule_adapter.validate_python(config)
        except ValidationError as exc:
            raise InvalidRule(f"Invalid weight rule: {exc}") from exc
        return cls(rule)

    def __repr__(self) -> str:
        return f"WeightSequence({self.rule.kind}, sup={self.magnitude_sup:g}, inf={self.magnitude_inf:g})"

    @property
    def invertible(self) -> bool:
        return self.magnitude_inf > 0.0

    @staticmethod
    def _rule_table(rule: WeightRule) -> np.ndarray | None:
        if isinstance(rule, PeriodicRule):
            return np.asarray(rule.values, dtype=np.complex128)
        if isinstance(rule, TableRule):
            return np.asarray(rule.entries, dtype=np.complex128)
        return None

    def _magnitude_bounds(self, rule: WeightRule) -> tuple[float, float]:
        match rule:
            case ConstantRule(value=value):
                magnitudes = [abs(value)]
            case PeriodicRule():
                magnitudes = np.abs(self._table).tolist()
            case TwoSidedStepRule(negative_value=negative, nonnegative_value=nonnegative):
                magnitudes = [abs(negative), abs(nonnegative)]
            case LacunaryBlocksRule(hi=hi, lo=lo):
                magnitudes = [abs(hi), abs(lo)]
            case TableRule(left_fill=left, right_fill=right):
                magnitudes = np.abs(self._table).tolist() + [abs(left), abs(right)]
            case _:
                raise InvalidRule(f"Unknown weight rule: {rule!r}")
        return float(max(magnitudes)), float(min(magnitudes))

    def values(self, indices) -> np.ndarray:
        """
        Evaluate w_n at an array of integer indices.

        Args:
            indices: Integer indices (any shape)

        Returns:
            Complex array of weights, same shape as indices
        """
        idx = np.asarray(indices, dtype=np.int64)
        match self.rule:
            case ConstantRule(value=value):
                return np.full(idx.shape, value, dtype=np.complex128)
            case PeriodicRule():
                return self._table[np.mod(idx, len(self._table))]
            case TwoSidedStepRule(negative_value=negative, nonnegative_value=nonnegative):
                return np.where(idx < 0, negative, nonnegative).astype(np.complex128)
            case LacunaryBlocksRule(hi=hi, lo=lo):
                return np.where(lacunary_mask(idx), hi, lo).astype(np.complex128)
            case TableRule(offset=offset, left_fill=left, right_fill=right):
                out = np.where(idx < offset, left, right).astype(np.complex128)
                position = idx - offset
                inside = (position >= 0) & (position < len(self._table))
                out[inside] = self._table[position[inside]]
                return out
        raise InvalidRule(f"Unknown weight rule: {self.rule!r}")

    def eval(self, n: int) -> complex:
        """Return w_n; never zero."""
        return complex(self.values(np.array([n]))[0])

    def log_magnitudes(self, lo: int, hi: int) -> np.ndarray:
        """ln|w_j| for j in [lo, hi)."""
        return np.log(np.abs(self.values(np.arange(lo, hi, dtype=np.int64))))

    def prefix_sums(self, lo: int, hi: int) -> PrefixSums:
        """
        Cumulative log-magnitude and argument sums over [lo, hi).

        Windows are cached; a cached window that covers the request is reused, and a
        new window evicts the cached windows it covers.

        Args:
            lo: First index of the window
            hi: One past the last index

        Returns:
            PrefixSums over a window containing [lo, hi)
        """
        if lo > hi:
            raise PreconditionViolated(f"empty window requires lo <= hi, got [{lo}, {hi})")
        with self._lock:
            for window in self._prefix_cache.values():
                if window.covers(lo, hi):
                    return window
            weights = self.values(np.arange(lo, hi, dtype=np.int64))
            log_cumulative = np.concatenate(([0.0], np.cumsum(np.log(np.abs(weights)))))
            arg_cumulative = np.concatenate(([0.0], np.cumsum(np.angle(weights))))
            window = PrefixSums(lo, hi, log_cumulative, arg_cumulative)
            for key in [key for key in self._prefix_cache if window.covers(*key)]:
                del self._prefix_cache[key]
            self._prefix_cache[(lo, hi)] = window
            logger.debug(f"Built prefix sums over [{lo}, {hi}) for {self!r}")
            return window

    def log_magnitude_prefix(self, a: int, b: int) -> float:
        """
        Σ_{n=a}^{b-1} ln|w_n|, the log of a sliding product.

        Args:
            a: First index
            b: One past the last index (a ≤ b)

        Returns:
            Log-magnitude of w_a ⋯ w_{b-1}; 0 for the empty product

        Raises:
            PreconditionViolated: If a > b
        """
        if a > b:
            raise PreconditionViolated(f"log_magnitude_prefix requires a <= b, got a={a}, b={b}")
        if a == b:
            return 0.0
        return float(self.prefix_sums(a, b).log_sum(a, b))

    def window_log_extrema(self, n: int) -> tuple[float, float]:
        """
        Exact inf and sup over all k of ln|w_k ⋯ w_{k+n-1}|.

        For a weighted shift these are ln m(Wⁿ) and ln ‖Wⁿ‖.

        Args:
            n: Window length (n ≥ 1)

        Returns:
            Tuple of (min, max) window log-magnitudes
        """
        if n < 1:
            raise PreconditionViolated(f"window length must be positive, got {n}")
        match self.rule:
            case ConstantRule() | TwoSidedStepRule() | LacunaryBlocksRule():
                # long pure runs of every weight value occur, mixed windows lie in between
                return n * float(np.log(self.magnitude_inf)), n * float(np.log(self.magnitude_sup))
            case PeriodicRule():
                period = len(self._table)
                sums = self._window_sums(0, period, n)
                return float(sums.min()), float(sums.max())
            case TableRule(offset=offset, left_fill=left, right_fill=right):
                sums = self._window_sums(offset - n + 1, offset + len(self._table), n)
                candidates = [sums.min(), sums.max(), n * np.log(abs(left)), n * np.log(abs(right))]
                return float(min(candidates)), float(max(candidates))
        raise InvalidRule(f"Unknown weight rule: {self.rule!r}")

    def _window_sums(self, k_lo: int, k_hi: int, n: int) -> np.ndarray:
        """Log sums of the windows starting at k in [k_lo, k_hi) with length n."""
        prefix = self.prefix_sums(k_lo, k_hi + n - 1)
        starts = np.arange(k_lo, k_hi, dtype=np.int64)
        return prefix.log_sum(starts, starts + n)

    def operator_power_log_norm(self, n: int) -> float:
        """ln ‖Wⁿ‖ for n ≥ 0 and ln ‖W⁻ⁿ‖ = -ln m(W^|n|) for n < 0."""
        if n == 0:
            return 0.0
        if n > 0:
            return self.window_log_extrema(n)[1]
        if not self.invertible:
            raise NotInvertible("negative powers need an invertible shift")
        return -self.window_log_extrema(-n)[0]

    def inverse_conjugate(self, horizon: int | None = None) -> "WeightSequence":
        """
        Weights of V = U*W⁻¹U, where Ue_n = e_{-n}: v_n = 1/w_{-(n+1)}.

        Args:
            horizon: Table half-width used for rules without a closed reflected form

        Returns:
            Weight sequence of V, rule-typed where a closed form exists

        Raises:
            NotInvertible: If inf |w_n| = 0
        """
        if not self.invertible:
            raise NotInvertible(f"{self!r} is not bounded below")
        match self.rule:
            case ConstantRule(value=value):
                rule = ConstantRule(value=1 / value)
            case PeriodicRule():
                period = len(self._table)
                reflected = self._table[np.mod(-(np.arange(period) + 1), period)]
                rule = PeriodicRule.model_construct(kind="periodic", values=(1 / reflected).tolist())
            case TwoSidedStepRule(negative_value=negative, nonnegative_value=nonnegative):
                rule = TwoSidedStepRule(negative_value=1 / nonnegative, nonnegative_value=1 / negative)
            case TableRule(offset=offset, left_fill=left, right_fill=right):
                rule = TableRule.model_construct(
                    kind="table",
                    offset=-offset - len(self._table),
                    entries=(1 / self._table[::-1]).tolist(),
                    left_fill=1 / right,
                    right_fill=1 / left,
                )
            case LacunaryBlocksRule(lo=lo):
                horizon = horizon or settings.inverse_table_horizon
                n = np.arange(-horizon, horizon, dtype=np.int64)
                # beyond -horizon the reflected blocks are approximated by 1/lo
                rule = TableRule.model_construct(
                    kind="table",
                    offset=-horizon,
                    entries=(1 / self.values(-(n + 1))).tolist(),
                    left_fill=1 / lo,
                    right_fill=1 / lo,
                )
                logger.info(f"Reflected lacunary weights tabulated over [-{horizon}, {horizon})")
            case _:
                raise InvalidRule(f"Unknown weight rule: {self.rule!r}")
        return WeightSequence(rule)

    def scaled(self, factor: complex) -> "WeightSequence":
        """Sequence with every weight multiplied by a nonzero scalar."""
        if factor == 0:
            raise PreconditionViolated("scaling factor must be nonzero")
        payload = self.rule.model_dump()
        match self.rule:
            case ConstantRule(value=value):
                payload["value"] = value * factor
            case PeriodicRule(values=values):
                payload["values"] = [v * factor for v in values]
            case TwoSidedStepRule(negative_value=negative, nonnegative_value=nonnegative):
                payload["negative_value"] = negative * factor
                payload["nonnegative_value"] = nonnegative * factor
            case LacunaryBlocksRule(hi=hi, lo=lo):
                payload["hi"] = hi * factor
                payload["lo"] = lo * factor
            case TableRule(entries=entries, left_fill=left, right_fill=right):
                payload["entries"] = [v * factor for v in entries]
                payload["left_fill"] = left * factor
                payload["right_fill"] = right * factor
        return WeightSequence.from_config(payload)
