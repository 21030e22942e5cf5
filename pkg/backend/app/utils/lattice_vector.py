"""Finitely supported vectors on the integer lattice, stored in log-polar form."""
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

_EMPTY_INT = np.empty(0, dtype=np.int64)
_EMPTY_FLOAT = np.empty(0, dtype=np.float64)
_EMPTY_COMPLEX = np.empty(0, dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class LatticeVector:
    """
    Vector Σ amplitude_i e_i over the orthonormal basis (e_i), i ∈ ℤ, with finite support.

    Every amplitude is stored as exp(log_modulus) · phase so products of weights
    spanning hundreds of orders of magnitude stay representable. Indices are sorted
    and unique and no stored amplitude is zero.
    """

    indices: np.ndarray
    log_moduli: np.ndarray
    phases: np.ndarray

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls) -> "LatticeVector":
        return cls(_EMPTY_INT, _EMPTY_FLOAT, _EMPTY_COMPLEX)

    @classmethod
    def basis(cls, k: int, amplitude: complex = 1.0) -> "LatticeVector":
        """The vector amplitude · e_k."""
        return cls.from_amplitudes({k: amplitude})

    @classmethod
    def from_amplitudes(cls, amplitudes: Mapping[int, complex]) -> "LatticeVector":
        items = [(int(i), complex(a)) for i, a in amplitudes.items() if a != 0]
        if not items:
            return cls.zero()
        indices = np.array([i for i, _ in items], dtype=np.int64)
        values = np.array([a for _, a in items], dtype=np.complex128)
        moduli = np.abs(values)
        return cls.from_log_polar(indices, np.log(moduli), values / moduli)

    @classmethod
    def from_log_polar(cls, indices, log_moduli, phases) -> "LatticeVector":
        """
        Canonicalize raw log-polar triples: sort, merge repeated indices, drop zeros.

        Args:
            indices: Integer indices (repeats allowed)
            log_moduli: ln|amplitude| per entry
            phases: Unit-modulus phase per entry

        Returns:
            Canonical LatticeVector
        """
        indices = np.asarray(indices, dtype=np.int64)
        log_moduli = np.asarray(log_moduli, dtype=np.float64)
        phases = np.asarray(phases, dtype=np.complex128)
        live = np.isfinite(log_moduli)
        indices, log_moduli, phases = indices[live], log_moduli[live], phases[live]
        if indices.size == 0:
            return cls.zero()

        order = np.argsort(indices, kind="stable")
        indices, log_moduli, phases = indices[order], log_moduli[order], phases[order]
        unique, starts, counts = np.unique(indices, return_index=True, return_counts=True)
        if np.all(counts == 1):
            return cls(indices, log_moduli, phases)

        peak = np.maximum.reduceat(log_moduli, starts)
        relative = phases * np.exp(log_moduli - np.repeat(peak, counts))
        summed = np.add.reduceat(relative, starts)
        modulus = np.abs(summed)
        merged_log = peak + np.log(np.where(modulus > 0, modulus, 1.0))
        merged_phase = np.where(modulus > 0, summed / np.where(modulus > 0, modulus, 1.0), 0)
        # singletons keep their stored form untouched
        single = counts == 1
        merged_log[single] = log_moduli[starts[single]]
        merged_phase[single] = phases[starts[single]]
        keep = single | (modulus > 0)
        return cls(unique[keep], merged_log[keep], merged_phase[keep])

    # -- inspection ---------------------------------------------------------

    def __len__(self) -> int:
        return int(self.indices.size)

    def __repr__(self) -> str:
        return f"LatticeVector(support={self.support}, norm={self.norm():.6g})"

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(int(i) for i in self.indices)

    @property
    def is_zero(self) -> bool:
        return self.indices.size == 0

    def amplitudes(self) -> dict[int, complex]:
        values = np.exp(self.log_moduli) * self.phases
        return {int(i): complex(a) for i, a in zip(self.indices, values)}

    def amplitude(self, k: int) -> complex:
        position = np.searchsorted(self.indices, k)
        if position < self.indices.size and self.indices[position] == k:
            return complex(np.exp(self.log_moduli[position]) * self.phases[position])
        return 0j

    def log_norm(self) -> float:
        """ln‖x‖ with ‖x‖² = Σ|amplitude|²; -inf for the zero vector."""
        if self.is_zero:
            return float("-inf")
        return float(logsumexp(2.0 * self.log_moduli) / 2.0)

    def norm(self) -> float:
        return float(np.exp(self.log_norm()))

    def to_dense(self, lo: int, hi: int) -> np.ndarray:
        """Coordinates lo..hi-1 as a dense complex array (entries outside the support are 0)."""
        out = np.zeros(hi - lo, dtype=np.complex128)
        inside = (self.indices >= lo) & (self.indices < hi)
        out[self.indices[inside] - lo] = np.exp(self.log_moduli[inside]) * self.phases[inside]
        return out

    def to_json(self) -> dict[str, list[float]]:
        return {str(i): [a.real, a.imag] for i, a in self.amplitudes().items()}

    # -- arithmetic ---------------------------------------------------------

    def restrict(self, lo: int | None = None, hi: int | None = None) -> "LatticeVector":
        """Coordinate restriction to lo ≤ i < hi (open ends when None)."""
        mask = np.ones(self.indices.size, dtype=bool)
        if lo is not None:
            mask &= self.indices >= lo
        if hi is not None:
            mask &= self.indices < hi
        return LatticeVector(self.indices[mask], self.log_moduli[mask], self.phases[mask])

    def scaled(self, factor: complex) -> "LatticeVector":
        if factor == 0 or self.is_zero:
            return LatticeVector.zero()
        modulus = abs(factor)
        return LatticeVector(self.indices, self.log_moduli + np.log(modulus), self.phases * (factor / modulus))

    def reweighted(self, offset: int, log_factors: np.ndarray, arg_factors: np.ndarray) -> "LatticeVector":
        """Move entry i to i + offset, multiplying it by exp(log_factor + i·arg_factor)."""
        return LatticeVector(
            self.indices + offset,
            self.log_moduli + log_factors,
            self.phases * np.exp(1j * arg_factors),
        )

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        return combine([self, other])

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(self.indices, self.log_moduli, -self.phases)

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        return self + (-other)

    def __mul__(self, factor: complex) -> "LatticeVector":
        return self.scaled(factor)

    __rmul__ = __mul__

    def distance(self, other: "LatticeVector") -> float:
        return (self - other).norm()


def combine(vectors: list[LatticeVector]) -> LatticeVector:
    """Sum of several lattice vectors in one canonicalization pass."""
    vectors = [v for v in vectors if not v.is_zero]
    if not vectors:
        return LatticeVector.zero()
    if len(vectors) == 1:
        return vectors[0]
    return LatticeVector.from_log_polar(
        np.concatenate([v.indices for v in vectors]),
        np.concatenate([v.log_moduli for v in vectors]),
        np.concatenate([v.phases for v in vectors]),
    )
