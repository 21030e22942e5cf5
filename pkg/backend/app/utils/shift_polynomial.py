"""Polynomials p(W) + q(W⁻¹) with q(0) = 0 for the shift's functional calculus."""
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np

from app.models.weights import dump_complex


def _trim(values: Sequence[complex]) -> tuple[complex, ...]:
    values = [complex(v) for v in values]
    while values and values[-1] == 0:
        values.pop()
    return tuple(values)


@dataclass(frozen=True)
class ShiftPolynomial:
    """
    a_0 + a_1 W + … + a_m W^m  +  b_1 W⁻¹ + … + b_l W⁻ˡ.

    The inverse part has no constant term, so it always represents q(W⁻¹) with q(0) = 0.
    Trailing zero coefficients are trimmed on construction.
    """

    coefficients: tuple[complex, ...] = ()
    inverse_coefficients: tuple[complex, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _trim(self.coefficients))
        object.__setattr__(self, "inverse_coefficients", _trim(self.inverse_coefficients))

    @classmethod
    def monomial(cls, power: int, coefficient: complex = 1.0) -> "ShiftPolynomial":
        """coefficient · Wᵖᵒʷᵉʳ (negative powers go to the inverse part)."""
        if power >= 0:
            return cls(coefficients=(0,) * power + (coefficient,))
        return cls(inverse_coefficients=(0,) * (-power - 1) + (coefficient,))

    @classmethod
    def from_coefficients(
        cls, coefficients: Sequence[complex], inverse_coefficients: Sequence[complex] = ()
    ) -> "ShiftPolynomial":
        return cls(tuple(coefficients), tuple(inverse_coefficients))

    @property
    def degree(self) -> int:
        """Index of the last nonzero a_n (0 for a polynomial without a W-part)."""
        return max(len(self.coefficients) - 1, 0)

    @property
    def inverse_degree(self) -> int:
        return len(self.inverse_coefficients)

    @property
    def bandwidth(self) -> int:
        return max(self.degree, self.inverse_degree)

    @property
    def is_zero(self) -> bool:
        return not self.coefficients and not self.inverse_coefficients

    def terms(self) -> Iterator[tuple[int, complex]]:
        """Nonzero (power, coefficient) pairs, negative powers for the inverse part."""
        for power, coefficient in enumerate(self.coefficients):
            if coefficient != 0:
                yield power, coefficient
        for power, coefficient in enumerate(self.inverse_coefficients, start=1):
            if coefficient != 0:
                yield -power, coefficient

    def scaled(self, factor: complex) -> "ShiftPolynomial":
        return ShiftPolynomial(
            tuple(factor * a for a in self.coefficients),
            tuple(factor * b for b in self.inverse_coefficients),
        )

    def forward_part(self) -> "ShiftPolynomial":
        return ShiftPolynomial(self.coefficients)

    def inverse_part(self) -> "ShiftPolynomial":
        return ShiftPolynomial(inverse_coefficients=self.inverse_coefficients)

    def __add__(self, other: "ShiftPolynomial") -> "ShiftPolynomial":
        def padded_sum(x, y):
            size = max(len(x), len(y))
            return tuple(np.pad(np.asarray(x, complex), (0, size - len(x))) + np.pad(np.asarray(y, complex), (0, size - len(y))))

        return ShiftPolynomial(
            padded_sum(self.coefficients, other.coefficients),
            padded_sum(self.inverse_coefficients, other.inverse_coefficients),
        )

    def to_json(self) -> dict[str, list]:
        return {
            "coefficients": [dump_complex(a) for a in self.coefficients],
            "inverse_coefficients": [dump_complex(b) for b in self.inverse_coefficients],
        }


def random_polynomial(
    rng: np.random.Generator,
    max_degree: int,
    inverse_degree: int = 0,
    forward: bool = True,
    full_degree: bool = False,
) -> ShiftPolynomial:
    """
    Draw a polynomial with complex Gaussian coefficients.

    Args:
        rng: Random generator (one stream per sample keeps results schedule-independent)
        max_degree: Largest degree of the W-part; the degree is drawn uniformly in [0, max_degree]
        inverse_degree: Largest degree of the W⁻¹-part (0 for none), also drawn uniformly from 1
        forward: Whether to draw a W-part at all
        full_degree: Use the largest degrees instead of drawing them

    Returns:
        ShiftPolynomial
    """

    def gaussian(size: int) -> tuple[complex, ...]:
        draws = (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2.0)
        return tuple(complex(a) for a in draws)

    coefficients: tuple[complex, ...] = ()
    if forward:
        degree = max_degree if full_degree else int(rng.integers(0, max_degree + 1))
        coefficients = gaussian(degree + 1)
    inverse: tuple[complex, ...] = ()
    if inverse_degree > 0:
        inverse = gaussian(inverse_degree if full_degree else int(rng.integers(1, inverse_degree + 1)))
    return ShiftPolynomial(coefficients, inverse)
