"""Pydantic models for weight rules of bilateral weighted shifts."""
from typing import Annotated, Any, Literal, Union

from pydantic import (
    AfterValidator,
    BaseModel,
    ConfigDict,
    Field,
    PlainSerializer,
    PlainValidator,
    TypeAdapter,
    WithJsonSchema,
)


def parse_complex(value: Any) -> complex:
    """
    Coerce JSON-friendly input into a complex scalar.

    Accepts numbers, ``[re, im]`` pairs, complex values and strings such as ``"1+2j"``.

    Args:
        value: Raw input value

    Returns:
        Complex scalar

    Raises:
        ValueError: If the value cannot be read as a complex number
    """
    if isinstance(value, bool):
        raise ValueError("booleans are not weights")
    if isinstance(value, (int, float, complex)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        re, im = value
        return complex(float(re), float(im))
    if isinstance(value, str):
        return complex(value.replace(" ", ""))
    raise ValueError(f"cannot read {value!r} as a complex scalar")


def dump_complex(value: complex) -> float | list[float]:
    """Serialize a complex scalar as a plain number when it is real."""
    if value.imag == 0.0:
        return value.real
    return [value.real, value.imag]


def _nonzero(value: complex) -> complex:
    if value == 0:
        raise ValueError("weights must be nonzero")
    return value


ComplexScalar = Annotated[
    complex,
    PlainValidator(parse_complex),
    PlainSerializer(dump_complex),
    WithJsonSchema(
        {
            "anyOf": [
                {"type": "number"},
                {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
            ]
        }
    ),
]

Weight = Annotated[ComplexScalar, AfterValidator(_nonzero)]


class _RuleBase(BaseModel):
    model_config = ConfigDict(frozen=True)


class ConstantRule(_RuleBase):
    """w_n = value for every n."""

    kind: Literal["constant"] = "constant"
    value: Weight


class PeriodicRule(_RuleBase):
    """w_n = values[n mod len(values)] with the nonnegative modulus."""

    kind: Literal["periodic"] = "periodic"
    values: list[Weight] = Field(..., min_length=1)


class TwoSidedStepRule(_RuleBase):
    """w_n = negative_value for n < 0 and nonnegative_value for n ≥ 0."""

    kind: Literal["two_sided_step"] = "two_sided_step"
    negative_value: Weight
    nonnegative_value: Weight


class LacunaryBlocksRule(_RuleBase):
    """w_k = hi when 2^m ≤ k ≤ 2^m + m for some m ≥ 1, else lo (lo for all k < 0)."""

    kind: Literal["lacunary_blocks"] = "lacunary_blocks"
    hi: Weight
    lo: Weight


class TableRule(_RuleBase):
    """Explicit entries on [offset, offset + len(entries)), fills elsewhere."""

    kind: Literal["table"] = "table"
    offset: int = 0
    entries: list[Weight] = Field(..., min_length=1)
    left_fill: Weight
    right_fill: Weight


WeightRule = Annotated[
    Union[ConstantRule, PeriodicRule, TwoSidedStepRule, LacunaryBlocksRule, TableRule],
    Field(discriminator="kind"),
]

weight_rule_adapter: TypeAdapter[WeightRule] = TypeAdapter(WeightRule)
