from fractions import Fraction
from typing import Union

Scalar = Union[int, Fraction]


def as_fraction(value: Union[int, Fraction, str]) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_fraction(value)
    raise TypeError(f"cannot read {value!r} as an exact rational")


def format_fraction(value: Scalar) -> str:
    """Serialize an exact rational as "p/q" ("p" when the denominator is 1)."""
    value = as_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        if int(den) == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def is_integral(value: Scalar) -> bool:
    return as_fraction(value).denominator == 1
