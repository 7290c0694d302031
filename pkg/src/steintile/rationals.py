"""Parsing and formatting of exact rationals in the reduced "p/q" wire format."""

from __future__ import annotations

from fractions import Fraction

from .errors import ValidationError


def parse_rational(text) -> Fraction:
    """Parse "p/q" (or a bare integer string) into an exact Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"malformed rational literal {text!r}") from exc


def format_rational(value) -> str:
    """Format an exact rational as a reduced string: "p/q", or "p" when integral."""
    f = Fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"
