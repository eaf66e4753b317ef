"""Fixed-scale decimal arithmetic shared by the rule evaluator and codecs.

Money values are exact decimals with at most ``MAX_SCALE`` fractional
digits.  Addition, subtraction and multiplication are exact (a precision
trap fires rather than ever rounding silently); division is the single
rounding operation and always rounds half-even at scale 9.  Canonical form
strips trailing fractional zeros so economically equal values compare and
encode identically (2.50 == 2.5).
"""

from __future__ import annotations

import re
from decimal import ROUND_HALF_EVEN, Context, Decimal, Inexact, InvalidOperation, Overflow

MAX_SCALE = 9

# Exact ops trap Inexact: silent rounding is never acceptable for payables.
_EXACT = Context(prec=200, traps=[Inexact, InvalidOperation, Overflow])
# Division context: rounds at high precision, quantized explicitly below.
_DIV = Context(prec=200, rounding=ROUND_HALF_EVEN, traps=[InvalidOperation, Overflow])

_QUANTA = [Decimal(1).scaleb(-s) for s in range(MAX_SCALE + 1)]

_NUMBER_RE = re.compile(r"[+-]?[0-9]+(\.[0-9]{1,9})?\Z")


class ScaleError(ValueError):
    """A decimal result or literal exceeds the supported fractional scale."""


def canon(value: Decimal) -> Decimal:
    """Canonical form: no trailing fractional zeros, no positive exponent."""
    if not value.is_finite():
        raise ValueError(f"non-finite decimal: {value}")
    value = value.normalize(_EXACT)
    if value.as_tuple().exponent > 0:
        value = value.quantize(Decimal(1), context=_EXACT)
    if not value:  # -0 -> 0
        value = Decimal(0)
    return value


def scale_of(value: Decimal) -> int:
    exp = value.as_tuple().exponent
    return max(0, -int(exp))


def check_scale(value: Decimal, limit: int = MAX_SCALE) -> Decimal:
    if scale_of(value) > limit:
        raise ScaleError(f"scale {scale_of(value)} exceeds {limit}: {value}")
    return value


def parse_decimal(text: str) -> Decimal:
    """Parse a literal: optional sign, digits, optional fraction of <= 9 digits."""
    if not _NUMBER_RE.match(text):
        raise ValueError(f"invalid decimal literal: {text!r}")
    return canon(Decimal(text))


def dec(value: str | int | Decimal) -> Decimal:
    """Coerce to a validated canonical decimal."""
    if isinstance(value, Decimal):
        return check_scale(canon(value))
    if isinstance(value, int):
        return Decimal(value)
    return check_scale(parse_decimal(value))


def dadd(a: Decimal, b: Decimal) -> Decimal:
    return check_scale(canon(_EXACT.add(a, b)))


def dsub(a: Decimal, b: Decimal) -> Decimal:
    return check_scale(canon(_EXACT.subtract(a, b)))


def dmul(a: Decimal, b: Decimal) -> Decimal:
    return check_scale(canon(_EXACT.multiply(a, b)))


def ddiv(a: Decimal, b: Decimal) -> Decimal:
    """Divide, rounding half-even at scale 9."""
    return ddiv_at(a, b, MAX_SCALE)


def ddiv_at(a: Decimal, b: Decimal, places: int) -> Decimal:
    """Divide, rounding half-even at ``places`` fractional digits."""
    if not b:
        raise ZeroDivisionError("decimal division by zero")
    q = _DIV.divide(a, b)
    return canon(q.quantize(_QUANTA[places], rounding=ROUND_HALF_EVEN, context=_DIV))


def pad_scale(value: Decimal, places: int) -> Decimal:
    """Requantize to exactly ``places`` fractional digits (display scale)."""
    return value.quantize(_QUANTA[places], rounding=ROUND_HALF_EVEN, context=_DIV)


def dround(value: Decimal, places: int) -> Decimal:
    """Round half-even to ``places`` fractional digits (0..9)."""
    if not 0 <= places <= MAX_SCALE:
        raise ScaleError(f"round places out of range: {places}")
    return canon(value.quantize(_QUANTA[places], rounding=ROUND_HALF_EVEN, context=_DIV))


def format_decimal(value: Decimal) -> str:
    """Positional rendering of the canonical value, never scientific."""
    return f"{canon(value):f}"


def sign_unscaled_scale(value: Decimal) -> tuple[int, int, int]:
    """Decompose a canonical value into (sign, unscaled magnitude, scale)."""
    value = canon(value)
    sign, digits, exp = value.as_tuple()
    unscaled = int("".join(map(str, digits)))
    if unscaled == 0:
        return 0, 0, 0
    return sign, unscaled, -int(exp) if exp < 0 else 0


def encode_decimal(value: Decimal) -> bytes:
    """Wire form: sign byte, scale byte, 4-byte BE magnitude length, magnitude.

    The magnitude is the unscaled integer in minimal big-endian bytes
    (empty for zero).  Canonicalization first makes the encoding unique
    per numeric value.
    """
    sign, unscaled, scale = sign_unscaled_scale(value)
    mag = unscaled.to_bytes((unscaled.bit_length() + 7) // 8, "big") if unscaled else b""
    return bytes([sign, scale]) + len(mag).to_bytes(4, "big") + mag
