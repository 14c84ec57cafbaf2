"""Decimal rendering of LogValues as ``mantissa e exponent`` strings."""
from __future__ import annotations

import re
from decimal import ROUND_HALF_EVEN, Decimal, localcontext

import mpmath

from .logvalue import LogValue

_PATTERN = re.compile(r"^([1-9](?:\.\d*[1-9])?)e(-?\d+)$")

__all__ = ["format_log10", "parse_log10", "log10_parts"]


def log10_parts(v: LogValue, digits: int = 40) -> tuple[Decimal, int]:
    """Unrounded ``(mantissa, exponent)`` with ``1 <= mantissa < 10``."""
    with mpmath.workdps(digits + 20):
        l10 = mpmath.mpf(v.log) / mpmath.log(10)
        exponent = int(mpmath.floor(l10))
        mant = mpmath.power(10, l10 - exponent)
        text = mpmath.nstr(mant, digits + 5, strip_zeros=False)
    return Decimal(text), exponent


def format_log10(v: LogValue, sig: int = 6) -> str:
    """Render ``v`` with ``sig`` significant digits, rounding half to even.

    Trailing zeros of the mantissa are dropped, so ``0.5`` at any precision
    prints as ``5e-1``.

    >>> format_log10(LogValue.from_value(0.5), 1)
    '5e-1'
    """
    if not 1 <= sig <= 17:
        raise ValueError("sig must be between 1 and 17")
    if v.is_zero:
        return "0"
    mant, exponent = log10_parts(v)
    with localcontext() as ctx:
        ctx.prec = 60
        quantum = Decimal(1).scaleb(-(sig - 1))
        rounded = mant.quantize(quantum, rounding=ROUND_HALF_EVEN)
        if rounded >= 10:
            exponent += 1
            rounded = (mant / 10).quantize(quantum, rounding=ROUND_HALF_EVEN)
    text = format(rounded, "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return f"{text}e{exponent}"


def parse_log10(text: str) -> tuple[Decimal, int]:
    """Inverse of :func:`format_log10` on its own output."""
    text = text.strip()
    if text == "0":
        return Decimal(0), 0
    m = _PATTERN.match(text)
    if not m:
        raise ValueError(f"not a formatted value: {text!r}")
    return Decimal(m.group(1)), int(m.group(2))
