"""Nonnegative reals stored by their natural logarithm.

Marginal likelihoods of a few thousand DNA symbols are around 10^-2000,
far below the smallest double, so every probability in the package travels
as a :class:`LogValue`.  The log magnitude is normally a float; an
``mpmath.mpf`` is accepted too, which is how the high-precision code paths
keep 16+ significant digits through to formatting.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Union

import mpmath

Real = Union[float, "mpmath.mpf"]

__all__ = ["LogValue", "log_sum"]


def _is_mp(value: Any) -> bool:
    return isinstance(value, mpmath.mpf)


@dataclass(frozen=True)
class LogValue:
    """A value ``v >= 0`` held as ``log(v)``; ``is_zero`` marks exactly zero."""

    log: Real = 0.0
    is_zero: bool = False

    def __post_init__(self):
        if self.is_zero:
            object.__setattr__(self, "log", -math.inf)
        elif not _is_mp(self.log):
            if math.isnan(self.log) or self.log == math.inf:
                raise ValueError(f"invalid log magnitude {self.log!r}")
            if self.log == -math.inf:
                object.__setattr__(self, "is_zero", True)

    @classmethod
    def zero(cls) -> "LogValue":
        return cls(-math.inf, True)

    @classmethod
    def one(cls) -> "LogValue":
        return cls(0.0)

    @classmethod
    def from_value(cls, value) -> "LogValue":
        if value < 0:
            raise ValueError("LogValue only represents nonnegative numbers")
        if value == 0:
            return cls.zero()
        if _is_mp(value):
            return cls(mpmath.log(value))
        return cls(math.log(value))

    @property
    def sign(self) -> int:
        return 0 if self.is_zero else 1

    @property
    def log10(self) -> Real:
        if self.is_zero:
            return -math.inf
        if _is_mp(self.log):
            return self.log / mpmath.log(10)
        return self.log / math.log(10)

    def value(self) -> float:
        """The plain float (underflows to 0.0 for tiny magnitudes)."""
        if self.is_zero:
            return 0.0
        return math.exp(float(self.log))

    __float__ = value

    def __mul__(self, other: "LogValue") -> "LogValue":
        if self.is_zero or other.is_zero:
            return LogValue.zero()
        return LogValue(self.log + other.log)

    def __truediv__(self, other: "LogValue") -> "LogValue":
        if other.is_zero:
            raise ZeroDivisionError("division by a zero LogValue")
        if self.is_zero:
            return LogValue.zero()
        return LogValue(self.log - other.log)

    def __pow__(self, exponent) -> "LogValue":
        if self.is_zero:
            if exponent <= 0:
                raise ZeroDivisionError("zero to a nonpositive power")
            return LogValue.zero()
        return LogValue(self.log * exponent)

    def __add__(self, other: "LogValue") -> "LogValue":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        hi, lo = (self.log, other.log) if self.log >= other.log else (other.log, self.log)
        if _is_mp(hi) or _is_mp(lo):
            return LogValue(hi + mpmath.log1p(mpmath.exp(lo - hi)))
        return LogValue(hi + math.log1p(math.exp(lo - hi)))

    def __lt__(self, other: "LogValue") -> bool:
        return self.log < other.log

    def __le__(self, other: "LogValue") -> bool:
        return self.log <= other.log

    def __gt__(self, other: "LogValue") -> bool:
        return self.log > other.log

    def __ge__(self, other: "LogValue") -> bool:
        return self.log >= other.log

    def __repr__(self) -> str:
        if self.is_zero:
            return "LogValue(0)"
        return f"LogValue(log={self.log!r})"


def log_sum(values) -> LogValue:
    """Sum of LogValues without leaving the log domain."""
    values = [v for v in values if not v.is_zero]
    if not values:
        return LogValue.zero()
    top = max(v.log for v in values)
    if any(_is_mp(v.log) for v in values):
        return LogValue(top + mpmath.log(mpmath.fsum(mpmath.exp(v.log - top) for v in values)))
    return LogValue(top + math.log(math.fsum(math.exp(v.log - top) for v in values)))
