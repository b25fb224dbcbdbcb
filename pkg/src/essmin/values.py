"""Real numbers carried together with an absolute error radius."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ValueWithError:
    value: float
    abs_error: float = 0.0

    def __post_init__(self):
        if not (self.abs_error >= 0 and math.isfinite(self.abs_error)):
            raise ValueError(f"invalid error radius {self.abs_error!r}")

    @property
    def lower(self) -> float:
        return self.value - self.abs_error

    @property
    def upper(self) -> float:
        return self.value + self.abs_error

    def contains(self, x: float) -> bool:
        return self.lower <= x <= self.upper

    def __add__(self, other):
        if isinstance(other, ValueWithError):
            return ValueWithError(self.value + other.value, self.abs_error + other.abs_error)
        return ValueWithError(self.value + other, self.abs_error)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, ValueWithError):
            return ValueWithError(self.value - other.value, self.abs_error + other.abs_error)
        return ValueWithError(self.value - other, self.abs_error)

    def scale(self, k: float) -> "ValueWithError":
        return ValueWithError(k * self.value, abs(k) * self.abs_error)

    def __mul__(self, k):
        if isinstance(k, ValueWithError):
            return NotImplemented
        return self.scale(k)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return f"{self.value:.15g} ± {self.abs_error:.2g}"
