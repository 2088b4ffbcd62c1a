"""Values with a certified error radius."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class BoundedReal:
    """The closed interval [value - radius, value + radius].

    Arithmetic adds radii (first-order accounting, no outward rounding).
    Operations that build a BoundedReal document where their radius
    comes from.
    """

    value: float
    radius: float = 0.0

    def __post_init__(self):
        if not self.radius >= 0.0:
            raise ValueError(f"radius must be non-negative, got {self.radius}")

    @property
    def lower(self) -> float:
        return self.value - self.radius

    @property
    def upper(self) -> float:
        return self.value + self.radius

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= x <= self.upper + slack

    def overlaps(self, other: "BoundedReal") -> bool:
        return self.lower <= other.upper and other.lower <= self.upper

    def sign(self) -> int | None:
        """Strict sign of the interval, or None if it straddles zero."""
        if self.lower > 0:
            return 1
        if self.upper < 0:
            return -1
        if self.value == 0.0 and self.radius == 0.0:
            return 0
        return None

    def __add__(self, other):
        if isinstance(other, BoundedReal):
            return BoundedReal(self.value + other.value, self.radius + other.radius)
        return BoundedReal(self.value + float(other), self.radius)

    __radd__ = __add__

    def __neg__(self):
        return BoundedReal(-self.value, self.radius)

    def __sub__(self, other):
        return self + (-other if isinstance(other, BoundedReal) else -float(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, k: float):
        k = float(k)
        return BoundedReal(self.value * k, self.radius * abs(k))

    __rmul__ = __mul__
