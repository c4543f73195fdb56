"""Exact arithmetic on the two-point sphere {+1, -1}.

A function on the 0-sphere is just an ordered pair of values (the value on
the positive side and the value on the negative side).  Everything here is
exact rational arithmetic so that the expansion algebra built on top can be
tested with straight equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


def as_fraction(x) -> Fraction:
    """Coerce to an exact Fraction.  Floats convert to their exact binary value."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact scalar")


@dataclass(frozen=True)
class SpherePair:
    """Values of a function on the two-point sphere: (value at +1, value at -1)."""

    plus: Fraction
    minus: Fraction

    def __post_init__(self):
        object.__setattr__(self, "plus", as_fraction(self.plus))
        object.__setattr__(self, "minus", as_fraction(self.minus))

    def at(self, w: int) -> Fraction:
        if w == 1:
            return self.plus
        if w == -1:
            return self.minus
        raise ValueError(f"sphere point must be +1 or -1, got {w}")

    def is_zero(self) -> bool:
        return self.plus == 0 and self.minus == 0

    def is_even(self) -> bool:
        return self.plus == self.minus

    def is_odd(self) -> bool:
        return self.plus == -self.minus

    def even_part(self) -> "SpherePair":
        h = Fraction(self.plus + self.minus, 2)
        return SpherePair(h, h)

    def odd_part(self) -> "SpherePair":
        h = Fraction(self.plus - self.minus, 2)
        return SpherePair(h, -h)

    def __add__(self, other: "SpherePair") -> "SpherePair":
        return SpherePair(self.plus + other.plus, self.minus + other.minus)

    def __sub__(self, other: "SpherePair") -> "SpherePair":
        return SpherePair(self.plus - other.plus, self.minus - other.minus)

    def __neg__(self) -> "SpherePair":
        return SpherePair(-self.plus, -self.minus)

    def __mul__(self, other):
        if isinstance(other, SpherePair):
            return SpherePair(self.plus * other.plus, self.minus * other.minus)
        return SpherePair(self.plus * as_fraction(other), self.minus * as_fraction(other))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __str__(self):
        return f"({self.plus}|{self.minus})"


ZERO_PAIR = SpherePair(0, 0)
ONE_PAIR = SpherePair(1, 1)


def parity_pair(value, order: int) -> SpherePair:
    """The pair representing value * x^order restricted to the two sides.

    Even orders give an even pair, odd orders flip the sign on the
    negative side.
    """
    v = as_fraction(value)
    return SpherePair(v, v if order % 2 == 0 else -v)


def integrate_sphere(f: SpherePair) -> Fraction:
    """Counting-measure integral over the two points; total mass is 2."""
    return f.plus + f.minus


#: Total measure of the 0-sphere under the counting-measure convention.
SPHERE_MEASURE = Fraction(2)


@dataclass(frozen=True)
class SphereDistribution:
    """A linear functional on sphere pairs, stored as its two pairing weights.

    ``pair(a) = weights.plus * a.plus + weights.minus * a.minus``.  The
    weights are stored directly; convention factors (like the factor 2 in
    ``g_lambda``) are baked into the constructors below.
    """

    weights: SpherePair

    def pair(self, a: SpherePair) -> Fraction:
        return self.weights.plus * a.plus + self.weights.minus * a.minus


def pair_sphere(g: SphereDistribution, a: SpherePair) -> Fraction:
    return g.pair(a)


def g_one() -> SphereDistribution:
    """The constant density 1: pairing reduces to integrate_sphere."""
    return SphereDistribution(SpherePair(1, 1))


def g_lambda(lam) -> SphereDistribution:
    """Weights (2*lam, 2*(1-lam)); paired through the 1/2 delta normalization
    this interpolates between the two one-sided evaluations."""
    lam = as_fraction(lam)
    return SphereDistribution(SpherePair(2 * lam, 2 * (1 - lam)))
