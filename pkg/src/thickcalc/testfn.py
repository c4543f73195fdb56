"""Test functions with one thick point, as closed expression trees.

A test function is smooth away from its thick point, compactly supported,
and carries the expansion of its local behaviour.  Bodies are built from two
leaf shapes:

* ``Monomial(j, pair)`` -- the two-sided power ``pair(w) * r^j`` in the local
  coordinate (this covers x^j, |x|^j, the unit step, and signed powers);
* ``Plateau(radius, n)`` -- the n-th derivative of a smooth cutoff that is
  identically 1 on the inner half of its support and 0 outside it.

Sums, scalar multiples and products close the tree under symbolic
differentiation, so derivatives are exact objects and never numeric.  Every
built-in constructor produces the expansion alongside the body; on the inner
plateau the expansion equals the function identically, which is what makes
the downstream pairing formulas testable with tight tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Tuple, Union

from .errors import InsufficientOrderError, PointMismatchError
from . import expansion as xp
from .expansion import Expansion, ZERO_EXPANSION
from .sphere import SpherePair, as_fraction, parity_pair


# -- smooth step profile -----------------------------------------------------
#
# S(t) = g(t) / (g(t) + g(1-t)) with g(t) = exp(-1/t): 0 for t <= 0, 1 for
# t >= 1, strictly increasing in between.  Derivatives are computed with
# truncated Taylor (jet) arithmetic, so they are exact up to rounding.


def _jet_var(t: float, n: int):
    jet = [0.0] * (n + 1)
    jet[0] = t
    if n >= 1:
        jet[1] = 1.0
    return jet


def _jet_mul(a, b):
    n = len(a) - 1
    return [math.fsum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n + 1)]


def _jet_recip(a):
    n = len(a) - 1
    out = [0.0] * (n + 1)
    out[0] = 1.0 / a[0]
    for k in range(1, n + 1):
        out[k] = -out[0] * math.fsum(a[i] * out[k - i] for i in range(1, k + 1))
    return out


def _jet_exp(a):
    n = len(a) - 1
    out = [0.0] * (n + 1)
    out[0] = math.exp(a[0])
    for k in range(1, n + 1):
        out[k] = math.fsum(i * a[i] * out[k - i] for i in range(1, k + 1)) / k
    return out


def smoothstep_deriv(t: float, n: int) -> float:
    """n-th derivative of the profile S at t (S itself for n = 0)."""
    if t <= 0.0:
        return 0.0
    if t >= 1.0:
        return 1.0 if n == 0 else 0.0
    tj = _jet_var(t, n)
    uj = _jet_var(1.0 - t, n)
    if n >= 1:
        uj[1] = -1.0
    g1 = _jet_exp([-c for c in _jet_recip(tj)])
    g2 = _jet_exp([-c for c in _jet_recip(uj)])
    s = _jet_mul(g1, _jet_recip([x + y for x, y in zip(g1, g2)]))
    return s[n] * math.factorial(n)


# -- body nodes ---------------------------------------------------------------


@dataclass(frozen=True)
class Monomial:
    """pair(w) * r^order in the local coordinate y (r = |y|, w = sign y)."""

    order: int
    pair: SpherePair

    def __post_init__(self):
        object.__setattr__(self, "_fp", float(self.pair.plus))
        object.__setattr__(self, "_fm", float(self.pair.minus))

    def value(self, y: float) -> float:
        c = self._fp if y > 0 else self._fm
        if c == 0.0:
            return 0.0
        return c * abs(y) ** self.order

    def derivative(self):
        d = SpherePair(self.order * self.pair.plus, -self.order * self.pair.minus)
        if d.is_zero():
            return ZERO_BODY
        return Monomial(self.order - 1, d)


@dataclass(frozen=True)
class Plateau:
    """n-th derivative of the cutoff: 1 on |y| <= radius/2, 0 on |y| >= radius."""

    radius: float
    deriv: int = 0

    def __post_init__(self):
        object.__setattr__(self, "radius", float(self.radius))
        if self.radius <= 0:
            raise ValueError("plateau radius must be positive")

    def value(self, y: float) -> float:
        t = 2.0 - 2.0 * abs(y) / self.radius
        if self.deriv == 0:
            return smoothstep_deriv(t, 0)
        slope = -2.0 / self.radius if y > 0 else 2.0 / self.radius
        return smoothstep_deriv(t, self.deriv) * slope ** self.deriv

    def derivative(self):
        return Plateau(self.radius, self.deriv + 1)


@dataclass(frozen=True)
class Scale:
    factor: Fraction
    node: "Body"

    def __post_init__(self):
        object.__setattr__(self, "factor", as_fraction(self.factor))
        object.__setattr__(self, "_f", float(self.factor))

    def value(self, y: float) -> float:
        return self._f * self.node.value(y)

    def derivative(self):
        return scale_body(self.factor, self.node.derivative())


@dataclass(frozen=True)
class Sum:
    nodes: Tuple["Body", ...]

    def value(self, y: float) -> float:
        return math.fsum(n.value(y) for n in self.nodes)

    def derivative(self):
        return sum_body(n.derivative() for n in self.nodes)


@dataclass(frozen=True)
class Product:
    left: "Body"
    right: "Body"

    def value(self, y: float) -> float:
        a = self.left.value(y)
        if a == 0.0:
            return 0.0
        return a * self.right.value(y)

    def derivative(self):
        return sum_body([
            product_body(self.left.derivative(), self.right),
            product_body(self.left, self.right.derivative()),
        ])


Body = Union[Monomial, Plateau, Scale, Sum, Product]

ZERO_BODY = Sum(())
ONE_BODY = Monomial(0, SpherePair(1, 1))


def sum_body(nodes) -> Body:
    flat = []
    for n in nodes:
        if isinstance(n, Sum):
            flat.extend(n.nodes)
        elif n != ZERO_BODY:
            flat.append(n)
    if not flat:
        return ZERO_BODY
    if len(flat) == 1:
        return flat[0]
    return Sum(tuple(flat))


def scale_body(factor, node) -> Body:
    factor = as_fraction(factor)
    if factor == 0 or node == ZERO_BODY:
        return ZERO_BODY
    if factor == 1:
        return node
    if isinstance(node, Scale):
        return scale_body(factor * node.factor, node.node)
    return Scale(factor, node)


def product_body(left, right) -> Body:
    if left == ZERO_BODY or right == ZERO_BODY:
        return ZERO_BODY
    if left == ONE_BODY:
        return right
    if right == ONE_BODY:
        return left
    return Product(left, right)


def body_is_smooth(node) -> bool:
    """True when the body extends smoothly across the thick point: every
    monomial leaf must look like a one-variable power c*x^j with j >= 0."""
    if isinstance(node, Monomial):
        if node.pair.is_zero():
            return True
        sign = 1 if node.order % 2 == 0 else -1
        return node.order >= 0 and node.pair.minus == sign * node.pair.plus
    if isinstance(node, Plateau):
        return True
    if isinstance(node, Scale):
        return body_is_smooth(node.node)
    if isinstance(node, Sum):
        return all(body_is_smooth(n) for n in node.nodes)
    if isinstance(node, Product):
        return body_is_smooth(node.left) and body_is_smooth(node.right)
    raise TypeError(f"not a body node: {node!r}")


def dilate_body(node, c: Fraction) -> Body:
    """The body of y -> node(y / c), using |c|^(-j) rescaling on monomials and
    profile rescaling on plateaus (the profile is scale-invariant)."""
    mag = abs(c)
    if isinstance(node, Monomial):
        scale = mag ** (-node.order)
        if c > 0:
            pair = SpherePair(node.pair.plus * scale, node.pair.minus * scale)
        else:
            pair = SpherePair(node.pair.minus * scale, node.pair.plus * scale)
        return Monomial(node.order, pair)
    if isinstance(node, Plateau):
        return scale_body(c ** node.deriv, Plateau(float(mag) * node.radius, node.deriv))
    if isinstance(node, Scale):
        return scale_body(node.factor, dilate_body(node.node, c))
    if isinstance(node, Sum):
        return sum_body(dilate_body(n, c) for n in node.nodes)
    if isinstance(node, Product):
        return product_body(dilate_body(node.left, c), dilate_body(node.right, c))
    raise TypeError(f"not a body node: {node!r}")


# -- the function types --------------------------------------------------------


def _evaluate(body, expansion, point, radius, x) -> float:
    y = x - point
    if radius is not None and abs(y) >= radius:
        return 0.0
    if y == 0:
        # value at the thick point itself: defined only when both one-sided
        # limits exist and agree
        if expansion.is_zero() or expansion.start > 0:
            return 0.0
        if expansion.start == 0 and expansion.coefficient(0).is_even():
            return float(expansion.coefficient(0).plus)
        return math.nan
    return body.value(float(y))


@dataclass(frozen=True)
class ThickTestFunction:
    body: Body
    expansion: Expansion
    point: Fraction
    radius: float
    exact_radius: float  # expansion equals the function identically for 0 < r < exact_radius

    def __post_init__(self):
        object.__setattr__(self, "point", as_fraction(self.point))
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "exact_radius", float(self.exact_radius))

    def evaluate(self, x) -> float:
        return _evaluate(self.body, self.expansion, self.point, self.radius, x)

    @property
    def is_ordinary(self) -> bool:
        """Smooth across the thick point by construction."""
        return body_is_smooth(self.body)

    def __add__(self, other: "ThickTestFunction") -> "ThickTestFunction":
        if self.point != other.point:
            raise PointMismatchError("cannot add functions at different thick points")
        return ThickTestFunction(
            body=sum_body([self.body, other.body]),
            expansion=xp.add(self.expansion, other.expansion),
            point=self.point,
            radius=max(self.radius, other.radius),
            exact_radius=min(self.exact_radius, other.exact_radius),
        )

    def scale(self, k) -> "ThickTestFunction":
        k = as_fraction(k)
        return replace(
            self,
            body=scale_body(k, self.body),
            expansion=xp.multiply(self.expansion, xp.from_taylor([k], exact=True)),
        )

    def __mul__(self, other):
        if isinstance(other, Multiplier):
            return multiply_by(other, self)
        if isinstance(other, ThickTestFunction):
            if self.point != other.point:
                raise PointMismatchError("cannot multiply functions at different thick points")
            return ThickTestFunction(
                body=product_body(self.body, other.body),
                expansion=xp.multiply(self.expansion, other.expansion),
                point=self.point,
                radius=min(self.radius, other.radius),
                exact_radius=min(self.exact_radius, other.exact_radius),
            )
        return NotImplemented


@dataclass(frozen=True)
class Multiplier:
    """Smooth off the thick point, expansion required, no compact support."""

    body: Body
    expansion: Expansion
    point: Fraction
    exact_radius: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "point", as_fraction(self.point))

    def evaluate(self, x) -> float:
        return _evaluate(self.body, self.expansion, self.point, None, x)

    def is_one(self) -> bool:
        return self.body == ONE_BODY

    def is_zero(self) -> bool:
        return self.body == ZERO_BODY and self.expansion.is_zero()


# -- constructors ---------------------------------------------------------------


def plateau_bump(radius, point=0) -> ThickTestFunction:
    """Smooth cutoff: 1 on |x-a| <= radius/2, 0 beyond |x-a| >= radius."""
    if radius <= 0:
        raise ValueError("support radius must be positive")
    return ThickTestFunction(
        body=Plateau(radius),
        expansion=Expansion(0, (SpherePair(1, 1),), exact=True),
        point=point,
        radius=radius,
        exact_radius=radius / 2,
    )


def thick_monomial(order: int, pair, radius, point=0) -> ThickTestFunction:
    """pair(w) * r^order times the plateau cutoff; order may be negative."""
    if radius <= 0:
        raise ValueError("support radius must be positive")
    pair = pair if isinstance(pair, SpherePair) else SpherePair(*pair)
    return ThickTestFunction(
        body=product_body(Monomial(order, pair), Plateau(radius)),
        expansion=Expansion(order, (pair,), exact=True),
        point=point,
        radius=radius,
        exact_radius=radius / 2,
    )


def from_polynomial(coeffs, radius, point=0) -> ThickTestFunction:
    """p(x - a) times the plateau cutoff, expansion taken from the coefficients."""
    if radius <= 0:
        raise ValueError("support radius must be positive")
    cs = [as_fraction(c) for c in coeffs]
    terms = [Monomial(j, parity_pair(c, j)) for j, c in enumerate(cs) if c != 0]
    return ThickTestFunction(
        body=product_body(sum_body(terms), Plateau(radius)),
        expansion=xp.from_taylor(cs, exact=True),
        point=point,
        radius=radius,
        exact_radius=radius / 2,
    )


def heaviside_multiplier(point=0) -> Multiplier:
    return Multiplier(
        body=Monomial(0, SpherePair(1, 0)),
        expansion=Expansion(0, (SpherePair(1, 0),), exact=True),
        point=point,
    )


def power_multiplier(order: int, point=0) -> Multiplier:
    """The one-variable power (x - a)^order as a multiplier."""
    return monomial_multiplier(order, parity_pair(1, order), point)


def monomial_multiplier(order: int, pair, point=0) -> Multiplier:
    pair = pair if isinstance(pair, SpherePair) else SpherePair(*pair)
    return Multiplier(
        body=Monomial(order, pair),
        expansion=Expansion(order, (pair,), exact=True),
        point=point,
    )


def constant_multiplier(value=1, point=0) -> Multiplier:
    v = as_fraction(value)
    if v == 0:
        return Multiplier(body=ZERO_BODY, expansion=ZERO_EXPANSION, point=point)
    return monomial_multiplier(0, SpherePair(v, v), point)


# -- operations ------------------------------------------------------------------


def derivative(f):
    """Symbolic derivative; works on both test functions and multipliers."""
    return replace(f, body=f.body.derivative(), expansion=xp.differentiate(f.expansion))


def multiply_by(psi: Multiplier, phi: ThickTestFunction) -> ThickTestFunction:
    if psi.point != phi.point:
        raise PointMismatchError(
            f"multiplier at {psi.point} cannot act on a function at {phi.point}"
        )
    return ThickTestFunction(
        body=product_body(psi.body, phi.body),
        expansion=xp.multiply(psi.expansion, phi.expansion),
        point=phi.point,
        radius=phi.radius,
        exact_radius=min(psi.exact_radius, phi.exact_radius),
    )


def translate(f, shift):
    """f(x - shift): the graph moves right by shift, the thick point with it."""
    return replace(f, point=f.point + as_fraction(shift))


def dilate(f, c):
    """f(x / c); the thick point moves to c*a and the support scales by |c|."""
    c = as_fraction(c)
    if c == 0:
        raise ValueError("dilation factor must be nonzero")
    out = replace(
        f,
        body=dilate_body(f.body, c),
        expansion=_dilate_expansion(f.expansion, c),
        point=c * f.point,
        exact_radius=float(abs(c)) * f.exact_radius,
    )
    if isinstance(f, ThickTestFunction):
        out = replace(out, radius=float(abs(c)) * f.radius)
    return out


def _dilate_expansion(e: Expansion, c: Fraction) -> Expansion:
    mag = abs(c)
    pairs = []
    for j, p in e.terms():
        s = mag ** (-j)
        if c > 0:
            pairs.append(SpherePair(p.plus * s, p.minus * s))
        else:
            pairs.append(SpherePair(p.minus * s, p.plus * s))
    return Expansion(e.start, tuple(pairs), exact=e.exact, order=e.order)


# -- diagnostics -------------------------------------------------------------------


def _partial_sum(e: Expansion, w: int, r: float, top: int) -> float:
    # termwise with r**j so that it cancels bit-exactly against monomial bodies
    return math.fsum(float(c.at(w)) * r ** j for j, c in e.terms() if j <= top)


def seminorm(phi: ThickTestFunction, q: int, s: int, k_radius: float) -> float:
    """Grid lower bound for the sup of r^(-q) |d^p phi - truncated expansion|
    over 0 < r <= k_radius, both sides, all derivative orders p <= s.

    The reported number samples a fixed deterministic grid, so it is a lower
    bound of the true sup, good enough as a topology diagnostic.
    """
    if k_radius <= 0:
        raise ValueError("k_radius must be positive")
    rs = sorted({k_radius * i / 16 for i in range(1, 17)}
                | {k_radius * 2.0 ** -k for k in range(21)})
    worst = 0.0
    current = phi
    for p in range(s + 1):
        e = current.expansion
        if not e.exact and e.window < q - 1:
            raise InsufficientOrderError(
                f"seminorm with q={q} needs expansion orders through {q - 1}, "
                f"derivative {p} only reaches {e.order}"
            )
        for r in rs:
            for w in (1, -1):
                got = current.body.value(w * r)
                ref = _partial_sum(e, w, r, q - 1)
                worst = max(worst, abs(got - ref) * r ** (-q))
        current = derivative(current)
    return worst


def strength_defect(phi: ThickTestFunction, p: int, through_order: int, r: float) -> float:
    """max over both sides of r^(-M) |d^p phi(a + w r) - truncation through M|.

    Going to zero along r -> 0 is what makes the expansion an asymptotic one;
    staying zero after differentiating p times is what makes it strong.
    """
    current = phi
    for _ in range(p):
        current = derivative(current)
    e = current.expansion
    top = min(through_order, int(e.window) if not e.exact else through_order)
    out = 0.0
    for w in (1, -1):
        got = current.body.value(w * r)
        ref = _partial_sum(e, w, r, top)
        out = max(out, abs(got - ref) * r ** (-top))
    return out
