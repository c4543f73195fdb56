"""Pairing evaluation: the finite-part formulas and their independent oracle.

The distribution/test-function pairing dispatches on the distribution tree.
Finite-part densities split at a radius A into a far-field integral, a
near-field integral of the expansion-subtracted remainder, and analytic
series terms A^(lambda+j+1)/(lambda+j+1) (one of them turning into a log A
term in the integer case).  The split radius is arbitrary; A-independence is
one of the main correctness checks.

``fp_pair_oracle`` reaches the same number along a completely different
route: it truncates the integral at epsilon, sweeps epsilon down a geometric
grid, and extracts the finite part of the limit by fitting the divergent
terms away (``fp_limit``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

import numpy as np

from .errors import (
    FitConditionError,
    MisclassifiedPowerError,
    OrdinaryFunctionRequiredError,
    PointMismatchError,
)
from .distributions import (
    ClassicalDistributionView,
    Derivative,
    Dilate,
    LinearCombination,
    MultiplierProduct,
    PfDensity,
    ThickDelta,
    Translate,
)
from .expansion import Expansion
from .quadrature import integrate
from .sphere import SPHERE_MEASURE
from .testfn import ThickTestFunction, derivative, dilate, multiply_by, translate


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    max_subdivisions: int = 2000
    split_radius: float = 1.0

    def __post_init__(self):
        if self.abs_tol <= 0:
            raise ValueError("abs_tol must be positive")
        if self.split_radius <= 0:
            raise ValueError("split_radius must be positive")


DEFAULT_CONFIG = QuadratureConfig()

Number = Union[Fraction, float]


@dataclass(frozen=True)
class PairingResult:
    value: Number
    split_radius: Optional[float]
    quad_error: float
    series_terms: Tuple[Tuple[int, Number], ...] = ()
    log_term: Number = 0

    def __post_init__(self):
        if not math.isfinite(float(self.value)):
            raise ValueError("pairing produced a non-finite value")
        if self.quad_error < 0:
            raise ValueError("error estimate cannot be negative")

    def __float__(self):
        return float(self.value)


def _side_value(phi, w: int, r: float) -> float:
    """phi at the point a + w*r, evaluated in local coordinates."""
    y = w * r
    radius = getattr(phi, "radius", None)
    if radius is not None and abs(y) >= radius:
        return 0.0
    return phi.body.value(y)


def _partial_sum(e: Expansion, w: int, r: float, top: int) -> float:
    return math.fsum(float(c.at(w)) * r ** j for j, c in e.terms() if j <= top)


def pair(f, phi: ThickTestFunction, cfg: QuadratureConfig = DEFAULT_CONFIG) -> PairingResult:
    """Evaluate the pairing of a distribution tree against a test function."""
    if isinstance(f, ClassicalDistributionView):
        if not phi.is_ordinary:
            raise OrdinaryFunctionRequiredError(
                "projected distributions pair only with functions smooth across the point"
            )
        return pair(f.source, phi, cfg)
    if f.point != phi.point:
        raise PointMismatchError(
            f"distribution at {f.point} paired with test function at {phi.point}"
        )
    if isinstance(f, ThickDelta):
        aq = phi.expansion.coefficient(f.degree)
        value = f.weights.pair(aq) / SPHERE_MEASURE
        return PairingResult(value, None, 0.0)
    if isinstance(f, PfDensity):
        return _pair_density(f, phi, cfg)
    if isinstance(f, Derivative):
        inner = pair(f.inner, derivative(phi), cfg)
        return PairingResult(
            -inner.value, inner.split_radius, inner.quad_error,
            tuple((j, -v) for j, v in inner.series_terms), -inner.log_term,
        )
    if isinstance(f, MultiplierProduct):
        return pair(f.inner, multiply_by(f.multiplier, phi), cfg)
    if isinstance(f, LinearCombination):
        value: Number = Fraction(0)
        err = 0.0
        series = []
        log_term: Number = Fraction(0)
        split = None
        for c, d in f.terms:
            res = pair(d, phi, cfg)
            value = value + c * res.value
            err += abs(float(c)) * res.quad_error
            series.extend((j, c * v) for j, v in res.series_terms)
            log_term = log_term + c * res.log_term
            split = split if split is not None else res.split_radius
        return PairingResult(value, split, err, tuple(series), log_term)
    if isinstance(f, Translate):
        return pair(f.inner, translate(phi, f.shift), cfg)
    if isinstance(f, Dilate):
        scale = 1 / abs(f.factor)
        inner = pair(f.inner, dilate(phi, f.factor), cfg)
        return PairingResult(
            scale * inner.value, inner.split_radius, float(scale) * inner.quad_error,
            tuple((j, scale * v) for j, v in inner.series_terms), scale * inner.log_term,
        )
    raise TypeError(f"cannot pair object of type {type(f).__name__}")


def _pair_density(f: PfDensity, phi: ThickTestFunction, cfg: QuadratureConfig) -> PairingResult:
    lam = f.power
    flam = float(lam)
    e = phi.expansion
    R = phi.radius
    A = cfg.split_radius if cfg.split_radius < R else R / 2
    cp, cm = float(f.pair.plus), float(f.pair.minus)

    if f.integral_power:
        jmax = -lam - 1
    else:
        jmax = math.floor(-flam - 1)

    # coefficients through jmax, exact scalars; raises if the expansion
    # window is too short
    needed = []
    if not e.is_zero():
        for j in range(e.start, jmax + 1):
            aj = e.coefficient(j)
            cj = f.pair.plus * aj.plus + f.pair.minus * aj.minus
            needed.append((j, cj))

    series = []
    log_term: Number = Fraction(0)
    for j, cj in needed:
        if not f.integral_power and flam + j + 1 == 0.0:
            raise MisclassifiedPowerError(
                f"power {lam!r} behaves as the integer {-j - 1} at order {j}; "
                "pass it as an exact int or Fraction"
            )
        if f.integral_power and j == jmax:
            log_term = cj * math.log(A) if cj != 0 else Fraction(0)
        else:
            series.append((j, cj * A ** (lam + j + 1) / (lam + j + 1)))

    quad_error = 0.0

    def far(r):
        acc = 0.0
        if cp:
            acc += cp * _side_value(phi, 1, r)
        if cm:
            acc += cm * _side_value(phi, -1, r)
        return r ** flam * acc

    far_value, far_err = integrate(far, A, R, cfg.abs_tol, cfg.max_subdivisions)
    quad_error += far_err

    # near field: the expansion-subtracted remainder on [0, A].  On the inner
    # plateau of an exact function the subtraction leaves just the expansion
    # tail above jmax, which evaluates without cancellation.
    near_value = 0.0
    inner_edge = min(A, phi.exact_radius)
    if e.exact and inner_edge > 0:
        tail = [(j, float(f.pair.plus * c.plus + f.pair.minus * c.minus))
                for j, c in e.terms() if j > jmax]

        def near_tail(r):
            return math.fsum(cj * r ** (flam + j) for j, cj in tail)

        v, err = integrate(near_tail, 0.0, inner_edge, cfg.abs_tol, cfg.max_subdivisions)
        near_value += v
        quad_error += err
    else:
        inner_edge = 0.0

    if inner_edge < A:
        def near_generic(r):
            acc = 0.0
            if cp:
                acc += cp * (_side_value(phi, 1, r) - _partial_sum(e, 1, r, jmax))
            if cm:
                acc += cm * (_side_value(phi, -1, r) - _partial_sum(e, -1, r, jmax))
            return r ** flam * acc

        v, err = integrate(near_generic, inner_edge, A, cfg.abs_tol, cfg.max_subdivisions)
        near_value += v
        quad_error += err

    value = far_value + near_value + math.fsum(float(v) for _, v in series) + float(log_term)
    return PairingResult(value, A, quad_error,
                         tuple((j, v) for j, v in series), log_term)


# -- finite part of a limit ----------------------------------------------------


@dataclass(frozen=True)
class FpFit:
    """Result of fitting F(eps) against divergent + convergent basis terms.

    ``finite_part`` is the coefficient of the constant; ``coefficients`` maps
    (exponent, log power) to the fitted coefficient of eps^exponent * ln^q eps.
    """

    finite_part: float
    residual: float
    condition: float
    coefficients: Dict[Tuple[Number, int], float]

    def __float__(self):
        return self.finite_part

    @property
    def log_coefficient(self) -> float:
        return self.coefficients.get((Fraction(0), 1), 0.0)


#: Condition-number ceiling for the scaled design matrix.
FIT_CONDITION_LIMIT = 1e14


def default_fit_powers(maxp: int) -> Tuple[Fraction, ...]:
    """Half-integer exponent ladder: divergent side down to -maxp, convergent
    side up through 2 (so fractional remainders are representable)."""
    return tuple(Fraction(k, 2) for k in range(-2 * maxp, 5))


def fp_limit(samples, basis_orders: Tuple[int, int] = (3, 1),
             powers=None) -> FpFit:
    """Finite part of lim F(eps) as eps -> 0+ by least squares.

    ``samples`` is a sequence of (eps, F(eps)) on a decreasing geometric
    grid.  The basis is {eps^e ln^q eps} with e over a half-integer ladder
    (or the explicit ``powers``) and q up to basis_orders[1]; the finite part
    is the fitted coefficient of the constant 1.  Rows are weighted by
    1/max(1, |F|) so that the hugely divergent samples do not drown the
    constant.
    """
    maxp, maxq = basis_orders
    if powers is None:
        exponents = default_fit_powers(maxp)
        log_exponents = tuple(e for e in exponents if e <= 0)
    else:
        exponents = []
        seen = set()
        for p in powers:
            p = _exact_exponent(p)
            if p not in seen:
                seen.add(p)
                exponents.append(p)
        if Fraction(0) not in seen and 0.0 not in seen:
            exponents.append(Fraction(0))
        log_exponents = (Fraction(0),)
    columns = [(e, 0) for e in exponents]
    columns += [(e, q) for e in log_exponents for q in range(1, maxq + 1)]
    columns.sort(key=lambda c: (float(c[0]), c[1]))

    samples = [(float(eps), float(val)) for eps, val in samples]
    if len(samples) < len(columns) + 2:
        raise ValueError(
            f"need at least {len(columns) + 2} samples for {len(columns)} "
            f"basis functions, got {len(samples)}"
        )
    eps = np.array([s[0] for s in samples])
    F = np.array([s[1] for s in samples])
    M = np.empty((len(samples), len(columns)))
    for k, (expo, q) in enumerate(columns):
        col = eps ** float(expo)
        if q:
            col = col * np.log(eps) ** q
        M[:, k] = col
    weights = 1.0 / np.maximum(1.0, np.abs(F))
    Mw = M * weights[:, None]
    Fw = F * weights
    norms = np.linalg.norm(Mw, axis=0)
    norms[norms == 0.0] = 1.0
    scaled = Mw / norms
    condition = float(np.linalg.cond(scaled))
    if condition > FIT_CONDITION_LIMIT:
        raise FitConditionError(
            f"condition {condition:.3g} exceeds {FIT_CONDITION_LIMIT:.0e}; "
            "basis orders do not match the data (or too few samples)"
        )
    sol, *_ = np.linalg.lstsq(scaled, Fw, rcond=None)
    coeffs = sol / norms
    residual = float(np.linalg.norm(Mw @ coeffs - Fw))
    table = {col: float(v) for col, v in zip(columns, coeffs)}
    const_key = next(c for c in columns if float(c[0]) == 0.0 and c[1] == 0)
    return FpFit(float(table[const_key]), residual, condition, table)


def _exact_exponent(p):
    if isinstance(p, (int, Fraction)):
        return Fraction(p)
    return float(p)


def fp_pair_oracle(f: PfDensity, phi: ThickTestFunction,
                   cfg: QuadratureConfig = DEFAULT_CONFIG,
                   n_extra: int = 8) -> FpFit:
    """Independent check of the density pairing via the finite part of a limit.

    F(eps) = integral of the density against phi over |x - a| >= eps is
    computed by quadrature (the test function evaluated through its body,
    never its expansion), then the finite part is extracted by fp_limit.
    Only the *exponent set* of the fit is taken from the expansion orders;
    every coefficient comes out of the fit.
    """
    if not isinstance(f, PfDensity):
        raise TypeError("the finite-part oracle applies to density nodes only")
    if f.point != phi.point:
        raise PointMismatchError("oracle: thick points differ")
    lam = f.power
    flam = float(lam)
    e = phi.expansion
    R = phi.radius
    cp, cm = float(f.pair.plus), float(f.pair.minus)

    if e.exact:
        powers = []
        log_needed = False
        for j, _ in e.terms():
            p = lam + j + 1 if not isinstance(lam, float) else flam + j + 1
            if p == 0:
                log_needed = True
            else:
                powers.append(p)
        maxq = 1 if log_needed else 0
        n_cols = len(set(powers)) + 1 + maxq
    else:
        powers = None
        maxq = 1
        n_cols = len(default_fit_powers(3)) + 7

    def truncated(eps):
        def integrand(r):
            acc = 0.0
            if cp:
                acc += cp * _side_value(phi, 1, r)
            if cm:
                acc += cm * _side_value(phi, -1, r)
            return r ** flam * acc
        v, _ = integrate(integrand, eps, R, cfg.abs_tol, max(cfg.max_subdivisions, 4000))
        return v

    eps0 = min(phi.exact_radius, R) * 0.9
    count = n_cols + n_extra
    grid = [eps0 * 2.0 ** (-k / 2.0) for k in range(count)]
    samples = [(eps, truncated(eps)) for eps in grid]
    return fp_limit(samples, basis_orders=(3, maxq), powers=powers)


# -- small helpers used by identity checks ---------------------------------------


def radial_integral(phi: ThickTestFunction, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Integral of phi over the line, evaluated as the two-sided radial sum."""
    def both(r):
        return _side_value(phi, 1, r) + _side_value(phi, -1, r)
    value, _ = integrate(both, 0.0, phi.radius, cfg.abs_tol, cfg.max_subdivisions)
    return value


def axis_integral(phi: ThickTestFunction, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Integral of phi over the line, evaluated on the x axis directly."""
    a = float(phi.point)
    value, _ = integrate(lambda x: phi.evaluate(x), a - phi.radius, a + phi.radius,
                         cfg.abs_tol, cfg.max_subdivisions)
    return value
