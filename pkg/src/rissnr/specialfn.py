"""Scalar special functions used by the closed-form SNR statistics.

``cross_moment_term`` gives E{|h_i||h_j|} for two unit-power circularly
symmetric complex Gaussians whose correlation coefficient has squared
magnitude ``x``:

    pi/4 * (1 - x)**2 * 2F1(3/2, 3/2; 1; x)  ==  pi/4 * 2F1(-1/2, -1/2; 1; x)

The right-hand form is finite on the whole of [0, 1] and is what we evaluate.
"""

from __future__ import annotations

import math

__all__ = [
    "cross_moment_term",
    "hyp2f1_direct",
    "gamma_fn",
    "reg_lower_incomplete_gamma",
]

_DOMAIN_SLACK = 1e-12
_MAX_TERMS = 1_000_000
_LN2 = math.log(2.0)

# Below this argument the power series in x is used, above it the expansion
# around x = 1. Both converge at least as fast as 0.5**n at the switch point.
_SERIES_SWITCH = 0.5


def _check_unit_interval(x: float) -> float:
    if not math.isfinite(x) or x < -_DOMAIN_SLACK or x > 1.0 + _DOMAIN_SLACK:
        raise ValueError(f"argument must lie in [0, 1], got {x!r}")
    return min(max(x, 0.0), 1.0)


def _series_near_zero(x: float) -> float:
    # 2F1(-1/2, -1/2; 1; x); every term after the first is positive and the
    # term ratio is below x, so the tail is bounded by term * x / (1 - x).
    total = 1.0
    term = 1.0
    for k in range(_MAX_TERMS):
        term *= (k - 0.5) ** 2 / (k + 1.0) ** 2 * x
        total += term
        if term * x / (1.0 - x) < 1e-17 * total:
            return total
    raise RuntimeError(f"2F1(-1/2,-1/2;1;{x}) series did not converge")


def _series_near_one(x: float) -> float:
    # pi/4 * 2F1(-1/2, -1/2; 1; x) expanded in w = 1 - x. The parameters hit
    # the degenerate case c - a - b = 2, so logarithmic terms appear:
    #   1 - w/4 - w**2/16 * sum_n c_n w**n (ln w + D_n)
    # with c_n = (3/2)_n**2 / (n! (n+2)!) and
    # D_n = 2 psi(n+3/2) - psi(n+1) - psi(n+3) written with harmonic sums.
    w = 1.0 - x
    if w == 0.0:
        return 1.0
    log_w = math.log(w)
    coeff = 0.5
    digamma_mix = 4.0 - 1.5 - 4.0 * _LN2
    power = 1.0
    total = 0.0
    for n in range(_MAX_TERMS):
        contrib = coeff * power
        total += contrib * (log_w + digamma_mix)
        if n > 2 and contrib * (abs(log_w) + abs(digamma_mix)) < 1e-18:
            return 1.0 - 0.25 * w - w * w / 16.0 * total
        coeff *= (n + 1.5) ** 2 / ((n + 1.0) * (n + 3.0))
        digamma_mix += -1.0 / (n + 1) - 1.0 / (n + 3) + 4.0 / (2 * n + 3)
        power *= w
    raise RuntimeError(f"expansion about 1 did not converge at x={x}")


def cross_moment_term(rho_abs_sq: float) -> float:
    """Return E{|h_i||h_j|} for unit-power complex Gaussians with |rho|^2 = rho_abs_sq.

    The value rises from pi/4 (independent) to 1 (fully correlated).
    Arguments within 1e-12 outside [0, 1] are clamped; anything further out
    raises ``ValueError``.
    """
    x = _check_unit_interval(float(rho_abs_sq))
    if x <= _SERIES_SWITCH:
        return 0.25 * math.pi * _series_near_zero(x)
    return _series_near_one(x)


def hyp2f1_direct(a: float, b: float, c: float, x: float, tol: float = 1e-17) -> float:
    """Plain Gauss series for 2F1(a, b; c; x), 0 <= x < 1.

    Only intended as a cross-check for moderate x; it converges like x**n
    times a power of n and is useless close to 1.
    """
    if not 0.0 <= x < 1.0:
        raise ValueError("direct series needs 0 <= x < 1")
    total = 1.0
    term = 1.0
    for k in range(_MAX_TERMS):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x
        total += term
        if abs(term) < tol * abs(total) and k > 2:
            return total
    raise RuntimeError("direct 2F1 series did not converge")


def gamma_fn(z: float) -> float:
    """Gamma function for positive real arguments."""
    if not z > 0.0:
        raise ValueError(f"gamma_fn needs z > 0, got {z!r}")
    return math.gamma(z)


def _lower_series(shape: float, x: float) -> float:
    ap = shape
    term = 1.0 / shape
    total = term
    for _ in range(_MAX_TERMS):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * 1e-16:
            return total * math.exp(-x + shape * math.log(x) - math.lgamma(shape))
    raise RuntimeError("incomplete gamma series did not converge")


def _upper_continued_fraction(shape: float, x: float) -> float:
    # Modified Lentz evaluation of the Legendre continued fraction for Q(a, x).
    tiny = 1e-300
    b = x + 1.0 - shape
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_TERMS):
        an = -i * (i - shape)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return math.exp(-x + shape * math.log(x) - math.lgamma(shape)) * h
    raise RuntimeError("incomplete gamma continued fraction did not converge")


def reg_lower_incomplete_gamma(shape: float, x: float) -> float:
    """Regularized lower incomplete gamma P(shape, x)."""
    if not (shape > 0.0 and math.isfinite(shape)):
        raise ValueError(f"shape must be positive and finite, got {shape!r}")
    if math.isnan(x) or x < 0.0:
        raise ValueError(f"x must be nonnegative, got {x!r}")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < shape + 1.0:
        value = _lower_series(shape, x)
    else:
        value = 1.0 - _upper_continued_fraction(shape, x)
    return min(max(value, 0.0), 1.0)
