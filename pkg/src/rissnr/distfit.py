"""Moment-matched gamma approximation of the SNR and empirical comparisons."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .specialfn import reg_lower_incomplete_gamma

__all__ = [
    "GammaParams",
    "EmpiricalDistribution",
    "fit_gamma",
    "gamma_cdf",
    "gamma_cdf_array",
    "gamma_quantile",
    "empirical_cdf",
    "ks_distance",
]


@dataclass(frozen=True)
class GammaParams:
    k_shape: float
    theta_scale: float

    def __post_init__(self):
        if not (self.k_shape > 0 and self.theta_scale > 0):
            raise ValueError("gamma shape and scale must be positive")

    @property
    def mean(self) -> float:
        return self.k_shape * self.theta_scale

    @property
    def variance(self) -> float:
        return self.k_shape * self.theta_scale**2


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Sorted, nonnegative samples."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 1 or s.size < 1:
            raise ValueError("need a nonempty 1-D sample array")
        if np.any(np.diff(s) < 0):
            raise ValueError("samples must be sorted nondecreasing")
        if s[0] < 0:
            raise ValueError("samples must be nonnegative")
        object.__setattr__(self, "samples", s)

    @classmethod
    def from_samples(cls, samples) -> "EmpiricalDistribution":
        return cls(np.sort(np.asarray(samples, dtype=float)))

    @property
    def count(self) -> int:
        return int(self.samples.size)

    def quantile(self, p: float) -> float:
        return float(np.quantile(self.samples, p))


def fit_gamma(mean: float, variance: float) -> GammaParams:
    """Gamma distribution with the given mean and variance."""
    if not (mean > 0 and variance > 0):
        raise ValueError(f"mean and variance must be positive, got {mean}, {variance}")
    return GammaParams(mean * mean / variance, variance / mean)


def gamma_cdf(params: GammaParams, x: float) -> float:
    if x <= 0:
        return 0.0
    return reg_lower_incomplete_gamma(params.k_shape, x / params.theta_scale)


def gamma_cdf_array(params: GammaParams, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.array([gamma_cdf(params, float(v)) for v in x.ravel()]).reshape(x.shape)


def gamma_quantile(params: GammaParams, p: float) -> float:
    """Inverse CDF by bracketing and Brent's method on ``gamma_cdf``."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    hi = params.mean + params.theta_scale
    while gamma_cdf(params, hi) < p:
        hi *= 2.0
    return brentq(lambda x: gamma_cdf(params, x) - p, 0.0, hi, xtol=1e-300, rtol=1e-15, maxiter=500)


def empirical_cdf(dist: EmpiricalDistribution, x: float) -> float:
    """Fraction of samples <= x."""
    return float(np.searchsorted(dist.samples, x, side="right")) / dist.count


def ks_distance(dist: EmpiricalDistribution, params: GammaParams) -> float:
    """Kolmogorov-Smirnov distance between the samples and the gamma CDF."""
    n = dist.count
    cdf = gamma_cdf_array(params, dist.samples)
    upper = np.arange(1, n + 1) / n - cdf
    lower = cdf - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))
