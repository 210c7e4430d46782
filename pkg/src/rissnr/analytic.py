"""Closed-form statistics of the optimal-phase SNR.

Notation follows the channel model: M BS antennas, N RIS elements,
Y = sum_n |h_ru_tilde_n|, and

* ``A = ||R_d^{1/2} a_b||``, the effective direct-path array gain,
* ``B = M A + a_b^H R_d^2 a_b / (2 A)``,
* ``F`` = sum over i != j of E{|h_i||h_j|}, so that E{Y^2} = N + F,
* ``C1 = E{Y^3}`` and ``C2 = E{Y^4}``.

The mean is exact for any correlation. The variance is exact when the UE-RIS
channel is uncorrelated (the moments of Y are then known in closed form) and
otherwise uses a gamma approximation of Y for C1 and C2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gains import LinkGains
from .linalg import quadratic_form
from .specialfn import cross_moment_term

__all__ = [
    "LinkGains",
    "MomentIngredients",
    "SnrStatistics",
    "EXACT",
    "APPROXIMATE",
    "compute_F",
    "uncorrelated_F",
    "moment_ingredients",
    "direct_array_gain",
    "y_moments_gamma_approx",
    "y_moments_uncorrelated",
    "mean_snr",
    "var_snr",
    "snr_statistics",
    "mean_snr_uncorrelated",
    "var_snr_uncorrelated",
    "snr_bounds_rho_ru",
    "mean_snr_favorable",
    "gain_corr",
    "gain_max",
]

EXACT = "exact"
APPROXIMATE = "variance-approximated"

_UNIT_DIAG_TOL = 1e-10
_IDENTITY_TOL = 1e-12


@dataclass(frozen=True)
class MomentIngredients:
    M: int
    N: int
    A: float
    B: float
    F: float
    C1: float
    C2: float
    a_shape: float
    b_scale: float
    trace_Rd_sq: float
    exact_y_moments: bool

    @property
    def mean_y(self) -> float:
        return self.N * math.sqrt(math.pi) / 2.0

    @property
    def second_moment_y(self) -> float:
        return self.N + self.F


@dataclass(frozen=True)
class SnrStatistics:
    mean: float
    variance: float
    exactness: str

    def __post_init__(self):
        if not (self.mean > 0 and self.variance > 0):
            raise ValueError(f"nonpositive SNR moments: mean={self.mean}, var={self.variance}")


def _check_unit_diagonal(R: np.ndarray, name: str) -> None:
    diag = np.diag(R)
    if np.max(np.abs(diag - 1.0)) > _UNIT_DIAG_TOL:
        raise ValueError(f"{name} must have a unit diagonal")


def _is_identity(R: np.ndarray) -> bool:
    return bool(np.max(np.abs(R - np.eye(R.shape[0]))) <= _IDENTITY_TOL)


def compute_F(R_ru: np.ndarray) -> float:
    """Sum of E{|h_i||h_j|} over ordered pairs i != j for correlation ``R_ru``."""
    R_ru = np.asarray(R_ru)
    _check_unit_diagonal(R_ru, "R_ru")
    iu = np.triu_indices(R_ru.shape[0], k=1)
    if iu[0].size == 0:
        return 0.0
    rho_sq = np.abs(R_ru[iu]) ** 2
    # Array grids repeat a handful of distances, so evaluate each value once.
    distinct, counts = np.unique(rho_sq, return_counts=True)
    terms = [int(c) * cross_moment_term(float(x)) for x, c in zip(distinct, counts)]
    return 2.0 * math.fsum(terms)


def uncorrelated_F(N: int) -> float:
    """F for independent UE-RIS entries: N (N - 1) pi / 4."""
    return N * (N - 1) * math.pi / 4.0


def y_moments_gamma_approx(N: int, F: float) -> tuple[float, float, float, float]:
    """Third and fourth moments of Y from a gamma fit to its first two moments.

    Returns ``(C1, C2, a_shape, b_scale)``. The fit matches E{Y} = N sqrt(pi)/2
    and E{Y^2} = N + F.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    spread = 4.0 * (N + F) - N * N * math.pi
    if spread <= 0.0:
        raise ValueError(f"F={F} gives a nonpositive variance of Y for N={N}")
    a = N * N * math.pi / spread
    b = 2.0 / (N * math.sqrt(math.pi)) * (N + F - N * N * math.pi / 4.0)
    c1 = b**3 * a * (a + 1.0) * (a + 2.0)
    c2 = b**4 * a * (a + 1.0) * (a + 2.0) * (a + 3.0)
    return c1, c2, a, b


def y_moments_uncorrelated(N: int) -> tuple[float, float]:
    """Exact E{Y^3}, E{Y^4} when the N magnitudes are i.i.d. Rayleigh(1/sqrt 2)."""
    sqrt_pi = math.sqrt(math.pi)
    c1 = N * sqrt_pi / 2.0 * (math.pi / 4.0 * (N - 1) * (N - 2) + 3.0 * N - 1.5)
    pairs = N * (N - 1) / 2.0
    c2 = 2.0 * N + pairs * ((N - 2) * (N - 3) * math.pi**2 / 8.0 + 6.0 + 3.0 * math.pi * (N - 1))
    return c1, c2


def direct_array_gain(R_d: np.ndarray, a_b: np.ndarray) -> float:
    """A = ||R_d^{1/2} a_b||."""
    return math.sqrt(quadratic_form(np.ravel(a_b), np.asarray(R_d)).real)


def moment_ingredients(R_d: np.ndarray, R_ru: np.ndarray, a_b: np.ndarray) -> MomentIngredients:
    """Evaluate A, B, F, C1, C2 and the gamma fit of Y for one scenario."""
    R_d = np.asarray(R_d)
    R_ru = np.asarray(R_ru)
    a_b = np.ravel(np.asarray(a_b))
    _check_unit_diagonal(R_d, "R_d")
    M, N = a_b.size, R_ru.shape[0]
    A = direct_array_gain(R_d, a_b)
    if A <= 0.0:
        raise ValueError("a_b lies in the null space of R_d (A = 0)")
    R_d_sq = R_d @ R_d
    B = M * A + quadratic_form(a_b, R_d_sq).real / (2.0 * A)
    F = compute_F(R_ru)
    c1, c2, a, b = y_moments_gamma_approx(N, F)
    exact = _is_identity(R_ru)
    if exact:
        c1, c2 = y_moments_uncorrelated(N)
    return MomentIngredients(
        M=M, N=N, A=A, B=B, F=F, C1=c1, C2=c2, a_shape=a, b_scale=b,
        trace_Rd_sq=float(np.trace(R_d_sq).real), exact_y_moments=exact,
    )


def _mean_from(ing: MomentIngredients, gains: LinkGains) -> float:
    bd, bc = gains.beta_d, gains.beta_cascade
    return (
        bd * ing.M
        + ing.N * ing.A * math.pi * math.sqrt(bd * bc) / 2.0
        + bc * ing.M * (ing.N + ing.F)
    ) * gains.tau_bar


def _var_from(ing: MomentIngredients, gains: LinkGains) -> float:
    bd, bc = gains.beta_d, gains.beta_cascade
    M, N, A, F = ing.M, ing.N, ing.A, ing.F
    y2 = N + F
    total = (
        bd**2 * ing.trace_Rd_sq
        + bd**1.5 * math.sqrt(bc) * N * math.pi * (ing.B - M * A)
        + bd * bc * A**2 * (4.0 * y2 - N * N * math.pi**2 / 4.0)
        + M * A * math.sqrt(bd) * bc**1.5 * (2.0 * math.sqrt(math.pi) * ing.C1 - N * y2 * math.pi)
        + (M * bc) ** 2 * (ing.C2 - y2**2)
    )
    return total * gains.tau_bar**2


def mean_snr(gains: LinkGains, R_d, R_ru, a_b, ingredients: MomentIngredients | None = None) -> float:
    """Exact mean of the optimal-phase SNR."""
    ing = ingredients or moment_ingredients(R_d, R_ru, a_b)
    return _mean_from(ing, gains)


def var_snr(gains: LinkGains, R_d, R_ru, a_b, ingredients: MomentIngredients | None = None) -> SnrStatistics:
    """Mean and variance of the SNR, flagged by whether the variance is exact."""
    ing = ingredients or moment_ingredients(R_d, R_ru, a_b)
    return SnrStatistics(
        _mean_from(ing, gains),
        _var_from(ing, gains),
        EXACT if ing.exact_y_moments else APPROXIMATE,
    )


snr_statistics = var_snr


def mean_snr_uncorrelated(gains: LinkGains, M: int, N: int) -> float:
    bd, bc = gains.beta_d, gains.beta_cascade
    return (
        bd * M
        + math.sqrt(M) * N * math.pi / 2.0 * math.sqrt(bd * bc)
        + bc * M * (N + uncorrelated_F(N))
    ) * gains.tau_bar


def var_snr_uncorrelated(gains: LinkGains, M: int, N: int) -> float:
    """Exact SNR variance for R_d = I and R_ru = I.

    The direct/cascade cross term is N pi (B_u - M^{3/2}) with
    B_u = M^{3/2} + sqrt(M)/2, i.e. N pi sqrt(M) / 2. Offsetting B_u by
    2 M^{3/2} instead makes the baseline variance negative.
    """
    bd, bc = gains.beta_d, gains.beta_cascade
    F_u = uncorrelated_F(N)
    y2 = N + F_u
    B_u = M**1.5 + math.sqrt(M) / 2.0
    c_u1, c_u2 = y_moments_uncorrelated(N)
    total = (
        bd**2 * M
        + bd**1.5 * math.sqrt(bc) * N * math.pi * (B_u - M**1.5)
        + bd * bc * M * (4.0 * y2 - N * N * math.pi**2 / 4.0)
        + M**1.5 * math.sqrt(bd) * bc**1.5 * (2.0 * math.sqrt(math.pi) * c_u1 - N * y2 * math.pi)
        + (M * bc) ** 2 * (c_u2 - y2**2)
    )
    return total * gains.tau_bar**2


def snr_bounds_rho_ru(gains: LinkGains, M: int, N: int, A: float) -> tuple[float, float]:
    """(lower, upper) mean SNR over UE-RIS correlation, at fixed direct-path gain A."""
    if A < 0:
        raise ValueError("A must be nonnegative")
    bd, bc = gains.beta_d, gains.beta_cascade
    common = bd * M + N * A * math.pi / 2.0 * math.sqrt(bd * bc)
    lower = (common + bc * M * (N + uncorrelated_F(N))) * gains.tau_bar
    upper = (common + bc * M * N * N) * gains.tau_bar
    return lower, upper


def mean_snr_favorable(gains: LinkGains, M: int, N: int) -> float:
    """Mean SNR for a fully correlated UE-RIS channel and uncorrelated UE-BS channel."""
    return snr_bounds_rho_ru(gains, M, N, math.sqrt(M))[1]


def gain_corr(gains: LinkGains, M: int, N: int, A: float) -> float:
    """Relative mean-SNR gain (UB - LB) / LB from full UE-RIS correlation."""
    bd, bc = gains.beta_d, gains.beta_cascade
    if bc == 0.0:
        return 0.0
    num = (4.0 - math.pi) * N * N + (math.pi - 4.0) * N
    den = (
        math.pi * N * N
        + (4.0 - math.pi) * N
        + 4.0 * bd / bc
        + 2.0 * N * A * math.pi * math.sqrt(bd) / (M * math.sqrt(bc))
    )
    return num / den


def gain_max() -> float:
    """Large-RIS limit of ``gain_corr``: (4 - pi) / pi."""
    return (4.0 - math.pi) / math.pi
