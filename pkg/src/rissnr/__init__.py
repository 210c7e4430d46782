"""Optimal-phase SNR of a single-user RIS-aided SIMO uplink: closed forms and simulation."""

from .analytic import (
    MomentIngredients,
    SnrStatistics,
    gain_corr,
    gain_max,
    mean_snr,
    mean_snr_favorable,
    mean_snr_uncorrelated,
    moment_ingredients,
    snr_bounds_rho_ru,
    var_snr,
    var_snr_uncorrelated,
)
from .channel import ChannelModel, CorrelationSpec, SystemGeometry
from .distfit import GammaParams, fit_gamma, gamma_cdf, ks_distance
from .gains import LinkGains
from .mc import McConfig, McResult, run
from .scenario import ScenarioConfig

__version__ = "0.1.0"
