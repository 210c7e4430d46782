"""Optimal RIS phases and the resulting matched-filter SNR per realization."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .gains import LinkGains

__all__ = [
    "SnrSample",
    "optimal_phases",
    "global_channel",
    "instantaneous_snr",
    "optimal_snr",
    "optimal_snr_batch",
]

_DEGENERATE = 1e-300


@dataclass(frozen=True)
class SnrSample:
    snr: float
    Y: float  # sum of |h_ru_tilde| entries
    psi: complex  # unit-modulus phase of a_b^H h_d


def _direct_phase(a_b: np.ndarray, h_d: np.ndarray) -> complex:
    proj = np.vdot(a_b, h_d)
    if abs(proj) < _DEGENERATE:
        warnings.warn("a_b^H h_d vanishes; using psi = 1", RuntimeWarning, stacklevel=3)
        return 1.0 + 0.0j
    return complex(proj / abs(proj))


def optimal_phases(real: ChannelRealization) -> np.ndarray:
    """Diagonal of the SNR-maximising RIS reflection matrix.

    Each element undoes the phase of its UE-RIS coefficient, adds the RIS
    steering phase and rotates everything onto the direct path phase psi.
    """
    psi = _direct_phase(real.a_b, real.h_d)
    return psi * np.exp(1j * np.angle(real.a_r)) * np.exp(-1j * np.angle(real.h_ru_tilde))


def global_channel(real: ChannelRealization, phases: np.ndarray, gains: LinkGains) -> np.ndarray:
    """h = h_d + H_br Phi h_ru with the rank-1 LOS H_br = sqrt(beta_br) a_b a_r^H."""
    phases = np.asarray(phases)
    if phases.shape != real.a_r.shape or real.h_ru_tilde.shape != real.a_r.shape:
        raise ValueError("phase vector, a_r and h_ru must have the same length")
    if real.h_d.shape != real.a_b.shape:
        raise ValueError("h_d and a_b must have the same length")
    h_ru = math.sqrt(gains.beta_ru) * real.h_ru_tilde
    cascade = np.vdot(real.a_r, phases * h_ru)
    return real.h_d + math.sqrt(gains.beta_br) * cascade * real.a_b


def instantaneous_snr(h: np.ndarray, tau_bar: float) -> float:
    """Matched-filter SNR ||h||^2 * tau_bar."""
    if not tau_bar > 0:
        raise ValueError("tau_bar must be positive")
    return float(np.vdot(h, h).real) * tau_bar


def optimal_snr(real: ChannelRealization, gains: LinkGains) -> SnrSample:
    """SNR at the optimal phases, using h = h_d + sqrt(beta_br beta_ru) psi Y a_b."""
    psi = _direct_phase(real.a_b, real.h_d)
    y = float(np.sum(np.abs(real.h_ru_tilde)))
    h = real.h_d + math.sqrt(gains.beta_cascade) * psi * y * real.a_b
    return SnrSample(instantaneous_snr(h, gains.tau_bar), y, psi)


def optimal_snr_batch(h_d: np.ndarray, h_ru_tilde: np.ndarray, a_b: np.ndarray, gains: LinkGains):
    """Vectorised optimal SNR for row-stacked draws; returns ``(snr, Y)`` arrays.

    Uses the expansion
    SNR = (||h_d||^2 + 2 |alpha| |a_b^H h_d| + |alpha|^2 ||a_b||^2) tau_bar
    with |alpha| = sqrt(beta_br beta_ru) Y, which holds because the optimal
    phases align the cascade with the direct path.
    """
    y = np.sum(np.abs(h_ru_tilde), axis=-1)
    alpha = math.sqrt(gains.beta_cascade) * y
    proj = np.abs(h_d @ a_b.conj())
    direct = np.sum(h_d.real**2 + h_d.imag**2, axis=-1)
    norm_sq = float(np.vdot(a_b, a_b).real)
    snr = (direct + 2.0 * alpha * proj + alpha**2 * norm_sq) * gains.tau_bar
    return snr, y
