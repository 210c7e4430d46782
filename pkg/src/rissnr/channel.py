"""Array geometry, spatial correlation and correlated Rayleigh channel draws.

Both the BS and the RIS are vertical uniform rectangular arrays (VURA) in the
y-z plane. Element ``(i_y, i_z)`` sits at ``(i_y * d, i_z * d)`` wavelengths and
is stored at flat index ``i_y * n_z + i_z``, which is the ordering produced by
``a_y (x) a_z``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np

from .linalg import hermitian_psd_sqrt, kronecker

Side = Literal["BS", "RIS"]

__all__ = [
    "SystemGeometry",
    "CorrelationSpec",
    "ChannelModel",
    "ChannelRealization",
    "steering_vectors",
    "element_coordinates",
    "correlation_matrix",
    "complex_normals_from_words",
    "words_per_draw",
    "sample_realization",
    "sample_batch",
]


@dataclass(frozen=True)
class SystemGeometry:
    """BS and RIS grid sizes, spacings (wavelengths) and LOS angles (radians).

    Defaults are the single angle sample used for the baseline scenario:
    theta_D = 77.1 deg, omega_D = 19.95 deg, theta_A = 109.9 deg,
    omega_A = -29.9 deg, with a 8x4 BS grid and an 8x8 RIS grid.
    """

    M_y: int = 8
    M_z: int = 4
    N_y: int = 8
    N_z: int = 8
    d_b: float = 0.5
    d_r: float = 0.2
    theta_A: float = math.radians(109.9)
    omega_A: float = math.radians(-29.9)
    theta_D: float = math.radians(77.1)
    omega_D: float = math.radians(19.95)

    def __post_init__(self):
        for name in ("M_y", "M_z", "N_y", "N_z"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        for name in ("d_b", "d_r"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")

    @property
    def M(self) -> int:
        return self.M_y * self.M_z

    @property
    def N(self) -> int:
        return self.N_y * self.N_z


@dataclass(frozen=True)
class CorrelationSpec:
    """Nearest-neighbour correlations, or explicit correlation matrices.

    When ``R_d`` / ``R_ru`` are given they override the exponential-decay
    model for that side.
    """

    rho_d: float = 0.0
    rho_ru: float = 0.0
    R_d: Optional[np.ndarray] = field(default=None, compare=False)
    R_ru: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        for name in ("rho_d", "rho_ru"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0,1], got {value!r}")

    @property
    def mode(self) -> str:
        if self.R_d is None and self.R_ru is None:
            return "exponential-decay"
        return "explicit matrices"


def _axis_steering(n: int, spacing: float, phase_per_wavelength: float) -> np.ndarray:
    return np.exp(2j * np.pi * spacing * np.arange(n) * phase_per_wavelength)


def steering_vectors(geom: SystemGeometry) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(a_b, a_r)``, the BS and RIS VURA steering vectors."""
    a_b = kronecker(
        _axis_steering(geom.M_y, geom.d_b, math.sin(geom.theta_A) * math.sin(geom.omega_A)),
        _axis_steering(geom.M_z, geom.d_b, math.cos(geom.theta_A)),
    )
    a_r = kronecker(
        _axis_steering(geom.N_y, geom.d_r, math.sin(geom.theta_D) * math.sin(geom.omega_D)),
        _axis_steering(geom.N_z, geom.d_r, math.cos(geom.theta_D)),
    )
    return a_b, a_r


def _grid(side: Side, geom: SystemGeometry) -> tuple[int, int, float]:
    if side == "BS":
        return geom.M_y, geom.M_z, geom.d_b
    if side == "RIS":
        return geom.N_y, geom.N_z, geom.d_r
    raise ValueError(f"side must be 'BS' or 'RIS', got {side!r}")


def element_coordinates(geom: SystemGeometry, side: Side) -> np.ndarray:
    """(y, z) positions in wavelengths, shape ``(n_elements, 2)``, row-major."""
    n_y, n_z, d = _grid(side, geom)
    iy, iz = np.meshgrid(np.arange(n_y), np.arange(n_z), indexing="ij")
    return np.column_stack([iy.ravel() * d, iz.ravel() * d])


def correlation_matrix(spec: CorrelationSpec, geom: SystemGeometry, side: Side) -> np.ndarray:
    """Exponential-decay correlation rho ** (distance / spacing) for one side.

    Each side is normalised by its own nearest-neighbour spacing, so ``rho``
    is the correlation between adjacent elements.
    """
    explicit = spec.R_d if side == "BS" else spec.R_ru
    if explicit is not None:
        return np.asarray(explicit)
    rho = spec.rho_d if side == "BS" else spec.rho_ru
    _, _, d = _grid(side, geom)
    pos = element_coordinates(geom, side)
    diff = pos[:, None, :] - pos[None, :, :]
    # Rounding keeps grid distances like sqrt(2) consistent between pairs.
    hops = np.round(np.sqrt(np.sum(diff**2, axis=-1)) / d, 12)
    if rho == 0.0:
        return np.eye(len(pos))
    return rho**hops


@dataclass(frozen=True)
class ChannelModel:
    """Deterministic part of the channel: steering vectors and correlation factors."""

    geometry: SystemGeometry
    a_b: np.ndarray
    a_r: np.ndarray
    R_d: np.ndarray
    R_ru: np.ndarray
    R_d_sqrt: np.ndarray
    R_ru_sqrt: np.ndarray

    @classmethod
    def build(cls, geom: SystemGeometry, spec: CorrelationSpec) -> "ChannelModel":
        a_b, a_r = steering_vectors(geom)
        R_d = correlation_matrix(spec, geom, "BS")
        R_ru = correlation_matrix(spec, geom, "RIS")
        if R_d.shape != (geom.M, geom.M) or R_ru.shape != (geom.N, geom.N):
            raise ValueError("correlation matrix size does not match the geometry")
        return cls(geom, a_b, a_r, R_d, R_ru, hermitian_psd_sqrt(R_d), hermitian_psd_sqrt(R_ru))

    @property
    def M(self) -> int:
        return self.geometry.M

    @property
    def N(self) -> int:
        return self.geometry.N


@dataclass(frozen=True)
class ChannelRealization:
    """One channel draw; ``h_ru = sqrt(beta_ru) * h_ru_tilde``."""

    h_d: np.ndarray
    h_ru_tilde: np.ndarray
    a_b: np.ndarray
    a_r: np.ndarray


def complex_normals_from_words(words: np.ndarray) -> np.ndarray:
    """Map pairs of raw 64-bit words to CN(0, 1) samples (polar Box-Muller).

    ``words[..., 2k]`` sets the modulus and ``words[..., 2k+1]`` the phase, so
    each output consumes exactly two words and the real and imaginary parts
    are independent N(0, 1/2).
    """
    words = np.asarray(words, dtype=np.uint64)
    mantissa = (words >> np.uint64(11)).astype(np.float64) * 2.0**-53
    u_mod = mantissa[..., 0::2] + 2.0**-53  # (0, 1]
    u_phase = mantissa[..., 1::2]
    return np.sqrt(-np.log(u_mod)) * np.exp(2j * np.pi * u_phase)


def words_per_draw(model: ChannelModel) -> int:
    """Raw words one realization consumes: two per complex Gaussian entry."""
    return 2 * (model.M + model.N)


def _fading_from_words(model: ChannelModel, beta_d: float, words: np.ndarray):
    z = complex_normals_from_words(words)
    u_d = z[..., : model.M]
    u_ru = z[..., model.M : model.M + model.N]
    h_d = math.sqrt(beta_d) * (u_d @ model.R_d_sqrt.T)
    h_ru_tilde = u_ru @ model.R_ru_sqrt.T
    return h_d, h_ru_tilde


def sample_realization(model: ChannelModel, beta_d: float, stream) -> ChannelRealization:
    """Draw one realization from ``stream`` (a numpy ``BitGenerator``)."""
    words = stream.random_raw(words_per_draw(model))
    h_d, h_ru_tilde = _fading_from_words(model, beta_d, words)
    return ChannelRealization(h_d, h_ru_tilde, model.a_b, model.a_r)


def sample_batch(model: ChannelModel, beta_d: float, words: np.ndarray):
    """Vectorised draws: ``words`` has one row per realization.

    Only the first ``words_per_draw(model)`` columns are used. Returns
    ``(h_d, h_ru_tilde)`` with shapes ``(n, M)`` and ``(n, N)``.
    """
    words = np.atleast_2d(words)[:, : words_per_draw(model)]
    return _fading_from_words(model, beta_d, words)
