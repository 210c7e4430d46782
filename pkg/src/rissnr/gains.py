"""Link gains and transmit SNR shared by the simulator and the closed forms."""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["LinkGains", "BASELINE_BETA_D", "BASELINE_BETA_BR", "BASELINE_BETA_RU"]

BASELINE_BETA_D = 0.59
BASELINE_BETA_RU = 0.59
BASELINE_BETA_BR = 20.0**-2  # LOS path loss d_br**-2 at d_br = 20 m


@dataclass(frozen=True)
class LinkGains:
    """Linear link gains and tau_bar = E_s / sigma^2 (linear)."""

    beta_d: float = BASELINE_BETA_D
    beta_br: float = BASELINE_BETA_BR
    beta_ru: float = BASELINE_BETA_RU
    tau_bar: float = 1.0

    def __post_init__(self):
        for name in ("beta_d", "beta_br", "beta_ru"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be a nonnegative finite number, got {value!r}")
        if not (self.tau_bar > 0 and math.isfinite(self.tau_bar)):
            raise ValueError(f"tau_bar must be positive, got {self.tau_bar!r}")

    @property
    def beta_cascade(self) -> float:
        """beta_br * beta_ru, the gain of the RIS path."""
        return self.beta_br * self.beta_ru

    def with_tau(self, tau_bar: float) -> "LinkGains":
        return LinkGains(self.beta_d, self.beta_br, self.beta_ru, tau_bar)
