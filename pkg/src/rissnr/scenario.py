"""The scenario record shared by the analytic path, the simulator and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

from .analytic import MomentIngredients, SnrStatistics, moment_ingredients, var_snr
from .channel import ChannelModel, CorrelationSpec, SystemGeometry
from .gains import LinkGains

__all__ = ["ScenarioConfig"]


@dataclass(frozen=True)
class ScenarioConfig:
    """Geometry, gains and correlation for one link. Defaults give the baseline:
    M = 32 (8x4), N = 64 (8x8), beta_d = beta_ru = 0.59, beta_br = 1/400.
    """

    geometry: SystemGeometry = field(default_factory=SystemGeometry)
    gains: LinkGains = field(default_factory=LinkGains)
    correlation: CorrelationSpec = field(default_factory=CorrelationSpec)
    label: str = "baseline"

    @cached_property
    def model(self) -> ChannelModel:
        return ChannelModel.build(self.geometry, self.correlation)

    @cached_property
    def ingredients(self) -> MomentIngredients:
        m = self.model
        return moment_ingredients(m.R_d, m.R_ru, m.a_b)

    def statistics(self) -> SnrStatistics:
        m = self.model
        return var_snr(self.gains, m.R_d, m.R_ru, m.a_b, self.ingredients)

    def with_(self, **changes) -> "ScenarioConfig":
        """Copy with nested fields replaced, e.g. ``with_(rho_ru=1.0, N_y=16)``."""
        geo = {k: v for k, v in changes.items() if k in SystemGeometry.__dataclass_fields__}
        gain = {k: v for k, v in changes.items() if k in LinkGains.__dataclass_fields__}
        corr = {k: v for k, v in changes.items() if k in CorrelationSpec.__dataclass_fields__}
        rest = set(changes) - set(geo) - set(gain) - set(corr) - {"label"}
        if rest:
            raise TypeError(f"unknown scenario fields: {sorted(rest)}")
        return ScenarioConfig(
            replace(self.geometry, **geo),
            replace(self.gains, **gain),
            replace(self.correlation, **corr),
            changes.get("label", self.label),
        )
