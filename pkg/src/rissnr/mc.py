"""Seeded Monte Carlo estimation of the optimal-phase SNR distribution.

Every realization ``i`` reads its random words from a Philox stream keyed by
the run seed and positioned at counter block ``i * stride``, where ``stride``
is the number of 256-bit blocks one realization needs. Blocks for a run of
consecutive samples are therefore contiguous, so a chunk is drawn with a
single generator and gives exactly the words each per-sample stream would.
Chunks are reduced in index order, which makes results bit-identical for
any number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelModel, words_per_draw, sample_batch
from .distfit import EmpiricalDistribution
from .scenario import ScenarioConfig
from .snr import optimal_snr_batch

__all__ = ["McConfig", "McResult", "derive_stream", "run", "stride_for", "CHUNK_SIZE", "RETAIN_CAP"]

CHUNK_SIZE = 4096
RETAIN_CAP = 1_000_000
_WORDS_PER_BLOCK = 4
_RESERVOIR_TAG = 0x5EED_5A3F


@dataclass(frozen=True)
class McConfig:
    n_samples: int
    seed: int = 0
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    workers: int = 1

    def __post_init__(self):
        if int(self.n_samples) != self.n_samples or self.n_samples < 1:
            raise ValueError("n_samples must be a positive integer")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class McResult:
    n_samples: int
    mean: float
    variance: float  # unbiased
    std_error_mean: float
    distribution: EmpiricalDistribution
    y_moments: tuple  # sample E{Y}, E{Y^2}, E{Y^3}, E{Y^4}

    @property
    def y_mean(self) -> float:
        return self.y_moments[0]

    @property
    def y_variance(self) -> float:
        n = self.n_samples
        return (self.y_moments[1] - self.y_moments[0] ** 2) * n / max(n - 1, 1)


def stride_for(model: ChannelModel) -> int:
    """Counter blocks reserved per realization."""
    return -(-words_per_draw(model) // _WORDS_PER_BLOCK)


def derive_stream(seed: int, sample_index: int, stride: int = 1) -> np.random.Philox:
    """Bit generator holding the words of realization ``sample_index``."""
    return np.random.Philox(key=int(seed), counter=int(sample_index) * int(stride))


def _chunk_words(seed: int, start: int, count: int, stride: int) -> np.ndarray:
    stream = derive_stream(seed, start, stride)
    return stream.random_raw(count * stride * _WORDS_PER_BLOCK).reshape(count, -1)


def _retained_indices(seed: int, n: int) -> np.ndarray | None:
    if n <= RETAIN_CAP:
        return None
    rng = np.random.default_rng([int(seed), _RESERVOIR_TAG])
    return np.sort(rng.choice(n, size=RETAIN_CAP, replace=False))


def run(cfg: McConfig) -> McResult:
    """Draw ``cfg.n_samples`` realizations and summarise the optimal SNR."""
    scen = cfg.scenario
    model = scen.model
    gains = scen.gains
    stride = stride_for(model)
    n = cfg.n_samples
    starts = range(0, n, CHUNK_SIZE)
    keep = _retained_indices(cfg.seed, n)

    # Moments are accumulated about the first sample to limit cancellation.
    h_d0, h_ru0 = sample_batch(model, gains.beta_d, _chunk_words(cfg.seed, 0, 1, stride))
    shift = float(optimal_snr_batch(h_d0, h_ru0, model.a_b, gains)[0][0])

    def work(start: int):
        count = min(CHUNK_SIZE, n - start)
        h_d, h_ru = sample_batch(model, gains.beta_d, _chunk_words(cfg.seed, start, count, stride))
        snr, y = optimal_snr_batch(h_d, h_ru, model.a_b, gains)
        dev = snr - shift
        sums = (
            math.fsum(dev), math.fsum(dev * dev),
            math.fsum(y), math.fsum(y**2), math.fsum(y**3), math.fsum(y**4),
        )
        if keep is None:
            kept = snr
        else:
            lo, hi = np.searchsorted(keep, [start, start + count])
            kept = snr[keep[lo:hi] - start]
        return sums, kept

    if cfg.workers == 1:
        parts = [work(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(work, starts))

    totals = [math.fsum(p[0][k] for p in parts) for k in range(6)]
    s1, s2 = totals[0], totals[1]
    mean = shift + s1 / n
    variance = max(s2 - s1 * s1 / n, 0.0) / (n - 1) if n > 1 else 0.0
    samples = np.sort(np.concatenate([p[1] for p in parts]))
    return McResult(
        n_samples=n,
        mean=mean,
        variance=variance,
        std_error_mean=math.sqrt(variance / n),
        distribution=EmpiricalDistribution(samples),
        y_moments=tuple(t / n for t in totals[2:]),
    )
