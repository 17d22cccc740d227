"""Observation synthesis: noisy profiles and multi-aspect static patterns.

Noise is circular complex Gaussian with total power sigma2 per bin
(sigma2/2 in each quadrature).  Every profile of a pattern draws from its
own substream, split off the base seed by aspect index, so patterns are
reproducible and profiles are mutually independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import DegenerateGeometryError, SightLine
from .loss import Observation
from .model import PointScatteringModel, RangeGrid, RangeProfile, synthesize_profiles
from .waveform import WaveformKernel


@dataclass(frozen=True)
class NoiseSpec:
    """Per-bin complex noise power and the base seed of the draw."""

    sigma2: float
    seed: int = 0

    def __post_init__(self):
        if self.sigma2 < 0.0 or not np.isfinite(self.sigma2):
            raise ValueError(f"noise power must be finite and >= 0, got {self.sigma2}")


@dataclass(frozen=True)
class StaticPattern:
    """One noisy observation per sight line, sharing a grid and noise spec."""

    observations: tuple[Observation, ...]

    @property
    def sightlines(self) -> list[SightLine]:
        return [o.line for o in self.observations]


def _substream(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _noise(rng: np.random.Generator, sigma2: float, m: int) -> np.ndarray:
    re, im = rng.standard_normal((2, m))
    return np.sqrt(sigma2 / 2.0) * (re + 1j * im)


def add_noise(profile: RangeProfile, spec: NoiseSpec, index: int = 0) -> Observation:
    """Observation from one profile; index selects the noise substream."""
    w = _noise(_substream(spec.seed, index), spec.sigma2, profile.grid.m)
    return Observation(profile.samples + w, profile.line, profile.grid)


def sweep_sightlines(
    count: int, elevation: float = 0.0, az_start: float = 0.0, az_stop: float = 2.0 * np.pi
) -> list[SightLine]:
    """Evenly spaced azimuths at fixed elevation; the stop angle is exclusive."""
    if count < 1:
        raise ValueError(f"need at least one aspect, got {count}")
    az = az_start + (az_stop - az_start) * np.arange(count) / count
    ce, se = np.cos(elevation), np.sin(elevation)
    return [SightLine(np.array([ce * np.cos(a), ce * np.sin(a), se])) for a in az]


def synthesize_pattern(
    model: PointScatteringModel,
    wf: WaveformKernel,
    grid: RangeGrid,
    lines,
    spec: NoiseSpec,
) -> StaticPattern:
    """Noisy profiles for every sight line, with per-aspect noise substreams."""
    line_objs = [l if isinstance(l, SightLine) else SightLine(np.asarray(l, dtype=float)) for l in lines]
    lmat = np.stack([l.vec for l in line_objs])
    try:
        gmat = synthesize_profiles(model, wf, grid, lmat)
    except DegenerateGeometryError:
        # re-run per aspect so the error names the offending sight line
        for i, l in enumerate(line_objs):
            try:
                synthesize_profiles(model, wf, grid, l)
            except DegenerateGeometryError as err:
                raise DegenerateGeometryError(f"aspect {i}: {err}") from None
        raise
    obs = tuple(
        Observation(gmat[i] + _noise(_substream(spec.seed, i), spec.sigma2, grid.m), line_objs[i], grid)
        for i in range(len(line_objs))
    )
    return StaticPattern(obs)
