"""Shared test helpers: finite-difference oracles and random scenario builders."""

import numpy as np
import pytest

from scatterfit import (
    C_LIGHT,
    FixedAmplitude,
    FixedCylindrical,
    PointScatteringModel,
    RangeGrid,
    Scatterer,
    SightLine,
    SlippingRing,
    Spherical,
    lfm_from_band,
    sightline_from_angles,
)

TINY = np.finfo(float).tiny


def fd_step(value: float) -> float:
    return max(1e-6, 1e-6 * abs(value))


def fd_gradient(f, theta: np.ndarray) -> np.ndarray:
    """Central differences of a scalar function, one slot at a time."""
    theta = np.asarray(theta, dtype=float)
    out = np.empty(theta.size)
    for j in range(theta.size):
        h = fd_step(theta[j])
        tp, tm = theta.copy(), theta.copy()
        tp[j] += h
        tm[j] -= h
        out[j] = (f(tp) - f(tm)) / (2.0 * h)
    return out


def fd_jacobian(f, theta: np.ndarray) -> np.ndarray:
    """Central differences of a vector-valued (possibly complex) function."""
    theta = np.asarray(theta, dtype=float)
    cols = []
    for j in range(theta.size):
        h = fd_step(theta[j])
        tp, tm = theta.copy(), theta.copy()
        tp[j] += h
        tm[j] -= h
        cols.append((f(tp) - f(tm)) / (2.0 * h))
    return np.stack(cols, axis=-1)


def rel_err(got: np.ndarray, want: np.ndarray) -> float:
    got, want = np.asarray(got), np.asarray(want)
    return float(np.max(np.abs(got - want)) / max(np.max(np.abs(want)), TINY))


def column_rel_err(got: np.ndarray, want: np.ndarray) -> float:
    """Worst per-column infinity-norm relative error between two Jacobians."""
    worst = 0.0
    for j in range(want.shape[-1]):
        gc, wc = got[..., j], want[..., j]
        worst = max(worst, float(np.max(np.abs(gc - wc)) / max(np.max(np.abs(wc)), TINY)))
    return worst


# deliberately mid-scale slot values; huge radii push peaks off small grids
def random_scatterer(rng: np.random.Generator, kind: str) -> Scatterer:
    amp = FixedAmplitude(float(rng.uniform(0.3, 2.0)), float(rng.uniform(-1.0, 1.0)))
    if kind == "fixed_cylindrical":
        pos = FixedCylindrical(
            float(rng.uniform(0.05, 1.5)),
            float(rng.uniform(-np.pi, np.pi)),
            float(rng.uniform(-2.0, 2.0)),
        )
    elif kind == "slipping":
        pos = SlippingRing(float(rng.uniform(0.05, 1.5)), float(rng.uniform(-2.0, 2.0)))
    elif kind == "spherical":
        pos = Spherical(float(rng.uniform(0.1, 2.0)))
    else:
        raise ValueError(kind)
    return Scatterer(amp, pos)


POSITION_KINDS = ("fixed_cylindrical", "slipping", "spherical")


def random_model(rng: np.random.Generator, n: int | None = None) -> PointScatteringModel:
    n = n or int(rng.integers(1, 4))
    kinds = [POSITION_KINDS[int(rng.integers(0, 3))] for _ in range(n)]
    return PointScatteringModel(tuple(random_scatterer(rng, k) for k in kinds))


def random_line(rng: np.random.Generator, min_xy: float = 0.25) -> SightLine:
    # keep the xy footprint away from zero so slipping rings stay well posed
    el_cap = np.arccos(min_xy)
    return sightline_from_angles(
        float(rng.uniform(0.0, 2.0 * np.pi)), float(rng.uniform(-el_cap, el_cap))
    )


def reference_truth() -> PointScatteringModel:
    return PointScatteringModel((
        Scatterer(FixedAmplitude(1.0, 0.0), FixedCylindrical(0.5, 0.0, 2.0)),
        Scatterer(FixedAmplitude(2.0, 0.0), FixedCylindrical(0.0, np.pi / 8.0, -2.0)),
        Scatterer(FixedAmplitude(0.5, 0.0), SlippingRing(0.0, 0.1)),
    ))


def reference_guess() -> PointScatteringModel:
    return PointScatteringModel((
        Scatterer(FixedAmplitude(1.01, 0.0), FixedCylindrical(0.6, 0.0, 2.1)),
        Scatterer(FixedAmplitude(1.9, 0.0), FixedCylindrical(0.0, np.pi / 8.0 + 0.01, -2.1)),
        Scatterer(FixedAmplitude(0.51, 0.0), SlippingRing(0.1, 0.1)),
    ))


@pytest.fixture
def rng():
    return np.random.default_rng(20260816)


@pytest.fixture(scope="session")
def wf_unit():
    """500 MHz chirp, 3 GHz carrier, scaled so the matched-filter peak is 1."""
    return lfm_from_band(500e6, 3e9, 1e-6, 1000.0)


@pytest.fixture(scope="session")
def grid_mid():
    return RangeGrid(-5.0, C_LIGHT / (4.0 * 500e6), 67)
