"""Weighted squared-error losses between observed and modeled profiles.

Two flavors:

* coherent: residual on the complex samples, (z-g)^H W (z-g); sensitive to
  carrier phase, so its landscape ripples at half the carrier wavelength.
* noncoherent: residual on the sample moduli, (|z|-|g|)^T W (|z|-|g|);
  phase-blind, much smoother, used to get within the coherent capture zone.

Gradients are exact, built from the profile Jacobian.  The noncoherent
modulus is not differentiable at |g| = 0; bins below a small clamp get a
zero subgradient there.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import SightLine
from .model import PointScatteringModel, RangeGrid, synthesize_profiles, profile_jacobians
from .waveform import WaveformKernel


class WeightMatrix:
    """Real symmetric weights with scalar / diagonal / dense representations.

    The scalar form covers the identity and 1/sigma^2 scalings without ever
    materializing a matrix.
    """

    def __init__(self, kind: str, scale: float = 1.0, diag=None, dense=None):
        self.kind = kind
        self.scale = float(scale)
        self.diag = diag
        self.dense = dense
        if kind == "scalar":
            if not np.isfinite(self.scale) or self.scale < 0.0:
                raise ValueError(f"weight scale must be finite and >= 0, got {scale}")
        elif kind == "diagonal":
            self.diag = np.asarray(diag, dtype=float)
            if self.diag.ndim != 1 or not np.all(np.isfinite(self.diag)):
                raise ValueError("diagonal weights must be a finite 1-D vector")
        elif kind == "dense":
            w = np.asarray(dense, dtype=float)
            if w.ndim != 2 or w.shape[0] != w.shape[1]:
                raise ValueError(f"dense weights must be square, got shape {w.shape}")
            if not np.all(np.isfinite(w)):
                raise ValueError("dense weights must be finite")
            if np.max(np.abs(w - w.T)) != 0.0:
                raise ValueError("dense weights must be exactly symmetric")
            self.dense = w
        else:
            raise ValueError(f"unknown weight kind {kind!r}")

    @classmethod
    def identity(cls) -> "WeightMatrix":
        return cls("scalar", 1.0)

    @classmethod
    def scaled_identity(cls, scale: float) -> "WeightMatrix":
        return cls("scalar", scale)

    @classmethod
    def from_sigma2(cls, sigma2: float) -> "WeightMatrix":
        """Inverse-noise-power weighting, the default when sigma^2 is known."""
        if sigma2 <= 0.0:
            raise ValueError(f"noise power must be > 0, got {sigma2}")
        return cls("scalar", 1.0 / sigma2)

    @classmethod
    def diagonal(cls, diag) -> "WeightMatrix":
        return cls("diagonal", diag=diag)

    @classmethod
    def from_dense(cls, dense) -> "WeightMatrix":
        return cls("dense", dense=dense)

    def check_bins(self, m: int) -> None:
        if self.kind == "diagonal" and self.diag.shape[0] != m:
            raise ValueError(f"diagonal weights sized {self.diag.shape[0]}, profiles have {m} bins")
        if self.kind == "dense" and self.dense.shape[0] != m:
            raise ValueError(f"dense weights sized {self.dense.shape[0]}, profiles have {m} bins")

    def apply(self, x: np.ndarray) -> np.ndarray:
        """W x along the last axis; x may be real or complex, (m,) or (K, m)."""
        if self.kind == "scalar":
            return self.scale * x
        if self.kind == "diagonal":
            return self.diag * x
        return x @ self.dense  # symmetric, so right-multiplication matches W x


def _quad(w: WeightMatrix, r: np.ndarray) -> float:
    """r^H W r summed over every axis (real, >= 0 for PSD weights)."""
    return float(np.sum((np.conj(r) * w.apply(r)).real))


@dataclass(frozen=True)
class Observation:
    """One noisy profile: complex samples plus the geometry that produced it."""

    z: np.ndarray
    line: SightLine
    grid: RangeGrid

    def __post_init__(self):
        z = np.asarray(self.z, dtype=complex)
        if z.shape != (self.grid.m,):
            raise ValueError(f"expected {self.grid.m} samples, got shape {z.shape}")
        if not np.all(np.isfinite(z)):
            raise ValueError("observed samples must be finite")
        z.setflags(write=False)
        object.__setattr__(self, "z", z)


def amplitude_vector(x: np.ndarray) -> np.ndarray:
    """Elementwise modulus."""
    return np.abs(x)


def coherent_loss(z: np.ndarray, g: np.ndarray, w: WeightMatrix) -> float:
    """(z - g)^H W (z - g)."""
    return _quad(w, np.asarray(z) - np.asarray(g))


def coherent_loss_gradient(z: np.ndarray, g: np.ndarray, jac: np.ndarray, w: WeightMatrix) -> np.ndarray:
    """2 Re{G^H W (g - z)}, the exact loss gradient in the model slots."""
    res = w.apply(np.asarray(g) - np.asarray(z))
    return 2.0 * (np.conj(jac).T @ res).real


def noncoherent_loss(z: np.ndarray, g: np.ndarray, w: WeightMatrix) -> float:
    """(|z| - |g|)^T W (|z| - |g|)."""
    return _quad(w, np.abs(z) - np.abs(g))


def _modulus_direction(g: np.ndarray, clamp: float) -> tuple[np.ndarray, np.ndarray]:
    """Re{g}/|g| and Im{g}/|g| with a zero subgradient below the clamp."""
    mag = np.abs(g)
    floor = clamp if clamp > 0.0 else np.finfo(float).tiny
    live = mag >= floor
    safe = np.where(live, mag, 1.0)
    return np.where(live, g.real / safe, 0.0), np.where(live, g.imag / safe, 0.0)


def noncoherent_loss_gradient(
    z: np.ndarray, g: np.ndarray, jac: np.ndarray, w: WeightMatrix, clamp: float = 0.0
) -> np.ndarray:
    """2 (U_r G_r + U_i G_i)^T W (|g| - |z|) with U the modulus direction."""
    ur, ui = _modulus_direction(np.asarray(g), clamp)
    slope = ur[:, None] * jac.real + ui[:, None] * jac.imag
    return 2.0 * slope.T @ w.apply(np.abs(g) - np.abs(z))


def noncoherent_clamp(wf: WaveformKernel) -> float:
    """Modulus floor below which the noncoherent subgradient is zeroed."""
    return 1e-12 * wf.peak


def _stacked(observations: list[Observation]) -> tuple[np.ndarray, np.ndarray, RangeGrid] | None:
    """Stack observations sharing one grid; None if the grids differ."""
    g0 = observations[0].grid
    if any(o.grid != g0 for o in observations[1:]):
        return None
    zmat = np.stack([o.z for o in observations])
    lmat = np.stack([o.line.vec for o in observations])
    return zmat, lmat, g0


def _check_batch(observations: list[Observation], w: WeightMatrix) -> None:
    if not observations:
        raise ValueError("need at least one observation")
    m = observations[0].grid.m
    if any(o.grid.m != m for o in observations):
        raise ValueError("all observations must share the same number of bins")
    w.check_bins(m)


def batch_loss(
    observations: list[Observation],
    model: PointScatteringModel,
    wf: WaveformKernel,
    w: WeightMatrix,
    kind: str = "coherent",
) -> float:
    """Unweighted sum of per-observation losses."""
    _check_batch(observations, w)
    if kind not in ("coherent", "noncoherent"):
        raise ValueError(f"unknown loss kind {kind!r}")
    stacked = _stacked(observations)
    if stacked is not None:
        zmat, lmat, grid = stacked
        gmat = synthesize_profiles(model, wf, grid, lmat)
        r = (zmat - gmat) if kind == "coherent" else (np.abs(zmat) - np.abs(gmat))
        return float(np.sum((np.conj(r) * w.apply(r)).real, axis=-1).sum())
    total = 0.0
    for o in observations:
        g = synthesize_profiles(model, wf, o.grid, o.line)[0]
        total += coherent_loss(o.z, g, w) if kind == "coherent" else noncoherent_loss(o.z, g, w)
    return total


def batch_gradient(
    observations: list[Observation],
    model: PointScatteringModel,
    wf: WaveformKernel,
    w: WeightMatrix,
    kind: str = "coherent",
) -> np.ndarray:
    """Gradient of batch_loss in the packed model parameters."""
    _check_batch(observations, w)
    if kind not in ("coherent", "noncoherent"):
        raise ValueError(f"unknown loss kind {kind!r}")
    stacked = _stacked(observations)
    if stacked is None:
        out = np.zeros(model.n_params)
        clamp = noncoherent_clamp(wf)
        for o in observations:
            g = synthesize_profiles(model, wf, o.grid, o.line)[0]
            jac = profile_jacobians(model, wf, o.grid, o.line)[0]
            if kind == "coherent":
                out += coherent_loss_gradient(o.z, g, jac, w)
            else:
                out += noncoherent_loss_gradient(o.z, g, jac, w, clamp)
        return out
    zmat, lmat, grid = stacked
    gmat = synthesize_profiles(model, wf, grid, lmat)
    jmat = profile_jacobians(model, wf, grid, lmat)
    if kind == "coherent":
        res = w.apply(gmat - zmat)
        return 2.0 * np.einsum("kmp,km->p", np.conj(jmat), res).real
    ur, ui = _modulus_direction(gmat, noncoherent_clamp(wf))
    slope = ur[:, :, None] * jmat.real + ui[:, :, None] * jmat.imag
    d = w.apply(np.abs(gmat) - np.abs(zmat))
    return 2.0 * np.einsum("kmp,km->p", slope, d)
