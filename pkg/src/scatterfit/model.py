"""Range-profile synthesis for point-scattering models, with exact Jacobians.

The sampled profile for a sight line l is

    g(b_k) = sum_n gamma_n(l) * a_n * R(2*(b_k + p_n.l)/c)

where R is the pulse autocorrelation, a_n the complex amplitude, p_n the
scatterer position, and gamma_n = exp(j*4*pi*fc*(p_n.l)/c) the two-way
carrier phase.  Every factor is differentiable in the scatterer slots, so
the profile Jacobian is assembled per scatterer from

    d g / d theta_n = gamma*R * da/dtheta
                    + a*gamma * (j*4*pi*fc/c * R + 2/c * dR/dtau) * d(p.l)/dtheta

with d(p.l)/dtheta = P^T l from the position model Jacobian P.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import C_LIGHT
from .geometry import DegenerateGeometryError, Position3, SightLine
from .scatterer import Scatterer
from .waveform import WaveformKernel


@dataclass(frozen=True)
class RangeGrid:
    """Uniform range sampling: bin k is b0 + k*delta, k = 0..m-1."""

    b0: float
    delta: float
    m: int

    def __post_init__(self):
        if self.delta <= 0.0:
            raise ValueError(f"grid spacing must be > 0, got {self.delta}")
        if self.m < 1:
            raise ValueError(f"grid needs at least one bin, got {self.m}")

    @property
    def bins(self) -> np.ndarray:
        return self.b0 + self.delta * np.arange(self.m)


@dataclass(frozen=True)
class RangeProfile:
    """Complex matched-filter output sampled on a range grid."""

    grid: RangeGrid
    line: SightLine
    samples: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.samples, dtype=complex)
        if z.shape != (self.grid.m,):
            raise ValueError(f"expected {self.grid.m} samples, got shape {z.shape}")
        if not np.all(np.isfinite(z)):
            raise ValueError("profile samples must be finite")
        z.setflags(write=False)
        object.__setattr__(self, "samples", z)


@dataclass(frozen=True)
class ProfileJacobian:
    """d(profile)/d(slots): complex matrix, bins by slots."""

    matrix: np.ndarray

    @property
    def real(self) -> np.ndarray:
        return self.matrix.real

    @property
    def imag(self) -> np.ndarray:
        return self.matrix.imag


@dataclass(frozen=True)
class PointScatteringModel:
    """An ordered collection of scatterers with one flat parameter vector."""

    scatterers: tuple[Scatterer, ...]

    def __post_init__(self):
        object.__setattr__(self, "scatterers", tuple(self.scatterers))

    @property
    def n_params(self) -> int:
        return sum(s.n_slots for s in self.scatterers)

    def slot_slices(self) -> list[slice]:
        """Per-scatterer slices into the packed parameter vector."""
        out, start = [], 0
        for s in self.scatterers:
            out.append(slice(start, start + s.n_slots))
            start += s.n_slots
        return out

    def slot_labels(self) -> list[str]:
        return [f"s{i}.{name}" for i, s in enumerate(self.scatterers) for name in s.slot_names]

    def pack(self) -> np.ndarray:
        if not self.scatterers:
            return np.empty(0)
        return np.concatenate([s.params for s in self.scatterers])

    def unpack(self, theta) -> "PointScatteringModel":
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.n_params,):
            raise ValueError(f"expected {self.n_params} parameters, got shape {theta.shape}")
        return PointScatteringModel(
            tuple(s.with_params(theta[sl]) for s, sl in zip(self.scatterers, self.slot_slices()))
        )

    def validate(self) -> None:
        for s in self.scatterers:
            s.validate()


def phase_delay(position: Position3 | np.ndarray, line: SightLine, fc: float) -> complex:
    """Two-way carrier phase exp(j*4*pi*fc*(p.l)/c) for one scatterer."""
    p = position.p if isinstance(position, Position3) else np.asarray(position, dtype=float)
    return complex(np.exp(1j * 4.0 * np.pi * fc / C_LIGHT * float(p @ line.vec)))


def _as_line_stack(lines) -> np.ndarray:
    if isinstance(lines, SightLine):
        return lines.vec[None, :]
    arr = np.asarray(lines, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError(f"expected sight lines with shape (K, 3), got {arr.shape}")
    return arr


def _scatterer_geometry(scatterer: Scatterer, index: int, lines: np.ndarray):
    """Positions projected on the sight lines, with the scatterer named on error."""
    try:
        pos = scatterer.position_model.positions(lines)
    except DegenerateGeometryError as err:
        raise DegenerateGeometryError(f"scatterer {index}: {err}") from None
    return np.einsum("kj,kj->k", pos, lines)


def synthesize_profiles(
    model: PointScatteringModel, wf: WaveformKernel, grid: RangeGrid, lines
) -> np.ndarray:
    """Profiles for a stack of sight lines: complex (K, m) array."""
    lmat = _as_line_stack(lines)
    bins = grid.bins
    out = np.zeros((lmat.shape[0], grid.m), dtype=complex)
    k4 = 4.0 * np.pi * wf.fc / C_LIGHT
    for i, s in enumerate(model.scatterers):
        pl = _scatterer_geometry(s, i, lmat)
        a = s.amplitude_model.value(lmat)
        gamma = np.exp(1j * k4 * pl)
        tau = 2.0 * (bins[None, :] + pl[:, None]) / C_LIGHT
        out += (a * gamma)[:, None] * wf.autocorr(tau)
    return out


def synthesize_profile(
    model: PointScatteringModel, wf: WaveformKernel, grid: RangeGrid, line: SightLine
) -> RangeProfile:
    """Profile for a single sight line."""
    return RangeProfile(grid, line, synthesize_profiles(model, wf, grid, line)[0])


def profile_jacobians(
    model: PointScatteringModel, wf: WaveformKernel, grid: RangeGrid, lines
) -> np.ndarray:
    """d(profile)/d(slots) for a stack of sight lines: complex (K, m, P)."""
    lmat = _as_line_stack(lines)
    bins = grid.bins
    n_aspect = lmat.shape[0]
    out = np.zeros((n_aspect, grid.m, model.n_params), dtype=complex)
    k4 = 4.0 * np.pi * wf.fc / C_LIGHT
    for idx, (s, sl) in enumerate(zip(model.scatterers, model.slot_slices())):
        pl = _scatterer_geometry(s, idx, lmat)
        a = s.amplitude_model.value(lmat)
        gamma = np.exp(1j * k4 * pl)
        tau = 2.0 * (bins[None, :] + pl[:, None]) / C_LIGHT
        r = wf.autocorr(tau)
        na = s.amplitude_model.n_slots
        block = out[:, :, sl]
        if na:
            a_grad = s.amplitude_model.gradient(lmat)
            block[:, :, :na] = gamma[:, None, None] * r[:, :, None] * a_grad[None, None, :]
        npos = s.position_model.n_slots
        if npos:
            u = np.einsum("kij,ki->kj", s.position_model.jacobians(lmat), lmat)
            radial = a * gamma[:, None] * (1j * k4 * r + (2.0 / C_LIGHT) * wf.autocorr_deriv(tau))
            block[:, :, na:] = radial[:, :, None] * u[:, None, :]
    return out


def profile_jacobian(
    model: PointScatteringModel, wf: WaveformKernel, grid: RangeGrid, line: SightLine
) -> ProfileJacobian:
    """Jacobian for a single sight line, bins by slots."""
    return ProfileJacobian(profile_jacobians(model, wf, grid, line)[0])


def frequency_response(model: PointScatteringModel, freqs, line: SightLine) -> np.ndarray:
    """Idealized response sum_n a_n exp(j*4*pi*f*(p_n.l)/c) at the given frequencies."""
    f = np.atleast_1d(np.asarray(freqs, dtype=float))
    lmat = line.vec[None, :]
    out = np.zeros(f.shape, dtype=complex)
    for i, s in enumerate(model.scatterers):
        pl = _scatterer_geometry(s, i, lmat)[0]
        out += s.amplitude_model.value(lmat) * np.exp(1j * 4.0 * np.pi * f * pl / C_LIGHT)
    return out
