"""Sight lines, target-frame positions, and range projection.

A sight line is the unit vector pointing from the radar toward the target
frame origin, expressed in target-frame coordinates.  A scatterer at
position p appears in a range profile at the projected range r = -p.l,
so scatterers displaced toward the radar show up at positive range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DegenerateGeometryError(ValueError):
    """Raised when a direction is too short to normalize or a view is singular."""


_MIN_NORM = 1e-9


@dataclass(frozen=True)
class SightLine:
    """Unit vector from radar to target-frame origin (target coordinates)."""

    vec: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vec, dtype=float)
        if v.shape != (3,):
            raise ValueError(f"sight line needs 3 components, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("sight line components must be finite")
        n = float(np.linalg.norm(v))
        if n < _MIN_NORM:
            raise DegenerateGeometryError(f"cannot normalize direction with norm {n:.3e}")
        v = v / n
        v.setflags(write=False)
        object.__setattr__(self, "vec", v)

    @property
    def x(self) -> float:
        return float(self.vec[0])

    @property
    def y(self) -> float:
        return float(self.vec[1])

    @property
    def z(self) -> float:
        return float(self.vec[2])


@dataclass(frozen=True)
class Position3:
    """A point in the target frame [m]."""

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != (3,):
            raise ValueError(f"position needs 3 components, got shape {p.shape}")
        if not np.all(np.isfinite(p)):
            raise ValueError("position components must be finite")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)


def sightline_from_points(radar: np.ndarray, target: np.ndarray) -> SightLine:
    """Unit direction from a radar location to a target location."""
    d = np.asarray(target, dtype=float) - np.asarray(radar, dtype=float)
    if float(np.linalg.norm(d)) < _MIN_NORM:
        raise DegenerateGeometryError("radar and target locations coincide")
    return SightLine(d)


def sightline_from_angles(azimuth: float, elevation: float) -> SightLine:
    """Sight line from azimuth (about +z, from +x) and elevation (toward +z), radians."""
    ce = math.cos(elevation)
    return SightLine(np.array([ce * math.cos(azimuth), ce * math.sin(azimuth), math.sin(elevation)]))


def projected_range(position: Position3 | np.ndarray, line: SightLine) -> float:
    """Range offset of a scatterer along the sight line: -p.l [m]."""
    p = position.p if isinstance(position, Position3) else np.asarray(position, dtype=float)
    return float(-(p @ line.vec))


def cylindrical_to_cartesian(r_s: float, phi_s: float, z_s: float) -> Position3:
    """(radius, azimuth, height) -> (x, y, z).  Radius must be nonnegative."""
    if r_s < 0.0:
        raise ValueError(f"cylindrical radius must be >= 0, got {r_s}")
    return Position3(np.array([r_s * math.cos(phi_s), r_s * math.sin(phi_s), z_s]))


def cartesian_to_cylindrical(pos: Position3 | np.ndarray) -> tuple[float, float, float]:
    """(x, y, z) -> (radius, azimuth in (-pi, pi], height)."""
    p = pos.p if isinstance(pos, Position3) else np.asarray(pos, dtype=float)
    return float(math.hypot(p[0], p[1])), float(math.atan2(p[1], p[0])), float(p[2])
