"""Command-line front end: config-driven synthesis, loss sweeps, fitting, CRLB.

One JSON config fully determines a run. Angles are radians, lengths meters,
frequencies hertz; no unit suffixes are parsed. Every command writes
resolved_config.json with all defaults materialized, so a run can be
reproduced bit for bit from its own output directory.

Exit codes: 0 success (a stalled fit is still a result), 2 config error,
3 evaluation error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from .constants import C_LIGHT
from .estimate import (
    CrlbResult,
    DescentConfig,
    FitReport,
    LineSearchConfig,
    crlb,
    gradient_descent,
    sequential_fit,
)
from .geometry import DegenerateGeometryError, SightLine
from .loss import (
    WeightMatrix,
    coherent_loss,
    coherent_loss_gradient,
    noncoherent_clamp,
    noncoherent_loss,
    noncoherent_loss_gradient,
)
from .model import PointScatteringModel, RangeGrid, profile_jacobians, synthesize_profiles
from .scatterer import (
    FixedAmplitude,
    FixedCylindrical,
    Scatterer,
    SlippingRing,
    Spherical,
)
from .sim import NoiseSpec, StaticPattern, synthesize_pattern, sweep_sightlines
from .waveform import LfmWaveform, lfm_from_band


class ConfigError(Exception):
    """Invalid config content; the message starts with the offending field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


# ---------------------------------------------------------------- schema ---

def _require_map(node, path):
    if not isinstance(node, dict):
        raise ConfigError(path, f"expected an object, got {type(node).__name__}")
    return node


def _check_keys(node, path, allowed):
    for key in node:
        if key not in allowed:
            raise ConfigError(path, f"unknown key '{key}' (allowed: {', '.join(sorted(allowed))})")


def _pop(node, key, path, required=False, default=None):
    if key in node:
        return node[key]
    if required:
        raise ConfigError(path, f"missing required field '{key}'")
    return default


def _as_float(value, path, minimum=None, exclusive=False, allow_none=False):
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    x = float(value)
    if not math.isfinite(x):
        raise ConfigError(path, f"must be finite, got {value!r}")
    if minimum is not None:
        if exclusive and x <= minimum:
            raise ConfigError(path, f"must be > {minimum}, got {value!r}")
        if not exclusive and x < minimum:
            raise ConfigError(path, f"must be >= {minimum}, got {value!r}")
    return x


def _as_int(value, path, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(path, f"must be >= {minimum}, got {value}")
    return value


def _as_str(value, path, choices=None):
    if not isinstance(value, str):
        raise ConfigError(path, f"expected a string, got {value!r}")
    if choices is not None and value not in choices:
        raise ConfigError(path, f"expected one of {sorted(choices)}, got {value!r}")
    return value


_POSITION_FIELDS = {
    "fixed_cylindrical": ("r_s", "phi_s", "z_s"),
    "slipping": ("r_s", "z_s"),
    "spherical": ("rho_s",),
}


def _resolve_scatterer(node, path):
    node = _require_map(node, path)
    _check_keys(node, path, {"description", "amplitude", "position"})
    amp = _require_map(_pop(node, "amplitude", path, required=True), f"{path}.amplitude")
    _check_keys(amp, f"{path}.amplitude", {"type", "s_re", "s_im"})
    _as_str(_pop(amp, "type", f"{path}.amplitude", required=True), f"{path}.amplitude.type", {"fixed"})
    s_re = _as_float(_pop(amp, "s_re", f"{path}.amplitude", required=True), f"{path}.amplitude.s_re")
    s_im = _as_float(_pop(amp, "s_im", f"{path}.amplitude", required=True), f"{path}.amplitude.s_im")

    pos = _require_map(_pop(node, "position", path, required=True), f"{path}.position")
    kind = _as_str(
        _pop(pos, "type", f"{path}.position", required=True),
        f"{path}.position.type",
        set(_POSITION_FIELDS),
    )
    fields = _POSITION_FIELDS[kind]
    _check_keys(pos, f"{path}.position", {"type", *fields})
    values = {f: _as_float(_pop(pos, f, f"{path}.position", required=True), f"{path}.position.{f}") for f in fields}

    resolved = {
        "amplitude": {"type": "fixed", "s_re": s_re, "s_im": s_im},
        "position": {"type": kind, **values},
    }
    if "description" in node:
        resolved["description"] = _as_str(node["description"], f"{path}.description")
    return resolved


def _build_scatterer(resolved, path):
    pos = resolved["position"]
    amp = FixedAmplitude(resolved["amplitude"]["s_re"], resolved["amplitude"]["s_im"])
    try:
        if pos["type"] == "fixed_cylindrical":
            s = Scatterer(amp, FixedCylindrical(pos["r_s"], pos["phi_s"], pos["z_s"]))
        elif pos["type"] == "slipping":
            s = Scatterer(amp, SlippingRing(pos["r_s"], pos["z_s"]))
        else:
            s = Scatterer(amp, Spherical(pos["rho_s"]))
        s.validate()
    except ValueError as exc:
        raise ConfigError(f"{path}.position", str(exc)) from exc
    return s


def _resolve_model(node, path):
    if not isinstance(node, list) or not node:
        raise ConfigError(path, "expected a non-empty list of scatterers")
    resolved = [_resolve_scatterer(item, f"{path}[{i}]") for i, item in enumerate(node)]
    model = PointScatteringModel(tuple(_build_scatterer(r, f"{path}[{i}]") for i, r in enumerate(resolved)))
    return resolved, model


def resolve_config(raw: dict, need_fit: bool = False, seed_override: int | None = None) -> dict:
    """Validate a parsed config and materialize every default.

    Returns a plain dict (the resolved config); build_* helpers below turn
    its blocks into domain objects. Raises ConfigError on any violation.
    """
    raw = _require_map(raw, "")
    _check_keys(raw, "", {"description", "waveform", "grid", "scatterers", "geometry", "noise", "fit"})
    out = {}
    if "description" in raw:
        out["description"] = _as_str(raw["description"], "description")

    wf = _require_map(_pop(raw, "waveform", "", required=True), "waveform")
    _check_keys(wf, "waveform", {"bandwidth_hz", "duration_s", "center_frequency_hz", "amplitude"})
    bandwidth = _as_float(_pop(wf, "bandwidth_hz", "waveform", required=True), "waveform.bandwidth_hz", 0.0, exclusive=True)
    out["waveform"] = {
        "bandwidth_hz": bandwidth,
        "duration_s": _as_float(_pop(wf, "duration_s", "waveform", default=1e-6), "waveform.duration_s", 0.0, exclusive=True),
        "center_frequency_hz": _as_float(
            _pop(wf, "center_frequency_hz", "waveform", required=True), "waveform.center_frequency_hz", 0.0, exclusive=True
        ),
        "amplitude": _as_float(_pop(wf, "amplitude", "waveform", default=1.0), "waveform.amplitude", 0.0, exclusive=True),
    }

    grid = _require_map(_pop(raw, "grid", "", default={}), "grid")
    _check_keys(grid, "grid", {"b0_m", "delta_m", "m_samples"})
    out["grid"] = {
        "b0_m": _as_float(_pop(grid, "b0_m", "grid", default=-5.0), "grid.b0_m"),
        "delta_m": _as_float(
            _pop(grid, "delta_m", "grid", default=C_LIGHT / (4.0 * bandwidth)), "grid.delta_m", 0.0, exclusive=True
        ),
        "m_samples": _as_int(_pop(grid, "m_samples", "grid", default=67), "grid.m_samples", 1),
    }

    out["scatterers"], _ = _resolve_model(_pop(raw, "scatterers", "", required=True), "scatterers")

    geom = _require_map(_pop(raw, "geometry", "", required=True), "geometry")
    _check_keys(geom, "geometry", {"description", "sightlines", "sweep"})
    has_lines = "sightlines" in geom
    has_sweep = "sweep" in geom
    if has_lines == has_sweep:
        raise ConfigError("geometry", "give exactly one of 'sightlines' or 'sweep'")
    out["geometry"] = {}
    if "description" in geom:
        out["geometry"]["description"] = _as_str(geom["description"], "geometry.description")
    if has_lines:
        lines = geom["sightlines"]
        if not isinstance(lines, list) or not lines:
            raise ConfigError("geometry.sightlines", "expected a non-empty list of [x, y, z] vectors")
        resolved_lines = []
        for i, vec in enumerate(lines):
            p = f"geometry.sightlines[{i}]"
            if not isinstance(vec, list) or len(vec) != 3:
                raise ConfigError(p, "expected a 3-component vector")
            resolved_lines.append([_as_float(c, f"{p}[{k}]") for k, c in enumerate(vec)])
            try:
                SightLine(resolved_lines[-1])
            except (ValueError, DegenerateGeometryError) as exc:
                raise ConfigError(p, str(exc)) from exc
        out["geometry"]["sightlines"] = resolved_lines
    else:
        sweep = _require_map(geom["sweep"], "geometry.sweep")
        _check_keys(sweep, "geometry.sweep", {"azimuth_start", "azimuth_stop", "count", "elevation"})
        out["geometry"]["sweep"] = {
            "azimuth_start": _as_float(_pop(sweep, "azimuth_start", "geometry.sweep", default=0.0), "geometry.sweep.azimuth_start"),
            "azimuth_stop": _as_float(
                _pop(sweep, "azimuth_stop", "geometry.sweep", default=2.0 * math.pi), "geometry.sweep.azimuth_stop"
            ),
            "count": _as_int(_pop(sweep, "count", "geometry.sweep", required=True), "geometry.sweep.count", 1),
            "elevation": _as_float(_pop(sweep, "elevation", "geometry.sweep", default=0.0), "geometry.sweep.elevation"),
        }

    noise = _require_map(_pop(raw, "noise", "", default={}), "noise")
    _check_keys(noise, "noise", {"sigma2", "seed"})
    out["noise"] = {
        "sigma2": _as_float(_pop(noise, "sigma2", "noise", default=0.0), "noise.sigma2", 0.0),
        "seed": _as_int(_pop(noise, "seed", "noise", default=0), "noise.seed", 0),
    }
    if seed_override is not None:
        out["noise"]["seed"] = seed_override

    fit = _pop(raw, "fit", "")
    if fit is None:
        if need_fit:
            raise ConfigError("", "missing required field 'fit'")
    else:
        fit = _require_map(fit, "fit")
        _check_keys(fit, "fit", {"strategy", "initial_model", "descent", "weight"})
        strategy = _as_str(
            _pop(fit, "strategy", "fit", required=True), "fit.strategy", {"coherent", "noncoherent", "sequential"}
        )
        initial, _ = _resolve_model(_pop(fit, "initial_model", "fit", required=True), "fit.initial_model")
        descent = _require_map(_pop(fit, "descent", "fit", default={}), "fit.descent")
        _check_keys(descent, "fit.descent", {"max_iters", "loss_rel_tol", "grad_norm_tol", "line_search"})
        ls = _require_map(_pop(descent, "line_search", "fit.descent", default={}), "fit.descent.line_search")
        _check_keys(ls, "fit.descent.line_search", {"bracket_growth", "max_bracket_steps", "section_tol"})
        default_weight = "inverse_noise" if out["noise"]["sigma2"] > 0.0 else "identity"
        weight = _as_str(
            _pop(fit, "weight", "fit", default=default_weight), "fit.weight", {"identity", "inverse_noise"}
        )
        if weight == "inverse_noise" and out["noise"]["sigma2"] <= 0.0:
            raise ConfigError("fit.weight", "'inverse_noise' needs noise.sigma2 > 0")
        out["fit"] = {
            "strategy": strategy,
            "weight": weight,
            "initial_model": initial,
            "descent": {
                "max_iters": _as_int(_pop(descent, "max_iters", "fit.descent", default=500), "fit.descent.max_iters", 1),
                "loss_rel_tol": _as_float(
                    _pop(descent, "loss_rel_tol", "fit.descent", default=1e-8), "fit.descent.loss_rel_tol", 0.0
                ),
                "grad_norm_tol": _as_float(
                    _pop(descent, "grad_norm_tol", "fit.descent", default=1e-9), "fit.descent.grad_norm_tol", 0.0
                ),
                "line_search": {
                    "bracket_growth": _as_float(
                        _pop(ls, "bracket_growth", "fit.descent.line_search", default=2.0),
                        "fit.descent.line_search.bracket_growth", 1.0, exclusive=True,
                    ),
                    "max_bracket_steps": _as_int(
                        _pop(ls, "max_bracket_steps", "fit.descent.line_search", default=40),
                        "fit.descent.line_search.max_bracket_steps", 1,
                    ),
                    "section_tol": _as_float(
                        _pop(ls, "section_tol", "fit.descent.line_search", default=1e-4),
                        "fit.descent.line_search.section_tol", 0.0, exclusive=True,
                    ),
                },
            },
        }
    return out


# ------------------------------------------------------- config -> domain ---

def build_waveform(cfg) -> LfmWaveform:
    w = cfg["waveform"]
    return lfm_from_band(w["bandwidth_hz"], w["center_frequency_hz"], w["duration_s"], w["amplitude"])


def build_grid(cfg) -> RangeGrid:
    g = cfg["grid"]
    return RangeGrid(g["b0_m"], g["delta_m"], g["m_samples"])


def build_model(block) -> PointScatteringModel:
    return PointScatteringModel(tuple(_build_scatterer(r, f"[{i}]") for i, r in enumerate(block)))


def build_sightlines(cfg) -> list[SightLine]:
    geom = cfg["geometry"]
    if "sightlines" in geom:
        return [SightLine(v) for v in geom["sightlines"]]
    s = geom["sweep"]
    return sweep_sightlines(s["count"], s["elevation"], s["azimuth_start"], s["azimuth_stop"])


def build_descent(block) -> DescentConfig:
    ls = block["line_search"]
    return DescentConfig(
        max_iters=block["max_iters"],
        loss_rel_tol=block["loss_rel_tol"],
        grad_norm_tol=block["grad_norm_tol"],
        line_search=LineSearchConfig(
            bracket_growth=ls["bracket_growth"],
            max_bracket_steps=ls["max_bracket_steps"],
            section_tol=ls["section_tol"],
        ),
    )


def build_weight(cfg) -> WeightMatrix:
    if cfg["fit"]["weight"] == "inverse_noise":
        return WeightMatrix.from_sigma2(cfg["noise"]["sigma2"])
    return WeightMatrix.identity()


# ---------------------------------------------------------------- output ---

def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(x: float) -> str:
    return repr(float(x))


def _power_dbw(re: float, im: float) -> float:
    p = re * re + im * im
    if p <= 1e-30:
        return -300.0
    return max(10.0 * math.log10(p), -300.0)


def profile_csv(samples: np.ndarray, grid: RangeGrid, multi_aspect: bool) -> str:
    """ProfileCsv text for a (m,) profile or a (k, m) pattern."""
    rows = np.atleast_2d(samples)
    bins = grid.bins
    lines = []
    header = "r_m,re,im,abs,power_dbw"
    if multi_aspect:
        header = "aspect_index," + header
    lines.append(header)
    for k in range(rows.shape[0]):
        for b, v in zip(bins, rows[k]):
            cells = [_fmt(b), _fmt(v.real), _fmt(v.imag), _fmt(abs(v)), _fmt(_power_dbw(v.real, v.imag))]
            if multi_aspect:
                cells.insert(0, str(k))
            lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _write(out_dir: str, name: str, text: str, quiet: bool) -> str:
    path = os.path.join(out_dir, name)
    _atomic_write(path, text)
    if not quiet:
        print(f"wrote {path}")
    return path


def _write_echo(out_dir: str, cfg: dict, quiet: bool) -> None:
    _write(out_dir, "resolved_config.json", json.dumps(cfg, indent=2) + "\n", quiet)


# -------------------------------------------------------------- commands ---

def _load_config(path: str, need_fit: bool, seed_override: int | None) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError("", f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return resolve_config(raw, need_fit=need_fit, seed_override=seed_override)


def _synthesize(cfg) -> tuple[StaticPattern, np.ndarray, RangeGrid, list[SightLine], LfmWaveform]:
    wf = build_waveform(cfg)
    grid = build_grid(cfg)
    model = build_model(cfg["scatterers"])
    lines = build_sightlines(cfg)
    spec = NoiseSpec(cfg["noise"]["sigma2"], cfg["noise"]["seed"])
    pattern = synthesize_pattern(model, wf, grid, lines, spec)
    clean = synthesize_profiles(model, wf, grid, np.stack([l.vec for l in lines]))
    return pattern, clean, grid, lines, wf


def cmd_synth(cfg, out_dir: str, quiet: bool) -> int:
    pattern, clean, grid, lines, _ = _synthesize(cfg)
    noisy = np.stack([o.z for o in pattern.observations])
    multi = len(lines) > 1
    _write(out_dir, "profile_noisy.csv", profile_csv(noisy if multi else noisy[0], grid, multi), quiet)
    _write(out_dir, "profile_clean.csv", profile_csv(clean if multi else clean[0], grid, multi), quiet)
    _write_echo(out_dir, cfg, quiet)
    return 0


def parse_sweep_range(spec: str) -> np.ndarray:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError("--range", f"expected lo:hi:steps, got {spec!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        steps = int(parts[2])
    except ValueError as exc:
        raise ConfigError("--range", f"expected lo:hi:steps with numeric parts, got {spec!r}") from exc
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ConfigError("--range", "lo and hi must be finite")
    if hi < lo:
        raise ConfigError("--range", f"hi must be >= lo, got {spec!r}")
    if lo == hi:
        return np.array([lo])
    if steps < 2:
        raise ConfigError("--range", "need at least 2 steps when lo < hi")
    return np.linspace(lo, hi, steps)


def cmd_sweep_loss(cfg, out_dir: str, quiet: bool, scatterer: int, slot: str, range_spec: str) -> int:
    offsets = parse_sweep_range(range_spec)
    model = build_model(cfg["scatterers"])
    if not 0 <= scatterer < len(model.scatterers):
        raise ConfigError("--scatterer", f"index {scatterer} out of range for {len(model.scatterers)} scatterers")
    names = model.scatterers[scatterer].slot_names
    if slot not in names:
        raise ConfigError("--slot", f"scatterer {scatterer} has no slot {slot!r} (has: {', '.join(names)})")
    j = model.slot_labels().index(f"s{scatterer}.{slot}")

    pattern, _, grid, lines, wf = _synthesize(cfg)
    zs = np.stack([o.z for o in pattern.observations])
    lmat = np.stack([l.vec for l in lines])
    w = WeightMatrix.identity()
    clamp = noncoherent_clamp(wf)
    theta0 = model.pack()

    rows = ["offset,coherent_loss,noncoherent_loss,coherent_grad,noncoherent_grad"]
    for off in offsets:
        theta = theta0.copy()
        theta[j] += off
        m = model.unpack(theta)
        g = synthesize_profiles(m, wf, grid, lmat)
        jac = profile_jacobians(m, wf, grid, lmat)
        cl = ncl = 0.0
        cg = ncg = 0.0
        for k in range(len(lines)):
            cl += coherent_loss(zs[k], g[k], w)
            ncl += noncoherent_loss(zs[k], g[k], w)
            cg += coherent_loss_gradient(zs[k], g[k], jac[k], w)[j]
            ncg += noncoherent_loss_gradient(zs[k], g[k], jac[k], w, clamp)[j]
        rows.append(",".join(_fmt(v) for v in (off, cl, ncl, cg, ncg)))
    _write(out_dir, "sweep.csv", "\n".join(rows) + "\n", quiet)
    _write_echo(out_dir, cfg, quiet)
    return 0


def _fit_report_json(report: FitReport, model: PointScatteringModel, strategy: str) -> str:
    labels = model.slot_labels()
    doc = {
        "strategy": strategy,
        "status": report.status,
        "iterations": report.iterations,
        "phase_boundary": report.phase_boundary,
        "final_loss": report.final_loss,
        "theta": [float(v) for v in report.theta],
        "slots": {lab: float(v) for lab, v in zip(labels, report.theta)},
        "mean_residual_power_dbw": float(
            10.0 * math.log10(max(float(report.residual_power.mean()), 1e-30))
        ),
    }
    return json.dumps(doc, indent=2) + "\n"


def cmd_fit(cfg, out_dir: str, quiet: bool) -> int:
    pattern, _, grid, lines, wf = _synthesize(cfg)
    fit_cfg = cfg["fit"]
    model0 = build_model(fit_cfg["initial_model"])
    descent = build_descent(fit_cfg["descent"])
    w = build_weight(cfg)
    strategy = fit_cfg["strategy"]
    if strategy == "sequential":
        report = sequential_fit(pattern, model0, wf, w, descent)
    else:
        report = gradient_descent(pattern, model0, wf, strategy, w, descent)

    _write(out_dir, "fit_report.json", _fit_report_json(report, report.model, strategy), quiet)

    rows = ["iteration,loss,phase"]
    boundary = report.phase_boundary
    for i, value in report.loss_trace:
        if strategy != "sequential":
            phase = strategy
        else:
            phase = "noncoherent" if boundary is not None and i < boundary else "coherent"
        rows.append(f"{i},{_fmt(value)},{phase}")
    _write(out_dir, "loss_trace.csv", "\n".join(rows) + "\n", quiet)

    fitted = synthesize_profiles(report.model, wf, grid, np.stack([l.vec for l in lines]))
    residual = np.stack([o.z for o in pattern.observations]) - fitted
    multi = len(lines) > 1
    _write(out_dir, "residual.csv", profile_csv(residual if multi else residual[0], grid, multi), quiet)
    _write_echo(out_dir, cfg, quiet)
    if not quiet:
        print(f"fit status: {report.status} after {report.iterations} iterations")
    return 0


def _crlb_json(result: CrlbResult, labels) -> str:
    doc = {
        "status": "ok" if result.identifiable else "singular",
        "condition": None if math.isinf(result.condition) else result.condition,
        "slots": list(labels),
        "fisher": [[float(v) for v in row] for row in result.fisher],
    }
    if result.identifiable:
        doc["covariance"] = [[float(v) for v in row] for row in result.covariance]
    else:
        doc["null_space"] = [[float(v) for v in row] for row in result.null_space]
    return json.dumps(doc, indent=2) + "\n"


def cmd_crlb(cfg, out_dir: str, quiet: bool) -> int:
    if cfg["noise"]["sigma2"] <= 0.0:
        raise ConfigError("noise.sigma2", "crlb needs sigma2 > 0")
    wf = build_waveform(cfg)
    grid = build_grid(cfg)
    model = build_model(cfg["scatterers"])
    lines = build_sightlines(cfg)
    result = crlb(model, wf, grid, lines, cfg["noise"]["sigma2"])

    labels = model.slot_labels()
    rows = ["slot,std_lower_bound"]
    stds = result.std_bounds
    for i, lab in enumerate(labels):
        rows.append(f"{lab},{_fmt(stds[i]) if stds is not None else 'nan'}")
    _write(out_dir, "crlb.csv", "\n".join(rows) + "\n", quiet)
    _write(out_dir, "crlb_matrix.json", _crlb_json(result, labels), quiet)
    _write_echo(out_dir, cfg, quiet)
    if not result.identifiable:
        print(
            f"warning: Fisher information is singular; {result.null_space.shape[1]} "
            "unidentifiable direction(s) written to crlb_matrix.json",
            file=sys.stderr,
        )
    return 0


# ----------------------------------------------------------------- driver ---

def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scatterfit",
        description="Synthesize radar range profiles from point-scattering models, "
        "sweep loss landscapes, fit models by gradient descent, and evaluate CRLBs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="scenario config (JSON)")
        p.add_argument("--out", required=True, help="output directory (created if missing)")
        p.add_argument("--seed", type=int, default=None, help="override noise.seed")
        p.add_argument("--quiet", action="store_true", help="suppress progress output")

    common(sub.add_parser("synth", help="write noisy and noise-free profiles"))
    p = sub.add_parser("sweep-loss", help="sweep one slot, tabulating losses and gradients")
    common(p)
    p.add_argument("--scatterer", type=int, required=True, help="scatterer index (0-based)")
    p.add_argument("--slot", required=True, help="slot name on that scatterer, e.g. r_s")
    p.add_argument("--range", required=True, dest="range_spec", metavar="LO:HI:STEPS", help="offset sweep, e.g. -0.2:0.2:201")
    common(sub.add_parser("fit", help="fit the configured initial model to the synthesized data"))
    common(sub.add_parser("crlb", help="evaluate parameter standard-deviation lower bounds"))
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.seed is not None and args.seed < 0:
        print("config error: --seed: must be >= 0", file=sys.stderr)
        return 2
    try:
        cfg = _load_config(args.config, need_fit=args.command == "fit", seed_override=args.seed)
        os.makedirs(args.out, exist_ok=True)
        if args.command == "synth":
            return cmd_synth(cfg, args.out, args.quiet)
        if args.command == "sweep-loss":
            return cmd_sweep_loss(cfg, args.out, args.quiet, args.scatterer, args.slot, args.range_spec)
        if args.command == "fit":
            return cmd_fit(cfg, args.out, args.quiet)
        return cmd_crlb(cfg, args.out, args.quiet)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DegenerateGeometryError as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, FloatingPointError) as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
