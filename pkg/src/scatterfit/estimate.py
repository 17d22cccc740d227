"""Model fitting by gradient descent, and the matching estimation bounds.

The descent is deliberately plain: step along the negative gradient with an
exact line search (bracket, then golden section).  The workhorse strategy is
sequential: minimize the noncoherent loss first to land inside the coherent
capture zone, then refine on the coherent loss.

Fisher information for circular Gaussian noise is J = 2 Re{G^H R^-1 G}; the
parameter covariance of any unbiased estimator is bounded below by the
inverse of the aspect-summed J.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .loss import Observation, WeightMatrix, batch_gradient, batch_loss
from .model import PointScatteringModel, ProfileJacobian, RangeGrid, profile_jacobians, synthesize_profiles
from .waveform import WaveformKernel

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_COND_LIMIT = 1e12


@dataclass(frozen=True)
class LineSearchConfig:
    bracket_growth: float = 2.0
    max_bracket_steps: int = 40
    section_tol: float = 1e-4

    def __post_init__(self):
        if self.bracket_growth <= 1.0:
            raise ValueError("bracket growth must be > 1")
        if self.max_bracket_steps < 1:
            raise ValueError("need at least one bracket step")
        if self.section_tol <= 0.0:
            raise ValueError("section tolerance must be > 0")


@dataclass(frozen=True)
class DescentConfig:
    max_iters: int = 500
    loss_rel_tol: float = 1e-8
    grad_norm_tol: float = 1e-9
    line_search: LineSearchConfig = field(default_factory=LineSearchConfig)

    def __post_init__(self):
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")
        if self.loss_rel_tol < 0.0 or self.grad_norm_tol < 0.0:
            raise ValueError("tolerances must be >= 0")


@dataclass(frozen=True)
class FitReport:
    """Outcome of one descent run (or a sequential pair of runs)."""

    model: PointScatteringModel
    theta: np.ndarray
    status: str  # "converged" | "max_iters" | "stalled"
    loss_trace: tuple[tuple[int, float], ...]
    grad_norm_trace: tuple[float, ...]
    residual_power: np.ndarray  # (aspects, bins) |z - g|^2
    iterations: int
    phase_boundary: int | None = None  # trace index where the coherent phase starts

    @property
    def final_loss(self) -> float:
        return self.loss_trace[-1][1]

    @property
    def losses(self) -> np.ndarray:
        return np.array([v for _, v in self.loss_trace])

    @property
    def residual_power_per_bin(self) -> np.ndarray:
        """Per-bin residual power; aspect-averaged when fitted to a pattern."""
        return self.residual_power.mean(axis=0)


def _finite(v: float) -> float:
    return v if np.isfinite(v) else np.inf


def _golden_section(f, lo: float, hi: float, tol: float, best: tuple[float, float]) -> tuple[float, float]:
    """Minimize f on [lo, hi]; returns the best point ever evaluated."""
    best_x, best_f = best
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = _finite(f(c)), _finite(f(d))
    while hi - lo > tol * max(abs(hi), abs(lo)):
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = _finite(f(c))
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = _finite(f(d))
        for x, v in ((c, fc), (d, fd)):
            if v < best_f:
                best_x, best_f = x, v
    return best_x, best_f


def _line_search(f, initial_step: float, cfg: LineSearchConfig) -> tuple[float, float, bool]:
    """Returns (step, loss at step, stalled)."""
    f0 = _finite(f(0.0))
    step = initial_step if np.isfinite(initial_step) and initial_step > 0.0 else 1.0
    fs = _finite(f(step))
    shrinks = 0
    while fs >= f0:
        step /= cfg.bracket_growth
        shrinks += 1
        if shrinks > cfg.max_bracket_steps:
            return 0.0, f0, True
        fs = _finite(f(step))
    # grow until the loss turns back up (or the growth budget runs out)
    lo, mid, f_mid = 0.0, step, fs
    hi = mid * cfg.bracket_growth
    f_hi = _finite(f(hi))
    grows = 0
    while f_hi < f_mid and grows < cfg.max_bracket_steps:
        lo, mid, f_mid = mid, hi, f_hi
        hi *= cfg.bracket_growth
        f_hi = _finite(f(hi))
        grows += 1
    return _golden_section(f, lo, hi, cfg.section_tol, best=(mid, f_mid)) + (False,)


def line_search(f, initial_step: float = 1.0, cfg: LineSearchConfig = LineSearchConfig()) -> tuple[float, bool]:
    """Exact 1-D minimization of a loss along a ray.

    Brackets a minimum by geometric growth from the initial step, shrinking
    first if the initial step does not decrease f; then golden-sections the
    bracket.  Returns (step, stalled); stalled means no decrease was found
    and the step is 0.
    """
    eta, _, stalled = _line_search(f, initial_step, cfg)
    return eta, stalled


def _as_observations(data) -> list[Observation]:
    if isinstance(data, Observation):
        return [data]
    if hasattr(data, "observations"):
        return list(data.observations)
    return list(data)


def _residual_power(
    obs: list[Observation], model: PointScatteringModel, wf: WaveformKernel
) -> np.ndarray:
    rows = []
    for o in obs:
        g = synthesize_profiles(model, wf, o.grid, o.line)[0]
        rows.append(np.abs(o.z - g) ** 2)
    return np.stack(rows)


def gradient_descent(
    data,
    model0: PointScatteringModel,
    wf: WaveformKernel,
    kind: str = "coherent",
    w: WeightMatrix | None = None,
    cfg: DescentConfig = DescentConfig(),
) -> FitReport:
    """Minimize one loss by steepest descent with exact line search.

    Each iteration steps theta -> theta - eta * grad, with eta chosen by
    line_search seeded at 0.1 * loss / |grad|^2.  Stops on a relative
    gradient-norm drop, on a flat loss window, or at max_iters.
    """
    obs = _as_observations(data)
    w = w or WeightMatrix.identity()
    theta = model0.pack()

    def loss_at(th: np.ndarray) -> float:
        return batch_loss(obs, model0.unpack(th), wf, w, kind)

    def grad_at(th: np.ndarray) -> np.ndarray:
        return batch_gradient(obs, model0.unpack(th), wf, w, kind)

    current = loss_at(theta)
    grad = grad_at(theta)
    gnorm = float(np.linalg.norm(grad))
    gnorm0 = gnorm
    losses = [current]
    gnorms = [gnorm]
    status = "max_iters"
    iterations = 0
    for _ in range(cfg.max_iters):
        if gnorm <= cfg.grad_norm_tol * gnorm0:
            status = "converged"
            break
        eta, stepped_loss, stalled = _line_search(
            lambda s: loss_at(theta - s * grad),
            0.1 * current / gnorm**2,
            cfg.line_search,
        )
        if stalled:
            status = "stalled"
            break
        theta = theta - eta * grad
        current = stepped_loss
        grad = grad_at(theta)
        gnorm = float(np.linalg.norm(grad))
        losses.append(current)
        gnorms.append(gnorm)
        iterations += 1
        if len(losses) >= 4:
            anchor = losses[-4]
            if anchor - current <= cfg.loss_rel_tol * max(anchor, np.finfo(float).tiny):
                status = "converged"
                break
    fitted = model0.unpack(theta)
    return FitReport(
        model=fitted,
        theta=theta,
        status=status,
        loss_trace=tuple(enumerate(losses)),
        grad_norm_trace=tuple(gnorms),
        residual_power=_residual_power(obs, fitted, wf),
        iterations=iterations,
    )


def sequential_fit(
    data,
    model0: PointScatteringModel,
    wf: WaveformKernel,
    w: WeightMatrix | None = None,
    cfg: DescentConfig = DescentConfig(),
    *,
    rough_cfg: DescentConfig | None = None,
    fine_cfg: DescentConfig | None = None,
) -> FitReport:
    """Noncoherent descent to localize, then coherent descent to refine.

    The combined trace concatenates both phases; phase_boundary is the index
    of the first coherent entry (the two phases score different losses, so
    the trace is only monotone within a phase). rough_cfg and fine_cfg
    override cfg for their phase when the two need different budgets.
    """
    rough = gradient_descent(data, model0, wf, "noncoherent", w, rough_cfg or cfg)
    fine = gradient_descent(data, rough.model, wf, "coherent", w, fine_cfg or cfg)
    merged = [v for _, v in rough.loss_trace] + [v for _, v in fine.loss_trace]
    return FitReport(
        model=fine.model,
        theta=fine.theta,
        status=fine.status,
        loss_trace=tuple(enumerate(merged)),
        grad_norm_trace=rough.grad_norm_trace + fine.grad_norm_trace,
        residual_power=fine.residual_power,
        iterations=rough.iterations + fine.iterations,
        phase_boundary=len(rough.loss_trace),
    )


@dataclass(frozen=True)
class FisherInfo:
    """Fisher information of the profile parameters under circular Gaussian noise."""

    matrix: np.ndarray


def fisher_info(jac, sigma2: float | None = None, noise_cov: np.ndarray | None = None) -> FisherInfo:
    """J = 2 Re{G^H R^-1 G}; pass sigma2 for R = sigma2 * I, or a full R."""
    g = jac.matrix if isinstance(jac, ProfileJacobian) else np.asarray(jac)
    if (sigma2 is None) == (noise_cov is None):
        raise ValueError("pass exactly one of sigma2 or noise_cov")
    if sigma2 is not None:
        if sigma2 <= 0.0:
            raise ValueError(f"noise power must be > 0, got {sigma2}")
        j = (2.0 / sigma2) * (np.conj(g).T @ g).real
    else:
        r = np.asarray(noise_cov)
        if r.shape != (g.shape[0], g.shape[0]):
            raise ValueError(f"noise covariance shape {r.shape} does not match {g.shape[0]} bins")
        j = 2.0 * (np.conj(g).T @ np.linalg.solve(r, g)).real
    return FisherInfo((j + j.T) / 2.0)


@dataclass(frozen=True)
class CrlbResult:
    """Aspect-summed Fisher information and, when invertible, the bound."""

    fisher: np.ndarray
    covariance: np.ndarray | None
    null_space: np.ndarray | None
    condition: float

    @property
    def identifiable(self) -> bool:
        return self.covariance is not None

    @property
    def std_bounds(self) -> np.ndarray | None:
        """Per-slot standard-deviation lower bounds sqrt(diag)."""
        if self.covariance is None:
            return None
        return np.sqrt(np.clip(np.diag(self.covariance), 0.0, None))


def crlb_from_fisher(fishers) -> CrlbResult:
    """Invert a sum of Fisher matrices, or report the unidentifiable subspace."""
    if isinstance(fishers, (FisherInfo, np.ndarray)):
        fishers = [fishers]
    mats = [f.matrix if isinstance(f, FisherInfo) else np.asarray(f, dtype=float) for f in fishers]
    total = np.zeros_like(mats[0])
    for m in mats:
        if m.shape != total.shape:
            raise ValueError("Fisher matrices must share one shape")
        total = total + m
    vals, vecs = np.linalg.eigh(total)
    vmax = float(vals.max(initial=0.0))
    vmin = float(vals.min()) if vals.size else 0.0
    cond = np.inf if vmin <= 0.0 else vmax / vmin
    if vmax <= 0.0 or cond > _COND_LIMIT:
        weak = vals <= vmax / _COND_LIMIT
        return CrlbResult(total, None, vecs[:, weak], cond)
    cov = (vecs / vals) @ vecs.T
    return CrlbResult(total, (cov + cov.T) / 2.0, None, cond)


def crlb(
    model: PointScatteringModel,
    wf: WaveformKernel,
    grid: RangeGrid,
    lines,
    sigma2: float,
) -> CrlbResult:
    """Parameter bound for a model observed from a set of sight lines."""
    if sigma2 <= 0.0:
        raise ValueError(f"noise power must be > 0, got {sigma2}")
    lmat = np.stack([l.vec for l in lines]) if isinstance(lines, (list, tuple)) else np.asarray(lines)
    jmat = profile_jacobians(model, wf, grid, lmat)
    total = (2.0 / sigma2) * np.einsum("kmp,kmq->pq", np.conj(jmat), jmat).real
    return crlb_from_fisher(FisherInfo((total + total.T) / 2.0))
