"""Time integration for the b-family equations in nonlocal transport form.

The evolved equation is

    u_t + u u_x = -dx (1 - dxx)^{-1} ( (b/2) u^2 + ((3-b)/2) u_x^2 )

with b = 2 the Camassa-Holm equation and b = 3 the Degasperis-Procesi
equation.  Quadratic products are dealiased by the two-thirds rule; time
stepping is explicit RK4 with a fixed step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .grid import Field, GridSpec, apply_pd, derivative

__all__ = [
    "ModelParams",
    "SolverConfig",
    "Trajectory",
    "default_dt",
    "rhs",
    "bilinear_B",
    "step",
    "evolve",
    "linear_transport_evolve",
    "conserved_quantities",
]


@dataclass(frozen=True)
class ModelParams:
    """The b-family parameter (b=2: Camassa-Holm, b=3: Degasperis-Procesi)."""

    b: float = 2.0

    def __post_init__(self):
        if not np.isfinite(self.b):
            raise ValueError("b must be finite")


@dataclass(frozen=True)
class SolverConfig:
    dt: Optional[float] = None
    t_end: float = 0.25
    sample_every: int = 10
    dealias: bool = True
    blowup_slope_threshold: float = 1e3
    blowup_norm_threshold: float = 1e6

    def __post_init__(self):
        if self.t_end <= 0:
            raise ValueError("t_end must be positive")
        if self.dt is not None and not (0 < self.dt <= self.t_end):
            raise ValueError("need 0 < dt <= t_end")
        if self.sample_every < 1:
            raise ValueError("sample_every must be a positive integer")
        if self.blowup_slope_threshold <= 0 or self.blowup_norm_threshold <= 0:
            raise ValueError("blow-up thresholds must be positive")


@dataclass(frozen=True)
class Trajectory:
    """Time-sampled solution of one initial-value problem."""

    model: ModelParams
    times: np.ndarray
    states: tuple
    status: str = "completed"
    blowup_time: Optional[float] = None

    @property
    def grid(self) -> GridSpec:
        return self.states[0].grid

    def state_at(self, t: float) -> Field:
        """Linear interpolation between the two bracketing samples."""
        times = self.times
        if t < times[0] - 1e-12 or t > times[-1] + 1e-12:
            raise ValueError(f"time {t} outside sampled range [{times[0]}, {times[-1]}]")
        i = int(np.searchsorted(times, t))
        if i == 0:
            return self.states[0]
        if i >= len(times):
            return self.states[-1]
        t0, t1 = times[i - 1], times[i]
        w = (t - t0) / (t1 - t0)
        vals = (1.0 - w) * self.states[i - 1].values + w * self.states[i].values
        return Field(grid=self.grid, values=vals)


class _Workspace:
    """Per-run tabulated symbols; read-only after construction."""

    def __init__(self, grid: GridSpec, dealias: bool):
        N = grid.num_points
        xi = grid.mode_frequencies
        self.N = N
        deriv = 1j * xi
        deriv[N // 2] = 0.0
        self.deriv = deriv
        self.pd = -deriv / (1.0 + xi**2)
        k = np.fft.fftfreq(N, d=1.0 / N)
        self.mask = (np.abs(k) <= N // 3) if dealias else np.ones(N, dtype=bool)


def _rhs_arr(u: np.ndarray, b: float, ws: _Workspace) -> np.ndarray:
    uh = np.fft.fft(u)
    ux = np.fft.ifft(uh * ws.deriv).real
    adv = np.fft.ifft(np.where(ws.mask, np.fft.fft(u * ux), 0.0)).real
    q = 0.5 * b * u * u + 0.5 * (3.0 - b) * ux * ux
    nonlocal_term = np.fft.ifft(np.where(ws.mask, np.fft.fft(q), 0.0) * ws.pd).real
    return -adv + nonlocal_term


def default_dt(u0: Field) -> float:
    """Advective step 0.5 dx / max(1, ||u0||_inf); CFL number pi/2 at unit speed."""
    umax = float(np.max(np.abs(u0.values))) if u0.values.size else 0.0
    return 0.5 * u0.grid.dx / max(1.0, umax)


def rhs(u: Field, model: ModelParams, dealias: bool = True) -> Field:
    """Right-hand side -u u_x - dx(1-dxx)^{-1}((b/2)u^2 + ((3-b)/2)u_x^2)."""
    ws = _Workspace(u.grid, dealias)
    return Field(grid=u.grid, values=_rhs_arr(u.values, model.b, ws))


def bilinear_B(f: Field, g: Field) -> Field:
    """The symmetric bilinear form P(D)(fg + (1/2) f_x g_x).

    Coincides with the Camassa-Holm nonlocal term when f = g = u.
    """
    fx = derivative(f)
    gx = derivative(g)
    prod = Field(grid=f.grid, values=f.values * g.values + 0.5 * fx.values * gx.values)
    return apply_pd(prod)


def step(u: Field, dt: float, model: ModelParams, dealias: bool = True) -> Field:
    """One explicit RK4 step of du/dt = rhs(u)."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    ws = _Workspace(u.grid, dealias)
    return Field(grid=u.grid, values=_rk4(u.values, dt, lambda v: _rhs_arr(v, model.b, ws)))


def _rk4(u: np.ndarray, dt: float, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    k1 = f(u)
    k2 = f(u + 0.5 * dt * k1)
    k3 = f(u + 0.5 * dt * k2)
    k4 = f(u + dt * k3)
    return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _blown_up(u: np.ndarray, ws: _Workspace, cfg: SolverConfig) -> bool:
    if not np.all(np.isfinite(u)):
        return True
    if np.max(np.abs(u)) > cfg.blowup_norm_threshold:
        return True
    ux = np.fft.ifft(np.fft.fft(u) * ws.deriv).real
    return bool(np.max(np.abs(ux)) > cfg.blowup_slope_threshold)


def evolve(u0: Field, model: ModelParams, cfg: SolverConfig) -> Trajectory:
    """Fixed-step RK4 march to t_end, sampling every `sample_every` steps.

    Terminates early with status 'blowup_detected' when the slope or norm
    threshold is exceeded or a non-finite value appears; the offending state
    is not recorded.
    """
    dt = cfg.dt if cfg.dt is not None else default_dt(u0)
    n_steps = max(1, int(round(cfg.t_end / dt)))
    ws = _Workspace(u0.grid, cfg.dealias)
    b = model.b

    u = u0.values.copy()
    times = [0.0]
    states = [u0]
    for i in range(1, n_steps + 1):
        u = _rk4(u, dt, lambda v: _rhs_arr(v, b, ws))
        if _blown_up(u, ws, cfg):
            return Trajectory(
                model=model,
                times=np.array(times),
                states=tuple(states),
                status="blowup_detected",
                blowup_time=i * dt,
            )
        if i % cfg.sample_every == 0 or i == n_steps:
            times.append(i * dt)
            states.append(Field(grid=u0.grid, values=u))
    return Trajectory(model=model, times=np.array(times), states=tuple(states))


def linear_transport_evolve(
    f0: Field,
    velocity: Trajectory,
    source: Optional[Callable[[float], Field]],
    cfg: SolverConfig,
) -> Trajectory:
    """RK4 march of the linear transport problem f_t + u f_x = g.

    The velocity is interpolated linearly between the trajectory's samples;
    the requested horizon must be covered by them.
    """
    dt = cfg.dt if cfg.dt is not None else default_dt(f0)
    if cfg.t_end > velocity.times[-1] + 1e-12:
        raise ValueError(
            f"velocity trajectory ends at t={velocity.times[-1]}, before t_end={cfg.t_end}"
        )
    ws = _Workspace(f0.grid, cfg.dealias)
    n_steps = max(1, int(round(cfg.t_end / dt)))

    def rhs_at(t: float, f: np.ndarray) -> np.ndarray:
        u = velocity.state_at(t).values
        fx = np.fft.ifft(np.fft.fft(f) * ws.deriv).real
        out = -np.fft.ifft(np.where(ws.mask, np.fft.fft(u * fx), 0.0)).real
        if source is not None:
            out = out + source(t).values
        return out

    f = f0.values.copy()
    times = [0.0]
    states = [f0]
    for i in range(1, n_steps + 1):
        t = (i - 1) * dt
        k1 = rhs_at(t, f)
        k2 = rhs_at(t + 0.5 * dt, f + 0.5 * dt * k1)
        k3 = rhs_at(t + 0.5 * dt, f + 0.5 * dt * k2)
        k4 = rhs_at(t + dt, f + dt * k3)
        f = f + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(f)):
            return Trajectory(
                model=velocity.model,
                times=np.array(times),
                states=tuple(states),
                status="blowup_detected",
                blowup_time=i * dt,
            )
        if i % cfg.sample_every == 0 or i == n_steps:
            times.append(i * dt)
            states.append(Field(grid=f0.grid, values=f))
    return Trajectory(model=velocity.model, times=np.array(times), states=tuple(states))


def conserved_quantities(u: Field, model: ModelParams) -> dict:
    """Mass integral (conserved for every b) and H^1 energy (conserved for b=2)."""
    dx = u.grid.dx
    ux = derivative(u)
    return {
        "mass_m": float(dx * np.sum(u.values)),
        "h1_energy": float(dx * np.sum(u.values**2 + ux.values**2)),
    }
