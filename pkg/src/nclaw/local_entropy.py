"""Godunov solver for the local conservation law u_t + (u b(u))_x = 0,
plus the closed-form entropy solutions used as oracles.

For the identity law the flux is u^2 (convex, sonic point at u = 0) and the
Godunov flux is the exact Riemann flux; for general laws a Rusanov (local
Lax-Friedrichs) flux is used instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grids import Field, Grid1D
from .records import DiagnosticSeries, RunResult, field_diagnostics
from .velocity import VelocityLaw, flux, flux_speed_bound

__all__ = [
    "CFLError",
    "godunov_step",
    "run_local",
    "ExactSolution",
    "exact_eval",
    "sample_exact",
    "baricenter_lower_bound",
]


class CFLError(RuntimeError):
    """Raised when a requested time step exceeds the CFL-admissible one."""

    def __init__(self, dt: float, dt_admissible: float):
        super().__init__(
            f"CFL violation: dt={dt:.3e} exceeds admissible dt={dt_admissible:.3e}"
        )
        self.dt_admissible = dt_admissible


def _burgers_godunov_flux(ul: np.ndarray, ur: np.ndarray) -> np.ndarray:
    # exact Riemann flux for f(u) = u^2: minimize over [ul, ur] when ul <= ur
    # (zero if the interval straddles the sonic point), maximize otherwise
    fl = ul * ul
    fr = ur * ur
    fmin = np.where((ul <= 0.0) & (ur >= 0.0), 0.0, np.minimum(fl, fr))
    return np.where(ul <= ur, fmin, np.maximum(fl, fr))


def _rusanov_flux(vl: VelocityLaw, ul: np.ndarray, ur: np.ndarray) -> np.ndarray:
    h = 1e-6 * (1.0 + np.maximum(np.abs(ul), np.abs(ur)))
    dl = (flux(vl, ul + h) - flux(vl, ul - h)) / (2.0 * h)
    dr = (flux(vl, ur + h) - flux(vl, ur - h)) / (2.0 * h)
    a = np.maximum(np.abs(dl), np.abs(dr))
    return 0.5 * (flux(vl, ul) + flux(vl, ur)) - 0.5 * a * (ur - ul)


def godunov_step(f: Field, vl: VelocityLaw, dt: float, cfl: float = 1.0) -> Field:
    """One conservative step of the local solver.

    Uses the exact Godunov flux for the identity law and Rusanov otherwise.
    Raises CFLError when dt * max|f'(u)| / dx > cfl.
    """
    u = f.values
    dx = f.grid.dx
    speed = flux_speed_bound(vl, float(u.min()), float(u.max()))
    if speed > 0.0 and dt > cfl * dx / speed:
        raise CFLError(dt, cfl * dx / speed)
    ul = np.concatenate([[0.0], u])   # zero states outside the domain
    ur = np.concatenate([u, [0.0]])
    if vl.variant == "identity":
        F = _burgers_godunov_flux(ul, ur)
    else:
        F = _rusanov_flux(vl, ul, ur)
    out = u - (dt / dx) * (F[1:] - F[:-1])
    return Field(f.grid, out, f.time_stamp + dt)


def run_local(
    initial: Field,
    vl: VelocityLaw,
    t_end: float,
    cfl: float = 0.9,
    windows=(),
    n_outputs: int = 50,
) -> RunResult:
    """March the Godunov solver to t_end, recording diagnostics.

    The step is fixed from the initial CFL bound with a small safety margin
    (the sup norm cannot grow, so it stays admissible).
    """
    if t_end <= 0.0:
        raise ValueError("t_end must be positive")
    u = initial.copy()
    speed = flux_speed_bound(vl, float(u.values.min()), float(u.values.max()))
    dt = cfl * u.grid.dx / max(speed, 1e-12)
    n_steps = max(1, int(math.ceil(t_end / dt)))
    dt = t_end / n_steps
    out_every = max(1, n_steps // max(n_outputs, 1))

    diags = DiagnosticSeries()
    states = []

    def record(fld):
        diags.append(fld.time_stamp, field_diagnostics(fld, windows))
        states.append(fld.copy())

    record(u)
    for k in range(n_steps):
        u = godunov_step(u, vl, dt, cfl=min(1.0, cfl * 1.05))
        if (k + 1) % out_every == 0 or k + 1 == n_steps:
            record(u)
    return RunResult(
        states,
        diags,
        info={"scheme": "godunov", "dt": dt, "n_steps": n_steps, "cfl": cfl},
    )


# ---------------------------------------------------------------------------
# closed-form entropy solutions


@dataclass(frozen=True)
class ExactSolution:
    """Entropy solution formulas for the two catalogued initial data.

    variant "step": indicator of (-1,0); a rarefaction fan from x=-1 and a
    plateau running into x=t, valid for t in [0,1].
    variant "odd": +1 on (-1,0), -1 on (0,1) (zero completion outside); two
    fans, a standing shock at 0, valid for t in [0, 1/4] only - evaluation
    outside validity raises, never extrapolates.
    """

    variant: str

    def __post_init__(self):
        if self.variant not in ("step", "odd"):
            raise ValueError(f"unknown exact solution variant {self.variant!r}")

    @property
    def validity(self) -> tuple[float, float]:
        return (0.0, 1.0) if self.variant == "step" else (0.0, 0.25)


def exact_eval(sol: ExactSolution, t: float, x):
    """Evaluate the exact entropy solution at time t and position(s) x."""
    lo, hi = sol.validity
    if not (lo <= t <= hi):
        raise ValueError(
            f"t={t} outside validity [{lo}, {hi}] of variant {sol.variant!r}"
        )
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if t == 0.0:
        if sol.variant == "step":
            out = np.where((xa > -1.0) & (xa < 0.0), 1.0, 0.0)
        else:
            out = np.where(
                (xa > -1.0) & (xa < 0.0),
                1.0,
                np.where((xa > 0.0) & (xa < 1.0), -1.0, 0.0),
            )
    elif sol.variant == "step":
        ramp = (xa + 1.0) / (2.0 * t)
        out = np.where(
            (xa <= -1.0) | (xa >= t),
            0.0,
            np.where(xa <= 2.0 * t - 1.0, ramp, 1.0),
        )
    else:
        ramp_l = (xa + 1.0) / (2.0 * t)
        ramp_r = (xa - 1.0) / (2.0 * t)
        out = np.zeros_like(xa)
        out = np.where((xa > -1.0) & (xa < -1.0 + 2.0 * t), ramp_l, out)
        out = np.where((xa >= -1.0 + 2.0 * t) & (xa < 0.0), 1.0, out)
        out = np.where((xa > 0.0) & (xa <= 1.0 - 2.0 * t), -1.0, out)
        out = np.where((xa > 1.0 - 2.0 * t) & (xa < 1.0), ramp_r, out)
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(out[0])
    return out


def sample_exact(sol: ExactSolution, t: float, grid: Grid1D) -> Field:
    """Midpoint-sampled exact solution as a Field (second-order accurate)."""
    return Field(grid, np.asarray(exact_eval(sol, t, grid.centers), dtype=float), t)


def baricenter_lower_bound(
    mass: float, initial_moment: float, t: float, a: float, b: float
) -> dict:
    """Lower bounds a confined nonnegative solution's first moment must obey.

    Two forms are reported: "plain" = mass^2 * t + initial_moment, and
    "jensen" = mass^2 * t / (b - a) + initial_moment, the form the Jensen
    inequality in the derivation actually produces. Callers flag which one
    each check uses.
    """
    return {
        "plain": mass * mass * t + initial_moment,
        "jensen": mass * mass * t / (b - a) + initial_moment,
    }
