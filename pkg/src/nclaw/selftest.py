"""Structural property battery: the invariants every solver must keep.

Each check is a plain function returning (passed, detail). The battery is
what ``lab selftest`` runs headlessly and what the acceptance test suite
asserts on; keeping it in one place means the CLI and pytest exercise the
same code.
"""

from __future__ import annotations

import math

import numpy as np

from .data import odd_datum, step_datum
from .grids import Field, Grid1D, entropy_functional, lp_norm, window_mass
from .kernels import EVEN_BUMP, ONE_SIDED_LEFT, Kernel, convolve
from .local_entropy import godunov_step, run_local
from .nonlocal_solvers import (
    NonlocalRunConfig,
    lf_step,
    run_nonlocal,
    sample_particles,
)
from .velocity import identity_law
from .viscous import diffusion_substep

__all__ = ["run_selftest", "CHECKS"]


def _random_field(rng, grid, scale=1.0):
    return Field(grid, scale * rng.normal(size=grid.n_cells))


def check_fv_mass_conservation(rng):
    """Lax-Friedrichs total mass drift over 1000 steps stays below 1e-12."""
    grid = Grid1D(-6.0, 4.0, 2000)
    k = Kernel(EVEN_BUMP, 0.1)
    law = identity_law()
    u = step_datum(grid)
    m0 = float(np.sum(u.values) * grid.dx)
    dt = 0.4 * grid.dx / 1.0
    for _ in range(1000):
        u = lf_step(u, k, law, dt, cfl=0.9)
    drift = abs(float(np.sum(u.values) * grid.dx) - m0)
    return drift <= 1e-12, f"drift={drift:.2e} over 1000 steps"


def check_godunov_mass_conservation(rng):
    """Godunov total mass drift over 1000 steps stays below 1e-12."""
    grid = Grid1D(-6.0, 4.0, 2000)
    law = identity_law()
    u = step_datum(grid)
    m0 = float(np.sum(u.values) * grid.dx)
    dt = 0.4 * grid.dx / 2.0
    for _ in range(1000):
        u = godunov_step(u, law, dt, cfl=0.9)
    drift = abs(float(np.sum(u.values) * grid.dx) - m0)
    return drift <= 1e-12, f"drift={drift:.2e} over 1000 steps"


def check_particle_mass_bitexact(rng):
    """Particle masses and their sum are bit-identical across a run."""
    grid = Grid1D(-1.5, 0.5, 800)
    k = Kernel(ONE_SIDED_LEFT, 0.05)
    e0 = sample_particles(step_datum(grid))
    cfg = NonlocalRunConfig(
        grid=grid, kernel=k, law=identity_law(), t_end=0.02,
        scheme="particles", n_outputs=4,
    )
    res = run_nonlocal(cfg, step_datum(grid))
    same = np.array_equal(res.final.masses, e0.masses) and res.final.masses.sum() == e0.masses.sum()
    return bool(same), f"sum={res.final.masses.sum()!r}"


def check_young_inequality(rng):
    """||f * eta||_p <= ||f||_p for 100 random fields, p in {1, 2, inf}."""
    grid = Grid1D(-2.0, 2.0, 700)
    k = Kernel(EVEN_BUMP, 0.08)
    worst = 0.0
    for _ in range(100):
        f = _random_field(rng, grid)
        g = convolve(f, k)
        for p in (1, 2, math.inf):
            lhs, rhs = lp_norm(g, p), lp_norm(f, p)
            worst = max(worst, lhs - rhs * (1 + 1e-13))
    return worst <= 1e-12, f"worst excess={worst:.2e}"


def check_jensen_convolution(rng):
    """||v - v*eta||_p <= eps ||v'||_p (1 + 5 dx/eps) on 100 mollified fields."""
    grid = Grid1D(-2.0, 2.0, 800)
    eps = 0.1
    k = Kernel(EVEN_BUMP, eps)
    worst = 0.0
    for _ in range(100):
        v = convolve(_random_field(rng, grid), k)
        dv = np.zeros(grid.n_cells)
        dv[1:-1] = (v.values[2:] - v.values[:-2]) / (2 * grid.dx)
        dv[0] = v.values[1] / (2 * grid.dx)
        dv[-1] = -v.values[-2] / (2 * grid.dx)
        for p in (2, 4):
            lhs = lp_norm(Field(grid, v.values - convolve(v, k).values), p)
            bound = eps * lp_norm(Field(grid, dv), p) * (1 + 5 * grid.dx / eps)
            worst = max(worst, lhs / bound)
    return worst <= 1.0, f"worst lhs/bound={worst:.3f}"


def check_diffusion_max_principle(rng):
    """Implicit diffusion output stays within [min(u,0), max(u,0)] (M-matrix)."""
    grid = Grid1D(-1.0, 1.0, 500)
    worst = 0.0
    for _ in range(100):
        u = rng.normal(size=grid.n_cells)
        out = diffusion_substep(u, nu=0.3, dt=0.05, dx=grid.dx)
        lo, hi = min(u.min(), 0.0), max(u.max(), 0.0)
        worst = max(worst, lo - out.min(), out.max() - hi)
    return worst <= 1e-12, f"worst excursion={worst:.2e}"


def check_odd_symmetry_fv_step(rng):
    """One LF step from the odd datum stays odd to 1e-12."""
    grid = Grid1D(-3.0, 3.0, 1200)
    k = Kernel(EVEN_BUMP, 0.05)
    u = odd_datum(grid)
    dt = 0.4 * grid.dx
    u1 = lf_step(u, k, identity_law(), dt, cfl=0.9)
    asym = float(np.max(np.abs(u1.values + u1.values[::-1])))
    return asym <= 1e-12, f"asymmetry={asym:.2e}"


def check_one_sided_right_dependence(rng):
    """Changing cells left of i never changes the one-sided convolution at i."""
    grid = Grid1D(-2.0, 2.0, 600)
    k = Kernel(ONE_SIDED_LEFT, 0.07)
    ok = True
    for _ in range(20):
        f = _random_field(rng, grid)
        g = convolve(f, k).values
        i = int(rng.integers(10, grid.n_cells - 10))
        mod = f.values.copy()
        mod[:i] = rng.normal(size=i)
        g2 = convolve(Field(grid, mod), k).values
        ok = ok and np.array_equal(g[i:], g2[i:])
    return ok, "bit-exact on the unchanged side"


def check_godunov_self_convergence(rng):
    """L1 self-convergence order on the step datum is at least 0.7."""
    law = identity_law()
    prev = None
    diffs = []
    for n in (512, 1024, 2048, 4096):
        grid = Grid1D(-4.0, 4.0, n)
        res = run_local(step_datum(grid), law, 0.5, cfl=0.9, n_outputs=2)
        if prev is not None:
            coarse = res.final.values.reshape(-1, 2).mean(axis=1)
            diffs.append(float(np.sum(np.abs(coarse - prev)) * (8.0 / (n // 2))))
        prev = res.final.values
    orders = np.log2(np.array(diffs[:-1]) / np.array(diffs[1:]))
    return bool(np.all(orders >= 0.7)), f"orders={np.round(orders, 3).tolist()}"


def check_lp_homogeneity(rng):
    """lp_norm(c*f) = |c| lp_norm(f) on 100 random fields."""
    grid = Grid1D(0.0, 1.0, 300)
    worst = 0.0
    for _ in range(100):
        f = _random_field(rng, grid)
        c = float(rng.normal()) * 3.0
        for p in (1, 1.7, 2, 5, math.inf):
            a = lp_norm(Field(grid, c * f.values), p)
            b = abs(c) * lp_norm(f, p)
            worst = max(worst, abs(a - b) / max(b, 1e-300))
    return worst <= 1e-12, f"worst rel err={worst:.2e}"


def check_window_additivity(rng):
    """window_mass is additive over adjacent windows to 1e-14."""
    grid = Grid1D(-1.0, 1.0, 640)
    worst = 0.0
    for _ in range(100):
        f = _random_field(rng, grid)
        m = int(rng.integers(1, grid.n_cells - 1))
        mid = grid.x_min + m * grid.dx
        total = window_mass(f, grid.x_min, grid.x_max)
        split = window_mass(f, grid.x_min, mid) + window_mass(f, mid, grid.x_max)
        worst = max(worst, abs(total - split))
    return worst <= 1e-14, f"worst={worst:.2e}"


def check_indicator_entropy_zero(rng):
    """Entropy of {0,1}-valued fields is exactly 0."""
    grid = Grid1D(-2.0, 2.0, 512)
    ok = True
    for _ in range(50):
        v = (rng.random(grid.n_cells) < 0.4).astype(float)
        ok = ok and entropy_functional(Field(grid, v)) == 0.0
    return ok, "exact zero"


CHECKS = [
    ("fv_mass_conservation", check_fv_mass_conservation),
    ("godunov_mass_conservation", check_godunov_mass_conservation),
    ("particle_mass_bitexact", check_particle_mass_bitexact),
    ("young_inequality", check_young_inequality),
    ("jensen_convolution", check_jensen_convolution),
    ("diffusion_max_principle", check_diffusion_max_principle),
    ("odd_symmetry_fv_step", check_odd_symmetry_fv_step),
    ("one_sided_right_dependence", check_one_sided_right_dependence),
    ("godunov_self_convergence", check_godunov_self_convergence),
    ("lp_homogeneity", check_lp_homogeneity),
    ("window_additivity", check_window_additivity),
    ("indicator_entropy_zero", check_indicator_entropy_zero),
]


def run_selftest(seed: int = 0) -> list:
    """Run the full battery; returns [(name, passed, detail), ...]."""
    results = []
    for name, fn in CHECKS:
        rng = np.random.default_rng(seed)
        passed, detail = fn(rng)
        results.append((name, bool(passed), detail))
    return results
