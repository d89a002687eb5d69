"""Convolution kernels, discrete convolution, and heat-kernel utilities.

Two concrete kernel shapes are provided, both smooth compactly supported
bumps with unit mass:

* ``even_bump`` - the standard mollifier exp(-1/(1-s^2)) on (-1, 1), even.
* ``one_sided_left`` - the same bump translated to (-1, 0), so that the
  convolution u * eta at a point x only sees the values of u to the *right*
  of x (downstream dependence).

Kernels carry their scale epsilon: eta_eps(x) = (1/eps) * eta(x/eps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma as gamma_fn

from .grids import Field

__all__ = [
    "Kernel",
    "kernel_eval",
    "convolve",
    "convolve_particles",
    "HeatKernelSpec",
    "heat_kernel_eval",
    "heat_kernel_grad_eval",
    "grad_lq_exponent",
    "heat_kernel_l1_norm",
    "heat_kernel_grad_lq_norm",
]

EVEN_BUMP = "even_bump"
ONE_SIDED_LEFT = "one_sided_left"

try:  # optional accelerator for the particle convolution inner loop
    from numba import njit as _njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    _HAVE_NUMBA = False


def _bump_profile(s: np.ndarray) -> np.ndarray:
    """Unnormalized even bump exp(-1/(1-s^2)) on |s| < 1, zero outside."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    si = s[inside]
    out[inside] = np.exp(-1.0 / (1.0 - si * si))
    return out


@dataclass(frozen=True)
class Kernel:
    """A scaled convolution kernel eta_eps of shape ``even_bump`` or ``one_sided_left``.

    The normalization constant is computed by adaptive quadrature at
    construction and the unit-mass property is verified to 1e-10.
    """

    shape: str
    epsilon: float
    normalization: float = 0.0  # 1/Z in eta(x) = exp(...)/Z, filled in __post_init__

    def __post_init__(self):
        if self.shape not in (EVEN_BUMP, ONE_SIDED_LEFT):
            raise ValueError(f"unknown kernel shape {self.shape!r}")
        if not (self.epsilon > 0.0 and math.isfinite(self.epsilon)):
            raise ValueError(f"epsilon={self.epsilon} must be positive")
        # Z = integral of the unnormalized scaled profile over its support.
        z, _ = quad(lambda x: self._raw(np.array([x]))[0], *self.support, limit=200)
        object.__setattr__(self, "normalization", 1.0 / z)
        total, _ = quad(
            lambda x: self.eval(np.array([x]))[0], *self.support, limit=200
        )
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"kernel mass {total} deviates from 1 beyond 1e-10")

    @property
    def support(self) -> tuple[float, float]:
        """Open interval outside of which the kernel vanishes."""
        if self.shape == EVEN_BUMP:
            return (-self.epsilon, self.epsilon)
        return (-self.epsilon, 0.0)

    def _raw(self, x: np.ndarray) -> np.ndarray:
        s = np.asarray(x, dtype=float) / self.epsilon
        if self.shape == EVEN_BUMP:
            return _bump_profile(s)
        return _bump_profile(2.0 * s + 1.0)

    def eval(self, x) -> np.ndarray:
        return self.normalization * self._raw(x)

    @cached_property
    def deriv_sup(self) -> float:
        """Numerical sup of |eta_eps'|, used by time-step safeguards."""
        lo, hi = self.support
        xs = np.linspace(lo, hi, 20001)
        return float(np.max(np.abs(np.gradient(self.eval(xs), xs))))

    def manifest_entry(self) -> dict:
        return {
            "shape": self.shape,
            "epsilon": self.epsilon,
            "normalization_constant": self.normalization,
        }


def kernel_eval(k: Kernel, x: float) -> float:
    """Pointwise value of the scaled kernel eta_eps at x."""
    return float(k.eval(np.array([x]))[0])


def _weights(k: Kernel, dx: float) -> tuple[np.ndarray, int]:
    """Kernel samples at offsets j*dx, renormalized to unit sum.

    Returns (w, J) where w[J + j] is the weight of offset j, j in [-J, J].
    Renormalization makes the discrete convolution reproduce constants and
    preserve total mass exactly; the raw sampling error O((dx/eps)^2) becomes
    a kernel perturbation instead.
    """
    if k.epsilon < dx:
        raise ValueError(
            f"kernel under-resolved: epsilon={k.epsilon} < dx={dx}"
        )
    J = int(math.ceil(k.epsilon / dx))
    if k.shape == EVEN_BUMP:
        # sample one side and mirror so even symmetry is exact in floats
        right = k.eval(np.arange(J + 1) * dx)
        w = np.concatenate([right[:0:-1], right])
    else:
        w = k.eval(np.arange(-J, J + 1) * dx)
    total = w.sum() * dx
    if total <= 0.0:
        raise ValueError(
            f"kernel under-resolved: no interior samples at dx={dx}"
        )
    return w * dx / total, J


def convolve(f: Field, k: Kernel) -> Field:
    """Discrete convolution g_i = sum_j w_j f_{i-j} with zero padding.

    Weights are kernel samples on the grid spacing, renormalized to sum to 1,
    so constants are reproduced and mass is preserved.
    """
    w, J = _weights(k, f.grid.dx)
    full = np.convolve(f.values, w, mode="full")
    return Field(f.grid, full[J : J + f.grid.n_cells], f.time_stamp)


if _HAVE_NUMBA:

    @_njit(cache=True)
    def _atom_sum(X, m, xq, j0, j1, eps, norm, one_sided):
        out = np.zeros(xq.size)
        for i in range(xq.size):
            acc = 0.0
            xi = xq[i]
            for j in range(j0[i], j1[i]):
                s = (xi - X[j]) / eps
                if one_sided:
                    s = 2.0 * s + 1.0
                if -1.0 < s < 1.0:
                    acc += m[j] * np.exp(-1.0 / (1.0 - s * s))
            out[i] = acc * norm
        return out


def _atom_sum_numpy(X, m, xq, j0, j1, k):
    width = int(np.max(j1 - j0)) if xq.size else 0
    if width == 0:
        return np.zeros_like(xq)
    idx = j0[:, None] + np.arange(width)[None, :]
    valid = idx < j1[:, None]
    idx = np.minimum(idx, X.size - 1)
    vals = k.eval(xq[:, None] - X[idx]) * m[idx]
    return np.where(valid, vals, 0.0).sum(axis=1)


def convolve_particles(positions, masses, k: Kernel, x):
    """Exact convolution of the atomic measure sum_j m_j delta_{X_j} with eta_eps.

    Evaluates sum_j m_j * eta_eps(x - X_j) at each query point. ``positions``
    must be sorted ascending. Smooth in x because eta is smooth. Only
    particles within the kernel support of each query point are touched, with
    a fixed left-to-right summation order for reproducibility.
    """
    X = np.asarray(positions, dtype=float)
    m = np.asarray(masses, dtype=float)
    xq = np.atleast_1d(np.asarray(x, dtype=float))
    lo, hi = k.support
    # eta_eps(x - X_j) != 0  <=>  X_j in (x - hi, x - lo)
    j0 = np.searchsorted(X, xq - hi, side="left")
    j1 = np.searchsorted(X, xq - lo, side="right")
    if _HAVE_NUMBA:
        out = _atom_sum(
            X, m, xq, j0, j1, k.epsilon, k.normalization, k.shape == ONE_SIDED_LEFT
        )
    else:
        out = _atom_sum_numpy(X, m, xq, j0, j1, k)
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(out[0])
    return out


# ---------------------------------------------------------------------------
# heat kernel


@dataclass(frozen=True)
class HeatKernelSpec:
    """Gaussian heat kernel scaled by a viscosity nu, in dimension dim."""

    nu: float
    dim: int = 1

    def __post_init__(self):
        if not self.nu > 0.0:
            raise ValueError(f"nu={self.nu} must be positive")
        if self.dim < 1:
            raise ValueError(f"dim={self.dim} must be >= 1")


def heat_kernel_eval(spec: HeatKernelSpec, t: float, x: float) -> float:
    """Fundamental solution of u_t = nu * Laplace(u) at time t, radius |x|.

    Normalized to unit integral over R^d for every t > 0.
    """
    if t <= 0.0:
        raise ValueError(f"t={t} must be positive")
    d = spec.dim
    s = spec.nu * t
    c = (4.0 * math.pi) ** (-d / 2.0)
    return float(c * s ** (-d / 2.0) * math.exp(-(x * x) / (4.0 * s)))


def heat_kernel_grad_eval(spec: HeatKernelSpec, t: float, x: float) -> float:
    """|gradient| of the heat kernel at radius |x| (radial derivative magnitude)."""
    if t <= 0.0:
        raise ValueError(f"t={t} must be positive")
    s = spec.nu * t
    return abs(x) / (2.0 * s) * heat_kernel_eval(spec, t, x)


def grad_lq_exponent(spec: HeatKernelSpec, q: float) -> float:
    """Exponent alpha with ||grad G_nu(t,.)||_{L^q} proportional to (nu*t)^alpha."""
    if q <= 1.0:
        raise ValueError(f"q={q} must be > 1")
    d = spec.dim
    return (d - q * (d + 1)) / (2.0 * q)


def _sphere_area(d: int) -> float:
    return 2.0 * math.pi ** (d / 2.0) / gamma_fn(d / 2.0)


def heat_kernel_l1_norm(spec: HeatKernelSpec, t: float) -> float:
    """L^1 norm of the heat kernel at time t, computed by quadrature (should be 1)."""
    d = spec.dim
    s = spec.nu * t
    r_max = 20.0 * math.sqrt(2.0 * s)
    val, _ = quad(
        lambda r: r ** (d - 1) * heat_kernel_eval(spec, t, r),
        0.0,
        r_max,
        limit=200,
    )
    return _sphere_area(d) * val


def heat_kernel_grad_lq_norm(spec: HeatKernelSpec, t: float, q: float) -> float:
    """L^q norm of |grad G_nu(t,.)| over R^d by radial quadrature."""
    if q <= 1.0:
        raise ValueError(f"q={q} must be > 1")
    d = spec.dim
    s = spec.nu * t
    r_max = 25.0 * math.sqrt(2.0 * s)
    val, _ = quad(
        lambda r: r ** (d - 1) * heat_kernel_grad_eval(spec, t, r) ** q,
        0.0,
        r_max,
        limit=200,
    )
    return (_sphere_area(d) * val) ** (1.0 / q)
