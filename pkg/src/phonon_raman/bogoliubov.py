"""Bogoliubov quasiparticles of a homogeneous condensate.

A single k-mode of the linearised excitation field obeys, in the frame
co-rotating with the condensate phase,

    i d/dt (U, V) = [[eps + g rho, g rho], [-g rho, -(eps + g rho)]] (U, V),

with eps = k^2 / 2m. Stationary solutions are (u, v) exp(-i omega t)
with omega^2 = (g rho / m) k^2 + (k^2 / 2m)^2 and

    u = (eps + omega) / (2 sqrt(eps omega)),
    v = (eps - omega) / (2 sqrt(eps omega)),

which for m = 1 is u, v = sqrt(k^2 / 2 omega) (1/2 +- omega / k^2).
The companion negative-frequency solution is (v, u) exp(+i omega t), so an
evolved mode decomposes as alpha (u, v) + beta (v, u) and |beta|^2 counts
the quasiparticles created by a change of g.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import ConsistencyError, DomainError
from .linear_integrator import DEFAULT_TOL, LinearSystem, integrate
from .units_params import CondensateParams

RAMP_SHAPES = ("linear", "smooth-tanh", "sudden")
# steepness of the smooth-tanh ramp: the tanh spans +-TANH_STEEPNESS over [0, tau]
TANH_STEEPNESS = 5.0


def dispersion(params: CondensateParams, k):
    """omega(k) = sqrt(g rho k^2 / m + (k^2 / 2m)^2)."""
    k = np.asarray(k, dtype=float)
    eps = k * k / (2.0 * params.m)
    # eps * (eps + 2 mu) avoids cancellation compared with the expanded form
    omega = np.sqrt(eps * (eps + 2.0 * params.mu))
    return float(omega) if omega.ndim == 0 else omega


def quasiparticle_coeffs(params: CondensateParams, k):
    """(u_k, v_k) with u^2 - v^2 = 1 and v <= 0."""
    k_arr = np.asarray(k, dtype=float)
    if np.any(k_arr == 0):
        raise DomainError("k = 0 is the gapless zero mode and has no quasiparticle coefficients")
    eps = k_arr * k_arr / (2.0 * params.m)
    omega = np.sqrt(eps * (eps + 2.0 * params.mu))
    root = 2.0 * np.sqrt(eps * omega)
    u = (eps + omega) / root
    # eps - omega = -2 mu eps / (eps + omega), free of cancellation at large k
    v = -2.0 * params.mu * eps / ((eps + omega) * root)
    if u.ndim == 0:
        return float(u), float(v)
    return u, v


@dataclass(frozen=True)
class BogoliubovMode:
    k: float
    omega_k: float
    u_k: float
    v_k: float

    @classmethod
    def of(cls, params: CondensateParams, k: float) -> "BogoliubovMode":
        u, v = quasiparticle_coeffs(params, k)
        return cls(float(k), dispersion(params, k), u, v)


@dataclass(frozen=True)
class BdgModeState:
    U: complex
    V: complex

    @classmethod
    def stationary(cls, params: CondensateParams, k: float) -> "BdgModeState":
        u, v = quasiparticle_coeffs(params, k)
        return cls(complex(u), complex(v))

    @property
    def symplectic_norm(self) -> float:
        return abs(self.U) ** 2 - abs(self.V) ** 2

    def as_array(self) -> np.ndarray:
        return np.array([self.U, self.V], dtype=complex)


@dataclass(frozen=True)
class CouplingRamp:
    """g(t) from ``g_initial`` to ``g_final`` over [0, tau].

    ``linear`` interpolates linearly, ``smooth-tanh`` follows a tanh profile
    rescaled to hit both endpoints exactly, and ``sudden`` jumps at t = 0.
    Outside [0, tau] the coupling is held at the nearer endpoint.
    """

    g_initial: float
    g_final: float
    tau: float
    shape: str = "smooth-tanh"

    def __post_init__(self):
        if self.shape not in RAMP_SHAPES:
            raise DomainError(f"unknown ramp shape {self.shape!r}; expected one of {RAMP_SHAPES}")
        if self.g_initial < 0 or self.g_final < 0:
            raise DomainError("coupling must be non-negative")
        if not (math.isfinite(self.g_initial) and math.isfinite(self.g_final)):
            raise DomainError("ramp endpoints must be finite")
        if self.shape != "sudden" and not self.tau > 0:
            raise DomainError("non-sudden ramps need tau > 0")

    @classmethod
    def constant(cls, g: float) -> "CouplingRamp":
        return cls(g, g, 1.0, "linear")

    def __call__(self, t: float) -> float:
        if self.shape == "sudden":
            return self.g_initial if t < 0 else self.g_final
        if t <= 0:
            return self.g_initial
        if t >= self.tau:
            return self.g_final
        x = t / self.tau
        if self.shape == "linear":
            s = x
        else:
            a = TANH_STEEPNESS
            s = 0.5 * (1.0 + math.tanh(a * (2.0 * x - 1.0)) / math.tanh(a))
        return self.g_initial + (self.g_final - self.g_initial) * s


def bdg_matrix(params: CondensateParams, k: float, g: float) -> np.ndarray:
    eps = k * k / (2.0 * params.m)
    gr = g * params.rho
    return np.array([[eps + gr, gr], [-gr, -(eps + gr)]], dtype=float)


@dataclass(frozen=True)
class BdgTrajectory:
    t: np.ndarray
    U: np.ndarray
    V: np.ndarray
    g: np.ndarray

    @property
    def symplectic_norm(self) -> np.ndarray:
        return np.abs(self.U) ** 2 - np.abs(self.V) ** 2

    def state(self, i: int = -1) -> BdgModeState:
        return BdgModeState(complex(self.U[i]), complex(self.V[i]))


def evolve_bdg_mode(
    initial: BdgModeState,
    ramp: CouplingRamp,
    params0: CondensateParams,
    k: float,
    t_grid,
    tol: float = DEFAULT_TOL,
) -> BdgTrajectory:
    """Evolve one k-mode while g follows ``ramp``; ``params0`` supplies m and rho.

    Sudden ramps are handled as an exact change of basis at t = 0 followed
    by stationary propagation under the final coupling.
    """
    if k == 0:
        raise DomainError("k = 0 is excluded")
    t_grid = np.asarray(t_grid, dtype=float)
    psi0 = initial.as_array()
    g_of_t = np.array([ramp(t) for t in t_grid])

    if ramp.shape == "sudden" or ramp.g_initial == ramp.g_final:
        if ramp.shape == "sudden" and t_grid[0] < 0:
            raise DomainError("sudden ramps jump at t = 0; start t_grid at t >= 0")
        gen = -1j * bdg_matrix(params0, k, ramp.g_final)
        states = np.array([expm(gen * (t - t_grid[0])) @ psi0 for t in t_grid])
    else:
        system = LinearSystem(lambda t: -1j * bdg_matrix(params0, k, ramp(t)), 2)
        # keep the ramp's kinks at 0 and tau on step boundaries
        inner = [x for x in (0.0, ramp.tau) if t_grid[0] < x < t_grid[-1] and not np.any(t_grid == x)]
        if inner:
            grid = np.union1d(t_grid, inner)
            states = integrate(system, psi0, grid, tol=tol)[np.searchsorted(grid, t_grid)]
        else:
            states = integrate(system, psi0, t_grid, tol=tol)
    return BdgTrajectory(t=t_grid, U=states[:, 0], V=states[:, 1], g=g_of_t)


def bogoliubov_overlaps(state: BdgModeState, params_final: CondensateParams, k: float) -> tuple[complex, complex]:
    """(alpha, beta) with state = alpha (u, v) + beta (v, u) in the final basis."""
    u, v = quasiparticle_coeffs(params_final, k)
    alpha = u * state.U - v * state.V
    beta = u * state.V - v * state.U
    return complex(alpha), complex(beta)


def excitation_number(state: BdgModeState, params_final: CondensateParams, k: float) -> float:
    """|beta|^2: quasiparticles of the final stationary problem contained in ``state``."""
    drift = abs(state.symplectic_norm - 1.0)
    if drift > 1e-6:
        raise ConsistencyError(f"state violates |U|^2 - |V|^2 = 1 by {drift:.3g}")
    _, beta = bogoliubov_overlaps(state, params_final, k)
    return abs(beta) ** 2


def sudden_quench_number(params_initial: CondensateParams, params_final: CondensateParams, k: float) -> float:
    """|u_f v_i - v_f u_i|^2 for an instantaneous change of coupling."""
    ui, vi = quasiparticle_coeffs(params_initial, k)
    uf, vf = quasiparticle_coeffs(params_final, k)
    return (uf * vi - vf * ui) ** 2
