"""Acoustic-metric estimators for one-dimensional condensate flows.

Quantities here are in SI (metres, seconds, m/s) unless stated; use
:class:`~phonon_raman.units_params.SiConversion` to bring internal-unit
results across.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bogoliubov import CouplingRamp, BdgModeState, dispersion, evolve_bdg_mode, excitation_number, sudden_quench_number
from .errors import DomainError
from .linear_integrator import DEFAULT_TOL
from .units_params import ELEMENTARY_CHARGE, HBAR, K_B, CondensateParams

#: hbar / (2 pi k_B) in K s
HAWKING_COEFFICIENT = HBAR / (2.0 * math.pi * K_B)


@dataclass(frozen=True)
class MetricComponents:
    """Inverse acoustic metric prefactor * [[1, v0], [v0, v0^2 - c_s^2]] (arrays broadcast)."""

    prefactor: np.ndarray
    tt: np.ndarray
    tx: np.ndarray
    xx: np.ndarray
    c_s: np.ndarray

    def matrix(self, i: int | None = None) -> np.ndarray:
        pick = (lambda a: np.asarray(a)) if i is None else (lambda a: np.asarray(a).reshape(-1)[i])
        f = pick(self.prefactor)
        return np.array([[f * pick(self.tt), f * pick(self.tx)], [f * pick(self.tx), f * pick(self.xx)]])

    @property
    def determinant(self) -> np.ndarray:
        # tt * xx - tx^2 = -c_s^2 exactly; evaluating it from the entries
        # cancels catastrophically for |v0| >> c_s
        return -((self.prefactor * self.c_s) ** 2)


def effective_metric(rho0, v0, c_s) -> MetricComponents:
    rho0, v0, c_s = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (rho0, v0, c_s)))
    if np.any(rho0 <= 0):
        raise DomainError("density must be positive")
    if np.any(c_s <= 0):
        raise DomainError("sound speed must be positive")
    return MetricComponents(
        prefactor=1.0 / (rho0 * c_s),
        tt=np.ones_like(v0),
        tx=v0.copy(),
        xx=v0 * v0 - c_s * c_s,
        c_s=c_s.copy(),
    )


@dataclass(frozen=True)
class FlowProfile:
    r: np.ndarray
    v0: np.ndarray
    c_s: np.ndarray
    rho0: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        arrays = [np.broadcast_to(np.asarray(a, dtype=float), r.shape).copy() for a in (self.v0, self.c_s, self.rho0)]
        if r.ndim != 1 or r.size < 2 or not np.all(np.diff(r) > 0):
            raise DomainError("positions must be a strictly increasing 1-D grid")
        if np.any(arrays[1] <= 0):
            raise DomainError("sound speed must be positive everywhere")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "v0", arrays[0])
        object.__setattr__(self, "c_s", arrays[1])
        object.__setattr__(self, "rho0", arrays[2])


@dataclass(frozen=True)
class Horizon:
    position: float
    gradient: float  # d/dr (|v0| - c_s) at the horizon, 1/s
    temperature: float  # K


@dataclass(frozen=True)
class HorizonReport:
    horizons: list[Horizon]

    @property
    def positions(self) -> list[float]:
        return [h.position for h in self.horizons]

    @property
    def temperatures(self) -> list[float]:
        return [h.temperature for h in self.horizons]

    def __len__(self) -> int:
        return len(self.horizons)


def hawking_temperature(gradient) -> float:
    """T_H = hbar / (2 pi k_B) |d(v0 - c_s)/dr| with the gradient in 1/s."""
    return HAWKING_COEFFICIENT * abs(gradient)


def find_horizons(profile: FlowProfile) -> HorizonReport:
    """Sonic points where |v0| crosses c_s, located by linear interpolation.

    The gradient comes from central differences (one-sided at the grid
    edges) interpolated to the crossing.
    """
    f = np.abs(profile.v0) - profile.c_s
    grad = np.gradient(f, profile.r)
    horizons = []
    for i in range(f.size - 1):
        f0, f1 = f[i], f[i + 1]
        if f0 == 0.0:
            x, gr = profile.r[i], grad[i]
        elif f0 * f1 < 0:
            w = f0 / (f0 - f1)
            x = profile.r[i] + w * (profile.r[i + 1] - profile.r[i])
            gr = grad[i] + w * (grad[i + 1] - grad[i])
        else:
            continue
        horizons.append(Horizon(position=float(x), gradient=float(gr), temperature=hawking_temperature(gr)))
    if f[-1] == 0.0:
        horizons.append(Horizon(float(profile.r[-1]), float(grad[-1]), hawking_temperature(grad[-1])))
    return HorizonReport(horizons)


def hawking_energy_bound(c_s: float, wavelength: float) -> float:
    """Phonon energy hbar c_s 2 pi / wavelength in eV (SI inputs)."""
    if c_s < 0 or not wavelength > 0:
        raise DomainError("need c_s >= 0 and a positive wavelength")
    return HBAR * c_s * 2.0 * math.pi / wavelength / ELEMENTARY_CHARGE


@dataclass(frozen=True)
class CreationScale:
    wavelength: float
    order_of_magnitude_only: bool = True


def creation_wavelength(c_s: float, cdot_s: float) -> CreationScale:
    """|c_s^2 / (dc_s/dt)|, an order-of-magnitude scale for created phonons."""
    if cdot_s == 0:
        raise DomainError("a stationary sound speed sets no creation scale")
    return CreationScale(abs(c_s * c_s / cdot_s))


@dataclass(frozen=True)
class CreationRow:
    k: float
    omega_initial: float
    omega_final: float
    n: float
    symplectic_drift: float


def particle_creation_summary(
    ramp: CouplingRamp,
    params0: CondensateParams,
    k_grid,
    n_time: int = 2,
    tol: float = DEFAULT_TOL,
) -> list[CreationRow]:
    """Quasiparticle number n(k) = |beta_k|^2 left behind by ``ramp``.

    ``params0`` holds the condensate at g = ramp.g_initial; the state at
    the end of the ramp is projected on the stationary basis at g_final.
    """
    if ramp.g_initial != params0.g:
        params0 = params0.with_coupling(ramp.g_initial)
    params_f = params0.with_coupling(ramp.g_final)
    t_end = ramp.tau if ramp.shape != "sudden" else 1.0
    t_grid = np.linspace(0.0, t_end, max(n_time, 2))
    rows = []
    for k in np.asarray(k_grid, dtype=float):
        if k == 0:
            raise DomainError("k = 0 is excluded")
        traj = evolve_bdg_mode(BdgModeState.stationary(params0, k), ramp, params0, k, t_grid, tol=tol)
        rows.append(
            CreationRow(
                k=float(k),
                omega_initial=dispersion(params0, k),
                omega_final=dispersion(params_f, k),
                n=excitation_number(traj.state(), params_f, k),
                symplectic_drift=float(np.max(np.abs(traj.symplectic_norm - 1.0))),
            )
        )
    return rows


def sudden_creation_oracle(params0: CondensateParams, g_final: float, k_grid) -> np.ndarray:
    return np.array([sudden_quench_number(params0, params0.with_coupling(g_final), k) for k in k_grid])
