"""Raman transfer of a phonon a_k into an atom of the second component.

With the two Raman beams far detuned, the atom mode zeta_{k+kappa} couples
to the phonon annihilation part of the excitation field with strength

    g_eff = (|Omega1 Omega2| / Delta) * u_k,

u_k being the Bogoliubov coefficient, sqrt(k^2 / 2 omega_k)(1/2 + omega_k/k^2)
for m = 1. In the frame where resonance is time independent the pair obeys

    i a'    = g_eff(t) zeta
    i zeta' = g_eff(t) a + delta_offset zeta,

with delta_offset = delta - delta_res and
delta_res = omega_k - (k + kappa)^2 / 2m.

Two pulse durations are reported side by side. ``pi_pulse_duration_paper``
is pi / g_eff, the literature expression. ``full_transfer_time_numeric``
is the first time at which |zeta|^2 reaches |a(0)|^2, pi / (2 g_eff) for a
constant envelope. They differ by exactly a factor 2, and neither is
silently substituted for the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bogoliubov import dispersion, quasiparticle_coeffs
from .errors import DomainError
from .lambda_system import RamanDrive, adiabatic_eliminate
from .linear_integrator import DEFAULT_TOL, hermitian_system, integrate
from .pulse_shaping import PulseEnvelope
from .units_params import CondensateParams

RESONANCE_TOL = 1e-12


def raman_rate(drive: RamanDrive) -> float:
    """|Omega1 Omega2| / Delta, the free-atom two-photon coupling."""
    return abs(adiabatic_eliminate(drive).coupling)


def effective_coupling(params: CondensateParams, drive: RamanDrive, k: float) -> float:
    if k == 0:
        raise DomainError("k = 0 has no phonon to transfer")
    u, _ = quasiparticle_coeffs(params, k)
    return raman_rate(drive) * u


def resonance_detuning(params: CondensateParams, k: float, kappa: float) -> float:
    """delta_res = omega_k - (k + kappa)^2 / 2m; exactly omega_k for kappa = -k."""
    q = k + kappa
    return dispersion(params, k) - q * q / (2.0 * params.m)


def ideal_resonance(m: float, k1: float, k2: float, V1: float = 0.0, V2: float = 0.0) -> tuple[float, float]:
    """(delta, kappa) that transfer an ideal-gas atom from plane wave k2 in level 2 to k1 in level 1.

    Energy conservation delta = E1(k1) - E2(k2) with E_r = k^2/2m + V_r, and
    momentum conservation kappa = k1 - k2.
    """
    if not m > 0:
        raise DomainError("mass must be positive")
    delta = (k1 * k1 / (2.0 * m) + V1) - (k2 * k2 / (2.0 * m) + V2)
    return delta, k1 - k2


@dataclass(frozen=True)
class TransferSetup:
    params: CondensateParams
    drive: RamanDrive
    k: float
    g_eff: float = field(init=False)
    delta_res: float = field(init=False)
    delta_offset: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "g_eff", effective_coupling(self.params, self.drive, self.k))
        object.__setattr__(self, "delta_res", resonance_detuning(self.params, self.k, self.drive.kappa))
        object.__setattr__(self, "delta_offset", self.drive.delta - self.delta_res)

    @property
    def omega_k(self) -> float:
        return dispersion(self.params, self.k)

    @property
    def is_resonant(self) -> bool:
        return abs(self.delta_offset) <= RESONANCE_TOL * max(1.0, abs(self.drive.delta), self.g_eff)

    @classmethod
    def on_dispersion(
        cls, params: CondensateParams, k: float, Omega: float, Delta: float, delta_offset: float = 0.0
    ) -> "TransferSetup":
        """kappa = -k with the detuning placed ``delta_offset`` from resonance."""
        delta = dispersion(params, k) + delta_offset
        return cls(params, RamanDrive(Omega, Omega, Delta, delta, -k), k)


@dataclass(frozen=True)
class TwoModeAmplitudes:
    a: complex
    zeta: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.zeta], dtype=complex)


def simulate_two_mode(
    coupling: Callable[[float], float] | float,
    delta_offset: float,
    psi0,
    t_grid,
    tol: float = DEFAULT_TOL,
) -> np.ndarray:
    """(a, zeta) on ``t_grid`` for H = [[0, g(t)], [g(t), delta_offset]]."""
    if isinstance(psi0, TwoModeAmplitudes):
        psi0 = psi0.as_array()
    if callable(coupling):
        g_of_t = coupling
    else:
        g_c = float(coupling)
        g_of_t = lambda t: g_c

    def hamiltonian(t):
        g = g_of_t(t)
        return np.array([[0.0, g], [g, delta_offset]], dtype=complex)

    return integrate(hermitian_system(hamiltonian, 2), np.asarray(psi0, dtype=complex), t_grid, tol=tol)


def simulate_pair(
    setup: TransferSetup,
    psi0,
    envelope: PulseEnvelope | None,
    t_grid,
    tol: float = DEFAULT_TOL,
) -> np.ndarray:
    """Pair trajectory under ``envelope`` (absolute coupling g(t)); ``None`` means constant g_eff."""
    t_grid = np.asarray(t_grid, dtype=float)
    if envelope is None:
        return simulate_two_mode(setup.g_eff, setup.delta_offset, psi0, t_grid, tol)
    if t_grid[0] < 0 or t_grid[-1] > envelope.duration * (1 + 1e-12):
        raise DomainError("t_grid must lie within the pulse [0, T]")
    return simulate_two_mode(envelope, setup.delta_offset, psi0, t_grid, tol)


def pulse_for_setup(setup: TransferSetup, shape: str = "rectangular", area: float = 0.5 * math.pi) -> PulseEnvelope:
    """Envelope peaking at g_eff with pulse area int g dt = ``area`` (pi/2 swaps a and zeta)."""
    return PulseEnvelope.for_area(shape, setup.g_eff, area, delta=setup.drive.delta)


@dataclass(frozen=True)
class PaperPulse:
    T_paper: float
    T_phonon_limit: float
    ratio: float  # T_paper / T_phonon_limit


def pi_pulse_duration_paper(setup: TransferSetup) -> PaperPulse:
    """pi / g_eff and its phonon-limit form (pi Delta / Omega^2) sqrt(delta / mu).

    The phonon-limit form is evaluated with delta = omega_k, the detuning
    that addresses this mode when kappa = -k. It is ``inf`` for an ideal gas.
    """
    if not setup.g_eff > 0:
        raise DomainError("no coupling, no pi pulse")
    T_paper = math.pi / setup.g_eff
    mu = setup.params.mu
    if mu == 0:
        approx = math.inf
    else:
        approx = math.pi / raman_rate(setup.drive) * math.sqrt(setup.omega_k / mu)
    return PaperPulse(T_paper=T_paper, T_phonon_limit=approx, ratio=T_paper / approx)


@dataclass(frozen=True)
class TransferPeak:
    time: float
    transfer: float


def first_transfer_peak(
    coupling: float,
    delta_offset: float,
    a0: complex = 1.0,
    tol: float = DEFAULT_TOL,
    points: int = 65,
    refinements: int = 3,
) -> TransferPeak:
    """First maximum of |zeta(t)|^2 for a constant coupling, starting from (a0, 0).

    The maximum is bracketed on a coarse grid, the bracket is re-sampled
    ``refinements`` times, and the final peak is located by fitting a
    parabola through the three best samples.
    """
    if not coupling > 0:
        raise DomainError("coupling must be positive")
    psi0 = np.array([a0, 0.0], dtype=complex)
    # the generalized Rabi frequency only sets the search window
    span = 2.0 * math.pi / math.hypot(coupling, 0.5 * delta_offset)
    t0, t1 = 0.0, span
    for _ in range(refinements + 1):
        t = np.linspace(t0, t1, points)
        if t0 == 0.0:
            states = simulate_two_mode(coupling, delta_offset, psi0, t, tol)
        else:
            start = simulate_two_mode(coupling, delta_offset, psi0, [0.0, t0], tol)[-1]
            states = simulate_two_mode(coupling, delta_offset, start, t, tol)
        p = np.abs(states[:, 1]) ** 2
        i = _first_local_max(p)
        lo, hi = max(i - 1, 0), min(i + 1, points - 1)
        t0, t1 = float(t[lo]), float(t[hi])
    f0, f1, f2 = p[i - 1], p[i], p[i + 1]
    h = t[1] - t[0]
    denom = f0 - 2.0 * f1 + f2
    shift = 0.5 * h * (f0 - f2) / denom if denom != 0 else 0.0
    peak_t = float(t[i] + shift)
    peak_p = float(f1 - 0.25 * (f0 - f2) * shift / h)
    return TransferPeak(time=peak_t, transfer=peak_p)


def _first_local_max(p: np.ndarray) -> int:
    for i in range(1, p.size - 1):
        if p[i] >= p[i - 1] and p[i] > p[i + 1]:
            return i
    raise DomainError("no transfer maximum inside the search window")


@dataclass(frozen=True)
class NumericTransfer:
    T_num: float
    T_paper: float
    ratio: float  # T_paper / T_num
    transfer: float


def full_transfer_time_numeric(setup: TransferSetup, shape: str = "rectangular", tol: float = DEFAULT_TOL) -> NumericTransfer:
    """First time of complete a -> zeta transfer, measured on the simulated dynamics."""
    if not setup.is_resonant:
        raise DomainError(
            f"setup is {setup.delta_offset:.3g} off resonance; complete transfer does not occur"
        )
    if shape != "rectangular":
        raise DomainError("numeric transfer time is defined for a constant envelope")
    peak = first_transfer_peak(setup.g_eff, 0.0, tol=tol)
    T_paper = pi_pulse_duration_paper(setup).T_paper
    return NumericTransfer(T_num=peak.time, T_paper=T_paper, ratio=T_paper / peak.time, transfer=peak.transfer)


def max_transfer(coupling: float, delta_offset: float, tol: float = DEFAULT_TOL) -> float:
    """Largest |zeta|^2 reached from (1, 0) at fixed detuning offset."""
    return first_transfer_peak(coupling, delta_offset, tol=tol).transfer


def detuned_rabi_max(coupling: float, delta_offset: float) -> float:
    return coupling ** 2 / (coupling ** 2 + 0.25 * delta_offset ** 2)
