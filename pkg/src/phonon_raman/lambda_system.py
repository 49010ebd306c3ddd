"""Driven three-level (Lambda) atom and its adiabatic two-level reduction.

Amplitudes live in the slow frame rotating at omega1, omega2 and
omega3 + Delta. There the full Schrödinger equation reads

    i psi1' = -Omega1 psi3
    i psi2' = -Omega2 exp(+i delta t) psi3
    i psi3' = -conj(Omega1) psi1 - conj(Omega2) exp(-i delta t) psi2 - Delta psi3

so the optical frequencies never appear and the only explicit time
dependence is the slow two-photon detuning. Eliminating psi3 for large
Delta gives light shifts |Omega_i|^2/Delta and a cross coupling
Omega1 conj(Omega2)/Delta.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .linear_integrator import DEFAULT_TOL, hermitian_system, integrate

ADIABATICITY_WARN = 0.1


@dataclass(frozen=True)
class LambdaLevels:
    omega1: float
    omega2: float
    omega3: float

    def __post_init__(self):
        if not self.omega1 < self.omega2 < self.omega3:
            raise DomainError("level energies must satisfy omega1 < omega2 < omega3")


@dataclass(frozen=True)
class RamanDrive:
    """Two Raman beams.

    ``Delta`` is the large one-photon detuning from the excited level,
    ``delta`` the small two-photon detuning, and ``kappa`` the wavenumber
    mismatch k1 - k2 of the beams along the condensate axis.
    """

    Omega1: complex
    Omega2: complex
    Delta: float
    delta: float = 0.0
    kappa: float = 0.0

    def __post_init__(self):
        if not self.Delta > 0:
            raise DomainError(f"large detuning Delta must be positive, got {self.Delta}")
        if self.adiabaticity > ADIABATICITY_WARN:
            warnings.warn(
                f"|Omega|/Delta = {self.adiabaticity:.3g} exceeds {ADIABATICITY_WARN}; "
                "adiabatic elimination is unreliable",
                stacklevel=3,
            )

    @property
    def adiabaticity(self) -> float:
        return max(abs(self.Omega1), abs(self.Omega2)) / self.Delta

    def with_phase(self, phi: float) -> "RamanDrive":
        z = complex(math.cos(phi), math.sin(phi))
        return RamanDrive(self.Omega1 * z, self.Omega2 * z, self.Delta, self.delta, self.kappa)


@dataclass(frozen=True)
class ThreeLevelState:
    psi1: complex
    psi2: complex
    psi3: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.psi1, self.psi2, self.psi3], dtype=complex)

    @classmethod
    def from_array(cls, a) -> "ThreeLevelState":
        return cls(complex(a[0]), complex(a[1]), complex(a[2]))


@dataclass(frozen=True)
class EffectiveTwoLevel:
    """Reduced dynamics of levels 1 and 2.

    ``delta_eff`` is the detuning of the two-photon transition once the
    light shifts are included; the reduced system is resonant iff it is 0.
    """

    shift1: float
    shift2: float
    coupling: complex
    delta: float

    @property
    def delta_eff(self) -> float:
        return self.delta + self.shift2 - self.shift1

    def hamiltonian(self, t: float) -> np.ndarray:
        c = self.coupling * np.exp(-1j * self.delta * t)
        return np.array([[self.shift1, c], [np.conj(c), self.shift2]], dtype=complex)


def _check_normalized(psi: np.ndarray, what: str) -> None:
    norm = float(np.vdot(psi, psi).real)
    if abs(norm - 1.0) > 1e-8:
        raise DomainError(f"{what} must be normalized, |psi|^2 = {norm}")


def three_level_hamiltonian(drive: RamanDrive, envelope: Callable[[float], float] | None = None):
    o1, o2 = complex(drive.Omega1), complex(drive.Omega2)
    big, small = drive.Delta, drive.delta

    def hamiltonian(t):
        s = 1.0 if envelope is None else envelope(t)
        a = -s * o1
        b = -s * o2 * np.exp(1j * small * t)
        return np.array(
            [[0.0, 0.0, a], [0.0, 0.0, b], [np.conj(a), np.conj(b), -big]],
            dtype=complex,
        )

    return hamiltonian


def evolve_three_level(
    levels: LambdaLevels | None,
    drive: RamanDrive,
    psi0,
    t_grid,
    tol: float = DEFAULT_TOL,
    envelope: Callable[[float], float] | None = None,
) -> np.ndarray:
    """Slow-frame amplitudes (psi1, psi2, psi3) at every time in ``t_grid``.

    ``levels`` only fixes the frame and is validated when given; the
    slow-frame equations do not depend on it. ``envelope``, if supplied,
    multiplies both Rabi amplitudes.
    """
    if isinstance(psi0, ThreeLevelState):
        psi0 = psi0.as_array()
    psi0 = np.asarray(psi0, dtype=complex)
    _check_normalized(psi0, "psi0")
    system = hermitian_system(three_level_hamiltonian(drive, envelope), 3)
    return integrate(system, psi0, t_grid, tol=tol)


def adiabatic_eliminate(drive: RamanDrive) -> EffectiveTwoLevel:
    if not drive.Delta > 0:
        raise DomainError("adiabatic elimination needs Delta > 0")
    o1, o2 = complex(drive.Omega1), complex(drive.Omega2)
    return EffectiveTwoLevel(
        shift1=abs(o1) ** 2 / drive.Delta,
        shift2=abs(o2) ** 2 / drive.Delta,
        coupling=o1 * o2.conjugate() / drive.Delta,
        delta=drive.delta,
    )


def eliminated_upper_amplitude(drive: RamanDrive, psi12: np.ndarray, t) -> np.ndarray:
    """Leading-order psi3 slaved to (psi1, psi2): -(Omega1* psi1 + Omega2* e^{-i delta t} psi2) / Delta."""
    psi12 = np.atleast_2d(psi12)
    t = np.asarray(t, dtype=float)
    o1, o2 = complex(drive.Omega1), complex(drive.Omega2)
    return -(o1.conjugate() * psi12[:, 0] + o2.conjugate() * np.exp(-1j * drive.delta * t) * psi12[:, 1]) / drive.Delta


def evolve_effective_two_level(
    eff: EffectiveTwoLevel, psi0, t_grid, tol: float = DEFAULT_TOL
) -> np.ndarray:
    psi0 = np.asarray(psi0, dtype=complex)
    _check_normalized(psi0, "psi0")
    return integrate(hermitian_system(eff.hamiltonian, 2), psi0, t_grid, tol=tol)


def effective_rabi_period(drive: RamanDrive) -> float:
    """Population period pi/|coupling| of the resonant reduced system."""
    c = abs(adiabatic_eliminate(drive).coupling)
    if c == 0:
        raise DomainError("no effective coupling")
    return math.pi / c


def compare_adiabatic(
    levels: LambdaLevels | None,
    drive: RamanDrive,
    psi0,
    t_grid,
    tol: float = DEFAULT_TOL,
) -> float:
    """Largest |psi_i^full - psi_i^eff| (i = 1, 2) over ``t_grid``.

    ``psi0`` holds the three amplitudes of the full model; the reduced
    model starts from its first two.
    """
    if isinstance(psi0, ThreeLevelState):
        psi0 = psi0.as_array()
    psi0 = np.asarray(psi0, dtype=complex)
    full = evolve_three_level(levels, drive, psi0, t_grid, tol=tol)
    p12 = psi0[:2]
    n12 = np.linalg.norm(p12)
    if n12 == 0:
        raise DomainError("psi0 has no weight in levels 1 and 2")
    reduced = evolve_effective_two_level(adiabatic_eliminate(drive), p12 / n12, t_grid, tol=tol) * n12
    return float(np.max(np.abs(full[:, :2] - reduced)))
