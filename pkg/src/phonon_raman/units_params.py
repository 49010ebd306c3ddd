"""Unit conventions and condensate background parameters.

Internally hbar = 1 and every frequency is angular. Lengths and times carry
whatever unit the caller chooses; :class:`SiConversion` records how that
unit system maps onto SI so that results can be quoted in metres, seconds,
kelvin or electronvolts.

Defaults used throughout the tests and examples are ``m = g = rho = 1``,
for which ``mu = c_s = xi = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

# CODATA 2018 (exact in the 2019 SI).
HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J / K
ELEMENTARY_CHARGE = 1.602176634e-19  # C, i.e. J per eV

TWO_PI = 2.0 * math.pi

#: Healing length of a non-interacting gas.
XI_IDEAL_GAS = math.inf


def hz_to_angular(f_hz: float) -> float:
    """Ordinary frequency (Hz) to angular frequency (rad/s)."""
    return TWO_PI * f_hz


def angular_to_hz(omega: float) -> float:
    return omega / TWO_PI


@dataclass(frozen=True)
class CondensateParams:
    """Homogeneous condensate background.

    ``mu = g rho``, ``c_s = sqrt(g rho / m)`` and ``1 / xi**2 = m g rho``.
    For ``g == 0`` the healing length is :data:`XI_IDEAL_GAS` (``inf``).
    """

    m: float
    g: float
    rho: float

    def __post_init__(self):
        if not (self.m > 0 and math.isfinite(self.m)):
            raise DomainError(f"mass must be positive and finite, got {self.m}")
        if not (self.rho > 0 and math.isfinite(self.rho)):
            raise DomainError(f"density must be positive and finite, got {self.rho}")
        if not (self.g >= 0 and math.isfinite(self.g)):
            raise DomainError(f"coupling must be non-negative and finite, got {self.g}")

    @property
    def mu(self) -> float:
        return self.g * self.rho

    @property
    def c_s(self) -> float:
        return math.sqrt(self.g * self.rho / self.m)

    @property
    def xi(self) -> float:
        if self.g == 0:
            return XI_IDEAL_GAS
        return 1.0 / math.sqrt(self.m * self.g * self.rho)

    def with_coupling(self, g: float) -> "CondensateParams":
        return CondensateParams(self.m, g, self.rho)


def derive_condensate(m: float, g: float, rho: float) -> CondensateParams:
    return CondensateParams(float(m), float(g), float(rho))


@dataclass(frozen=True)
class ScaleHierarchy:
    """Lengths entering ``lambda >> xi >> a_d >> a_s`` (one common unit)."""

    wavelength: float
    xi: float
    a_d: float
    a_s: float

    def __post_init__(self):
        for name in ("wavelength", "xi", "a_d", "a_s"):
            value = getattr(self, name)
            if not value > 0:
                raise DomainError(f"{name} must be strictly positive, got {value}")


@dataclass(frozen=True)
class HierarchyReport:
    ratios: dict[str, float]
    passed: dict[str, bool]
    ratio_min: float

    @property
    def ok(self) -> bool:
        return all(self.passed.values())


def check_hierarchy(h: ScaleHierarchy, ratio_min: float = 10.0) -> HierarchyReport:
    """Check each step of ``lambda >> xi >> a_d >> a_s`` against ``ratio_min``."""
    if not ratio_min >= 1:
        raise DomainError(f"ratio_min must be >= 1, got {ratio_min}")
    ratios = {
        "lambda/xi": h.wavelength / h.xi,
        "xi/a_d": h.xi / h.a_d,
        "a_d/a_s": h.a_d / h.a_s,
    }
    # Relative slack keeps exact boundary cases (e.g. 10/1 vs 10) from failing on rounding.
    passed = {key: r >= ratio_min * (1 - 1e-12) for key, r in ratios.items()}
    return HierarchyReport(ratios=ratios, passed=passed, ratio_min=ratio_min)


@dataclass(frozen=True)
class SiConversion:
    """Maps internal (hbar = 1) units onto SI.

    ``length_unit`` is metres per internal length unit and ``time_unit``
    seconds per internal time unit. Energies follow from hbar = 1: one
    internal energy unit is ``HBAR / time_unit`` joules.
    """

    length_unit: float = 1.0
    time_unit: float = 1.0

    def __post_init__(self):
        if not (self.length_unit > 0 and self.time_unit > 0):
            raise DomainError("length_unit and time_unit must be positive")

    @classmethod
    def from_sound_speed(cls, c_s: float, xi: float) -> "SiConversion":
        """Unit system in which a condensate with SI ``c_s`` (m/s) and ``xi`` (m)
        has ``m = g = rho = 1``.

        With hbar = 1 one has ``c_s * xi = 1 / m``; choosing ``xi`` as the
        length unit and ``xi / c_s`` as the time unit makes both equal to 1.
        """
        if not (c_s > 0 and xi > 0):
            raise DomainError("c_s and xi must be positive")
        return cls(length_unit=xi, time_unit=xi / c_s)

    @property
    def frequency_unit(self) -> float:
        """Angular frequency (rad/s) of one internal frequency unit."""
        return 1.0 / self.time_unit

    def length_to_si(self, x):
        return x * self.length_unit

    def length_from_si(self, x):
        return x / self.length_unit

    def time_to_si(self, t):
        return t * self.time_unit

    def time_from_si(self, t):
        return t / self.time_unit

    def frequency_to_si(self, w):
        return w / self.time_unit

    def frequency_from_si(self, w):
        return w * self.time_unit

    def velocity_to_si(self, v):
        return v * self.length_unit / self.time_unit

    def velocity_from_si(self, v):
        return v * self.time_unit / self.length_unit

    def wavenumber_to_si(self, k):
        return k / self.length_unit

    def wavenumber_from_si(self, k):
        return k * self.length_unit

    def energy_to_joule(self, e):
        return e * HBAR / self.time_unit

    def energy_to_ev(self, e):
        return self.energy_to_joule(e) / ELEMENTARY_CHARGE

    def hz_to_internal(self, f_hz):
        """Ordinary SI frequency (Hz) to internal angular frequency."""
        return self.frequency_from_si(TWO_PI * f_hz)

    def internal_to_hz(self, w):
        return self.frequency_to_si(w) / TWO_PI
