"""Pulse envelopes, their spectra, energy resolution and ground-state leakage.

Every envelope is a cosine-sum window on [0, T],

    g(t) = g_peak * sum_j a_j cos(2 pi j t / T),

scaled so the peak (rectangular: the plateau) equals ``g_peak``. A pulse
with carrier detuning ``delta`` has spectrum

    S(omega) = int_0^T g(t) exp(-i delta t) exp(i omega t) dt,

peaked at omega = delta. Condensate atoms in the many-body ground state
sit at omega = 0, so |S(0)| relative to the peak measures how strongly the
pulse leaks into the unwanted ground-state transition.

Spectra are computed by composite Gauss-Legendre quadrature of this
integral rather than by an FFT; :func:`dft_spectrum` is kept as a
cross-check only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.special import sici

from .errors import DomainError

SHAPES = ("rectangular", "blackman", "raised-cosine")

# cosine-sum coefficients a_j
_COEFFS = {
    "rectangular": (1.0,),
    "blackman": (0.42, -0.5, 0.08),
    "raised-cosine": (0.5, -0.5),
}

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)
# phase advance allowed across one quadrature panel
_PANEL_PHASE = 0.5 * math.pi


@dataclass(frozen=True)
class PulseEnvelope:
    shape: str
    duration: float
    g_peak: float
    delta: float = 0.0

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise DomainError(f"unknown pulse shape {self.shape!r}; expected one of {SHAPES}")
        if not self.duration > 0:
            raise DomainError(f"pulse duration must be positive, got {self.duration}")
        if not self.g_peak >= 0:
            raise DomainError(f"peak coupling must be non-negative, got {self.g_peak}")

    @classmethod
    def for_area(cls, shape: str, g_peak: float, area: float, delta: float = 0.0) -> "PulseEnvelope":
        """Envelope with peak ``g_peak`` whose integral equals ``area``."""
        if not (g_peak > 0 and area > 0):
            raise DomainError("g_peak and area must be positive")
        return cls(shape, area / (g_peak * shape_mean(shape)), g_peak, delta)

    @property
    def coefficients(self) -> tuple[float, ...]:
        return _COEFFS[self.shape]

    @property
    def area(self) -> float:
        return self.g_peak * self.duration * shape_mean(self.shape)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        x = t / self.duration
        w = np.zeros_like(x)
        for j, a in enumerate(self.coefficients):
            w = w + a * np.cos(2.0 * math.pi * j * x)
        out = np.where((x >= 0.0) & (x <= 1.0), self.g_peak * w, 0.0)
        return float(out) if out.ndim == 0 else out

    def with_duration(self, duration: float) -> "PulseEnvelope":
        return PulseEnvelope(self.shape, duration, self.g_peak, self.delta)

    def with_delta(self, delta: float) -> "PulseEnvelope":
        return PulseEnvelope(self.shape, self.duration, self.g_peak, delta)


def shape_mean(shape: str) -> float:
    """Time average of the unit-peak window (the a_0 coefficient)."""
    if shape not in SHAPES:
        raise DomainError(f"unknown pulse shape {shape!r}")
    return _COEFFS[shape][0]


def main_lobe_halfwidth(envelope: PulseEnvelope) -> float:
    """Distance from the peak to the first spectral null, 2 pi J / T for J cosine terms."""
    return 2.0 * math.pi * len(envelope.coefficients) / envelope.duration


def sample_envelope(envelope: PulseEnvelope, n_samples: int) -> tuple[np.ndarray, np.ndarray]:
    if n_samples < 8:
        raise DomainError("need at least 8 samples")
    t = np.linspace(0.0, envelope.duration, n_samples)
    return t, envelope(t)


def fourier_integral(envelope: PulseEnvelope, nu) -> np.ndarray:
    """int_0^T g(t) exp(i nu t) dt by composite Gauss-Legendre quadrature."""
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    T = envelope.duration
    n_panels = max(8, int(math.ceil(float(np.max(np.abs(nu))) * T / _PANEL_PHASE)))
    edges = np.linspace(0.0, T, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    t = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel() * envelope(t)
    out = np.empty(nu.shape, dtype=complex)
    chunk = max(1, 4_000_000 // t.size)
    for start in range(0, nu.size, chunk):
        sl = slice(start, start + chunk)
        out[sl] = np.exp(1j * np.outer(nu[sl], t)) @ w
    return out


@dataclass(frozen=True)
class SpectrumReport:
    freqs: np.ndarray
    amplitude: np.ndarray
    peak_freq: float
    peak_amplitude: float
    fwhm: float
    leakage_freq: float
    leakage_db: float

    @property
    def abs_db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 20.0 * np.log10(np.abs(self.amplitude) / self.peak_amplitude)


def _db(ratio: float) -> float:
    with np.errstate(divide="ignore"):
        return float(20.0 * np.log10(ratio))


def spectrum(envelope: PulseEnvelope, freq_grid, leakage_freq: float = 0.0) -> SpectrumReport:
    """Spectral amplitude of the pulse on ``freq_grid`` (angular frequencies).

    The grid must reach from the ground-state line at 0 to the carrier at
    ``delta``. ``fwhm`` is the full width at half power found by root
    finding on the continuous spectrum, in angular frequency.
    """
    freqs = np.asarray(freq_grid, dtype=float)
    if freqs.ndim != 1 or freqs.size < 3 or not np.all(np.diff(freqs) > 0):
        raise DomainError("freq_grid must be a strictly increasing 1-D array with >= 3 points")
    lo, hi = min(0.0, envelope.delta, leakage_freq), max(0.0, envelope.delta, leakage_freq)
    if freqs[0] > lo or freqs[-1] < hi:
        raise DomainError(
            f"freq_grid [{freqs[0]:g}, {freqs[-1]:g}] does not span [{lo:g}, {hi:g}] "
            "(ground-state line, carrier and leakage frequency)"
        )
    amp = fourier_integral(envelope, freqs - envelope.delta)
    peak_amp = float(abs(fourier_integral(envelope, [0.0])[0]))
    leak = float(abs(fourier_integral(envelope, [leakage_freq - envelope.delta])[0]))
    return SpectrumReport(
        freqs=freqs,
        amplitude=amp,
        peak_freq=float(freqs[int(np.argmax(np.abs(amp)))]),
        peak_amplitude=peak_amp,
        fwhm=2.0 * _half_power_offset(envelope),
        leakage_freq=leakage_freq,
        leakage_db=_db(leak / peak_amp),
    )


def _half_power_offset(envelope: PulseEnvelope) -> float:
    peak2 = abs(fourier_integral(envelope, [0.0])[0]) ** 2
    f = lambda nu: abs(fourier_integral(envelope, [nu])[0]) ** 2 - 0.5 * peak2
    return brentq(f, 0.0, main_lobe_halfwidth(envelope), xtol=1e-14 / envelope.duration, rtol=1e-14)


@dataclass(frozen=True)
class Resolution:
    fwhm: float  # ordinary frequency, cycles per time unit
    shape_constant: float  # fwhm * T


def energy_resolution(envelope: PulseEnvelope) -> Resolution:
    """Half-power full width of |S| in ordinary frequency (Hz when T is in seconds)."""
    fwhm = 2.0 * _half_power_offset(envelope) / (2.0 * math.pi)
    return Resolution(fwhm=fwhm, shape_constant=fwhm * envelope.duration)


def _cell_max(envelope: PulseEnvelope, center: float, halfwidth: float) -> float:
    nu = center + np.linspace(-halfwidth, halfwidth, 129)
    mags = np.abs(fourier_integral(envelope, nu))
    i = int(np.argmax(mags))
    a, b = nu[max(i - 1, 0)], nu[min(i + 1, nu.size - 1)]
    if b <= a:
        return float(mags[i])
    res = minimize_scalar(
        lambda x: -abs(fourier_integral(envelope, [x])[0]),
        bounds=(a, b),
        method="bounded",
        options={"xatol": 1e-10 * halfwidth},
    )
    return max(float(mags[i]), -float(res.fun))


def leakage_at_zero_energy(envelope: PulseEnvelope, resolution_cell: bool = True) -> float:
    """Ground-state leakage in dB (amplitude ratio, <= 0) relative to the peak.

    With ``resolution_cell`` the worst amplitude within +-pi/T of zero
    frequency is used. Any window of that width contains one sidelobe
    maximum, so the value tracks the sidelobe envelope and is not fooled
    by the exact spectral nulls every cosine-sum window has whenever
    delta*T is a multiple of 2 pi. ``resolution_cell=False`` returns the
    bare amplitude at exactly zero frequency.
    """
    T = envelope.duration
    if abs(envelope.delta) * T < 2.0 * math.pi - 1e-12:
        raise DomainError("delta * T must be at least 2 pi to separate the ground-state line")
    peak = abs(fourier_integral(envelope, [0.0])[0])
    if resolution_cell:
        leak = _cell_max(envelope, -envelope.delta, math.pi / T)
    else:
        leak = abs(fourier_integral(envelope, [-envelope.delta])[0])
    return min(0.0, _db(leak / peak))


def peak_sidelobe_db(envelope: PulseEnvelope, n_lobes: int = 40) -> float:
    """Highest sidelobe beyond the main lobe, in dB relative to the peak."""
    T = envelope.duration
    start = main_lobe_halfwidth(envelope)
    nu = np.linspace(start, start + 2.0 * math.pi * n_lobes / T, 64 * n_lobes + 1)
    mags = np.abs(fourier_integral(envelope, nu))
    i = int(np.argmax(mags))
    best = _cell_max(envelope, nu[i], 2.0 * math.pi / T / 64)
    peak = abs(fourier_integral(envelope, [0.0])[0])
    return _db(best / peak)


def time_domain_power(envelope: PulseEnvelope) -> float:
    """int_0^T g(t)^2 dt in closed form."""
    a = envelope.coefficients
    return envelope.g_peak ** 2 * envelope.duration * (a[0] ** 2 + 0.5 * sum(x * x for x in a[1:]))


def parseval_ratio(envelope: PulseEnvelope, span_cycles: float = 50.0) -> float:
    """(1/2pi) int |S|^2 d omega over int g^2 dt; 1 up to quadrature error.

    The frequency integral runs over |nu| <= 2 pi span_cycles / T with the
    trapezoid rule (exact for band-limited |S|^2 at this spacing) and adds
    the analytic tail of the leading 1/nu asymptote, which matters only for
    envelopes that jump at the pulse edges.
    """
    T = envelope.duration
    W = 2.0 * math.pi * span_cycles / T
    d_nu = 0.25 * math.pi / T
    n = int(math.ceil(W / d_nu))
    nu = np.linspace(-n * d_nu, n * d_nu, 2 * n + 1)
    p = np.abs(fourier_integral(envelope, nu)) ** 2
    body = d_nu * (p.sum() - 0.5 * (p[0] + p[-1]))
    g0 = float(envelope(0.0))
    gT = float(envelope(T))
    A, B = g0 * g0 + gT * gT, 2.0 * g0 * gT
    Wn = n * d_nu
    si, _ = sici(Wn * T)
    # int_W^inf (A - B cos(nu T)) / nu^2 d nu, both tails
    tail = 2.0 * (A / Wn - B * (math.cos(Wn * T) / Wn - T * (0.5 * math.pi - si)))
    return (body + tail) / (2.0 * math.pi) / time_domain_power(envelope)


def dft_spectrum(envelope: PulseEnvelope, n_samples: int = 4096, pad: int = 8) -> tuple[np.ndarray, np.ndarray]:
    """Zero-padded FFT estimate of S on its natural grid (cross-check only)."""
    T = envelope.duration
    dt = T / n_samples
    t = (np.arange(n_samples) + 0.5) * dt
    base = envelope(t).astype(complex) * dt
    n_fft = pad * n_samples
    spec = np.fft.ifft(base, n_fft) * n_fft  # sum_n x_n exp(+i w t_n) up to the half-sample phase
    nu = 2.0 * math.pi * np.fft.fftfreq(n_fft, d=dt)
    spec = spec * np.exp(0.5j * nu * dt)
    order = np.argsort(nu)
    return nu[order] + envelope.delta, spec[order]
