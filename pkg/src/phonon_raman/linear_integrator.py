"""Adaptive integrator for small linear systems ``dpsi/dt = A(t) psi``.

The scheme is the fourth-order two-point Gauss-Legendre Magnus method,

    Omega = h/2 (A1 + A2) + sqrt(3) h^2 / 12 [A2, A1],
    psi(t + h) = expm(Omega) psi(t),

with local error estimated by step doubling. Because every step is a
matrix exponential of an element of the system's Lie algebra, unitary
(hermitian-generator) problems stay unitary to rounding error and
Bogoliubov problems keep their symplectic norm. Large constant parts of
the generator, such as a far-detuned excited level, are integrated
exactly, so step sizes are set by how fast ``A(t)`` varies rather than by
the largest frequency in the problem.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import expm

from .errors import DomainError, IntegrationError

DEFAULT_TOL = 1e-10
MAX_DIM = 64

_GL_OFFSET = math.sqrt(3.0) / 6.0
_COMM_COEF = math.sqrt(3.0) / 12.0
_ROUNDOFF = 8.0 * np.finfo(float).eps


@dataclass(frozen=True)
class LinearSystem:
    """``dpsi/dt = generator(t) @ psi``.

    Set ``hermitian=True`` when ``generator(t) = -1j * H(t)`` with ``H``
    hermitian; the exponential is then taken through ``eigh``, which keeps
    the propagator unitary to machine precision.
    """

    generator: Callable[[float], np.ndarray]
    dim: int
    hermitian: bool = False

    def __post_init__(self):
        if not 1 <= self.dim <= MAX_DIM:
            raise DomainError(f"dimension must be in [1, {MAX_DIM}], got {self.dim}")


def _expm2(a: np.ndarray) -> np.ndarray:
    """exp of a 2x2 matrix: e^{tr/2} (cosh(s) I + sinh(s)/s B), B = A - tr/2, s^2 = -det B."""
    a00, a01, a10, a11 = complex(a[0, 0]), complex(a[0, 1]), complex(a[1, 0]), complex(a[1, 1])
    half_tr = 0.5 * (a00 + a11)
    b00 = a00 - half_tr
    s = cmath.sqrt(b00 * b00 + a01 * a10)
    if abs(s) < 1e-4:
        s2 = s * s
        ch = 1.0 + s2 / 2.0 * (1.0 + s2 / 12.0)
        sh = 1.0 + s2 / 6.0 * (1.0 + s2 / 20.0)
    else:
        ch = cmath.cosh(s)
        sh = cmath.sinh(s) / s
    e = cmath.exp(half_tr)
    return np.array([[e * (ch + sh * b00), e * sh * a01], [e * sh * a10, e * (ch - sh * b00)]])


def _exp_step(omega: np.ndarray, hermitian: bool) -> np.ndarray:
    if omega.shape == (2, 2):
        return _expm2(omega)
    if hermitian:
        # omega = -i K with K hermitian
        k = 1j * omega
        k = 0.5 * (k + k.conj().T)
        w, v = np.linalg.eigh(k)
        return (v * np.exp(-1j * w)) @ v.conj().T
    return expm(omega)


def magnus_propagator(system: LinearSystem, t: float, h: float) -> np.ndarray:
    """Fourth-order Magnus propagator from ``t`` to ``t + h``."""
    a1 = np.asarray(system.generator(t + (0.5 - _GL_OFFSET) * h), dtype=complex)
    a2 = np.asarray(system.generator(t + (0.5 + _GL_OFFSET) * h), dtype=complex)
    omega = 0.5 * h * (a1 + a2) + _COMM_COEF * h * h * (a2 @ a1 - a1 @ a2)
    return _exp_step(omega, system.hermitian)


def integrate(
    system: LinearSystem,
    psi0,
    t_eval,
    tol: float = DEFAULT_TOL,
    h0: float | None = None,
    max_steps: int = 2_000_000,
) -> np.ndarray:
    """Integrate from ``t_eval[0]`` and return the state at every ``t_eval``.

    ``t_eval`` must be strictly increasing. ``tol`` is an absolute error
    target (state 2-norm) for the whole span: each step may contribute at
    most ``tol * step / span``. Output times are
    hit exactly, never interpolated. Returns an array of shape
    ``(len(t_eval), dim)``.
    """
    if not 1e-13 <= tol <= 1e-6:
        raise DomainError(f"tol must lie in [1e-13, 1e-6], got {tol}")
    psi = np.array(psi0, dtype=complex).reshape(-1)
    if psi.shape[0] != system.dim:
        raise DomainError(f"psi0 has length {psi.shape[0]}, system dimension is {system.dim}")
    if not np.all(np.isfinite(psi)):
        raise DomainError("psi0 must be finite")
    t_eval = np.asarray(t_eval, dtype=float).reshape(-1)
    if t_eval.size == 0:
        raise DomainError("t_eval is empty")
    if t_eval.size > 1 and not np.all(np.diff(t_eval) > 0):
        raise DomainError("t_eval must be strictly increasing")

    out = np.empty((t_eval.size, system.dim), dtype=complex)
    out[0] = psi
    t = float(t_eval[0])
    span = float(t_eval[-1] - t_eval[0])
    if span == 0.0:
        return out
    h = h0 if h0 is not None else span / 64.0
    h_min = 1e-14 * max(1.0, abs(t), abs(float(t_eval[-1])))
    steps = 0

    for i in range(1, t_eval.size):
        target = float(t_eval[i])
        while t < target:
            last = False
            step = h
            if t + step >= target or target - (t + step) < 1e-12 * step:
                step = target - t
                last = True
            full = magnus_propagator(system, t, step) @ psi
            half = magnus_propagator(system, t, 0.5 * step) @ psi
            half = magnus_propagator(system, t + 0.5 * step, 0.5 * step) @ half
            if not np.all(np.isfinite(half)):
                raise IntegrationError("non-finite state", t)
            err = float(np.linalg.norm(half - full)) / 15.0
            # error per unit step: local errors over the span sum to ~tol,
            # but never ask for less than round-off can deliver
            local_tol = max(tol * max(step / span, 1e-6), _ROUNDOFF)
            if err <= local_tol:
                t = target if last else t + step
                psi = half
                factor = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * (local_tol / err) ** 0.25))
                # A truncated final step says nothing about the natural step size.
                if not last or factor < 1.0:
                    h = step * factor
            else:
                h = step * max(0.2, 0.9 * (local_tol / err) ** 0.25)
                if h < h_min:
                    raise IntegrationError("step size underflow", t)
            steps += 1
            if steps > max_steps:
                raise IntegrationError("maximum number of steps exceeded", t)
        out[i] = psi
    return out


def hermitian_system(hamiltonian: Callable[[float], np.ndarray], dim: int) -> LinearSystem:
    """Schrödinger system ``i dpsi/dt = H(t) psi``."""
    return LinearSystem(lambda t: -1j * np.asarray(hamiltonian(t)), dim, hermitian=True)
