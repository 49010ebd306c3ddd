"""Two-mode Fock-space dynamics of the phonon/atom beam splitter.

H = g (zeta^dag a + a^dag zeta) + delta_offset zeta^dag zeta conserves the
total excitation number n_a + n_zeta, so the truncated space
{n_a + n_zeta <= N_max} splits into sectors of dimension n + 1 that are
diagonalised independently. At resonance, a pulse with g T = pi/2 maps
|n, 0> onto |0, n> up to a phase for every n.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError

MAX_TRUNCATION = 64


def fock_basis(n_max: int) -> list[tuple[int, int]]:
    """Basis states (n_a, n_zeta) ordered by total number, then by n_zeta."""
    return [(n - nz, nz) for n in range(n_max + 1) for nz in range(n + 1)]


def _sector_offset(n: int) -> int:
    return n * (n + 1) // 2


@dataclass(frozen=True)
class FockState2:
    """Amplitudes ``amplitudes[n_a, n_zeta]``; entries with n_a + n_zeta > n_max must vanish."""

    amplitudes: np.ndarray
    n_max: int

    def __post_init__(self):
        if not 1 <= self.n_max <= MAX_TRUNCATION:
            raise DomainError(f"n_max must be in [1, {MAX_TRUNCATION}]")
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.shape != (self.n_max + 1, self.n_max + 1):
            raise DomainError(f"amplitudes must have shape {(self.n_max + 1,) * 2}")
        na, nz = np.indices(amp.shape)
        if np.any(amp[na + nz > self.n_max] != 0):
            raise DomainError("state has support beyond the truncation n_a + n_zeta <= n_max")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def basis_state(cls, n_a: int, n_zeta: int, n_max: int) -> "FockState2":
        if n_a < 0 or n_zeta < 0:
            raise DomainError("occupation numbers must be non-negative")
        if n_a + n_zeta > n_max:
            raise DomainError(f"|{n_a}, {n_zeta}> lies outside the truncation n_max = {n_max}")
        amp = np.zeros((n_max + 1, n_max + 1), dtype=complex)
        amp[n_a, n_zeta] = 1.0
        return cls(amp, n_max)

    @classmethod
    def from_dict(cls, coeffs: dict[tuple[int, int], complex], n_max: int, normalize: bool = True) -> "FockState2":
        amp = np.zeros((n_max + 1, n_max + 1), dtype=complex)
        for (na, nz), c in coeffs.items():
            if na < 0 or nz < 0 or na + nz > n_max:
                raise DomainError(f"|{na}, {nz}> lies outside the truncation n_max = {n_max}")
            amp[na, nz] = c
        if normalize:
            norm = np.linalg.norm(amp)
            if norm == 0:
                raise DomainError("zero state")
            amp = amp / norm
        return cls(amp, n_max)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def to_vector(self) -> np.ndarray:
        return np.array([self.amplitudes[na, nz] for na, nz in fock_basis(self.n_max)])

    @classmethod
    def from_vector(cls, vec: np.ndarray, n_max: int) -> "FockState2":
        amp = np.zeros((n_max + 1, n_max + 1), dtype=complex)
        for c, (na, nz) in zip(vec, fock_basis(n_max)):
            amp[na, nz] = c
        return cls(amp, n_max)

    def sector_probabilities(self) -> np.ndarray:
        p = np.abs(self.amplitudes) ** 2
        return np.array([np.trace(np.fliplr(p), offset=self.n_max - n) for n in range(self.n_max + 1)])

    def probability(self, n_a: int, n_zeta: int) -> float:
        return float(abs(self.amplitudes[n_a, n_zeta]) ** 2)


@dataclass(frozen=True)
class FockHamiltonian:
    matrix: np.ndarray
    n_max: int
    g_eff: float
    delta_offset: float

    @cached_property
    def sectors(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """Eigen-decomposition (energies, vectors) of every excitation sector."""
        out = []
        for n in range(self.n_max + 1):
            s = slice(_sector_offset(n), _sector_offset(n + 1))
            out.append(np.linalg.eigh(self.matrix[s, s]))
        return out


def build_hamiltonian(g_eff: float, delta_offset: float, n_max: int) -> FockHamiltonian:
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    if n_max > MAX_TRUNCATION:
        raise DomainError(f"n_max above {MAX_TRUNCATION} is not supported")
    basis = fock_basis(n_max)
    index = {state: i for i, state in enumerate(basis)}
    H = np.zeros((len(basis), len(basis)), dtype=float)
    for i, (na, nz) in enumerate(basis):
        H[i, i] = delta_offset * nz
        if na > 0:
            # zeta^dag a |na, nz> = sqrt(na (nz + 1)) |na - 1, nz + 1>
            j = index[(na - 1, nz + 1)]
            H[j, i] = H[i, j] = g_eff * np.sqrt(na * (nz + 1))
    return FockHamiltonian(H, n_max, float(g_eff), float(delta_offset))


def evolve_fock(state: FockState2, H: FockHamiltonian, T: float) -> FockState2:
    if T < 0:
        raise DomainError("evolution time must be non-negative")
    if state.n_max != H.n_max:
        raise DomainError("state and Hamiltonian use different truncations")
    if abs(state.norm - 1.0) > 1e-10:
        raise DomainError(f"state must be normalized, norm = {state.norm}")
    vec = state.to_vector()
    out = np.empty_like(vec)
    for n, (w, v) in enumerate(H.sectors):
        s = slice(_sector_offset(n), _sector_offset(n + 1))
        out[s] = v @ (np.exp(-1j * w * T) * (v.conj().T @ vec[s]))
    return FockState2.from_vector(out, state.n_max)


@dataclass(frozen=True)
class CountingResult:
    probabilities: np.ndarray  # P(n_zeta = j), j = 0..n_max
    mean: float
    variance: float

    def to_dict(self) -> dict:
        return {
            "probabilities": [float(p) for p in self.probabilities],
            "mean": self.mean,
            "variance": self.variance,
        }


def count(state: FockState2) -> CountingResult:
    """Distribution of the number of transferred (component-2) atoms."""
    p = (np.abs(state.amplitudes) ** 2).sum(axis=0)
    n = np.arange(p.size)
    mean = float(p @ n)
    var = float(p @ (n - mean) ** 2)
    return CountingResult(probabilities=p, mean=mean, variance=max(var, 0.0))


def count_phonons(state: FockState2) -> CountingResult:
    """Same statistics for the phonon mode."""
    p = (np.abs(state.amplitudes) ** 2).sum(axis=1)
    n = np.arange(p.size)
    mean = float(p @ n)
    return CountingResult(probabilities=p, mean=mean, variance=max(float(p @ (n - mean) ** 2), 0.0))
