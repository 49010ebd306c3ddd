import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from phonon_raman.errors import DomainError
from phonon_raman.lambda_system import (
    EffectiveTwoLevel,
    LambdaLevels,
    RamanDrive,
    adiabatic_eliminate,
    compare_adiabatic,
    effective_rabi_period,
    evolve_effective_two_level,
    evolve_three_level,
)

PSI0 = np.array([1.0, 0.0, 0.0], dtype=complex)


def scaled_drive(r, delta=0.0):
    """Omega/Delta = r with Omega^2/Delta = 1."""
    return RamanDrive(1.0 / r, 1.0 / r, 1.0 / r ** 2, delta, 0.0)


def test_levels_must_be_ordered():
    LambdaLevels(0.0, 1.0, 5.0)
    with pytest.raises(DomainError):
        LambdaLevels(0.0, 2.0, 1.0)


def test_drive_validation_and_warning():
    with pytest.raises(DomainError):
        RamanDrive(1.0, 1.0, 0.0)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        RamanDrive(0.5, 0.5, 1.0)
    assert caught
    assert RamanDrive(1.0, 2.0, 100.0).adiabaticity == pytest.approx(0.02)


def test_free_slow_frame():
    psi0 = np.array([0.6, 0.8j, 0.0])
    out = evolve_three_level(None, RamanDrive(0.0, 0.0, 10.0, 0.3), psi0, np.linspace(0, 5, 6))
    assert np.allclose(out, psi0)


@pytest.mark.parametrize("Omega, Delta", [(0.5, 3.0), (1.0, 1.0), (0.2, 5.0)])
def test_single_drive_detuned_rabi(Omega, Delta):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        drive = RamanDrive(Omega, 0.0, Delta)
    W = math.hypot(Omega, 0.5 * Delta)
    t = np.linspace(0, math.pi / W, 201)
    p3 = np.abs(evolve_three_level(None, drive, PSI0, t, tol=1e-12)[:, 2]) ** 2
    oracle = Omega ** 2 / W ** 2 * np.sin(W * t) ** 2
    assert np.max(np.abs(p3 - oracle)) < 1e-10
    assert p3.max() == pytest.approx(Omega ** 2 / (Omega ** 2 + Delta ** 2 / 4), abs=1e-6)


def test_equal_drives_follow_effective_coupling():
    r = 1e-2
    drive = scaled_drive(r)
    t = np.linspace(0, math.pi, 201)
    out = evolve_three_level(None, drive, PSI0, t)
    p2 = np.abs(out[:, 1]) ** 2
    assert np.max(np.abs(p2 - np.sin(t) ** 2)) < 5 * r
    assert np.max(np.abs(out[:, 2]) ** 2) <= 4 * r ** 2


def test_eliminate_equal_magnitudes():
    eff = adiabatic_eliminate(RamanDrive(3.0, 3.0j, 100.0, 0.2))
    assert eff.shift1 == eff.shift2 == pytest.approx(0.09)
    assert eff.delta_eff == pytest.approx(0.2)
    assert abs(eff.coupling) == pytest.approx(0.09)


def test_eliminate_one_drive_off():
    eff = adiabatic_eliminate(RamanDrive(0.0, 1.0, 100.0))
    assert eff.coupling == 0 and eff.shift1 == 0


def test_eliminate_unequal_drives():
    eff = adiabatic_eliminate(RamanDrive(2.0, 1.0, 100.0, 0.0))
    assert eff.coupling == pytest.approx(0.02)
    # magnitude 0.03; the level-2 light shift enters with a positive sign
    assert eff.delta_eff == pytest.approx(-0.03)
    assert abs(eff.delta_eff) == pytest.approx(0.03)


def test_effective_detuning_sign_against_three_levels():
    """Choosing delta to cancel the light-shift difference restores full transfer."""
    O1, O2, D = 0.1, 0.05, 1.0
    shift = (O1 ** 2 - O2 ** 2) / D
    period = math.pi / (O1 * O2 / D)
    t = np.linspace(0, 0.5 * period, 401)

    def max_p2(delta):
        out = evolve_three_level(None, RamanDrive(O1, O2, D, delta), PSI0, t, tol=1e-8)
        return float(np.max(np.abs(out[:, 1]) ** 2))

    assert adiabatic_eliminate(RamanDrive(O1, O2, D, shift)).delta_eff == pytest.approx(0.0, abs=1e-15)
    assert max_p2(shift) > 0.99
    assert max_p2(-shift) < 0.5


@given(st.floats(0.01, 5), st.floats(-5, 5), st.floats(0, 2 * math.pi))
def test_coupling_magnitude_invariant(a, b, phi):
    eff = adiabatic_eliminate(RamanDrive(a * np.exp(1j * phi), b, 100.0))
    assert abs(eff.coupling) == pytest.approx(abs(a) * abs(b) / 100.0, rel=1e-12)


def test_effective_two_level_cases():
    t = np.linspace(0, 3, 31)
    eff = EffectiveTwoLevel(0.3, 0.1, 0.0, 0.0)
    out = evolve_effective_two_level(eff, [0.6, 0.8], t)
    assert np.allclose(np.abs(out), [0.6, 0.8])
    c = 0.7
    out = evolve_effective_two_level(EffectiveTwoLevel(0, 0, c, 0.0), [1, 0], t, tol=1e-12)
    assert np.max(np.abs(np.abs(out[:, 1]) ** 2 - np.sin(c * t) ** 2)) < 1e-10
    tt = np.linspace(0, 2 * math.pi / math.hypot(c, c), 801)
    out = evolve_effective_two_level(EffectiveTwoLevel(0, 0, c, 2 * c), [1, 0], tt, tol=1e-12)
    assert np.max(np.abs(out[:, 1]) ** 2) == pytest.approx(0.5, abs=1e-5)


def test_rabi_period():
    assert effective_rabi_period(RamanDrive(10.0, 10.0, 100.0)) == pytest.approx(math.pi)
    with pytest.raises(DomainError):
        effective_rabi_period(RamanDrive(0.0, 10.0, 100.0))


def test_norm_conservation():
    drive = RamanDrive(2.0, 1.0 + 1.0j, 40.0, 0.05)
    out = evolve_three_level(None, drive, PSI0, np.linspace(0, 10, 21), tol=1e-10)
    assert np.max(np.abs(np.sum(np.abs(out) ** 2, axis=1) - 1)) <= 10 * 1e-10


def test_gauge_covariance():
    drive = RamanDrive(2.0, 1.5, 40.0, 0.05)
    t = np.linspace(0, 8, 9)
    p = np.abs(evolve_three_level(None, drive, PSI0, t, tol=1e-11)) ** 2
    q = np.abs(evolve_three_level(None, drive.with_phase(1.1), PSI0, t, tol=1e-11)) ** 2
    assert np.max(np.abs(p - q)) <= 1e-10


def test_compare_adiabatic_examples():
    t = np.linspace(0, math.pi, 401)
    d1 = compare_adiabatic(None, scaled_drive(1e-2), PSI0, t)
    d2 = compare_adiabatic(None, scaled_drive(5e-3), PSI0, t)
    assert d1 <= 5e-2
    assert d2 <= 0.5 * d1
    assert compare_adiabatic(None, RamanDrive(0.0, 0.0, 1.0), PSI0, t) == 0.0


def test_normalization_required():
    with pytest.raises(DomainError):
        evolve_three_level(None, RamanDrive(1.0, 1.0, 100.0), [1.0, 1.0, 0.0], [0, 1])
