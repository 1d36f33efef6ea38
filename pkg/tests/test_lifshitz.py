import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.constants import c, hbar
from scipy.integrate import dblquad

from casimir_mirrors.asymptotics import plasma_wavelength
from casimir_mirrors.dispersion import Cavity, Mirror, OscillatorModel, plasma_mirror
from casimir_mirrors.errors import ConvergenceError
from casimir_mirrors.fresnel import Polarization, WaveKinematics, reflection
from casimir_mirrors.lifshitz import (
    QuadratureSpec,
    casimir_energy,
    casimir_force,
    ideal_casimir_energy,
    ideal_casimir_force,
)

WE = 1e16
TIGHT = QuadratureSpec(rel_tol=1e-10)


def _kappa_omega_oracle(a: Mirror, b: Mirror, L: float) -> float:
    """Force from the (kappa, omega) form with its coupled upper limit, via scipy."""
    def integrand(W, K, pol):
        kin = WaveKinematics(W * c / L, K / L)
        rr = reflection(a, pol, kin) * reflection(b, pol, kin)
        return K * K * rr / (math.exp(2 * K) - rr)

    total = 0.0
    for pol in Polarization:
        val, _ = dblquad(lambda W, K: integrand(W, K, pol), 0.0, 40.0, 0.0, lambda K: K,
                         epsabs=1e-13, epsrel=1e-10)
        total += val
    return -hbar * c / (2 * math.pi ** 2 * L ** 4) * total


def test_ideal_force_one_micron():
    # CODATA hbar and c in 30-digit arithmetic: -1.30013e-3 N/m^2
    import mpmath as mp
    mp.mp.dps = 30
    exact = -mp.mpf(hbar) * mp.mpf(c) * mp.pi ** 2 / (240 * mp.mpf("1e-6") ** 4)
    assert ideal_casimir_force(1e-6) == pytest.approx(float(exact), rel=1e-14)
    assert ideal_casimir_force(1e-6) == pytest.approx(-1.30013e-3, rel=1e-5)


def test_ideal_scaling():
    assert ideal_casimir_force(2e-6) == pytest.approx(ideal_casimir_force(1e-6) / 16, rel=1e-15)
    for L in (1e-8, 3e-7, 2e-5):
        assert ideal_casimir_energy(L) / ideal_casimir_force(L) == pytest.approx(L / 3, rel=1e-14)


@pytest.mark.parametrize("pair", [
    (plasma_mirror(omega_e=WE), plasma_mirror(omega_e=0.7 * WE)),
    (plasma_mirror(omega_e=WE), plasma_mirror(omega_m=WE)),
    (plasma_mirror(omega_e=WE, omega_m=1.2 * WE), plasma_mirror(omega_e=WE)),
    (Mirror(OscillatorModel(WE, 2e15, 1e14)), Mirror(OscillatorModel(0.5 * WE, 0.0, 3e14))),
])
@pytest.mark.parametrize("Lam", [0.3, 3.0])
def test_matches_independent_oracle(pair, Lam):
    cav = Cavity.from_Lambda(*pair, Lam)
    got = casimir_force(cav, TIGHT).force_per_area
    assert got == pytest.approx(_kappa_omega_oracle(*pair, cav.separation), rel=1e-7)


def test_near_perfect_mirrors():
    m = plasma_mirror(omega_e=WE)
    rep = casimir_force(Cavity.from_Lambda(m, m, 1e3))
    assert rep.eta_force == pytest.approx(1.0, rel=1e-2)
    assert rep.eta_energy == pytest.approx(1.0, rel=1e-2)


def test_long_distance_dielectric_formula():
    m = plasma_mirror(omega_e=WE)
    lam = plasma_wavelength(WE)
    L = 50 * lam
    eta = casimir_force(Cavity(m, m, L), TIGHT).eta_force
    assert eta == pytest.approx(1 - 4 / (3 * math.pi) * 2 * lam / L, rel=5e-3)


def test_magnetodielectric_repulsion_at_large_lambda():
    a = plasma_mirror(omega_e=WE, omega_m=1.2 * WE)
    b = plasma_mirror(omega_e=WE)
    assert casimir_force(Cavity.from_Lambda(a, b, 100.0)).eta_force < 0
    assert casimir_force(Cavity.from_Lambda(a, b, 0.1)).eta_force > 0


def test_vacuum_mirrors():
    cav = Cavity(Mirror(), Mirror(), 1e-7)
    rep = casimir_force(cav)
    assert rep.force_per_area == 0.0 and rep.energy_per_area == 0.0
    assert casimir_energy(cav) == 0.0


def test_report_fields():
    m = plasma_mirror(omega_e=WE)
    rep = casimir_force(Cavity.from_Lambda(m, m, 1.0))
    assert rep.eta_force == rep.force_per_area / ideal_casimir_force(rep.separation)
    assert rep.abs_error_estimate >= 0
    parts = rep.polarization_breakdown
    assert parts[Polarization.TE] + parts[Polarization.TM] == pytest.approx(rep.force_per_area, rel=1e-15)


def test_energy_consistent():
    m = plasma_mirror(omega_e=WE)
    cav = Cavity.from_Lambda(m, m, 1.0)
    assert casimir_energy(cav, TIGHT) == pytest.approx(casimir_force(cav, TIGHT).energy_per_area, rel=1e-9)


def test_nonconvergence_signalled():
    m = plasma_mirror(omega_e=WE)
    with pytest.raises(ConvergenceError):
        casimir_force(Cavity.from_Lambda(m, m, 1.0), QuadratureSpec(rel_tol=1e-12, max_subdivisions=2))


def test_invalid_spec():
    with pytest.raises(ValueError):
        QuadratureSpec(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=-1.0)


def _finite_difference(cav, spec):
    L = cav.separation
    h = 1e-3 * L
    e_lo = casimir_energy(cav.with_separation(L - h), spec)
    e_hi = casimir_energy(cav.with_separation(L + h), spec)
    return (e_lo - e_hi) / (2 * h)


strength = st.floats(0.05, 5.0)
models = st.builds(
    lambda s, w0, g: OscillatorModel(s * WE, w0 * WE, g * WE),
    strength, st.sampled_from([0.0, 0.3]), st.sampled_from([0.0, 0.05]),
)
mirrors = st.builds(Mirror, models, st.just(OscillatorModel()) | models)


@given(mirrors, mirrors, st.floats(-2.0, 2.0))
@settings(max_examples=20, deadline=None)
def test_force_is_minus_energy_derivative(a, b, log_lam):
    cav = Cavity.from_Lambda(a, b, 10 ** log_lam)
    f = casimir_force(cav, TIGHT).force_per_area
    assert _finite_difference(cav, TIGHT) == pytest.approx(f, rel=1e-4)


@given(mirrors, mirrors, st.floats(-2.0, 2.0))
@settings(max_examples=20, deadline=None)
def test_swap_symmetry_exact(a, b, log_lam):
    cav = Cavity.from_Lambda(a, b, 10 ** log_lam)
    assert casimir_force(cav).force_per_area == casimir_force(cav.swapped()).force_per_area


@given(strength, strength, st.floats(-2.0, 2.0))
@settings(max_examples=20, deadline=None)
def test_nonmagnetic_always_attractive(sa, sb, log_lam):
    a, b = plasma_mirror(omega_e=sa * WE), plasma_mirror(omega_e=sb * WE)
    assert casimir_force(Cavity.from_Lambda(a, b, 10 ** log_lam)).eta_force > 0


@given(strength, st.floats(1.05, 3.0), strength, st.floats(-8.0, -5.0))
@settings(max_examples=20, deadline=None)
def test_more_reflective_mirror_attracts_more(sa, factor, sb, log_L):
    L = 10 ** log_L
    b = plasma_mirror(omega_e=sb * WE)
    weak = casimir_force(Cavity(plasma_mirror(omega_e=sa * WE), b, L)).force_per_area
    strong = casimir_force(Cavity(plasma_mirror(omega_e=factor * sa * WE), b, L)).force_per_area
    assert strong < weak < 0
