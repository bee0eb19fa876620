import cmath
import math

import pytest

import hopath


def unit(wt_over_pi, xi=0.0, xf=0.0):
    return hopath.OscillatorConfig(time=wt_over_pi * math.pi, x_initial=xi, x_final=xf)


def mehler(c):
    wt = c.omega * c.time
    s = math.sin(wt)
    m = math.floor(wt / math.pi)
    pref = math.sqrt(c.mass * c.omega / (2 * math.pi * c.hbar * abs(s)))
    action = c.mass * c.omega / (2 * s) * (math.cos(wt) * (c.x_initial**2 + c.x_final**2) - 2 * c.x_initial * c.x_final)
    return pref * cmath.exp(1j * (action / c.hbar - math.pi / 4 - m * math.pi / 2))


def test_sigma_matches_definition():
    c = unit(2.5)
    n = 64
    assert abs(hopath.sigma(c, n) - (1 + 1j * c.omega * c.time / (2 * n)) ** n) < 1e-12


def test_discrete_kernel_frozen_value():
    c = unit(2.5, 0.3, -0.7)
    k = hopath.discrete_kernel(c, 64)
    assert isinstance(k, hopath.RegularKernel)
    expected = complex(-0.29733686250454932333, 0.19164912347030384905)
    assert abs(k.amplitude - expected) < 1e-12 * abs(expected)
    assert k.maslov_index == 2


def test_kernel_approaches_mehler():
    c = hopath.OscillatorConfig(mass=2.0, omega=0.7, hbar=1.3, time=5.1, x_initial=-0.4, x_final=1.1)
    closed = mehler(c)
    assert abs(hopath.closed_form_kernel(c).amplitude - closed) < 1e-12 * abs(closed)
    errors = [abs(hopath.discrete_kernel(c, n).amplitude - closed) for n in (256, 1024, 4096)]
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] < 1e-3 * abs(closed)


def test_spectrum_counts_negative_eigenvalues():
    s = hopath.analyze(unit(2.5), 512)
    assert s.negative_count == 2
    assert sum(1 for lam in s.eigenvalues if lam < 0) == 2


def test_caustic_is_a_delta():
    k = hopath.closed_form_kernel(unit(2.0))
    assert isinstance(k, hopath.CausticDelta)
    assert k.m_index == 2 and k.parity == 1
    with pytest.raises(hopath.CausticProximity):
        hopath.discrete_kernel(unit(2.0), 128)


def test_delta_limit():
    c = unit(1.0)
    f = hopath.GaussianPacket(0.5, 1.0)
    study = hopath.delta_limit_study(c, f, 0.3)
    assert study.converged_steps > 0
    assert abs(study.reference - (-1j) * f(-0.3)) < 1e-14
    assert study.rows[-1].deviation < 1e-3


def test_fresnel_oracle_agrees():
    c = hopath.OscillatorConfig(time=1.0, x_initial=0.2, x_final=0.4)
    r = hopath.brute_force_fresnel(c, 3)
    assert abs(r.value - complex(0.28695965359206568413, -0.30479563927215972344)) < 1e-6


def test_invalid_arguments_raise():
    with pytest.raises(hopath.InvalidArgument):
        hopath.OscillatorConfig(mass=-1.0)
    with pytest.raises(hopath.Error):
        hopath.GaussianPacket(0.0, 0.0)
