"""Theta series and eta: classical constants, functional equations, identity
of the two evaluation paths at split-CM points."""

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mpf

from splitcm.errors import InputError
from splitcm.hecke import HeckeContext
from splitcm.quadratic import QuadForm, QuadIdeal, heegner_point, reduced_forms
from splitcm.theta import (
    SplitCMPoint,
    dedekind_eta,
    eta_ideal,
    eta_norm_factor,
    representation_counts,
    siegel_theta,
    symplectic_theta_splitcm,
    theta_form,
    theta_hat,
)

upper_half = st.builds(
    mpmath.mpc,
    st.floats(min_value=-2, max_value=2, allow_nan=False),
    st.floats(min_value=0.15, max_value=2.5, allow_nan=False),
)


def test_theta_square_form_gauss_constant():
    # sum over Z^2 of e^(-pi(m^2+n^2)) = sqrt(pi)/Gamma(3/4)^2
    v = theta_form(QuadForm(1, 0, 1), mpmath.mpc(0, "0.5"), 60)
    with mpmath.workdps(80):
        want = mpmath.sqrt(mpmath.pi) / mpmath.gamma(mpf(3) / 4) ** 2
        assert abs(v.to_mpc() - want) < mpf(10) ** -55


def test_theta_diagonal_form_is_jtheta_product():
    tau = mpmath.mpc("0.3", "0.8")
    v = theta_form(QuadForm(2, 0, 3), tau, 60)
    with mpmath.workdps(80):
        q = mpmath.exp(2j * mpmath.pi * tau)
        want = mpmath.jtheta(3, 0, q**2) * mpmath.jtheta(3, 0, q**3)
        assert abs(v.to_mpc() - want) < mpf(10) ** -55


def test_representation_counts_brute_force():
    for Q in (QuadForm(1, 1, 2), QuadForm(2, 1, 3), QuadForm(3, -1, 5)):
        r = representation_counts(Q, 50)
        brute = [0] * 51
        for m in range(-40, 41):
            for n in range(-40, 41):
                k = Q.value(m, n)
                if k <= 50:
                    brute[k] += 1
        assert r == brute, Q


def test_theta_rejects_lower_half_plane():
    with pytest.raises(InputError):
        theta_form(QuadForm(1, 1, 2), mpmath.mpc(0, -1), 40)
    with pytest.raises(InputError):
        dedekind_eta(mpmath.mpc("0.3", 0), 40)


@given(upper_half)
@settings(max_examples=25, deadline=None)
def test_theta_precision_doubling(tau):
    # halving the tail target must not move the value at base precision
    Q = QuadForm(1, 1, 2)
    lo = theta_form(Q, tau, 40)
    hi = theta_form(Q, tau, 70)
    assert lo.distance(hi) < mpf(10) ** -38


def test_dedekind_eta_at_i():
    v = dedekind_eta(mpmath.mpc(0, 1), 60)
    with mpmath.workdps(80):
        want = mpmath.gamma(mpf(1) / 4) / (2 * mpmath.pi ** mpf("0.75"))
        assert abs(v.to_mpc() - want) < mpf(10) ** -55


@given(upper_half)
@settings(max_examples=25, deadline=None)
def test_eta_translation_law(z):
    with mpmath.workdps(70):
        lhs = dedekind_eta(z + 1, 50).to_mpc()
        rhs = mpmath.exp(1j * mpmath.pi / 12) * dedekind_eta(z, 50).to_mpc()
        assert abs(lhs - rhs) < mpf(10) ** -42


@given(upper_half)
@settings(max_examples=25, deadline=None)
def test_eta_inversion_law(z):
    with mpmath.workdps(70):
        lhs = dedekind_eta(-1 / z, 50).to_mpc()
        rhs = mpmath.sqrt(-1j * z) * dedekind_eta(z, 50).to_mpc()
        assert abs(lhs - rhs) < mpf(10) ** -42


def test_siegel_theta_diagonal_product():
    z11, z22 = mpmath.mpc("0.2", "1.1"), mpmath.mpc("-0.4", "0.7")
    v = siegel_theta(z11, 0, z22, 60)
    with mpmath.workdps(80):
        want = mpmath.jtheta(3, 0, mpmath.exp(1j * mpmath.pi * z11)) * mpmath.jtheta(
            3, 0, mpmath.exp(1j * mpmath.pi * z22)
        )
        assert abs(v.to_mpc() - want) < mpf(10) ** -55


def test_siegel_theta_needs_positive_imaginary_part():
    with pytest.raises(InputError):
        siegel_theta(mpmath.mpc(0, 1), mpmath.mpc(0, 2), mpmath.mpc(0, 1), 40)
    with pytest.raises(InputError):
        siegel_theta(mpmath.mpc(0, -1), 0, mpmath.mpc(0, 1), 40)


def test_splitcm_point_checks_disc():
    ctx = HeckeContext(-7, 11, prec=40)
    pt = heegner_point(ctx, ctx.class_rep)
    with pytest.raises(InputError):
        SplitCMPoint(QuadForm(1, 1, 2), pt)  # disc -7, level wants -11
    SplitCMPoint(QuadForm(1, 1, 3), pt)


def test_two_theta_paths_agree_at_cm_points():
    # the lattice q-series and the Siegel box sum are independent programs
    for D, N in [(-7, 11), (-11, 23)]:
        ctx = HeckeContext(D, N, prec=80)
        pt = heegner_point(ctx, ctx.class_rep)
        for Q in reduced_forms(-N):
            a = theta_form(Q, pt, 80)
            b = symplectic_theta_splitcm(SplitCMPoint(Q, pt), 80)
            assert a.distance(b) < mpf(10) ** -70, (D, N, Q)


def test_eta_ideal_prefactor_is_unimodular():
    ideal = QuadIdeal(2, 1, -7)
    v = eta_ideal(ideal, 50)
    with mpmath.workdps(70):
        tau = (-1 + mpmath.sqrt(mpmath.mpf(-7))) / 4
        want = abs(dedekind_eta(mpmath.mpc(tau), 50).to_mpc())
        assert abs(v.abs_value() - want) < mpf(10) ** -42


def test_eta_norm_factor_conventions_same_modulus():
    # the two normalization styles differ by a root of unity only
    for D, N in [(-7, 11), (-11, 23)]:
        a = eta_norm_factor(HeckeContext(D, N, prec=50))
        b = eta_norm_factor(HeckeContext(D, N, prec=50, eta_convention="sec7"))
        assert abs(a.abs_value() - b.abs_value()) < mpf(10) ** -42


def test_theta_hat_known_integers():
    ctx = HeckeContext(-7, 11, prec=80)
    v = theta_hat(ctx, QuadForm(1, 1, 3))
    n, err = v.nearest_int()
    assert n == -1 and err < mpf(10) ** -60

    ctx = HeckeContext(-11, 23, prec=80)
    snapped = []
    for Q in reduced_forms(-23):
        n, err = theta_hat(ctx, Q).nearest_int()
        assert err < mpf(10) ** -60
        snapped.append(n)
    assert sorted(abs(n) for n in snapped) == [0, 0, 2]


def test_theta_hat_rejects_wrong_disc():
    ctx = HeckeContext(-7, 11, prec=50)
    with pytest.raises(InputError):
        theta_hat(ctx, QuadForm(1, 1, 2))
