"""Conductance and charge: closed forms against the flux-derivative oracle."""

import numpy as np
import pytest

from ringstir import (
    Bond,
    DegeneracyNearbyError,
    DegenerateSplittingError,
    RingParams,
    TwoSiteParams,
    ZeroCouplingError,
    adiabatic_point,
    conductance_bond12,
    conductance_exact,
    conductance_numeric,
    eigenvalues_trig,
    integrate_conductance,
    integrated_current,
    q_infinity,
    tail_charge_estimate,
    two_site_charge,
    two_site_conductance,
    two_site_conductance_numeric,
)

RNG = np.random.default_rng(7)
SHOWCASE = RingParams(1.0, 0.2, 0.15)


# ---------------------------------------------------------------------------
# two-site model


def test_two_site_peak_value():
    p = TwoSiteParams(C=1.0, u_c=0.0, lam=1.0)
    assert two_site_conductance(p, 0.0) == pytest.approx(0.25, rel=1e-15)


def test_two_site_profile_symmetric_about_crossing():
    p = TwoSiteParams(C=0.7, u_c=1.3, lam=2.0)
    xs = np.linspace(0.0, 5.0, 11)
    np.testing.assert_allclose(
        two_site_conductance(p, p.u_c + xs), two_site_conductance(p, p.u_c - xs)
    )


def test_two_site_integral_equals_lam():
    for C, u_c, lam in [(1.0, 0.0, 1.0), (0.3, 2.0, 1.0), (0.05 / np.sqrt(2), -1.0, 4.0)]:
        p = TwoSiteParams(C=C, u_c=u_c, lam=lam)
        total = integrate_conductance(
            lambda u: two_site_conductance(p, u), center=u_c, width=2 * abs(C)
        )
        assert total == pytest.approx(lam, abs=1e-6)


def test_two_site_zero_coupling_raises():
    with pytest.raises(ZeroCouplingError):
        two_site_conductance(TwoSiteParams(C=0.0), 1.0)
    with pytest.raises(ZeroCouplingError):
        two_site_charge(TwoSiteParams(C=0.0), 1.0)


def test_two_site_charge_limits():
    p = TwoSiteParams(C=0.4, u_c=0.5, lam=3.0)
    assert two_site_charge(p, -1e9) == pytest.approx(0.0, abs=1e-12)
    assert two_site_charge(p, 1e9) == pytest.approx(p.lam, rel=1e-9)


def test_two_site_numeric_matches_closed_form():
    p = TwoSiteParams(C=0.8, u_c=-0.3, lam=1.0)
    for u in np.linspace(-4.0, 4.0, 9):
        g = two_site_conductance(p, u)
        gn = two_site_conductance_numeric(p, u)
        assert gn == pytest.approx(g, rel=1e-6)


def test_two_site_windowed_integral_with_tail_estimate():
    p = TwoSiteParams(C=1.0, u_c=0.0, lam=1.0)
    from scipy.integrate import quad

    lo, hi = -40.0, 40.0
    inner, _ = quad(lambda u: two_site_conductance(p, u), lo, hi, limit=200)
    total = inner + tail_charge_estimate(p, lo, hi)
    assert total == pytest.approx(1.0, abs=1e-4)


# ---------------------------------------------------------------------------
# ring closed forms vs the oracle


def test_exact_matches_numeric_at_the_peak():
    g = conductance_exact(SHOWCASE, -1.0)
    gn = conductance_numeric(SHOWCASE, -1.0)
    assert gn == pytest.approx(g, rel=1e-6)


def test_oracle_equivalence_on_random_draws():
    checked = 0
    worst = 0.0
    while checked < 300:
        c = RNG.uniform(0.3, 2.5, size=3) * RNG.choice([-1.0, 1.0], size=3)
        p = RingParams(*c)
        u = float(RNG.uniform(-6.0, 6.0))
        sp = eigenvalues_trig(p, u)
        if min(sp.E_d - sp.E_g, sp.E_e - sp.E_d) < 0.1:
            continue
        for bond, exact in (
            (Bond.BOND_01, conductance_exact(p, u)),
            (Bond.BOND_12, conductance_bond12(p, u)),
        ):
            err = abs(conductance_numeric(p, u, bond=bond) - exact) / max(1.0, abs(exact))
            worst = max(worst, err)
        checked += 1
    assert worst < 1e-6


def test_no_bond_no_current():
    p = RingParams(1.0, 0.0, 0.5)
    for u in np.linspace(-4, 4, 9):
        assert conductance_exact(p, u) == pytest.approx(0.0, abs=1e-15)


def test_q_infinity_laws():
    assert q_infinity(RingParams(1.0, 0.2, 0.15)) == pytest.approx(4.0, rel=1e-12)
    assert q_infinity(RingParams(0.0, 3.0, 4.0)) == pytest.approx(0.36, rel=1e-12)
    assert q_infinity(RingParams(2.0, 1.0, 0.0)) == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(DegenerateSplittingError):
        q_infinity(RingParams(1.0, 0.7, 0.7))
    with pytest.raises(ZeroCouplingError):
        q_infinity(RingParams(0.0, 0.0, 0.0))


def test_q_infinity_independent_of_c0():
    vals = [
        integrated_current(RingParams(c0, 1.7, -0.6), 1e4 * max(c0, 1.7))
        for c0 in (0.01, 0.1, 1.0, 10.0)
    ]
    law = 1.7 / (1.7 + 0.6)
    assert max(abs(v - law) for v in vals) < 1e-3


def test_integrated_current_limits():
    assert integrated_current(SHOWCASE, -1e6) == pytest.approx(0.0, abs=1e-9)
    assert integrated_current(SHOWCASE, 1e4) == pytest.approx(4.0, abs=1e-3)


def test_charge_is_antiderivative_of_conductance():
    us = np.linspace(-3.0, 3.0, 6001)
    h = us[1] - us[0]
    q = integrated_current(SHOWCASE, us)
    g = conductance_exact(SHOWCASE, us)
    dq = (q[2:] - q[:-2]) / (2.0 * h)
    # central-difference error is g'' h^2 / 6; the sharp peak dominates
    assert np.max(np.abs(dq - g[1:-1])) < 5e-2 * np.max(g)


def test_two_stage_charge_profile_19_17():
    p = RingParams(1.0, 19.0, 17.0)
    dark = 361.0 / 650.0
    # frozen regression values: the plateau sits close to the zero-c0
    # partition near its flattest point and rises toward the
    # metamorphosis at u_m = 323
    assert integrated_current(p, 113.0) == pytest.approx(dark, rel=0.025)
    assert integrated_current(p, 161.5) == pytest.approx(0.6241983521048566, rel=1e-9)
    assert integrated_current(p, 1.9e5) == pytest.approx(9.5, abs=1e-3)


def test_bond12_antisymmetry_and_zero():
    p = RingParams(1.0, 0.2, 0.15)
    ps = RingParams(1.0, 0.15, 0.2)
    for u in np.linspace(-5, 5, 11):
        assert conductance_bond12(ps, u) == pytest.approx(-conductance_bond12(p, u), rel=1e-12)
    peq = RingParams(1.0, 0.3, 0.3)
    assert np.max(np.abs(conductance_bond12(peq, np.linspace(-5, 5, 11)))) == 0.0


def test_bond12_matches_numeric_oracle_on_grid():
    for u in np.linspace(-5.0, 5.0, 21):
        g = conductance_bond12(SHOWCASE, u)
        gn = conductance_numeric(SHOWCASE, u, bond=Bond.BOND_12)
        assert gn == pytest.approx(g, rel=1e-6, abs=1e-12)


def test_bond02_flux_equals_swapped_closed_form():
    swapped = SHOWCASE.swapped()
    for u in (-1.0, -0.5, 0.7, 2.0):
        gn = conductance_numeric(SHOWCASE, u, bond=Bond.BOND_02)
        g = conductance_exact(swapped, u)
        assert gn == pytest.approx(g, rel=1e-6, abs=1e-12)


def test_transfer_sum_rule():
    # bond 0-1 and bond 0-2 transported charges add up to one full transfer
    assert q_infinity(SHOWCASE) + q_infinity(SHOWCASE.swapped()) == pytest.approx(1.0, rel=1e-12)
    total = integrate_conductance(
        lambda u: conductance_exact(SHOWCASE, u) + conductance_exact(SHOWCASE.swapped(), u),
        center=-1.0,
        width=0.2,
    )
    assert total == pytest.approx(1.0, abs=1e-6)


def test_single_path_full_transfer():
    p = RingParams(1.0, 0.6, 0.0)
    total = integrate_conductance(
        lambda u: conductance_exact(p, u), center=-1.0, width=1.0
    )
    assert total == pytest.approx(1.0, abs=1e-6)


def test_numeric_oracle_refuses_near_degeneracy():
    with pytest.raises(DegeneracyNearbyError):
        conductance_numeric(RingParams(1.0, 0.0, 0.0), -1.0)
    with pytest.raises(DegeneracyNearbyError):
        conductance_numeric(RingParams(1.0, 1e-7, 0.0), -1.0)


def test_adiabatic_point_snapshot():
    ap = adiabatic_point(SHOWCASE, -1.0)
    assert ap.occupations.sum() == pytest.approx(1.0, abs=1e-12)
    assert ap.G == pytest.approx(conductance_exact(SHOWCASE, -1.0))
    assert ap.Q == pytest.approx(integrated_current(SHOWCASE, -1.0))
    assert ap.energies.E_g < ap.energies.E_d < ap.energies.E_e
