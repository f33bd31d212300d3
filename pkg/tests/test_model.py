"""Builders: matrix layout, flux conventions, Hermiticity, flux-derivative checks."""

import numpy as np
import pytest

from ringstir import (
    Bond,
    RingParams,
    TestFlux,
    TwoSiteParams,
    build_current_operator,
    build_current_operator_2site,
    build_hamiltonian_2site,
    build_hamiltonian_3site,
    is_hermitian,
)

RNG = np.random.default_rng(20260809)


def random_params(n):
    for _ in range(n):
        c = RNG.uniform(-3.0, 3.0, size=3)
        yield RingParams(*c)


def test_ring_hamiltonian_layout():
    p = RingParams(1.0, 0.2, 0.15)
    H = build_hamiltonian_3site(p, 3.0)
    expected = np.array([[3.0, 0.2, 0.15], [0.2, 0.0, 1.0], [0.15, 1.0, 0.0]])
    assert H.dtype == np.float64
    np.testing.assert_array_equal(H, expected)


def test_zero_flux_is_real_symmetric():
    for p in random_params(50):
        u = RNG.uniform(-10, 10)
        H = build_hamiltonian_3site(p, u, TestFlux(0.0, Bond.BOND_12))
        assert np.isrealobj(H)
        np.testing.assert_array_equal(H, H.T)


def test_flux_phase_sits_on_lower_triangle():
    # c -> c e^{i phi} acts on the lower-triangle entry of the flux bond,
    # so at phi = pi/2 with c1 = 1 the (1,0) entry is +i.  This pairing
    # is what makes -dH/dphi match the current operator below.
    p = RingParams(1.0, 1.0, 1.0)
    H = build_hamiltonian_3site(p, 0.0, TestFlux(np.pi / 2, Bond.BOND_01))
    assert H[1, 0] == pytest.approx(1j, abs=1e-15)
    assert H[0, 1] == pytest.approx(-1j, abs=1e-15)
    assert H[2, 1] == pytest.approx(1.0)
    assert is_hermitian(H)


def test_current_operator_bond01_at_zero_flux():
    p = RingParams(1.0, 0.2, 0.15)
    I = build_current_operator(p, TestFlux(0.0, Bond.BOND_01))
    expected = np.zeros((3, 3), dtype=complex)
    expected[0, 1] = 0.2j
    expected[1, 0] = -0.2j
    np.testing.assert_allclose(I, expected, atol=1e-15)


def test_current_operator_bond12_and_bond02():
    p = RingParams(0.7, 0.2, 0.15)
    I12 = build_current_operator(p, TestFlux(0.0, Bond.BOND_12))
    assert I12[1, 2] == pytest.approx(0.7j)
    assert I12[2, 1] == pytest.approx(-0.7j)
    assert np.count_nonzero(I12) == 2
    I02 = build_current_operator(p, TestFlux(0.0, Bond.BOND_02))
    assert I02[0, 2] == pytest.approx(0.15j)
    assert I02[2, 0] == pytest.approx(-0.15j)
    assert np.count_nonzero(I02) == 2


def test_current_operator_is_minus_flux_derivative():
    # central difference of the Hamiltonian in phi reproduces -I to 1e-9
    h = 1e-5
    for p in list(random_params(10)):
        u = RNG.uniform(-5, 5)
        for bond in Bond:
            for phi in (0.0, 0.3, -1.2):
                hi = build_hamiltonian_3site(p, u, TestFlux(phi + h, bond))
                lo = build_hamiltonian_3site(p, u, TestFlux(phi - h, bond))
                dH = (np.asarray(hi, dtype=complex) - np.asarray(lo, dtype=complex)) / (2 * h)
                I = build_current_operator(p, TestFlux(phi, bond))
                np.testing.assert_allclose(-dH, I, atol=1e-9)


def test_builders_hermitian_to_1e14():
    for p in random_params(30):
        u = RNG.uniform(-10, 10)
        phi = RNG.uniform(-np.pi, np.pi)
        bond = list(Bond)[RNG.integers(0, 3)]
        for M in (
            build_hamiltonian_3site(p, u, TestFlux(phi, bond)),
            build_current_operator(p, TestFlux(phi, bond)),
        ):
            assert is_hermitian(np.asarray(M, dtype=complex))


def test_two_site_hamiltonian():
    p = TwoSiteParams(C=1.0, u_c=0.0)
    np.testing.assert_array_equal(build_hamiltonian_2site(p, 0.0), [[0.0, 1.0], [1.0, 0.0]])
    # symmetric crossing of the reduced ring problem
    C = 0.05 / np.sqrt(2.0)
    p2 = TwoSiteParams(C=C, u_c=-1.0)
    H = build_hamiltonian_2site(p2, -1.0)
    np.testing.assert_allclose(H, [[-1.0, C], [C, -1.0]])
    for _ in range(20):
        C, uc, u, phi = RNG.uniform(-2, 2, size=4)
        H = build_hamiltonian_2site(TwoSiteParams(C=C, u_c=uc), u, phi)
        assert is_hermitian(np.asarray(H, dtype=complex))


def test_two_site_current_operator_scales_with_lam():
    p = TwoSiteParams(C=0.4, u_c=0.0, lam=3.0)
    I = build_current_operator_2site(p)
    assert I[0, 1] == pytest.approx(3.0 * 0.4j)
    h = 1e-5
    dH = (build_hamiltonian_2site(p, 1.0, h) - build_hamiltonian_2site(p, 1.0, -h)) / (2 * h)
    np.testing.assert_allclose(p.lam * (-dH[0, 1]), I[0, 1], atol=1e-9)


def test_derived_pm_couplings_recomputed():
    p = RingParams(1.0, 0.2, 0.15)
    assert p.c_plus == pytest.approx(0.35 / np.sqrt(2.0))
    assert p.c_minus == pytest.approx(0.05 / np.sqrt(2.0))
    swapped = p.swapped()
    assert (swapped.c1, swapped.c2) == (0.15, 0.2)
    assert swapped.c_minus == pytest.approx(-p.c_minus)


def test_parameter_validation():
    with pytest.raises(ValueError):
        RingParams(np.inf, 0.0, 0.0)
    with pytest.raises(ValueError):
        RingParams(0.0, np.nan, 0.0)
    with pytest.raises(ValueError):
        TestFlux(np.nan)
    with pytest.raises(ValueError):
        build_hamiltonian_3site(RingParams(1, 1, 1), np.inf)
