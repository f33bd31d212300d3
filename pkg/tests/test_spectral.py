"""Trigonometric spectrum and eigenstates against the independent eigensolver."""

import numpy as np
import pytest

from ringstir import (
    Bond,
    DegenerateSpectrumError,
    NonHermitianInputError,
    RingParams,
    TestFlux,
    build_hamiltonian_3site,
    cubic_aux,
    eigenvalues_trig,
    ground_energy,
    ground_state,
    oracle_eigensolve,
)

RNG = np.random.default_rng(42)


def random_cases(n, u_lo=-10.0, u_hi=10.0):
    for _ in range(n):
        p = RingParams(*RNG.uniform(-3.0, 3.0, size=3))
        u = float(RNG.uniform(u_lo, u_hi))
        yield p, u


def test_dot_decoupled_spectrum():
    sp = eigenvalues_trig(RingParams(1.0, 0.0, 0.0), 5.0)
    np.testing.assert_allclose(sp.energies, [-1.0, 1.0, 5.0], atol=1e-12)
    assert not sp.degenerate


def test_symmetric_triangle_is_degenerate():
    sp = eigenvalues_trig(RingParams(1.0, 1.0, 1.0), 0.0)
    np.testing.assert_allclose(sp.energies, [-1.0, -1.0, 2.0], atol=1e-12)
    assert sp.degenerate


def test_trig_matches_oracle_on_1000_draws():
    worst = 0.0
    for p, u in random_cases(1000):
        sp = eigenvalues_trig(p, u)
        w, _ = oracle_eigensolve(build_hamiltonian_3site(p, u).astype(complex))
        worst = max(worst, float(np.max(np.abs(sp.energies - w))))
    assert worst < 1e-11


def test_trig_matches_oracle_with_flux():
    for p, u in random_cases(200):
        flux = TestFlux(float(RNG.uniform(-np.pi, np.pi)), list(Bond)[RNG.integers(0, 3)])
        sp = eigenvalues_trig(p, u, flux)
        w = np.linalg.eigvalsh(build_hamiltonian_3site(p, u, flux))
        np.testing.assert_allclose(sp.energies, w, atol=1e-11)


def test_showcase_point_matches_oracle_tightly():
    p = RingParams(1.0, 0.2, 0.15)
    sp = eigenvalues_trig(p, 3.0)
    w, _ = oracle_eigensolve(build_hamiltonian_3site(p, 3.0).astype(complex))
    np.testing.assert_allclose(sp.energies, w, atol=1e-12)


def test_trace_identity():
    for p, u in random_cases(300):
        phi = float(RNG.uniform(-np.pi, np.pi))
        sp = eigenvalues_trig(p, u, TestFlux(phi))
        scale = max(1.0, abs(u))
        assert abs(sp.energies.sum() - u) < 1e-10 * scale


def test_determinant_identity():
    for p, u in random_cases(300):
        phi = float(RNG.uniform(-np.pi, np.pi))
        sp = eigenvalues_trig(p, u, TestFlux(phi))
        det = float(np.prod(sp.energies))
        expect = -(p.c0 ** 2 * u - 2.0 * p.c0 * p.c1 * p.c2 * np.cos(phi))
        scale = max(1.0, abs(expect), np.abs(sp.energies).max() ** 3)
        assert abs(det - expect) < 1e-9 * scale


def test_gauge_sign_flip_leaves_spectrum():
    for p, u in random_cases(100):
        flipped = RingParams(p.c0, -p.c1, -p.c2)
        np.testing.assert_allclose(
            eigenvalues_trig(p, u).energies,
            eigenvalues_trig(flipped, u).energies,
            atol=1e-12 * max(1.0, abs(u)),
        )


def test_ground_energy_asymptotes():
    p = RingParams(1.0, 0.2, 0.15)
    # deep dot: ground energy tracks u itself
    assert abs(ground_energy(p, -1e8) - (-1e8)) < 1e-5
    # raised dot: ground energy approaches the lower wire level -c0
    assert ground_energy(p, 1e8) == pytest.approx(-1.0, abs=1e-6)


def test_ground_energy_vectorized_matches_scalar():
    p = RingParams(0.8, -1.1, 0.4)
    us = np.linspace(-7, 7, 23)
    vec = ground_energy(p, us)
    np.testing.assert_array_equal(vec, [ground_energy(p, u) for u in us])


def test_ground_state_residuals_on_1000_draws():
    for p, u in random_cases(1000):
        sp = eigenvalues_trig(p, u)
        if sp.degenerate:
            continue
        gs = ground_state(p, u)
        H = build_hamiltonian_3site(p, u)
        resid = np.linalg.norm(H @ gs.amplitudes - gs.energy * gs.amplitudes)
        assert resid <= 1e-9 * max(1.0, sp.span)
        assert abs(np.linalg.norm(gs.amplitudes) - 1.0) < 1e-12


def test_ground_state_decoupled_dot_below():
    gs = ground_state(RingParams(1.0, 0.0, 0.0), -10.0)
    np.testing.assert_allclose(gs.amplitudes, [1.0, 0.0, 0.0], atol=1e-14)
    assert gs.energy == pytest.approx(-10.0)
    assert not gs.used_fallback


def test_ground_state_wire_limit():
    gs = ground_state(RingParams(1.0, 19.0, 15.0), 1e6)
    assert gs.energy == pytest.approx(-1.0, abs=1e-4)
    s = 1.0 / np.sqrt(2.0)
    assert abs(gs.amplitudes[0]) < 1e-4
    assert gs.amplitudes[1].real == pytest.approx(s, abs=1e-4)
    assert gs.amplitudes[2].real == pytest.approx(-s, abs=1e-4)


def test_ground_state_cofactor_fallback():
    # decoupled dot above the wire: the dot-row adjugate column vanishes
    gs = ground_state(RingParams(1.0, 0.0, 0.0), 10.0)
    assert gs.used_fallback
    assert gs.energy == pytest.approx(-1.0)
    s = 1.0 / np.sqrt(2.0)
    np.testing.assert_allclose(np.abs(gs.amplitudes), [0.0, s, s], atol=1e-12)
    assert gs.norm_S == pytest.approx(0.0, abs=1e-20)


def test_ground_state_degenerate_raises():
    with pytest.raises(DegenerateSpectrumError):
        ground_state(RingParams(1.0, 1.0, 1.0), 0.0)


def test_ground_state_zero_flux_is_real_with_positive_anchor():
    for p, u in random_cases(200):
        if eigenvalues_trig(p, u).degenerate:
            continue
        gs = ground_state(p, u)
        assert np.max(np.abs(gs.amplitudes.imag)) == 0.0
        k = int(np.argmax(np.abs(gs.amplitudes)))
        assert gs.amplitudes[k].real > 0.0


def test_norm_S_is_direct_component_sum():
    for p, u in random_cases(50):
        gs_ok = not eigenvalues_trig(p, u).degenerate
        if not gs_ok:
            continue
        E = ground_state(p, u).energy
        direct = (
            (E * E - p.c0 ** 2) ** 2
            + (p.c1 * E + p.c0 * p.c2) ** 2
            + (p.c2 * E + p.c0 * p.c1) ** 2
        )
        assert ground_state(p, u).norm_S == pytest.approx(direct, rel=1e-12)


def test_cubic_aux_invariants():
    for p, u in random_cases(200):
        aux = cubic_aux(p, u)
        assert aux.calQ >= 0.0
        if aux.calQ > 0.0:
            assert abs(aux.calR) <= (1.0 + 1e-12) * aux.calQ ** 1.5
        assert 0.0 <= aux.theta_cubic <= np.pi


def test_sorted_labels_bookkeeping():
    for p, u in random_cases(100):
        sp = eigenvalues_trig(p, u)
        assert sorted(sp.labels) == [-1, 0, 1]
        assert sp.E_g <= sp.E_d <= sp.E_e


def test_oracle_rejects_non_hermitian():
    M = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]], dtype=complex)
    with pytest.raises(NonHermitianInputError):
        oracle_eigensolve(M)
    with pytest.raises(NonHermitianInputError):
        oracle_eigensolve(np.zeros((2, 2)))


def test_oracle_diagonal_case_and_orthonormality():
    w, v = oracle_eigensolve(np.diag([3.0, 0.0, 0.0]).astype(complex))
    np.testing.assert_allclose(w, [0.0, 0.0, 3.0], atol=1e-14)
    np.testing.assert_allclose(np.abs(v[:, 2]), [1.0, 0.0, 0.0], atol=1e-14)
    for p, u in random_cases(200):
        flux = TestFlux(float(RNG.uniform(-np.pi, np.pi)))
        H = np.asarray(build_hamiltonian_3site(p, u, flux), dtype=complex)
        w, v = oracle_eigensolve(H)
        gram = v.conj().T @ v
        assert np.max(np.abs(gram - np.eye(3))) < 1e-12
        assert np.all(np.diff(w) >= 0.0)
