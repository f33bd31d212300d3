"""Geometric conductance G(u) and integrated charge Q(u).

Closed forms for both the two-site crossing and the three-site ring,
plus a numerical oracle that evaluates the geometric-conductance
formula G = 2 Im <d_u psi | d_phi psi> directly by central differences
of the ground state.  With the flux phase on the lower-triangle bond
entry and the current operator I = -dH/dphi, this bra-ket order
reproduces the positive closed-form profiles.

For the ring, with E = E_g(u) the closed form is the total derivative

    G(u)  = d/du [ N(E) / S(E) ],
    N(E)  = c1^2 E^2 + 2 c0 c1 c2 E + c0^2 c1^2,
    S(E)  = (E^2 - c0^2)^2 + (c1 E + c0 c2)^2 + (c2 E + c0 c1)^2,

evaluated analytically via dE/du from the characteristic polynomial.
S is the direct sum of squared eigenvector components; its linear-in-E
coefficient is 4 c0 c1 c2 (direct expansion), which the flux-derivative
oracle confirms.  Q(u) = N/S since N/S -> 0 as u -> -infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import (
    DegenerateSpectrumError,
    DegeneracyNearbyError,
    DegenerateSplittingError,
    ZeroCouplingError,
)
from .model import (
    Bond,
    RingParams,
    TestFlux,
    TwoSiteParams,
    build_hamiltonian_2site,
    build_hamiltonian_3site,
)
from .spectral import DEGENERACY_RTOL, Spectrum3, eigenvalues_trig, ground_state

# conductance_numeric refuses to difference across gaps smaller than
# GAP_SAFETY * max(d_u, d_phi) * max(1, |coupling on the flux bond|).
GAP_SAFETY = 10.0


@dataclass(frozen=True)
class AdiabaticPoint:
    """Adiabatic snapshot at dot potential u (bond 0-1 monitored)."""

    u: float
    energies: Spectrum3
    G: float
    Q: float
    occupations: np.ndarray


# ---------------------------------------------------------------------------
# two-site closed forms


def two_site_ground_energy(p: TwoSiteParams, u):
    """Lower adiabatic level of the two-site crossing."""
    u = np.asarray(u, dtype=float)
    out = 0.5 * ((u + p.u_c) - np.hypot(2.0 * p.C, u - p.u_c))
    return float(out) if out.ndim == 0 else out


def two_site_conductance(p: TwoSiteParams, u):
    """G(u) = lam * 2 C^2 / (4 C^2 + (u - u_c)^2)^{3/2}; integrates to lam."""
    if p.C == 0.0:
        raise ZeroCouplingError("C = 0: conductance degenerates to a delta spike")
    u = np.asarray(u, dtype=float)
    out = p.lam * 2.0 * p.C ** 2 / (4.0 * p.C ** 2 + (u - p.u_c) ** 2) ** 1.5
    return float(out) if out.ndim == 0 else out


def two_site_charge(p: TwoSiteParams, u):
    """Integrated charge Q(u) = lam C^2 / ((E - u_c)^2 + C^2); Q(inf) = lam."""
    if p.C == 0.0:
        raise ZeroCouplingError("C = 0: charge steps discontinuously")
    E = two_site_ground_energy(p, u)
    out = p.lam * p.C ** 2 / ((E - p.u_c) ** 2 + p.C ** 2)
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# ring closed forms


def _ring_NS(c0, c1, c2, E):
    N = c1 * c1 * E * E + 2.0 * c0 * c1 * c2 * E + c0 * c0 * c1 * c1
    S = (E * E - c0 * c0) ** 2 + (c1 * E + c0 * c2) ** 2 + (c2 * E + c0 * c1) ** 2
    return N, S


def _ring_dNdS(c0, c1, c2, E):
    dN = 2.0 * c1 * c1 * E + 2.0 * c0 * c1 * c2
    dS = 4.0 * E ** 3 + 2.0 * (c1 * c1 + c2 * c2 - 2.0 * c0 * c0) * E + 4.0 * c0 * c1 * c2
    return dN, dS


def _dE_du(c0, c1, c2, u, E):
    # implicit differentiation of the characteristic polynomial at phi = 0
    return (E * E - c0 * c0) / (3.0 * E * E - 2.0 * u * E - (c0 * c0 + c1 * c1 + c2 * c2))


def _ground_energy_checked(params: RingParams, u):
    """Ground energies over u (scalar or array); raises on degeneracy."""
    from .spectral import _trig_branches  # shared kernel

    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    e0, ep, em, _ = _trig_branches(params.c0, params.c1, params.c2, u_arr, 1.0)
    stacked = np.stack([e0, ep, em])
    stacked.sort(axis=0)
    span = stacked[2] - stacked[0]
    scale = span + np.abs(u_arr) + abs(params.c0) + abs(params.c1) + abs(params.c2)
    thr = np.asarray(DEGENERACY_RTOL * scale)
    bad = (stacked[1] - stacked[0] < thr) | (stacked[2] - stacked[1] < thr)
    if np.any(bad):
        u_bad = u_arr[bad][0]
        raise DegenerateSpectrumError(f"degenerate spectrum at u={u_bad}")
    return stacked[0]


def conductance_exact(params: RingParams, u):
    """Closed-form geometric conductance of bond 0-1; scalar or array u.

    c1 = c2 with c0 != 0 is rejected: the odd wire state decouples and
    crosses the dressed dot level for real, so adiabatic transport
    through bond 0-1 is ill-defined there (the splitting ratio
    diverges).
    """
    if params.c0 == 0.0 and params.c1 == 0.0 and params.c2 == 0.0:
        raise ZeroCouplingError("all couplings vanish")
    if params.c0 != 0.0 and params.c1 == params.c2:
        raise DegenerateSplittingError(
            "c1 = c2 with c0 != 0: true level crossing, transport ill-defined"
        )
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    E = _ground_energy_checked(params, u_arr)
    c0, c1, c2 = params.c0, params.c1, params.c2
    N, S = _ring_NS(c0, c1, c2, E)
    dN, dS = _ring_dNdS(c0, c1, c2, E)
    G = (dN * S - N * dS) / S ** 2 * _dE_du(c0, c1, c2, u_arr, E)
    return float(G[0]) if np.ndim(u) == 0 else G


def conductance_bond12(params: RingParams, u):
    """Closed-form conductance of the intra-wire bond 1-2.

    G = c0^2 (c1^2 - c2^2) d/du [1/S]; antisymmetric under c1 <-> c2.
    """
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    E = _ground_energy_checked(params, u_arr)
    c0, c1, c2 = params.c0, params.c1, params.c2
    _, S = _ring_NS(c0, c1, c2, E)
    _, dS = _ring_dNdS(c0, c1, c2, E)
    G = c0 * c0 * (c1 * c1 - c2 * c2) * (-dS / S ** 2) * _dE_du(c0, c1, c2, u_arr, E)
    return float(G[0]) if np.ndim(u) == 0 else G


def integrated_current(params: RingParams, u):
    """Integrated charge Q(u) through bond 0-1 up to dot potential u."""
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    E = _ground_energy_checked(params, u_arr)
    N, S = _ring_NS(params.c0, params.c1, params.c2, E)
    Q = N / S
    return float(Q[0]) if np.ndim(u) == 0 else Q


def q_infinity(params: RingParams) -> float:
    """Final transported charge through bond 0-1.

    c0 != 0: c1/(c1 - c2), independent of c0.  c0 = 0: the stochastic
    partition c1^2/(c1^2 + c2^2).  The discontinuity at c0 = 0 is real,
    not a numerical artifact.
    """
    if params.c0 == 0.0:
        denom = params.c1 ** 2 + params.c2 ** 2
        if denom == 0.0:
            raise ZeroCouplingError("c1 = c2 = 0: no transport path")
        return params.c1 ** 2 / denom
    if params.c1 == params.c2:
        raise DegenerateSplittingError(
            "c1 = c2 with c0 != 0: the splitting ratio diverges"
        )
    return params.c1 / (params.c1 - params.c2)


def adiabatic_point(params: RingParams, u: float) -> AdiabaticPoint:
    """Spectrum, conductance, charge, and ground occupations at one u."""
    u = float(u)
    spect = eigenvalues_trig(params, u)
    gs = ground_state(params, u)
    return AdiabaticPoint(
        u=u,
        energies=spect,
        G=conductance_exact(params, u),
        Q=integrated_current(params, u),
        occupations=gs.occupations,
    )


# ---------------------------------------------------------------------------
# numerical oracle: central differences of the ground state


def _aligned_ground(H, ref=None):
    w, v = np.linalg.eigh(H)
    psi = v[:, 0]
    if ref is not None:
        ov = np.vdot(ref, psi)
        if abs(ov) > 0.0:
            psi = psi * np.exp(-1j * np.angle(ov))
    return w, psi


def _berry_fd(build, u, d_u, d_phi, gap_scale):
    """2 Im <d_u psi | d_phi psi> by phase-aligned central differences."""
    w, psi_c = _aligned_ground(np.asarray(build(u, 0.0), dtype=complex))
    gap = w[1] - w[0]
    if gap < GAP_SAFETY * max(d_u, d_phi) * gap_scale:
        raise DegeneracyNearbyError(
            f"spectral gap {gap:.3e} too small for step sizes ({d_u}, {d_phi})"
        )
    _, pu_hi = _aligned_ground(np.asarray(build(u + d_u, 0.0), dtype=complex), psi_c)
    _, pu_lo = _aligned_ground(np.asarray(build(u - d_u, 0.0), dtype=complex), psi_c)
    _, pp_hi = _aligned_ground(np.asarray(build(u, d_phi), dtype=complex), psi_c)
    _, pp_lo = _aligned_ground(np.asarray(build(u, -d_phi), dtype=complex), psi_c)
    dpsi_du = (pu_hi - pu_lo) / (2.0 * d_u)
    dpsi_dphi = (pp_hi - pp_lo) / (2.0 * d_phi)
    return 2.0 * float(np.imag(np.vdot(dpsi_du, dpsi_dphi)))


def conductance_numeric(
    params: RingParams,
    u: float,
    bond: Bond = Bond.BOND_01,
    d_u: float = 1e-4,
    d_phi: float = 1e-4,
) -> float:
    """Flux-derivative oracle for the ring conductance on any bond.

    Converges to the closed forms at rate O(d_u^2 + d_phi^2).  Raises
    DegeneracyNearbyError when the ground-state gap is too small for
    the requested step sizes.
    """
    bond_c = {Bond.BOND_01: params.c1, Bond.BOND_12: params.c0, Bond.BOND_02: params.c2}[bond]

    def build(uu, phi):
        return build_hamiltonian_3site(params, uu, TestFlux(phi, bond))

    return _berry_fd(build, float(u), d_u, d_phi, max(1.0, abs(bond_c)))


def two_site_conductance_numeric(
    p: TwoSiteParams, u: float, d_u: float = 1e-4, d_phi: float = 1e-4
) -> float:
    """Same differencing applied to the two-site model (times lam)."""

    def build(uu, phi):
        return build_hamiltonian_2site(p, uu, phi)

    return p.lam * _berry_fd(build, float(u), d_u, d_phi, max(1.0, abs(p.C)))


# ---------------------------------------------------------------------------
# quadrature helpers


def integrate_conductance(g, center: float = 0.0, width: float = 1.0,
                          epsabs: float = 1e-11, epsrel: float = 1e-11) -> float:
    """Integral of g(u) over the whole real line.

    Compactifies u = center + width * tan(x) so the infinite tails map
    to finite endpoints; no separate tail correction is then needed.
    """
    if width <= 0.0:
        raise ValueError("width must be positive")

    def integrand(x):
        t = math.tan(x)
        return g(center + width * t) * width * (1.0 + t * t)

    val, _ = quad(integrand, -math.pi / 2, math.pi / 2,
                  epsabs=epsabs, epsrel=epsrel, limit=400)
    return val


def tail_charge_estimate(p: TwoSiteParams, lo: float, hi: float) -> float:
    """Charge outside a finite window [lo, hi], from the |u|^{-3} tails.

    Each tail of the two-site profile contributes ~ lam C^2 / L^2 at
    distance L from the crossing; useful with windowed numerical
    integration of an oracle conductance.
    """
    L_lo = max(p.u_c - lo, 2.0 * abs(p.C))
    L_hi = max(hi - p.u_c, 2.0 * abs(p.C))
    return p.lam * p.C ** 2 * (1.0 / L_lo ** 2 + 1.0 / L_hi ** 2)
