"""Exact trigonometric diagonalization of the three-site ring.

The characteristic polynomial of the ring Hamiltonian,

    E^3 - u E^2 - (c0^2 + c1^2 + c2^2) E + c0^2 u - 2 c0 c1 c2 cos(phi) = 0,

has three real roots expressed through the classic trigonometric cubic
solution.  Eigenvectors are built from adjugate columns of (H - E),
with a cofactor-row fallback when the default column degenerates.  An
independent numerical eigensolver (LAPACK, via numpy) provides the
verification path used throughout the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrumError, NonHermitianInputError
from .model import Bond, RingParams, TestFlux, build_hamiltonian_3site

# Two sorted eigenvalues closer than DEGENERACY_RTOL * (span + |u| + sum|c|)
# are flagged as degenerate.
DEGENERACY_RTOL = 1e-10

# An adjugate column whose norm is below COFACTOR_RTOL * scale^2 (scale =
# |u| + |E| + sum|c|) is considered degenerate and another row is tried.
COFACTOR_RTOL = 1e-13


@dataclass(frozen=True)
class CubicAux:
    """Auxiliary quantities of the trigonometric cubic solution."""

    calQ: float
    calR: float
    theta_cubic: float  # in [0, pi]; distinct from the dressed-basis mixing angle


@dataclass(frozen=True)
class Spectrum3:
    """Sorted adiabatic energies with trig-branch bookkeeping.

    labels maps the sorted order (E_g, E_d, E_e) to the trig branch
    index n in {0, +1, -1}; the ordering is a labeling convention only,
    the sorted energies are the public interface.
    """

    E_g: float
    E_d: float
    E_e: float
    labels: tuple[int, int, int]
    degenerate: bool

    @property
    def energies(self) -> np.ndarray:
        return np.array([self.E_g, self.E_d, self.E_e])

    @property
    def span(self) -> float:
        return self.E_e - self.E_g


@dataclass(frozen=True)
class GroundState3:
    """Minimal-energy eigenstate of the ring.

    amplitudes are normalized with the largest-magnitude component made
    real positive; norm_S is the squared length of the un-normalized
    default adjugate column (the direct sum of squared component
    magnitudes, not an expanded polynomial).
    """

    energy: float
    amplitudes: np.ndarray
    norm_S: float
    used_fallback: bool

    @property
    def occupations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def _cubic_terms(c0, c1, c2, u, cos_phi):
    csq = c0 * c0 + c1 * c1 + c2 * c2
    calQ = u * u / 9.0 + csq / 3.0
    calR = u ** 3 / 27.0 + (c1 * c1 + c2 * c2 - 2.0 * c0 * c0) * u / 6.0 + c0 * c1 * c2 * cos_phi
    return calQ, calR


def _polish_root(c0, c1, c2, u, cos_phi, E):
    """Newton steps on the characteristic polynomial.

    The arccos in the trig formula loses ~sqrt(eps) accuracy when the
    roots are widely separated (|u| >> couplings); a few Newton
    iterations restore machine-accurate roots.  Points with a small
    polynomial derivative (near-degenerate roots) are left untouched.
    """
    csq = c0 * c0 + c1 * c1 + c2 * c2
    const = c0 * c0 * u - 2.0 * c0 * c1 * c2 * cos_phi
    scale = np.maximum(E * E, np.maximum(np.abs(u) * np.abs(E), csq))
    for _ in range(4):
        P = ((E - u) * E - csq) * E + const
        dP = (3.0 * E - 2.0 * u) * E - csq
        step = np.where(np.abs(dP) > 1e-8 * scale + 1e-300, P / np.where(dP != 0.0, dP, 1.0), 0.0)
        E = E - step
    return E


def _trig_branches(c0, c1, c2, u, cos_phi):
    """Energies of the three trig branches n = (0, +1, -1); array-safe in u."""
    u = np.asarray(u, dtype=float)
    calQ, calR = _cubic_terms(c0, c1, c2, u, cos_phi)
    sqrtQ = np.sqrt(calQ)
    denom = calQ * sqrtQ
    # |R| <= Q^{3/2} holds exactly for Hermitian input; clamp the float
    # overshoot (~1e-16 near degeneracies) before arccos.
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(denom > 0.0, calR / np.where(denom > 0.0, denom, 1.0), 0.0)
    theta = np.arccos(np.clip(ratio, -1.0, 1.0))
    third = 2.0 * np.pi / 3.0
    e0 = u / 3.0 + 2.0 * sqrtQ * np.cos(theta / 3.0)
    ep = u / 3.0 + 2.0 * sqrtQ * np.cos(theta / 3.0 + third)
    em = u / 3.0 + 2.0 * sqrtQ * np.cos(theta / 3.0 - third)
    e0 = _polish_root(c0, c1, c2, u, cos_phi, e0)
    ep = _polish_root(c0, c1, c2, u, cos_phi, ep)
    em = _polish_root(c0, c1, c2, u, cos_phi, em)
    return e0, ep, em, theta


def cubic_aux(params: RingParams, u: float, flux: TestFlux | None = None) -> CubicAux:
    """Auxiliary cubic quantities at (u, phi); theta_cubic lies in [0, pi]."""
    cos_phi = math.cos(flux.phi) if flux is not None else 1.0
    calQ, calR = _cubic_terms(params.c0, params.c1, params.c2, float(u), cos_phi)
    if calQ <= 0.0:
        return CubicAux(calQ=float(calQ), calR=float(calR), theta_cubic=0.0)
    ratio = min(1.0, max(-1.0, calR / math.sqrt(calQ ** 3)))
    return CubicAux(calQ=float(calQ), calR=float(calR), theta_cubic=math.acos(ratio))


def degeneracy_threshold(params: RingParams, u: float, span: float) -> float:
    """Absolute gap below which two roots count as degenerate."""
    scale = span + abs(u) + abs(params.c0) + abs(params.c1) + abs(params.c2)
    return DEGENERACY_RTOL * scale


def eigenvalues_trig(params: RingParams, u: float, flux: TestFlux | None = None) -> Spectrum3:
    """Exact eigenvalues through the trigonometric cubic formula, sorted."""
    cos_phi = math.cos(flux.phi) if flux is not None else 1.0
    u = float(u)
    e0, ep, em, _ = _trig_branches(params.c0, params.c1, params.c2, u, cos_phi)
    branch_n = (0, 1, -1)
    energies = np.array([e0, ep, em], dtype=float)
    order = np.argsort(energies, kind="stable")
    sorted_e = energies[order]
    labels = tuple(branch_n[i] for i in order)
    thr = degeneracy_threshold(params, u, sorted_e[2] - sorted_e[0])
    degenerate = bool(
        sorted_e[1] - sorted_e[0] < thr or sorted_e[2] - sorted_e[1] < thr
    )
    return Spectrum3(
        E_g=float(sorted_e[0]),
        E_d=float(sorted_e[1]),
        E_e=float(sorted_e[2]),
        labels=labels,
        degenerate=degenerate,
    )


def ground_energy(params: RingParams, u, phi: float = 0.0):
    """Ground-state energy; accepts scalar or array u and returns the same shape."""
    e0, ep, em, _ = _trig_branches(params.c0, params.c1, params.c2, u, math.cos(phi))
    out = np.minimum(np.minimum(e0, ep), em)
    if np.isscalar(u) or np.ndim(u) == 0:
        return float(out)
    return out


def _cofactor_row(A: np.ndarray, i: int) -> np.ndarray:
    """Cofactors (C_i0, C_i1, C_i2) of row i; a kernel vector of singular A."""
    j, k = [r for r in range(3) if r != i]
    sign = 1.0 if i % 2 == 0 else -1.0
    c0_ = A[j, 1] * A[k, 2] - A[j, 2] * A[k, 1]
    c1_ = -(A[j, 0] * A[k, 2] - A[j, 2] * A[k, 0])
    c2_ = A[j, 0] * A[k, 1] - A[j, 1] * A[k, 0]
    return sign * np.array([c0_, c1_, c2_], dtype=A.dtype)


def ground_state(params: RingParams, u: float, flux: TestFlux | None = None) -> GroundState3:
    """Ground state from the adjugate of (H - E_g).

    The default construction is the cofactor row of the dot site; when
    all of its components fall below the degeneracy scale the state is
    rebuilt from another cofactor row and used_fallback is set.  A fully
    degenerate ground level raises DegenerateSpectrumError.
    """
    u = float(u)
    spect = eigenvalues_trig(params, u, flux)
    E = spect.E_g
    H = build_hamiltonian_3site(params, u, flux)
    A = (H - E * np.eye(3)).astype(complex)

    scale = abs(u) + abs(E) + abs(params.c0) + abs(params.c1) + abs(params.c2)
    floor = COFACTOR_RTOL * max(scale * scale, 1e-300)

    default = _cofactor_row(A, 0)
    norm_S = float(np.sum(np.abs(default) ** 2))

    vec = default
    used_fallback = False
    if math.sqrt(norm_S) < floor:
        candidates = [_cofactor_row(A, i) for i in (1, 2)]
        norms = [np.linalg.norm(v) for v in candidates]
        best = int(np.argmax(norms))
        if norms[best] < floor:
            raise DegenerateSpectrumError(
                f"ground level degenerate at u={u}: all adjugate columns vanish"
            )
        vec = candidates[best]
        used_fallback = True

    vec = vec / np.linalg.norm(vec)
    k = int(np.argmax(np.abs(vec)))
    phase = vec[k] / abs(vec[k])
    vec = vec * phase.conjugate()
    if flux is None or flux.phi == 0.0:
        vec = vec.real.astype(complex)  # real symmetric H: drop residual imag
        vec = vec / np.linalg.norm(vec)
    return GroundState3(energy=E, amplitudes=vec, norm_S=norm_S, used_fallback=used_fallback)


def oracle_eigensolve(H: np.ndarray):
    """Full eigendecomposition by LAPACK, independent of the trig formulas.

    Returns (energies, vectors) with energies ascending and vectors as
    orthonormal columns.  Raises NonHermitianInputError when the input
    is not Hermitian within 1e-12 * max(1, |H|_max).
    """
    H = np.asarray(H)
    if H.shape != (3, 3):
        raise NonHermitianInputError(f"expected a 3x3 matrix, got shape {H.shape}")
    hmax = float(np.max(np.abs(H)))
    if np.max(np.abs(H - H.conj().T)) > 1e-12 * max(1.0, hmax):
        raise NonHermitianInputError("matrix is not Hermitian")
    w, v = np.linalg.eigh(H)
    return w, v
