"""Hamiltonians and bond-current operators for the two-site and three-site models.

Site 0 is the driven "dot" at potential u; sites 1 and 2 form the "wire",
coupled to each other by c0 and to the dot by c1 (bond 0-1) and c2
(bond 0-2).  All couplings are real (no magnetic field).  To define a
bond current operator an auxiliary test flux phi is inserted on one bond
by substituting c -> c e^{i phi} on the lower-triangle matrix entry; the
current operator is I = -dH/dphi.  phi = 0 is the physical point.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

# Builders produce matrices that are Hermitian to this absolute tolerance
# (by construction they are exactly Hermitian; the constant documents the
# contract checked by is_hermitian).
HERMITICITY_ATOL = 1e-14


class Bond(enum.Enum):
    """Bond carrying the test flux (and hence the monitored current)."""

    BOND_01 = "01"
    BOND_12 = "12"
    BOND_02 = "02"


@dataclass(frozen=True)
class RingParams:
    """Couplings of the three-site ring.

    c0 is the intra-wire bond 1-2, c1 the dot bond 0-1, c2 the dot
    bond 0-2.  No sign restriction; choosing c1 > 0 is a gauge
    convention, not a constraint.
    """

    c0: float
    c1: float
    c2: float

    def __post_init__(self):
        for name in ("c0", "c1", "c2"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    @property
    def c_plus(self) -> float:
        """Coupling of the dot to the even wire state, (c1 + c2)/sqrt(2)."""
        return (self.c1 + self.c2) / math.sqrt(2.0)

    @property
    def c_minus(self) -> float:
        """Coupling of the dot to the odd wire state, (c1 - c2)/sqrt(2)."""
        return (self.c1 - self.c2) / math.sqrt(2.0)

    def swapped(self) -> "RingParams":
        """Relabel the wire sites (c1 <-> c2); maps bond 0-1 onto bond 0-2."""
        return RingParams(self.c0, self.c2, self.c1)


@dataclass(frozen=True)
class TestFlux:
    """Auxiliary flux phi (radians) threaded through one bond."""

    __test__ = False  # not a test case, despite the name

    phi: float = 0.0
    bond: Bond = Bond.BOND_01

    def __post_init__(self):
        if not math.isfinite(self.phi):
            raise ValueError(f"phi must be finite, got {self.phi!r}")


@dataclass(frozen=True)
class TwoSiteParams:
    """Single-path crossing: coupling C, crossed level u_c, current scale lam.

    lam = 1 for the physical two-site system; effective two-level
    reductions of the ring reuse this container with lam equal to the
    splitting ratio.
    """

    C: float
    u_c: float = 0.0
    lam: float = 1.0

    def __post_init__(self):
        for name in ("C", "u_c", "lam"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


def _bond_couplings(params: RingParams, flux: TestFlux):
    """Lower-triangle entries (t10, t20, t21) with the flux phase applied."""
    t10 = complex(params.c1)
    t20 = complex(params.c2)
    t21 = complex(params.c0)
    phase = cmath.exp(1j * flux.phi)
    if flux.bond is Bond.BOND_01:
        t10 *= phase
    elif flux.bond is Bond.BOND_02:
        t20 *= phase
    else:
        t21 *= phase
    return t10, t20, t21


def build_hamiltonian_3site(params: RingParams, u: float, flux: TestFlux | None = None) -> np.ndarray:
    """Dense 3x3 ring Hamiltonian with dot potential u.

    Returns a real symmetric float array at phi = 0 and a complex
    Hermitian array otherwise.  Diagonal is (u, 0, 0); the flux phase
    multiplies the lower-triangle entry of the selected bond.
    """
    if flux is None:
        flux = TestFlux()
    if not math.isfinite(u):
        raise ValueError(f"u must be finite, got {u!r}")
    if flux.phi == 0.0:
        return np.array(
            [[u, params.c1, params.c2],
             [params.c1, 0.0, params.c0],
             [params.c2, params.c0, 0.0]],
            dtype=float,
        )
    t10, t20, t21 = _bond_couplings(params, flux)
    H = np.zeros((3, 3), dtype=complex)
    H[0, 0] = u
    H[1, 0] = t10
    H[0, 1] = t10.conjugate()
    H[2, 0] = t20
    H[0, 2] = t20.conjugate()
    H[2, 1] = t21
    H[1, 2] = t21.conjugate()
    return H


def build_current_operator(params: RingParams, flux: TestFlux | None = None) -> np.ndarray:
    """Bond current operator I = -dH/dphi, evaluated at the flux's phi.

    At phi = 0 on bond 0-1 the only nonzero entries are
    (0,1) = +i c1 and (1,0) = -i c1; positive expectation values mean
    flow from the lower-numbered site into the higher-numbered one.
    """
    if flux is None:
        flux = TestFlux()
    t10, t20, t21 = _bond_couplings(params, flux)
    I = np.zeros((3, 3), dtype=complex)
    if flux.bond is Bond.BOND_01:
        I[1, 0] = -1j * t10
        I[0, 1] = 1j * t10.conjugate()
    elif flux.bond is Bond.BOND_02:
        I[2, 0] = -1j * t20
        I[0, 2] = 1j * t20.conjugate()
    else:
        I[2, 1] = -1j * t21
        I[1, 2] = 1j * t21.conjugate()
    return I


def build_hamiltonian_2site(p: TwoSiteParams, u: float, phi: float = 0.0) -> np.ndarray:
    """2x2 crossing Hamiltonian: diagonal (u, u_c), coupling C e^{i phi} below."""
    if not math.isfinite(u):
        raise ValueError(f"u must be finite, got {u!r}")
    if phi == 0.0:
        return np.array([[u, p.C], [p.C, p.u_c]], dtype=float)
    t = p.C * cmath.exp(1j * phi)
    return np.array([[u, t.conjugate()], [t, p.u_c]], dtype=complex)


def build_current_operator_2site(p: TwoSiteParams, phi: float = 0.0) -> np.ndarray:
    """Current operator of the two-site model, lam * (-dH/dphi)."""
    t = p.C * cmath.exp(1j * phi)
    return p.lam * np.array([[0.0, 1j * t.conjugate()], [-1j * t, 0.0]], dtype=complex)


def is_hermitian(H: np.ndarray, atol: float = HERMITICITY_ATOL) -> bool:
    """True when H equals its conjugate transpose within atol (absolute)."""
    return bool(np.max(np.abs(H - H.conj().T)) <= atol)
