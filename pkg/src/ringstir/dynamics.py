"""Time-dependent propagation for the linear sweep u(t) = u_start + u_dot t.

The stepper is the exponential midpoint rule: each accepted step applies
exp(-i H(t + dt/2) dt), which is exactly unitary, with step halving /
doubling driven by a step-doubling local-error estimate (the scheme is
second order, so the controller follows the cube-root law).  Physical
dynamics carries no test flux; bond currents are expectation values of
the phi = 0 current operators.  The transported charge accumulates by
the midpoint rule, Q += I(t + dt/2) dt, per accepted step -- the same
quadrature order as the stepper itself.

Hot loops are numba-compiled; the 3x3 eigenproblem inside the stepper
is solved by cyclic Jacobi rotations, so the propagator is independent
of the trigonometric closed forms it is tested against.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import NormDriftError, StepUnderflowError, ZeroCouplingError
from .model import Bond, RingParams, TwoSiteParams
from .twolevel import TwoLevelParams

# Margin factor in the adiabaticity inequalities ("much less than" is
# read as "below KAPPA_DEFAULT times").
KAPPA_DEFAULT = 0.1

_BOND_IDS = {Bond.BOND_01: 0, Bond.BOND_12: 1, Bond.BOND_02: 2}


class AdiabaticityRegime(enum.Enum):
    ADIABATIC = "adiabatic"
    DIABATIC_WINDOW = "diabatic_window"
    SUDDEN = "sudden"


@dataclass(frozen=True)
class SweepProtocol:
    """Linear sweep from u_start to u_end at rate u_dot (energy^2, hbar=1).

    initial_state None means the instantaneous ground state at u_start
    (which approaches the bare dot state as u_start -> -infinity); an
    explicit normalized amplitude vector overrides it.
    """

    u_dot: float
    u_start: float
    u_end: float
    initial_state: np.ndarray | None = None

    def __post_init__(self):
        if not (math.isfinite(self.u_dot) and self.u_dot > 0.0):
            raise ValueError(f"u_dot must be positive and finite, got {self.u_dot!r}")
        if not (math.isfinite(self.u_start) and math.isfinite(self.u_end)):
            raise ValueError("sweep window must be finite")
        if not self.u_start < self.u_end:
            raise ValueError("u_start must be below u_end")
        if self.initial_state is not None:
            psi = np.asarray(self.initial_state, dtype=complex)
            if abs(np.linalg.norm(psi) - 1.0) > 1e-9:
                raise ValueError("initial state must be normalized")
            object.__setattr__(self, "initial_state", psi)

    @property
    def duration(self) -> float:
        return (self.u_end - self.u_start) / self.u_dot


@dataclass(frozen=True)
class StepControl:
    """Adaptive-step settings; tol is local error per unit time."""

    tol: float = 1e-8
    dt_init: float | None = None
    dt_floor: float = 1e-12
    # largest tolerated single-step unitarity defect (|norm - 1| before
    # the norm projection); sampled states always carry norm 1 to eps
    drift_tol: float = 1e-9

    def __post_init__(self):
        if self.tol <= 0.0 or self.dt_floor <= 0.0 or self.drift_tol <= 0.0:
            raise ValueError("tolerances must be positive")


@dataclass
class TimeTrace:
    """Sampled trajectory of a sweep propagation."""

    t: np.ndarray
    u: np.ndarray
    amplitudes: np.ndarray
    current: np.ndarray
    q_dyn: np.ndarray
    u_dot: float
    bond: Bond
    q_final: float
    final_state: np.ndarray
    n_accepted: int
    n_rejected: int
    max_norm_drift: float

    @property
    def occupations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def current_over_udot(self) -> np.ndarray:
        return self.current / self.u_dot


@njit(cache=True)
def _jacobi3(a, V, w):
    """Cyclic Jacobi eigensolve of a symmetric 3x3; a is destroyed."""
    for i in range(3):
        for j in range(3):
            V[i, j] = 1.0 if i == j else 0.0
    for _ in range(30):
        off = a[0, 1] * a[0, 1] + a[0, 2] * a[0, 2] + a[1, 2] * a[1, 2]
        diag = a[0, 0] * a[0, 0] + a[1, 1] * a[1, 1] + a[2, 2] * a[2, 2]
        if off <= 1e-32 * (diag + 1e-300):
            break
        for p in range(2):
            for q in range(p + 1, 3):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    tee = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    tee = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + tee * tee)
                s = tee * c
                r = 3 - p - q
                a[p, p] = a[p, p] - tee * apq
                a[q, q] = a[q, q] + tee * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                arp = a[r, p]
                arq = a[r, q]
                a[r, p] = c * arp - s * arq
                a[p, r] = a[r, p]
                a[r, q] = s * arp + c * arq
                a[q, r] = a[r, q]
                for i in range(3):
                    vip = V[i, p]
                    viq = V[i, q]
                    V[i, p] = c * vip - s * viq
                    V[i, q] = s * vip + c * viq
    w[0] = a[0, 0]
    w[1] = a[1, 1]
    w[2] = a[2, 2]
    # Re-orthonormalize V (modified Gram-Schmidt).  The evolution step
    # V exp(-i w dt) V^T is exactly unitary iff V is orthogonal; without
    # this polish, rounding bias of ~1e-15 per step accumulates into a
    # visible norm drift over ~1e7 steps.
    n0 = math.sqrt(V[0, 0] ** 2 + V[1, 0] ** 2 + V[2, 0] ** 2)
    for i in range(3):
        V[i, 0] /= n0
    d01 = V[0, 0] * V[0, 1] + V[1, 0] * V[1, 1] + V[2, 0] * V[2, 1]
    for i in range(3):
        V[i, 1] -= d01 * V[i, 0]
    n1 = math.sqrt(V[0, 1] ** 2 + V[1, 1] ** 2 + V[2, 1] ** 2)
    for i in range(3):
        V[i, 1] /= n1
    # third column: cross product of the first two is exactly orthonormal
    V[0, 2] = V[1, 0] * V[2, 1] - V[2, 0] * V[1, 1]
    V[1, 2] = V[2, 0] * V[0, 1] - V[0, 0] * V[2, 1]
    V[2, 2] = V[0, 0] * V[1, 1] - V[1, 0] * V[0, 1]


@njit(cache=True)
def _expm_apply3(a, V, w, c0, c1, c2, u, dt, psi, out):
    """out = exp(-i H dt) psi for the phi = 0 ring Hamiltonian at u."""
    a[0, 0] = u
    a[0, 1] = c1
    a[0, 2] = c2
    a[1, 0] = c1
    a[1, 1] = 0.0
    a[1, 2] = c0
    a[2, 0] = c2
    a[2, 1] = c0
    a[2, 2] = 0.0
    _jacobi3(a, V, w)
    out[0] = 0.0 + 0.0j
    out[1] = 0.0 + 0.0j
    out[2] = 0.0 + 0.0j
    for k in range(3):
        y = V[0, k] * psi[0] + V[1, k] * psi[1] + V[2, k] * psi[2]
        y = y * np.exp(-1j * w[k] * dt)
        out[0] += V[0, k] * y
        out[1] += V[1, k] * y
        out[2] += V[2, k] * y


@njit(cache=True)
def _bond_current3(psi, c0, c1, c2, bond_id):
    if bond_id == 0:
        return -2.0 * c1 * (psi[0].conjugate() * psi[1]).imag
    elif bond_id == 1:
        return -2.0 * c0 * (psi[1].conjugate() * psi[2]).imag
    return -2.0 * c2 * (psi[0].conjugate() * psi[2]).imag


@njit(cache=True)
def _sweep_kernel3(c0, c1, c2, u_start, u_dot, t_final, psi0,
                   tol, dt_init, dt_cap, dt_floor, drift_tol, sample_t, bond_id):
    n_s = sample_t.shape[0]
    out_t = np.zeros(n_s)
    out_amp = np.zeros((n_s, 3), dtype=np.complex128)
    out_cur = np.zeros(n_s)
    out_q = np.zeros(n_s)
    a = np.zeros((3, 3))
    V = np.zeros((3, 3))
    w = np.zeros(3)
    tmp_full = np.zeros(3, dtype=np.complex128)
    tmp_mid = np.zeros(3, dtype=np.complex128)
    tmp_half = np.zeros(3, dtype=np.complex128)
    psi = psi0.copy()
    t = 0.0
    q = 0.0
    dt = dt_init
    i_s = 0
    n_acc = 0
    n_rej = 0
    max_drift = 0.0
    status = 0
    eps_t = 4e-16 * t_final + 1e-300
    while t_final - t > eps_t:
        rem = t_final - t
        dt_eff = dt
        if dt_eff > rem:
            dt_eff = rem
        # a remaining-time sliver below the floor is completion, not
        # stiffness; accept it unconditionally
        final_sliver = rem <= dt_floor
        _expm_apply3(a, V, w, c0, c1, c2,
                     u_start + u_dot * (t + 0.5 * dt_eff), dt_eff, psi, tmp_full)
        _expm_apply3(a, V, w, c0, c1, c2,
                     u_start + u_dot * (t + 0.25 * dt_eff), 0.5 * dt_eff, psi, tmp_mid)
        cur_mid = _bond_current3(tmp_mid, c0, c1, c2, bond_id)
        _expm_apply3(a, V, w, c0, c1, c2,
                     u_start + u_dot * (t + 0.75 * dt_eff), 0.5 * dt_eff, tmp_mid, tmp_half)
        err = math.sqrt(
            abs(tmp_full[0] - tmp_half[0]) ** 2
            + abs(tmp_full[1] - tmp_half[1]) ** 2
            + abs(tmp_full[2] - tmp_half[2]) ** 2
        )
        tol_step = tol * dt_eff
        if err <= tol_step or final_sliver:
            psi[0] = tmp_half[0]
            psi[1] = tmp_half[1]
            psi[2] = tmp_half[2]
            t += dt_eff
            q += cur_mid * dt_eff
            n_acc += 1
            nrm = math.sqrt(
                (psi[0].conjugate() * psi[0]).real
                + (psi[1].conjugate() * psi[1]).real
                + (psi[2].conjugate() * psi[2]).real
            )
            # single-step unitarity defect, measured before the norm is
            # projected back; a defective stepper trips the error, while
            # the projection stops the ~1e-16/step rounding bias from
            # accumulating over multi-million-step sweeps.
            drift = abs(nrm - 1.0)
            if drift > max_drift:
                max_drift = drift
            if drift > drift_tol:
                status = 2
                break
            psi[0] /= nrm
            psi[1] /= nrm
            psi[2] /= nrm
            slack = 1e-12 * (1.0 + t)
            while i_s < n_s and sample_t[i_s] <= t + slack:
                out_t[i_s] = t
                out_amp[i_s, 0] = psi[0]
                out_amp[i_s, 1] = psi[1]
                out_amp[i_s, 2] = psi[2]
                out_cur[i_s] = _bond_current3(psi, c0, c1, c2, bond_id)
                out_q[i_s] = q
                i_s += 1
        else:
            n_rej += 1
        if err > 0.0:
            fac = 0.9 * (tol_step / err) ** (1.0 / 3.0)
            if fac < 0.2:
                fac = 0.2
            elif fac > 2.5:
                fac = 2.5
        else:
            fac = 2.5
        dt = dt_eff * fac
        if dt > dt_cap:
            dt = dt_cap
        if dt < dt_floor and not final_sliver:
            status = 1
            break
    return status, i_s, out_t, out_amp, out_cur, out_q, q, psi, n_acc, n_rej, max_drift


@njit(cache=True)
def _expm_apply2(C, u_c, u, dt, psi, out):
    """out = exp(-i H dt) psi for the 2x2 crossing Hamiltonian at u."""
    half = 0.5 * (u + u_c)
    delta = 0.5 * (u - u_c)
    r = math.hypot(delta, C)
    chi = math.atan2(C, delta)
    cc = math.cos(0.5 * chi)
    ss = math.sin(0.5 * chi)
    # v_plus = (cc, ss) with eigenvalue half + r; v_minus = (-ss, cc)
    yp = (cc * psi[0] + ss * psi[1]) * np.exp(-1j * (half + r) * dt)
    ym = (-ss * psi[0] + cc * psi[1]) * np.exp(-1j * (half - r) * dt)
    out[0] = cc * yp - ss * ym
    out[1] = ss * yp + cc * ym


@njit(cache=True)
def _sweep_kernel2(C, u_c, lam, u_start, u_dot, t_final, psi0,
                   tol, dt_init, dt_cap, dt_floor, drift_tol, sample_t):
    n_s = sample_t.shape[0]
    out_t = np.zeros(n_s)
    out_amp = np.zeros((n_s, 2), dtype=np.complex128)
    out_cur = np.zeros(n_s)
    out_q = np.zeros(n_s)
    tmp_full = np.zeros(2, dtype=np.complex128)
    tmp_mid = np.zeros(2, dtype=np.complex128)
    tmp_half = np.zeros(2, dtype=np.complex128)
    psi = psi0.copy()
    t = 0.0
    q = 0.0
    dt = dt_init
    i_s = 0
    n_acc = 0
    n_rej = 0
    max_drift = 0.0
    status = 0
    eps_t = 4e-16 * t_final + 1e-300
    while t_final - t > eps_t:
        rem = t_final - t
        dt_eff = dt
        if dt_eff > rem:
            dt_eff = rem
        # a remaining-time sliver below the floor is completion, not
        # stiffness; accept it unconditionally
        final_sliver = rem <= dt_floor
        _expm_apply2(C, u_c, u_start + u_dot * (t + 0.5 * dt_eff), dt_eff, psi, tmp_full)
        _expm_apply2(C, u_c, u_start + u_dot * (t + 0.25 * dt_eff), 0.5 * dt_eff, psi, tmp_mid)
        cur_mid = -2.0 * lam * C * (tmp_mid[0].conjugate() * tmp_mid[1]).imag
        _expm_apply2(C, u_c, u_start + u_dot * (t + 0.75 * dt_eff), 0.5 * dt_eff, tmp_mid, tmp_half)
        err = math.sqrt(
            abs(tmp_full[0] - tmp_half[0]) ** 2 + abs(tmp_full[1] - tmp_half[1]) ** 2
        )
        tol_step = tol * dt_eff
        if err <= tol_step or final_sliver:
            psi[0] = tmp_half[0]
            psi[1] = tmp_half[1]
            t += dt_eff
            q += cur_mid * dt_eff
            n_acc += 1
            nrm = math.sqrt(
                (psi[0].conjugate() * psi[0]).real + (psi[1].conjugate() * psi[1]).real
            )
            drift = abs(nrm - 1.0)  # pre-projection defect, as in the ring kernel
            if drift > max_drift:
                max_drift = drift
            if drift > drift_tol:
                status = 2
                break
            psi[0] /= nrm
            psi[1] /= nrm
            slack = 1e-12 * (1.0 + t)
            while i_s < n_s and sample_t[i_s] <= t + slack:
                out_t[i_s] = t
                out_amp[i_s, 0] = psi[0]
                out_amp[i_s, 1] = psi[1]
                out_cur[i_s] = -2.0 * lam * C * (psi[0].conjugate() * psi[1]).imag
                out_q[i_s] = q
                i_s += 1
        else:
            n_rej += 1
        if err > 0.0:
            fac = 0.9 * (tol_step / err) ** (1.0 / 3.0)
            if fac < 0.2:
                fac = 0.2
            elif fac > 2.5:
                fac = 2.5
        else:
            fac = 2.5
        dt = dt_eff * fac
        if dt > dt_cap:
            dt = dt_cap
        if dt < dt_floor and not final_sliver:
            status = 1
            break
    return status, i_s, out_t, out_amp, out_cur, out_q, q, psi, n_acc, n_rej, max_drift


def _step_bounds(u_dot, coupling_norm, tol, t_final, dt_floor):
    """Initial step and hard cap from the exact leading local error.

    For a linear sweep the midpoint rule reproduces the first Magnus
    term exactly, so the leading local error is the commutator term
    dt^3 u_dot ||[H0, n0]|| / 12 with ||[H0, n0]|| = coupling_norm,
    independent of u.  The cap matters because the step-doubling
    estimate goes blind once dt * ||H|| >> 1 (phase aliasing) and would
    otherwise let the controller grow dt without bound.
    """
    rate = max(u_dot * coupling_norm, 1e-300)
    dt_cap = min(math.sqrt(12.0 * tol / rate), t_final / 8.0)
    return dt_cap, dt_cap


def _finish(status, u_start):
    if status == 1:
        raise StepUnderflowError(
            f"adaptive step underflow near u = {u_start}: input too stiff"
        )
    if status == 2:
        raise NormDriftError("state norm drifted beyond the unitarity tolerance")


def propagate(
    params: RingParams,
    protocol: SweepProtocol,
    control: StepControl | None = None,
    n_samples: int = 1000,
    bond: Bond = Bond.BOND_01,
) -> TimeTrace:
    """Solve i dpsi/dt = H(u(t)) psi over the sweep and record a TimeTrace.

    Parameters
    ----------
    params : RingParams
        Ring couplings; the propagation Hamiltonian carries no flux.
    protocol : SweepProtocol
        Sweep window, rate, and optional initial state.
    control : StepControl, optional
        Adaptive-step tolerances.
    n_samples : int
        Number of (approximately) evenly spaced samples to record;
        samples are taken at the first accepted step boundary past each
        target time.
    bond : Bond
        Which bond current is recorded and integrated into Q_dyn.

    Raises StepUnderflowError or NormDriftError on integration failure.
    """
    if control is None:
        control = StepControl()
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    if protocol.initial_state is not None:
        psi0 = protocol.initial_state.astype(np.complex128)
        if psi0.shape != (3,):
            raise ValueError("ring initial state must have 3 amplitudes")
    else:
        from .spectral import ground_state

        psi0 = ground_state(params, protocol.u_start).amplitudes.astype(np.complex128)
    t_final = protocol.duration
    coupling_norm = math.sqrt(2.0 * (params.c1 ** 2 + params.c2 ** 2))
    dt0, dt_cap = _step_bounds(
        protocol.u_dot, coupling_norm, control.tol, t_final, control.dt_floor
    )
    if control.dt_init is not None:
        dt0 = min(control.dt_init, dt_cap)
    sample_t = np.linspace(0.0, t_final, n_samples)
    (status, i_s, out_t, out_amp, out_cur, out_q, q, psi,
     n_acc, n_rej, max_drift) = _sweep_kernel3(
        params.c0, params.c1, params.c2,
        protocol.u_start, protocol.u_dot, t_final, psi0,
        control.tol, dt0, dt_cap, control.dt_floor, control.drift_tol,
        sample_t, _BOND_IDS[bond],
    )
    _finish(status, protocol.u_start + protocol.u_dot * (out_t[max(i_s - 1, 0)] if i_s else 0.0))
    return TimeTrace(
        t=out_t[:i_s],
        u=protocol.u_start + protocol.u_dot * out_t[:i_s],
        amplitudes=out_amp[:i_s],
        current=out_cur[:i_s],
        q_dyn=out_q[:i_s],
        u_dot=protocol.u_dot,
        bond=bond,
        q_final=float(q),
        final_state=psi,
        n_accepted=int(n_acc),
        n_rejected=int(n_rej),
        max_norm_drift=float(max_drift),
    )


def propagate_two_site(
    p: TwoSiteParams,
    protocol: SweepProtocol,
    control: StepControl | None = None,
    n_samples: int = 1000,
) -> TimeTrace:
    """Two-site analog of propagate; the current carries the lam factor."""
    if control is None:
        control = StepControl()
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    if protocol.initial_state is not None:
        psi0 = protocol.initial_state.astype(np.complex128)
        if psi0.shape != (2,):
            raise ValueError("two-site initial state must have 2 amplitudes")
    else:
        from .model import build_hamiltonian_2site

        _, v = np.linalg.eigh(build_hamiltonian_2site(p, protocol.u_start))
        psi0 = v[:, 0].astype(np.complex128)
    t_final = protocol.duration
    dt0, dt_cap = _step_bounds(
        protocol.u_dot, math.sqrt(2.0) * abs(p.C), control.tol, t_final, control.dt_floor
    )
    if control.dt_init is not None:
        dt0 = min(control.dt_init, dt_cap)
    sample_t = np.linspace(0.0, t_final, n_samples)
    (status, i_s, out_t, out_amp, out_cur, out_q, q, psi,
     n_acc, n_rej, max_drift) = _sweep_kernel2(
        p.C, p.u_c, p.lam,
        protocol.u_start, protocol.u_dot, t_final, psi0,
        control.tol, dt0, dt_cap, control.dt_floor, control.drift_tol, sample_t,
    )
    _finish(status, protocol.u_start)
    return TimeTrace(
        t=out_t[:i_s],
        u=protocol.u_start + protocol.u_dot * out_t[:i_s],
        amplitudes=out_amp[:i_s],
        current=out_cur[:i_s],
        q_dyn=out_q[:i_s],
        u_dot=protocol.u_dot,
        bond=Bond.BOND_01,
        q_final=float(q),
        final_state=psi,
        n_accepted=int(n_acc),
        n_rejected=int(n_rej),
        max_norm_drift=float(max_drift),
    )


def adiabaticity_classify(
    params: RingParams, u_dot: float, kappa: float = KAPPA_DEFAULT
) -> AdiabaticityRegime:
    """Sweep-rate regime for the double-path crossing.

    The crossing coupling is C = |c1 - c2|/sqrt(2).  Adiabatic when
    u_dot <= kappa * min(c0^2, C^2); the diabatic window is
    kappa c0^2 < u_dot <= kappa C^2 (crossing adiabatic, intra-wire
    re-adjustment suppressed); everything else is sudden.  With c1 = c2
    the crossing is never adiabatic for u_dot > 0.
    """
    if u_dot <= 0.0:
        raise ValueError("u_dot must be positive")
    if kappa <= 0.0:
        raise ValueError("kappa must be positive")
    c_sq = 0.5 * (params.c1 - params.c2) ** 2
    c0_sq = params.c0 ** 2
    if u_dot <= kappa * min(c0_sq, c_sq):
        return AdiabaticityRegime.ADIABATIC
    if kappa * c0_sq < u_dot <= kappa * c_sq:
        return AdiabaticityRegime.DIABATIC_WINDOW
    return AdiabaticityRegime.SUDDEN


def max_current_estimate(tl: TwoLevelParams, kappa: float = KAPPA_DEFAULT) -> float:
    """Order-of-magnitude cap on the bond current near a reduced crossing.

    The profile peak is lam/(4|C|) and the fastest adiabatic rate is
    kappa C^2, so I_max ~ kappa |lam| |C| / 4.
    """
    if tl.C_eff == 0.0:
        raise ZeroCouplingError("C_eff = 0: no crossing, no current scale")
    return kappa * abs(tl.lam) * abs(tl.C_eff) / 4.0
