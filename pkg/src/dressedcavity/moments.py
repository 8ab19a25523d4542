"""Closed six-moment dynamics of the cavity mode and the dressed inversion.

Because the qubit inversion squares to one, the hierarchy of moments
truncates exactly: the photon number, the inversion-field correlation, the
field amplitude, and the inversion obey a closed linear system. Conjugate
partners are derived from the stored members, never integrated separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dressing import DressedFrame, rz_steady
from .errors import DomainError, NonFiniteState, SingularCavity, ZeroRelaxation
from .params import SystemParams


@dataclass(frozen=True)
class MomentState:
    """One point of the closed moment system.

    n       <a+ a>, mean photon number
    rza     <R_z a>; its conjugate is <R_z a+>
    a_mean  <a>; its conjugate is <a+>
    rz      <R_z>, dressed-state inversion
    """

    n: float
    rza: complex
    a_mean: complex
    rz: float


@dataclass(frozen=True)
class MomentTrajectory:
    times: list[float]
    states: list[MomentState]


def ground_state() -> MomentState:
    """Empty cavity, atom in the lower dressed state."""
    return MomentState(n=0.0, rza=0.0 + 0.0j, a_mean=0.0 + 0.0j, rz=-1.0)


def moment_rhs(s: MomentState, f: DressedFrame, p: SystemParams) -> MomentState:
    """Time derivatives of the six moments, term by term as the model states them."""
    g0 = f.g0
    gs = f.gamma_cap_plus + f.gamma_cap_minus
    gd = f.gamma_cap_plus - f.gamma_cap_minus
    u = complex(p.kappa, p.delta_c)
    a_dag = s.a_mean.conjugate()
    rza_dag = s.rza.conjugate()
    dn = (
        1j * g0 * s.rza
        + 1j * p.epsilon * s.a_mean
        - 1j * g0.conjugate() * rza_dag
        - 1j * p.epsilon * a_dag
        - 2.0 * p.kappa * s.n
    )
    drza = (
        -(u + 2.0 * gs) * s.rza
        - 2.0 * gd * s.a_mean
        - 1j * p.epsilon * s.rz
        - 1j * g0.conjugate()
    )
    da = -u * s.a_mean - 1j * g0.conjugate() * s.rz - 1j * p.epsilon
    drz = -2.0 * gs * s.rz + 2.0 * (f.gamma_cap_minus - f.gamma_cap_plus)
    return MomentState(n=dn.real, rza=drza, a_mean=da, rz=drz)


def system_matrix(f: DressedFrame, p: SystemParams) -> tuple[np.ndarray, np.ndarray]:
    """Real 6x6 form dy/dt = M y + b with y = (n, Re rza, Im rza, Re a, Im a, rz)."""
    g_r = f.g0.real
    g_i = f.g0.imag
    gs = f.gamma_cap_plus + f.gamma_cap_minus
    gd = f.gamma_cap_plus - f.gamma_cap_minus
    kappa = p.kappa
    delta = p.delta_c
    eps = p.epsilon
    m = np.zeros((6, 6))
    b = np.zeros(6)
    m[0, 0] = -2.0 * kappa
    m[0, 1] = -2.0 * g_i
    m[0, 2] = -2.0 * g_r
    m[0, 4] = -2.0 * eps
    m[1, 1] = -(kappa + 2.0 * gs)
    m[1, 2] = delta
    m[1, 3] = -2.0 * gd
    b[1] = -g_i
    m[2, 1] = -delta
    m[2, 2] = -(kappa + 2.0 * gs)
    m[2, 4] = -2.0 * gd
    m[2, 5] = -eps
    b[2] = -g_r
    m[3, 3] = -kappa
    m[3, 4] = delta
    m[3, 5] = -g_i
    m[4, 3] = -delta
    m[4, 4] = -kappa
    m[4, 5] = -g_r
    b[4] = -eps
    m[5, 5] = -2.0 * gs
    b[5] = 2.0 * (f.gamma_cap_minus - f.gamma_cap_plus)
    return m, b


def _to_vector(s: MomentState) -> np.ndarray:
    return np.array(
        [s.n, s.rza.real, s.rza.imag, s.a_mean.real, s.a_mean.imag, s.rz]
    )


def _from_vector(y: np.ndarray) -> MomentState:
    return MomentState(
        n=float(y[0]),
        rza=complex(y[1], y[2]),
        a_mean=complex(y[3], y[4]),
        rz=float(y[5]),
    )


def steady_state(f: DressedFrame, p: SystemParams) -> MomentState:
    """Exact fixed point by cascaded substitution.

    The system is triangular in the order rz, a_mean, rza, n, so each line
    solves in closed form given the previous ones.
    """
    rz = rz_steady(f)
    u = complex(p.kappa, p.delta_c)
    if u == 0.0:
        raise SingularCavity("kappa + i delta_c vanishes")
    gs = f.gamma_cap_plus + f.gamma_cap_minus
    gd = f.gamma_cap_plus - f.gamma_cap_minus
    a_mean = -1j * (p.epsilon + f.g0.conjugate() * rz) / u
    rza = (-2.0 * gd * a_mean - 1j * p.epsilon * rz - 1j * f.g0.conjugate()) / (
        u + 2.0 * gs
    )
    n = -(f.g0 * rza + p.epsilon * a_mean).imag / p.kappa
    return MomentState(n=n, rza=rza, a_mean=a_mean, rz=rz)


def steady_state_linear(f: DressedFrame, p: SystemParams) -> MomentState:
    """Generic 6x6 solve of the same fixed point; second code path for tests."""
    if f.gamma_cap_plus + f.gamma_cap_minus <= 0.0:
        raise ZeroRelaxation(
            "gamma_cap_plus + gamma_cap_minus is zero; the inversion has no fixed point"
        )
    m, b = system_matrix(f, p)
    try:
        y = np.linalg.solve(m, -b)
    except np.linalg.LinAlgError as exc:
        raise SingularCavity(f"steady-state system is singular: {exc}") from exc
    return _from_vector(y)


def default_dt(f: DressedFrame, p: SystemParams) -> float:
    """Step bound: a thousandth of the fastest timescale in the system."""
    rate = max(
        p.kappa,
        abs(p.delta_c),
        p.epsilon,
        abs(f.g0),
        2.0 * (f.gamma_cap_plus + f.gamma_cap_minus),
    )
    return 1e-3 / rate


def evolve(
    s0: MomentState,
    f: DressedFrame,
    p: SystemParams,
    t_final: float,
    dt: float | None = None,
    record_dt: float | None = None,
) -> MomentTrajectory:
    """Integrate the linear system with the classical fourth-order scheme.

    For a constant-coefficient affine system the classical one-step update
    collapses to a polynomial map y -> phi y + psi, which is precomposed per
    record block by binary powering; the result matches stepwise application
    in exact arithmetic. ``record_dt`` sets the sampling interval of the
    returned trajectory (default: every step).
    """
    if t_final <= 0.0:
        raise DomainError(f"t_final must be positive, got {t_final}")
    if dt is None:
        dt = default_dt(f, p)
    if dt <= 0.0:
        raise DomainError(f"dt must be positive, got {dt}")
    if record_dt is None:
        n_records = max(1, math.ceil(t_final / dt))
        inner = 1
    else:
        if record_dt <= 0.0:
            raise DomainError(f"record_dt must be positive, got {record_dt}")
        n_records = max(1, round(t_final / record_dt))
        inner = max(1, math.ceil(t_final / n_records / dt))
    block = t_final / n_records
    h = block / inner
    m, b = system_matrix(f, p)
    hm = h * m
    hm2 = hm @ hm
    hm3 = hm2 @ hm
    phi = np.eye(6) + hm + hm2 / 2.0 + hm3 / 6.0 + hm3 @ hm / 24.0
    psi = (h * (np.eye(6) + hm / 2.0 + hm2 / 6.0 + hm3 / 24.0)) @ b
    # compose inner steps: (phi, psi) -> (phi^2, phi psi + psi), binary powering
    phi_block = np.eye(6)
    psi_block = np.zeros(6)
    base_phi, base_psi = phi, psi
    k = inner
    while k:
        if k & 1:
            psi_block = base_phi @ psi_block + base_psi
            phi_block = base_phi @ phi_block
        k >>= 1
        if k:
            base_psi = base_phi @ base_psi + base_psi
            base_phi = base_phi @ base_phi
    y = _to_vector(s0)
    times = [0.0]
    states = [s0]
    peak = s0.n
    for step in range(1, n_records + 1):
        y = phi_block @ y + psi_block
        if not np.all(np.isfinite(y)):
            raise NonFiniteState(f"moment integration diverged at t = {step * block}")
        assert y[0] >= -1e-9 * max(1.0, peak), "photon number went negative"
        peak = max(peak, y[0])
        times.append(step * block)
        states.append(_from_vector(y))
    return MomentTrajectory(times=times, states=states)
