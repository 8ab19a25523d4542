"""Brute-force density-matrix reference in a truncated qubit-Fock space.

Everything the moment and closed-form layers claim is checked against direct
propagation of the master equation here. The basis is dressed throughout:
flat index q * fock_dim + n with q = 0 the upper and q = 1 the lower dressed
state. Operators are dense matrices; time stepping and fixed-point solves go
through an internal sparse superoperator built from the same matrices.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from .dressing import DressedFrame
from .errors import (
    DomainError,
    NoConvergence,
    NonFiniteState,
    TruncationBreached,
    TruncationTooLarge,
    UsageError,
    ZeroRelaxation,
)
from .moments import steady_state as moment_steady_state
from .params import SystemParams


@dataclass(frozen=True)
class HilbertSpace:
    """Fock truncation; photon numbers run 0..fock_dim-1, total dimension 2*fock_dim."""

    fock_dim: int

    @property
    def dim(self) -> int:
        return 2 * self.fock_dim


@dataclass(frozen=True)
class SpaceOperators:
    a: np.ndarray
    a_dag: np.ndarray
    number: np.ndarray
    r_z: np.ndarray
    r_plus: np.ndarray
    r_minus: np.ndarray


@dataclass(frozen=True)
class OracleSample:
    """Expectations tracked along an oracle evolution."""

    n: float
    rza: complex
    a_mean: complex
    rz: float
    tail_pop: float


@dataclass(frozen=True)
class OracleTrajectory:
    times: list[float]
    samples: list[OracleSample]


def operators(space: HilbertSpace) -> SpaceOperators:
    n = space.fock_dim
    a_f = np.diag(np.sqrt(np.arange(1.0, n)), 1).astype(complex)
    eye_q = np.eye(2, dtype=complex)
    s_z = np.diag([1.0, -1.0]).astype(complex)
    s_plus = np.zeros((2, 2), dtype=complex)
    s_plus[0, 1] = 1.0
    a = np.kron(eye_q, a_f)
    a_dag = a.conj().T
    return SpaceOperators(
        a=a,
        a_dag=a_dag,
        number=a_dag @ a,
        r_z=np.kron(s_z, np.eye(n, dtype=complex)),
        r_plus=np.kron(s_plus, np.eye(n, dtype=complex)),
        r_minus=np.kron(s_plus.T, np.eye(n, dtype=complex)),
    )


def ground_state(space: HilbertSpace) -> np.ndarray:
    """Lower dressed state, empty cavity."""
    rho = np.zeros((space.dim, space.dim), dtype=complex)
    rho[space.fock_dim, space.fock_dim] = 1.0
    return rho


def build_h0(p: SystemParams, f: DressedFrame, space: HilbertSpace) -> np.ndarray:
    """Secular Hamiltonian: splitting, cavity, drive, inversion-conditioned shift."""
    ops = operators(space)
    return (
        f.omega_bar * ops.r_z
        + p.delta_c * ops.number
        + p.epsilon * (ops.a_dag + ops.a)
        + ops.r_z @ (f.g0.conjugate() * ops.a_dag + f.g0 * ops.a)
    )


def build_h_full(p: SystemParams, f: DressedFrame, space: HilbertSpace) -> np.ndarray:
    """Secular Hamiltonian plus the counter-rotating coupling terms."""
    ops = operators(space)
    norm = math.hypot(2.0 * p.omega_rabi, p.delta_a)
    cos_two = p.delta_a / norm
    cos_sq = 0.5 * (1.0 + cos_two)  # cos^2 theta
    sin_sq = 0.5 * (1.0 - cos_two)  # sin^2 theta
    v = (
        p.g
        * cmath.exp(-1j * p.phi)
        * (cos_sq * ops.r_minus - sin_sq * ops.r_plus)
        @ ops.a_dag
    )
    return build_h0(p, f, space) + v + v.conj().T


def lindblad_rhs(
    rho: np.ndarray,
    p: SystemParams,
    f: DressedFrame,
    space: HilbertSpace,
    hamiltonian: np.ndarray,
) -> np.ndarray:
    """Master-equation right side, term by term as the model states it."""
    ops = operators(space)
    out = -1j * (hamiltonian @ rho - rho @ hamiltonian)
    channels = (
        (p.kappa, ops.a_dag, ops.a),
        (f.gamma_cap_0, ops.r_z, ops.r_z),
        (f.gamma_cap_plus, ops.r_plus, ops.r_minus),
        (f.gamma_cap_minus, ops.r_minus, ops.r_plus),
    )
    for rate, left, right in channels:
        rr = right @ rho
        term = -rate * (left @ rr - rr @ left)
        out += term + term.conj().T
    return out


def _superoperator(
    p: SystemParams, f: DressedFrame, space: HilbertSpace, hamiltonian: np.ndarray
) -> sp.csr_matrix:
    """Sparse matrix acting on the row-major vectorized density matrix.

    Same generator as lindblad_rhs, rearranged into drift plus jump form
    (the inversion dissipator contributes a scalar drift since R_z squares
    to the identity).
    """
    ops = operators(space)
    d = space.dim
    drift = (
        -1j * hamiltonian
        - p.kappa * ops.number
        - f.gamma_cap_0 * np.eye(d, dtype=complex)
        - f.gamma_cap_plus * (ops.r_plus @ ops.r_minus)
        - f.gamma_cap_minus * (ops.r_minus @ ops.r_plus)
    )
    g_s = sp.csr_matrix(drift)
    eye = sp.identity(d, format="csr", dtype=complex)
    a_s = sp.csr_matrix(ops.a)
    rz_s = sp.csr_matrix(ops.r_z)
    rp_s = sp.csr_matrix(ops.r_plus)
    rm_s = sp.csr_matrix(ops.r_minus)
    lind = (
        sp.kron(g_s, eye)
        + sp.kron(eye, g_s.conj())
        + 2.0 * p.kappa * sp.kron(a_s, a_s.conj())
        + 2.0 * f.gamma_cap_0 * sp.kron(rz_s, rz_s.conj())
        + 2.0 * f.gamma_cap_plus * sp.kron(rm_s, rm_s.conj())
        + 2.0 * f.gamma_cap_minus * sp.kron(rp_s, rp_s.conj())
    )
    return lind.tocsr()


class _ExpectationKit:
    """Precomputed arrays for cheap expectation extraction from a dense rho."""

    def __init__(self, space: HilbertSpace):
        ops = operators(space)
        self.fock_dim = space.fock_dim
        self.numbers = np.real(np.diag(ops.number))
        self.rz_diag = np.real(np.diag(ops.r_z))
        self.a_t = ops.a.T.copy()
        self.rza_t = (ops.r_z @ ops.a).T.copy()

    def sample(self, rho: np.ndarray) -> OracleSample:
        pops = np.real(np.diag(rho))
        return OracleSample(
            n=float(self.numbers @ pops),
            rza=complex(np.sum(rho * self.rza_t)),
            a_mean=complex(np.sum(rho * self.a_t)),
            rz=float(self.rz_diag @ pops),
            tail_pop=float(pops[self.fock_dim - 1] + pops[-1]),
        )


def expectations(rho: np.ndarray, space: HilbertSpace) -> OracleSample:
    return _ExpectationKit(space).sample(rho)


def _hamiltonian_for(
    p: SystemParams, f: DressedFrame, space: HilbertSpace, choice: str
) -> np.ndarray:
    if choice == "secular":
        return build_h0(p, f, space)
    if choice == "full":
        return build_h_full(p, f, space)
    raise UsageError(f"hamiltonian_choice must be 'secular' or 'full', got {choice!r}")


def default_dt_rho(p: SystemParams, f: DressedFrame, choice: str) -> float:
    """Step bound resolving the fastest scale of the chosen Hamiltonian."""
    scale = max(
        p.kappa,
        f.gamma_cap_0,
        f.gamma_cap_plus,
        f.gamma_cap_minus,
        p.g,
        p.epsilon,
        abs(p.delta_c),
    )
    if choice == "full":
        scale = max(scale, f.omega_bar)
    return 0.05 / scale


def evolve_rho(
    rho0: np.ndarray,
    p: SystemParams,
    f: DressedFrame,
    space: HilbertSpace,
    t_final: float,
    dt: float | None = None,
    hamiltonian_choice: str = "secular",
    record_dt: float | None = None,
    tail_tol: float = 1e-6,
) -> OracleTrajectory:
    """Propagate rho with the classical fourth-order scheme, recording expectations.

    The top Fock level is monitored at every record; population beyond
    ``tail_tol`` aborts the run since the truncated dynamics is no longer
    trustworthy.
    """
    hamiltonian = _hamiltonian_for(p, f, space, hamiltonian_choice)
    if t_final <= 0.0:
        raise DomainError(f"t_final must be positive, got {t_final}")
    if dt is None:
        dt = default_dt_rho(p, f, hamiltonian_choice)
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
    lind = _superoperator(p, f, space, hamiltonian)
    kit = _ExpectationKit(space)
    d = space.dim
    v = rho0.astype(complex).reshape(-1).copy()
    times = [0.0]
    samples = [kit.sample(rho0.astype(complex))]
    for step in range(1, n_records + 1):
        for _ in range(inner):
            k1 = lind @ v
            k2 = lind @ (v + (0.5 * h) * k1)
            k3 = lind @ (v + (0.5 * h) * k2)
            k4 = lind @ (v + h * k3)
            v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(v)):
            raise NonFiniteState(f"density-matrix integration diverged at t = {step * block}")
        sample = kit.sample(v.reshape(d, d))
        if sample.tail_pop > tail_tol:
            raise TruncationBreached(
                f"top Fock level holds {sample.tail_pop:.3e} population at "
                f"t = {step * block}; enlarge the space"
            )
        times.append(step * block)
        samples.append(sample)
    return OracleTrajectory(times=times, samples=samples)


def steady_rho(
    p: SystemParams,
    f: DressedFrame,
    space: HilbertSpace,
    hamiltonian_choice: str = "secular",
    method: str = "solve",
    tol: float = 1e-9,
    horizon: float | None = None,
) -> np.ndarray:
    """Fixed point of the master equation.

    ``solve`` replaces one row of the vectorized generator with the trace
    constraint and solves the sparse linear system; ``evolve`` integrates
    from the ground state until every tracked expectation moves less than
    ``tol`` per unit 1/kappa of time. The two paths agree to 1e-8 and are
    cross-checked in tests.
    """
    if f.gamma_cap_plus + f.gamma_cap_minus <= 0.0:
        raise ZeroRelaxation(
            "gamma_cap_plus + gamma_cap_minus is zero; the fixed point is not unique"
        )
    hamiltonian = _hamiltonian_for(p, f, space, hamiltonian_choice)
    lind = _superoperator(p, f, space, hamiltonian)
    d = space.dim
    if method == "solve":
        coo = lind.tocoo()
        keep = coo.row != 0
        trace_cols = np.arange(d) * (d + 1)
        rows = np.concatenate([coo.row[keep], np.zeros(d, dtype=coo.row.dtype)])
        cols = np.concatenate([coo.col[keep], trace_cols.astype(coo.col.dtype)])
        data = np.concatenate([coo.data[keep], np.ones(d, dtype=complex)])
        system = sp.csr_matrix((data, (rows, cols)), shape=lind.shape)
        rhs = np.zeros(d * d, dtype=complex)
        rhs[0] = 1.0
        v = spsolve(system, rhs)
        if not np.all(np.isfinite(v)):
            raise NoConvergence("steady-state solve produced non-finite entries")
        rho = v.reshape(d, d)
        rho = 0.5 * (rho + rho.conj().T)
        trace = float(np.real(np.trace(rho)))
        if not math.isfinite(trace) or abs(trace) < 1e-12:
            raise NoConvergence("steady-state solve produced a traceless matrix")
        rho = rho / trace
        residual = float(np.max(np.abs(lind @ rho.reshape(-1))))
        scale = float(np.max(np.abs(lind.data))) if lind.nnz else 1.0
        if residual > 1e-8 * max(1.0, scale):
            raise NoConvergence(
                f"steady-state residual {residual:.3e} too large for generator scale {scale:.3e}"
            )
        return rho
    if method == "evolve":
        if horizon is None:
            horizon = 10000.0 / p.kappa
        block = 1.0 / p.kappa
        dt = default_dt_rho(p, f, hamiltonian_choice)
        inner = max(1, math.ceil(block / dt))
        h = block / inner
        kit = _ExpectationKit(space)
        v = ground_state(space).reshape(-1)
        previous = kit.sample(v.reshape(d, d))
        elapsed = 0.0
        while elapsed < horizon:
            for _ in range(inner):
                k1 = lind @ v
                k2 = lind @ (v + (0.5 * h) * k1)
                k3 = lind @ (v + (0.5 * h) * k2)
                k4 = lind @ (v + h * k3)
                v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            elapsed += block
            if not np.all(np.isfinite(v)):
                raise NonFiniteState(
                    f"density-matrix integration diverged at t = {elapsed}"
                )
            last = kit.sample(v.reshape(d, d))
            change = max(
                abs(last.n - previous.n),
                abs(last.rza - previous.rza),
                abs(last.a_mean - previous.a_mean),
                abs(last.rz - previous.rz),
            )
            if change < tol:
                return v.reshape(d, d)
            previous = last
        raise NoConvergence(
            f"expectations still moving after t = {horizon} (tol {tol})"
        )
    raise UsageError(f"method must be 'solve' or 'evolve', got {method!r}")


def build_space(
    p: SystemParams,
    f: DressedFrame,
    target_tail: float = 1e-8,
    cap: int = 400,
) -> HilbertSpace:
    """Pick a Fock truncation that holds the steady state with a clean tail.

    Starts from the moment-predicted photon number plus six coherent-state
    standard deviations, then grows the space until the top-level population
    of the sparse steady solve drops below ``target_tail``.
    """
    if not 0.0 < target_tail < 1.0:
        raise DomainError(f"target_tail must lie in (0, 1), got {target_tail}")
    n_pred = max(0.0, moment_steady_state(f, p).n)
    fock = max(10, math.ceil(n_pred + 6.0 * math.sqrt(n_pred) + 10.0))
    while True:
        if fock > cap:
            raise TruncationTooLarge(
                f"required Fock dimension {fock} exceeds the cap {cap}; "
                "the drive is too strong for a dense oracle"
            )
        space = HilbertSpace(fock_dim=fock)
        rho = steady_rho(p, f, space, hamiltonian_choice="secular", method="solve")
        tail = expectations(rho, space).tail_pop
        if tail <= target_tail:
            return space
        fock = max(fock + 4, math.ceil(1.3 * fock))


def write_trajectory_csv(path: str, traj: OracleTrajectory) -> None:
    """Dump a trajectory as CSV: t, n, re_a, im_a, re_rza, im_rza, rz, tail_pop."""
    lines = ["t,n,re_a,im_a,re_rza,im_rza,rz,tail_pop"]
    for t, s in zip(traj.times, traj.samples):
        row = (t, s.n, s.a_mean.real, s.a_mean.imag, s.rza.real, s.rza.imag, s.rz, s.tail_pop)
        lines.append(",".join(f"{x:.8e}" for x in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
