"""Closed-form steady-state photon number and its interference structure.

Three layers, each with its own domain of validity:

* quadratic coefficients in the drive amplitude, valid on cavity resonance
  with equal free-space rates;
* the pump / atom / cross decomposition, valid on cavity resonance for
  arbitrary sideband rates;
* the two-mode interference limits reached when one sideband channel
  dominates the other.

Everything here is cross-checked against the moment fixed point in tests;
the formulas are transcribed verbatim, never re-derived.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dressing import DressedFrame, rz_steady
from .errors import DomainError, UsageError
from .params import SystemParams


@dataclass(frozen=True)
class QuadraticCoefficients:
    """Steady photon number as a_coef eps^2 + b_coef eps + c_coef."""

    a_coef: float
    b_coef: float
    c_coef: float
    eps_min: float
    n_min: float


@dataclass(frozen=True)
class InterferenceSplit:
    """Steady photon number split by drive order.

    pump_term scales with the square of the cavity drive, atom_term with the
    square of the dressed coupling, cross_term with their product and the
    cosine of the relative phase. total is the verbatim closed form; the
    three terms regroup the same monomials and sum to it.
    """

    pump_term: float
    atom_term: float
    cross_term: float
    total: float


def coefficients(p: SystemParams) -> QuadraticCoefficients:
    """Quadratic-in-drive coefficients on cavity resonance, equal rates.

    Requires delta_c = 0 and gamma0 = gamma_plus = gamma_minus; any other
    regime must go through moments.steady_state.
    """
    if p.delta_c != 0.0:
        raise DomainError(
            "coefficients requires delta_c = 0; use moments.steady_state instead"
        )
    if not (p.gamma0 == p.gamma_plus == p.gamma_minus):
        raise DomainError(
            "coefficients requires gamma0 = gamma_plus = gamma_minus; "
            "use moments.steady_state instead"
        )
    gamma = p.gamma0
    d1 = gamma * p.delta_a**2 + 2.0 * (gamma + p.gamma_d) * p.omega_rabi**2
    if d1 <= 0.0:
        raise DomainError(
            "coefficients undefined: every damping channel of the emitter vanishes"
        )
    a_coef = 1.0 / p.kappa**2
    b_coef = (
        -2.0
        * p.g
        * gamma
        * p.delta_a
        * p.omega_rabi
        * math.cos(p.phi)
        / (p.kappa**2 * d1)
    )
    c_coef = (
        p.g**2
        * p.omega_rabi**2
        / (p.kappa**2 * d1)
        * (
            gamma * (p.kappa + 2.0 * gamma) * p.delta_a**2
            + 2.0 * p.kappa * (gamma + p.gamma_d) * p.omega_rabi**2
        )
        / (
            (p.kappa + 2.0 * gamma) * p.delta_a**2
            + 4.0 * (p.kappa + gamma + p.gamma_d) * p.omega_rabi**2
        )
    )
    eps_min = -b_coef / (2.0 * a_coef)
    n_min = c_coef - b_coef**2 / (4.0 * a_coef)
    return QuadraticCoefficients(
        a_coef=a_coef, b_coef=b_coef, c_coef=c_coef, eps_min=eps_min, n_min=n_min
    )


def n_quadratic(q: QuadraticCoefficients, eps: float) -> float:
    return q.a_coef * eps**2 + q.b_coef * eps + q.c_coef


def decomposition(p: SystemParams, f: DressedFrame) -> InterferenceSplit:
    """Interference decomposition on cavity resonance, arbitrary rates."""
    if p.delta_c != 0.0:
        raise DomainError(
            "decomposition requires delta_c = 0; use moments.steady_state instead"
        )
    rz = rz_steady(f)
    g_abs = abs(f.g0)
    cos_phi = math.cos(p.phi)
    kappa = p.kappa
    gs2 = 2.0 * (f.gamma_cap_plus + f.gamma_cap_minus)
    gd2 = 2.0 * (f.gamma_cap_plus - f.gamma_cap_minus)
    total = (p.epsilon / kappa**2) * (p.epsilon + g_abs * rz * cos_phi) + (
        g_abs / (kappa * (kappa + gs2))
    ) * (
        g_abs
        + p.epsilon * rz * cos_phi
        - gd2 * (g_abs * rz + p.epsilon * cos_phi) / kappa
    )
    pump_term = p.epsilon**2 / kappa**2
    atom_term = g_abs**2 * (1.0 - gd2 * rz / kappa) / (kappa * (kappa + gs2))
    cross_term = (
        p.epsilon
        * g_abs
        * cos_phi
        * (rz / kappa**2 + (rz - gd2 / kappa) / (kappa * (kappa + gs2)))
    )
    return InterferenceSplit(
        pump_term=pump_term,
        atom_term=atom_term,
        cross_term=cross_term,
        total=total,
    )


def limit_form(p: SystemParams, f: DressedFrame, which: str) -> float:
    """Two-mode interference value when one sideband channel dominates.

    ``plus_dominant`` gives the destructive sign (inversion pinned to the
    lower dressed state), ``minus_dominant`` the constructive one. The caller
    decides whether the rate hierarchy justifies the limit.
    """
    g_abs = abs(f.g0)
    interference = 2.0 * p.epsilon * g_abs * math.cos(p.phi)
    if which == "plus_dominant":
        signed = -interference
    elif which == "minus_dominant":
        signed = interference
    else:
        raise UsageError(
            f"which must be 'plus_dominant' or 'minus_dominant', got {which!r}"
        )
    return (p.epsilon**2 + g_abs**2 + signed) / p.kappa**2


def eps_min_bound(p: SystemParams) -> float:
    """Upper bound on the minimizing drive over all detunings at fixed coupling."""
    if not (p.gamma0 == p.gamma_plus == p.gamma_minus):
        raise DomainError("eps_min_bound requires gamma0 = gamma_plus = gamma_minus")
    if p.gamma0 <= 0.0:
        raise DomainError("eps_min_bound requires a positive free-space rate")
    return p.g * math.sqrt(2.0) / 4.0 / math.sqrt(1.0 + p.gamma_d / p.gamma0)
