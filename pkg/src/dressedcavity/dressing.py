"""Dressed-state frame: mixing angle, effective coupling, dressed rates.

The strong laser splits the emitter into a doublet separated by twice the
generalized Rabi frequency. In that basis the cavity couples through a
single complex amplitude g0 and the reservoir acts through three rates:
gamma_cap_0 damps the inversion, gamma_cap_plus and gamma_cap_minus drive
downward and upward transitions between the dressed states.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DegenerateDressing, ZeroRelaxation
from .params import SystemParams


@dataclass(frozen=True)
class DressedFrame:
    theta: float
    omega_bar: float
    g0: complex
    gamma_cap_0: float
    gamma_cap_plus: float
    gamma_cap_minus: float


def dress(p: SystemParams) -> DressedFrame:
    """Compute the dressed frame for validated parameters.

    The double angle is taken in [0, pi) so sin(2 theta) >= 0 for any sign
    of the detuning, which pins the sign convention of g0. The squared
    trigonometric factors are evaluated algebraically from the detuning and
    Rabi frequency rather than through the angle, so symmetric inputs
    (zero detuning, equal sideband rates) give exactly symmetric rates.
    """
    if p.omega_rabi == 0.0 and p.delta_a == 0.0:
        raise DegenerateDressing(
            "omega_rabi and delta_a are both zero; the mixing angle is undefined"
        )
    theta = 0.5 * math.atan2(2.0 * p.omega_rabi, p.delta_a)
    omega_bar = math.hypot(p.omega_rabi, 0.5 * p.delta_a)
    # sin 2theta = 2 Omega / sqrt(4 Omega^2 + Delta^2), cos likewise
    norm = math.hypot(2.0 * p.omega_rabi, p.delta_a)
    sin_two = 2.0 * p.omega_rabi / norm
    cos_two = p.delta_a / norm
    cos_sq = 0.5 * (1.0 + cos_two)  # cos^2 theta
    sin_sq = 0.5 * (1.0 - cos_two)  # sin^2 theta
    sin_two_sq = sin_two * sin_two
    g0 = 0.5 * p.g * sin_two * cmath.exp(1j * p.phi)
    gamma_cap_0 = 0.25 * (p.gamma0 * sin_two_sq + p.gamma_d * cos_two * cos_two)
    gamma_cap_plus = p.gamma_plus * cos_sq * cos_sq + 0.25 * p.gamma_d * sin_two_sq
    gamma_cap_minus = p.gamma_minus * sin_sq * sin_sq + 0.25 * p.gamma_d * sin_two_sq
    return DressedFrame(
        theta=theta,
        omega_bar=omega_bar,
        g0=g0,
        gamma_cap_0=gamma_cap_0,
        gamma_cap_plus=gamma_cap_plus,
        gamma_cap_minus=gamma_cap_minus,
    )


def rz_steady(f: DressedFrame) -> float:
    """Steady-state inversion of the dressed doublet.

    Set by detailed balance of the two sideband channels alone; the cavity
    back-action on the inversion drops out at the weak-drive order kept here.
    """
    total = f.gamma_cap_plus + f.gamma_cap_minus
    if total <= 0.0:
        raise ZeroRelaxation(
            "gamma_cap_plus + gamma_cap_minus is zero; the inversion has no fixed point"
        )
    return (f.gamma_cap_minus - f.gamma_cap_plus) / total
