"""Physical parameter set, validation, and the secular-validity check.

All quantities share one arbitrary frequency unit. The defaults reproduce
the weak-drive working point used throughout the README examples
(gamma0 = 1 sets the unit).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from typing import TYPE_CHECKING, Mapping

from .errors import (
    DegenerateDressing,
    DomainError,
    NegativeRate,
    NonPositiveKappa,
    UsageError,
)

if TYPE_CHECKING:
    from .dressing import DressedFrame


@dataclass(frozen=True)
class SystemParams:
    """Inputs of the driven atom-cavity model.

    delta_a      atom-laser detuning (atom frequency minus strong-laser frequency)
    delta_c      cavity-laser detuning (cavity frequency minus strong-laser frequency)
    omega_rabi   Rabi frequency of the strong laser, >= 0
    epsilon      cavity-drive amplitude of the weak laser, >= 0
    g            atom-cavity coupling, >= 0
    kappa        cavity photon leak rate, > 0
    gamma0       spontaneous rate at the central frequency, >= 0
    gamma_plus   spontaneous rate at the upper sideband, >= 0
    gamma_minus  spontaneous rate at the lower sideband, >= 0
    gamma_d      pure dephasing rate, >= 0
    phi          phase difference between the two lasers, radians
    """

    delta_a: float = 3.0
    delta_c: float = 0.0
    omega_rabi: float = 1.0
    epsilon: float = 0.5
    g: float = 2.0
    kappa: float = 0.1
    gamma0: float = 1.0
    gamma_plus: float = 1.0
    gamma_minus: float = 1.0
    gamma_d: float = 0.01
    phi: float = 0.0

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


PARAM_FIELDS: tuple[str, ...] = tuple(f.name for f in fields(SystemParams))

_RATE_FIELDS = ("gamma0", "gamma_plus", "gamma_minus", "gamma_d")
_AMPLITUDE_FIELDS = ("omega_rabi", "epsilon", "g")


def validate(p: SystemParams) -> SystemParams:
    """Return ``p`` unchanged if every field invariant holds, else raise."""
    for name in PARAM_FIELDS:
        value = getattr(p, name)
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite, got {value!r}")
    for name in _RATE_FIELDS:
        if getattr(p, name) < 0.0:
            raise NegativeRate(f"{name} must be nonnegative, got {getattr(p, name)}")
    for name in _AMPLITUDE_FIELDS:
        if getattr(p, name) < 0.0:
            raise DomainError(f"{name} must be nonnegative, got {getattr(p, name)}")
    if p.kappa <= 0.0:
        raise NonPositiveKappa(f"kappa must be positive, got {p.kappa}")
    if p.omega_rabi == 0.0 and p.delta_a == 0.0:
        raise DegenerateDressing(
            "omega_rabi and delta_a are both zero; the mixing angle is undefined"
        )
    return p


@dataclass(frozen=True)
class RegimeReport:
    """Outcome of the secular-approximation validity check."""

    ok: bool
    worst_ratio: float


def regime_check(
    p: SystemParams, frame: "DressedFrame", factor: float = 10.0
) -> RegimeReport:
    """Check that the dressing splitting dominates every other scale.

    The effective dynamics drops terms oscillating at twice the generalized
    Rabi frequency, which is justified when that frequency exceeds the cavity
    detuning, the coupling, the drive, and all dressed decay rates. ``factor``
    sets how large the separation must be to report ok (default one order of
    magnitude). Advisory only; never blocks a computation.
    """
    if factor <= 0.0:
        raise DomainError(f"factor must be positive, got {factor}")
    competitor = max(
        abs(p.delta_c),
        p.g,
        p.epsilon,
        frame.gamma_cap_0,
        frame.gamma_cap_plus,
        frame.gamma_cap_minus,
    )
    if competitor == 0.0:
        return RegimeReport(ok=True, worst_ratio=math.inf)
    ratio = frame.omega_bar / competitor
    return RegimeReport(ok=ratio >= factor, worst_ratio=ratio)


def load_config(path: str) -> dict[str, float]:
    """Read a flat JSON object whose keys are SystemParams field names."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise UsageError("config file must contain a JSON object")
    unknown = sorted(set(raw) - set(PARAM_FIELDS))
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    out: dict[str, float] = {}
    for key, value in raw.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise UsageError(f"config value for {key} must be a number, got {value!r}")
        out[key] = float(value)
    return out


def build_params(*layers: Mapping[str, float] | None) -> SystemParams:
    """Merge mappings over the defaults (later layers win) and validate."""
    merged: dict[str, float] = {}
    for layer in layers:
        if not layer:
            continue
        for key, value in layer.items():
            if key not in PARAM_FIELDS:
                raise UsageError(f"unknown parameter: {key}")
            merged[key] = float(value)
    return validate(SystemParams(**merged))
