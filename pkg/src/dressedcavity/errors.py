"""Exception hierarchy shared by every module.

Two families: ``UsageError`` for rejected inputs (bad parameter values,
malformed requests) and ``SolverError`` for failures that occur while a
computation is running (singular systems, truncation overflow, divergence).
The service layer maps the first family to HTTP 400 and the second to 500;
the CLI maps them to exit codes 2 and 3.
"""


class UsageError(ValueError):
    """Caller supplied an input the model cannot accept."""


class DomainError(UsageError):
    """Parameters fall outside the domain of a closed-form expression."""


class NegativeRate(UsageError):
    """A decay or dephasing rate is negative."""


class NonPositiveKappa(UsageError):
    """Cavity decay rate must be strictly positive."""


class DegenerateDressing(UsageError):
    """Rabi frequency and detuning are both zero, so no dressing exists."""


class SolverError(RuntimeError):
    """A numerical routine failed after accepting its inputs."""


class ZeroRelaxation(SolverError):
    """All dressed relaxation rates vanish; the inversion has no fixed point."""


class SingularCavity(SolverError):
    """The cavity response matrix is singular at the requested detuning."""


class NonFiniteState(SolverError):
    """Integration produced NaN or infinity."""


class TruncationTooLarge(SolverError):
    """Required Fock dimension exceeds what dense simulation can handle."""


class TruncationBreached(SolverError):
    """Population leaked into the top Fock level beyond the allowed tail."""


class NoConvergence(SolverError):
    """Iterative steady-state search did not settle within its time budget."""
