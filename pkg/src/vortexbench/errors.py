"""Exception types raised by vortexbench operations."""


class VortexBenchError(Exception):
    """Base class for all vortexbench errors."""


class FlatWavefrontError(VortexBenchError):
    """Wavefront radius requested at the beam waist, where it diverges.

    The curvature phase k*rho^2/(2R) is zero at the waist; callers that
    only need the phase should use ``BeamGeometry.curvature_phase``.
    """


class InsufficientResolutionError(VortexBenchError):
    """Quadrature grid too small or too coarse for the requested tolerance."""


class StateAnnihilatedError(VortexBenchError):
    """A polarization filter projected the state to zero norm."""


class NotMaximallyNonseparableError(VortexBenchError):
    """SO(3) ball representation requested for a state with concurrence < 1."""


class NonCyclicTrajectoryError(VortexBenchError):
    """Topological phase requested for a trajectory that does not close."""


class SurfaceDegeneracyError(VortexBenchError):
    """Trajectory hugs the ball surface, where the representation is singular
    and crossing counting is unreliable."""


class ParseError(VortexBenchError):
    """Bench-script syntax or range error, located by line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column
