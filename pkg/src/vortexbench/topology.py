"""SO(3) ball representation of maximally nonseparable states and the
homotopy classification of closed transformation trajectories.

A maximally nonseparable state can be written as
``exp(i gamma) / sqrt(2) * [l, e, -conj(e), conj(l)]`` with
``|l|^2 + |e|^2 = 1``. The 2x2 matrix ``U = [[l, e], [-conj(e), conj(l)]]``
is special unitary, so up to the global phase gamma the state is a point of
SU(2). Projecting out the sign ambiguity (U and -U describe the same state
ray *per point*, but the sign matters along paths) lands on SO(3),
parameterized as a solid ball of radius pi: a point is an axis-angle pair
(a, u) with a in [0, pi], and (pi, u) is identified with (pi, -u).

Coordinates on the ball follow the axis-angle form
``U = cos(a/2) I - i sin(a/2) (u . sigma)``, i.e.

    l = cos(a/2) - i u_z sin(a/2),    e = -(u_y + i u_x) sin(a/2).

Closed trajectories fall in two homotopy classes: those crossing the ball
surface an even number of times (contractible, class 0) and an odd number
of times (class pi). A cyclic transformation multiplies the state by +1 or
-1 accordingly; that discrete sign is the topological phase.

Path generation sweeps each element's retardation linearly from 0 to its
nominal value at fixed orientation, one element after another. Along such
unitary-only sweeps the global phase gamma is constant (every element has
unit determinant), so ``exp(-i gamma0) M(t)`` with ``M = sqrt(2) Lambda``
is the continuous SU(2) lift of the path, and a surface crossing is exactly
a sign change of its real trace. Crossings are refined by bisection; the
angle a never gets compared against pi directly.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .elements import OpticalElement, lift
from .errors import (
    NonCyclicTrajectoryError,
    NotMaximallyNonseparableError,
    SurfaceDegeneracyError,
)
from .states import SpinOrbitState, concurrence, overlap

_CONCURRENCE_TOL = 1e-9
_SURFACE_TOUCH_F = 1e-12  # |trace| band treated as "on the surface" when counting
_SURFACE_HUG_A = 1e-6  # a > pi - this for > 3 consecutive samples => degenerate


@dataclass(frozen=True)
class SO3Point:
    """Ball coordinate: rotation angle a in [0, pi] and unit axis u.

    (pi, u) and (pi, -u) are the same point; ``same_point`` honors that.
    At a = 0 the axis is fixed to (0, 0, 1) by convention.
    """

    a: float
    u: tuple[float, float, float]

    def __post_init__(self):
        a = float(self.a)
        if a < -1e-12 or a > math.pi + 1e-12:
            raise ValueError(f"rotation angle a = {a} outside [0, pi]")
        a = min(max(a, 0.0), math.pi)
        u = np.asarray(self.u, dtype=np.float64).reshape(3)
        norm = float(np.linalg.norm(u))
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"axis norm {norm} deviates from 1 by more than 1e-9")
        u = u / norm
        if a == 0.0:
            u = np.array([0.0, 0.0, 1.0])
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "u", (float(u[0]), float(u[1]), float(u[2])))

    @property
    def vector(self) -> np.ndarray:
        """Position a*u inside the ball."""
        return self.a * np.asarray(self.u)

    def same_point(self, other: "SO3Point", tol: float = 1e-9) -> bool:
        v1, v2 = self.vector, other.vector
        if float(np.linalg.norm(v1 - v2)) <= tol:
            return True
        on_surface = (math.pi - self.a) <= tol and (math.pi - other.a) <= tol
        return on_surface and float(np.linalg.norm(v1 + v2)) <= tol


@dataclass(frozen=True)
class GaugeDecomposition:
    """Global phase gamma and special-unitary factor U of a C = 1 state.

    ``sign_flips`` counts surface crossings accumulated when the
    decomposition is tracked along a path; it is 0 for a single state.
    """

    gamma: float
    U: np.ndarray
    sign_flips: int = 0

    def reconstruct(self) -> np.ndarray:
        """Coefficient matrix exp(i gamma) U / sqrt(2)."""
        return cmath.exp(1j * self.gamma) * self.U / math.sqrt(2.0)


class HomotopyClass(enum.Enum):
    ZERO = "0"
    PI = "pi"


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    point: SO3Point
    state: SpinOrbitState
    gamma: float
    crossing: bool = False


@dataclass(frozen=True)
class Trajectory:
    """Sampled continuity-gauged path on the SO(3) ball."""

    samples: tuple[TrajectorySample, ...]
    crossings: tuple[float, ...] = field(default=())
    homotopy_class: HomotopyClass = HomotopyClass.ZERO
    topological_phase: int = 1

    @property
    def initial_state(self) -> SpinOrbitState:
        return self.samples[0].state

    @property
    def final_state(self) -> SpinOrbitState:
        return self.samples[-1].state


def _wrap_angle(g: float) -> float:
    """Wrap to (-pi, pi]."""
    g = math.fmod(g + math.pi, 2.0 * math.pi)
    if g <= 0.0:
        g += 2.0 * math.pi
    return g - math.pi


def gauge_decompose(s: SpinOrbitState) -> GaugeDecomposition:
    """Split a maximally nonseparable state into exp(i gamma) U / sqrt(2).

    gamma = arg(det M)/2 with M = sqrt(2) * coefficient matrix, and the
    branch is chosen so Re(trace U) >= 0 when possible, keeping the ball
    angle in [0, pi].
    """
    c = concurrence(s)
    if abs(c - 1.0) > _CONCURRENCE_TOL:
        raise NotMaximallyNonseparableError(
            f"concurrence {c:.12f} != 1; SO(3) representation undefined"
        )
    m = math.sqrt(2.0) * s.coefficient_matrix()
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    root = cmath.sqrt(det)  # principal branch: arg in (-pi/2, pi/2]
    gamma = cmath.phase(root)
    u = m / root
    if (u[0, 0] + u[1, 1]).real < 0.0:
        u = -u
        gamma = _wrap_angle(gamma + math.pi)
    return GaugeDecomposition(gamma=gamma, U=u)


def su2_to_point(u: np.ndarray) -> SO3Point:
    """Axis-angle ball coordinate of a special-unitary 2x2 matrix.

    Expects Re(trace U) >= 0 (callers flip the sign first, as
    ``gauge_decompose`` does); then a = 2 arccos(Re(trace U)/2) lies in
    [0, pi]. The axis comes from the anti-Hermitian part; at a = 0 it is
    (0, 0, 1) by convention.
    """
    cos_half = ((u[0, 0] + u[1, 1]) / 2.0).real
    sux = -(u[0, 1].imag + u[1, 0].imag) / 2.0
    suy = (u[1, 0].real - u[0, 1].real) / 2.0
    suz = (u[1, 1].imag - u[0, 0].imag) / 2.0
    sin_half = math.sqrt(sux * sux + suy * suy + suz * suz)
    # atan2 equals 2*arccos(clamp(cos_half)) here but keeps full precision
    # near a = 0, where arccos loses half the significant digits.
    a = 2.0 * math.atan2(sin_half, cos_half)
    if sin_half < 1e-12:
        return SO3Point(a=a, u=(0.0, 0.0, 1.0))
    return SO3Point(a=a, u=(sux / sin_half, suy / sin_half, suz / sin_half))


def point_to_state(p: SO3Point, gamma: float = 0.0) -> SpinOrbitState:
    """Maximally nonseparable state at ball point p with global phase gamma."""
    half = 0.5 * p.a
    ux, uy, uz = p.u
    cos_h, sin_h = math.cos(half), math.sin(half)
    lam = complex(cos_h, -uz * sin_h)
    eta = complex(-uy * sin_h, -ux * sin_h)
    phase = cmath.exp(1j * gamma) / math.sqrt(2.0)
    return SpinOrbitState(
        [phase * lam, phase * eta, -phase * eta.conjugate(), phase * lam.conjugate()]
    )


def _check_sweepable(elems: list[OpticalElement], samples_per_element: int) -> None:
    for e in elems:
        if not e.is_unitary:
            raise ValueError("trajectory sweeps accept unitary elements only, got a filter")
    if samples_per_element < 16:
        raise ValueError(f"samples_per_element must be >= 16, got {samples_per_element}")


def trace_trajectory(
    s0: SpinOrbitState,
    elems: list[OpticalElement],
    samples_per_element: int = 256,
) -> Trajectory:
    """Sweep each element's retardation in turn and classify the path.

    Element i is turned on gradually (retardation phi*tau, tau in [0, 1])
    after elements 0..i-1 act in full; the global parameter t in [0, 1]
    spans the whole sequence. Surface crossings are sign changes of the
    real trace of the continuous SU(2) lift, located to |dt| < 1e-10 by
    bisection. Samples landing within the surface-touch band are merged
    into the adjacent bracket so a single tangential contact is not
    double-counted.
    """
    dec0 = gauge_decompose(s0)  # also enforces the concurrence precondition
    gamma0 = dec0.gamma
    phase0 = cmath.exp(-1j * gamma0)

    if not elems:
        sample = TrajectorySample(
            t=0.0, point=su2_to_point(dec0.U), state=s0, gamma=gamma0, crossing=False
        )
        return Trajectory(samples=(sample,))
    _check_sweepable(elems, samples_per_element)

    n_elems = len(elems)
    prefix = [s0.amplitudes.copy()]
    for e in elems:
        prefix.append(lift(e) @ prefix[-1])

    def amps_at(t: float) -> np.ndarray:
        scaled = t * n_elems
        idx = min(int(math.floor(scaled)), n_elems - 1)
        tau = scaled - idx
        partial = elems[idx].with_retardation(elems[idx].phi_rad * tau)
        return lift(partial) @ prefix[idx]

    def lifted_trace(amps: np.ndarray) -> float:
        # Re trace of exp(-i gamma0) * sqrt(2) * Lambda; constant-gamma lift
        return math.sqrt(2.0) * (phase0 * (amps[0] + amps[3])).real

    total = n_elems * samples_per_element
    ts = np.arange(total + 1) / total
    all_amps = [amps_at(t) for t in ts]
    traces = [lifted_trace(a) for a in all_amps]

    hug = 0
    for f in traces:
        hug = hug + 1 if abs(f) < 2.0 * math.sin(0.5 * _SURFACE_HUG_A) else 0
        if hug > 3:
            raise SurfaceDegeneracyError(
                "trajectory lies on the ball surface; crossing count is unreliable"
            )

    crossings: list[float] = []
    crossing_sample = [False] * (total + 1)
    last_sign, last_idx = 0, -1
    for j, f in enumerate(traces):
        sign = 0 if abs(f) < _SURFACE_TOUCH_F else (1 if f > 0.0 else -1)
        if sign == 0:
            continue
        if last_sign != 0 and sign != last_sign:
            lo, hi = float(ts[last_idx]), float(ts[j])
            f_lo = traces[last_idx]
            while hi - lo > 1e-10:
                mid = 0.5 * (lo + hi)
                f_mid = lifted_trace(amps_at(mid))
                if (f_mid > 0.0) == (f_lo > 0.0):
                    lo, f_lo = mid, f_mid
                else:
                    hi = mid
            crossings.append(0.5 * (lo + hi))
            crossing_sample[j] = True
        last_sign, last_idx = sign, j

    samples = []
    flips = 0
    for j, (t, amps, f) in enumerate(zip(ts, all_amps, traces)):
        if crossing_sample[j]:
            flips += 1
        u = phase0 * math.sqrt(2.0) * amps.reshape(2, 2)
        if f < 0.0:
            u = -u
            gamma_j = _wrap_angle(gamma0 + math.pi)
        else:
            gamma_j = gamma0
        samples.append(
            TrajectorySample(
                t=float(t),
                point=su2_to_point(u),
                state=SpinOrbitState(amps),
                gamma=gamma_j,
                crossing=crossing_sample[j],
            )
        )

    odd = len(crossings) % 2 == 1
    return Trajectory(
        samples=tuple(samples),
        crossings=tuple(crossings),
        homotopy_class=HomotopyClass.PI if odd else HomotopyClass.ZERO,
        topological_phase=-1 if odd else 1,
    )


def verify_phase_consistency(traj: Trajectory) -> bool:
    """Check the crossing-parity phase against the actual state overlap.

    Requires a closed trajectory (final state = +-initial within 1e-9);
    returns True iff the sign of Re(overlap(initial, final)) equals the
    crossing-parity topological phase.
    """
    a0 = traj.initial_state.amplitudes
    a1 = traj.final_state.amplitudes
    dist = min(float(np.linalg.norm(a1 - a0)), float(np.linalg.norm(a1 + a0)))
    if dist > 1e-9:
        raise NonCyclicTrajectoryError(
            "trajectory not cyclic; topological phase undefined as a discrete invariant"
        )
    ov = overlap(traj.initial_state, traj.final_state)
    sign = 1 if ov.real > 0.0 else -1
    return sign == traj.topological_phase


__all__ = [
    "SO3Point",
    "GaugeDecomposition",
    "HomotopyClass",
    "TrajectorySample",
    "Trajectory",
    "gauge_decompose",
    "su2_to_point",
    "point_to_state",
    "trace_trajectory",
    "verify_phase_consistency",
]
