"""Four-amplitude spin-orbit states over the (LG+ H, LG- H, LG+ V, LG- V) basis.

A state is the quadruple (l1, l2, l3, l4) of complex amplitudes on the
product basis of helical spatial modes and linear polarizations, ordered
polarization-major:

    index 0: LG+ x H,  index 1: LG- x H,  index 2: LG+ x V,  index 3: LG- x V

States are kept normalized. Global phase is *not* gauged away anywhere in
this module: the discrete sign picked up by cyclic element sequences is the
quantity of interest downstream, so amplitude comparison is always raw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .geometry import BeamGeometry, TransversePoint

_NORM_ABS_TOL = 1e-12
_NORM_FIX_TOL = 1e-9


class SpinOrbitState:
    """Normalized quadruple of complex amplitudes.

    The constructor renormalizes inputs whose norm drifts from 1 by at most
    1e-9 (absorbing float error from long element chains) and rejects
    anything worse as a genuine bug.
    """

    __slots__ = ("_amps",)

    def __init__(self, amplitudes):
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(4).copy()
        norm = math.sqrt(float(np.sum(amps.real**2 + amps.imag**2)))
        if abs(norm - 1.0) > _NORM_FIX_TOL:
            raise ValueError(f"state norm {norm!r} deviates from 1 by more than {_NORM_FIX_TOL}")
        if abs(norm - 1.0) > _NORM_ABS_TOL:
            amps = amps / norm
        amps.setflags(write=False)
        self._amps = amps

    @property
    def amplitudes(self) -> np.ndarray:
        """Read-only length-4 complex array (l1, l2, l3, l4)."""
        return self._amps

    def coefficient_matrix(self) -> np.ndarray:
        """2x2 matrix [[l1, l2], [l3, l4]]: rows = polarization, cols = spatial."""
        return self._amps.reshape(2, 2).copy()

    def __neg__(self) -> "SpinOrbitState":
        return SpinOrbitState(-self._amps)

    def __repr__(self) -> str:
        entries = ", ".join(f"{a.real:+.6f}{a.imag:+.6f}j" for a in self._amps)
        return f"SpinOrbitState([{entries}])"

    def isclose(self, other: "SpinOrbitState", atol: float = 1e-12) -> bool:
        """Raw amplitude comparison; deliberately sensitive to global phase."""
        return bool(np.allclose(self._amps, other._amps, rtol=0.0, atol=atol))


@dataclass(frozen=True)
class JonesVector:
    """Pointwise field components (E_H, E_V)."""

    E_H: complex
    E_V: complex


def prepare_initial(epsilon: float) -> SpinOrbitState:
    """Source state [sqrt(eps), 0, 0, sqrt(1-eps)].

    eps = 1/2 gives the maximally nonseparable input; eps = 0 or 1 are the
    separable states left after blocking one polarization.
    """
    if not (0.0 <= epsilon <= 1.0):
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    return SpinOrbitState([math.sqrt(epsilon), 0.0, 0.0, math.sqrt(1.0 - epsilon)])


def concurrence(s: SpinOrbitState) -> float:
    """C = 2|l1*l4 - l2*l3|; 0 for product modes, 1 for maximal nonseparability."""
    a = s.amplitudes
    return 2.0 * abs(a[0] * a[3] - a[1] * a[2])


def overlap(a: SpinOrbitState, b: SpinOrbitState) -> complex:
    """Inner product sum(conj(a_i) b_i); its argument is the relative phase."""
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def field_at(s: SpinOrbitState, p: TransversePoint, geom: BeamGeometry) -> JonesVector:
    """Vector field of the state at one transverse point."""
    x = np.array([p.x])
    y = np.array([p.y])
    psi_p = kernels.mode_field(kernels.LG_PLUS, x, y, p.z, geom.k, geom.z_R)[0]
    psi_m = kernels.mode_field(kernels.LG_MINUS, x, y, p.z, geom.k, geom.z_R)[0]
    a = s.amplitudes
    return JonesVector(
        E_H=complex(a[0] * psi_p + a[1] * psi_m),
        E_V=complex(a[2] * psi_p + a[3] * psi_m),
    )


def field_grid(s: SpinOrbitState, x, y, z: float, geom: BeamGeometry):
    """(E_H, E_V) arrays over coordinate grids at plane z."""
    psi_p = kernels.mode_field(kernels.LG_PLUS, x, y, z, geom.k, geom.z_R)
    psi_m = kernels.mode_field(kernels.LG_MINUS, x, y, z, geom.k, geom.z_R)
    a = s.amplitudes
    return a[0] * psi_p + a[1] * psi_m, a[2] * psi_p + a[3] * psi_m


__all__ = [
    "SpinOrbitState",
    "JonesVector",
    "prepare_initial",
    "concurrence",
    "overlap",
    "field_at",
    "field_grid",
]
