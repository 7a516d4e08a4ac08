"""SU(2) optical elements and their action on spin-orbit states.

Wave plates act on the polarization pair (H, V); astigmatic mode converters
act identically on the spatial pair (LG+, LG-). Orientation angles theta
are degrees at this API boundary, retardations phi are radians; all
trigonometry uses 2*theta.

Matrix conventions (fast axis horizontal at theta = 0):

    W(theta, phi) = [[cos(phi/2) + i sin(phi/2) cos 2theta,  i sin(phi/2) sin 2theta],
                     [i sin(phi/2) sin 2theta,  cos(phi/2) - i sin(phi/2) cos 2theta]]

    C(theta, phi) = [[cos(phi/2),  i sin(phi/2) e^{-2 i theta}],
                     [i sin(phi/2) e^{2 i theta},  cos(phi/2)]]

Both are special unitary for every (theta, phi). On the four-amplitude
space a wave plate lifts to W (x) I (polarization-major ordering) and a
converter to I (x) C. Unitaries never renormalize, so the +-1 sign of a
cyclic sequence survives; filters project and renormalize.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import StateAnnihilatedError
from .states import SpinOrbitState

TWO_PI = 2.0 * math.pi


class ElementKind(enum.Enum):
    WAVE_PLATE = "waveplate"
    MODE_CONVERTER = "converter"
    POLARIZATION_FILTER = "pbs"


@dataclass(frozen=True)
class OpticalElement:
    """One bench element: kind, orientation theta (deg), retardation phi (rad).

    Filters ignore theta and phi and keep one polarization ('H' or 'V').
    phi is stored wrapped into [0, 2*pi).
    """

    kind: ElementKind
    theta_deg: float = 0.0
    phi_rad: float = 0.0
    keep: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "phi_rad", float(self.phi_rad) % TWO_PI)
        if self.kind is ElementKind.POLARIZATION_FILTER:
            if self.keep not in ("H", "V"):
                raise ValueError(f"filter keeps 'H' or 'V', got {self.keep!r}")
        elif self.keep is not None:
            raise ValueError(f"{self.kind.value} takes no 'keep' parameter")

    @property
    def is_unitary(self) -> bool:
        return self.kind is not ElementKind.POLARIZATION_FILTER

    def with_retardation(self, phi_rad: float) -> "OpticalElement":
        """Copy with a different retardation (used for retardation sweeps)."""
        return OpticalElement(self.kind, self.theta_deg, phi_rad, self.keep)


def waveplate(theta_deg: float, phi_rad: float) -> OpticalElement:
    return OpticalElement(ElementKind.WAVE_PLATE, theta_deg, phi_rad)


def half_wave_plate(theta_deg: float) -> OpticalElement:
    return waveplate(theta_deg, math.pi)


def quarter_wave_plate(theta_deg: float) -> OpticalElement:
    return waveplate(theta_deg, math.pi / 2.0)


def mode_converter(theta_deg: float, phi_rad: float) -> OpticalElement:
    return OpticalElement(ElementKind.MODE_CONVERTER, theta_deg, phi_rad)


def polarization_filter(keep: str) -> OpticalElement:
    return OpticalElement(ElementKind.POLARIZATION_FILTER, keep=keep)


def waveplate_matrix(theta_deg: float, phi_rad: float) -> np.ndarray:
    """2x2 special-unitary wave-plate matrix W(theta, phi)."""
    half = 0.5 * phi_rad
    c, s = math.cos(half), math.sin(half)
    two_theta = math.radians(2.0 * theta_deg)
    ct, st = math.cos(two_theta), math.sin(two_theta)
    return np.array(
        [
            [c + 1j * s * ct, 1j * s * st],
            [1j * s * st, c - 1j * s * ct],
        ],
        dtype=np.complex128,
    )


def converter_matrix(theta_deg: float, phi_rad: float) -> np.ndarray:
    """2x2 special-unitary mode-converter matrix C(theta, phi) in the LG basis."""
    half = 0.5 * phi_rad
    c, s = math.cos(half), math.sin(half)
    two_theta = math.radians(2.0 * theta_deg)
    phase = complex(math.cos(two_theta), math.sin(two_theta))
    return np.array(
        [
            [c, 1j * s * np.conj(phase)],
            [1j * s * phase, c],
        ],
        dtype=np.complex128,
    )


_I2 = np.eye(2, dtype=np.complex128)
_PROJ = {
    "H": np.diag([1.0, 0.0]).astype(np.complex128),
    "V": np.diag([0.0, 1.0]).astype(np.complex128),
}


def lift(e: OpticalElement) -> np.ndarray:
    """4x4 operator of the element on the spin-orbit amplitude space."""
    if e.kind is ElementKind.WAVE_PLATE:
        return np.kron(waveplate_matrix(e.theta_deg, e.phi_rad), _I2)
    if e.kind is ElementKind.MODE_CONVERTER:
        return np.kron(_I2, converter_matrix(e.theta_deg, e.phi_rad))
    return np.kron(_PROJ[e.keep], _I2)


def _apply_one(amps: np.ndarray, e: OpticalElement) -> np.ndarray:
    out = lift(e) @ amps
    if not e.is_unitary:
        norm = math.sqrt(float(np.sum(out.real**2 + out.imag**2)))
        if norm < 1e-12:
            raise StateAnnihilatedError(
                f"state annihilated by filter keeping {e.keep} polarization"
            )
        out = out / norm
    return out


def apply_sequence(s: SpinOrbitState, elems: list[OpticalElement]) -> SpinOrbitState:
    """Apply elements in beam order (first list entry hits the beam first)."""
    amps = s.amplitudes.copy()
    for e in elems:
        amps = _apply_one(amps, e)
    return SpinOrbitState(amps)


def intermediate_states(s: SpinOrbitState, elems: list[OpticalElement]) -> list[SpinOrbitState]:
    """States before and after each element; entry 0 is the input itself."""
    amps = s.amplitudes.copy()
    out = [s]
    for e in elems:
        amps = _apply_one(amps, e)
        out.append(SpinOrbitState(amps))
    return out


def topological_cycle(theta_deg: float) -> list[OpticalElement]:
    """Converter / half-wave plate / converter / quarter-wave plate probe loop.

    Both converters sit at 22.5 degrees with quarter-wave retardation and the
    final quarter-wave plate at 0 degrees. The loop closes on itself exactly
    at theta = +-45 degrees, returning the maximally nonseparable input up to
    a sign: + for theta = -45 and - for theta = +45.
    """
    return [
        mode_converter(22.5, math.pi / 2.0),
        half_wave_plate(theta_deg),
        mode_converter(22.5, math.pi / 2.0),
        quarter_wave_plate(0.0),
    ]


__all__ = [
    "ElementKind",
    "OpticalElement",
    "waveplate",
    "half_wave_plate",
    "quarter_wave_plate",
    "mode_converter",
    "polarization_filter",
    "waveplate_matrix",
    "converter_matrix",
    "lift",
    "apply_sequence",
    "intermediate_states",
    "topological_cycle",
]
