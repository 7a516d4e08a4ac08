"""Beam geometry and transverse-plane coordinates for first-order paraxial modes.

Conventions
-----------
* ``k`` is the wavenumber (radians per unit length), ``z_R`` the Rayleigh
  length. Any consistent length unit works; the default geometry is SI.
* Beam width: ``w(z) = sqrt(2 (z_R^2 + z^2) / (k z_R))``, so the waist
  satisfies ``w(0) = sqrt(2 z_R / k)``.
* Wavefront radius: ``R(z) = (z_R^2 + z^2) / z``, odd in z and divergent at
  the waist. The curvature phase ``k rho^2 / (2 R)`` is taken as 0 at z = 0
  (its limit value), which is what ``curvature_phase`` returns.
* Azimuth uses atan2, so ``phi_az`` lies in (-pi, pi].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import FlatWavefrontError

DEFAULT_WAVELENGTH = 532e-9
DEFAULT_WAIST = 1e-3


@dataclass(frozen=True)
class BeamGeometry:
    """Wavenumber and Rayleigh length of a Gaussian beam envelope."""

    k: float
    z_R: float

    def __post_init__(self):
        if not (self.k > 0 and math.isfinite(self.k)):
            raise ValueError(f"wavenumber k must be positive, got {self.k}")
        if not (self.z_R > 0 and math.isfinite(self.z_R)):
            raise ValueError(f"Rayleigh length z_R must be positive, got {self.z_R}")

    @classmethod
    def from_waist(cls, wavelength: float, waist: float) -> "BeamGeometry":
        """Geometry with wavelength ``lambda`` and waist width ``w(0) = waist``."""
        k = 2.0 * math.pi / wavelength
        return cls(k=k, z_R=k * waist * waist / 2.0)

    @classmethod
    def default(cls) -> "BeamGeometry":
        """532 nm source with a 1 mm waist (SI units)."""
        return cls.from_waist(DEFAULT_WAVELENGTH, DEFAULT_WAIST)

    def beam_width(self, z: float) -> float:
        """w(z); even in z and positive everywhere."""
        return math.sqrt(2.0 * (self.z_R**2 + z**2) / (self.k * self.z_R))

    def wavefront_radius(self, z: float) -> float:
        """R(z) = (z_R^2 + z^2)/z. Raises at z = 0 where the wavefront is flat."""
        if z == 0.0:
            raise FlatWavefrontError(
                "wavefront radius diverges at the waist; curvature phase is 0 there"
            )
        return (self.z_R**2 + z**2) / z

    def inverse_wavefront_radius(self, z: float) -> float:
        """1/R(z) = z/(z_R^2 + z^2); continuous through the waist."""
        return z / (self.z_R**2 + z**2)

    def gouy_phase(self, z: float) -> float:
        """First-order Gouy term 2*arctan(z/z_R)."""
        return 2.0 * math.atan(z / self.z_R)

    def curvature_phase(self, rho: float, z: float) -> float:
        """k*rho^2/(2R(z)), with the removable singularity at z = 0 set to 0."""
        return 0.5 * self.k * rho * rho * self.inverse_wavefront_radius(z)


@dataclass(frozen=True)
class TransversePoint:
    """A point (x, y) in the transverse plane at axial position z."""

    x: float
    y: float
    z: float = 0.0

    @property
    def rho(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def phi_az(self) -> float:
        """Azimuth in (-pi, pi], atan2 branch."""
        return math.atan2(self.y, self.x)
