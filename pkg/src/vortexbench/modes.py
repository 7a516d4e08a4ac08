"""First-order Laguerre-Gaussian and Hermite-Gaussian scalar modes.

The six members of the first-order family, all unit-normalized:

* ``LG_PLUS`` / ``LG_MINUS`` - helical modes with e^{+-i phi} azimuthal phase
  and amplitude proportional to rho, so they vanish at the vortex core.
* ``HG_H`` / ``HG_V`` - Cartesian two-lobe modes proportional to x and y.
* ``HG_PLUS45`` / ``HG_MINUS45`` - the +-45 degree rotated lobes,
  (HG_h +- HG_v)/sqrt(2).

The families are linked pointwise by LG+- = (HG_h +- i HG_v)/sqrt(2).
"""

from __future__ import annotations

import enum

import numpy as np

from . import kernels
from .errors import InsufficientResolutionError
from .geometry import BeamGeometry, TransversePoint


class ModeLabel(enum.Enum):
    LG_PLUS = kernels.LG_PLUS
    LG_MINUS = kernels.LG_MINUS
    HG_H = kernels.HG_H
    HG_V = kernels.HG_V
    HG_PLUS45 = kernels.HG_P45
    HG_MINUS45 = kernels.HG_M45


def eval_mode(label: ModeLabel, p: TransversePoint, geom: BeamGeometry) -> complex:
    """Complex amplitude of the unit-normalized mode at one point."""
    out = kernels.mode_field(label.value, np.array([p.x]), np.array([p.y]), p.z, geom.k, geom.z_R)
    return complex(out[0])


def eval_mode_grid(label: ModeLabel, x, y, z: float, geom: BeamGeometry) -> np.ndarray:
    """Vectorized ``eval_mode`` over coordinate arrays at a fixed plane z."""
    return kernels.mode_field(label.value, x, y, z, geom.k, geom.z_R)


def _quadrature_grid(z: float, geom: BeamGeometry, extent: float | None, points: int):
    w = geom.beam_width(z)
    if extent is None:
        extent = 6.0 * w
    if extent < 6.0 * w:
        raise InsufficientResolutionError(
            f"quadrature extent {extent:g} < 6*w(z) = {6.0 * w:g}; tails not captured"
        )
    if points < 128:
        raise InsufficientResolutionError(f"quadrature needs >= 128 points per axis, got {points}")
    # midpoint rule: cell centers, uniform pitch
    h = 2.0 * extent / points
    axis = -extent + h * (np.arange(points) + 0.5)
    xx, yy = np.meshgrid(axis, axis)
    return xx, yy, h * h


def mode_overlap_quadrature(
    a: ModeLabel,
    b: ModeLabel,
    z: float,
    geom: BeamGeometry,
    extent: float | None = None,
    points: int = 512,
) -> complex:
    """Midpoint-rule estimate of the transverse overlap integral of two modes.

    The integrand is a polynomial times a Gaussian, so the uniform midpoint
    rule converges to machine precision long before 512 points per axis.
    """
    xx, yy, da = _quadrature_grid(z, geom, extent, points)
    fa = eval_mode_grid(a, xx, yy, z, geom)
    fb = eval_mode_grid(b, xx, yy, z, geom)
    return complex(np.sum(np.conj(fa) * fb) * da)


def mode_norm_quadrature(
    label: ModeLabel,
    z: float,
    geom: BeamGeometry,
    extent: float | None = None,
    points: int = 512,
) -> float:
    """Numerical norm integral of one mode; ~1 for every family member."""
    xx, yy, da = _quadrature_grid(z, geom, extent, points)
    f = eval_mode_grid(label, xx, yy, z, geom)
    return float(np.sum(f.real**2 + f.imag**2) * da)


def beam_width(z: float, geom: BeamGeometry) -> float:
    return geom.beam_width(z)


def wavefront_radius(z: float, geom: BeamGeometry) -> float:
    return geom.wavefront_radius(z)


__all__ = [
    "ModeLabel",
    "eval_mode",
    "eval_mode_grid",
    "mode_norm_quadrature",
    "mode_overlap_quadrature",
    "beam_width",
    "wavefront_radius",
]
