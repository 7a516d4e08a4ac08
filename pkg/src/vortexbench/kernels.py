"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

Every kernel exists twice: a vectorized numpy implementation and a
numba ``@njit`` loop. The active backend is chosen once at import from the
``VORTEXBENCH_BACKEND`` environment variable:

* ``auto`` (default) - numba when importable, numpy otherwise
* ``numba``          - require numba, fail loudly if missing
* ``numpy``          - force the pure-numpy path

``set_backend`` switches at runtime (used by the benchmark and by tests
that pin a backend for byte-exact golden files). Both paths evaluate the
same formulas; they agree to float64 roundoff but not necessarily bitwise,
because libm and numpy ufuncs may round the last ulp differently.

All kernels take flat float64 coordinate arrays plus scalar parameters and
return flat arrays; callers reshape. Mode codes: 0 LG+, 1 LG-, 2 HG_h,
3 HG_v, 4 HG+45, 5 HG-45.
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAS_NUMBA = False

LG_PLUS, LG_MINUS, HG_H, HG_V, HG_P45, HG_M45 = range(6)

_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)
_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


def _beam_params(z: float, k: float, z_r: float) -> tuple[float, float, float]:
    """(w^2, 1/R, gouy) at axial position z."""
    s = z_r * z_r + z * z
    w2 = 2.0 * s / (k * z_r)
    inv_r = z / s
    gouy = 2.0 * math.atan(z / z_r)
    return w2, inv_r, gouy


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------


def _mode_field_numpy(code, x, y, z, k, z_r):
    w2, inv_r, gouy = _beam_params(z, k, z_r)
    rho2 = x * x + y * y
    envelope = np.exp(-rho2 / w2) * np.exp(1j * (0.5 * k * rho2 * inv_r + gouy))
    if code == LG_PLUS:
        amp = _TWO_OVER_SQRT_PI * (x + 1j * y) / w2
    elif code == LG_MINUS:
        amp = _TWO_OVER_SQRT_PI * (x - 1j * y) / w2
    elif code == HG_H:
        amp = _SQRT_2_OVER_PI * (2.0 * x) / w2
    elif code == HG_V:
        amp = _SQRT_2_OVER_PI * (2.0 * y) / w2
    elif code == HG_P45:
        amp = _TWO_OVER_SQRT_PI * (x + y) / w2
    elif code == HG_M45:
        amp = _TWO_OVER_SQRT_PI * (x - y) / w2
    else:
        raise ValueError(f"unknown mode code {code}")
    return amp * envelope


def _superposition_intensity_numpy(lam_out, lam_ref, qx, qy, x, y, z, k, z_r):
    psi_p = _mode_field_numpy(LG_PLUS, x, y, z, k, z_r)
    psi_m = _mode_field_numpy(LG_MINUS, x, y, z, k, z_r)
    tilt = np.exp(1j * (qx * x + qy * y))
    e_h = lam_out[0] * psi_p + lam_out[1] * psi_m + tilt * (lam_ref[0] * psi_p + lam_ref[1] * psi_m)
    e_v = lam_out[2] * psi_p + lam_out[3] * psi_m + tilt * (lam_ref[2] * psi_p + lam_ref[3] * psi_m)
    return np.abs(e_h) ** 2 + np.abs(e_v) ** 2


def _closed_form_intensity_numpy(eps, sin2t, cos2t, qx, qy, x, y, z, k, z_r):
    w2, _, _ = _beam_params(z, k, z_r)
    rho2 = x * x + y * y
    envelope = (4.0 * rho2 / (math.pi * w2 * w2)) * np.exp(-2.0 * rho2 / w2)
    qr = qx * x + qy * y
    phi2 = 2.0 * np.arctan2(y, x)
    cross = 2.0 * math.sqrt(eps * (1.0 - eps))
    bracket = (
        1.0
        - cross * sin2t * np.cos(qr)
        - eps * cos2t * np.sin(qr + phi2)
        - (1.0 - eps) * cos2t * np.sin(qr - phi2)
    )
    return envelope * bracket


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if HAS_NUMBA:

    @numba.njit(cache=True, inline="always")
    def _mode_amp_numba(code, xi, yi, w2):
        if code == 0:
            return _TWO_OVER_SQRT_PI * complex(xi, yi) / w2
        elif code == 1:
            return _TWO_OVER_SQRT_PI * complex(xi, -yi) / w2
        elif code == 2:
            return _SQRT_2_OVER_PI * (2.0 * xi) / w2 + 0.0j
        elif code == 3:
            return _SQRT_2_OVER_PI * (2.0 * yi) / w2 + 0.0j
        elif code == 4:
            return _TWO_OVER_SQRT_PI * (xi + yi) / w2 + 0.0j
        else:
            return _TWO_OVER_SQRT_PI * (xi - yi) / w2 + 0.0j

    @numba.njit(cache=True)
    def _mode_field_numba(code, x, y, z, k, z_r):
        s = z_r * z_r + z * z
        w2 = 2.0 * s / (k * z_r)
        inv_r = z / s
        gouy = 2.0 * math.atan(z / z_r)
        out = np.empty(x.shape[0], dtype=np.complex128)
        for i in range(x.shape[0]):
            rho2 = x[i] * x[i] + y[i] * y[i]
            phase = 0.5 * k * rho2 * inv_r + gouy
            envelope = math.exp(-rho2 / w2) * complex(math.cos(phase), math.sin(phase))
            out[i] = _mode_amp_numba(code, x[i], y[i], w2) * envelope
        return out

    @numba.njit(cache=True)
    def _superposition_intensity_numba(lam_out, lam_ref, qx, qy, x, y, z, k, z_r):
        s = z_r * z_r + z * z
        w2 = 2.0 * s / (k * z_r)
        inv_r = z / s
        gouy = 2.0 * math.atan(z / z_r)
        out = np.empty(x.shape[0], dtype=np.float64)
        for i in range(x.shape[0]):
            xi = x[i]
            yi = y[i]
            rho2 = xi * xi + yi * yi
            phase = 0.5 * k * rho2 * inv_r + gouy
            envelope = math.exp(-rho2 / w2) * complex(math.cos(phase), math.sin(phase))
            psi_p = _TWO_OVER_SQRT_PI * complex(xi, yi) / w2 * envelope
            psi_m = _TWO_OVER_SQRT_PI * complex(xi, -yi) / w2 * envelope
            tilt_arg = qx * xi + qy * yi
            tilt = complex(math.cos(tilt_arg), math.sin(tilt_arg))
            e_h = (
                lam_out[0] * psi_p
                + lam_out[1] * psi_m
                + tilt * (lam_ref[0] * psi_p + lam_ref[1] * psi_m)
            )
            e_v = (
                lam_out[2] * psi_p
                + lam_out[3] * psi_m
                + tilt * (lam_ref[2] * psi_p + lam_ref[3] * psi_m)
            )
            out[i] = abs(e_h) ** 2 + abs(e_v) ** 2
        return out

    @numba.njit(cache=True)
    def _closed_form_intensity_numba(eps, sin2t, cos2t, qx, qy, x, y, z, k, z_r):
        s = z_r * z_r + z * z
        w2 = 2.0 * s / (k * z_r)
        cross = 2.0 * math.sqrt(eps * (1.0 - eps))
        out = np.empty(x.shape[0], dtype=np.float64)
        for i in range(x.shape[0]):
            xi = x[i]
            yi = y[i]
            rho2 = xi * xi + yi * yi
            envelope = (4.0 * rho2 / (math.pi * w2 * w2)) * math.exp(-2.0 * rho2 / w2)
            qr = qx * xi + qy * yi
            phi2 = 2.0 * math.atan2(yi, xi)
            bracket = (
                1.0
                - cross * sin2t * math.cos(qr)
                - eps * cos2t * math.sin(qr + phi2)
                - (1.0 - eps) * cos2t * math.sin(qr - phi2)
            )
            out[i] = envelope * bracket
        return out


_IMPLS = {
    "numpy": {
        "mode_field": _mode_field_numpy,
        "superposition_intensity": _superposition_intensity_numpy,
        "closed_form_intensity": _closed_form_intensity_numpy,
    }
}
if HAS_NUMBA:
    _IMPLS["numba"] = {
        "mode_field": _mode_field_numba,
        "superposition_intensity": _superposition_intensity_numba,
        "closed_form_intensity": _closed_form_intensity_numba,
    }


def _resolve(name: str) -> str:
    if name == "auto":
        return "numba" if HAS_NUMBA else "numpy"
    if name == "numba" and not HAS_NUMBA:
        raise RuntimeError("VORTEXBENCH_BACKEND=numba but numba is not importable")
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}; expected auto, numba, or numpy")
    return name


_active = _resolve(os.environ.get("VORTEXBENCH_BACKEND", "auto"))


def active_backend() -> str:
    """Name of the backend currently dispatching kernel calls."""
    return _active


def set_backend(name: str) -> str:
    """Switch kernel backend ('auto', 'numba', 'numpy'); returns the previous one."""
    global _active
    previous = _active
    _active = _resolve(name)
    return previous


def _as_flat(a) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(a, dtype=np.float64).ravel())


def mode_field(code: int, x, y, z: float, k: float, z_r: float) -> np.ndarray:
    """Complex field of one first-order mode at points (x, y, z)."""
    xf, yf = _as_flat(x), _as_flat(y)
    out = _IMPLS[_active]["mode_field"](code, xf, yf, float(z), float(k), float(z_r))
    return out.reshape(np.shape(x))


def superposition_intensity(lam_out, lam_ref, qx, qy, x, y, z, k, z_r) -> np.ndarray:
    """|out_field + exp(i q.r) ref_field|^2 summed over both polarizations."""
    xf, yf = _as_flat(x), _as_flat(y)
    lo = np.ascontiguousarray(np.asarray(lam_out, dtype=np.complex128))
    lr = np.ascontiguousarray(np.asarray(lam_ref, dtype=np.complex128))
    out = _IMPLS[_active]["superposition_intensity"](
        lo, lr, float(qx), float(qy), xf, yf, float(z), float(k), float(z_r)
    )
    return out.reshape(np.shape(x))


def closed_form_intensity(eps, sin2t, cos2t, qx, qy, x, y, z, k, z_r) -> np.ndarray:
    """Donut envelope times the fringe bracket for the standard cycle output."""
    xf, yf = _as_flat(x), _as_flat(y)
    out = _IMPLS[_active]["closed_form_intensity"](
        float(eps),
        float(sin2t),
        float(cos2t),
        float(qx),
        float(qy),
        xf,
        yf,
        float(z),
        float(k),
        float(z_r),
    )
    return out.reshape(np.shape(x))
