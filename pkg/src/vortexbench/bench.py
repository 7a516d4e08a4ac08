"""Bench-script parsing, run orchestration, and artifact writers.

Script grammar (line oriented, '#' starts a comment, keywords are
case-insensitive, every parameter is key=value):

    source epsilon=<real>                       # required, first directive
    waveplate theta=<deg> phi=<deg>
    hwp theta=<deg>                             # sugar for phi=180
    qwp theta=<deg>                             # sugar for phi=90
    converter theta=<deg> phi=<deg>
    pbs keep=<H|V>
    trajectory [samples=<int>]                  # defaults to the CLI setting
    interfere qx=<val> qy=<val> grid=<int> extent=<len> out=<path>

Retardations are degrees in scripts and radians inside the library.
Analysis directives always apply to the script's complete element sequence.

A run produces a JSON report with sorted keys (diff-friendly), one PGM per
``interfere`` directive, and one CSV per ``trajectory`` directive. Reruns
of the same script are byte-identical except for the ``generated_at``
timestamp.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .elements import (
    ElementKind,
    OpticalElement,
    intermediate_states,
)
from .errors import NonCyclicTrajectoryError, ParseError
from .geometry import BeamGeometry
from .interference import (
    InterferenceConfig,
    IntensityImage,
    measure_visibility,
    singularity_polarity,
    superposition_image,
)
from .states import SpinOrbitState, concurrence, overlap, prepare_initial
from .topology import Trajectory, trace_trajectory, verify_phase_consistency

_TOKEN = re.compile(r"\S+")


# ---------------------------------------------------------------------------
# script model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ElementDirective:
    """One element line, kept in its source spelling for faithful printing."""

    form: str  # waveplate | hwp | qwp | converter | pbs
    theta_deg: float = 0.0
    phi_deg: float = 0.0
    keep: str | None = None
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def to_element(self) -> OpticalElement:
        if self.form == "pbs":
            return OpticalElement(ElementKind.POLARIZATION_FILTER, keep=self.keep)
        kind = ElementKind.MODE_CONVERTER if self.form == "converter" else ElementKind.WAVE_PLATE
        return OpticalElement(kind, self.theta_deg, math.radians(self.phi_deg))

    def print_line(self) -> str:
        if self.form == "pbs":
            return f"pbs keep={self.keep}"
        if self.form in ("hwp", "qwp"):
            return f"{self.form} theta={self.theta_deg!r}"
        return f"{self.form} theta={self.theta_deg!r} phi={self.phi_deg!r}"


@dataclass(frozen=True)
class TrajectoryDirective:
    samples: int | None = None
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def print_line(self) -> str:
        return "trajectory" if self.samples is None else f"trajectory samples={self.samples}"


@dataclass(frozen=True)
class InterfereDirective:
    qx: float
    qy: float
    grid: int
    extent: float
    out: str
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def print_line(self) -> str:
        return (
            f"interfere qx={self.qx!r} qy={self.qy!r} grid={self.grid} "
            f"extent={self.extent!r} out={self.out}"
        )


@dataclass(frozen=True)
class BenchScript:
    epsilon: float
    elements: tuple[ElementDirective, ...]
    analyses: tuple[TrajectoryDirective | InterfereDirective, ...]

    def print_script(self) -> str:
        lines = [f"source epsilon={self.epsilon!r}"]
        lines += [e.print_line() for e in self.elements]
        lines += [a.print_line() for a in self.analyses]
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _parse_kv(token: str, line: int, column: int) -> tuple[str, str]:
    if "=" not in token:
        raise ParseError(f"expected key=value, got {token!r}", line, column)
    key, _, value = token.partition("=")
    if not key or not value:
        raise ParseError(f"malformed key=value pair {token!r}", line, column)
    return key.lower(), value


def _float_value(key: str, raw: str, line: int, column: int) -> float:
    try:
        v = float(raw)
    except ValueError:
        raise ParseError(f"{key} expects a number, got {raw!r}", line, column) from None
    if not math.isfinite(v):
        raise ParseError(f"{key} must be finite, got {raw!r}", line, column)
    return v


def _int_value(key: str, raw: str, line: int, column: int) -> int:
    try:
        return int(raw, 10)
    except ValueError:
        raise ParseError(f"{key} expects an integer, got {raw!r}", line, column) from None


_DIRECTIVE_KEYS = {
    "source": {"epsilon"},
    "waveplate": {"theta", "phi"},
    "hwp": {"theta"},
    "qwp": {"theta"},
    "converter": {"theta", "phi"},
    "pbs": {"keep"},
    "trajectory": {"samples"},
    "interfere": {"qx", "qy", "grid", "extent", "out"},
}
_OPTIONAL_KEYS = {"trajectory": {"samples"}}


def _collect_params(keyword: str, tokens, line: int) -> dict:
    allowed = _DIRECTIVE_KEYS[keyword]
    optional = _OPTIONAL_KEYS.get(keyword, set())
    params: dict[str, tuple[str, int]] = {}
    for match in tokens:
        column = match.start() + 1
        key, value = _parse_kv(match.group(), line, column)
        if key not in allowed:
            raise ParseError(f"directive '{keyword}' takes no parameter '{key}'", line, column)
        if key in params:
            raise ParseError(f"duplicate parameter '{key}'", line, column)
        params[key] = (value, column)
    missing = allowed - optional - set(params)
    if missing:
        raise ParseError(
            f"directive '{keyword}' is missing parameter(s): {', '.join(sorted(missing))}",
            line,
            1,
        )
    return params


def parse(text: str) -> BenchScript:
    """Parse bench-script source into a validated ``BenchScript``."""
    epsilon: float | None = None
    elements: list[ElementDirective] = []
    analyses: list[TrajectoryDirective | InterfereDirective] = []

    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        code = raw_line.split("#", 1)[0]
        tokens = list(_TOKEN.finditer(code))
        if not tokens:
            continue
        keyword = tokens[0].group().lower()
        column = tokens[0].start() + 1
        if keyword not in _DIRECTIVE_KEYS:
            raise ParseError(f"unknown directive '{keyword}'", line_no, column)
        params = _collect_params(keyword, tokens[1:], line_no)

        if keyword == "source":
            if epsilon is not None:
                raise ParseError("duplicate source directive", line_no, column)
            if elements or analyses:
                raise ParseError("source directive must appear first", line_no, column)
            raw, col = params["epsilon"]
            value = _float_value("epsilon", raw, line_no, col)
            if not (0.0 <= value <= 1.0):
                raise ParseError(f"epsilon must lie in [0, 1], got {value!r}", line_no, col)
            epsilon = value
            continue

        if epsilon is None:
            raise ParseError("missing source directive", line_no, column)

        if keyword in ("waveplate", "hwp", "qwp", "converter"):
            raw, col = params["theta"]
            theta = _float_value("theta", raw, line_no, col)
            if keyword == "hwp":
                phi = 180.0
            elif keyword == "qwp":
                phi = 90.0
            else:
                raw, col = params["phi"]
                phi = _float_value("phi", raw, line_no, col)
                if not (0.0 <= phi < 360.0):
                    raise ParseError(f"phi must lie in [0, 360), got {phi!r}", line_no, col)
            elements.append(
                ElementDirective(keyword, theta, phi, line=line_no, column=column)
            )
        elif keyword == "pbs":
            raw, col = params["keep"]
            keep = raw.upper()
            if keep not in ("H", "V"):
                raise ParseError(f"keep must be H or V, got {raw!r}", line_no, col)
            elements.append(ElementDirective("pbs", keep=keep, line=line_no, column=column))
        elif keyword == "trajectory":
            samples = None
            if "samples" in params:
                raw, col = params["samples"]
                samples = _int_value("samples", raw, line_no, col)
                if samples < 16:
                    raise ParseError(f"samples must be >= 16, got {samples}", line_no, col)
            analyses.append(TrajectoryDirective(samples, line=line_no, column=column))
        elif keyword == "interfere":
            raw, col = params["qx"]
            qx = _float_value("qx", raw, line_no, col)
            raw, col = params["qy"]
            qy = _float_value("qy", raw, line_no, col)
            raw, col = params["grid"]
            grid = _int_value("grid", raw, line_no, col)
            if grid < 64:
                raise ParseError(f"grid must be >= 64, got {grid}", line_no, col)
            raw, col = params["extent"]
            extent = _float_value("extent", raw, line_no, col)
            if not (extent > 0.0):
                raise ParseError(f"extent must be positive, got {extent!r}", line_no, col)
            out, _ = params["out"]
            analyses.append(
                InterfereDirective(qx, qy, grid, extent, out, line=line_no, column=column)
            )

    if epsilon is None:
        raise ParseError("missing source directive", 1, 1)
    return BenchScript(epsilon=epsilon, elements=tuple(elements), analyses=tuple(analyses))


# ---------------------------------------------------------------------------
# artifact writers
# ---------------------------------------------------------------------------


def write_image(img: IntensityImage, path) -> None:
    """Write a binary 8-bit PGM: 'P5', width height, 255, then raw rows.

    Pixel byte = round(255 * I / I_max) with halves away from zero; an
    all-zero image writes all-zero bytes. Output is bit-exact for a given
    intensity array.
    """
    values = img.values
    peak = float(values.max())
    if peak <= 0.0:
        data = np.zeros(values.shape, dtype=np.uint8)
    else:
        scaled = np.floor(255.0 * values / peak + 0.5)
        data = np.clip(scaled, 0.0, 255.0).astype(np.uint8)
    height, width = values.shape
    with open(path, "wb") as handle:
        handle.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        handle.write(data.tobytes())


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """Write trajectory samples as CSV rows (t, a, ux, uy, uz, gamma, crossing)."""
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        handle.write("t,a,ux,uy,uz,gamma,crossing\n")
        for s in traj.samples:
            ux, uy, uz = s.point.u
            handle.write(
                f"{s.t:.17g},{s.point.a:.17g},{ux:.17g},{uy:.17g},{uz:.17g},"
                f"{s.gamma:.17g},{1 if s.crossing else 0}\n"
            )


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------


def _quadruple(s: SpinOrbitState) -> list[list[float]]:
    return [[float(a.real), float(a.imag)] for a in s.amplitudes]


def _standard_cycle_theta(elements: tuple[ElementDirective, ...]) -> float | None:
    """HWP angle if the script is the converter/hwp/converter/qwp probe cycle."""
    if len(elements) != 4:
        return None
    if any(e.form == "pbs" for e in elements):
        return None
    for converter in (elements[0], elements[2]):
        if (
            converter.form != "converter"
            or abs(converter.theta_deg - 22.5) > 1e-9
            or abs(converter.phi_deg - 90.0) > 1e-9
        ):
            return None
    hwp, qwp = elements[1], elements[3]
    if hwp.form not in ("hwp", "waveplate") or abs(hwp.phi_deg - 180.0) > 1e-9:
        return None
    if qwp.form not in ("qwp", "waveplate") or abs(qwp.phi_deg - 90.0) > 1e-9:
        return None
    if abs(qwp.theta_deg) > 1e-9:
        return None
    return hwp.theta_deg


def run(
    script: BenchScript,
    out_dir=".",
    samples_default: int = 256,
    geom: BeamGeometry | None = None,
) -> dict:
    """Execute a parsed script; write artifacts under out_dir; return the report."""
    geom = geom or BeamGeometry.default()
    out_root = Path(out_dir)
    out_root.mkdir(parents=True, exist_ok=True)

    initial = prepare_initial(script.epsilon)
    elements = [d.to_element() for d in script.elements]
    states = intermediate_states(initial, elements)
    final = states[-1]

    element_reports = []
    for directive, state in zip(script.elements, states[1:]):
        element_reports.append(
            {
                "directive": directive.print_line(),
                "state_after": _quadruple(state),
                "concurrence": concurrence(state),
            }
        )

    report: dict = {
        "tool_version": __version__,
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "script": script.print_script(),
        "epsilon": script.epsilon,
        "initial_state": _quadruple(initial),
        "initial_concurrence": concurrence(initial),
        "elements": element_reports,
        "final_state": _quadruple(final),
        "final_concurrence": concurrence(final),
        "trajectories": [],
        "interferograms": [],
    }

    trajectory_index = 0
    for analysis in script.analyses:
        if isinstance(analysis, TrajectoryDirective):
            trajectory_index += 1
            samples = analysis.samples if analysis.samples is not None else samples_default
            traj = trace_trajectory(initial, elements, samples_per_element=samples)
            ov = overlap(traj.initial_state, traj.final_state)
            try:
                consistent = verify_phase_consistency(traj)
                closed = True
            except NonCyclicTrajectoryError:
                consistent = None
                closed = False
            name = "trajectory.csv" if trajectory_index == 1 else f"trajectory-{trajectory_index}.csv"
            write_trajectory_csv(traj, out_root / name)
            report["trajectories"].append(
                {
                    "csv": name,
                    "samples_per_element": samples,
                    "crossing_count": len(traj.crossings),
                    "crossing_parameters": list(traj.crossings),
                    "homotopy_class": traj.homotopy_class.value,
                    "topological_phase": traj.topological_phase,
                    "overlap_with_initial": [ov.real, ov.imag],
                    "closed": closed,
                    "phase_consistent": consistent,
                }
            )
        else:
            img = superposition_image(
                initial, final, (analysis.qx, analysis.qy), geom, analysis.grid, analysis.extent
            )
            write_image(img, out_root / analysis.out)
            ring = geom.beam_width(0.0) / math.sqrt(2.0)
            visibility = measure_visibility(img, ring_radius=ring)
            theta = _standard_cycle_theta(script.elements)
            polarity = None
            if theta is not None and min(abs(theta - 45.0), abs(theta + 45.0)) < 1e-9:
                cfg = InterferenceConfig(
                    q=(analysis.qx, analysis.qy),
                    epsilon=script.epsilon,
                    theta_deg=theta,
                    geom=geom,
                    grid=analysis.grid,
                    extent=analysis.extent,
                )
                polarity = singularity_polarity(cfg)
            report["interferograms"].append(
                {
                    "out": analysis.out,
                    "qx": analysis.qx,
                    "qy": analysis.qy,
                    "grid": analysis.grid,
                    "extent": analysis.extent,
                    "ring_radius": ring,
                    "visibility": visibility,
                    "singularity_polarity": polarity,
                }
            )

    return report


def format_report(report: dict) -> str:
    """Canonical report text: JSON with sorted keys (diff-friendly)."""
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


__all__ = [
    "BenchScript",
    "ElementDirective",
    "TrajectoryDirective",
    "InterfereDirective",
    "parse",
    "run",
    "format_report",
    "write_image",
    "write_trajectory_csv",
]
