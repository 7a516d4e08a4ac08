"""Built-in acceptance checks, runnable via ``vortexbench selftest``.

Each criterion is independent, uses fixed seeds, and finishes in seconds.
The pytest suite wraps the same functions, so the CLI and CI agree on what
"passing" means.
"""

from __future__ import annotations

import cmath
import math
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import bench
from .elements import (
    apply_sequence,
    converter_matrix,
    half_wave_plate,
    intermediate_states,
    mode_converter,
    quarter_wave_plate,
    topological_cycle,
    waveplate,
    waveplate_matrix,
)
from .geometry import BeamGeometry, TransversePoint
from .interference import (
    InterferenceConfig,
    closed_form_image,
    default_q,
    measure_visibility,
    render,
    singularity_polarity,
    superposition_image,
)
from .modes import ModeLabel, eval_mode, mode_norm_quadrature
from .states import SpinOrbitState, concurrence, overlap, prepare_initial
from .topology import (
    HomotopyClass,
    SO3Point,
    gauge_decompose,
    point_to_state,
    su2_to_point,
    trace_trajectory,
    verify_phase_consistency,
)


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    detail: str


def _exp(phase: float) -> complex:
    return cmath.exp(1j * phase)


def _chain_expected(theta_deg: float) -> list[np.ndarray]:
    """Analytic state quadruples after each element of the standard cycle."""
    two_theta = math.radians(2.0 * theta_deg)
    c, s = math.cos(two_theta), math.sin(two_theta)
    e4 = _exp(math.pi / 4.0)
    e4c = e4.conjugate()
    psi1 = 0.5 * np.array([1.0, _exp(3.0 * math.pi / 4.0), e4, 1.0])
    psi2 = 0.5 * np.array(
        [1j * c - s * e4c, -c * e4 + 1j * s, 1j * s + c * e4c, -s * e4 - 1j * c]
    )
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    psi3 = inv_sqrt2 * np.array([-s * e4c, -c * e4, c * e4c, -s * e4])
    psi4 = inv_sqrt2 * np.array([-s, -1j * c, -1j * c, -s])
    return [psi1, psi2, psi3, psi4]


def _criterion_chain() -> CriterionResult:
    """Element chain reproduces the analytic quadruples at theta in {-45, 0, 45}."""
    worst = 0.0
    for theta in (-45.0, 0.0, 45.0):
        states = intermediate_states(prepare_initial(0.5), topological_cycle(theta))
        for state, expected in zip(states[1:], _chain_expected(theta)):
            worst = max(worst, float(np.max(np.abs(state.amplitudes - expected))))
    return CriterionResult(
        "transformation-chain", worst < 1e-12, f"max amplitude error {worst:.3e} (< 1e-12)"
    )


def _criterion_cyclic_sign() -> CriterionResult:
    """Cycle output is +input at theta=-45 and -input at theta=+45."""
    psi0 = prepare_initial(0.5)
    plus = overlap(psi0, apply_sequence(psi0, topological_cycle(-45.0)))
    minus = overlap(psi0, apply_sequence(psi0, topological_cycle(45.0)))
    err = max(abs(plus - 1.0), abs(minus + 1.0))
    return CriterionResult(
        "cyclic-sign",
        err < 1e-12,
        f"overlap(+45) = {minus.real:+.12f}, overlap(-45) = {plus.real:+.12f}, err {err:.3e}",
    )


def _point_error(state: SpinOrbitState, a: float, u: tuple[float, float, float]) -> float:
    p = su2_to_point(gauge_decompose(state).U)
    return max(abs(p.a - a), float(np.max(np.abs(np.asarray(p.u) - np.asarray(u)))))


def _criterion_point_table() -> CriterionResult:
    """Ball coordinates of the cycle's intermediate states."""
    worst = 0.0
    psi0 = prepare_initial(0.5)
    worst = max(worst, _point_error(psi0, 0.0, (0.0, 0.0, 1.0)))
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for theta in (-45.0, 45.0):
        states = intermediate_states(psi0, topological_cycle(theta))
        worst = max(worst, _point_error(states[1], math.pi / 2.0, (-inv_sqrt2, inv_sqrt2, 0.0)))
        worst = max(
            worst,
            _point_error(
                states[2], 2.0 * math.pi / 3.0, (math.sqrt(2.0 / 3.0), 0.0, 1.0 / math.sqrt(3.0))
            ),
        )
        worst = max(worst, _point_error(states[3], math.pi / 2.0, (0.0, 0.0, 1.0)))
    return CriterionResult(
        "so3-point-table", worst < 1e-12, f"max component error {worst:.3e} (< 1e-12)"
    )


def _criterion_homotopy() -> CriterionResult:
    """Crossing counts, classes, phases, and sample-density invariance."""
    psi0 = prepare_initial(0.5)
    failures = []
    for theta, want_crossings, want_class, want_phase in (
        (45.0, 1, HomotopyClass.PI, -1),
        (-45.0, 0, HomotopyClass.ZERO, 1),
    ):
        per_density = []
        for spe in (256, 512):
            traj = trace_trajectory(psi0, topological_cycle(theta), samples_per_element=spe)
            ov = overlap(traj.initial_state, traj.final_state)
            ok = (
                len(traj.crossings) == want_crossings
                and traj.homotopy_class is want_class
                and traj.topological_phase == want_phase
                and traj.topological_phase == (-1) ** len(traj.crossings)
                and verify_phase_consistency(traj)
                and (1 if ov.real > 0 else -1) == want_phase
            )
            per_density.append((spe, len(traj.crossings), ok))
            if not ok:
                failures.append(f"theta={theta}, spe={spe}: crossings={len(traj.crossings)}")
        if per_density[0][1] != per_density[1][1]:
            failures.append(f"theta={theta}: crossing count changed with sample density")
    detail = "crossings(+45)=1 pi-class phase=-1; crossings(-45)=0 0-class phase=+1"
    if failures:
        detail = "; ".join(failures)
    return CriterionResult("homotopy-classification", not failures, detail)


def _criterion_visibility_law() -> CriterionResult:
    """Ring visibility of rendered images matches 2 sqrt(eps (1-eps))."""
    geom = BeamGeometry.default()
    q = default_q(geom)
    ring = geom.beam_width(0.0) / math.sqrt(2.0)
    worst = 0.0
    for theta in (-45.0, 45.0):
        for eps in (0.0, 0.25, 0.5, 0.75, 1.0):
            cfg = InterferenceConfig(
                q=q, epsilon=eps, theta_deg=theta, geom=geom, grid=512, extent=2e-3
            )
            measured = measure_visibility(render(cfg), ring_radius=ring)
            expected = 2.0 * math.sqrt(eps * (1.0 - eps))
            worst = max(worst, abs(measured - expected))
    return CriterionResult(
        "visibility-law", worst < 1e-3, f"max |V - 2 sqrt(eps(1-eps))| = {worst:.2e} (< 1e-3)"
    )


def _criterion_polarity() -> CriterionResult:
    """Core fringe is bright at theta=-45 and dark at theta=+45 for eps=1/2."""
    geom = BeamGeometry.default()
    q = default_q(geom)
    got = {
        theta: singularity_polarity(
            InterferenceConfig(q=q, epsilon=0.5, theta_deg=theta, geom=geom)
        )
        for theta in (-45.0, 45.0)
    }
    ok = got[-45.0] == "bright" and got[45.0] == "dark"
    return CriterionResult(
        "singularity-polarity", ok, f"theta=-45 -> {got[-45.0]}, theta=+45 -> {got[45.0]}"
    )


def _criterion_oracle_equivalence() -> CriterionResult:
    """Closed form and direct superposition agree up to one global scale."""
    geom = BeamGeometry.default()
    q = default_q(geom)
    worst = 0.0
    for eps in (0.0, 0.5, 1.0):
        for theta in (-45.0, 45.0):
            cfg = InterferenceConfig(
                q=q, epsilon=eps, theta_deg=theta, geom=geom, grid=128, extent=2e-3
            )
            ref = prepare_initial(eps)
            out = apply_sequence(ref, topological_cycle(theta))
            direct = superposition_image(ref, out, q, geom, cfg.grid, cfg.extent).values
            closed = closed_form_image(cfg).values
            scale = float(np.sum(direct * closed) / np.sum(closed * closed))
            residual = float(np.max(np.abs(direct - scale * closed)) / np.max(np.abs(direct)))
            worst = max(worst, residual)
    return CriterionResult(
        "oracle-equivalence",
        worst < 1e-9,
        f"max scaled residual {worst:.3e} (< 1e-9), fitted scale ~2",
    )


def _random_unitary_element(rng: np.random.Generator):
    theta = float(rng.uniform(-180.0, 180.0))
    phi = float(rng.uniform(0.0, 2.0 * math.pi))
    if rng.integers(2) == 0:
        return waveplate(theta, phi)
    return mode_converter(theta, phi)


def _criterion_property_suites() -> CriterionResult:
    """Unitarity, concurrence invariance, ball roundtrip, quadrature norms."""
    rng = np.random.default_rng(20230615)
    eye = np.eye(2)

    unit_err = 0.0
    for _ in range(1000):
        theta = float(rng.uniform(-180.0, 180.0))
        phi = float(rng.uniform(0.0, 2.0 * math.pi))
        for m in (waveplate_matrix(theta, phi), converter_matrix(theta, phi)):
            unit_err = max(unit_err, float(np.max(np.abs(m.conj().T @ m - eye))))
            unit_err = max(unit_err, abs(np.linalg.det(m) - 1.0))
    if unit_err >= 1e-12:
        return CriterionResult("property-suites", False, f"unitarity residual {unit_err:.3e}")

    conc_err = 0.0
    for _ in range(1000):
        raw = rng.normal(size=4) + 1j * rng.normal(size=4)
        state = SpinOrbitState(raw / np.linalg.norm(raw))
        elems = [_random_unitary_element(rng) for _ in range(int(rng.integers(1, 5)))]
        conc_err = max(
            conc_err, abs(concurrence(apply_sequence(state, elems)) - concurrence(state))
        )
    if conc_err >= 1e-12:
        return CriterionResult("property-suites", False, f"concurrence drift {conc_err:.3e}")

    round_err = 0.0
    for _ in range(1000):
        a = float(rng.uniform(0.0, math.pi))
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        gamma = float(rng.uniform(-math.pi, math.pi))
        p = SO3Point(a=a, u=tuple(axis))
        p2 = su2_to_point(gauge_decompose(point_to_state(p, gamma)).U)
        v1, v2 = p.vector, p2.vector
        err = float(np.linalg.norm(v1 - v2))
        if (math.pi - p.a) < 1e-9 and (math.pi - p2.a) < 1e-9:
            err = min(err, float(np.linalg.norm(v1 + v2)))
        round_err = max(round_err, err)
    if round_err >= 1e-10:
        return CriterionResult("property-suites", False, f"ball roundtrip error {round_err:.3e}")

    geom = BeamGeometry.default()
    norm_err = 0.0
    for z in (0.0, geom.z_R, 2.0 * geom.z_R):
        for label in ModeLabel:
            norm_err = max(norm_err, abs(mode_norm_quadrature(label, z, geom) - 1.0))
    if norm_err >= 1e-6:
        return CriterionResult("property-suites", False, f"quadrature norm error {norm_err:.3e}")

    ident_err = 0.0
    w0 = geom.beam_width(0.0)
    for _ in range(50):
        p = TransversePoint(
            x=float(rng.uniform(-2, 2)) * w0,
            y=float(rng.uniform(-2, 2)) * w0,
            z=float(rng.uniform(-1, 1)) * geom.z_R,
        )
        h = eval_mode(ModeLabel.HG_H, p, geom)
        v = eval_mode(ModeLabel.HG_V, p, geom)
        ident_err = max(
            ident_err,
            abs(eval_mode(ModeLabel.LG_PLUS, p, geom) - (h + 1j * v) / math.sqrt(2.0)),
            abs(eval_mode(ModeLabel.LG_MINUS, p, geom) - (h - 1j * v) / math.sqrt(2.0)),
        )
    if ident_err >= 1e-12:
        return CriterionResult("property-suites", False, f"LG/HG identity error {ident_err:.3e}")

    return CriterionResult(
        "property-suites",
        True,
        f"unitarity {unit_err:.1e}, concurrence {conc_err:.1e}, roundtrip {round_err:.1e}, "
        f"norms {norm_err:.1e}, LG/HG {ident_err:.1e}",
    )


def _random_script(rng: np.random.Generator) -> bench.BenchScript:
    elements = []
    for _ in range(int(rng.integers(0, 7))):
        form = ["waveplate", "hwp", "qwp", "converter", "pbs"][int(rng.integers(5))]
        if form == "pbs":
            elements.append(bench.ElementDirective("pbs", keep="HV"[int(rng.integers(2))]))
        else:
            theta = float(rng.uniform(-360.0, 360.0))
            phi = float(rng.uniform(0.0, 360.0))
            if form == "hwp":
                phi = 180.0
            elif form == "qwp":
                phi = 90.0
            elements.append(bench.ElementDirective(form, theta, phi))
    analyses = []
    for i in range(int(rng.integers(0, 3))):
        if rng.integers(2) == 0:
            samples = None if rng.integers(2) == 0 else int(rng.integers(16, 512))
            analyses.append(bench.TrajectoryDirective(samples))
        else:
            analyses.append(
                bench.InterfereDirective(
                    qx=float(rng.normal() * 1e4),
                    qy=float(rng.normal() * 1e4),
                    grid=int(rng.integers(64, 257)),
                    extent=float(rng.uniform(1e-4, 1e-2)),
                    out=f"img-{i}.pgm",
                )
            )
    return bench.BenchScript(
        epsilon=float(rng.uniform(0.0, 1.0)),
        elements=tuple(elements),
        analyses=tuple(analyses),
    )


_RERUN_SCRIPT = """\
source epsilon=0.5
converter theta=22.5 phi=90
hwp theta=45
converter theta=22.5 phi=90
qwp theta=0
trajectory samples=64
interfere qx=8162.0 qy=4712.0 grid=64 extent=0.002 out=fringes.pgm
"""


def _criterion_io_regression() -> CriterionResult:
    """Script roundtrip, byte-exact image fixtures, deterministic reruns."""
    rng = np.random.default_rng(777)
    for _ in range(50):
        script = _random_script(rng)
        if bench.parse(script.print_script()) != script:
            return CriterionResult(
                "io-regression", False, "parse/print roundtrip changed a script"
            )

    from .interference import IntensityImage

    with tempfile.TemporaryDirectory() as tmp:
        tmp_path = Path(tmp)

        small = IntensityImage(values=np.array([[0.0, 7.0], [3.5, 0.0]]), pitch=1.0)
        bench.write_image(small, tmp_path / "small.pgm")
        got = (tmp_path / "small.pgm").read_bytes()
        if got != b"P5\n2 2\n255\n" + bytes([0, 255, 128, 0]):
            return CriterionResult("io-regression", False, f"2x2 fixture bytes {got!r}")

        zero = IntensityImage(values=np.zeros((64, 64)), pitch=1.0)
        bench.write_image(zero, tmp_path / "zero.pgm")
        got = (tmp_path / "zero.pgm").read_bytes()
        if got != b"P5\n64 64\n255\n" + bytes(64 * 64):
            return CriterionResult("io-regression", False, "all-zero fixture bytes differ")

        script = bench.parse(_RERUN_SCRIPT)
        artifacts = {}
        for run_dir in ("first", "second"):
            out = tmp_path / run_dir
            report = bench.run(script, out_dir=out)
            report.pop("generated_at")
            artifacts[run_dir] = (
                bench.format_report(report),
                (out / "fringes.pgm").read_bytes(),
                (out / "trajectory.csv").read_bytes(),
            )
        if artifacts["first"] != artifacts["second"]:
            return CriterionResult("io-regression", False, "rerun artifacts differ")

    return CriterionResult(
        "io-regression", True, "50 script roundtrips, image fixtures, reruns byte-identical"
    )


CRITERIA: list[tuple[str, Callable[[], CriterionResult]]] = [
    ("transformation-chain", _criterion_chain),
    ("cyclic-sign", _criterion_cyclic_sign),
    ("so3-point-table", _criterion_point_table),
    ("homotopy-classification", _criterion_homotopy),
    ("visibility-law", _criterion_visibility_law),
    ("singularity-polarity", _criterion_polarity),
    ("oracle-equivalence", _criterion_oracle_equivalence),
    ("property-suites", _criterion_property_suites),
    ("io-regression", _criterion_io_regression),
]


def run_criterion(name: str) -> CriterionResult:
    for crit_name, func in CRITERIA:
        if crit_name == name:
            try:
                return func()
            except Exception as exc:  # surface the failure, don't abort the suite
                return CriterionResult(name, False, f"raised {type(exc).__name__}: {exc}")
    raise KeyError(name)


def run_all(verbose: bool = True) -> list[CriterionResult]:
    results = []
    for name, _ in CRITERIA:
        result = run_criterion(name)
        results.append(result)
        if verbose:
            print(f"{'PASS' if result.passed else 'FAIL'}  {result.name}: {result.detail}")
    return results


__all__ = ["CriterionResult", "CRITERIA", "run_criterion", "run_all"]
