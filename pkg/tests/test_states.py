"""Spin-orbit state construction, concurrence, overlaps, and field evaluation."""

import cmath
import math

import numpy as np
import pytest

from vortexbench.elements import apply_sequence, topological_cycle
from vortexbench.geometry import BeamGeometry, TransversePoint
from vortexbench.modes import ModeLabel, eval_mode
from vortexbench.states import (
    SpinOrbitState,
    concurrence,
    field_at,
    field_grid,
    overlap,
    prepare_initial,
)

GEOM = BeamGeometry.default()
INV_SQRT2 = 1.0 / math.sqrt(2.0)

# quadruple after the first converter of the standard cycle
PSI1 = 0.5 * np.array(
    [1.0, cmath.exp(3j * math.pi / 4.0), cmath.exp(1j * math.pi / 4.0), 1.0]
)


class TestConstruction:
    def test_prepare_balanced(self):
        s = prepare_initial(0.5)
        assert np.allclose(s.amplitudes, [INV_SQRT2, 0, 0, INV_SQRT2], rtol=0, atol=1e-15)

    def test_prepare_blocked_horizontal(self):
        assert np.allclose(prepare_initial(0.0).amplitudes, [0, 0, 0, 1], rtol=0, atol=0)

    def test_prepare_blocked_vertical(self):
        assert np.allclose(prepare_initial(1.0).amplitudes, [1, 0, 0, 0], rtol=0, atol=0)

    @pytest.mark.parametrize("eps", [-0.1, 1.1, 2.0])
    def test_prepare_rejects_out_of_range(self, eps):
        with pytest.raises(ValueError):
            prepare_initial(eps)

    def test_constructor_absorbs_small_drift(self):
        amps = np.array([1.0 + 3e-10, 0, 0, 0], dtype=complex)
        s = SpinOrbitState(amps)
        assert abs(np.linalg.norm(s.amplitudes) - 1.0) < 1e-12

    def test_constructor_rejects_large_drift(self):
        with pytest.raises(ValueError):
            SpinOrbitState([1.0, 0.0, 0.0, 1e-3])

    def test_amplitudes_read_only(self):
        s = prepare_initial(0.5)
        with pytest.raises(ValueError):
            s.amplitudes[0] = 0.0

    def test_raw_comparison_sees_global_sign(self):
        s = prepare_initial(0.5)
        assert not (-s).isclose(s)
        assert (-s).isclose(SpinOrbitState(-s.amplitudes))


class TestConcurrence:
    def test_balanced_is_maximal(self):
        assert concurrence(prepare_initial(0.5)) == pytest.approx(1.0, abs=1e-12)

    def test_product_mode_is_zero(self):
        assert concurrence(SpinOrbitState([1, 0, 0, 0])) == 0.0

    def test_factored_superposition_is_zero(self):
        s = SpinOrbitState([0.5, 0.5, 0.5, 0.5])
        assert concurrence(s) == pytest.approx(0.0, abs=1e-15)

    def test_global_phase_invariance(self):
        rng = np.random.default_rng(11)
        raw = rng.normal(size=4) + 1j * rng.normal(size=4)
        s = SpinOrbitState(raw / np.linalg.norm(raw))
        base = concurrence(s)
        for _ in range(16):
            phase = cmath.exp(1j * rng.uniform(-math.pi, math.pi))
            assert abs(concurrence(SpinOrbitState(phase * s.amplitudes)) - base) < 1e-12

    def test_preparation_concurrence_law(self):
        for eps in np.linspace(0.0, 1.0, 21):
            expected = 2.0 * math.sqrt(eps * (1.0 - eps))
            assert abs(concurrence(prepare_initial(float(eps))) - expected) < 1e-12


class TestOverlap:
    def test_self_overlap(self):
        s = prepare_initial(0.5)
        assert overlap(s, s) == pytest.approx(1.0, abs=1e-15)

    def test_cycle_output_minus_branch(self):
        psi0 = prepare_initial(0.5)
        psi4 = apply_sequence(psi0, topological_cycle(45.0))
        assert abs(overlap(psi0, psi4) + 1.0) < 1e-12

    def test_overlap_with_first_converter_output(self):
        assert abs(overlap(prepare_initial(0.5), SpinOrbitState(PSI1)) - INV_SQRT2) < 1e-12


class TestFieldAt:
    def test_vanishes_at_vortex_core(self):
        rng = np.random.default_rng(5)
        raw = rng.normal(size=4) + 1j * rng.normal(size=4)
        s = SpinOrbitState(raw / np.linalg.norm(raw))
        jones = field_at(s, TransversePoint(0.0, 0.0, 0.0), GEOM)
        assert jones.E_H == 0.0 and jones.E_V == 0.0

    def test_single_basis_element(self):
        s = SpinOrbitState([1, 0, 0, 0])
        p = TransversePoint(0.3e-3, -0.2e-3, 0.0)
        jones = field_at(s, p, GEOM)
        assert jones.E_H == eval_mode(ModeLabel.LG_PLUS, p, GEOM)
        assert jones.E_V == 0.0

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_total_intensity_quadrature(self, seed):
        rng = np.random.default_rng(seed)
        raw = rng.normal(size=4) + 1j * rng.normal(size=4)
        s = SpinOrbitState(raw / np.linalg.norm(raw))
        w = GEOM.beam_width(0.0)
        n = 512
        h = 12.0 * w / n
        axis = -6.0 * w + h * (np.arange(n) + 0.5)
        xx, yy = np.meshgrid(axis, axis)
        e_h, e_v = field_grid(s, xx, yy, 0.0, GEOM)
        total = float(np.sum(np.abs(e_h) ** 2 + np.abs(e_v) ** 2) * h * h)
        assert abs(total - 1.0) < 1e-6
