"""Beam geometry and first-order mode function tests."""

import math

import numpy as np
import pytest

from vortexbench.errors import FlatWavefrontError, InsufficientResolutionError
from vortexbench.geometry import BeamGeometry, TransversePoint
from vortexbench.modes import (
    ModeLabel,
    eval_mode,
    eval_mode_grid,
    mode_norm_quadrature,
    mode_overlap_quadrature,
)

GEOM = BeamGeometry.default()


class TestBeamGeometry:
    def test_waist_width_small_numbers(self):
        geom = BeamGeometry(k=2.0, z_R=1.0)
        assert geom.beam_width(0.0) == pytest.approx(1.0, abs=1e-15)

    def test_width_at_rayleigh_length(self):
        assert GEOM.beam_width(GEOM.z_R) == pytest.approx(
            math.sqrt(2.0) * GEOM.beam_width(0.0), rel=1e-15
        )

    def test_width_even_in_z(self):
        assert GEOM.beam_width(-3.0) == GEOM.beam_width(3.0)

    def test_default_geometry_waist(self):
        assert GEOM.beam_width(0.0) == pytest.approx(1e-3, rel=1e-12)
        assert GEOM.k == pytest.approx(2.0 * math.pi / 532e-9, rel=1e-15)

    def test_radius_at_rayleigh_length(self):
        assert GEOM.wavefront_radius(GEOM.z_R) == pytest.approx(2.0 * GEOM.z_R, rel=1e-15)

    def test_radius_flat_at_waist(self):
        with pytest.raises(FlatWavefrontError):
            GEOM.wavefront_radius(0.0)
        assert GEOM.curvature_phase(1e-3, 0.0) == 0.0

    def test_radius_odd_in_z(self):
        z = 0.7 * GEOM.z_R
        assert GEOM.wavefront_radius(-z) == -GEOM.wavefront_radius(z)

    def test_invalid_geometry_rejected(self):
        with pytest.raises(ValueError):
            BeamGeometry(k=-1.0, z_R=1.0)
        with pytest.raises(ValueError):
            BeamGeometry(k=1.0, z_R=0.0)

    def test_transverse_point_derived(self):
        p = TransversePoint(x=3.0, y=-4.0, z=0.0)
        assert p.rho == pytest.approx(5.0)
        assert -math.pi < p.phi_az <= math.pi


class TestEvalMode:
    def test_lg_vanishes_at_core(self):
        for z in (0.0, GEOM.z_R):
            p = TransversePoint(0.0, 0.0, z)
            assert eval_mode(ModeLabel.LG_PLUS, p, GEOM) == 0.0
            assert eval_mode(ModeLabel.LG_MINUS, p, GEOM) == 0.0

    def test_hg_h_vanishes_on_y_axis(self):
        p = TransversePoint(0.0, 0.7e-3, 0.0)
        assert eval_mode(ModeLabel.HG_H, p, GEOM) == 0.0

    def test_lg_from_hg_pointwise(self):
        rng = np.random.default_rng(42)
        w0 = GEOM.beam_width(0.0)
        for _ in range(25):
            p = TransversePoint(
                x=float(rng.uniform(-2, 2)) * w0,
                y=float(rng.uniform(-2, 2)) * w0,
                z=float(rng.uniform(-1, 1)) * GEOM.z_R,
            )
            h = eval_mode(ModeLabel.HG_H, p, GEOM)
            v = eval_mode(ModeLabel.HG_V, p, GEOM)
            expect_plus = (h + 1j * v) / math.sqrt(2.0)
            expect_minus = (h - 1j * v) / math.sqrt(2.0)
            scale = max(abs(h), abs(v), 1.0)
            assert abs(eval_mode(ModeLabel.LG_PLUS, p, GEOM) - expect_plus) / scale < 1e-12
            assert abs(eval_mode(ModeLabel.LG_MINUS, p, GEOM) - expect_minus) / scale < 1e-12

    def test_diagonal_hg_pointwise(self):
        rng = np.random.default_rng(7)
        w0 = GEOM.beam_width(0.0)
        for _ in range(25):
            p = TransversePoint(
                x=float(rng.uniform(-2, 2)) * w0,
                y=float(rng.uniform(-2, 2)) * w0,
                z=float(rng.uniform(-1, 1)) * GEOM.z_R,
            )
            h = eval_mode(ModeLabel.HG_H, p, GEOM)
            v = eval_mode(ModeLabel.HG_V, p, GEOM)
            scale = max(abs(h), abs(v), 1.0)
            plus = eval_mode(ModeLabel.HG_PLUS45, p, GEOM)
            minus = eval_mode(ModeLabel.HG_MINUS45, p, GEOM)
            assert abs(plus - (h + v) / math.sqrt(2.0)) / scale < 1e-12
            assert abs(minus - (h - v) / math.sqrt(2.0)) / scale < 1e-12

    def test_lg_magnitude_azimuth_independent(self):
        rho = 0.8 * GEOM.beam_width(0.0)
        for z in (0.0, 0.5 * GEOM.z_R):
            mags = []
            for j in range(32):
                phi = 2.0 * math.pi * j / 32.0
                p = TransversePoint(rho * math.cos(phi), rho * math.sin(phi), z)
                mags.append(abs(eval_mode(ModeLabel.LG_PLUS, p, GEOM)))
            mags = np.asarray(mags)
            assert (mags.max() - mags.min()) / mags.mean() < 1e-12

    def test_lg_mirror_symmetry_at_waist(self):
        rng = np.random.default_rng(3)
        w0 = GEOM.beam_width(0.0)
        for _ in range(20):
            x = float(rng.uniform(-2, 2)) * w0
            y = float(rng.uniform(-2, 2)) * w0
            minus = eval_mode(ModeLabel.LG_MINUS, TransversePoint(x, y, 0.0), GEOM)
            plus_mirrored = eval_mode(ModeLabel.LG_PLUS, TransversePoint(x, -y, 0.0), GEOM)
            assert minus == plus_mirrored

    def test_grid_shape_preserved(self):
        xx, yy = np.meshgrid(np.linspace(-1e-3, 1e-3, 8), np.linspace(-1e-3, 1e-3, 8))
        out = eval_mode_grid(ModeLabel.LG_PLUS, xx, yy, 0.0, GEOM)
        assert out.shape == xx.shape


class TestQuadrature:
    @pytest.mark.parametrize("label", list(ModeLabel))
    @pytest.mark.parametrize("z_factor", [0.0, 1.0, 2.0])
    def test_all_modes_unit_norm(self, label, z_factor):
        norm = mode_norm_quadrature(label, z_factor * GEOM.z_R, GEOM)
        assert abs(norm - 1.0) < 1e-6

    def test_lg_cross_overlap_vanishes(self):
        ov = mode_overlap_quadrature(ModeLabel.LG_PLUS, ModeLabel.LG_MINUS, 0.0, GEOM)
        assert abs(ov) < 1e-6

    def test_extent_too_small_rejected(self):
        with pytest.raises(InsufficientResolutionError):
            mode_norm_quadrature(ModeLabel.LG_PLUS, 0.0, GEOM, extent=GEOM.beam_width(0.0))

    def test_grid_too_coarse_rejected(self):
        with pytest.raises(InsufficientResolutionError):
            mode_norm_quadrature(ModeLabel.LG_PLUS, 0.0, GEOM, points=64)
