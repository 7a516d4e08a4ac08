"""vortexbench: first-order vector vortex beams under wave plates and
astigmatic mode converters, SO(3) topological phase classification, and
Mach-Zehnder interferogram synthesis."""

__version__ = "0.1.0"

from .elements import (
    ElementKind,
    OpticalElement,
    apply_sequence,
    converter_matrix,
    half_wave_plate,
    intermediate_states,
    lift,
    mode_converter,
    polarization_filter,
    quarter_wave_plate,
    topological_cycle,
    waveplate,
    waveplate_matrix,
)
from .geometry import BeamGeometry, TransversePoint
from .interference import (
    FringeAnalysis,
    IntensityImage,
    InterferenceConfig,
    closed_form_intensity,
    default_q,
    direct_superposition_intensity,
    envelope_F,
    measure_visibility,
    render,
    singularity_polarity,
)
from .modes import (
    ModeLabel,
    eval_mode,
    eval_mode_grid,
    mode_norm_quadrature,
    mode_overlap_quadrature,
)
from .states import (
    JonesVector,
    SpinOrbitState,
    concurrence,
    field_at,
    overlap,
    prepare_initial,
)
from .topology import (
    GaugeDecomposition,
    HomotopyClass,
    SO3Point,
    Trajectory,
    gauge_decompose,
    point_to_state,
    su2_to_point,
    trace_trajectory,
    verify_phase_consistency,
)

__all__ = [
    "__version__",
    "BeamGeometry",
    "TransversePoint",
    "ModeLabel",
    "eval_mode",
    "eval_mode_grid",
    "mode_norm_quadrature",
    "mode_overlap_quadrature",
    "SpinOrbitState",
    "JonesVector",
    "prepare_initial",
    "concurrence",
    "overlap",
    "field_at",
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
    "SO3Point",
    "GaugeDecomposition",
    "HomotopyClass",
    "Trajectory",
    "gauge_decompose",
    "su2_to_point",
    "point_to_state",
    "trace_trajectory",
    "verify_phase_consistency",
    "InterferenceConfig",
    "IntensityImage",
    "FringeAnalysis",
    "default_q",
    "envelope_F",
    "closed_form_intensity",
    "direct_superposition_intensity",
    "render",
    "measure_visibility",
    "singularity_polarity",
]
