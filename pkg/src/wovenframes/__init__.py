"""Woven frames in finite dimensions: bounds, duals, exhaustive weaving checks and certificates."""
from .core import (
    DEFAULT_TOL,
    Frame,
    FrameBounds,
    FrameClass,
    analyze,
    classify,
    frame_from_synthesis,
    frame_operator,
    make_frame,
    operator_views,
    optimal_bounds,
    synthesize,
)
from .duality import (
    BesselSequence,
    DualFamily,
    alternate_dual_family,
    approximate_dual_defect,
    approximate_dual_family,
    bessel_sequence,
    canonical_dual,
    excess_and_kernel,
    is_dual,
    null_bessel,
    riesz_decompose,
)
from .errors import *  # noqa: F401,F403
from .fileformat import parse_frame_file, parse_operator_file, serialize_frame, serialize_operator
from .generators import harmonic_frame, leveled_example, random_frame, random_riesz_basis
from .weaving import (
    Assignment,
    SubspaceDistance,
    WovenReport,
    min_partition_distance,
    subspace_distance,
    weakly_woven,
    weave,
    woven_oracle,
)

__version__ = "0.1.0"
