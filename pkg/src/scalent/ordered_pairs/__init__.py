"""The graph of ordered pairs, central measures μ^σ and window laws."""

from .adic import (
    AdicPathPrefix,
    OverflowSignal,
    SigmaSequence,
    VertexHandle,
    adic_power,
    adic_step,
    adic_step_inverse,
    enumerate_level_set,
    in_level_set,
    level_set_size,
    path_mass,
    predicted_scaling,
    sample_vertex,
)
from .bounds import ball_count, ball_mass, mixture_bounds, mixture_entropy
from .windows import (
    RESIDUE_CAP,
    AdicWindowSystem,
    ResidueCapExceeded,
    WindowDistribution,
    averaged_window_space,
    constraint_probability,
    group_labels,
    pattern_law_exact,
    pattern_law_sampled,
    window_distribution_exact,
    window_distribution_k,
    window_distribution_sampled,
)
