"""Scaling entropy of finite semimetric measure spaces, window laws of the
graph of ordered pairs, Følner reductions and coinduced actions."""

from .semimetric import (
    EntropyResult,
    RootScale,
    ScalingProfile,
    Semimetric,
    SemimetricSpace,
    average_semimetrics,
    eps_entropy,
    eps_entropy_bounds,
    eps_entropy_exact,
    hamming_cube,
    hamming_semimetric,
    sep_count,
    spn_count,
)
from .partitions import (
    Partition,
    check_lemma_averaging,
    check_lemma_partitions_1,
    check_lemma_partitions_2,
    cut_semimetric,
    shannon_entropy,
)
from .report import InequalityReport
from .amenable import GroupWindow, coset_slices, folner_window, reduce_folner, reduce_window
from .coinduction import (
    CoinducedSystem,
    WeightedFamily,
    coinduced_apply,
    cocycle,
    decompose_average,
    lemma_estimate_bound,
    verify_lemma_estimate,
)
from .formats import FormatError, format_space, parse_space

__version__ = "0.1.0"
