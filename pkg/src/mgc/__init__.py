"""Multiscale graph correlation and related dependence tests."""

from .centering import CenteredMatrix, Scheme, center
from .dataio import ResultDocument, SampleSet, load_distance_matrix, load_samples, write_result
from .geometry import (
    DistanceMatrix,
    RankMatrix,
    apply_permutation,
    column_ranks,
    gaussian_kernel_matrix,
    pairwise_distances,
    row_ranks,
)
from .inference import (
    Method,
    MethodSpec,
    PowerEstimate,
    PValue,
    adjust_pvalues_bh,
    estimate_power,
    permutation_test,
    sample_size_for_power,
    statistic,
)
from .localcorr import LocalCorrMap, all_local_corrs, global_corr, local_corr_at_scale
from .mgcstat import MGCConfig, ScaleSelection, mgc_from_distances, mgc_statistic
from .synth import SimulationSpec, sample_dependency, sample_null

__version__ = "0.1.0"
