"""Blind identification of block structure from diffusion snapshots.

Workflow: build or load a graph model (`model`), push i.i.d. initial
conditions through a normalized-adjacency filter (`dynamics`), recover the
hidden partition from the snapshot covariance spectrum (`spectral`,
`recovery`), estimate affinity parameters for the two-group case
(`estimation`), and compare against the closed-form guarantees (`bounds`).
`experiments` and the `blindnet` CLI wrap the whole loop in reproducible
sweeps.
"""

from .bounds import (
    bound_B,
    bound_M,
    bound_effective_rank,
    bound_eta,
    bound_misclassification,
)
from .dynamics import (
    FilterSpec,
    InitDistribution,
    SnapshotSet,
    apply_filter,
    filter_operator_norm,
    normalized_adjacency,
    simulate_snapshots,
)
from .estimation import (
    EstimateResult,
    estimate_a_eigenvalue,
    estimate_a_partition,
    estimate_affinity_general,
    relative_error,
)
from .model import (
    ConcentrationCheck,
    ExpectedMatrices,
    Graph,
    PlantedPartitionParams,
    SbmModel,
    build_planted,
    expected_degrees,
    expected_matrices,
    expected_spectral_embedding,
    in_concentration_class,
    normalized_affinity,
    normalized_affinity_spectrum,
    params_from_snr,
    permute_graph,
    sample_graph,
    snr_of,
)
from .recovery import (
    MisclassificationReport,
    PartitionResult,
    misclassification_rate,
    overlap_score,
    recover_from_covariance,
    recover_partition,
)
from .spectral import (
    EigenPairs,
    KMeansResult,
    covariance_spectrum,
    effective_rank,
    kmeans,
    procrustes_align,
    psd_power,
    row_normalize,
    sample_covariance,
    symmetric_eig,
)

__version__ = "0.1.0"
