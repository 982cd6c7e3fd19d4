"""Pseudo-density matrices, causality monotones and non-Markovianity of qubit channels."""
from .channels import (
    ADParams,
    ChannelFamily,
    GADParams,
    KrausChannel,
    NotCPTPError,
    ad_family,
    ad_roots,
    amplitude_damping,
    apply,
    choi,
    decay_rate_ad,
    gad_family,
    generalized_amplitude_damping,
    identity_channel,
    identity_family,
    intermediate_map_witness,
    jamiolkowski,
    random_channel,
    tabulated_family,
    transfer_matrix,
    unitary_channel,
    unitary_family,
)
from .linalg import (
    NotHermitianError,
    anticommutator,
    hermitian_eigenvalues,
    kron,
    partial_trace,
    partial_transpose,
    trace_norm,
)
from .pdm import (
    PseudoDensityMatrix,
    QubitState,
    causality_F,
    choi_negativity,
    f_cm,
    is_causal,
    pdm_from_correlators,
    pdm_k_point,
    pdm_two_point,
    random_state,
)

__version__ = "0.1.0"
from .measures import (
    Curve,
    MeasureReport,
    TimeGrid,
    blp_measure,
    decay_rate_curve,
    f_curve,
    hcla_measure,
    nm_measure,
    positive_slope_integral,
    slope,
    total_variation_form,
    trace_distance_curve,
)
