"""Temporal kernels, motifs, and spectral richness of linear reservoirs."""

from .coupling import (
    CYCLE_PERMUTATION,
    E_BITS,
    GAUSSIAN,
    INPUT_KINDS,
    PI_BITS,
    RADEMACHER,
    RANDOM_IID,
    RESERVOIR_REGIMES,
    SYMMETRIC_WIGNER,
    UNIFORM,
    InputCouplingSpec,
    ReservoirSpec,
    Seed,
    generate_input,
    generate_reservoir,
    irrational_bits,
    mix_seed,
)
from .errors import ContractViolation, ConvergenceError, PsdViolationError
from .motifs import (
    MotifComparison,
    MotifPrediction,
    MotifSet,
    compare_motifs,
    extract_motifs,
    predict_cycle,
    predict_cycle_periodic,
    predict_random,
    predict_symmetric,
    represent,
)
from .numerics import (
    EigenDecomposition,
    dft,
    largest_singular_value,
    numerical_rank,
    sym_eig,
)
from .richness import (
    CoefficientCloud,
    GridSpec,
    GridSummary,
    RichnessReport,
    SweepConfig,
    coefficient_cloud,
    default_nu_grid,
    grid_summary,
    relative_area,
    sweep,
    trial_count,
    weighted_relative_area,
)
from .temporal_kernel import (
    BoundParams,
    MetricTensor,
    ReadoutModel,
    TensorSource,
    TimeSeries,
    build_metric_tensor,
    feature_map,
    initial_state_radius,
    kernel_error_bounds,
    kernel_eval,
    kernel_poly,
    minimal_state_scale,
    readout_eval,
    simulate_state,
)
from .verify import (
    PropertyResult,
    run_all,
    run_initial_state_error_containment,
    run_kernel_state_equivalence,
    run_spectrum_properties,
)

__version__ = "0.1.0"

__all__ = [
    "BoundParams",
    "CoefficientCloud",
    "ContractViolation",
    "ConvergenceError",
    "CYCLE_PERMUTATION",
    "E_BITS",
    "EigenDecomposition",
    "GAUSSIAN",
    "GridSpec",
    "GridSummary",
    "INPUT_KINDS",
    "InputCouplingSpec",
    "MetricTensor",
    "MotifComparison",
    "MotifPrediction",
    "MotifSet",
    "PI_BITS",
    "PropertyResult",
    "PsdViolationError",
    "RADEMACHER",
    "RANDOM_IID",
    "RESERVOIR_REGIMES",
    "ReadoutModel",
    "ReservoirSpec",
    "RichnessReport",
    "SYMMETRIC_WIGNER",
    "Seed",
    "SweepConfig",
    "TensorSource",
    "TimeSeries",
    "UNIFORM",
    "build_metric_tensor",
    "coefficient_cloud",
    "compare_motifs",
    "default_nu_grid",
    "dft",
    "extract_motifs",
    "feature_map",
    "generate_input",
    "generate_reservoir",
    "grid_summary",
    "initial_state_radius",
    "irrational_bits",
    "kernel_error_bounds",
    "kernel_eval",
    "kernel_poly",
    "largest_singular_value",
    "minimal_state_scale",
    "mix_seed",
    "numerical_rank",
    "predict_cycle",
    "predict_cycle_periodic",
    "predict_random",
    "predict_symmetric",
    "readout_eval",
    "relative_area",
    "represent",
    "run_all",
    "run_initial_state_error_containment",
    "run_kernel_state_equivalence",
    "run_spectrum_properties",
    "simulate_state",
    "sweep",
    "sym_eig",
    "trial_count",
    "weighted_relative_area",
]
