"""Simulation laboratory for rescaled clock processes of random hopping dynamics.

The package simulates a nearest-neighbour random walk on the hypercube whose
waiting times come from a Gaussian random field, aggregates the resulting
clock process into blocks, estimates the convergence conditions that drive
its heavy-tailed limit, samples the limiting pure-jump process directly, and
compares two-time correlation functions against the arcsine law.
"""

__version__ = "0.1.0"

from .errors import (
    BudgetError,
    CapabilityError,
    ClockprocError,
    DegenerateScaleError,
    DimensionMismatchError,
    HorizonError,
    ParameterValidationError,
    SegmentLengthError,
)
from .seeding import ReplicaStreams, StreamFamily, keyed_generator, resolve_seeds
from .environment import (
    DEFAULT_ZETA_TABLE,
    CouplingTensor,
    Environment,
    ModelParameters,
    SpinConfig,
    ZETA_LIMIT,
    block_length,
    hamiltonian,
    log_tau,
    overlap,
    read_coupling_file,
    tau,
    validate_parameters,
    write_coupling_file,
    zeta,
)
from .chain import (
    ClockPath,
    MixingReport,
    TrajectorySegment,
    apply_srw_kernel,
    blocked_clock,
    exact_step_distribution,
    extend_segment,
    mixing_check,
    process_at_time,
    simulate_segment,
    srw_step,
)
from .parallel import ordered_map
from .subordinator import (
    KSResult,
    PowerLawLevyMeasure,
    SubordinatorPath,
    arcsine_cdf,
    crossing_probability,
    crossing_probability_batch,
    extend_path,
    ks_statistic,
    sample_path,
    sample_totals,
    truncated_laplace_exponent,
    write_path_csv,
)
from .conditions import (
    BlockLaplaceEstimate,
    ConcentrationReport,
    ConditionReport,
    IntensityEstimate,
    InitialTermEstimate,
    LaplaceIntensityEstimate,
    SquaredTailEstimate,
    TailEstimate,
    TruncatedMeanEstimate,
    build_condition_report,
    concentration_diagnostic,
    conditional_block_laplace,
    degenerate_block_laplace,
    degenerate_block_tail,
    degenerate_initial_term,
    estimate_block_laplace,
    estimate_block_tail,
    estimate_block_tail_grid,
    estimate_initial_term,
    estimate_intensity,
    estimate_intensity_laplace,
    estimate_squared_tail,
    estimate_squared_tail_grid,
    estimate_step_averaged_tail,
    estimate_truncated_mean,
    truncated_mean_asymptotic,
    truncated_mean_quadrature,
)
from .aging import (
    AgingCurve,
    TrapReport,
    correlation_indicator,
    estimate_aging_curve,
    trap_localization_diagnostic,
)
from .config import DEFAULT_MASTER_SEED, ExperimentConfig, default_ts_grid

__all__ = [
    "__version__",
    # errors
    "ClockprocError",
    "DimensionMismatchError",
    "ParameterValidationError",
    "CapabilityError",
    "SegmentLengthError",
    "HorizonError",
    "DegenerateScaleError",
    "BudgetError",
    # seeding
    "resolve_seeds",
    "keyed_generator",
    "StreamFamily",
    "ReplicaStreams",
    # environment
    "SpinConfig",
    "CouplingTensor",
    "ModelParameters",
    "Environment",
    "zeta",
    "validate_parameters",
    "block_length",
    "overlap",
    "hamiltonian",
    "tau",
    "log_tau",
    "write_coupling_file",
    "read_coupling_file",
    "ZETA_LIMIT",
    "DEFAULT_ZETA_TABLE",
    # chain
    "TrajectorySegment",
    "ClockPath",
    "MixingReport",
    "srw_step",
    "simulate_segment",
    "extend_segment",
    "blocked_clock",
    "process_at_time",
    "exact_step_distribution",
    "apply_srw_kernel",
    "mixing_check",
    # parallel
    "ordered_map",
    # subordinator
    "PowerLawLevyMeasure",
    "SubordinatorPath",
    "KSResult",
    "sample_path",
    "extend_path",
    "write_path_csv",
    "arcsine_cdf",
    "crossing_probability",
    "crossing_probability_batch",
    "sample_totals",
    "truncated_laplace_exponent",
    "ks_statistic",
    # conditions
    "TailEstimate",
    "IntensityEstimate",
    "SquaredTailEstimate",
    "BlockLaplaceEstimate",
    "LaplaceIntensityEstimate",
    "InitialTermEstimate",
    "TruncatedMeanEstimate",
    "ConcentrationReport",
    "ConditionReport",
    "estimate_block_tail",
    "estimate_block_tail_grid",
    "estimate_step_averaged_tail",
    "estimate_intensity",
    "estimate_squared_tail",
    "estimate_squared_tail_grid",
    "conditional_block_laplace",
    "estimate_block_laplace",
    "estimate_intensity_laplace",
    "estimate_initial_term",
    "estimate_truncated_mean",
    "truncated_mean_quadrature",
    "truncated_mean_asymptotic",
    "degenerate_block_tail",
    "degenerate_block_laplace",
    "degenerate_initial_term",
    "concentration_diagnostic",
    "build_condition_report",
    # aging
    "correlation_indicator",
    "AgingCurve",
    "estimate_aging_curve",
    "TrapReport",
    "trap_localization_diagnostic",
    # config
    "DEFAULT_MASTER_SEED",
    "ExperimentConfig",
    "default_ts_grid",
]
