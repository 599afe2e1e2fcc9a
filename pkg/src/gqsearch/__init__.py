"""Statevector simulation of search with arbitrary diffusion operators.

The package splits into five layers: ``linalg`` (dense kernels and the
eigensolver), ``spectra`` (diffusion eigenspectra, moments, instance
generators), ``search`` (the basic iteration and its predicted rotating
pair), ``pea`` (the phase-estimation boosted diffusion on the joint space),
and ``harness`` (configs, experiments, reports) with the ``gqsearch``
console script on top.
"""

from .linalg import (
    DENSE_CAP,
    DenseCapError,
    DimensionError,
    EigenSystem,
    EigensolverError,
    apply_unitary,
    basis_state,
    haar_random_unitary,
    round_half_up,
    tensor_product,
    unitarity_defect,
    unitary_eigensystem,
    wrap_phase,
)
from .spectra import (
    EigenSpectrum,
    ResonanceError,
    SearchInstance,
    SpectrumValidationError,
    b_factor_direct,
    build_diffusion,
    grover_spectrum,
    load_spectrum,
    moments,
    naive_power_b,
    resonant_spectrum,
    save_spectrum,
    scaling_family,
    symmetric_spectrum,
)
from .search import (
    IterationRecord,
    PredictedSpectrum,
    RelevantPairError,
    RunReport,
    predict_spectrum,
    run_iterations,
    save_run_report,
    search_operator,
    selective_phase,
    verify_relevant_pair,
)
from .pea import (
    BoostedOperator,
    BPrimeBreakdown,
    JointState,
    b_prime,
    boosted_diffusion,
    boosted_lambda1,
    boosted_search_run,
    c_operator,
    controlled_oracle,
    controlled_powers,
    default_ancilla_count,
    dense_b_prime_check,
    dense_boosted_matrix,
    pea_adjoint,
    pea_amplitude,
    pea_operator,
    qft,
    save_boosted_report,
    walsh_hadamard,
)
from .harness import (
    ConfigError,
    ExperimentConfig,
    ReportRow,
    emit_report,
    load_config,
    load_sweep_configs,
    parse_report_csv,
    run_experiment,
    run_validation,
)

__version__ = "0.1.0"

__all__ = [
    "DENSE_CAP",
    "DenseCapError",
    "DimensionError",
    "EigenSystem",
    "EigensolverError",
    "apply_unitary",
    "basis_state",
    "haar_random_unitary",
    "round_half_up",
    "tensor_product",
    "unitarity_defect",
    "unitary_eigensystem",
    "wrap_phase",
    "EigenSpectrum",
    "ResonanceError",
    "SearchInstance",
    "SpectrumValidationError",
    "b_factor_direct",
    "build_diffusion",
    "grover_spectrum",
    "load_spectrum",
    "moments",
    "naive_power_b",
    "resonant_spectrum",
    "save_spectrum",
    "scaling_family",
    "symmetric_spectrum",
    "IterationRecord",
    "PredictedSpectrum",
    "RelevantPairError",
    "RunReport",
    "predict_spectrum",
    "run_iterations",
    "save_run_report",
    "search_operator",
    "selective_phase",
    "verify_relevant_pair",
    "BoostedOperator",
    "BPrimeBreakdown",
    "JointState",
    "b_prime",
    "boosted_diffusion",
    "boosted_lambda1",
    "boosted_search_run",
    "c_operator",
    "controlled_oracle",
    "controlled_powers",
    "default_ancilla_count",
    "dense_b_prime_check",
    "dense_boosted_matrix",
    "pea_adjoint",
    "pea_amplitude",
    "pea_operator",
    "qft",
    "save_boosted_report",
    "walsh_hadamard",
    "ConfigError",
    "ExperimentConfig",
    "ReportRow",
    "emit_report",
    "load_config",
    "load_sweep_configs",
    "parse_report_csv",
    "run_experiment",
    "run_validation",
    "__version__",
]
