"""Discrete open quantum dynamics on a desk scale.

Two models built from the same dephasing coupling: a qubit under alternating
local-unitary control and dephasing, and a one-dimensional open quantum walk
with coin dephasing.  Trace-distance trajectories witness memory effects; all
closed forms ship with independent brute-force oracles.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DomainError,
    NumericError,
    ResourceLimitError,
    UnsupportedCaseError,
)
from .harmonic import (
    TrigMatrixSeries,
    approximation_error,
    catalan,
    catalan_coeffs,
    channel_distance,
    integrate_series_against_spectrum,
    quadrature_map,
    series_from_transfer,
    series_power,
    strong_limit_closed_form,
    strong_limit_map,
)
from .nonmarkov import (
    NMReport,
    TraceDistanceSeries,
    increments,
    nm_measure,
    nm_qubit,
    nm_walk,
    orthogonal_pair_scan,
    qubit_pair_runner,
    walk_pair_runner,
)
from .openwalk import (
    DephasingFilter,
    WalkDensity,
    dilation_oracle,
    discretize_spectrum,
    hermitian_eigenvalues,
    open_walk_evolve,
    strong_dephasing_blocks,
    trace_distance_walk,
)
from .qubit import (
    bloch_transfer_matrix,
    coin_operator,
    evolve_qubit,
    pure_dephasing_map,
    special_map_eta0,
    special_map_eta1,
    trace_distance_qubit,
)
from .spectra import (
    DephasingConfig,
    SpectrumParams,
    decoherence_by_quadrature,
    decoherence_function,
    flatness_factor,
    spectral_density,
    theta3,
)
from .walk import (
    WalkAmplitudes,
    WalkState,
    dispersion_nu,
    position_distribution,
    walk_amplitudes_integral,
    walk_evolve,
    walk_step,
)

__all__ = [
    "__version__",
    "ConfigError", "DomainError", "NumericError", "ResourceLimitError",
    "UnsupportedCaseError",
    "SpectrumParams", "DephasingConfig", "spectral_density",
    "decoherence_function", "decoherence_by_quadrature", "theta3",
    "flatness_factor",
    "coin_operator", "pure_dephasing_map", "bloch_transfer_matrix",
    "evolve_qubit", "special_map_eta0", "special_map_eta1",
    "trace_distance_qubit",
    "TrigMatrixSeries", "series_from_transfer", "series_power",
    "integrate_series_against_spectrum", "quadrature_map",
    "strong_limit_map", "strong_limit_closed_form", "catalan",
    "catalan_coeffs", "channel_distance", "approximation_error",
    "WalkState", "WalkAmplitudes", "walk_step", "walk_evolve",
    "dispersion_nu", "walk_amplitudes_integral", "position_distribution",
    "WalkDensity", "DephasingFilter", "open_walk_evolve", "dilation_oracle",
    "discretize_spectrum", "strong_dephasing_blocks", "hermitian_eigenvalues",
    "trace_distance_walk",
    "TraceDistanceSeries", "NMReport", "increments", "nm_measure",
    "nm_qubit", "nm_walk", "orthogonal_pair_scan", "qubit_pair_runner",
    "walk_pair_runner",
]
