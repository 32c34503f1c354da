"""Periodic discrete-time quantum walks on a line.

Band structure, eigenstate and spectral magnetization, generalized parity
symmetry, real-space dynamics and correlation spectroscopy.
"""

from .bands import (
    EDGE_EPS,
    IsoFrequencySet,
    IsoFrequencySolver,
    Spinor,
    dispersion,
    eigenvector,
    iso_frequency_set,
    omega_plus,
    sample_bands,
)
from .bloch import BlochOperator, closed_form_u11, closed_form_u12, period_operator, single_step_operator
from .dynamics import (
    LatticeState,
    build_uniform_weight_state,
    correlation,
    correlation_spectrum,
    evolve,
    grid_spectral_magnetization,
)
from .errors import DTQWError
from .magnetization import (
    SpectralSample,
    eigenstate_magnetization,
    monochromatic_magnetization,
    spectral_magnetization,
    spectral_magnetization_curve,
    total_magnetization,
)
from .readout import TransmissionModel, extract_correlator_from_dip, transmission_curve
from .symmetry import (
    SymmetryWitness,
    analytic_symmetries,
    check_generalized_parity,
    magnetization_antisymmetry_check,
    search_symmetry,
)
from .walk import CoinParams, WalkSpec, canonical_phase_reduction, m3_notation, validate_walk_spec

__version__ = "0.1.0"

__all__ = [
    "EDGE_EPS",
    "BlochOperator",
    "CoinParams",
    "DTQWError",
    "IsoFrequencySet",
    "IsoFrequencySolver",
    "LatticeState",
    "SpectralSample",
    "Spinor",
    "SymmetryWitness",
    "TransmissionModel",
    "WalkSpec",
    "analytic_symmetries",
    "build_uniform_weight_state",
    "canonical_phase_reduction",
    "check_generalized_parity",
    "closed_form_u11",
    "closed_form_u12",
    "correlation",
    "correlation_spectrum",
    "dispersion",
    "eigenstate_magnetization",
    "eigenvector",
    "evolve",
    "extract_correlator_from_dip",
    "grid_spectral_magnetization",
    "iso_frequency_set",
    "m3_notation",
    "magnetization_antisymmetry_check",
    "monochromatic_magnetization",
    "omega_plus",
    "period_operator",
    "sample_bands",
    "search_symmetry",
    "single_step_operator",
    "spectral_magnetization",
    "spectral_magnetization_curve",
    "total_magnetization",
    "transmission_curve",
    "validate_walk_spec",
]
