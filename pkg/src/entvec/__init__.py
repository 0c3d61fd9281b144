"""Pairwise concurrence and entanglement vectors for few-qubit states."""

from .errors import (
    BadDimension,
    BadPair,
    BadStateFile,
    BadSubsystem,
    DegenerateDenominatorWarning,
    DomainError,
    EntvecError,
    NoConvergence,
    NonUnimodularWeight,
    NotHermitian,
    NotNormalized,
    NotPSD,
)
from .linalg import EigenDecomposition, hermitian_eig, partial_trace, psd_sqrt, tensor_product
from .measures import (
    ClassResult,
    ConcurrenceVector,
    EntanglementVector,
    MeasureReport,
    binary_entropy,
    concurrence_mixed,
    concurrence_pure,
    concurrence_vector,
    entanglement_from_concurrence,
    entanglement_vector,
    generation_matrix,
    measure_all,
    whole_concurrence,
)
from .operators import (
    PauliString,
    WeightedBasis,
    all_pairs,
    bell_product_basis,
    expansion_weights,
    flip_matrix,
    flip_operator,
    ghz_basis,
    spin_flip,
)
from .states import (
    DensityMatrix,
    PureState,
    ValidationReport,
    apply_local_unitaries,
    load_state,
    make_biseparable,
    make_ghz,
    make_product,
    make_w,
    permute_qubits,
    random_mixed,
    random_pure,
    save_state,
    to_density,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "BadDimension",
    "BadPair",
    "BadStateFile",
    "BadSubsystem",
    "ClassResult",
    "ConcurrenceVector",
    "DegenerateDenominatorWarning",
    "DensityMatrix",
    "DomainError",
    "EigenDecomposition",
    "EntanglementVector",
    "EntvecError",
    "MeasureReport",
    "NoConvergence",
    "NonUnimodularWeight",
    "NotHermitian",
    "NotNormalized",
    "NotPSD",
    "PauliString",
    "PureState",
    "ValidationReport",
    "WeightedBasis",
    "all_pairs",
    "apply_local_unitaries",
    "bell_product_basis",
    "binary_entropy",
    "concurrence_mixed",
    "concurrence_pure",
    "concurrence_vector",
    "entanglement_from_concurrence",
    "entanglement_vector",
    "expansion_weights",
    "flip_matrix",
    "flip_operator",
    "generation_matrix",
    "ghz_basis",
    "hermitian_eig",
    "load_state",
    "make_biseparable",
    "make_ghz",
    "make_product",
    "make_w",
    "measure_all",
    "partial_trace",
    "permute_qubits",
    "psd_sqrt",
    "random_mixed",
    "random_pure",
    "save_state",
    "spin_flip",
    "tensor_product",
    "to_density",
    "validate",
    "whole_concurrence",
]
