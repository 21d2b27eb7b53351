"""Separability of generalized Laplacian and diagonally dominant density matrices.

Decides whether a real density matrix on C^p (x) C^q is separable, returning
either an explicit product-state decomposition or a negative eigenpair of the
partial transpose.
"""

from .circulation import CircuitDecomposition, SimpleCircuit, circuit_to_matrix, decompose_circulation
from .classes import (
    ClassReport,
    block_tridiagonal_inference,
    blockwise_line_sum_symmetric,
    classify_membership,
    is_line_sum_symmetric,
    row_sums_match_after_pt,
)
from .engine import (
    ProductDecomposition,
    ProductTerm,
    Verdict,
    VerdictKind,
    Witness,
    circuit_pair_terms,
    classify,
    entanglement_witness,
    separable_decomposition,
    theorem4_terms,
    verify_decomposition,
)
from .graph import (
    Edge,
    WeightedGraph,
    adjacency,
    degree_criterion,
    degrees,
    graph_partial_transpose,
    laplacian_density,
)
from .linalg import SpectralDecomposition, is_psd, jacobi_eigh, reductions
from .tensor import TensorShape, flatten, is_entangled_position, partial_transpose, unflatten

__version__ = "0.1.0"
