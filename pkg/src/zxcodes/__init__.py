"""Stabilizer and graph codes as graph-like Clifford ZX-diagrams."""

from .clifford import CliffordCircuit, LocalClifford
from .compose import (ConcatenationPlan, GLCFailure, catalog, concatenate, contract,
                      glc_concatenate, happy_block, self_contract)
from .diagram import (GraphLikeDiagram, bend_to_map, bend_to_state, evaluate_dense,
                      from_circuit, proportional)
from .encoder import (EncoderDiagram, GraphCode, InvalidEncoder, apply_basis_change, cx_left,
                      cx_right, encoder_from_graph_code, encoder_from_stabilizer,
                      encoder_state_stabilizers, extract_circuit, extract_code, validate)
from .rewrite import boundary_pivot, glc, local_complement, pivot, simplify
from .symplectic import (PauliOperator, StabilizerCode, kernel_basis, min_distance,
                         pauli_multiply, rref, symplectic_product)

__version__ = "0.1.0"

__all__ = [
    "apply_basis_change", "bend_to_map", "bend_to_state", "boundary_pivot", "catalog",
    "CliffordCircuit", "concatenate", "ConcatenationPlan", "contract", "cx_left", "cx_right",
    "encoder_from_graph_code", "encoder_from_stabilizer", "encoder_state_stabilizers",
    "EncoderDiagram", "evaluate_dense", "extract_circuit", "extract_code", "from_circuit",
    "glc", "glc_concatenate", "GLCFailure", "GraphCode", "GraphLikeDiagram", "happy_block",
    "InvalidEncoder", "kernel_basis", "local_complement", "LocalClifford", "min_distance",
    "pauli_multiply", "PauliOperator", "pivot", "proportional", "rref", "self_contract",
    "simplify", "StabilizerCode", "symplectic_product", "validate",
]

