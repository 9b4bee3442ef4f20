"""Dense-oracle checks for encoders and rewrite soundness.

Everything here works on explicit state vectors or matrices, so it is only
usable within the dense budget (about 16 qubits of boundary).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .clifford import CliffordCircuit
from .diagram import (OracleBudgetExceeded, bend_to_state, evaluate_dense, from_circuit,
                      proportional)
from .encoder import (EncoderDiagram, encoded_operator, encoder_from_circuit, extract_circuit,
                      extract_code, validate)
from .rewrite import reduction_violations, simplify
from .symplectic import (PauliOperator, StabilizerCode, in_rowspace, min_weight_logical,
                         pauli_multiply, symplectic_product)

log = logging.getLogger(__name__)


def _masks(p: PauliOperator) -> Tuple[int, int]:
    n = p.n
    xm = sum(1 << (n - 1 - q) for q in np.flatnonzero(p.x))
    zm = sum(1 << (n - 1 - q) for q in np.flatnonzero(p.z))
    return xm, zm


def apply_pauli(p: PauliOperator, v: np.ndarray) -> np.ndarray:
    """``P @ v`` along axis 0 without building the ``2^n x 2^n`` matrix."""
    v = np.asarray(v)
    dim = v.shape[0]
    if dim != 2 ** p.n:
        raise ValueError(f"vector of length {dim} for a {p.n}-qubit operator")
    xm, zm = _masks(p)
    y = np.arange(dim)
    src = y ^ xm
    parity = np.bitwise_count((src & zm).astype(np.uint64)) % 2
    sign = (1j ** p.phase) * (1 - 2 * parity.astype(np.int64))
    return sign.reshape((-1,) + (1,) * (v.ndim - 1)) * v[src]


def fixes(p: PauliOperator, v: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff ``P v == v`` (exactly, including the sign)."""
    scale = max(np.max(np.abs(v)), 1e-300)
    return bool(np.max(np.abs(apply_pauli(p, v) - v)) <= tol * scale)


def bent_state(e: EncoderDiagram) -> np.ndarray:
    """``sum_x |x> E|x>`` as a vector, inputs first."""
    return evaluate_dense(bend_to_state(e.diagram)).reshape(-1)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


def encoded_columns_checks(e: EncoderDiagram, code: StabilizerCode, tol: float = 1e-9) -> List[Check]:
    """Stabilizers fix every encoded column; logicals act as on the inputs."""
    m = e.dense()
    scale = np.max(np.abs(m))
    out = []
    bad = [s.to_label() for s in code.stabilizers if not fixes(s, m, tol)]
    out.append(Check("stabilizers fix encoded states", not bad, ", ".join(bad)))
    for kind, ops in (("X", code.logical_x), ("Z", code.logical_z)):
        bad = []
        for i, lg in enumerate(ops):
            p = PauliOperator.single(e.k, i, kind)
            rhs = apply_pauli(p, m.T).T
            if np.max(np.abs(apply_pauli(lg, m) - rhs)) > tol * scale:
                bad.append(f"{kind}{i}")
        out.append(Check(f"logical {kind} act on encoded states", not bad, ", ".join(bad)))
    return out


def bent_state_checks(e: EncoderDiagram, code: StabilizerCode, tol: float = 1e-9) -> List[Check]:
    """Checks on ``sum_x |x>E|x>``: ``I (x) S`` and ``P^T (x) Pbar`` fix it."""
    psi = bent_state(e)
    k = e.k
    pad = PauliOperator.identity(k)
    bad = [s.to_label() for s in code.stabilizers if not fixes(pad.tensor(s), psi, tol)]
    out = [Check(f"{len(code.stabilizers)} stabilizers fix the bent state", not bad, ", ".join(bad))]
    bad = []
    for kind, ops in (("X", code.logical_x), ("Z", code.logical_z)):
        for i, lg in enumerate(ops):
            # X and Z are symmetric matrices, so P^T = P here
            if not fixes(PauliOperator.single(k, i, kind).tensor(lg), psi, tol):
                bad.append(f"{kind}{i}")
    out.append(Check(f"{2 * k} logicals pair correctly on the bent state", not bad, ", ".join(bad)))
    return out


def circuit_encoder(circuit: CliffordCircuit, k: int) -> EncoderDiagram:
    """Encoder of an extracted circuit: data on qubits ``0..k-1``, ancillas in ``|0>``."""
    return encoder_from_circuit(circuit, list(range(k)))


def circuit_round_trip(e: EncoderDiagram, tol: float = 1e-9) -> Check:
    circuit, ancillas = extract_circuit(e)
    back = circuit_encoder(circuit, e.k)
    ok = proportional(back.dense(), e.dense(), tol)
    return Check("extracted circuit reproduces the encoder", ok,
                 f"{len(circuit)} gates, {ancillas} ancillas")


def verify_encoder(e: EncoderDiagram, tol: float = 1e-9, max_legs: int = 16) -> List[Check]:
    """The oracle suite run by the ``verify`` command."""
    checks: List[Check] = []
    try:
        e.diagram.validate()
        checks.append(Check("graph-like conditions", True))
    except ValueError as err:
        return [Check("graph-like conditions", False, str(err))]
    ok = validate(e)
    checks.append(Check("encoder is valid (rank Gamma = k < n)", ok, f"k={e.k} n={e.n}"))
    if not ok:
        return checks
    code = extract_code(e)
    checks.append(Check("extracted code satisfies stabilizer invariants", True,
                        f"{len(code.stabilizers)} generators"))
    if e.n + e.k > max_legs:
        checks.append(Check("dense checks", True, f"skipped: {e.n + e.k} legs exceed {max_legs}"))
        return checks
    checks += encoded_columns_checks(e, code, tol)
    checks.append(circuit_round_trip(e, tol))
    return checks


def soundness_sweep(count: int, seed: int, max_qubits: int = 5, max_gates: int = 30,
                    tol: float = 1e-9) -> List[Check]:
    """Simplify random circuits and compare against their unitaries."""
    rng = np.random.default_rng(seed)
    failures = []
    residual = []
    for t in range(count):
        n = int(rng.integers(1, max_qubits + 1))
        c = CliffordCircuit.random(n, int(rng.integers(0, max_gates + 1)), rng)
        d = simplify(from_circuit(c))
        if reduction_violations(d):
            residual.append(t)
        if not proportional(evaluate_dense(d), c.unitary(), tol):
            failures.append(t)
    return [
        Check(f"{count} random circuits simplify to no interior spiders", not residual,
              f"instances {residual[:5]}" if residual else ""),
        Check(f"{count} simplified circuits match their unitaries", not failures,
              f"instances {failures[:5]}" if failures else ""),
    ]


# --------------------------------------------------------------------------
# Concatenated logicals


def min_weight_representative(p: PauliOperator, stabilizers: Sequence[PauliOperator],
                              budget: int = 2 ** 16) -> PauliOperator:
    """Lowest-weight element of the coset ``p . <stabilizers>``."""
    if 2 ** len(stabilizers) > budget:
        raise OracleBudgetExceeded("stabilizer group too large to enumerate")
    best = p
    for bits in itertools.product((0, 1), repeat=len(stabilizers)):
        q = p
        for b, s in zip(bits, stabilizers):
            if b:
                q = pauli_multiply(q, s)
        if q.weight < best.weight:
            best = q
    return best


def concatenated_logical(outer: EncoderDiagram, inner: EncoderDiagram,
                         basis: Optional[CliffordCircuit] = None) -> PauliOperator:
    """Tensor-product logical of ``(E_in U)^{(x)m} . E_out``.

    Starts from a minimum-weight logical of the outer code and replaces
    each single-qubit factor ``P_j`` by a minimum-weight inner logical of
    ``U P_j U^dagger``.  Its weight is at most ``d_out * d_in``.
    """
    _, outer_op = min_weight_logical(extract_code(outer))
    inner_code = extract_code(inner)
    blocks = []
    for j in range(outer.n):
        pj = PauliOperator(outer_op.x[j:j + 1], outer_op.z[j:j + 1],
                           int(outer_op.x[j]) * int(outer_op.z[j]))
        if basis is not None:
            pj = basis.conjugate(pj)
        if pj.weight == 0:
            blocks.append(PauliOperator.identity(inner.n))
            continue
        lg = encoded_operator(inner, pj)
        blocks.append(min_weight_representative(lg, inner_code.stabilizers))
    out = blocks[0]
    for b in blocks[1:]:
        out = out.tensor(b)
    return out


def is_nontrivial_logical(p: PauliOperator, code: StabilizerCode) -> bool:
    """Commutes with every stabilizer and is not in the stabilizer row space."""
    if any(symplectic_product(p, s) for s in code.stabilizers):
        return False
    return not in_rowspace(p.vector, code.check_matrix())


__all__ = [
    "Check", "apply_pauli", "bent_state", "bent_state_checks", "circuit_encoder",
    "circuit_round_trip", "concatenated_logical", "encoded_columns_checks", "fixes",
    "is_nontrivial_logical", "min_weight_representative", "soundness_sweep", "verify_encoder",
]
