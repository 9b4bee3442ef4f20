"""Encoder diagrams: construction, validity and extraction.

An :class:`EncoderDiagram` is a graph-like diagram without interior spiders,
``k`` input wires and ``n`` output wires.  Reading off its graph gives

    E = L_out . S^beta . CZ_G . sum_x Z^{Gamma^T x} |+^n> <x| . D_in . L_in

where ``Gamma`` is the input/output bi-adjacency, ``G`` the adjacency among
outputs, ``beta`` the output phases, ``D_in`` the input phases and
input-input edges, and ``L_in``/``L_out`` the wire decorations.  ``E`` is an
isometry onto a stabilizer codespace exactly when ``rank(Gamma) == k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import List, Sequence, Tuple

import numpy as np

from .clifford import CliffordCircuit, LocalClifford, conjugate_gate
from .diagram import (GraphLikeDiagram, bend_to_map, compose, evaluate_dense,
                      from_circuit, plug_input)
from .rewrite import simplify
from .symplectic import (InvalidCode, PauliOperator, StabilizerCode, gf2, kernel_basis,
                         pauli_multiply, rank, solve)


class InvalidEncoder(ValueError):
    """The encoder does not satisfy ``rank(Gamma) == k < n``."""


@dataclass
class GraphCode:
    """A graph ``G`` on ``n`` qubits with a ``k x n`` codeword basis ``gamma``."""

    G: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        g = gf2(self.G)
        n = g.shape[0]
        if g.shape != (n, n) or np.any(g != g.T) or np.any(np.diag(g)):
            raise ValueError("G must be a symmetric 0/1 matrix with zero diagonal")
        gamma = np.asarray(self.gamma)
        gamma = np.zeros((0, n), np.uint8) if gamma.size == 0 else gf2(gamma)
        if gamma.shape[1] != n:
            raise ValueError(f"gamma has {gamma.shape[1]} columns for {n} qubits")
        if rank(gamma) != gamma.shape[0]:
            raise InvalidEncoder("codeword basis rows are linearly dependent")
        self.G, self.gamma = g, gamma

    @property
    def n(self) -> int:
        return self.G.shape[0]

    @property
    def k(self) -> int:
        return self.gamma.shape[0]

    def to_dict(self) -> dict:
        return {"G": self.G.tolist(), "gamma": self.gamma.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "GraphCode":
        n = len(d["G"])
        gamma = np.asarray(d.get("gamma", []), dtype=np.uint8).reshape(-1, n)
        return cls(np.asarray(d["G"]), gamma)


class EncoderDiagram:
    """A graph-like diagram with no interior spiders.

    The matrices below are views recomputed from the diagram on access.
    Arity is not checked here; :func:`validate` tells whether the diagram
    is a valid encoder.
    """

    def __init__(self, diagram: GraphLikeDiagram):
        diagram.validate()
        if diagram.num_interior():
            raise ValueError(f"encoder has {diagram.num_interior()} interior spiders; "
                             "simplify it first")
        self.diagram = diagram

    @classmethod
    def from_diagram(cls, diagram: GraphLikeDiagram, strategy=None) -> "EncoderDiagram":
        return cls(simplify(diagram, strategy) if diagram.num_interior() else diagram)

    @property
    def k(self) -> int:
        return len(self.diagram.inputs)

    @property
    def n(self) -> int:
        return len(self.diagram.outputs)

    @property
    def input_vertices(self) -> List[int]:
        return [w.vertex for w in self.diagram.inputs]

    @property
    def output_vertices(self) -> List[int]:
        return [w.vertex for w in self.diagram.outputs]

    def _biadjacency(self, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
        m = np.zeros((len(rows), len(cols)), dtype=np.uint8)
        for i, u in enumerate(rows):
            for j, v in enumerate(cols):
                m[i, j] = self.diagram.has_edge(u, v) if u != v else 0
        return m

    @property
    def gamma(self) -> np.ndarray:
        return self._biadjacency(self.input_vertices, self.output_vertices)

    @property
    def G(self) -> np.ndarray:
        return self._biadjacency(self.output_vertices, self.output_vertices)

    @property
    def input_graph(self) -> np.ndarray:
        return self._biadjacency(self.input_vertices, self.input_vertices)

    @property
    def input_phases(self) -> List[int]:
        return [self.diagram.phases[v] for v in self.input_vertices]

    @property
    def output_phases(self) -> List[int]:
        return [self.diagram.phases[v] for v in self.output_vertices]

    @property
    def input_cliffords(self) -> List[LocalClifford]:
        return [w.clifford for w in self.diagram.inputs]

    @property
    def output_cliffords(self) -> List[LocalClifford]:
        return [w.clifford for w in self.diagram.outputs]

    def is_standard_form(self) -> bool:
        d = self.diagram
        return (not np.any(self.input_graph)
                and all(p == 0 for p in d.phases.values())
                and all(w.clifford.is_identity() for w in d.inputs + d.outputs))

    def standard_form(self) -> GraphCode:
        """The graph code obtained by dropping phases, decorations and input edges.

        It differs from this encoder by a basis change on the inputs and
        local Cliffords on the outputs, so it has the same parameters.
        """
        return GraphCode(self.G, self.gamma)

    def dense(self) -> np.ndarray:
        return evaluate_dense(self.diagram)

    def copy(self) -> "EncoderDiagram":
        return EncoderDiagram(self.diagram.copy())

    def to_json(self) -> str:
        return self.diagram.to_json()

    @classmethod
    def from_json(cls, text: str) -> "EncoderDiagram":
        return cls.from_diagram(GraphLikeDiagram.from_json(text))

    def __repr__(self) -> str:
        return f"<EncoderDiagram k={self.k} n={self.n} edges={self.diagram.num_edges()}>"


# --------------------------------------------------------------------------
# Construction


def encoder_from_graph_code(gc: GraphCode) -> EncoderDiagram:
    """Standard-form encoder ``|x> -> Z^{Gamma^T x}|G>``."""
    d = GraphLikeDiagram()
    ins = [d.add_vertex(0) for _ in range(gc.k)]
    outs = [d.add_vertex(0) for _ in range(gc.n)]
    for i, j in zip(*np.nonzero(gc.gamma)):
        d.add_edge(ins[i], outs[j])
    for i, j in zip(*np.nonzero(np.triu(gc.G, 1))):
        d.add_edge(outs[i], outs[j])
    for v in ins:
        d.add_input(v)
    for v in outs:
        d.add_output(v)
    return EncoderDiagram(d)


def _row_add(rows: List[PauliOperator], src: int, dst: int) -> None:
    rows[dst] = pauli_multiply(rows[src], rows[dst])


def _apply(rows: List[PauliOperator], gate: Tuple) -> List[PauliOperator]:
    return [conjugate_gate(p, gate) for p in rows]


def state_to_graph(generators: Sequence[PauliOperator]) -> Tuple[np.ndarray, List[LocalClifford]]:
    """Graph ``A`` and per-qubit Cliffords ``C_j`` with ``|psi> ~ (x)C_j |A>``.

    ``generators`` are ``N`` independent commuting Hermitian Paulis on ``N``
    qubits fixing ``|psi>``.  Hadamards go on the qubits that are not pivots
    of the X block, then ``S``/``S^dagger`` clear the diagonal and ``Z``
    fixes the signs.
    """
    rows = list(generators)
    n = len(rows)
    if n == 0:
        return np.zeros((0, 0), np.uint8), []
    if any(p.n != n for p in rows):
        raise InvalidCode("need as many generators as qubits")
    # Row-reduce the X block, keeping exact phases.
    pivots = _reduce_rows(rows, lambda p: p.x)
    zero_x = [r for r in range(len(pivots), n)]
    free = [q for q in range(n) if q not in pivots]
    if len(free) != len(zero_x):
        raise InvalidCode("generators are not independent")
    hadamard = np.zeros(n, dtype=bool)
    for q in free:
        rows = _apply(rows, ("H", q))
        hadamard[q] = True
    pivots = _reduce_rows(rows, lambda p: p.x)
    if pivots != list(range(n)):
        raise InvalidCode("generators do not define a unique state")
    # Now rows[v] = +-X_v Z^{theta_v} (up to the diagonal).
    s_gate = [None] * n
    for v in range(n):
        if rows[v].z[v]:
            s_gate[v] = "Sdg" if rows[v].sign == 1 else "S"
            rows = _apply(rows, (s_gate[v], v))
    z_fix = np.zeros(n, dtype=bool)
    for v in range(n):
        if rows[v].phase == 2:
            rows = _apply(rows, ("Z", v))
            z_fix[v] = True
    theta = np.array([r.z for r in rows], dtype=np.uint8)
    if np.any(theta != theta.T) or any(r.phase for r in rows):
        raise InvalidCode("generators do not commute")
    inverse_s = {"S": "Sdg", "Sdg": "S", None: ""}
    cliffords = [LocalClifford.from_word(("Z" if z_fix[v] else "") + inverse_s[s_gate[v]]
                                         + ("H" if hadamard[v] else ""))
                 for v in range(n)]
    return theta, cliffords


def _reduce_rows(rows: List[PauliOperator], part) -> List[int]:
    n = len(rows)
    width = rows[0].n
    pivots = []
    r = 0
    for c in range(width):
        hit = next((i for i in range(r, n) if part(rows[i])[c]), None)
        if hit is None:
            continue
        rows[r], rows[hit] = rows[hit], rows[r]
        for i in range(n):
            if i != r and part(rows[i])[c]:
                _row_add(rows, r, i)
        pivots.append(c)
        r += 1
    return pivots


def graph_state_diagram(theta: np.ndarray, cliffords: Sequence[LocalClifford]) -> GraphLikeDiagram:
    d = GraphLikeDiagram()
    vs = [d.add_vertex(0) for _ in range(len(theta))]
    for i, j in zip(*np.nonzero(np.triu(theta, 1))):
        d.add_edge(vs[i], vs[j])
    for v, c in zip(vs, cliffords):
        d.add_output(v, c)
    return d


def encoder_from_stabilizer(code: StabilizerCode) -> EncoderDiagram:
    """Encoder ``|x> -> |x_L>`` for a stabilizer code with chosen logicals.

    The bent state ``sum_x |x>|x_L>`` is fixed by ``I (x) g`` for every
    stabilizer ``g`` and by ``X_j (x) Xbar_j`` and ``Z_j (x) Zbar_j``; it is
    brought to graph form and the first ``k`` wires are bent back to inputs.
    """
    code.validate()
    k = code.k
    pad = PauliOperator.identity(k)
    gens = [pad.tensor(g) for g in code.stabilizers]
    for j in range(k):
        gens.append(PauliOperator.single(k, j, "X").tensor(code.logical_x[j]))
        gens.append(PauliOperator.single(k, j, "Z").tensor(code.logical_z[j]))
    theta, cliffords = state_to_graph(gens)
    return EncoderDiagram(bend_to_map(graph_state_diagram(theta, cliffords), k))


def encoder_from_circuit(circuit: CliffordCircuit, data_qubits: Sequence[int],
                         strategy=None) -> EncoderDiagram:
    """Encoder of a circuit whose non-data qubits start in ``|0>``."""
    d = from_circuit(circuit)
    ancillas = [q for q in range(circuit.n) if q not in set(data_qubits)]
    for q in sorted(ancillas, reverse=True):
        plug_input(d, q, "0")
    # the surviving inputs are in ascending qubit order; put them in data order
    rank_of = {q: r for r, q in enumerate(sorted(data_qubits))}
    d.inputs = [d.inputs[rank_of[q]] for q in data_qubits]
    return EncoderDiagram(simplify(d, strategy))


# --------------------------------------------------------------------------
# Validity and row/column operations


def validate(e: EncoderDiagram) -> bool:
    """True iff the encoder is a valid isometry onto a code: ``rank(Gamma) == k < n``."""
    if e.diagram.is_zero or e.n <= e.k:
        return False
    return rank(e.gamma) == e.k if e.k else True


def _cx_rule(e: EncoderDiagram, control: int, target: int) -> EncoderDiagram:
    """Substitute ``z_t <- z_t xor z_c`` in the quadratic form of the diagram."""
    d = e.diagram.copy()
    c, t = control, target
    pt = d.phases[t]
    for m in sorted(d.adj[t]):
        if m != c:
            d.toggle_edge(c, m)
    d.add_phase(c, pt)
    if d.has_edge(c, t):
        d.add_phase(c, 2)
    if pt % 2:
        d.toggle_edge(c, t)
    return EncoderDiagram(d)


def _cx_generic(e: EncoderDiagram, control: int, target: int, side: str) -> EncoderDiagram:
    m = len(e.diagram.inputs) if side == "inputs" else len(e.diagram.outputs)
    cx = from_circuit(CliffordCircuit(m, [("CX", control, target)]))
    d = compose(cx, e.diagram) if side == "inputs" else compose(e.diagram, cx)
    return EncoderDiagram(simplify(d))


def cx_left(e: EncoderDiagram, i: int, j: int) -> EncoderDiagram:
    """Encoder for ``E . CX`` that adds row ``i`` of ``Gamma`` to row ``j``.

    The ``CX`` has control ``j`` and target ``i``.  With undecorated wires
    the update is the direct graph rule; otherwise the gate is composed and
    the result re-simplified.
    """
    _check_pair(i, j, e.k)
    wi, wj = e.diagram.inputs[i], e.diagram.inputs[j]
    if wi.clifford.is_identity() and wj.clifford.is_identity():
        return _cx_rule(e, wj.vertex, wi.vertex)
    return _cx_generic(e, j, i, "inputs")


def cx_right(e: EncoderDiagram, i: int, j: int) -> EncoderDiagram:
    """Encoder for ``CX . E`` that adds column ``i`` of ``Gamma`` to column ``j``.

    The ``CX`` has control ``j`` and target ``i``.
    """
    _check_pair(i, j, e.n)
    wi, wj = e.diagram.outputs[i], e.diagram.outputs[j]
    if wi.clifford.is_identity() and wj.clifford.is_identity():
        return _cx_rule(e, wj.vertex, wi.vertex)
    return _cx_generic(e, j, i, "outputs")


def _check_pair(i: int, j: int, size: int) -> None:
    if not (0 <= i < size and 0 <= j < size):
        raise IndexError(f"wire indices ({i}, {j}) out of range for {size} wires")
    if i == j:
        raise ValueError("CX needs two distinct wires")


# --------------------------------------------------------------------------
# Extraction


def _graph_generator(G: np.ndarray, v: int) -> PauliOperator:
    x = np.zeros(len(G), np.uint8)
    x[v] = 1
    return PauliOperator(x, G[v])


def _graph_product(G: np.ndarray, w: np.ndarray) -> PauliOperator:
    """Exact product of the graph-state generators ``X_v Z_N(v)`` over ``supp(w)``."""
    ops = [_graph_generator(G, v) for v in np.flatnonzero(w)]
    return reduce(pauli_multiply, ops, PauliOperator.identity(len(G)))


def _output_layer(e: EncoderDiagram) -> CliffordCircuit:
    """``S^beta`` followed by the output decorations, as a circuit."""
    c = CliffordCircuit(e.n)
    for q, (p, cl) in enumerate(zip(e.output_phases, e.output_cliffords)):
        c.extend([("S", q)] * p)
        c.extend([(g, q) for g in cl.gates()])
    return c


def _input_layer(e: EncoderDiagram) -> CliffordCircuit:
    """Input decorations, then ``S^alpha``, then input-input ``CZ``s."""
    c = CliffordCircuit(e.k)
    for q, (p, cl) in enumerate(zip(e.input_phases, e.input_cliffords)):
        c.extend([(g, q) for g in cl.gates()])
        c.extend([("S", q)] * p)
    ig = e.input_graph
    for a, b in zip(*np.nonzero(np.triu(ig, 1))):
        c.append("CZ", int(a), int(b))
    return c


def _require_valid(e: EncoderDiagram) -> None:
    if not validate(e):
        raise InvalidEncoder(f"encoder is not valid (k={e.k}, n={e.n}, "
                             f"rank(Gamma)={rank(e.gamma) if e.k else 0})")


class _Extractor:
    def __init__(self, e: EncoderDiagram):
        _require_valid(e)
        self.e = e
        self.gamma = e.gamma
        self.G = e.G
        self.out_layer = _output_layer(e)
        self.in_layer = _input_layer(e)
        self._z_bar = []
        for i in range(e.k):
            unit = np.zeros(e.k, np.uint8)
            unit[i] = 1
            w = solve(self.gamma, unit)
            self._z_bar.append(_graph_product(self.G, w))
        self._x_bar = [PauliOperator(np.zeros(e.n, np.uint8), row) for row in self.gamma]

    def stabilizers(self) -> List[PauliOperator]:
        basis = kernel_basis(self.gamma) if self.e.k else np.eye(self.e.n, dtype=np.uint8)
        return [self.out_layer.conjugate(_graph_product(self.G, w)) for w in basis]

    def encoded(self, pauli: PauliOperator) -> PauliOperator:
        """``Pbar`` with ``E P = Pbar E``, exact including the phase."""
        p = self.in_layer.conjugate(pauli)
        out = PauliOperator.identity(self.e.n).with_phase(p.phase)
        for i in np.flatnonzero(p.x):
            out = pauli_multiply(out, self._x_bar[i])
        for i in np.flatnonzero(p.z):
            out = pauli_multiply(out, self._z_bar[i])
        return self.out_layer.conjugate(out)


def encoded_operator(e: EncoderDiagram, pauli: PauliOperator) -> PauliOperator:
    """Physical Pauli ``Pbar`` with ``E P = Pbar E`` for a ``k``-qubit Pauli ``P``."""
    if pauli.n != e.k:
        raise ValueError(f"operator acts on {pauli.n} qubits, encoder has k={e.k}")
    return _Extractor(e).encoded(pauli)


def extract_code(e: EncoderDiagram) -> StabilizerCode:
    """Stabilizers and logical operators of a valid encoder, with exact signs.

    On the graph part, ``X^w Z^{Gw}`` for ``w`` in the kernel of ``Gamma``
    stabilizes every encoded state, ``Z^{gamma_i}`` flips logical bit ``i``
    and ``X^{w_i} Z^{G w_i}`` with ``Gamma w_i = e_i`` reads it.  Input-side
    gates are pulled through the encoder and output-side gates conjugate
    the result.
    """
    ex = _Extractor(e)
    lx = [ex.encoded(PauliOperator.single(e.k, i, "X")) for i in range(e.k)]
    lz = [ex.encoded(PauliOperator.single(e.k, i, "Z")) for i in range(e.k)]
    code = StabilizerCode(e.n, e.k, ex.stabilizers(), lx, lz)
    code.validate()
    return code


def column_reduction(gamma: np.ndarray) -> List[Tuple[int, int]]:
    """Column additions ``(a, b)`` (add column ``a`` to ``b``) taking ``gamma`` to ``[I | 0]``."""
    g = gf2(gamma).copy()
    k, n = g.shape
    ops: List[Tuple[int, int]] = []

    def add(a: int, b: int) -> None:
        g[:, b] ^= g[:, a]
        ops.append((a, b))

    for i in range(k):
        p = next((c for c in range(i, n) if g[i, c]), None)
        if p is None:
            raise InvalidEncoder("codeword matrix is rank deficient")
        if p != i:
            if g[i, i] == 0:
                add(p, i)
            else:  # swap as three additions
                add(i, p)
                add(p, i)
                add(i, p)
        for c in range(n):
            if c != i and g[i, c]:
                add(i, c)
    assert np.array_equal(g, np.eye(k, n, dtype=np.uint8))
    return ops


def extract_circuit(e: EncoderDiagram) -> Tuple[CliffordCircuit, int]:
    """Encoding circuit on ``n`` qubits and the number of ancillas.

    Qubits ``0..k-1`` carry the data and the remaining ``n - k`` start in
    ``|0>``.  The circuit applies the input-side gates, Hadamards on every
    qubit, the ``CX`` network undoing the column reduction of ``Gamma``,
    the ``CZ`` network of ``G``, the output phases and the output
    decorations.
    """
    _require_valid(e)
    n, k = e.n, e.k
    c = CliffordCircuit(n)
    c.extend(_input_layer(e).gates)
    c.extend([("H", q) for q in range(n)])
    for a, b in reversed(column_reduction(e.gamma) if k else []):
        c.append("CX", b, a)
    for a, b in zip(*np.nonzero(np.triu(e.G, 1))):
        c.append("CZ", int(a), int(b))
    c.extend(_output_layer(e).gates)
    return c, n - k


def apply_basis_change(e: EncoderDiagram, u: CliffordCircuit) -> EncoderDiagram:
    """Encoder for ``E . U`` where ``U`` acts on the ``k`` logical qubits."""
    if u.n != e.k:
        raise ValueError(f"basis change acts on {u.n} qubits, encoder has k={e.k}")
    return EncoderDiagram(simplify(compose(from_circuit(u), e.diagram)))


def encoder_state_stabilizers(e: EncoderDiagram) -> np.ndarray:
    """Check matrix ``[[I_k 0 | 0 Gamma], [0 I_n | Gamma^T G]]`` of the bent state."""
    if not e.is_standard_form():
        raise ValueError("encoder is not in standard form")
    k, n = e.k, e.n
    gamma, g = e.gamma, e.G
    top = np.hstack([np.eye(k, dtype=np.uint8), np.zeros((k, n), np.uint8),
                     np.zeros((k, k), np.uint8), gamma])
    bottom = np.hstack([np.zeros((n, k), np.uint8), np.eye(n, dtype=np.uint8), gamma.T, g])
    return np.vstack([top, bottom]).astype(np.uint8)


def random_graph_code(rng: np.random.Generator, n: int, k: int,
                      edge_prob: float = 0.5) -> GraphCode:
    """Random graph with a random full-rank ``k x n`` codeword basis."""
    upper = np.triu((rng.random((n, n)) < edge_prob).astype(np.uint8), 1)
    while True:
        gamma = rng.integers(0, 2, size=(k, n)).astype(np.uint8)
        if rank(gamma) == k:
            return GraphCode(upper + upper.T, gamma)


__all__ = [
    "EncoderDiagram", "GraphCode", "InvalidEncoder", "apply_basis_change", "column_reduction",
    "cx_left", "cx_right", "encoded_operator", "encoder_from_circuit",
    "encoder_from_graph_code", "encoder_from_stabilizer", "encoder_state_stabilizers",
    "extract_circuit", "extract_code", "graph_state_diagram", "random_graph_code",
    "state_to_graph", "validate",
]
