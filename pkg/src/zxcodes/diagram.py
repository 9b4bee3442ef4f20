"""Graph-like Clifford ZX-diagrams.

Every vertex is a Z spider whose phase is an integer number of quarter
turns (``phase * pi/2``).  Every edge is a Hadamard edge.  Boundary wires
attach to a single vertex through a plain wire that may carry a
:class:`~zxcodes.clifford.LocalClifford` decoration:

* an input wire applies its decoration to the incoming state before it
  reaches the vertex;
* an output wire applies its decoration to the vertex leg on the way out.

Diagrams denote linear maps up to a non-zero scalar; see :func:`proportional`.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .clifford import CliffordCircuit, LocalClifford

DIAGRAM_FORMAT_VERSION = 1


class GraphLikeError(ValueError):
    """A diagram violates one of the graph-like conditions."""


class OracleBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Wire:
    vertex: int
    clifford: LocalClifford = LocalClifford(0)


def _check_phase(phase) -> int:
    if isinstance(phase, (bool, np.bool_)) or not float(phase).is_integer():
        raise ValueError(f"phase {phase!r} is not a multiple of pi/2")
    return int(phase) % 4


class GraphLikeDiagram:
    def __init__(self):
        self.phases: Dict[int, int] = {}
        self.adj: Dict[int, Set[int]] = {}
        self.inputs: List[Wire] = []
        self.outputs: List[Wire] = []
        # Set when a rewrite isolates a phase-pi spider: the map is zero.
        self.is_zero = False
        self._next_id = 0

    # -- construction -----------------------------------------------------

    def add_vertex(self, phase: int = 0) -> int:
        v = self._next_id
        self._next_id += 1
        self.phases[v] = _check_phase(phase)
        self.adj[v] = set()
        return v

    def remove_vertex(self, v: int) -> None:
        if self.boundary_of(v) is not None:
            raise GraphLikeError(f"vertex {v} is attached to a boundary wire")
        for u in self.adj.pop(v):
            self.adj[u].discard(v)
        del self.phases[v]

    def add_phase(self, v: int, quarter_turns: int) -> None:
        self.phases[v] = (self.phases[v] + _check_phase(quarter_turns)) % 4

    def set_phase(self, v: int, quarter_turns: int) -> None:
        self.phases[v] = _check_phase(quarter_turns)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise GraphLikeError("self-loops are not allowed")
        if v in self.adj[u]:
            raise GraphLikeError(f"parallel edge {u}-{v}")
        self.adj[u].add(v)
        self.adj[v].add(u)

    def remove_edge(self, u: int, v: int) -> None:
        self.adj[u].discard(v)
        self.adj[v].discard(u)

    def toggle_edge(self, u: int, v: int) -> None:
        """Add or remove a Hadamard edge; a parallel pair cancels."""
        if u == v:
            raise GraphLikeError("self-loops are not allowed")
        if v in self.adj[u]:
            self.remove_edge(u, v)
        else:
            self.adj[u].add(v)
            self.adj[v].add(u)

    def add_input(self, v: int, clifford: LocalClifford = LocalClifford(0)) -> int:
        self._check_free(v)
        self.inputs.append(Wire(v, clifford))
        return len(self.inputs) - 1

    def add_output(self, v: int, clifford: LocalClifford = LocalClifford(0)) -> int:
        self._check_free(v)
        self.outputs.append(Wire(v, clifford))
        return len(self.outputs) - 1

    def _check_free(self, v: int) -> None:
        if v not in self.phases:
            raise GraphLikeError(f"unknown vertex {v}")
        if self.boundary_of(v) is not None:
            raise GraphLikeError(f"vertex {v} already carries a boundary wire")

    def set_wire(self, side: str, index: int, wire: Wire) -> None:
        getattr(self, side)[index] = wire

    # -- queries ----------------------------------------------------------

    @property
    def vertices(self) -> List[int]:
        return sorted(self.phases)

    def edges(self) -> List[Tuple[int, int]]:
        return sorted((u, v) for u in self.adj for v in self.adj[u] if u < v)

    def neighbors(self, v: int) -> Set[int]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def boundary_map(self) -> Dict[int, Tuple[str, int]]:
        out = {w.vertex: ("inputs", i) for i, w in enumerate(self.inputs)}
        out.update({w.vertex: ("outputs", i) for i, w in enumerate(self.outputs)})
        return out

    def boundary_of(self, v: int) -> Optional[Tuple[str, int]]:
        for i, w in enumerate(self.inputs):
            if w.vertex == v:
                return ("inputs", i)
        for i, w in enumerate(self.outputs):
            if w.vertex == v:
                return ("outputs", i)
        return None

    def is_boundary(self, v: int) -> bool:
        return self.boundary_of(v) is not None

    def interior(self) -> List[int]:
        b = self.boundary_map()
        return [v for v in self.vertices if v not in b]

    def num_interior(self) -> int:
        return len(self.phases) - len(self.inputs) - len(self.outputs)

    def num_edges(self) -> int:
        return sum(len(s) for s in self.adj.values()) // 2

    def validate(self) -> None:
        """Raise :class:`GraphLikeError` unless the graph-like conditions hold."""
        for v, p in self.phases.items():
            if not isinstance(p, int) or not 0 <= p < 4:
                raise GraphLikeError(f"vertex {v} has a non-Clifford phase {p!r}")
        if set(self.adj) != set(self.phases):
            raise GraphLikeError("adjacency and vertex table disagree")
        for u, nbrs in self.adj.items():
            if u in nbrs:
                raise GraphLikeError(f"self-loop on {u}")
            for v in nbrs:
                if u not in self.adj.get(v, ()):
                    raise GraphLikeError(f"asymmetric edge {u}-{v}")
        seen: Set[int] = set()
        for w in self.inputs + self.outputs:
            if w.vertex not in self.phases:
                raise GraphLikeError(f"wire attached to unknown vertex {w.vertex}")
            if w.vertex in seen:
                raise GraphLikeError(f"vertex {w.vertex} carries two boundary wires")
            seen.add(w.vertex)

    def copy(self) -> "GraphLikeDiagram":
        d = GraphLikeDiagram()
        d.phases = dict(self.phases)
        d.adj = {v: set(n) for v, n in self.adj.items()}
        d.inputs = list(self.inputs)
        d.outputs = list(self.outputs)
        d.is_zero = self.is_zero
        d._next_id = self._next_id
        return d

    def structurally_equal(self, other: "GraphLikeDiagram") -> bool:
        return (self.phases == other.phases and self.edges() == other.edges()
                and self.inputs == other.inputs and self.outputs == other.outputs
                and self.is_zero == other.is_zero)

    def __repr__(self) -> str:
        return (f"<GraphLikeDiagram {len(self.inputs)} in, {len(self.outputs)} out, "
                f"{len(self.phases)} spiders ({self.num_interior()} interior), "
                f"{self.num_edges()} edges>")

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "version": DIAGRAM_FORMAT_VERSION,
            "vertices": [{"id": v, "phase": self.phases[v]} for v in self.vertices],
            "edges": [list(e) for e in self.edges()],
            "inputs": [{"wire": i, "vertex": w.vertex, "clifford": w.clifford.word}
                       for i, w in enumerate(self.inputs)],
            "outputs": [{"wire": i, "vertex": w.vertex, "clifford": w.clifford.word}
                        for i, w in enumerate(self.outputs)],
            "next_id": self._next_id,
            "zero": self.is_zero,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GraphLikeDiagram":
        if data.get("version", DIAGRAM_FORMAT_VERSION) != DIAGRAM_FORMAT_VERSION:
            raise ValueError(f"unsupported diagram version {data.get('version')}")
        d = cls()
        for rec in data["vertices"]:
            v = int(rec["id"])
            d.phases[v] = _check_phase(rec.get("phase", 0))
            d.adj[v] = set()
        d._next_id = max([int(data.get("next_id", 0))] + [v + 1 for v in d.phases])
        for u, v in data["edges"]:
            d.add_edge(int(u), int(v))
        for side in ("inputs", "outputs"):
            recs = sorted(data.get(side, []), key=lambda r: r["wire"])
            for rec in recs:
                getattr(d, side).append(Wire(int(rec["vertex"]),
                                             LocalClifford.from_word(rec.get("clifford", ""))))
        d.is_zero = bool(data.get("zero", False))
        d.validate()
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "GraphLikeDiagram":
        return cls.from_dict(json.loads(text))

    def to_dot(self) -> str:
        names = ["0", "π/2", "π", "-π/2"]
        lines = ["graph zx {", "  rankdir=LR;"]
        for v in self.vertices:
            lines.append(f'  v{v} [label="{names[self.phases[v]]}", shape=circle, '
                         f'style=filled, fillcolor="#ccffcc"];')
        for side, prefix in (("inputs", "in"), ("outputs", "out")):
            for i, w in enumerate(getattr(self, side)):
                lines.append(f'  {prefix}{i} [label="{prefix}{i}", shape=plaintext];')
                label = f' label="{w.clifford.word}"' if not w.clifford.is_identity() else ""
                lines.append(f"  {prefix}{i} -- v{w.vertex} [style=solid{label and ',' + label}];")
        for u, v in self.edges():
            lines.append(f'  v{u} -- v{v} [style=dashed, color="#1f4fff"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Circuit ingestion


def from_circuit(circuit: CliffordCircuit) -> GraphLikeDiagram:
    """Graph-like diagram of a Clifford circuit.

    Each qubit keeps a frontier spider plus a pending-Hadamard flag.  Phase
    gates fuse into the frontier spider, consecutive Hadamards cancel, ``X``
    is rewritten as ``H Z H``, ``CX`` as ``H CZ H`` on the target, and a
    ``CZ`` toggles a Hadamard edge between the two frontier spiders (a
    parallel pair cancels).  A fresh phase-free spider is inserted whenever a
    pending Hadamard must be turned into an edge, and at the outputs when the
    frontier is still the input spider.
    """
    d = GraphLikeDiagram()
    frontier: List[int] = []
    pending_h: List[bool] = []
    for _ in range(circuit.n):
        v = d.add_vertex(0)
        d.add_input(v)
        frontier.append(v)
        pending_h.append(False)

    def settle(q: int) -> int:
        if pending_h[q]:
            w = d.add_vertex(0)
            d.add_edge(frontier[q], w)
            frontier[q] = w
            pending_h[q] = False
        return frontier[q]

    def phase(q: int, turns: int) -> None:
        d.add_phase(settle(q), turns)

    for g in circuit.gates:
        name = g[0]
        if name == "H":
            pending_h[g[1]] = not pending_h[g[1]]
        elif name in ("S", "Sdg", "Z"):
            phase(g[1], {"S": 1, "Sdg": 3, "Z": 2}[name])
        elif name == "X":
            q = g[1]
            pending_h[q] = not pending_h[q]
            phase(q, 2)
            pending_h[q] = not pending_h[q]
        elif name in ("CZ", "CX"):
            q, r = g[1], g[2]
            if name == "CX":
                pending_h[r] = not pending_h[r]
            d.toggle_edge(settle(q), settle(r))
            if name == "CX":
                pending_h[r] = not pending_h[r]
        else:
            raise ValueError(f"unknown gate {name!r}")

    inputs = {w.vertex for w in d.inputs}
    h = LocalClifford.from_word("H")
    for q in range(circuit.n):
        v = frontier[q]
        if v in inputs:
            w = d.add_vertex(0)
            d.add_edge(v, w)
            d.add_output(w, LocalClifford(0) if pending_h[q] else h)
        else:
            d.add_output(v, h if pending_h[q] else LocalClifford(0))
    return d


# --------------------------------------------------------------------------
# Dense semantics


_UNARY = {p: np.array([1, 1j ** p]) for p in range(4)}
_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex)


def _broadcast_product(factors, out_vars: Sequence[int]) -> np.ndarray:
    """Pointwise product of factors that only involve ``out_vars``."""
    pos = {v: i for i, v in enumerate(out_vars)}
    t = np.ones([2] * len(out_vars), dtype=complex)
    for vs, arr in factors:
        order = sorted(range(len(vs)), key=lambda a: pos[vs[a]])
        arr = np.transpose(arr, order)
        shape = [1] * len(out_vars)
        for v in vs:
            shape[pos[v]] = 2
        t = t * arr.reshape(shape)
    return t


def evaluate_dense(d: GraphLikeDiagram, max_legs: int = 16,
                   max_tensor: int = 2 ** 24) -> np.ndarray:
    """Dense matrix of shape ``(2**len(outputs), 2**len(inputs))``.

    Interior spiders are summed out one at a time (minimum-degree order).
    Qubit ``0`` is the most significant bit of a row/column index.  Scalars
    are not normalized.
    """
    n_in, n_out = len(d.inputs), len(d.outputs)
    if n_in + n_out > max_legs:
        raise OracleBudgetExceeded(f"{n_in + n_out} legs exceed the oracle budget of {max_legs}")
    factors: List[Tuple[Tuple[int, ...], np.ndarray]] = []
    for v, p in d.phases.items():
        factors.append(((v,), _UNARY[p]))
    for u, v in d.edges():
        factors.append(((u, v), _HADAMARD))

    bmap = d.boundary_map()
    interior = set(d.phases) - set(bmap)
    nbrs = {v: set(d.adj[v]) for v in d.phases}
    while interior:
        v = min(interior, key=lambda x: (len(nbrs[x]), x))
        involved = [f for f in factors if v in f[0]]
        rest = [f for f in factors if v not in f[0]]
        union = sorted({u for vs, _ in involved for u in vs} - {v})
        if 2 ** (len(union) + 1) > max_tensor:
            raise OracleBudgetExceeded("intermediate tensor exceeds the oracle budget")
        new = _broadcast_product(involved, union + [v]).sum(axis=-1)
        factors = rest + [(tuple(union), new)]
        for a in union:
            nbrs[a] |= set(union) - {a}
            nbrs[a].discard(v)
        interior.discard(v)
        del nbrs[v]

    out_vars = [w.vertex for w in d.outputs] + [w.vertex for w in d.inputs]
    t = _broadcast_product(factors, out_vars)
    for i, w in enumerate(d.outputs):
        m = w.clifford.matrix
        t = np.moveaxis(np.tensordot(m, t, axes=([1], [i])), 0, i)
    for j, w in enumerate(d.inputs):
        m = w.clifford.matrix
        ax = n_out + j
        t = np.moveaxis(np.tensordot(t, m, axes=([ax], [0])), -1, ax)
    if d.is_zero:
        t = np.zeros_like(t)
    return t.reshape(2 ** n_out, 2 ** n_in)


def proportional(a, b, tol: float = 1e-9) -> bool:
    """True iff ``a == lam * b`` for some non-zero ``lam`` (entrywise ``tol``).

    Both arrays are first scaled so their largest entry has modulus one, so
    ``tol`` is relative to the dominant amplitude.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    ma, mb = np.max(np.abs(a), initial=0.0), np.max(np.abs(b), initial=0.0)
    if ma <= tol or mb <= tol:
        return ma <= tol and mb <= tol
    a = a / ma
    b = b / mb
    lam = np.vdot(b, a) / np.vdot(b, b)
    if abs(lam) < 1e-12:
        return False
    return bool(np.max(np.abs(a - lam * b)) <= tol)


# --------------------------------------------------------------------------
# Wiring


def tensor(a: GraphLikeDiagram, b: GraphLikeDiagram) -> Tuple[GraphLikeDiagram, Dict[int, int]]:
    """Disjoint union; returns the diagram and the id map applied to ``b``."""
    d = a.copy()
    shift = {v: v + d._next_id for v in b.phases}
    for v, p in b.phases.items():
        d.phases[shift[v]] = p
        d.adj[shift[v]] = {shift[u] for u in b.adj[v]}
    d.inputs += [Wire(shift[w.vertex], w.clifford) for w in b.inputs]
    d.outputs += [Wire(shift[w.vertex], w.clifford) for w in b.outputs]
    d._next_id += b._next_id
    d.is_zero = a.is_zero or b.is_zero
    return d, shift


def _connect(d: GraphLikeDiagram, u: int, m: np.ndarray, v: int) -> None:
    """Link the legs of ``u`` and ``v`` through the single-qubit Clifford ``m``.

    ``m`` maps the leg of ``u`` to the leg of ``v``.
    """
    c = LocalClifford.from_matrix(m)
    single = c.single_h_form()
    if single is not None:
        pre, post = single
        d.add_phase(u, pre)
        d.add_phase(v, post)
        d.toggle_edge(u, v)
        return
    pre, mid, post = c.euler()
    d.add_phase(u, pre)
    d.add_phase(v, post)
    w = d.add_vertex(mid)
    d.add_edge(u, w)
    d.add_edge(w, v)


def _pop_wires(d: GraphLikeDiagram, side: str, indices: Sequence[int]) -> List[Wire]:
    wires = getattr(d, side)
    taken = [wires[i] for i in indices]
    keep = [w for i, w in enumerate(wires) if i not in set(indices)]
    setattr(d, side, keep)
    return taken


def join(d: GraphLikeDiagram, output: int, input: int) -> GraphLikeDiagram:
    """Feed output wire ``output`` into input wire ``input`` (in place)."""
    (wo,) = _pop_wires(d, "outputs", [output])
    (wi,) = _pop_wires(d, "inputs", [input])
    if wo.vertex == wi.vertex:
        raise GraphLikeError("cannot join two wires of the same spider")
    _connect(d, wo.vertex, wi.clifford.matrix @ wo.clifford.matrix, wi.vertex)
    return d


def cup(d: GraphLikeDiagram, i: int, j: int) -> GraphLikeDiagram:
    """Project outputs ``i`` and ``j`` onto ``|00> + |11>`` (in place)."""
    if i == j:
        raise ValueError("cannot contract a wire with itself")
    wi, wj = _pop_wires(d, "outputs", [i, j]) if i < j else _pop_wires(d, "outputs", [j, i])[::-1]
    _connect(d, wi.vertex, wj.clifford.matrix.T @ wi.clifford.matrix, wj.vertex)
    return d


def compose(first: GraphLikeDiagram, second: GraphLikeDiagram) -> GraphLikeDiagram:
    """Sequential composition: ``second`` after ``first``."""
    if len(first.outputs) != len(second.inputs):
        raise ValueError(f"cannot compose {len(first.outputs)} outputs with "
                         f"{len(second.inputs)} inputs")
    n = len(first.outputs)
    d, _ = tensor(first, second)
    n_first_in = len(first.inputs)
    for _ in range(n):
        join(d, 0, n_first_in)
    return d


def bend_to_state(d: GraphLikeDiagram) -> GraphLikeDiagram:
    """Turn every input into an output placed before the existing outputs."""
    s = d.copy()
    s.outputs = [Wire(w.vertex, w.clifford.transpose()) for w in d.inputs] + list(d.outputs)
    s.inputs = []
    return s


def bend_to_map(d: GraphLikeDiagram, k: int) -> GraphLikeDiagram:
    """Turn the first ``k`` outputs into inputs (after any existing inputs)."""
    if not 0 <= k <= len(d.outputs):
        raise ValueError(f"k={k} out of range for {len(d.outputs)} outputs")
    m = d.copy()
    m.inputs = list(d.inputs) + [Wire(w.vertex, w.clifford.transpose()) for w in d.outputs[:k]]
    m.outputs = list(d.outputs[k:])
    return m


_STATES = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([1, 1], dtype=complex),
    "-": np.array([1, -1], dtype=complex),
    "+i": np.array([1, 1j]),
    "-i": np.array([1, -1j]),
}


def _absorb(d: GraphLikeDiagram, v: int, vec: np.ndarray) -> None:
    """Contract the (plain) leg of ``v`` with ``sum_x vec[x] <x|``."""
    vec = vec / vec[np.argmax(np.abs(vec))]
    if abs(vec[1]) < 1e-9 or abs(vec[0]) < 1e-9:
        bit = 0 if abs(vec[1]) < 1e-9 else 1
        if bit:
            for u in d.adj[v]:
                d.add_phase(u, 2)
        d.remove_vertex(v)
        return
    ratio = vec[1] / vec[0]
    turns = int(round(np.angle(ratio) / (np.pi / 2))) % 4
    if abs(ratio - 1j ** turns) > 1e-9:
        raise ValueError("not a stabilizer state")
    d.add_phase(v, turns)


def plug_input(d: GraphLikeDiagram, index: int, state: str) -> GraphLikeDiagram:
    """Feed a single-qubit stabilizer state into input ``index`` (in place)."""
    (w,) = _pop_wires(d, "inputs", [index])
    _absorb(d, w.vertex, w.clifford.matrix @ _STATES[state])
    return d


def plug_output(d: GraphLikeDiagram, index: int, effect: str) -> GraphLikeDiagram:
    """Post-select output ``index`` on ``<effect|`` (in place)."""
    (w,) = _pop_wires(d, "outputs", [index])
    _absorb(d, w.vertex, _STATES[effect].conj() @ w.clifford.matrix)
    return d


# --------------------------------------------------------------------------
# Random instances


def random_diagram(rng: np.random.Generator, n_inputs: int, n_outputs: int,
                   n_interior: int, edge_prob: float = 0.4) -> GraphLikeDiagram:
    """Random graph-like Clifford diagram with random boundary decorations."""
    d = GraphLikeDiagram()
    vs = [d.add_vertex(int(rng.integers(4))) for _ in range(n_inputs + n_outputs + n_interior)]
    for u, v in itertools.combinations(vs, 2):
        if rng.random() < edge_prob:
            d.add_edge(u, v)
    order = list(rng.permutation(len(vs)))
    cliffords = LocalClifford.all()
    for t in range(n_inputs):
        d.add_input(vs[order[t]], cliffords[int(rng.integers(24))])
    for t in range(n_outputs):
        d.add_output(vs[order[n_inputs + t]], cliffords[int(rng.integers(24))])
    return d


def graph_state(adjacency) -> GraphLikeDiagram:
    """Diagram of the graph state of ``adjacency`` (one output per vertex)."""
    a = np.asarray(adjacency) % 2
    d = GraphLikeDiagram()
    vs = [d.add_vertex(0) for _ in range(len(a))]
    for i, j in zip(*np.nonzero(np.triu(a, 1))):
        d.add_edge(vs[i], vs[j])
    for v in vs:
        d.add_output(v)
    return d


def relabel(d: GraphLikeDiagram, perm: Dict[int, int]) -> GraphLikeDiagram:
    """Rename vertices through ``perm`` (a bijection on the vertex ids)."""
    r = GraphLikeDiagram()
    for v in sorted(d.phases, key=lambda x: perm[x]):
        r.phases[perm[v]] = d.phases[v]
        r.adj[perm[v]] = set()
    for u, v in d.edges():
        r.add_edge(perm[u], perm[v])
    r.inputs = [Wire(perm[w.vertex], w.clifford) for w in d.inputs]
    r.outputs = [Wire(perm[w.vertex], w.clifford) for w in d.outputs]
    r._next_id = max([d._next_id] + [p + 1 for p in perm.values()])
    r.is_zero = d.is_zero
    return r


__all__ = [
    "GraphLikeDiagram", "GraphLikeError", "OracleBudgetExceeded", "Wire",
    "bend_to_map", "bend_to_state", "compose", "cup", "evaluate_dense", "from_circuit",
    "graph_state", "join", "plug_input", "plug_output", "proportional", "random_diagram",
    "relabel", "tensor",
]
