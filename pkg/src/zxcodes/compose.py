"""Concatenation, contraction and a catalog of named codes."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .clifford import CliffordCircuit, LocalClifford
from .diagram import GraphLikeDiagram, Wire, bend_to_state, cup, join, tensor
from .encoder import (EncoderDiagram, GraphCode, InvalidEncoder, apply_basis_change,
                      encoder_from_circuit, encoder_from_graph_code,
                      encoder_from_stabilizer, validate)
from .rewrite import glc, simplify
from .symplectic import StabilizerCode


class GLCFailure(ValueError):
    """Two neighbourhoods of a concatenated pair overlap, so plain GLC is unsound."""


def hadamard_layer(k: int) -> CliffordCircuit:
    return CliffordCircuit(k, [("H", q) for q in range(k)])


# --------------------------------------------------------------------------
# Concatenation


@dataclass
class ConcatenationPlan:
    outer: EncoderDiagram
    inners: List[EncoderDiagram]
    basis_changes: List[Optional[CliffordCircuit]] = field(default_factory=list)

    def __post_init__(self):
        if not self.basis_changes:
            self.basis_changes = [None] * len(self.inners)
        if len(self.basis_changes) != len(self.inners):
            raise ValueError("need one basis change (or None) per inner block")

    @classmethod
    def uniform(cls, outer: EncoderDiagram, inner: EncoderDiagram,
                basis: Optional[CliffordCircuit] = None) -> "ConcatenationPlan":
        """Every outer output feeds a copy of ``inner``."""
        if inner.k == 0 or outer.n % inner.k:
            raise ValueError(f"outer n={outer.n} is not a multiple of inner k={inner.k}")
        blocks = outer.n // inner.k
        return cls(outer, [inner] * blocks, [basis] * blocks)


def concatenate(plan: ConcatenationPlan, strategy=None) -> EncoderDiagram:
    """Feed the outer outputs into the (basis-changed) inner inputs and simplify.

    Raises :class:`InvalidEncoder` when the outer encoder or the result is
    not valid.
    """
    outer = plan.outer
    if not validate(outer):
        raise InvalidEncoder(f"outer encoder is not valid (k={outer.k}, n={outer.n})")
    total = sum(e.k for e in plan.inners)
    if total != outer.n:
        raise ValueError(f"outer has {outer.n} outputs but inner blocks take {total} inputs")
    d = outer.diagram.copy()
    for inner, u in zip(plan.inners, plan.basis_changes):
        if u is not None:
            if u.n != inner.k:
                raise ValueError(f"basis change on {u.n} qubits for an inner block with k={inner.k}")
            inner = apply_basis_change(inner, u)
        d, _ = tensor(d, inner.diagram)
    for _ in range(outer.n):
        join(d, 0, outer.k)
    result = EncoderDiagram(simplify(d, strategy))
    if not validate(result):
        raise InvalidEncoder("concatenated encoder is not valid")
    return result


def stack_for_concatenation(outer: GraphCode, inner: GraphCode
                            ) -> Tuple[GraphLikeDiagram, List[Tuple[int, int]]]:
    """Outer and inner encoders side by side, each outer output joined to an
    inner input by a Hadamard edge (an ``H`` basis change on the plain wire).

    Returns the diagram and the ``(outer output, inner input)`` vertex pairs,
    which are now interior.
    """
    if inner.k == 0 or outer.n % inner.k:
        raise ValueError(f"outer n={outer.n} is not a multiple of inner k={inner.k}")
    e_out = encoder_from_graph_code(outer)
    if not validate(e_out):
        raise InvalidEncoder("outer code is not a valid encoder")
    d = e_out.diagram.copy()
    e_in = encoder_from_graph_code(inner)
    for _ in range(outer.n // inner.k):
        d, _ = tensor(d, e_in.diagram)
    pairs = [(d.outputs[t].vertex, d.inputs[outer.k + t].vertex) for t in range(outer.n)]
    d.outputs = d.outputs[outer.n:]
    d.inputs = d.inputs[:outer.k]
    for o, i in pairs:
        d.add_edge(o, i)
    return d, pairs


def glc_concatenate(outer: GraphCode, inner: GraphCode) -> EncoderDiagram:
    """Concatenate graph codes with an ``H`` basis change using only GLC steps.

    Each outer output ``o`` meets an inner input ``i'`` through a Hadamard
    edge; the pair is removed by complementing the edges between
    ``N(o) - {i'}`` and ``N(i') - {o}``.  This is a pivot whose common
    neighbourhood is empty, so it raises :class:`GLCFailure` when the two
    sets meet.
    """
    d, pairs = stack_for_concatenation(outer, inner)
    for o, i in pairs:
        n1 = d.adj[o] - {i}
        n2 = d.adj[i] - {o}
        if n1 & n2:
            raise GLCFailure(f"neighbourhoods of pair ({o}, {i}) share {sorted(n1 & n2)}")
        glc(d, n1, n2)
        d.remove_vertex(o)
        d.remove_vertex(i)
    return EncoderDiagram(d)


# --------------------------------------------------------------------------
# Contraction


def contract(a: EncoderDiagram, i: int, b: EncoderDiagram, j: int,
             strategy=None) -> EncoderDiagram:
    """Project output ``i`` of ``a`` and output ``j`` of ``b`` onto a Bell pair.

    Inputs of ``a`` come before those of ``b``; the remaining outputs keep
    their order, ``a`` first.  The result is not validated.
    """
    if not 0 <= i < a.n or not 0 <= j < b.n:
        raise IndexError(f"legs ({i}, {j}) out of range for encoders with n={a.n}, {b.n}")
    d, _ = tensor(a.diagram, b.diagram)
    cup(d, i, a.n + j)
    return EncoderDiagram(simplify(d, strategy))


def self_contract(a: EncoderDiagram, i: int, j: int, strategy=None) -> EncoderDiagram:
    if not (0 <= i < a.n and 0 <= j < a.n):
        raise IndexError(f"legs ({i}, {j}) out of range for n={a.n}")
    if i == j:
        raise ValueError("cannot contract a leg with itself")
    d = a.diagram.copy()
    cup(d, i, j)
    return EncoderDiagram(simplify(d, strategy))


Leg = Tuple[str, int]


def contract_plan(instances: Dict[str, EncoderDiagram],
                  contractions: Sequence[Tuple[str, int, str, int]],
                  strategy=None) -> Tuple[EncoderDiagram, List[Leg]]:
    """Tensor the named instances and contract the listed leg pairs.

    Returns the encoder and, for each remaining output, the ``(instance,
    leg)`` it came from.  Inputs follow the instance order.
    """
    names = list(instances)
    d = GraphLikeDiagram()
    labels: List[Leg] = []
    for name in names:
        d, _ = tensor(d, instances[name].diagram)
        labels += [(name, leg) for leg in range(instances[name].n)]
    for a, i, b, j in contractions:
        try:
            p, q = labels.index((a, int(i))), labels.index((b, int(j)))
        except ValueError:
            raise IndexError(f"no free leg for contraction {a}:{i} - {b}:{j}") from None
        cup(d, p, q)
        labels = [lab for t, lab in enumerate(labels) if t not in (p, q)]
    return EncoderDiagram(simplify(d, strategy)), labels


# --------------------------------------------------------------------------
# Catalog


def five_one_three() -> GraphCode:
    """The five-qubit code as the ring graph with the all-ones codeword."""
    ring = np.zeros((5, 5), dtype=np.uint8)
    for v in range(5):
        ring[v, (v + 1) % 5] = ring[(v + 1) % 5, v] = 1
    return GraphCode(ring, np.ones((1, 5), dtype=np.uint8))


def repetition(n: int = 3) -> EncoderDiagram:
    """``[[n,1,1]]`` bit-flip repetition code ``|x> -> |x...x>``.

    This is the edgeless graph code with the all-ones codeword (which
    encodes ``|0> -> |+...+>``) followed by a Hadamard on every output.
    """
    if n < 2:
        raise ValueError("repetition code needs n >= 2")
    e = encoder_from_graph_code(GraphCode(np.zeros((n, n), dtype=np.uint8),
                                          np.ones((1, n), dtype=np.uint8)))
    h = LocalClifford.from_word("H")
    e.diagram.outputs = [Wire(w.vertex, h) for w in e.diagram.outputs]
    return e


STEANE_DATA_QUBIT = 2


def steane_circuit() -> CliffordCircuit:
    """Steane encoding circuit; qubit 2 carries the data, the rest start in ``|0>``."""
    return CliffordCircuit.from_text("""
        qubits 7
        CX 2 4
        CX 2 5
        H 0
        H 1
        H 3
        CX 3 4
        CX 3 5
        CX 3 6
        CX 1 2
        CX 1 5
        CX 1 6
        CX 0 2
        CX 0 4
        CX 0 6
    """)


STEANE_CHECKS = ((3, 4, 5, 6), (1, 2, 5, 6), (0, 2, 4, 6))


def steane_stabilizers() -> StabilizerCode:
    """Textbook Steane group: X and Z checks on the Hamming supports."""
    def label(kind, support):
        return "".join(kind if q in support else "I" for q in range(7))

    stabs = [label("X", s) for s in STEANE_CHECKS] + [label("Z", s) for s in STEANE_CHECKS]
    return StabilizerCode.from_labels(stabs, ["XXXXXXX"], ["ZZZZZZZ"])


def steane() -> EncoderDiagram:
    return encoder_from_circuit(steane_circuit(), [STEANE_DATA_QUBIT])


def shor() -> EncoderDiagram:
    """Repetition code concatenated with itself through a Hadamard basis change."""
    rep = repetition(3)
    return concatenate(ConcatenationPlan.uniform(rep, rep, hadamard_layer(1)))


def ame6() -> EncoderDiagram:
    """Six-qubit absolutely maximally entangled state: the bent five-qubit encoder."""
    return EncoderDiagram(bend_to_state(encoder_from_graph_code(five_one_three()).diagram))


HAPPY_CONTRACTIONS = (
    ("A", 3, "B", 0),  # alpha
    ("B", 4, "C", 0),  # gamma'
    ("C", 4, "D", 0),  # delta
    ("A", 4, "D", 4),  # beta
)


def happy_block(strategy=None) -> EncoderDiagram:
    """Four five-qubit tensors contracted into a ``k=4``, ``n=12`` block.

    ``A`` keeps physical legs 1-3 and sends ``alpha`` to ``B`` and ``beta`` to
    ``D``; ``B`` keeps 4-6 and sends ``gamma'`` to ``C``; ``C`` keeps 7-9
    and sends ``delta`` to ``D``; ``D`` keeps 10-12.
    """
    base = encoder_from_graph_code(five_one_three())
    instances = {name: base for name in "ABCD"}
    e, _ = contract_plan(instances, HAPPY_CONTRACTIONS, strategy)
    return e


CATALOG_NAMES = ("five_one_three", "steane", "repetition(n)", "shor", "ame6", "happy")


def catalog(name: str) -> Union[GraphCode, EncoderDiagram, StabilizerCode]:
    """Named fixture: a graph code, an encoder, or (``steane_group``) a code."""
    key = name.strip().lower().replace("-", "_")
    m = re.fullmatch(r"repetition(?:\((\d+)\)|_?(\d+))?", key)
    if m:
        return repetition(int(m.group(1) or m.group(2) or 3))
    table: Dict[str, Callable] = {
        "five_one_three": five_one_three,
        "steane": steane,
        "steane_group": steane_stabilizers,
        "shor": shor,
        "ame6": ame6,
        "happy": happy_block,
    }
    if key not in table:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG_NAMES)}")
    return table[key]()


def as_encoder(obj) -> EncoderDiagram:
    if isinstance(obj, EncoderDiagram):
        return obj
    if isinstance(obj, GraphCode):
        return encoder_from_graph_code(obj)
    if isinstance(obj, StabilizerCode):
        return encoder_from_stabilizer(obj)
    raise TypeError(f"cannot turn {type(obj).__name__} into an encoder")


# --------------------------------------------------------------------------
# Plan files


def resolve_ref(ref: str, base: Optional[Path] = None) -> EncoderDiagram:
    """A catalog name (optionally tagged ``name#tag``) or a path to a JSON file."""
    name = ref.split("#", 1)[0]
    path = Path(name) if base is None else base / name
    if path.suffix == ".json" or path.exists():
        data = json.loads(path.read_text())
        if "G" in data:
            return encoder_from_graph_code(GraphCode.from_dict(data))
        if "stabilizers" in data:
            return as_encoder(StabilizerCode.from_dict(data))
        return EncoderDiagram.from_diagram(GraphLikeDiagram.from_dict(data))
    return as_encoder(catalog(name))


def resolve_basis(ref, k: int, base: Optional[Path] = None) -> Optional[CliffordCircuit]:
    if ref is None or str(ref).upper() in ("", "I", "NONE", "IDENTITY"):
        return None
    if str(ref).upper() == "H":
        return hadamard_layer(k)
    path = Path(ref) if base is None else base / ref
    return CliffordCircuit.from_text(path.read_text())


def run_plan(data: dict, base: Optional[Path] = None, strategy=None) -> EncoderDiagram:
    """Execute a concatenation or contraction plan document."""
    if "contractions" in data:
        refs: List[str] = []
        for a, _, b, _ in data["contractions"]:
            for r in (a, b):
                if r not in refs:
                    refs.append(r)
        for r in data.get("instances", []):
            if r not in refs:
                refs.append(r)
        instances = {r: resolve_ref(r, base) for r in refs}
        e, _ = contract_plan(instances, [tuple(c) for c in data["contractions"]], strategy)
        return e
    outer = resolve_ref(data["outer"], base)
    inners = [resolve_ref(r, base) for r in data["inners"]]
    if len(inners) == 1 and outer.n > inners[0].k and inners[0].k and outer.n % inners[0].k == 0:
        inners = inners * (outer.n // inners[0].k)
    bases = data.get("basis_changes") or [None]
    if len(bases) == 1:
        bases = bases * len(inners)
    plan = ConcatenationPlan(outer, inners,
                             [resolve_basis(b, e.k, base) for b, e in zip(bases, inners)])
    return concatenate(plan, strategy)


__all__ = [
    "CATALOG_NAMES", "ConcatenationPlan", "GLCFailure", "HAPPY_CONTRACTIONS", "ame6",
    "as_encoder", "catalog", "concatenate", "contract", "contract_plan", "five_one_three",
    "glc_concatenate", "hadamard_layer", "stack_for_concatenation", "happy_block", "repetition", "resolve_basis",
    "resolve_ref", "run_plan", "self_contract", "shor", "steane", "steane_circuit",
    "steane_stabilizers",
]
