"""Single-qubit Clifford decorations and Clifford circuits.

Words over ``{H, S, Z, X}`` are read in *time order*: ``"HS"`` means apply
``H`` first and then ``S``, i.e. the matrix ``S @ H``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .symplectic import PauliOperator

_S2 = 1 / np.sqrt(2)
GATE_MATRICES: Dict[str, np.ndarray] = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) * _S2,
    "S": np.diag([1, 1j]),
    "Sdg": np.diag([1, -1j]),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    "CX": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
}
ONE_QUBIT = ("H", "S", "Sdg", "X", "Z")
TWO_QUBIT = ("CZ", "CX")


def phase_matrix(quarter_turns: int) -> np.ndarray:
    return np.diag([1, 1j ** (quarter_turns % 4)])


def _phase_key(m: np.ndarray) -> Tuple:
    flat = m.reshape(-1)
    i = int(np.argmax(np.abs(flat) > 1e-9))
    norm = flat / (flat[i] / abs(flat[i])) / np.linalg.norm(flat)
    return tuple(np.round(norm.real, 6) + 0.0) + tuple(np.round(norm.imag, 6) + 0.0)


def proportional_2x2(a: np.ndarray, b: np.ndarray) -> bool:
    return _phase_key(a) == _phase_key(b)


@lru_cache(maxsize=None)
def _clifford_table() -> Tuple[List[str], Dict[Tuple, int]]:
    words: List[str] = [""]
    keys: Dict[Tuple, int] = {_phase_key(np.eye(2)): 0}
    frontier = [""]
    while frontier:
        nxt = []
        for w in frontier:
            for g in ("H", "S", "Z", "X"):
                cand = w + g
                key = _phase_key(_word_matrix(cand))
                if key not in keys:
                    keys[key] = len(words)
                    words.append(cand)
                    nxt.append(cand)
        frontier = nxt
    return words, keys


def _word_matrix(word: str) -> np.ndarray:
    m = np.eye(2, dtype=complex)
    for g in word:
        m = GATE_MATRICES[g] @ m
    return m


@dataclass(frozen=True)
class LocalClifford:
    """One of the 24 single-qubit Cliffords modulo global phase."""

    index: int = 0

    @classmethod
    def from_word(cls, word: str) -> "LocalClifford":
        tokens = _tokenize(word)
        m = np.eye(2, dtype=complex)
        for g in tokens:
            m = GATE_MATRICES[g] @ m
        return cls.from_matrix(m)

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "LocalClifford":
        _, keys = _clifford_table()
        key = _phase_key(np.asarray(m, dtype=complex))
        if key not in keys:
            raise ValueError("matrix is not a single-qubit Clifford")
        return cls(keys[key])

    @classmethod
    def phase(cls, quarter_turns: int) -> "LocalClifford":
        return cls.from_matrix(phase_matrix(quarter_turns))

    @classmethod
    def all(cls) -> List["LocalClifford"]:
        return [cls(i) for i in range(len(_clifford_table()[0]))]

    @property
    def word(self) -> str:
        return _clifford_table()[0][self.index]

    @property
    def matrix(self) -> np.ndarray:
        return _word_matrix(self.word)

    def is_identity(self) -> bool:
        return self.index == 0

    def then(self, other: "LocalClifford") -> "LocalClifford":
        """Apply ``self`` first, then ``other``."""
        return LocalClifford.from_matrix(other.matrix @ self.matrix)

    def inverse(self) -> "LocalClifford":
        return LocalClifford.from_matrix(self.matrix.conj().T)

    def transpose(self) -> "LocalClifford":
        # H, S, Z, X are all symmetric, so transposing reverses the word.
        return LocalClifford.from_word(self.word[::-1])

    def gates(self) -> List[str]:
        return list(self.word)

    def conjugate(self, pauli: PauliOperator, qubit: int) -> PauliOperator:
        """``C P C^dagger`` with ``C`` acting on ``qubit``."""
        for g in self.word:
            pauli = conjugate_gate(pauli, (g, qubit))
        return pauli

    def euler(self) -> Tuple[int, int, int]:
        """Quarter turns ``(c, b, a)`` with ``self ~ P(a) H P(b) H P(c)``."""
        return _euler_table()[self.index]

    def single_h_form(self):
        """``(c, a)`` with ``self ~ P(a) H P(c)``, or ``None``."""
        return _single_h_table()[self.index]

    def __str__(self) -> str:
        return self.word or "I"


def _tokenize(word: str) -> List[str]:
    out = []
    i = 0
    w = word.strip()
    if w in ("", "I"):
        return out
    while i < len(w):
        if w.startswith("Sdg", i):
            out.append("Sdg")
            i += 3
        elif w[i] in "HSZX":
            out.append(w[i])
            i += 1
        elif w[i] in " ,I":
            i += 1
        else:
            raise ValueError(f"bad Clifford word {word!r}")
    return out


@lru_cache(maxsize=None)
def _euler_table() -> Dict[int, Tuple[int, int, int]]:
    h = GATE_MATRICES["H"]
    table: Dict[int, Tuple[int, int, int]] = {}
    for c, b, a in itertools.product(range(4), repeat=3):
        m = phase_matrix(a) @ h @ phase_matrix(b) @ h @ phase_matrix(c)
        idx = LocalClifford.from_matrix(m).index
        table.setdefault(idx, (c, b, a))
    assert len(table) == 24
    return table


@lru_cache(maxsize=None)
def _single_h_table() -> Dict[int, object]:
    h = GATE_MATRICES["H"]
    table: Dict[int, object] = {i: None for i in range(24)}
    for c, a in itertools.product(range(4), repeat=2):
        idx = LocalClifford.from_matrix(phase_matrix(a) @ h @ phase_matrix(c)).index
        if table[idx] is None:
            table[idx] = (c, a)
    return table


# --------------------------------------------------------------------------
# Pauli conjugation


def _decompose_local(m: np.ndarray, nq: int) -> Tuple[np.ndarray, np.ndarray, int]:
    for bits in itertools.product((0, 1), repeat=2 * nq):
        p = PauliOperator(np.array(bits[:nq]), np.array(bits[nq:]), 0)
        pm = p.to_matrix()
        overlap = np.trace(pm.conj().T @ m) / (2 ** nq)
        if abs(abs(overlap) - 1) < 1e-9:
            ph = int(round(np.angle(overlap) / (np.pi / 2))) % 4
            return p.x, p.z, ph
    raise ValueError("matrix is not a Pauli")


@lru_cache(maxsize=None)
def _gate_images(name: str) -> Dict[Tuple[int, ...], Tuple[np.ndarray, np.ndarray, int]]:
    u = GATE_MATRICES[name]
    nq = 1 if name in ONE_QUBIT else 2
    images = {}
    for bits in itertools.product((0, 1), repeat=2 * nq):
        p = PauliOperator(np.array(bits[:nq]), np.array(bits[nq:]), 0)
        images[bits] = _decompose_local(u @ p.to_matrix() @ u.conj().T, nq)
    return images


def conjugate_gate(pauli: PauliOperator, gate: Tuple) -> PauliOperator:
    """Exact ``U P U^dagger`` for one gate ``(name, q[, r])``."""
    name, qs = gate[0], list(gate[1:])
    x = pauli.x.copy()
    z = pauli.z.copy()
    bits = tuple(int(x[q]) for q in qs) + tuple(int(z[q]) for q in qs)
    ix, iz, ph = _gate_images(name)[bits]
    for t, q in enumerate(qs):
        x[q] = ix[t]
        z[q] = iz[t]
    return PauliOperator(x, z, pauli.phase + ph)


# --------------------------------------------------------------------------
# Circuits


@dataclass
class CliffordCircuit:
    n: int
    gates: List[Tuple] = field(default_factory=list)

    def __post_init__(self):
        for g in self.gates:
            self._check(g)

    def _check(self, g: Tuple) -> None:
        name = g[0]
        if name in ONE_QUBIT:
            if len(g) != 2:
                raise ValueError(f"{name} takes one qubit")
        elif name in TWO_QUBIT:
            if len(g) != 3:
                raise ValueError(f"{name} takes two qubits")
            if g[1] == g[2]:
                raise ValueError(f"{name} operands must be distinct")
        else:
            raise ValueError(f"unknown gate {name!r}")
        for q in g[1:]:
            if not 0 <= q < self.n:
                raise ValueError(f"qubit {q} out of range for {self.n} qubits")

    def append(self, name: str, *qubits: int) -> "CliffordCircuit":
        g = (name, *map(int, qubits))
        self._check(g)
        self.gates.append(g)
        return self

    def extend(self, gates: Sequence[Tuple]) -> "CliffordCircuit":
        for g in gates:
            self.append(*g)
        return self

    def inverse(self) -> "CliffordCircuit":
        inv = {"S": "Sdg", "Sdg": "S"}
        return CliffordCircuit(self.n, [(inv.get(g[0], g[0]), *g[1:]) for g in reversed(self.gates)])

    def conjugate(self, pauli: PauliOperator) -> PauliOperator:
        """``U P U^dagger`` where ``U`` is the whole circuit."""
        for g in self.gates:
            pauli = conjugate_gate(pauli, g)
        return pauli

    def unitary(self) -> np.ndarray:
        n = self.n
        state = np.eye(2 ** n, dtype=complex).reshape([2] * n + [2 ** n])
        for g in self.gates:
            u = GATE_MATRICES[g[0]]
            qs = list(g[1:])
            m = len(qs)
            u = u.reshape([2] * (2 * m))
            state = np.tensordot(u, state, axes=(list(range(m, 2 * m)), qs))
            state = np.moveaxis(state, list(range(m)), qs)
        return state.reshape(2 ** n, 2 ** n)

    def to_text(self) -> str:
        lines = [f"qubits {self.n}"]
        lines += [" ".join(map(str, g)) for g in self.gates]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "CliffordCircuit":
        gates = []
        n = None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0].lower() == "qubits":
                n = int(parts[1])
                continue
            name = {"SDG": "Sdg", "CNOT": "CX"}.get(parts[0].upper(), parts[0].upper())
            if name == "SDG":
                name = "Sdg"
            try:
                gates.append((name, *(int(p) for p in parts[1:])))
            except ValueError:
                raise ValueError(f"line {lineno}: cannot parse {raw!r}") from None
        if n is None:
            n = 1 + max((q for g in gates for q in g[1:]), default=-1)
        return cls(n, gates)

    @classmethod
    def random(cls, n: int, depth: int, rng: np.random.Generator) -> "CliffordCircuit":
        names = list(ONE_QUBIT) + (list(TWO_QUBIT) if n > 1 else [])
        c = cls(n)
        for _ in range(depth):
            name = names[rng.integers(len(names))]
            if name in TWO_QUBIT:
                q, r = rng.choice(n, size=2, replace=False)
                c.append(name, int(q), int(r))
            else:
                c.append(name, int(rng.integers(n)))
        return c

    def __len__(self) -> int:
        return len(self.gates)
