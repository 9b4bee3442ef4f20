"""GF(2) linear algebra, Pauli arithmetic and stabilizer-code containers.

Binary matrices are plain ``numpy`` arrays of dtype ``uint8`` holding 0/1
entries.  A Pauli operator on ``n`` qubits is stored as the symplectic pair
``[x | z]`` together with an exponent of ``i``; the operator it denotes is

    i**phase * X**x * Z**z

with every ``X`` factor written to the left of every ``Z`` factor.  In this
convention ``Y = i X Z`` has ``phase == 1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

Gf2Matrix = np.ndarray
RowOp = Tuple[str, int, int]

_PAULI_1Q = {
    "I": (0, 0, 0),
    "X": (1, 0, 0),
    "Z": (0, 1, 0),
    "Y": (1, 1, 1),
}


class BudgetExceeded(RuntimeError):
    """Raised when an exhaustive oracle would exceed its enumeration budget."""


def gf2(a) -> Gf2Matrix:
    """Coerce ``a`` to a 2-D uint8 array reduced mod 2."""
    m = np.asarray(a, dtype=np.int64) % 2
    if m.ndim == 1:
        m = m.reshape(1, -1)
    return m.astype(np.uint8)


def rref(m) -> Tuple[Gf2Matrix, List[int], List[RowOp]]:
    """Row-reduce ``m`` over GF(2).

    Returns the reduced matrix, the pivot columns and the elementary row
    operations that were used, as ``("swap", i, j)`` or ``("add", src, dst)``
    tuples.  Replaying them on ``m`` with :func:`replay_rowops` reproduces the
    reduced matrix.
    """
    a = gf2(m).copy()
    rows, cols = a.shape
    pivots: List[int] = []
    ops: List[RowOp] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if len(nz) == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
            ops.append(("swap", r, p))
        for i in np.nonzero(a[:, c])[0]:
            i = int(i)
            if i != r:
                a[i] ^= a[r]
                ops.append(("add", r, i))
        pivots.append(c)
        r += 1
    return a, pivots, ops


def replay_rowops(m, ops: Iterable[RowOp]) -> Gf2Matrix:
    a = gf2(m).copy()
    for kind, i, j in ops:
        if kind == "swap":
            a[[i, j]] = a[[j, i]]
        elif kind == "add":
            a[j] ^= a[i]
        else:
            raise ValueError(f"unknown row operation {kind!r}")
    return a


def rank(m) -> int:
    if np.size(m) == 0:
        return 0
    return len(rref(m)[1])


def kernel_basis(m) -> Gf2Matrix:
    """Basis (as rows) of ``{w : m @ w == 0 (mod 2)}``."""
    a = np.asarray(m)
    cols = a.shape[1] if a.ndim == 2 else a.shape[0]
    if a.size == 0:
        return np.eye(cols, dtype=np.uint8)
    red, pivots, _ = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for r, p in enumerate(pivots):
            basis[t, p] = red[r, f]
    return basis


def solve(m, b) -> Optional[np.ndarray]:
    """One solution ``w`` of ``m @ w == b`` over GF(2), or ``None``."""
    a = gf2(m)
    rhs = gf2(np.asarray(b).reshape(-1, 1))
    red, pivots, _ = rref(np.hstack([a, rhs]))
    cols = a.shape[1]
    if cols in pivots:
        return None
    w = np.zeros(cols, dtype=np.uint8)
    for r, p in enumerate(pivots):
        w[p] = red[r, cols]
    return w


def in_rowspace(v, m) -> bool:
    if np.size(m) == 0:
        return not np.any(np.asarray(v) % 2)
    return rank(np.vstack([gf2(m), gf2(v)])) == rank(m)


def same_rowspace(a, b) -> bool:
    ra, rb = rank(a), rank(b)
    if ra != rb:
        return False
    if ra == 0:
        return True
    return rank(np.vstack([gf2(a), gf2(b)])) == ra


# --------------------------------------------------------------------------
# Pauli operators


@dataclass(frozen=True, eq=False)
class PauliOperator:
    x: np.ndarray
    z: np.ndarray
    phase: int = 0

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.uint8).reshape(-1) % 2
        z = np.asarray(self.z, dtype=np.uint8).reshape(-1) % 2
        if x.shape != z.shape:
            raise ValueError("x and z parts must have the same length")
        x.setflags(write=False)
        z.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @property
    def n(self) -> int:
        return len(self.x)

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(np.zeros(n, np.uint8), np.zeros(n, np.uint8), 0)

    @classmethod
    def from_label(cls, label: str) -> "PauliOperator":
        """Parse e.g. ``"XZZXI"``, ``"-iYZ"`` or ``"+X_0 Z_3"``-free strings.

        ``Y`` is the Hermitian Pauli Y, so ``from_label("Y")`` has phase 1.
        """
        s = label.strip()
        phase = 0
        if s.startswith("+"):
            s = s[1:]
        elif s.startswith("-"):
            phase = 2
            s = s[1:]
        if s.startswith("i"):
            phase += 1
            s = s[1:]
        x, z = [], []
        for ch in s:
            a, b, p = _PAULI_1Q[ch]
            x.append(a)
            z.append(b)
            phase += p
        return cls(np.array(x, np.uint8), np.array(z, np.uint8), phase)

    @classmethod
    def single(cls, n: int, qubit: int, kind: str) -> "PauliOperator":
        label = ["I"] * n
        label[qubit] = kind
        return cls.from_label("".join(label))

    @classmethod
    def from_vector(cls, v, phase: int = 0) -> "PauliOperator":
        v = np.asarray(v, dtype=np.uint8).reshape(-1)
        n = len(v) // 2
        return cls(v[:n], v[n:], phase)

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.z])

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    @property
    def support(self) -> List[int]:
        return [int(i) for i in np.nonzero(self.x | self.z)[0]]

    def is_hermitian(self) -> bool:
        return (self.phase - int(np.dot(self.x, self.z))) % 2 == 0

    @property
    def sign(self) -> int:
        """``+1``/``-1`` for Hermitian operators, relative to the Y-based label."""
        if not self.is_hermitian():
            raise ValueError("sign is only defined for Hermitian Paulis")
        return 1 if (self.phase - int(np.dot(self.x, self.z))) % 4 == 0 else -1

    def to_label(self) -> str:
        chars = "".join("IXZY"[int(a) + 2 * int(b)] for a, b in zip(self.x, self.z))
        rel = (self.phase - int(np.dot(self.x, self.z))) % 4
        return ["+", "+i", "-", "-i"][rel] + chars

    def with_phase(self, phase: int) -> "PauliOperator":
        return PauliOperator(self.x, self.z, phase)

    def negate(self) -> "PauliOperator":
        return PauliOperator(self.x, self.z, self.phase + 2)

    def permuted(self, perm: Sequence[int]) -> "PauliOperator":
        """Qubit ``q`` of the result is qubit ``perm[q]`` of ``self``."""
        perm = list(perm)
        return PauliOperator(self.x[perm], self.z[perm], self.phase)

    def tensor(self, other: "PauliOperator") -> "PauliOperator":
        # X/Z reordering across disjoint qubits commutes, so phases just add.
        return PauliOperator(np.concatenate([self.x, other.x]),
                             np.concatenate([self.z, other.z]),
                             self.phase + other.phase)

    def to_matrix(self) -> np.ndarray:
        mats = {
            (0, 0): np.eye(2),
            (1, 0): np.array([[0, 1], [1, 0]]),
            (0, 1): np.array([[1, 0], [0, -1]]),
            (1, 1): np.array([[0, -1], [1, 0]]),  # X @ Z
        }
        out = reduce(np.kron, [mats[(int(a), int(b))] for a, b in zip(self.x, self.z)],
                     np.eye(1))
        return (1j ** self.phase) * out

    def to_dict(self) -> dict:
        return {"x": "".join(map(str, self.x)), "z": "".join(map(str, self.z)),
                "phase": self.phase}

    @classmethod
    def from_dict(cls, d: dict) -> "PauliOperator":
        return cls(np.array([int(c) for c in d["x"]], np.uint8),
                   np.array([int(c) for c in d["z"]], np.uint8),
                   int(d.get("phase", 0)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return (self.phase == other.phase and np.array_equal(self.x, other.x)
                and np.array_equal(self.z, other.z))

    def __hash__(self) -> int:
        return hash((self.x.tobytes(), self.z.tobytes(), self.phase))

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return pauli_multiply(self, other)

    def __repr__(self) -> str:
        return f"PauliOperator({self.to_label()!r})"


def symplectic_product(p: PauliOperator, q: PauliOperator) -> int:
    """``a.b' + a'.b (mod 2)``; zero iff the operators commute."""
    if p.n != q.n:
        raise ValueError(f"length mismatch: {p.n} vs {q.n}")
    return int((np.dot(p.x, q.z) + np.dot(q.x, p.z)) % 2)


def pauli_multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """Exact product ``p @ q`` including the power of ``i``."""
    if p.n != q.n:
        raise ValueError(f"length mismatch: {p.n} vs {q.n}")
    # Z^b X^c = (-1)^{b.c} X^c Z^b
    swap = int(np.dot(p.z.astype(np.int64), q.x.astype(np.int64)))
    return PauliOperator(p.x ^ q.x, p.z ^ q.z, p.phase + q.phase + 2 * swap)


def check_matrix(paulis: Sequence[PauliOperator], n: Optional[int] = None) -> Gf2Matrix:
    if not paulis:
        return np.zeros((0, 2 * (n or 0)), dtype=np.uint8)
    return np.array([p.vector for p in paulis], dtype=np.uint8)


# --------------------------------------------------------------------------
# Stabilizer codes


class InvalidCode(ValueError):
    pass


@dataclass
class StabilizerCode:
    n: int
    k: int
    stabilizers: List[PauliOperator]
    logical_x: List[PauliOperator] = field(default_factory=list)
    logical_z: List[PauliOperator] = field(default_factory=list)

    def check_matrix(self) -> Gf2Matrix:
        return check_matrix(self.stabilizers, self.n)

    def validate(self) -> None:
        """Raise :class:`InvalidCode` unless all stabilizer-code invariants hold."""
        if len(self.stabilizers) != self.n - self.k:
            raise InvalidCode(f"expected {self.n - self.k} stabilizers, got {len(self.stabilizers)}")
        if len(self.logical_x) != self.k or len(self.logical_z) != self.k:
            raise InvalidCode("need exactly k logical X and k logical Z operators")
        ops = self.stabilizers + self.logical_x + self.logical_z
        if any(p.n != self.n for p in ops):
            raise InvalidCode("operator length does not match n")
        if any(not p.is_hermitian() for p in ops):
            raise InvalidCode("operators must be Hermitian")
        s = self.check_matrix()
        if rank(s) != len(self.stabilizers):
            raise InvalidCode("stabilizer generators are not independent")
        for i, a in enumerate(self.stabilizers):
            for b in self.stabilizers[i + 1:]:
                if symplectic_product(a, b):
                    raise InvalidCode(f"stabilizers {a} and {b} anticommute")
        for lg in self.logical_x + self.logical_z:
            if any(symplectic_product(lg, g) for g in self.stabilizers):
                raise InvalidCode(f"logical {lg} does not commute with the stabilizer")
            if in_rowspace(lg.vector, s):
                raise InvalidCode(f"logical {lg} lies in the stabilizer group")
        for i, lx in enumerate(self.logical_x):
            for j, lz in enumerate(self.logical_z):
                if symplectic_product(lx, lz) != (i == j):
                    raise InvalidCode(f"logical X{i}/Z{j} have the wrong commutation")
            for j, lx2 in enumerate(self.logical_x):
                if symplectic_product(lx, lx2):
                    raise InvalidCode("logical X operators must commute")
        for i, lz in enumerate(self.logical_z):
            for lz2 in self.logical_z[i + 1:]:
                if symplectic_product(lz, lz2):
                    raise InvalidCode("logical Z operators must commute")
        if rank(check_matrix(ops, self.n)) != len(ops):
            raise InvalidCode("logicals are not independent of the stabilizer")

    def permuted(self, perm: Sequence[int]) -> "StabilizerCode":
        return StabilizerCode(self.n, self.k, [p.permuted(perm) for p in self.stabilizers],
                              [p.permuted(perm) for p in self.logical_x],
                              [p.permuted(perm) for p in self.logical_z])

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "stabilizers": [p.to_dict() for p in self.stabilizers],
            "logical_x": [p.to_dict() for p in self.logical_x],
            "logical_z": [p.to_dict() for p in self.logical_z],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StabilizerCode":
        return cls(int(d["n"]), int(d["k"]),
                   [PauliOperator.from_dict(p) for p in d["stabilizers"]],
                   [PauliOperator.from_dict(p) for p in d.get("logical_x", [])],
                   [PauliOperator.from_dict(p) for p in d.get("logical_z", [])])

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "StabilizerCode":
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_labels(cls, stabilizers: Sequence[str], logical_x: Sequence[str] = (),
                    logical_z: Sequence[str] = ()) -> "StabilizerCode":
        stabs = [PauliOperator.from_label(s) for s in stabilizers]
        lx = [PauliOperator.from_label(s) for s in logical_x]
        lz = [PauliOperator.from_label(s) for s in logical_z]
        n = (stabs + lx + lz)[0].n
        return cls(n, n - len(stabs), stabs, lx, lz)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StabilizerCode):
            return NotImplemented
        return self.to_dict() == other.to_dict()


# --------------------------------------------------------------------------
# Distance oracle


def _pack(v: np.ndarray) -> int:
    return int(sum(int(b) << i for i, b in enumerate(v)))


def _enumerate_span(rows: List[Tuple[int, int]]) -> Tuple[np.ndarray, np.ndarray]:
    """All 2**len(rows) XOR-combinations; entry ``c`` uses rows in the bits of ``c``."""
    xs = np.zeros(1, dtype=np.uint64)
    zs = np.zeros(1, dtype=np.uint64)
    for rx, rz in rows:
        xs = np.concatenate([xs, xs ^ np.uint64(rx)])
        zs = np.concatenate([zs, zs ^ np.uint64(rz)])
    return xs, zs


def min_weight_logical(code: StabilizerCode, budget: int = 2 ** 24
                       ) -> Tuple[int, Optional[PauliOperator]]:
    """Minimum-weight normalizer element outside the stabilizer group.

    The normalizer is spanned by the stabilizer generators and the ``2k``
    logical representatives, so the enumeration runs over ``2**(n+k)``
    elements instead of all ``4**n`` Paulis.  For ``k == 0`` the minimum is
    taken over non-identity stabilizer elements instead.
    """
    n, k = code.n, code.k
    total = n + k
    if 2 ** total > budget:
        raise BudgetExceeded(f"2^{total} normalizer elements exceed budget {budget}")
    if n > 64:
        raise BudgetExceeded("distance oracle packs qubits into 64-bit words")
    stab = [(_pack(p.x), _pack(p.z)) for p in code.stabilizers]
    logi = [(_pack(p.x), _pack(p.z)) for p in code.logical_x + code.logical_z]
    rows = stab + logi
    n_stab = len(stab)
    low_count = min(len(rows), 18)
    low, high = rows[:low_count], rows[low_count:]
    low_x, low_z = _enumerate_span(low)
    idx = np.arange(len(low_x), dtype=np.uint64)
    low_stab_bits = min(n_stab, low_count)
    low_has_logical = (idx >> np.uint64(low_stab_bits)) != 0
    best, best_op = None, None
    for h in range(2 ** len(high)):
        hx = hz = 0
        for t, (rx, rz) in enumerate(high):
            if (h >> t) & 1:
                hx ^= rx
                hz ^= rz
        # high rows are stabilizers only when n_stab > low_count
        n_high_stab = max(0, n_stab - low_count)
        high_has_logical = (h >> n_high_stab) != 0
        xs = low_x ^ np.uint64(hx)
        zs = low_z ^ np.uint64(hz)
        w = np.bitwise_count(xs | zs).astype(np.int64)
        if k == 0:
            mask = (idx != 0) | (h != 0)
        else:
            mask = low_has_logical | high_has_logical
        if not np.any(mask):
            continue
        w = np.where(mask, w, n + 1)
        j = int(np.argmin(w))
        if best is None or w[j] < best:
            best = int(w[j])
            xb, zb = int(xs[j]), int(zs[j])
            best_op = PauliOperator(np.array([(xb >> i) & 1 for i in range(n)], np.uint8),
                                    np.array([(zb >> i) & 1 for i in range(n)], np.uint8))
            best_op = best_op.with_phase(int(np.dot(best_op.x, best_op.z)))
    return (best if best is not None else 0), best_op


def min_distance(code: StabilizerCode, budget: int = 2 ** 24) -> int:
    return min_weight_logical(code, budget)[0]


__all__ = [
    "BudgetExceeded", "Gf2Matrix", "InvalidCode", "PauliOperator", "StabilizerCode",
    "check_matrix", "gf2", "in_rowspace", "kernel_basis", "min_distance",
    "min_weight_logical", "pauli_multiply", "rank", "replay_rowops", "rref",
    "same_rowspace", "solve", "symplectic_product",
]
