import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import pauli_dense, pauli_from_label
from zxcodes.compose import catalog, five_one_three, steane_stabilizers
from zxcodes.encoder import encoder_from_graph_code, extract_code
from zxcodes.symplectic import (BudgetExceeded, InvalidCode, PauliOperator, StabilizerCode,
                                gf2, in_rowspace, kernel_basis, min_distance,
                                min_weight_logical, pauli_multiply, rank, replay_rowops, rref,
                                same_rowspace, solve, symplectic_product)


def P(label):
    return PauliOperator.from_label(label)


def paulis(n):
    return st.builds(
        lambda x, z, ph: PauliOperator(np.array(x, np.uint8), np.array(z, np.uint8), ph),
        st.lists(st.integers(0, 1), min_size=n, max_size=n),
        st.lists(st.integers(0, 1), min_size=n, max_size=n),
        st.integers(0, 3),
    )


def all_paulis(n):
    for bits in itertools.product((0, 1), repeat=2 * n):
        yield PauliOperator(np.array(bits[:n]), np.array(bits[n:]))


# -- symplectic product -----------------------------------------------------

def test_x_and_z_anticommute():
    assert symplectic_product(P("X"), P("Z")) == 1


def test_self_commutes():
    for p in all_paulis(2):
        assert symplectic_product(p, p) == 0


def test_five_qubit_generators_commute():
    assert symplectic_product(P("XZZXI"), P("IXZZX")) == 0


def test_symplectic_product_length_mismatch():
    with pytest.raises(ValueError):
        symplectic_product(P("X"), P("XX"))


def test_commutation_matches_dense_exhaustive():
    for n in (1, 2, 3):
        ops = list(all_paulis(n))
        mats = [pauli_dense(p) for p in ops]
        for p, a in zip(ops, mats):
            for q, b in zip(ops, mats):
                commute = np.allclose(a @ b, b @ a)
                assert symplectic_product(p, q) == (0 if commute else 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 8).flatmap(lambda n: st.tuples(paulis(n), paulis(n))))
def test_commutation_matches_dense_random(pair):
    p, q = pair
    a, b = pauli_dense(p), pauli_dense(q)
    assert symplectic_product(p, q) == (0 if np.allclose(a @ b, b @ a) else 1)


# -- multiplication -----------------------------------------------------------

def test_x_times_z_convention():
    xz = pauli_multiply(P("X"), P("Z"))
    assert list(xz.x) == [1] and list(xz.z) == [1] and xz.phase == 0
    # XZ = -iY
    assert np.allclose(pauli_dense(xz), -1j * pauli_from_label("Y"))


def test_times_identity():
    p = P("-iXYZ")
    assert pauli_multiply(p, PauliOperator.identity(3)) == p


def test_square_is_signed_identity():
    for p in all_paulis(2):
        sq = pauli_multiply(p, p)
        assert sq.weight == 0
        assert np.allclose(pauli_dense(sq), pauli_dense(p) @ pauli_dense(p))


def test_multiply_matches_dense_exhaustive():
    for n in (1, 2, 3):
        ops = list(all_paulis(n))
        for p in ops:
            for q in ops:
                p2 = p.with_phase(int(p.x.sum() + 2 * q.z.sum()) % 4)
                r = pauli_multiply(p2, q)
                assert np.allclose(pauli_dense(r), pauli_dense(p2) @ pauli_dense(q))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.tuples(paulis(n), paulis(n), paulis(n))))
def test_multiply_associative(triple):
    a, b, c = triple
    assert pauli_multiply(pauli_multiply(a, b), c) == pauli_multiply(a, pauli_multiply(b, c))


def test_multiply_length_mismatch():
    with pytest.raises(ValueError):
        pauli_multiply(P("X"), P("XX"))


def test_label_round_trip_and_dense():
    for label in ["+XYZ", "-IZY", "+iXX", "-iYYI"]:
        p = P(label)
        assert p.to_label() == label
        assert np.allclose(pauli_dense(p), pauli_from_label(label))


def test_sign_and_hermitian():
    assert P("Y").is_hermitian() and P("Y").sign == 1
    assert P("-XZ").sign == -1
    assert not P("iX").is_hermitian()


def test_pauli_dict_round_trip():
    p = P("-XYZI")
    assert PauliOperator.from_dict(p.to_dict()) == p


# -- GF(2) linear algebra -----------------------------------------------------

def test_rref_identity():
    red, piv, ops = rref(np.eye(4, dtype=np.uint8))
    assert np.array_equal(red, np.eye(4)) and piv == [0, 1, 2, 3] and ops == []


def test_rref_duplicate_rows():
    red, piv, _ = rref([[1, 1], [1, 1]])
    assert red.tolist() == [[1, 1], [0, 0]] and piv == [0]


def test_rref_standard_form_unchanged():
    m = np.array([[1, 0, 1, 1, 0], [0, 1, 0, 1, 1]], dtype=np.uint8)
    red, piv, _ = rref(m)
    assert np.array_equal(red, m) and piv == [0, 1]


def _is_rref(m, pivots):
    for r, p in enumerate(pivots):
        if m[r, p] != 1 or m[:, p].sum() != 1 or m[r, :p].any():
            return False
    return not m[len(pivots):].any() and pivots == sorted(pivots)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 7), st.integers(1, 9), st.data())
def test_rref_replay_and_rank(rows, cols, data):
    m = np.array(data.draw(st.lists(st.lists(st.integers(0, 1), min_size=cols, max_size=cols),
                                     min_size=rows, max_size=rows)), dtype=np.uint8)
    red, piv, ops = rref(m)
    assert _is_rref(red, piv)
    assert np.array_equal(replay_rowops(m, ops), red)
    assert rank(m) == len(piv)
    perm = data.draw(st.permutations(range(rows)))
    assert rank(m[list(perm)]) == rank(m)


def test_kernel_of_identity_is_empty():
    assert kernel_basis(np.eye(3, dtype=np.uint8)).shape == (0, 3)


def test_kernel_of_zero_is_identity():
    assert np.array_equal(kernel_basis(np.zeros((2, 3), np.uint8)), np.eye(3))


def test_kernel_of_standard_form():
    m = np.array([[1, 1, 0, 1], [0, 1, 1, 1]], dtype=np.uint8)
    full = np.hstack([np.eye(2, dtype=np.uint8), m])
    kb = kernel_basis(full)
    assert np.array_equal(kb, np.hstack([m.T, np.eye(4, dtype=np.uint8)]))
    assert not (full @ kb.T % 2).any()


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 6), st.integers(1, 8), st.data())
def test_kernel_property(rows, cols, data):
    m = np.array(data.draw(st.lists(st.lists(st.integers(0, 1), min_size=cols, max_size=cols),
                                     min_size=rows, max_size=rows)), dtype=np.uint8)
    kb = kernel_basis(m)
    assert not (m @ kb.T % 2).any()
    assert len(kb) + rank(m) == cols
    assert rank(kb) == len(kb)


def test_solve_and_rowspace():
    m = gf2([[1, 1, 0], [0, 1, 1]])
    w = solve(m, [1, 0])
    assert np.array_equal(m @ w % 2, [1, 0])
    assert solve(gf2([[1, 1], [1, 1]]), [1, 0]) is None
    assert in_rowspace([1, 0, 1], m) and not in_rowspace([1, 0, 0], m)
    assert same_rowspace(m, gf2([[1, 0, 1], [0, 1, 1]]))


# -- codes and distance -------------------------------------------------------

FIVE = StabilizerCode.from_labels(["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"], ["XXXXX"], ["ZZZZZ"])


def test_five_qubit_code_is_valid_with_distance_3():
    FIVE.validate()
    assert min_distance(FIVE) == 3


def test_five_qubit_graph_code_distance_3():
    assert min_distance(extract_code(encoder_from_graph_code(five_one_three()))) == 3


def test_steane_distance_3():
    assert min_distance(steane_stabilizers()) == 3


def test_repetition_distance_1():
    code = extract_code(catalog("repetition(3)"))
    assert (code.n, code.k) == (3, 1) and min_distance(code) == 1


def test_distance_witness_is_a_logical():
    d, op = min_weight_logical(FIVE)
    assert op.weight == d
    assert all(symplectic_product(op, s) == 0 for s in FIVE.stabilizers)
    assert not in_rowspace(op.vector, FIVE.check_matrix())


def test_distance_of_a_state_uses_stabilizer_weights():
    code = StabilizerCode.from_labels(["XZ", "ZX"])
    assert code.k == 0 and min_distance(code) == 2


@settings(max_examples=10, deadline=None)
@given(st.permutations(range(7)))
def test_distance_is_permutation_invariant(perm):
    assert min_distance(steane_stabilizers().permuted(list(perm))) == 3


def test_distance_budget():
    with pytest.raises(BudgetExceeded):
        min_distance(steane_stabilizers(), budget=2 ** 6)


def test_code_json_round_trip():
    assert StabilizerCode.from_json(FIVE.to_json()) == FIVE


@pytest.mark.parametrize("stabs,lx,lz", [
    (["XX", "ZI"], [], []),                 # anticommuting stabilizers
    (["XXI", "XXI"], ["ZZZ"], ["XII"]),     # dependent generators
    (["XXI", "IXX"], ["ZZZ"], ["ZII"]),     # logicals commute with each other
    (["iXXI", "IXX"], ["ZZZ"], ["XII"]),    # non-Hermitian generator
])
def test_invalid_codes_rejected(stabs, lx, lz):
    with pytest.raises(InvalidCode):
        StabilizerCode.from_labels(stabs, lx, lz).validate()
