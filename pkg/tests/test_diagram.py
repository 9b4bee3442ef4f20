import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import H, circuit_dense, diagram_brute_force, graph_state as dense_graph_state
from oracles import kron_all, proportional as oracle_proportional
from zxcodes.clifford import CliffordCircuit, LocalClifford
from zxcodes.diagram import (GraphLikeDiagram, GraphLikeError, OracleBudgetExceeded, Wire,
                             bend_to_map, bend_to_state, compose, cup, evaluate_dense,
                             from_circuit, graph_state, join, plug_input, plug_output,
                             proportional, random_diagram, relabel, tensor)

seeds = st.integers(0, 2 ** 32 - 1)


def small_diagram(seed, max_in=2, max_out=2, max_interior=4):
    rng = np.random.default_rng(seed)
    return random_diagram(rng, int(rng.integers(0, max_in + 1)), int(rng.integers(0, max_out + 1)),
                          int(rng.integers(0, max_interior + 1)), float(rng.uniform(0.2, 0.7)))


# -- structure ---------------------------------------------------------------

def test_edges_are_simple_and_symmetric():
    d = GraphLikeDiagram()
    a, b = d.add_vertex(), d.add_vertex(1)
    d.add_edge(a, b)
    assert d.has_edge(b, a) and d.edges() == [(a, b)]
    with pytest.raises(GraphLikeError):
        d.add_edge(a, b)
    with pytest.raises(GraphLikeError):
        d.add_edge(a, a)
    d.toggle_edge(a, b)
    assert d.num_edges() == 0


def test_one_wire_per_vertex():
    d = GraphLikeDiagram()
    v = d.add_vertex()
    d.add_input(v)
    with pytest.raises(GraphLikeError):
        d.add_output(v)


def test_boundary_vertex_cannot_be_removed():
    d = GraphLikeDiagram()
    v = d.add_vertex()
    d.add_output(v)
    with pytest.raises(GraphLikeError):
        d.remove_vertex(v)


def test_phases_wrap_mod_four():
    d = GraphLikeDiagram()
    v = d.add_vertex(3)
    d.add_phase(v, 3)
    assert d.phases[v] == 2


def test_interior_and_boundary():
    d = graph_state([[0, 1], [1, 0]])
    v = d.add_vertex(2)
    assert d.interior() == [v] and d.num_interior() == 1
    assert d.boundary_of(0) == ("outputs", 0) and d.boundary_of(v) is None


@pytest.mark.parametrize("patch", [
    {"vertices": [{"id": 0, "phase": 0.5}]},
    {"edges": [[0, 0]]},
    {"edges": [[0, 1], [1, 0]]},
    {"outputs": [{"wire": 0, "vertex": 9, "clifford": ""}]},
    {"inputs": [{"wire": 0, "vertex": 0, "clifford": ""}]},
    {"version": 99},
])
def test_from_dict_rejects_malformed(patch):
    base = graph_state([[0, 1], [1, 0]]).to_dict()
    base.update(patch)
    with pytest.raises((GraphLikeError, ValueError)):
        GraphLikeDiagram.from_dict(base)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_json_round_trip(seed):
    d = small_diagram(seed)
    back = GraphLikeDiagram.from_json(d.to_json())
    assert back.structurally_equal(d)
    assert json.loads(back.to_json()) == json.loads(d.to_json())


def test_dot_mentions_every_vertex_and_wire():
    d = small_diagram(3, 2, 2, 3)
    dot = d.to_dot()
    assert dot.startswith("graph")
    for v in d.vertices:
        assert f"v{v} " in dot
    assert dot.count("in") >= len(d.inputs)


# -- dense evaluation --------------------------------------------------------

def wire_through(phase=0, cin=LocalClifford(0), cout=LocalClifford(0)):
    """Input spider, Hadamard edge, output spider: the map is ``H P(phase)``."""
    d = GraphLikeDiagram()
    a, b = d.add_vertex(phase), d.add_vertex()
    d.add_edge(a, b)
    d.add_input(a, cin)
    d.add_output(b, cout)
    return d


def test_phase_then_hadamard():
    assert proportional(evaluate_dense(wire_through(1)), H @ np.diag([1, 1j]))


def test_hadamard_edge_between_two_wires():
    d = GraphLikeDiagram()
    a, b = d.add_vertex(), d.add_vertex()
    d.add_edge(a, b)
    d.add_input(a)
    d.add_output(b)
    assert proportional(evaluate_dense(d), H)


def test_graph_state_diagram():
    adj = np.array([[0, 1, 1], [1, 0, 0], [1, 0, 0]])
    psi = evaluate_dense(graph_state(adj)).reshape(-1)
    assert oracle_proportional(psi, dense_graph_state(adj))


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_dense_matches_brute_force(seed):
    d = small_diagram(seed, 2, 2, 5)
    assert np.allclose(evaluate_dense(d), diagram_brute_force(d))


def test_zero_flag_gives_zero_map():
    d = small_diagram(1)
    d.is_zero = True
    assert not np.any(evaluate_dense(d))


def test_dense_budget():
    d = graph_state(np.zeros((5, 5)))
    with pytest.raises(OracleBudgetExceeded):
        evaluate_dense(d, max_legs=4)


def test_proportional():
    a = np.array([[1, 2], [3, 4]], dtype=complex)
    assert proportional(1j * a, a) and not proportional(a, a.T)
    assert not proportional(a, np.zeros_like(a))
    assert proportional(np.zeros(3), np.zeros(3))


# -- circuit ingestion -------------------------------------------------------

@pytest.mark.parametrize("gates,n", [
    ([], 1), ([("H", 0)], 1), ([("S", 0), ("H", 0), ("Sdg", 0)], 1),
    ([("CX", 0, 1)], 2), ([("CX", 1, 0)], 2), ([("CZ", 0, 1), ("H", 1)], 2),
    ([("X", 0), ("Z", 1), ("CX", 0, 2), ("H", 2)], 3),
])
def test_from_circuit_small(gates, n):
    c = CliffordCircuit(n, gates)
    d = from_circuit(c)
    d.validate()
    assert proportional(evaluate_dense(d), circuit_dense(c))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 20), seeds)
def test_from_circuit_random(n, depth, seed):
    c = CliffordCircuit.random(n, depth, np.random.default_rng(seed))
    d = from_circuit(c)
    d.validate()
    assert len(d.inputs) == len(d.outputs) == n
    assert proportional(evaluate_dense(d), circuit_dense(c))


# -- wiring ------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(seeds, seeds)
def test_tensor_is_kron(s1, s2):
    a, b = small_diagram(s1), small_diagram(s2)
    d, _ = tensor(a, b)
    d.validate()
    assert proportional(evaluate_dense(d), np.kron(evaluate_dense(a), evaluate_dense(b)))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), seeds, seeds)
def test_compose_is_matrix_product(k, s1, s2):
    rng1, rng2 = np.random.default_rng(s1), np.random.default_rng(s2)
    a = random_diagram(rng1, int(rng1.integers(0, 3)), k, int(rng1.integers(0, 4)), 0.5)
    b = random_diagram(rng2, k, int(rng2.integers(0, 3)), int(rng2.integers(0, 4)), 0.5)
    d = compose(a, b)
    d.validate()
    expected = evaluate_dense(b) @ evaluate_dense(a)
    assert np.allclose(expected, 0) or proportional(evaluate_dense(d), expected)


def test_compose_arity_mismatch():
    with pytest.raises(ValueError):
        compose(graph_state(np.zeros((2, 2))), graph_state(np.zeros((1, 1))))


def test_join_same_spider_rejected():
    d = GraphLikeDiagram()
    v = d.add_vertex()
    d.inputs.append(Wire(v))
    d.outputs.append(Wire(v))
    with pytest.raises(GraphLikeError):
        join(d, 0, 0)


def test_join_feeds_output_into_input():
    d, _ = tensor(wire_through(1), wire_through(2))
    join(d, 0, 1)
    d.validate()
    expected = H @ np.diag([1, -1]) @ H @ np.diag([1, 1j])
    assert proportional(evaluate_dense(d), expected)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_cup_is_bell_effect(seed):
    rng = np.random.default_rng(seed)
    n_out = int(rng.integers(2, 5))
    d = random_diagram(rng, 0, n_out, int(rng.integers(0, 4)), 0.5)
    i, j = rng.choice(n_out, size=2, replace=False)
    psi = evaluate_dense(d).reshape([2] * n_out)
    expected = np.trace(psi, axis1=int(i), axis2=int(j)).reshape(-1, 1)
    got = evaluate_dense(cup(d.copy(), int(i), int(j)))
    assert np.allclose(expected, 0) or proportional(got, expected)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_bend_then_unbend_is_identity(seed):
    d = small_diagram(seed, 3, 3, 3)
    k = len(d.inputs)
    back = bend_to_map(bend_to_state(d), k)
    assert np.allclose(evaluate_dense(back), evaluate_dense(d))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_bent_state_is_choi_vector(seed):
    d = small_diagram(seed, 2, 2, 3)
    m = evaluate_dense(d)
    n_in, n_out = len(d.inputs), len(d.outputs)
    # sum_x |x> (M|x>): input index first
    expected = m.T.reshape(-1)
    got = evaluate_dense(bend_to_state(d)).reshape(-1)
    assert len(bend_to_state(d).outputs) == n_in + n_out
    # decorations are Cliffords up to phase, so the scalar may differ
    assert proportional(got, expected)


def test_bend_to_map_range():
    with pytest.raises(ValueError):
        bend_to_map(graph_state(np.zeros((2, 2))), 3)


STATES = {"0": [1, 0], "1": [0, 1], "+": [1, 1], "-": [1, -1], "+i": [1, 1j], "-i": [1, -1j]}


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from(sorted(STATES)))
def test_plug_input(seed, state):
    rng = np.random.default_rng(seed)
    d = random_diagram(rng, int(rng.integers(1, 3)), int(rng.integers(0, 3)), 2, 0.5)
    i = int(rng.integers(len(d.inputs)))
    m = evaluate_dense(d)
    n_in = len(d.inputs)
    vec = kron_all([np.eye(2)] * i + [np.array(STATES[state]).reshape(2, 1)]
                   + [np.eye(2)] * (n_in - i - 1))
    expected = m @ vec
    got = evaluate_dense(plug_input(d.copy(), i, state))
    assert np.allclose(expected, 0) or proportional(got, expected)


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from(sorted(STATES)))
def test_plug_output(seed, effect):
    rng = np.random.default_rng(seed)
    d = random_diagram(rng, int(rng.integers(0, 3)), int(rng.integers(1, 3)), 2, 0.5)
    i = int(rng.integers(len(d.outputs)))
    n_out = len(d.outputs)
    bra = np.array(STATES[effect]).conj().reshape(1, 2)
    proj = kron_all([np.eye(2)] * i + [bra] + [np.eye(2)] * (n_out - i - 1))
    expected = proj @ evaluate_dense(d)
    got = evaluate_dense(plug_output(d.copy(), i, effect))
    assert np.allclose(expected, 0) or proportional(got, expected)


@settings(max_examples=30, deadline=None)
@given(seeds, st.data())
def test_relabel_preserves_map(seed, data):
    d = small_diagram(seed)
    vs = d.vertices
    perm = dict(zip(vs, data.draw(st.permutations([v + 100 for v in vs]))))
    r = relabel(d, perm)
    r.validate()
    assert np.allclose(evaluate_dense(r), evaluate_dense(d))


def test_wire_decorations_compose_in_time_order():
    d = wire_through(0, LocalClifford.from_word("HS"), LocalClifford.from_word("SH"))
    s = LocalClifford.from_word("S").matrix
    # the input word runs before the spiders, the output word after
    expected = H @ s @ H @ s @ H
    assert proportional(evaluate_dense(d), expected)
