import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import circuit_dense, diagram_brute_force
from zxcodes.clifford import CliffordCircuit
from zxcodes.diagram import (GraphLikeDiagram, evaluate_dense, from_circuit, graph_state,
                             proportional, random_diagram)
from zxcodes.rewrite import (RewriteError, StepBudgetExceeded, boundary_pivot, format_strategy,
                             glc, local_complement, next_default_step, parse_strategy, pivot,
                             reduction_violations, remove_scalars, simplify, simplify_traced)

seeds = st.integers(0, 2 ** 32 - 1)


def diagram(seed, n_interior=4):
    rng = np.random.default_rng(seed)
    return random_diagram(rng, int(rng.integers(0, 3)), int(rng.integers(0, 3)), n_interior,
                          float(rng.uniform(0.3, 0.8)))


def same_map(before, after):
    a, b = diagram_brute_force(before), diagram_brute_force(after)
    if np.allclose(a, 0):
        return np.allclose(b, 0)
    return proportional(b, a)


def sites(d, kind):
    inner = set(d.interior())
    if kind == "lc":
        return [(v,) for v in sorted(inner) if d.phases[v] % 2 == 1]
    if kind == "pv":
        return [(u, v) for u, v in d.edges()
                if u in inner and v in inner and d.phases[u] % 2 == 0 and d.phases[v] % 2 == 0]
    return [(u, w) for u in sorted(inner) if d.phases[u] % 2 == 0
            for w in sorted(d.adj[u]) if w not in inner]


# -- the rules preserve the map ------------------------------------------------

@settings(max_examples=80, deadline=None)
@given(seeds)
def test_local_complement_preserves_map(seed):
    d = diagram(seed)
    for (v,) in sites(d, "lc"):
        after = local_complement(d.copy(), v)
        after.validate()
        assert v not in after.phases
        assert same_map(d, after)


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_pivot_preserves_map(seed):
    d = diagram(seed)
    for u, v in sites(d, "pv"):
        after = pivot(d.copy(), u, v)
        after.validate()
        assert after.num_interior() == d.num_interior() - 2
        assert same_map(d, after)


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_boundary_pivot_preserves_map(seed):
    d = diagram(seed)
    for u, w in sites(d, "pv2"):
        after = boundary_pivot(d.copy(), u, w)
        after.validate()
        assert after.num_interior() == d.num_interior() - 1
        assert len(after.inputs) == len(d.inputs) and len(after.outputs) == len(d.outputs)
        assert same_map(d, after)


def test_local_complement_on_a_star():
    # centre 0 with phase pi/2 joined to three leaves; the leaves become a triangle
    d = GraphLikeDiagram()
    c = d.add_vertex(1)
    leaves = [d.add_vertex() for _ in range(3)]
    for v in leaves:
        d.add_edge(c, v)
        d.add_output(v)
    after = local_complement(d.copy(), c)
    assert sorted(after.edges()) == [(1, 2), (1, 3), (2, 3)]
    assert all(after.phases[v] == 3 for v in leaves)
    assert same_map(d, after)


def test_pivot_phase_updates():
    d = GraphLikeDiagram()
    u, v = d.add_vertex(2), d.add_vertex(0)
    a, b, c = d.add_vertex(), d.add_vertex(), d.add_vertex()
    for x, y in [(u, v), (u, a), (v, b), (u, c), (v, c)]:
        d.add_edge(x, y)
    for x in (a, b, c):
        d.add_output(x)
    after = pivot(d.copy(), u, v)
    # a only next to u: gets v's phase; b gets u's phase; c gets both plus pi
    assert (after.phases[a], after.phases[b], after.phases[c]) == (0, 2, 0)
    assert {(a, b), (a, c), (b, c)} == set(after.edges())
    assert same_map(d, after)


@pytest.mark.parametrize("rule,args,phases", [
    (local_complement, (0,), (0, 0)),     # Pauli phase
    (pivot, (0, 1), (1, 0)),             # non-Pauli
    (local_complement, (1,), (1, 0)),     # boundary vertex
    (boundary_pivot, (0, 1), (1, 0)),     # non-Pauli
])
def test_preconditions(rule, args, phases):
    d = GraphLikeDiagram()
    u, w = d.add_vertex(phases[0]), d.add_vertex(phases[1])
    d.add_edge(u, w)
    d.add_output(w)
    with pytest.raises(RewriteError):
        rule(d, *args)


def test_pivot_needs_adjacent_pair():
    d = GraphLikeDiagram()
    u, v = d.add_vertex(), d.add_vertex()
    with pytest.raises(RewriteError):
        pivot(d, u, v)


def test_glc_toggles_and_rejects_overlap():
    d = graph_state(np.ones((3, 3)) - np.eye(3))
    glc(d, [0], [1, 2])
    assert d.edges() == [(1, 2)]
    with pytest.raises(RewriteError):
        glc(d, [0, 1], [1])


def test_isolated_pi_spider_zeroes_map():
    d = graph_state(np.zeros((1, 1)))
    d.add_vertex(2)
    v = d.add_vertex(1)
    removed = remove_scalars(d)
    assert len(removed) == 2 and v not in d.phases and d.is_zero
    assert not np.any(evaluate_dense(d))


# -- the simplifier --------------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(seeds)
def test_simplify_removes_interior_and_keeps_map(seed):
    rng = np.random.default_rng(seed)
    d = random_diagram(rng, int(rng.integers(0, 3)), int(rng.integers(0, 3)),
                       int(rng.integers(0, 7)), float(rng.uniform(0.1, 0.9)))
    result = simplify_traced(d)
    out = result.diagram
    assert out.num_interior() == 0 and not reduction_violations(out)
    assert len(result.trace) <= 10 * max(1, len(d.phases))
    assert same_map(d, out)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 30), seeds)
def test_simplify_circuits(n, depth, seed):
    c = CliffordCircuit.random(n, depth, np.random.default_rng(seed))
    out = simplify(from_circuit(c))
    assert out.num_interior() == 0
    assert proportional(evaluate_dense(out), circuit_dense(c))


def test_simplify_does_not_mutate_input():
    d = diagram(7, 5)
    before = d.to_json()
    simplify(d)
    assert d.to_json() == before


def test_default_strategy_prefers_lc_then_pv():
    d = GraphLikeDiagram()
    b = d.add_vertex()
    d.add_output(b)
    p, q, r = d.add_vertex(0), d.add_vertex(0), d.add_vertex(1)
    d.add_edge(b, p)
    d.add_edge(p, q)
    d.add_edge(b, r)
    assert next_default_step(d) == ("lc", r)
    local_complement(d, r)
    assert next_default_step(d) == ("pv", p, q)
    pivot(d, p, q)
    assert next_default_step(d) is None


def test_explicit_strategy_is_followed():
    d = GraphLikeDiagram()
    b = d.add_vertex()
    d.add_output(b)
    u, v = d.add_vertex(0), d.add_vertex(0)
    d.add_edge(b, u)
    d.add_edge(u, v)
    d.add_edge(v, b)
    result = simplify_traced(d, [("pv2", u, b)])
    assert result.trace[0] == ("pv2", u, b)
    assert result.diagram.num_interior() == 0
    assert same_map(d, result.diagram)


def test_bad_strategy_step_raises():
    d = diagram(3, 3)
    with pytest.raises(RewriteError):
        simplify_traced(d, [("lc", 9999)])


def test_step_budget():
    d = from_circuit(CliffordCircuit.random(3, 30, np.random.default_rng(5)))
    assert d.num_interior() > 2
    with pytest.raises(StepBudgetExceeded):
        simplify_traced(d, step_budget=1)


def test_strategy_text_round_trip():
    text = "# warm up\nlc 3\npv 4 5\n\npv2 6 0  # boundary\nauto\n"
    steps = parse_strategy(text)
    assert steps == [("lc", 3), ("pv", 4, 5), ("pv2", 6, 0), ("auto",)]
    assert parse_strategy(format_strategy(steps)) == steps
    assert parse_strategy("default") == [("auto",)]


@pytest.mark.parametrize("text", ["flip 3", "lc", "pv 1", "lc x"])
def test_strategy_parse_errors(text):
    with pytest.raises(ValueError):
        parse_strategy(text)
