"""Rewrite rules for graph-like Clifford diagrams and the simplifier.

Every rule is an exact identity up to a non-zero scalar.  Phase updates are
written in quarter turns (``2`` is a pi phase).  The rules are checked
against :func:`~zxcodes.diagram.evaluate_dense` by the test suite.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from .clifford import LocalClifford
from .diagram import GraphLikeDiagram, Wire

log = logging.getLogger(__name__)


class RewriteError(ValueError):
    """A rule was applied outside its precondition."""


class StepBudgetExceeded(RuntimeError):
    pass


def _is_pauli(d: GraphLikeDiagram, v: int) -> bool:
    return d.phases[v] % 2 == 0


def _require_interior(d: GraphLikeDiagram, *vs: int) -> None:
    for v in vs:
        if v not in d.phases:
            raise RewriteError(f"unknown vertex {v}")
        if d.is_boundary(v):
            raise RewriteError(f"vertex {v} is boundary-attached")


def local_complement(d: GraphLikeDiagram, v: int) -> GraphLikeDiagram:
    """Remove an interior ``+-pi/2`` spider by complementing its neighbourhood.

    Each neighbour picks up the opposite of ``v``'s phase.  Mutates ``d``.
    """
    _require_interior(d, v)
    p = d.phases[v]
    if p % 2 != 1:
        raise RewriteError(f"vertex {v} has phase {p}; need +-pi/2")
    nbrs = sorted(d.adj[v])
    for i, a in enumerate(nbrs):
        d.add_phase(a, -p)
        for b in nbrs[i + 1:]:
            d.toggle_edge(a, b)
    d.remove_vertex(v)
    return d


def _pivot_sets(d: GraphLikeDiagram, u: int, v: int):
    nu = d.adj[u] - {v}
    nv = d.adj[v] - {u}
    return sorted(nu - nv), sorted(nv - nu), sorted(nu & nv)


def _toggle_between(d: GraphLikeDiagram, xs: Sequence[int], ys: Sequence[int]) -> None:
    for a in xs:
        for b in ys:
            d.toggle_edge(a, b)


def pivot(d: GraphLikeDiagram, u: int, v: int) -> GraphLikeDiagram:
    """Remove an adjacent pair of interior Pauli spiders.

    With ``A`` the neighbours of ``u`` only, ``B`` those of ``v`` only and
    ``C`` the common ones, the edges between each pair of these sets are
    toggled; ``A`` picks up ``v``'s phase, ``B`` picks up ``u``'s phase and
    ``C`` picks up both plus an extra pi.  Mutates ``d``.
    """
    _require_interior(d, u, v)
    if not d.has_edge(u, v):
        raise RewriteError(f"vertices {u} and {v} are not adjacent")
    if not (_is_pauli(d, u) and _is_pauli(d, v)):
        raise RewriteError(f"vertices {u} and {v} must both have phase 0 or pi")
    a, b, c = _pivot_sets(d, u, v)
    pu, pv = d.phases[u], d.phases[v]
    _toggle_between(d, a, b)
    _toggle_between(d, a, c)
    _toggle_between(d, b, c)
    for x in a:
        d.add_phase(x, pv)
    for x in b:
        d.add_phase(x, pu)
    for x in c:
        d.add_phase(x, pu + pv + 2)
    d.remove_edge(u, v)
    d.remove_vertex(u)
    d.remove_vertex(v)
    return d


def boundary_pivot(d: GraphLikeDiagram, u: int, w: int) -> GraphLikeDiagram:
    """Remove an interior Pauli spider ``u`` next to a boundary spider ``w``.

    ``w`` is first split into a phase-free copy that keeps its edges, a
    fresh spider ``m`` and a phase-``alpha`` spider on the wire.  Pivoting
    ``u`` with the copy leaves ``m`` attached to the wire; the phase spider
    and the Hadamard between it and ``m`` move into the wire decoration.
    Mutates ``d``; ``m`` gets a new id.
    """
    _require_interior(d, u)
    if w not in d.phases:
        raise RewriteError(f"unknown vertex {w}")
    where = d.boundary_of(w)
    if where is None:
        raise RewriteError(f"vertex {w} is not boundary-attached")
    if not d.has_edge(u, w):
        raise RewriteError(f"vertices {u} and {w} are not adjacent")
    if not _is_pauli(d, u):
        raise RewriteError(f"vertex {u} must have phase 0 or pi")
    side, index = where
    wire: Wire = getattr(d, side)[index]
    alpha, pu = d.phases[w], d.phases[u]
    a, b, c = _pivot_sets(d, u, w)
    m = d.add_vertex(pu)
    b_new = b + [m]
    _toggle_between(d, a, b_new)
    _toggle_between(d, a, c)
    _toggle_between(d, b_new, c)
    for x in b:
        d.add_phase(x, pu)
    for x in c:
        d.add_phase(x, pu + 2)
    h = LocalClifford.from_word("H")
    ph = LocalClifford.phase(alpha)
    if side == "outputs":
        deco = h.then(ph).then(wire.clifford)
    else:
        deco = wire.clifford.then(ph).then(h)
    d.set_wire(side, index, Wire(m, deco))
    d.remove_vertex(u)
    d.remove_vertex(w)
    return d


def glc(d: GraphLikeDiagram, n1: Iterable[int], n2: Iterable[int]) -> GraphLikeDiagram:
    """Toggle every edge between the disjoint vertex sets ``n1`` and ``n2``."""
    s1, s2 = set(n1), set(n2)
    if s1 & s2:
        raise RewriteError(f"sets overlap on {sorted(s1 & s2)}")
    for v in s1 | s2:
        if v not in d.phases:
            raise RewriteError(f"unknown vertex {v}")
    _toggle_between(d, sorted(s1), sorted(s2))
    return d


def remove_scalars(d: GraphLikeDiagram) -> List[int]:
    """Delete isolated interior spiders; a phase-pi one makes the map zero."""
    gone = []
    for v in d.interior():
        if not d.adj[v]:
            if d.phases[v] == 2:
                d.is_zero = True
            d.remove_vertex(v)
            gone.append(v)
    return gone


# --------------------------------------------------------------------------
# Strategies

Step = Tuple  # ("lc", v) | ("pv", u, v) | ("pv2", u, w) | ("auto",)

_ARITY = {"lc": 1, "pv": 2, "pv2": 2, "auto": 0}


def parse_strategy(text: str) -> List[Step]:
    """Parse the line-oriented strategy format (``lc 7``, ``pv 3 12``, ...)."""
    steps: List[Step] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        rule = parts[0].lower()
        if rule == "default":
            rule = "auto"
        if rule not in _ARITY:
            raise ValueError(f"line {lineno}: unknown rule {parts[0]!r}")
        if len(parts) - 1 != _ARITY[rule]:
            raise ValueError(f"line {lineno}: {rule} takes {_ARITY[rule]} vertex ids")
        try:
            steps.append((rule, *(int(p) for p in parts[1:])))
        except ValueError:
            raise ValueError(f"line {lineno}: bad vertex id in {raw!r}") from None
    return steps


def format_strategy(steps: Sequence[Step]) -> str:
    return "".join(" ".join(map(str, s)) + "\n" for s in steps)


def apply_step(d: GraphLikeDiagram, step: Step) -> GraphLikeDiagram:
    rule = step[0]
    if rule == "lc":
        return local_complement(d, step[1])
    if rule == "pv":
        return pivot(d, step[1], step[2])
    if rule == "pv2":
        return boundary_pivot(d, step[1], step[2])
    raise RewriteError(f"unknown rule {rule!r}")


def next_default_step(d: GraphLikeDiagram) -> Optional[Step]:
    """The step the default strategy would take next, or ``None`` at a fixpoint."""
    interior = d.interior()
    inner = set(interior)
    for v in interior:
        if d.phases[v] % 2 == 1:
            return ("lc", v)
    for u in interior:
        if _is_pauli(d, u):
            for v in sorted(d.adj[u]):
                if v > u and v in inner and _is_pauli(d, v):
                    return ("pv", u, v)
    for u in interior:
        if _is_pauli(d, u):
            for w in sorted(d.adj[u]):
                if w not in inner:
                    return ("pv2", u, w)
    return None


@dataclass
class SimplifyResult:
    diagram: GraphLikeDiagram
    trace: List[Step] = field(default_factory=list)


def simplify_traced(d: GraphLikeDiagram, strategy: Union[None, str, Sequence[Step]] = None,
                    step_budget: Optional[int] = None) -> SimplifyResult:
    """Rewrite until no interior spiders remain.

    ``strategy`` steps are applied first (``("auto",)`` runs the default
    strategy to its fixpoint at that point); the default strategy then
    finishes.  The default strategy takes ``lc`` at the lowest id, else the
    lexicographically smallest ``pv`` pair, else the smallest ``pv2`` pair.
    Every accepted step removes at least one interior spider.
    """
    d = d.copy()
    if isinstance(strategy, str):
        strategy = [("auto",)] if strategy.strip() in ("auto", "default") else parse_strategy(strategy)
    steps = list(strategy or [])
    if step_budget is None:
        step_budget = 10 * max(1, len(d.phases))
    trace: List[Step] = []

    def run_default() -> None:
        while True:
            remove_scalars(d)
            step = next_default_step(d)
            if step is None:
                return
            take(step)

    def take(step: Step) -> None:
        if len(trace) >= step_budget:
            raise StepBudgetExceeded(f"step budget {step_budget} exhausted")
        before = d.num_interior()
        apply_step(d, step)
        if d.num_interior() >= before:
            raise AssertionError(f"{step} did not reduce the interior")
        trace.append(step)
        log.debug("applied %s, %d interior left", step, d.num_interior())

    for step in steps:
        if step[0] == "auto":
            run_default()
        else:
            take(tuple(step))
            remove_scalars(d)
    run_default()
    return SimplifyResult(d, trace)


def simplify(d: GraphLikeDiagram, strategy: Union[None, str, Sequence[Step]] = None,
             step_budget: Optional[int] = None) -> GraphLikeDiagram:
    """Return a copy of ``d`` with every interior spider rewritten away."""
    return simplify_traced(d, strategy, step_budget).diagram


def reduction_violations(d: GraphLikeDiagram) -> List[str]:
    """Reasons ``d`` is not fully reduced; empty when it is."""
    out = []
    inner = set(d.interior())
    for v in sorted(inner):
        if d.phases[v] % 2 == 1:
            out.append(f"interior proper Clifford spider {v}")
        elif any(w in inner and _is_pauli(d, w) for w in d.adj[v]):
            out.append(f"interior Pauli pair at {v}")
        elif any(w not in inner for w in d.adj[v]):
            out.append(f"interior Pauli {v} next to a boundary spider")
        else:
            out.append(f"interior spider {v}")
    return out


__all__ = [
    "RewriteError", "SimplifyResult", "StepBudgetExceeded", "apply_step", "boundary_pivot",
    "format_strategy", "glc", "local_complement", "next_default_step", "parse_strategy",
    "pivot", "reduction_violations", "remove_scalars", "simplify", "simplify_traced",
]
