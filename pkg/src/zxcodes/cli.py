"""Command-line interface: ``zxcodes <verb> ...``.

Artifacts go to standard output (or ``-o FILE``); logs go to standard error.
Exit codes: 0 success, 1 domain error, 2 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import compose, encoder, rewrite
from .clifford import CliffordCircuit
from .diagram import GraphLikeDiagram, OracleBudgetExceeded, from_circuit
from .symplectic import BudgetExceeded, InvalidCode, StabilizerCode, min_weight_logical
from .verify import soundness_sweep, verify_encoder

log = logging.getLogger("zxcodes")

DOMAIN_ERRORS = (encoder.InvalidEncoder, InvalidCode, rewrite.RewriteError,
                 rewrite.StepBudgetExceeded, compose.GLCFailure, BudgetExceeded,
                 OracleBudgetExceeded)


class InputError(Exception):
    """Unreadable or malformed input; maps to exit code 2."""


def _read(path: Optional[str]) -> str:
    try:
        if path in (None, "-"):
            return sys.stdin.read()
        return Path(path).read_text()
    except OSError as err:
        raise InputError(str(err)) from err


def _write(text: str, path: Optional[str]) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as err:
        raise InputError(str(err)) from err


def _parse(text: str):
    """A diagram, a graph code or a stabilizer code from JSON."""
    try:
        data = json.loads(text)
        if "vertices" in data:
            return GraphLikeDiagram.from_dict(data)
        if "stabilizers" in data:
            return StabilizerCode.from_dict(data)
        if "G" in data:
            return encoder.GraphCode.from_dict(data)
    except (ValueError, KeyError, TypeError) as err:
        raise InputError(f"cannot parse input: {err}") from err
    raise InputError("input is not a diagram, graph code or stabilizer code")


def _load_encoder(path: Optional[str], strategy=None) -> encoder.EncoderDiagram:
    obj = _load_any(path)
    if isinstance(obj, GraphLikeDiagram):
        return encoder.EncoderDiagram.from_diagram(obj, strategy)
    return compose.as_encoder(obj)


def _load_any(path: Optional[str]):
    """``path`` may also name a catalog entry."""
    if path not in (None, "-") and not Path(path).exists():
        try:
            return compose.catalog(path)
        except KeyError:
            raise InputError(f"{path}: no such file or catalog entry") from None
    return _parse(_read(path))


def _strategy(arg: Optional[str]):
    if arg is None or arg in ("auto", "default"):
        return None
    try:
        return rewrite.parse_strategy(_read(arg))
    except ValueError as err:
        raise InputError(f"strategy file: {err}") from err


def _ref(ref: str) -> encoder.EncoderDiagram:
    try:
        return compose.resolve_ref(ref)
    except KeyError as err:
        raise InputError(str(err)) from err
    except (OSError, json.JSONDecodeError) as err:
        raise InputError(f"{ref}: {err}") from err


# --------------------------------------------------------------------------
# Verbs


def cmd_build(args) -> int:
    if args.circuit:
        try:
            circuit = CliffordCircuit.from_text(_read(args.circuit))
        except ValueError as err:
            raise InputError(f"circuit: {err}") from err
        if args.data is None:
            d = from_circuit(circuit)
            _write(d.to_json() + "\n", args.output)
            return 0
        data = [int(q) for q in args.data.split(",") if q.strip()]
        e = encoder.encoder_from_circuit(circuit, data, _strategy(args.strategy))
    else:
        obj = _load_any(args.input)
        if isinstance(obj, GraphLikeDiagram):
            _write(obj.to_json() + "\n", args.output)
            return 0
        e = compose.as_encoder(obj)
    _write(e.to_json() + "\n", args.output)
    return 0


def cmd_simplify(args) -> int:
    d = _load_any(args.input)
    if not isinstance(d, GraphLikeDiagram):
        d = compose.as_encoder(d).diagram
    result = rewrite.simplify_traced(d, _strategy(args.strategy), args.budget)
    for step in result.trace:
        log.info("step %s", " ".join(map(str, step)))
    log.info("%d steps, %d interior spiders left", len(result.trace),
             result.diagram.num_interior())
    _write(result.diagram.to_json() + "\n", args.output)
    return 0


def cmd_concat(args) -> int:
    strategy = _strategy(args.strategy)
    if args.plan:
        try:
            data = json.loads(_read(args.plan))
        except json.JSONDecodeError as err:
            raise InputError(f"plan: {err}") from err
        e = compose.run_plan(data, Path(args.plan).parent, strategy)
    else:
        if not (args.outer and args.inner):
            raise InputError("concat needs --plan or both --outer and --inner")
        outer, inner = _ref(args.outer), _ref(args.inner)
        basis = compose.resolve_basis(args.basis, inner.k)
        if args.glc:
            e = compose.glc_concatenate(outer.standard_form(), inner.standard_form())
        else:
            e = compose.concatenate(compose.ConcatenationPlan.uniform(outer, inner, basis), strategy)
    log.info("concatenated encoder: k=%d n=%d valid=%s", e.k, e.n, encoder.validate(e))
    _write(e.to_json() + "\n", args.output)
    return 0


def cmd_contract(args) -> int:
    strategy = _strategy(args.strategy)
    if args.plan:
        try:
            data = json.loads(_read(args.plan))
        except json.JSONDecodeError as err:
            raise InputError(f"plan: {err}") from err
        e = compose.run_plan(data, Path(args.plan).parent, strategy)
    else:
        if len(args.legs) != 4:
            raise InputError("contract needs --plan or REF LEG REF LEG")
        a, i, b, j = args.legs
        try:
            i, j = int(i), int(j)
        except ValueError:
            raise InputError("legs must be integers") from None
        ea = _ref(a)
        e = compose.self_contract(ea, i, j, strategy) if a == b else \
            compose.contract(ea, i, _ref(b), j, strategy)
    valid = encoder.validate(e)
    log.info("contracted encoder: k=%d n=%d valid=%s", e.k, e.n, valid)
    _write(e.to_json() + "\n", args.output)
    return 0


def cmd_extract_stabilizers(args) -> int:
    e = _load_encoder(args.input, _strategy(args.strategy))
    _write(encoder.extract_code(e).to_json() + "\n", args.output)
    return 0


def cmd_extract_circuit(args) -> int:
    e = _load_encoder(args.input, _strategy(args.strategy))
    circuit, ancillas = encoder.extract_circuit(e)
    header = (f"# data qubits 0..{e.k - 1}; {ancillas} ancillas start in |0>\n"
              if e.k else f"# {ancillas} qubits start in |0>\n")
    _write(header + circuit.to_text(), args.output)
    return 0


def cmd_validate(args) -> int:
    e = _load_encoder(args.input, _strategy(args.strategy))
    ok = encoder.validate(e)
    _write(f"{'valid' if ok else 'invalid'} k={e.k} n={e.n}\n", args.output)
    return 0 if ok else 1


def cmd_distance(args) -> int:
    obj = _load_any(args.input)
    code = obj if isinstance(obj, StabilizerCode) else encoder.extract_code(_as_encoder(obj, args))
    d, op = min_weight_logical(code, args.budget or 2 ** 24)
    _write(f"n={code.n} k={code.k} d={d}\n" + (f"witness {op.to_label()}\n" if op else ""),
           args.output)
    return 0


def _as_encoder(obj, args) -> encoder.EncoderDiagram:
    if isinstance(obj, GraphLikeDiagram):
        return encoder.EncoderDiagram.from_diagram(obj, _strategy(args.strategy))
    return compose.as_encoder(obj)


def cmd_verify(args) -> int:
    if args.target == "random-circuits":
        checks = soundness_sweep(args.count, args.seed if args.seed is not None else 0,
                                 tol=args.tol)
    else:
        obj = _load_any(args.target)
        checks = verify_encoder(_as_encoder(obj, args), args.tol, args.budget or 16)
    for c in checks:
        print(c.line())
    return 0 if all(c.passed for c in checks) else 1


def cmd_export_dot(args) -> int:
    obj = _load_any(args.input)
    d = obj if isinstance(obj, GraphLikeDiagram) else compose.as_encoder(obj).diagram
    _write(d.to_dot(), args.output)
    return 0


def cmd_catalog(args) -> int:
    if args.list or not args.name:
        _write("\n".join(compose.CATALOG_NAMES) + "\n", args.output)
        return 0
    try:
        obj = compose.catalog(args.name)
    except KeyError as err:
        raise InputError(str(err.args[0])) from err
    if isinstance(obj, StabilizerCode):
        _write(obj.to_json() + "\n", args.output)
    else:
        _write(compose.as_encoder(obj).to_json() + "\n", args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zxcodes", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, func, help, input=True):
        sp = sub.add_parser(name, help=help)
        if input:
            sp.add_argument("input", nargs="?", help="JSON file or catalog name (default stdin)")
        sp.add_argument("-o", "--output", help="write the artifact here instead of stdout")
        sp.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS,
                        help="log progress to stderr")
        sp.add_argument("--strategy", help="strategy file, or 'auto'")
        sp.add_argument("--tol", type=float, default=1e-9)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--budget", type=int, help="step or enumeration cap")
        sp.set_defaults(func=func)
        return sp

    b = verb("build", cmd_build, "build a diagram or encoder")
    b.add_argument("--circuit", help="circuit text file")
    b.add_argument("--data", help="comma-separated data qubits; the rest start in |0>")
    verb("simplify", cmd_simplify, "rewrite away interior spiders")
    c = verb("concat", cmd_concat, "concatenate encoders", input=False)
    c.add_argument("--plan", help="JSON plan {outer, inners, basis_changes}")
    c.add_argument("--outer")
    c.add_argument("--inner")
    c.add_argument("--basis", default=None, help="H, I, or a circuit file")
    c.add_argument("--glc", action="store_true", help="use the GLC fast path (H basis)")
    k = verb("contract", cmd_contract, "contract encoder legs", input=False)
    k.add_argument("--plan", help="JSON plan {contractions: [[ref, leg, ref, leg], ...]}")
    k.add_argument("legs", nargs="*", metavar="REF LEG REF LEG")
    verb("extract-stabilizers", cmd_extract_stabilizers, "stabilizer code of an encoder")
    verb("extract-circuit", cmd_extract_circuit, "encoding circuit of an encoder")
    verb("validate", cmd_validate, "check rank(Gamma) = k < n")
    verb("distance", cmd_distance, "minimum distance by enumeration")
    v = verb("verify", cmd_verify, "run the dense oracle suite", input=False)
    v.add_argument("target", help="catalog name, JSON file, or 'random-circuits'")
    v.add_argument("--count", type=int, default=100)
    verb("export-dot", cmd_export_dot, "Graphviz DOT text")
    g = verb("catalog", cmd_catalog, "emit a named code", input=False)
    g.add_argument("name", nargs="?")
    g.add_argument("--list", action="store_true")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except InputError as err:
        log.error("%s", err)
        return 2
    except DOMAIN_ERRORS as err:
        log.error("%s", err)
        return 1
    except (IndexError, ValueError) as err:
        log.error("%s", err)
        return 1


if __name__ == "__main__":
    sys.exit(main())
