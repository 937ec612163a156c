"""Command-line front end.

Exit codes: 0 on success, 1 for a mathematically negative answer
(contradictory facts, a non-formal sequence, a failed Ganea hypothesis,
a trace that does not replay), 2 for malformed input.
"""

from __future__ import annotations

import argparse
import sys
import tempfile
from pathlib import Path
from typing import Any, Callable, TextIO

from . import io
from .algebra import AlgebraError, product_length_sequence, tensor
from .inference import (
    Contradiction,
    Envelope,
    HypothesisFails,
    InferenceError,
    TraceMismatch,
    ganea_bound,
    replay_trace,
    run_fixpoint,
)
from .linalg import FieldError
from .realization import (
    NotFormal,
    WedgeOfSphereProducts,
    realize_formal,
    sequence_of_wedge,
)
from .sequences import (
    DEFAULT_INDEX_CAP,
    Sequence,
    SequenceError,
    is_formal,
    is_inf,
    optimal_sequence,
    seq_min,
    seq_star,
    superadditive_closure,
)


class UsageError(Exception):
    pass


class Negative(Exception):
    """A meaningful negative answer, reported as JSON with exit code 1."""

    def __init__(self, payload: dict, text: str):
        super().__init__(text)
        self.payload = payload
        self.text = text


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")

    def exit(self, status=0, message=None):
        raise UsageError(message or f"{self.prog}: exited")


# -- rendering ------------------------------------------------------------------------


def fmt_sequence(s: Sequence) -> str:
    text = str(s)
    if s.cap_note is not None:
        text += f"\n  (entries after the last are unknown, > {s.cap_note})"
    return text


def _fmt_bound(v, horizon: int | None = None) -> str:
    if is_inf(v):
        return "inf"
    if horizon is not None and v > horizon:
        return f">{horizon}"
    return str(v)


def _jbound(v, horizon: int | None = None):
    if is_inf(v):
        return "inf"
    if horizon is not None and v > horizon:
        return f">{horizon}"
    return v


def envelope_summary(e: Envelope) -> dict:
    prefix = e.lower_prefix()
    lower_seq = [_jbound(v, e.horizon) for v in prefix]
    if len(prefix) <= e.K:
        lower_seq.append("inf")
    upper_seq = [v for v in e.upper if not is_inf(v)]
    exact = e.exact_sequence()
    return {
        "index_cap": e.K,
        "lower": [_jbound(v, e.horizon) for v in e.lower],
        "upper": [_jbound(v) for v in e.upper],
        "lower_sequence": lower_seq,
        "upper_sequence": upper_seq,
        "exact": {str(k): v for k, v in e.exact_values().items() if not is_inf(v)},
        "exact_sequence": None if exact is None else exact.to_json(),
    }


def envelope_text(name: str, e: Envelope) -> list[str]:
    prefix = e.lower_prefix()
    lower = "(" + ",".join(_fmt_bound(v, e.horizon) for v in prefix) + ")"
    if len(prefix) <= e.K:
        lower += f"   sigma({len(prefix)}) = inf"
    upper = "(" + ",".join(str(v) for v in e.upper if not is_inf(v)) + ")"
    exact = ", ".join(f"sigma({k})={v}" for k, v in e.exact_values().items() if not is_inf(v))
    lines = [f"{name}:", f"  lower: {lower}", f"  upper: {upper}", f"  exact: {exact or 'none'}"]
    seq = e.exact_sequence()
    if seq is not None:
        lines.append(f"  sigma = {seq}")
    return lines


# -- verbs ---------------------------------------------------------------------------


def _seq_arg(text: str, n: int) -> Sequence:
    return io.parse_sequence_literal(text, f"argument {n}")


def _load_algebra(path: str, args):
    cap = args.degree_cap
    if path.lstrip().startswith("{"):
        return io.algebra_from_json(io.load_json_text(path, "argument"), "$", cap)
    path = str(io.resolve(path, io.bundled_algebra))
    data = io.load_json_file(path)
    try:
        return io.algebra_from_json(data, "$", cap)
    except io.InputError as e:
        raise io.InputError(e.path, str(e).split(": ", 1)[-1], path) from None


def _load_wedge(text: str) -> WedgeOfSphereProducts:
    source = "argument"
    if not text.lstrip().startswith("{"):
        source = text
        data = io.load_json_file(text)
    else:
        data = io.load_json_text(text, source)
    if not isinstance(data, dict) or set(data) != {"summands"} or not isinstance(data["summands"], list):
        raise io.InputError("$", "expected {\"summands\": [[dims], ...]}", source)
    for i, dims in enumerate(data["summands"]):
        if not isinstance(dims, list) or not dims:
            raise io.InputError(f"$.summands[{i}]", f"expected a nonempty list of dimensions, got {dims!r}", source)
        for j, d in enumerate(dims):
            if isinstance(d, bool) or not isinstance(d, int) or d < 2:
                raise io.InputError(f"$.summands[{i}][{j}]", f"sphere dimension must be >= 2, got {d!r}", source)
    if not data["summands"]:
        raise io.InputError("$.summands", "a wedge needs at least one summand", source)
    return WedgeOfSphereProducts.of(*data["summands"])


def cmd_seq_min(args):
    s = seq_min(_seq_arg(args.s, 1), _seq_arg(args.t, 2))
    return s.to_json(), fmt_sequence(s)


def cmd_seq_star(args):
    s = seq_star(_seq_arg(args.s, 1), _seq_arg(args.t, 2))
    return s.to_json(), fmt_sequence(s)


def cmd_seq_closure(args):
    s = superadditive_closure(_seq_arg(args.s, 1), args.cap or DEFAULT_INDEX_CAP)
    return s.to_json(), fmt_sequence(s)


def cmd_seq_formal(args):
    s = _seq_arg(args.s, 1)
    if s.cap_note is not None:
        raise io.InputError("$", "formality of a sequence with unknown entries is undetermined", "argument 1")
    ok = is_formal(s)
    return {"formal": ok, "sequence": s.to_json()}, f"{s} is {'formal' if ok else 'not formal'}"


def cmd_seq_optimal(args):
    s = optimal_sequence(args.k, args.n)
    return s.to_json(), fmt_sequence(s)


def cmd_algebra_validate(args):
    A = _load_algebra(args.file, args)
    dims = [A.dim(d) for d in range(A.top_degree + 1)]
    payload = {"valid": True, "field": A.field.to_json(), "top_degree": A.top_degree,
               "dimensions": dims, "truncated": A.truncated}
    return payload, f"valid algebra over {A.field}, top degree {A.top_degree}, dimensions {dims}"


def cmd_algebra_seq(args):
    A = _load_algebra(args.file, args)
    s = product_length_sequence(A, args.cap or DEFAULT_INDEX_CAP)
    return s.to_json(), fmt_sequence(s)


def cmd_algebra_tensor(args):
    A = _load_algebra(args.a, args)
    B = _load_algebra(args.b, args)
    T = tensor(A, B)
    s = product_length_sequence(T, args.cap or DEFAULT_INDEX_CAP)
    return T.to_json(), f"{T!r}\nsigma = {fmt_sequence(s)}"


def cmd_realize(args):
    s = _seq_arg(args.s, 1)
    try:
        w = realize_formal(s)
    except NotFormal as e:
        raise Negative({"result": "not_formal", "sequence": s.to_json(), "reason": str(e)}, str(e))
    return w.to_json(), str(w)


def cmd_wedge_seq(args):
    w = _load_wedge(args.wedge)
    s = sequence_of_wedge(w)
    return s.to_json(), fmt_sequence(s)


def _write_trace(path: str | None, obj: dict) -> None:
    if path:
        Path(path).write_text(io.dumps(obj) + "\n", encoding="utf-8")


def cmd_infer(args):
    problems, target = io.load_problems(args.file, args.degree_cap)
    try:
        res = run_fixpoint(problems, target, args.cap)
    except Contradiction as c:
        payload = {
            "result": "contradiction",
            "problem": c.problem,
            "index": c.index,
            "message": str(c),
            "steps": [s.to_json() for s in c.trace],
        }
        _write_trace(args.trace, payload)
        raise Negative(payload, f"contradiction: {c}")
    _write_trace(args.trace, io.trace_to_json(target, res.initial, res.trace, res.envelopes))
    cat = {"lower": res.cat.lower, "upper": _jbound(res.cat.upper)}
    payload = {"result": "ok", "target": target, "cat": cat, "steps": len(res.trace)}
    payload.update(envelope_summary(res.envelope))
    others = {x: envelope_summary(e) for x, e in res.envelopes.items() if x != target}
    if others:
        payload["peers"] = others
    lines = envelope_text(target, res.envelope)
    lines.append(f"  cat: {res.cat.lower} <= cat <= {_fmt_bound(res.cat.upper)}")
    for x, e in res.envelopes.items():
        if x != target:
            lines += envelope_text(x, e)
    lines.append(f"{len(res.trace)} derivation steps")
    return payload, "\n".join(lines)


def cmd_ganea(args):
    a = io.load_json_text(args.a, "argument 3")
    h = io.load_json_text(args.h, "argument 4")
    for name, lst in (("argument 3", a), ("argument 4", h)):
        if not isinstance(lst, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in lst):
            raise io.InputError("$", f"expected a list of integers, got {lst!r}", name)
    try:
        res = ganea_bound(args.k, args.n, a, h, args.complete_up_to)
    except HypothesisFails as e:
        raise Negative({"result": "hypothesis_fails", "reason": str(e)}, f"hypothesis fails: {e}")
    payload = {
        "result": "ok",
        "bound": res.bound,
        "intervals": [list(i) for i in res.intervals],
        "steps": res.steps,
    }
    return payload, "\n".join(res.steps)


def cmd_replay(args):
    data = io.load_json_file(args.trace_file)
    try:
        target, initial, steps, final = io.trace_from_json(data)
    except io.InputError as e:
        raise io.InputError(e.path, str(e).split(": ", 1)[-1], args.trace_file) from None
    problems = None
    if args.problems:
        problems, _ = io.load_problems(args.problems, args.degree_cap)
        if set(problems) != set(initial):
            raise io.InputError("$", "problem names do not match the trace", args.problems)
    try:
        env = replay_trace(initial, steps, problems)
        if env != final:
            bad = sorted(x for x in final if env.get(x) != final[x])
            raise TraceMismatch(f"replayed envelope differs from the recorded final envelope for {bad}")
    except TraceMismatch as e:
        raise Negative({"result": "trace_mismatch", "reason": str(e)}, f"trace mismatch: {e}")
    payload = {"result": "ok", "target": target, "steps": len(steps)}
    payload.update(envelope_summary(env[target]))
    lines = envelope_text(target, env[target]) + [f"replayed {len(steps)} steps"]
    return payload, "\n".join(lines)


# -- parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--cap", type=int, default=None, help="index cap K")
    common.add_argument("--degree-cap", type=int, default=None,
                        help="truncation degree for polynomial generators without a truncation")
    common.add_argument("--trace", default=None, help="write the derivation trace to this file")

    p = _Parser(prog="catseq", description="Calculus of categorical sequences.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name: str, fn: Callable, help: str, *positional: tuple[str, dict]):
        sp = sub.add_parser(name, parents=[common], help=help)
        for arg, kw in positional:
            sp.add_argument(arg, **kw)
        sp.set_defaults(fn=fn)

    verb("seq-min", cmd_seq_min, "pointwise minimum", ("s", {}), ("t", {}))
    verb("seq-star", cmd_seq_star, "star product", ("s", {}), ("t", {}))
    verb("seq-closure", cmd_seq_closure, "superadditive closure", ("s", {}))
    verb("seq-formal", cmd_seq_formal, "formality test", ("s", {}))
    verb("seq-optimal", cmd_seq_optimal, "optimal k-term sequence ending at n",
         ("k", {"type": int}), ("n", {"type": int}))
    verb("algebra-validate", cmd_algebra_validate, "validate an algebra file", ("file", {}))
    verb("algebra-seq", cmd_algebra_seq, "product-length sequence of an algebra", ("file", {}))
    verb("algebra-tensor", cmd_algebra_tensor, "tensor product of two algebras", ("a", {}), ("b", {}))
    verb("realize", cmd_realize, "wedge of sphere products realizing a formal sequence", ("s", {}))
    verb("wedge-seq", cmd_wedge_seq, "sequence of a wedge of sphere products", ("wedge", {}))
    verb("infer", cmd_infer, "bound propagation over a problem file", ("file", {}))
    verb("ganea", cmd_ganea, "interval-cover bound on cat",
         ("k", {"type": int}), ("n", {"type": int}), ("a", {}), ("h", {}),
         ("complete_up_to", {"type": int}))
    verb("replay", cmd_replay, "replay a derivation trace", ("trace_file", {}),
         ("problems", {"nargs": "?", "default": None}))
    return p


def _render(payload: Any, text: str, fmt: str) -> str:
    return (text if fmt == "text" else io.dumps(payload)) + "\n"


def run(argv: list[str], stdin: TextIO | None = None) -> tuple[int, str, str]:
    """Run one command; returns (exit code, stdout, stderr)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        return 2, "", f"{e}\n".replace("\n\n", "\n")
    if args.cap is not None and args.cap < 1:
        return 2, "", "--cap: must be >= 1\n"
    if args.degree_cap is not None and args.degree_cap < 2:
        return 2, "", "--degree-cap: must be >= 2\n"
    if stdin is not None:
        # "-" reads a file argument from stdin
        for key in ("file", "a", "b", "wedge", "trace_file", "problems"):
            if getattr(args, key, None) == "-":
                tmp = _stdin_file(stdin)
                setattr(args, key, tmp)
    try:
        payload, text = args.fn(args)
    except Negative as n:
        return 1, _render(n.payload, n.text, args.format), ""
    except io.InputError as e:
        return 2, "", f"error: {e}\n"
    except (InferenceError, AlgebraError, SequenceError, FieldError, ValueError) as e:
        return 2, "", f"error: {type(e).__name__}: {e}\n"
    return 0, _render(payload, text, args.format), ""


def _stdin_file(stdin: TextIO) -> str:
    data = stdin.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    fd, name = tempfile.mkstemp(suffix=".json", prefix="catseq-stdin-")
    with open(fd, "w", encoding="utf-8") as fh:
        fh.write(data)
    return name


def main(argv: list[str] | None = None) -> int:
    code, out, err = run(sys.argv[1:] if argv is None else argv, sys.stdin)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
