"""JSON readers and writers for sequences, algebras, problems and traces.

Readers raise ``InputError`` carrying a JSON path such as
``$.cohomology_algebras[0].presentation.exterior[1]`` so diagnostics can
point at the offending value.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Mapping

from .algebra import (
    AlgebraError,
    GradedAlgebra,
    algebra_from_table,
    exterior_algebra,
    tensor,
    truncated_polynomial_algebra,
)
from .inference import Envelope, FactSet, Relation, Step
from .linalg import Field, FieldError
from .sequences import INF, Sequence, SequenceError, is_inf, make_sequence

DEFAULT_DEGREE_CAP = 32

_HERE = Path(__file__).parent


class InputError(ValueError):
    def __init__(self, path: str, message: str, source: str | None = None):
        self.path = path
        self.source = source
        where = f"{source}: " if source else ""
        super().__init__(f"{where}{path}: {message}")


def degree_cap_default() -> int:
    raw = os.environ.get("CATSEQ_DEGREE_CAP")
    if raw is None:
        return DEFAULT_DEGREE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise InputError("$CATSEQ_DEGREE_CAP", f"not an integer: {raw!r}") from None
    if cap < 2:
        raise InputError("$CATSEQ_DEGREE_CAP", f"must be >= 2, got {cap}")
    return cap


def bundled_problem(name: str) -> Path:
    """Path of a worked problem shipped with the package (sp2, sp3, g2, ex1b)."""
    return _HERE / "problems" / f"{Path(name).stem}.json"


def bundled_algebra(name: str) -> Path:
    return _HERE / "algebras" / f"{Path(name).stem}.json"


def resolve(path: str | Path, fallback) -> Path:
    """The path itself if it exists, else the bundled file of the same name."""
    p = Path(path)
    if p.exists():
        return p
    alt = fallback(str(p))
    return alt if p.parent == Path(".") and alt.exists() else p


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def load_json_text(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"line {e.lineno} column {e.colno}", e.msg, source) from None


def load_json_file(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError("$", f"cannot read file: {e.strerror}", str(path)) from None
    return load_json_text(text, str(path))


def _nat(x: Any, path: str, least: int = 0) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < least:
        raise InputError(path, f"expected an integer >= {least}, got {x!r}")
    return x


def _expect(x: Any, kind: type, path: str, what: str):
    if not isinstance(x, kind):
        raise InputError(path, f"expected {what}, got {x!r}")
    return x


# -- sequences ------------------------------------------------------------------


def sequence_from_json(data: Any, path: str = "$") -> Sequence:
    """Arrays of naturals; trailing "inf" entries and a final ">D" cap marker are allowed."""
    _expect(data, list, path, "a JSON array")
    vals: list = []
    cap = None
    for i, v in enumerate(data):
        p = f"{path}[{i}]"
        if isinstance(v, str) and v.startswith(">"):
            if i != len(data) - 1:
                raise InputError(p, "a cap marker must be the last entry")
            try:
                cap = int(v[1:])
            except ValueError:
                raise InputError(p, f"bad cap marker {v!r}") from None
        elif v == "inf":
            vals.append(INF)
        elif isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise InputError(p, f"expected a natural number or \"inf\", got {v!r}")
        else:
            vals.append(v)
    try:
        return make_sequence(vals, cap)
    except SequenceError as e:
        raise InputError(path, str(e)) from None


def sequence_to_json(s: Sequence) -> list:
    return s.to_json()


def parse_sequence_literal(text: str, source: str = "argument") -> Sequence:
    data = load_json_text(text, source)
    try:
        return sequence_from_json(data)
    except InputError as e:
        raise InputError(e.path, str(e).split(": ", 1)[-1], source) from None


# -- algebras -------------------------------------------------------------------


def field_from_json(data: Any, path: str) -> Field:
    if data == "Q":
        return Field()
    if isinstance(data, Mapping) and set(data) == {"Fp"}:
        p = _nat(data["Fp"], f"{path}.Fp", 2)
        try:
            return Field(p)
        except FieldError as e:
            raise InputError(f"{path}.Fp", str(e)) from None
    raise InputError(path, f"expected \"Q\" or {{\"Fp\": p}}, got {data!r}")


def _presentation(field: Field, pres: Any, path: str, degree_cap: int, truncated: bool) -> GradedAlgebra:
    _expect(pres, Mapping, path, "a presentation object")
    if len(pres) != 1:
        raise InputError(path, f"expected exactly one presentation kind, got {sorted(pres)}")
    (kind, body), = pres.items()
    p = f"{path}.{kind}"
    if kind == "exterior":
        _expect(body, list, p, "a list of degrees")
        degs = [_nat(d, f"{p}[{i}]") for i, d in enumerate(body)]
        return exterior_algebra(field, degs)
    if kind == "truncated_poly":
        _expect(body, list, p, "a list of [degree, truncation] pairs")
        gens = []
        for i, g in enumerate(body):
            gp = f"{p}[{i}]"
            if not isinstance(g, list) or len(g) != 2:
                raise InputError(gp, f"expected [degree, truncation], got {g!r}")
            t = None if g[1] is None else _nat(g[1], f"{gp}[1]")
            gens.append((_nat(g[0], f"{gp}[0]"), t))
        return truncated_polynomial_algebra(field, gens, degree_cap=degree_cap)
    if kind == "tensor":
        if not isinstance(body, list) or len(body) != 2:
            raise InputError(p, "expected two presentations")
        a = _presentation(field, body[0], f"{p}[0]", degree_cap, False)
        b = _presentation(field, body[1], f"{p}[1]", degree_cap, False)
        return tensor(a, b)
    if kind == "table":
        _expect(body, Mapping, p, "a table object")
        for key in ("top_degree", "basis", "products"):
            if key not in body:
                raise InputError(p, f"missing key {key!r}")
        top = _nat(body["top_degree"], f"{p}.top_degree")
        basis = _expect(body["basis"], Mapping, f"{p}.basis", "an object mapping degrees to names")
        for d in basis:
            if not str(d).isdigit():
                raise InputError(f"{p}.basis", f"degree key {d!r} is not a natural")
        basis = {int(d): names for d, names in basis.items()}
        consts: dict = {}
        for i, row in enumerate(_expect(body["products"], list, f"{p}.products", "a list")):
            rp = f"{p}.products[{i}]"
            if not (isinstance(row, list) and len(row) == 3 and isinstance(row[2], Mapping)):
                raise InputError(rp, f"expected [name, name, {{name: coeff}}], got {row!r}")
            for name, c in row[2].items():
                if not isinstance(c, (str, int)) or isinstance(c, bool):
                    raise InputError(f"{rp}[2].{name}", f"coefficient must be a string or integer, got {c!r}")
            consts[(row[0], row[1])] = row[2]
        return algebra_from_table(field, top, basis, consts, truncated=truncated)
    raise InputError(path, f"unknown presentation kind {kind!r}")


def algebra_from_json(data: Any, path: str = "$", degree_cap: int | None = None) -> GradedAlgebra:
    _expect(data, Mapping, path, "an algebra object")
    for key in ("field", "presentation"):
        if key not in data:
            raise InputError(path, f"missing key {key!r}")
    unknown = set(data) - {"field", "presentation", "truncated"}
    if unknown:
        raise InputError(path, f"unknown keys {sorted(unknown)}")
    field = field_from_json(data["field"], f"{path}.field")
    truncated = _expect(data.get("truncated", False), bool, f"{path}.truncated", "a boolean")
    cap = degree_cap if degree_cap is not None else degree_cap_default()
    try:
        return _presentation(field, data["presentation"], f"{path}.presentation", cap, truncated)
    except (AlgebraError, FieldError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f"{path}.presentation", f"{type(e).__name__}: {e}") from None


def algebra_to_json(A: GradedAlgebra) -> dict:
    return A.to_json()


# -- problems -------------------------------------------------------------------

PROBLEM_KEYS = {
    "name", "simply_connected", "connectivity", "nonvanishing", "formal_dimension",
    "trivial_cups", "rational", "cohomology_algebras", "model_algebras", "known_cat",
    "relations", "index_cap",
}


def _algebra_ref(data: Any, path: str, base: Path | None, degree_cap: int | None) -> GradedAlgebra:
    # a string names an algebra file relative to the problem file
    if isinstance(data, str):
        target = (base or Path(".")) / data
        return algebra_from_json(load_json_file(target), "$", degree_cap)
    return algebra_from_json(data, path, degree_cap)


def problem_from_json(data: Any, path: str = "$", base: Path | None = None,
                      degree_cap: int | None = None) -> FactSet:
    _expect(data, Mapping, path, "a problem object")
    unknown = set(data) - PROBLEM_KEYS
    if unknown:
        raise InputError(path, f"unknown keys {sorted(unknown)}")
    for key in ("name", "connectivity", "nonvanishing"):
        if key not in data:
            raise InputError(path, f"missing key {key!r}")
    name = _expect(data["name"], str, f"{path}.name", "a string")
    nv = _expect(data["nonvanishing"], Mapping, f"{path}.nonvanishing", "an object")
    if set(nv) != {"degrees", "complete_up_to"}:
        raise InputError(f"{path}.nonvanishing", "expected keys 'degrees' and 'complete_up_to'")
    degs = _expect(nv["degrees"], list, f"{path}.nonvanishing.degrees", "a list")
    h = frozenset(_nat(d, f"{path}.nonvanishing.degrees[{i}]", 1) for i, d in enumerate(degs))
    if not h:
        raise InputError(f"{path}.nonvanishing.degrees", "must be nonempty")
    cups = []
    for i, pair in enumerate(_expect(data.get("trivial_cups", []), list, f"{path}.trivial_cups", "a list")):
        pp = f"{path}.trivial_cups[{i}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise InputError(pp, f"expected [a, b], got {pair!r}")
        cups.append((_nat(pair[0], f"{pp}[0]"), _nat(pair[1], f"{pp}[1]")))
    rels = []
    for i, r in enumerate(_expect(data.get("relations", []), list, f"{path}.relations", "a list")):
        rp = f"{path}.relations[{i}]"
        _expect(r, Mapping, rp, "a relation object")
        if "kind" not in r or "peers" not in r:
            raise InputError(rp, "relations need 'kind' and 'peers'")
        extra = set(r) - {"kind", "peers", "a", "b"}
        if extra:
            raise InputError(rp, f"unknown keys {sorted(extra)}")
        peers = _expect(r["peers"], list, f"{rp}.peers", "a list of names")
        for j, p in enumerate(peers):
            _expect(p, str, f"{rp}.peers[{j}]", "a problem name")
        a = None if r.get("a") is None else _nat(r["a"], f"{rp}.a")
        b = None if r.get("b") is None else _nat(r["b"], f"{rp}.b")
        rels.append(Relation(_expect(r["kind"], str, f"{rp}.kind", "a string"), tuple(peers), a, b))

    def opt_nat(key: str, least: int = 0) -> int | None:
        v = data.get(key)
        return None if v is None else _nat(v, f"{path}.{key}", least)

    def flag(key: str, default: bool) -> bool:
        return _expect(data.get(key, default), bool, f"{path}.{key}", "a boolean")

    def algebras(key: str) -> tuple:
        items = _expect(data.get(key, []), list, f"{path}.{key}", "a list")
        return tuple(_algebra_ref(a, f"{path}.{key}[{i}]", base, degree_cap) for i, a in enumerate(items))

    return FactSet(
        name=name,
        connectivity=_nat(data["connectivity"], f"{path}.connectivity"),
        nonvanishing=h,
        complete_up_to=_nat(nv["complete_up_to"], f"{path}.nonvanishing.complete_up_to"),
        simply_connected=flag("simply_connected", True),
        formal_dimension=opt_nat("formal_dimension"),
        trivial_cups=frozenset(cups),
        cohomology_algebras=algebras("cohomology_algebras"),
        model_algebras=algebras("model_algebras"),
        rational=flag("rational", False),
        known_cat=opt_nat("known_cat"),
        relations=tuple(rels),
        index_cap=opt_nat("index_cap", 1),
    )


def problems_from_json(data: Any, base: Path | None = None,
                       degree_cap: int | None = None) -> tuple[dict[str, FactSet], str]:
    """A single problem, or {"problems": [...], "target": name}."""
    if isinstance(data, Mapping) and "problems" in data:
        extra = set(data) - {"problems", "target"}
        if extra:
            raise InputError("$", f"unknown keys {sorted(extra)}")
        items = _expect(data["problems"], list, "$.problems", "a list")
        out: dict[str, FactSet] = {}
        for i, p in enumerate(items):
            f = problem_from_json(p, f"$.problems[{i}]", base, degree_cap)
            if f.name in out:
                raise InputError(f"$.problems[{i}].name", f"duplicate problem name {f.name!r}")
            out[f.name] = f
        if not out:
            raise InputError("$.problems", "no problems given")
        target = data.get("target", items[0].get("name"))
        if target not in out:
            raise InputError("$.target", f"no problem named {target!r}")
        return out, target
    f = problem_from_json(data, "$", base, degree_cap)
    return {f.name: f}, f.name


def load_problems(path: str | Path, degree_cap: int | None = None) -> tuple[dict[str, FactSet], str]:
    path = resolve(path, bundled_problem)
    data = load_json_file(path)
    try:
        return problems_from_json(data, path.parent, degree_cap)
    except InputError as e:
        if e.source is None:
            raise InputError(e.path, str(e).split(": ", 1)[-1], str(path)) from None
        raise


# -- envelopes and traces ------------------------------------------------------------


def bound_to_json(v) -> int | str:
    return "inf" if is_inf(v) else v


def bound_from_json(v: Any, path: str):
    if v == "inf":
        return INF
    return _nat(v, path)


def envelope_to_json(e: Envelope) -> dict:
    return {
        "lower": [bound_to_json(v) for v in e.lower],
        "upper": [bound_to_json(v) for v in e.upper],
        "horizon": e.horizon,
        "dimension": e.dimension,
    }


def envelope_from_json(data: Any, path: str) -> Envelope:
    _expect(data, Mapping, path, "an envelope object")
    lower = [bound_from_json(v, f"{path}.lower[{i}]") for i, v in enumerate(data.get("lower", []))]
    upper = [bound_from_json(v, f"{path}.upper[{i}]") for i, v in enumerate(data.get("upper", []))]
    if len(lower) != len(upper) or not lower:
        raise InputError(path, "lower and upper must be nonempty lists of equal length")
    horizon = _nat(data.get("horizon"), f"{path}.horizon")
    dim = data.get("dimension")
    return Envelope(lower, upper, horizon, None if dim is None else _nat(dim, f"{path}.dimension"))


def trace_to_json(target: str, initial: Mapping[str, Envelope], steps: list[Step],
                  final: Mapping[str, Envelope]) -> dict:
    return {
        "target": target,
        "initial": {x: envelope_to_json(e) for x, e in initial.items()},
        "steps": [s.to_json() for s in steps],
        "final": {x: envelope_to_json(e) for x, e in final.items()},
    }


def trace_from_json(data: Any) -> tuple[str, dict[str, Envelope], list[Step], dict[str, Envelope]]:
    _expect(data, Mapping, "$", "a trace object")
    for key in ("target", "initial", "steps", "final"):
        if key not in data:
            raise InputError("$", f"missing key {key!r}")
    initial = {x: envelope_from_json(e, f"$.initial.{x}") for x, e in data["initial"].items()}
    final = {x: envelope_from_json(e, f"$.final.{x}") for x, e in data["final"].items()}
    steps = []
    for i, s in enumerate(_expect(data["steps"], list, "$.steps", "a list")):
        try:
            steps.append(Step.from_json(s))
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"$.steps[{i}]", f"malformed step: {e}") from None
    return data["target"], initial, steps, final

