"""Bound propagation for categorical sequences.

Given facts about one or more spaces, the engine maintains per-index
intervals ``lower(k) <= sigma_X(k) <= upper(k)`` and applies a fixed
catalogue of monotone rules until nothing changes.  Every change is
recorded as a trace step so a run can be replayed and audited.

Lower bounds above the completeness horizon D of a space carry no
cohomological witness; they are stored as ``D + 1`` and reported as
"unknown (> D)".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping

from .algebra import GradedAlgebra, cup_is_trivial, nonzero_degrees, product_length_sequence
from .linalg import QQ
from .realization import WedgeOfSphereProducts, cohomology_of_wedge
from .sequences import INF, CatBounds, Sequence, is_inf

DEFAULT_ENGINE_CAP = 16


class InferenceError(ValueError):
    pass


class InvalidFactSet(InferenceError):
    pass


class UnresolvedPeer(InferenceError):
    pass


class TraceMismatch(InferenceError):
    pass


class HypothesisFails(InferenceError):
    pass


class IncompleteData(InferenceError):
    pass


class Contradiction(Exception):
    """The facts admit no sequence: some lower bound exceeds an upper bound."""

    def __init__(self, problem: str, index: int | None, message: str, trace: list | None = None):
        super().__init__(message)
        self.problem = problem
        self.index = index
        self.trace = trace or []


RELATION_ARITY = {
    "retract_of": (1, 1),
    "pi_injective_map_to": (1, 1),
    "wedge_summands": (1, None),
    "rational_product_of": (2, 2),
    "fibration_total": (2, 2),
    "loop_section": (2, 2),
}


@dataclass(frozen=True)
class Relation:
    """How the owning space relates to named peers.

    ``fibration_total`` and ``loop_section`` take peers ``(fiber, base)``;
    ``a`` is the category of the fiber inclusion and ``b`` that of the
    projection.
    """

    kind: str
    peers: tuple[str, ...]
    a: int | None = None
    b: int | None = None


@dataclass
class FactSet:
    name: str
    connectivity: int
    nonvanishing: frozenset[int]
    complete_up_to: int
    simply_connected: bool = True
    formal_dimension: int | None = None
    trivial_cups: frozenset[tuple[int, int]] = frozenset()
    cohomology_algebras: tuple[GradedAlgebra, ...] = ()
    model_algebras: tuple[GradedAlgebra, ...] = ()
    rational: bool = False
    known_cat: int | None = None
    relations: tuple[Relation, ...] = ()
    index_cap: int | None = None

    def __post_init__(self):
        self.nonvanishing = frozenset(self.nonvanishing)
        self.trivial_cups = frozenset(tuple(sorted(p)) for p in self.trivial_cups)
        self.cohomology_algebras = tuple(self.cohomology_algebras)
        self.model_algebras = tuple(self.model_algebras)
        self.relations = tuple(self.relations)

    @property
    def finite_dimensional(self) -> bool:
        return self.formal_dimension is not None

    def validate(self) -> None:
        c, h, D, d = self.connectivity, self.nonvanishing, self.complete_up_to, self.formal_dimension
        where = f"problem {self.name!r}"
        if c < 1:
            raise InvalidFactSet(f"{where}: connectivity must be >= 1, got {c}")
        if self.simply_connected and c < 2:
            raise InvalidFactSet(f"{where}: a simply-connected space has connectivity >= 2")
        if c not in h or min(h) != c:
            raise InvalidFactSet(f"{where}: connectivity {c} must be the least nonvanishing degree")
        if D < c:
            raise InvalidFactSet(f"{where}: complete_up_to {D} is below the connectivity {c}")
        if d is not None:
            if d > D:
                raise InvalidFactSet(f"{where}: formal dimension {d} exceeds complete_up_to {D}")
            if max(h) > d:
                raise InvalidFactSet(f"{where}: nonvanishing degree {max(h)} above dimension {d}")
        for a, b in self.trivial_cups:
            if a < c:
                raise InvalidFactSet(f"{where}: trivial cup ({a},{b}) below connectivity {c}")
        if self.model_algebras and not self.rational:
            raise InvalidFactSet(f"{where}: model algebras require a rational space")
        if self.known_cat is not None and self.known_cat < 0:
            raise InvalidFactSet(f"{where}: known_cat must be >= 0")
        for rel in self.relations:
            if rel.kind not in RELATION_ARITY:
                raise InvalidFactSet(f"{where}: unknown relation kind {rel.kind!r}")
            lo, hi = RELATION_ARITY[rel.kind]
            if len(rel.peers) < lo or (hi is not None and len(rel.peers) > hi):
                raise InvalidFactSet(f"{where}: {rel.kind} takes {lo}..{hi or 'many'} peers")
            if rel.kind in ("rational_product_of", "pi_injective_map_to") and not self.rational:
                raise InvalidFactSet(f"{where}: {rel.kind} only holds for rational spaces")
            if rel.kind == "fibration_total":
                for x in (rel.a, rel.b):
                    if isinstance(x, bool) or not isinstance(x, int) or x < 0:
                        raise InvalidFactSet(f"{where}: fibration needs naturals a and b")


# -- envelopes ----------------------------------------------------------------


@dataclass
class Envelope:
    """Per-index bounds on sigma_X for one space, indices 0..K."""

    lower: list
    upper: list
    horizon: int
    dimension: int | None = None

    @classmethod
    def initial(cls, K: int, horizon: int, dimension: int | None = None) -> Envelope:
        lower = [0] * (K + 1)
        upper = [0] + [INF] * K
        return cls(lower, upper, horizon, dimension)

    @property
    def K(self) -> int:
        return len(self.lower) - 1

    def copy(self) -> Envelope:
        return Envelope(list(self.lower), list(self.upper), self.horizon, self.dimension)

    def is_unknown(self, k: int) -> bool:
        v = self.lower[k]
        return not is_inf(v) and v > self.horizon

    def exact(self, k: int) -> bool:
        return self.lower[k] == self.upper[k] and not self.is_unknown(k)

    def lower_prefix(self) -> list:
        """Lower bounds up to the first index known to be infinite."""
        out = []
        for v in self.lower:
            if is_inf(v):
                break
            out.append(v)
        return out

    def exact_values(self) -> dict[int, object]:
        return {k: self.lower[k] for k in range(1, self.K + 1) if self.exact(k)}

    def exact_sequence(self) -> Sequence | None:
        """The sequence itself when every index is pinned down."""
        if all(self.exact(k) for k in range(self.K + 1)) and is_inf(self.lower[self.K]):
            return Sequence(tuple(self.lower_prefix()))
        return None

    def cat_lower(self) -> int:
        finite = [k for k in range(self.K + 1) if not is_inf(self.upper[k])]
        return max(finite)

    def length_upper(self) -> float | int:
        for k, v in enumerate(self.lower):
            if is_inf(v):
                return k - 1
        return INF

    def __eq__(self, other) -> bool:
        if not isinstance(other, Envelope):
            return NotImplemented
        return self.lower == other.lower and self.upper == other.upper


def _jv(v):
    return "inf" if is_inf(v) else v


def _from_jv(v):
    if v == "inf":
        return INF
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValueError(f"bad bound value {v!r}")
    return v


# -- rule catalogue -------------------------------------------------------------


@dataclass(frozen=True)
class Proposal:
    problem: str
    bound: str  # "lower" or "upper"
    index: int
    value: object
    inputs: tuple = ()


@dataclass(frozen=True)
class Rule:
    id: str
    name: str
    citation: str
    fn: Callable[["Engine", str, int], Iterable[Proposal]]


def _ref(problem: str, bound: str, k: int, v) -> list:
    return [problem, bound, k, _jv(v)]


def _r1_init(eng: Engine, x: str, k: int):
    if k == 1:
        c = eng.facts[x].connectivity
        yield Proposal(x, "lower", 1, c)
        yield Proposal(x, "upper", 1, c)


def _r2_strict(eng: Engine, x: str, k: int):
    prev = eng.env[x].lower[k - 1]
    yield Proposal(x, "lower", k, prev + 1, (_ref(x, "lower", k - 1, prev),))


def _r3_superadditive(eng: Engine, x: str, k: int):
    low = eng.env[x].lower
    best, arg = None, None
    for i in range(1, k // 2 + 1):
        s = low[i] + low[k - i]
        if best is None or s > best:
            best, arg = s, i
    if best is not None:
        i = arg
        yield Proposal(x, "lower", k, best, (_ref(x, "lower", i, low[i]), _ref(x, "lower", k - i, low[k - i])))


def _r4_nonvanishing(eng: Engine, x: str, k: int):
    f = eng.facts[x]
    m = eng.env[x].lower[k]
    D = f.complete_up_to
    if not f.simply_connected or is_inf(m) or m > D or m in f.nonvanishing:
        return
    later = [n for n in f.nonvanishing if m <= n <= D]
    if later:
        yield Proposal(x, "lower", k, min(later), (_ref(x, "lower", k, m),))
    elif f.formal_dimension is not None:
        yield Proposal(x, "lower", k, INF, (_ref(x, "lower", k, m),))
    else:
        yield Proposal(x, "lower", k, D + 1, (_ref(x, "lower", k, m),))


def _r5_trivial_cup(eng: Engine, x: str, k: int):
    f = eng.facts[x]
    if not f.simply_connected or not f.trivial_cups:
        return
    low = eng.env[x].lower
    m = low[k]
    if is_inf(m):
        return
    for i in range(1, k // 2 + 1):
        a, b = low[i], low[k - i]
        if a + b == m and tuple(sorted((a, b))) in f.trivial_cups:
            yield Proposal(x, "lower", k, m + 1, (_ref(x, "lower", i, a), _ref(x, "lower", k - i, b)))
            return


def _r6_dimension(eng: Engine, x: str, k: int):
    d = eng.facts[x].formal_dimension
    m = eng.env[x].lower[k]
    if d is not None and not is_inf(m) and m > d:
        yield Proposal(x, "lower", k, INF, (_ref(x, "lower", k, m),))


def _r7_cup_length(eng: Engine, x: str, k: int):
    for n, s in enumerate(eng.cup_seqs[x]):
        v = s[k]
        if not is_inf(v):
            yield Proposal(x, "upper", k, v, (["cohomology_algebra", n, k, v],))


def _r8_model(eng: Engine, x: str, k: int):
    if not eng.facts[x].rational:
        return
    for n, s in enumerate(eng.model_seqs[x]):
        v = s[k]
        if s.is_unknown(k):
            v = s.cap_note + 1
        yield Proposal(x, "lower", k, v, (["model_algebra", n, k, _jv(v)],))


def _relations(eng: Engine, x: str, *kinds: str) -> Iterator[Relation]:
    for rel in eng.facts[x].relations:
        if rel.kind in kinds:
            yield rel


def _r9_retract(eng: Engine, x: str, k: int):
    for rel in _relations(eng, x, "retract_of", "pi_injective_map_to"):
        y = rel.peers[0]
        ly, ux = eng.env[y].lower[k], eng.env[x].upper[k]
        yield Proposal(x, "lower", k, ly, (_ref(y, "lower", k, ly),))
        yield Proposal(y, "upper", k, ux, (_ref(x, "upper", k, ux),))


def _r10_wedge(eng: Engine, x: str, k: int):
    for rel in _relations(eng, x, "wedge_summands"):
        lows = [(eng.env[y].lower[k], y) for y in rel.peers]
        ups = [(eng.env[y].upper[k], y) for y in rel.peers]
        lo, ylo = min(lows, key=lambda t: t[0])
        up, yup = min(ups, key=lambda t: t[0])
        yield Proposal(x, "lower", k, lo, tuple(_ref(y, "lower", k, v) for v, y in lows))
        yield Proposal(x, "upper", k, up, (_ref(yup, "upper", k, up),))
        lx = eng.env[x].lower[k]
        for y in rel.peers:
            yield Proposal(y, "lower", k, lx, (_ref(x, "lower", k, lx),))


def _r11_product(eng: Engine, x: str, k: int):
    for rel in _relations(eng, x, "rational_product_of"):
        y, z = rel.peers
        uy, uz = eng.env[y].upper, eng.env[z].upper
        best, arg = INF, None
        for i in range(k + 1):
            s = uy[i] + uz[k - i]
            if s < best:
                best, arg = s, i
        if arg is not None:
            yield Proposal(x, "upper", k, best,
                           (_ref(y, "upper", arg, uy[arg]), _ref(z, "upper", k - arg, uz[k - arg])))


def _r12_fibration(eng: Engine, x: str, k: int):
    for rel in _relations(eng, x, "fibration_total"):
        fib, base = rel.peers
        j = k // (rel.a + 1)
        lb = eng.env[base].lower[j]
        yield Proposal(x, "lower", k, lb, (_ref(base, "lower", j, lb),))
        j = k // (rel.b + 1)
        lf = eng.env[fib].lower[j]
        yield Proposal(x, "lower", k, lf, (_ref(fib, "lower", j, lf),))


def _r13_loop_section(eng: Engine, x: str, k: int):
    for rel in _relations(eng, x, "loop_section"):
        fib = rel.peers[0]
        uf, lx = eng.env[fib].upper[k], eng.env[x].lower[k]
        yield Proposal(x, "upper", k, uf, (_ref(fib, "upper", k, uf),))
        yield Proposal(fib, "lower", k, lx, (_ref(x, "lower", k, lx),))


def _r14_known_cat(eng: Engine, x: str, k: int):
    f = eng.facts[x]
    m = f.known_cat
    if m is None:
        return
    if k == m + 1:
        yield Proposal(x, "lower", k, INF, (["known_cat", m],))
    if k == m and f.formal_dimension is not None:
        yield Proposal(x, "upper", k, f.formal_dimension, (["known_cat", m], ["formal_dimension", f.formal_dimension]))


def _r15_upper_strict(eng: Engine, x: str, k: int):
    up = eng.env[x].upper
    if k < eng.K and not is_inf(up[k + 1]):
        yield Proposal(x, "upper", k, up[k + 1] - 1, (_ref(x, "upper", k + 1, up[k + 1]),))


def _r16_upper_superadditive(eng: Engine, x: str, k: int):
    env = eng.env[x]
    best, arg = INF, None
    for j in range(1, eng.K - k + 1):
        u, lj = env.upper[k + j], env.lower[j]
        if is_inf(u) or is_inf(lj):
            continue
        if u - lj < best:
            best, arg = u - lj, j
    if arg is not None:
        j = arg
        yield Proposal(x, "upper", k, best,
                       (_ref(x, "upper", k + j, env.upper[k + j]), _ref(x, "lower", j, env.lower[j])))
    # sigma(mk) >= m * sigma(k)
    for m in range(2, eng.K // k + 1):
        u = env.upper[m * k]
        if not is_inf(u):
            yield Proposal(x, "upper", k, u // m, (_ref(x, "upper", m * k, u),))


def _r17_upper_nonvanishing(eng: Engine, x: str, k: int):
    f = eng.facts[x]
    m = eng.env[x].upper[k]
    if not f.simply_connected or is_inf(m) or m > f.complete_up_to or m in f.nonvanishing:
        return
    earlier = [n for n in f.nonvanishing if n <= m]
    new = max(earlier) if earlier else -1
    yield Proposal(x, "upper", k, new, (_ref(x, "upper", k, m),))


RULES: tuple[Rule, ...] = (
    Rule("R1", "init", "connectivity: sigma(0) = 0 and sigma(1) = c for a (c-1)-connected, not c-connected space", _r1_init),
    Rule("R2", "strict-increase", "finite values of a categorical sequence strictly increase", _r2_strict),
    Rule("R3", "superadditive", "superadditivity: sigma(k+l) >= sigma(k) + sigma(l)", _r3_superadditive),
    Rule("R4", "nonvanishing-bump", "for simply-connected X, sigma(k) = n forces H^n(X;A) != 0 for some coefficients A", _r4_nonvanishing),
    Rule("R5", "trivial-cup-bump",
         "equality sigma(k+l) = sigma(k) + sigma(l) forces a nontrivial cup product "
         "H^sigma(k) (x) H^sigma(l) -> H^sigma(k+l) for some coefficients; a trivial one rules the value out",
         _r5_trivial_cup),
    Rule("R6", "dimension-kill", "every finite sigma value is a nonvanishing degree, so none exceeds the dimension", _r6_dimension),
    Rule("R7", "cup-length-upper", "cup length: sigma_X <= sigma_{H*(X;R)} for any coefficient field R", _r7_cup_length),
    Rule("R8", "model-lower", "for a simply-connected rational space and any model A, sigma_X >= sigma_A", _r8_model),
    Rule("R9", "retract", "retracts and pi_*-injective rational maps X -> Y give sigma_X >= sigma_Y", _r9_retract),
    Rule("R10", "wedge", "wedges: sigma_{X v Y} = min(sigma_X, sigma_Y)", _r10_wedge),
    Rule("R11", "rational-product-upper", "for simply-connected rational X, Y: sigma_{X x Y} <= sigma_X * sigma_Y", _r11_product),
    Rule("R12", "fibration", "for F -> E -> B with a = cat(q), b = cat(p): sigma_E(k(a+1)) >= sigma_B(k), sigma_E(k(b+1)) >= sigma_F(k)", _r12_fibration),
    Rule("R13", "loop-section", "if Omega p has a section then sigma_E <= sigma_F", _r13_loop_section),
    Rule("R14", "known-cat", "length(sigma_X) <= cat(X), with equality when X is finite-dimensional", _r14_known_cat),
    Rule("R15", "upper-strict-increase", "finite values strictly increase, so sigma(k) < sigma(k+1) whenever the latter is finite", _r15_upper_strict),
    Rule("R16", "upper-superadditive", "superadditivity read backwards: sigma(k) <= sigma(k+j) - sigma(j) and sigma(k) <= sigma(mk) / m", _r16_upper_superadditive),
    Rule("R17", "upper-nonvanishing", "for simply-connected X every finite sigma value is a nonvanishing degree", _r17_upper_nonvanishing),
)

RULES_BY_ID = {r.id: r for r in RULES}


# -- engine -------------------------------------------------------------------


@dataclass
class Step:
    rule: str
    citation: str
    problem: str
    bound: str
    index: int
    old: object
    new: object
    inputs: tuple = ()

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "citation": self.citation,
            "problem": self.problem,
            "bound": self.bound,
            "index": self.index,
            "old": _jv(self.old),
            "new": _jv(self.new),
            "inputs": [list(i) for i in self.inputs],
        }

    @classmethod
    def from_json(cls, d: Mapping) -> Step:
        return cls(
            d["rule"], d.get("citation", ""), d["problem"], d["bound"], int(d["index"]),
            _from_jv(d["old"]), _from_jv(d["new"]), tuple(tuple(i) for i in d.get("inputs", ())),
        )


@dataclass
class InferenceResult:
    target: str
    envelopes: dict[str, Envelope]
    initial: dict[str, Envelope]
    trace: list[Step]
    cat: CatBounds

    @property
    def envelope(self) -> Envelope:
        return self.envelopes[self.target]


class Engine:
    def __init__(self, problems: Mapping[str, FactSet], K: int, rules: Iterable[Rule] = RULES):
        self.facts = dict(problems)
        self.K = K
        self.rules = tuple(rules)
        for f in self.facts.values():
            f.validate()
            for rel in f.relations:
                for peer in rel.peers:
                    if peer not in self.facts:
                        raise UnresolvedPeer(f"problem {f.name!r} refers to unknown {peer!r}")
        self.cup_seqs = {x: [product_length_sequence(a, K) for a in f.cohomology_algebras]
                         for x, f in self.facts.items()}
        self.model_seqs = {x: [product_length_sequence(a, K) for a in f.model_algebras]
                           for x, f in self.facts.items()}
        self.env = {x: Envelope.initial(K, f.complete_up_to, f.formal_dimension)
                    for x, f in self.facts.items()}
        self.trace: list[Step] = []

    def normalize(self, x: str, bound: str, v):
        if bound == "lower" and not is_inf(v):
            D = self.facts[x].complete_up_to
            if v > D:
                return D + 1
        return v

    def improves(self, p: Proposal) -> object | None:
        """The normalized new value when p strictly tightens a bound."""
        v = self.normalize(p.problem, p.bound, p.value)
        env = self.env[p.problem]
        if p.index == 0:
            return None
        if p.bound == "lower":
            return v if v > env.lower[p.index] else None
        return v if v < env.upper[p.index] else None

    def apply(self, rule: Rule, p: Proposal) -> bool:
        v = self.improves(p)
        if v is None:
            return False
        env = self.env[p.problem]
        bounds = env.lower if p.bound == "lower" else env.upper
        old = bounds[p.index]
        bounds[p.index] = v
        self.trace.append(Step(rule.id, rule.citation, p.problem, p.bound, p.index, old, v, p.inputs))
        if env.lower[p.index] > env.upper[p.index]:
            lo, up = env.lower[p.index], env.upper[p.index]
            raise Contradiction(
                p.problem, p.index,
                f"{p.problem}: sigma({p.index}) >= {_fmt(lo)} contradicts sigma({p.index}) <= {_fmt(up)}",
                list(self.trace),
            )
        return True

    def run(self) -> None:
        changed = True
        while changed:
            changed = False
            for rule in self.rules:
                for x in self.facts:
                    for k in range(1, self.K + 1):
                        for p in rule.fn(self, x, k):
                            if self.apply(rule, p):
                                changed = True

    def proposals(self, rule: Rule) -> Iterator[Proposal]:
        for x in self.facts:
            for k in range(1, self.K + 1):
                yield from rule.fn(self, x, k)


def _fmt(v) -> str:
    return "inf" if is_inf(v) else str(v)


def cat_bounds(f: FactSet, env: Envelope) -> CatBounds:
    lower = env.cat_lower()
    length = env.length_upper()
    if is_inf(length):
        upper = INF
    elif f.finite_dimensional:
        upper = length
    else:
        upper = 2 * length
    if f.known_cat is not None:
        m = f.known_cat
        if not lower <= m <= upper:
            raise Contradiction(f.name, None, f"{f.name}: known cat {m} outside derived bounds [{lower}, {_fmt(upper)}]")
        lower = upper = m
    if lower > upper:
        raise Contradiction(f.name, None, f"{f.name}: cat bounds [{lower}, {_fmt(upper)}] are empty")
    return CatBounds(lower, upper)


def run_fixpoint(
    problems: Mapping[str, FactSet] | Iterable[FactSet],
    target: str,
    index_cap: int | None = None,
    rule_order: Iterable[str] | None = None,
) -> InferenceResult:
    """Propagate all rules over the problem set to a fixpoint.

    Raises ``Contradiction`` when the facts are inconsistent.
    """
    if not isinstance(problems, Mapping):
        problems = {f.name: f for f in problems}
    if target not in problems:
        raise UnresolvedPeer(f"unknown target {target!r}")
    K = index_cap or problems[target].index_cap or DEFAULT_ENGINE_CAP
    rules = RULES if rule_order is None else tuple(RULES_BY_ID[r] for r in rule_order)
    eng = Engine(problems, K, rules)
    initial = {x: e.copy() for x, e in eng.env.items()}
    eng.run()
    cats = {x: cat_bounds(problems[x], e) for x, e in eng.env.items()}
    return InferenceResult(target, eng.env, initial, eng.trace, cats[target])


def replay_trace(
    initial: Mapping[str, Envelope],
    trace: Iterable[Step],
    problems: Mapping[str, FactSet] | None = None,
) -> dict[str, Envelope]:
    """Reapply recorded steps to the initial envelopes.

    Each step must start from the recorded old value and strictly tighten
    it.  With ``problems`` every step is also re-derived from its rule.
    """
    env = {x: e.copy() for x, e in initial.items()}
    eng = None
    if problems is not None:
        K = next(iter(initial.values())).K
        eng = Engine(problems, K)
        eng.env = env
    for n, step in enumerate(trace):
        if step.problem not in env:
            raise TraceMismatch(f"step {n}: unknown problem {step.problem!r}")
        e = env[step.problem]
        if step.bound not in ("lower", "upper") or not 1 <= step.index <= e.K:
            raise TraceMismatch(f"step {n}: bad target {step.bound}({step.index})")
        bounds = e.lower if step.bound == "lower" else e.upper
        cur = bounds[step.index]
        if cur != step.old:
            raise TraceMismatch(f"step {n}: expected old value {_fmt(step.old)}, found {_fmt(cur)}")
        tighter = step.new > cur if step.bound == "lower" else step.new < cur
        if not tighter:
            raise TraceMismatch(f"step {n}: {_fmt(cur)} -> {_fmt(step.new)} does not tighten the bound")
        if eng is not None:
            rule = RULES_BY_ID.get(step.rule)
            if rule is None:
                raise TraceMismatch(f"step {n}: unknown rule {step.rule!r}")
            derived = {
                (p.problem, p.bound, p.index, eng.normalize(p.problem, p.bound, p.value))
                for p in eng.proposals(rule)
            }
            if (step.problem, step.bound, step.index, step.new) not in derived:
                raise TraceMismatch(f"step {n}: rule {step.rule} does not justify {step.bound}({step.index}) = {_fmt(step.new)}")
        bounds[step.index] = step.new
    return env


def facts_for_wedge(w: WedgeOfSphereProducts, name: str = "W", index_cap: int | None = None,
                    algebra: GradedAlgebra | None = None) -> FactSet:
    """Everything the engine may assume about a wedge of sphere products.

    Integral cohomology is torsion-free, so nonvanishing degrees and
    vanishing cup products read off over Q hold for all coefficients.
    ``algebra`` may pass in an already computed H*(w; Q).
    """
    A = cohomology_of_wedge(w, QQ) if algebra is None else algebra
    h = nonzero_degrees(A)
    cups = {(a, b) for a in h for b in h if a <= b and cup_is_trivial(A, a, b)}
    return FactSet(
        name=name,
        connectivity=h[0],
        nonvanishing=frozenset(h),
        complete_up_to=A.top_degree,
        formal_dimension=A.top_degree,
        trivial_cups=frozenset(cups),
        cohomology_algebras=(A,),
        index_cap=index_cap,
    )


# -- Ganea-type bound ----------------------------------------------------------------


@dataclass
class GaneaResult:
    bound: int
    intervals: list[tuple[int, int]]
    steps: list[str] = field(default_factory=list)


def ganea_bound(k: int, n: int, a_list: Iterable[int], h: Iterable[int], complete_up_to: int) -> GaneaResult:
    """Strict upper bound cat(X) < k(l+1) from sigma_X(k) = n and an interval cover of h.

    The cover is I_j = [a_j, a_j + n - 1]; ``h`` lists every degree with
    nonzero reduced cohomology for some coefficients.
    """
    a = list(a_list)
    hs = sorted(set(h))
    if k < 1 or n < 1:
        raise InvalidFactSet(f"need k >= 1 and n >= 1, got k={k}, n={n}")
    if not a or a[0] <= 0 or any(x >= y for x, y in zip(a, a[1:])):
        raise InvalidFactSet(f"interval starts must be positive and strictly increasing: {a}")
    intervals = [(x, x + n - 1) for x in a]
    end = intervals[-1][1]
    if complete_up_to < end:
        raise IncompleteData(f"nonvanishing degrees known only up to {complete_up_to}, intervals reach {end}")
    for deg in hs:
        if not any(lo <= deg <= hi for lo, hi in intervals):
            raise HypothesisFails(f"degree {deg} lies outside every interval {intervals}")
    l = len(a)
    steps = [f"sigma({k}) = {n} lies in h, so a_1 = {a[0]} <= {n}"]
    for j in range(2, l + 1):
        steps.append(
            f"sigma({k * j}) >= sigma({k * (j - 1)}) + sigma({k}) >= {a[j - 2]} + {n} = {a[j - 2] + n}, "
            f"past I_1..I_{j - 1}, hence sigma({k * j}) >= a_{j} = {a[j - 1]}"
        )
    steps.append(
        f"sigma({k * (l + 1)}) >= {a[-1]} + {n} = {a[-1] + n} > {end}, outside h, so sigma({k * (l + 1)}) = inf"
    )
    steps.append(f"cat(X) < {k * (l + 1)}")
    return GaneaResult(k * (l + 1), intervals, steps)
