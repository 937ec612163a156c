"""Finite-dimensional connected graded-commutative algebras.

An algebra is stored by an ordered basis (grouped by degree) and the
structure constants of products of positive-degree basis elements.
Products with the unit are implicit and products landing above the top
degree vanish.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping, Sequence as _Seq

from .linalg import Echelon, Field, axpy
from .sequences import DEFAULT_INDEX_CAP, Sequence


class AlgebraError(ValueError):
    pass


class BadDegree(AlgebraError):
    pass


class SignClash(AlgebraError):
    pass


class BadParity(AlgebraError):
    pass


class BadTruncation(AlgebraError):
    pass


class NotCommutative(AlgebraError):
    pass


class NotAssociative(AlgebraError):
    pass


class NotConnected(AlgebraError):
    pass


class BadUnit(AlgebraError):
    pass


class FieldMismatch(AlgebraError):
    pass


@dataclass(eq=False)
class GradedAlgebra:
    """Basis names per degree 0..top_degree plus positive structure constants.

    ``products[(i, j)]`` is the sparse coordinate vector of ``e_i * e_j`` in
    global basis indices; missing pairs multiply to zero.  ``truncated``
    marks a finite truncation of an infinite algebra.
    """

    field: Field
    top_degree: int
    basis: tuple[tuple[str, ...], ...]
    products: dict[tuple[int, int], dict[int, object]]
    truncated: bool = False
    names: tuple[str, ...] = dc_field(init=False)
    degrees: tuple[int, ...] = dc_field(init=False)
    index: dict[str, int] = dc_field(init=False)
    offsets: tuple[int, ...] = dc_field(init=False)
    _sigma: dict = dc_field(init=False, default_factory=dict, repr=False)

    def __post_init__(self):
        names, degrees, offsets = [], [], []
        for d, row in enumerate(self.basis):
            offsets.append(len(names))
            names.extend(row)
            degrees.extend([d] * len(row))
        offsets.append(len(names))
        self.names = tuple(names)
        self.degrees = tuple(degrees)
        self.offsets = tuple(offsets)
        self.index = {n: i for i, n in enumerate(names)}
        if len(self.index) != len(names):
            raise AlgebraError("basis names must be distinct")

    @property
    def unit(self) -> str:
        return self.names[0]

    def dim(self, degree: int | None = None) -> int:
        if degree is None:
            return len(self.names)
        if degree < 0 or degree > self.top_degree:
            return 0
        return len(self.basis[degree])

    def indices(self, degree: int) -> range:
        if degree < 0 or degree > self.top_degree:
            return range(0)
        return range(self.offsets[degree], self.offsets[degree + 1])

    def positive_indices(self) -> range:
        return range(1, len(self.names))

    def mul_basis(self, i: int, j: int) -> dict:
        if i == 0:
            return {j: self.field.one}
        if j == 0:
            return {i: self.field.one}
        return self.products.get((i, j), {})

    def mul(self, u: Mapping, v: Mapping) -> dict:
        f = self.field
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                if self.degrees[i] + self.degrees[j] > self.top_degree:
                    continue
                prod = self.mul_basis(i, j)
                if prod:
                    axpy(f, f.mul(a, b), prod, out)
        return out

    def element(self, name: str) -> dict:
        return {self.index[name]: self.field.one}

    def __repr__(self) -> str:
        dims = [len(b) for b in self.basis]
        return f"GradedAlgebra({self.field}, dims={dims}, truncated={self.truncated})"

    def to_json(self) -> dict:
        f = self.field
        products = []
        for (i, j), vec in sorted(self.products.items()):
            if vec:
                products.append([
                    self.names[i],
                    self.names[j],
                    {self.names[c]: f.format(x) for c, x in sorted(vec.items())},
                ])
        table = {
            "top_degree": self.top_degree,
            "basis": {str(d): list(row) for d, row in enumerate(self.basis) if row},
            "products": products,
        }
        out = {"field": f.to_json(), "presentation": {"table": table}}
        if self.truncated:
            out["truncated"] = True
        return out


def _check_degree(d: int) -> None:
    if isinstance(d, bool) or not isinstance(d, int) or d < 2:
        raise BadDegree(f"generator degree must be an integer >= 2, got {d!r}")


# -- monomial algebras ------------------------------------------------------


def _monomial_name(gen_names: _Seq[str], exps: _Seq[int]) -> str:
    parts = []
    for g, e in zip(gen_names, exps):
        if e == 1:
            parts.append(g)
        elif e > 1:
            parts.append(f"{g}^{e}")
    return "".join(parts) or "1"


def monomial_algebra(
    field: Field,
    gens: _Seq[tuple[str, int, int]],
    top_degree: int | None = None,
    keep=None,
    truncated: bool = False,
) -> GradedAlgebra:
    """Quotient of the free graded-commutative algebra by a monomial ideal.

    ``gens`` holds ``(name, degree, truncation)``: ``g**truncation = 0``.
    ``keep(exponents)`` selects the surviving monomials and must be closed
    under taking divisors.  Signs follow the Koszul rule for odd generators.
    """
    degs = [d for _, d, _ in gens]
    names = [n for n, _, _ in gens]
    full_top = sum((t - 1) * d for _, d, t in gens)
    D = full_top if top_degree is None else top_degree
    monos = []
    for exps in itertools.product(*(range(t) for _, _, t in gens)):
        deg = sum(e * d for e, d in zip(exps, degs))
        if deg > D or (keep is not None and not keep(exps)):
            continue
        monos.append((deg, exps))
    monos.sort(key=lambda m: (m[0], tuple(-e for e in m[1])))
    basis: list[list[str]] = [[] for _ in range(D + 1)]
    for deg, exps in monos:
        basis[deg].append(_monomial_name(names, exps))
    alg_index = {exps: k for k, (_, exps) in enumerate(monos)}
    odd = [d % 2 == 1 for d in degs]
    char2 = field.characteristic == 2
    products: dict = {}
    for i, (di, a) in enumerate(monos):
        if di == 0:
            continue
        for j, (dj, b) in enumerate(monos):
            if dj == 0 or di + dj > D:
                continue
            c = tuple(x + y for x, y in zip(a, b))
            k = alg_index.get(c)
            if k is None:
                continue
            swaps = 0
            if not char2:
                for p in range(len(c)):
                    if odd[p] and a[p]:
                        swaps += a[p] * sum(b[q] for q in range(p) if odd[q])
            products[(i, j)] = {k: field.sign(swaps)}
    return GradedAlgebra(field, D, tuple(tuple(r) for r in basis), products, truncated)


def _default_names(degrees: _Seq[int]) -> list[str]:
    seen: dict[int, int] = {}
    out = []
    for d in degrees:
        seen[d] = seen.get(d, 0) + 1
        out.append(f"x{d}" if seen[d] == 1 else f"x{d}_{seen[d]}")
    return out


def exterior_algebra(field: Field, degrees: _Seq[int], names: _Seq[str] | None = None) -> GradedAlgebra:
    for d in degrees:
        _check_degree(d)
        if d % 2 == 0 and field.characteristic != 2:
            raise SignClash(
                f"even-degree exterior generator x{d} over {field}; use a truncated polynomial"
            )
    names = list(names) if names is not None else _default_names(degrees)
    return monomial_algebra(field, [(n, d, 2) for n, d in zip(names, degrees)])


def truncated_polynomial_algebra(
    field: Field,
    gens: _Seq[tuple[int, int | None]],
    names: _Seq[str] | None = None,
    degree_cap: int | None = None,
) -> GradedAlgebra:
    """Monomial algebra with ``x**t = 0`` per ``(degree, t)`` generator.

    ``t = None`` gives an honest polynomial generator; the result is then
    truncated at ``degree_cap`` and flagged as a truncation.
    """
    gens = list(gens)
    infinite = False
    for d, t in gens:
        _check_degree(d)
        if d % 2 == 1 and field.characteristic != 2:
            raise BadParity(f"odd-degree polynomial generator x{d} requires characteristic 2")
        if t is None:
            infinite = True
        elif isinstance(t, bool) or not isinstance(t, int) or t < 2:
            raise BadTruncation(f"truncation must be >= 2, got {t!r}")
    if infinite and degree_cap is None:
        raise BadTruncation("a polynomial generator without truncation needs a degree cap")
    names = list(names) if names is not None else _default_names([d for d, _ in gens])
    if infinite:
        bounded = [(n, d, t if t is not None else degree_cap // d + 1) for n, (d, t) in zip(names, gens)]
        return monomial_algebra(field, bounded, top_degree=degree_cap, truncated=True)
    return monomial_algebra(field, [(n, d, t) for n, (d, t) in zip(names, gens)])


def ground_field_algebra(field: Field) -> GradedAlgebra:
    return GradedAlgebra(field, 0, (("1",),), {})


# -- tables -----------------------------------------------------------------


def algebra_from_table(
    field: Field,
    top_degree: int,
    basis: Mapping[int, _Seq[str]] | _Seq[_Seq[str]],
    structure_constants: Mapping[tuple[str, str], Mapping[str, object]],
    implicit_unit: bool = True,
    truncated: bool = False,
) -> GradedAlgebra:
    """Build and validate an algebra from a hand-written multiplication table.

    Unlisted products of positive-degree elements are zero.  When only one
    of ``x*y`` and ``y*x`` is listed the other is filled in by graded
    commutativity.  With ``implicit_unit=False`` every product with the
    unit must be listed.
    """
    if isinstance(basis, Mapping):
        rows = [list(basis.get(d, basis.get(str(d), ()))) for d in range(top_degree + 1)]
        extra = [d for d in basis if int(d) > top_degree or int(d) < 0]
        if extra:
            raise BadDegree(f"basis degrees {extra} outside 0..{top_degree}")
    else:
        rows = [list(r) for r in basis]
        if len(rows) != top_degree + 1:
            raise BadDegree(f"expected {top_degree + 1} basis rows, got {len(rows)}")
    if len(rows[0]) != 1:
        raise NotConnected(f"degree 0 must be spanned by a single unit, got {rows[0]}")
    if top_degree >= 1 and rows[1]:
        raise NotConnected(f"degree 1 must be empty, got {rows[1]}")

    names = [n for r in rows for n in r]
    index = {n: i for i, n in enumerate(names)}
    if len(index) != len(names):
        raise AlgebraError("basis names must be distinct")
    degree = {n: d for d, r in enumerate(rows) for n in r}
    unit = rows[0][0]

    def vec(target: Mapping[str, object], where: str) -> dict:
        out = {}
        for name, c in target.items():
            if name not in index:
                raise AlgebraError(f"{where}: unknown basis element {name!r}")
            x = field(c)
            if x != 0:
                out[index[name]] = x
        return out

    given: dict[tuple[int, int], dict] = {}
    for (x, y), target in structure_constants.items():
        for n in (x, y):
            if n not in index:
                raise AlgebraError(f"product {x}*{y}: unknown basis element {n!r}")
        v = vec(target, f"product {x}*{y}")
        want = degree[x] + degree[y]
        for c in v:
            if degree[names[c]] != want:
                raise BadDegree(
                    f"product {x}*{y} has a term {names[c]} outside degree {want}"
                )
        if want > top_degree and v:
            raise BadDegree(f"product {x}*{y} lands above top degree {top_degree}")
        given[(index[x], index[y])] = v

    u = index[unit]
    for n in names:
        i = index[n]
        expect = {i: field.one}
        for key in ((u, i), (i, u)):
            if key in given:
                if given[key] != expect:
                    a, b = names[key[0]], names[key[1]]
                    raise BadUnit(f"unit law fails: {a}*{b} != {n}")
            elif not implicit_unit:
                a, b = names[key[0]], names[key[1]]
                raise BadUnit(f"missing unit row: {a}*{b} is not listed")

    products: dict = {}
    pos = [i for i in range(len(names)) if i != u]
    char2 = field.characteristic == 2
    for i in pos:
        for j in pos:
            if degree[names[i]] + degree[names[j]] > top_degree:
                continue
            s = field.sign(degree[names[i]] * degree[names[j]])
            if (i, j) in given:
                v = given[(i, j)]
                if (j, i) in given:
                    w = {c: field.mul(s, x) for c, x in given[(j, i)].items()}
                    if v != w:
                        raise NotCommutative(
                            f"{names[i]}*{names[j]} != (-1)^({degree[names[i]]}*{degree[names[j]]}) "
                            f"{names[j]}*{names[i]}"
                        )
            elif (j, i) in given:
                v = {c: field.mul(s, x) for c, x in given[(j, i)].items()}
            else:
                v = {}
            if i == j and v and not char2 and degree[names[i]] % 2 == 1:
                raise NotCommutative(f"odd-degree square {names[i]}*{names[i]} must vanish")
            if v:
                products[(i, j)] = v

    alg = GradedAlgebra(field, top_degree, tuple(tuple(r) for r in rows), products, truncated)
    check_associative(alg)
    return alg


def check_associative(alg: GradedAlgebra) -> None:
    pos = list(alg.positive_indices())
    D = alg.top_degree
    deg = alg.degrees
    for a in pos:
        for b in pos:
            if deg[a] + deg[b] > D:
                continue
            ab = alg.mul_basis(a, b)
            for c in pos:
                if deg[a] + deg[b] + deg[c] > D:
                    continue
                left = alg.mul(ab, {c: alg.field.one})
                right = alg.mul({a: alg.field.one}, alg.mul_basis(b, c))
                if left != right:
                    n = alg.names
                    raise NotAssociative(f"({n[a]}*{n[b]})*{n[c]} != {n[a]}*({n[b]}*{n[c]})")


# -- constructions ----------------------------------------------------------


def _effective_top(parts: Iterable[GradedAlgebra], full: int) -> tuple[int, bool]:
    caps = [p.top_degree for p in parts if p.truncated]
    if caps:
        return min(full, min(caps)), True
    return full, False


def tensor(A: GradedAlgebra, B: GradedAlgebra) -> GradedAlgebra:
    """Graded tensor product with (a(x)b)(a'(x)b') = (-1)^{|b||a'|} aa' (x) bb'."""
    if A.field != B.field:
        raise FieldMismatch(f"cannot tensor over {A.field} and {B.field}")
    f = A.field
    D, truncated = _effective_top((A, B), A.top_degree + B.top_degree)
    pairs = [
        (A.degrees[i] + B.degrees[j], i, j)
        for i in range(A.dim())
        for j in range(B.dim())
        if A.degrees[i] + B.degrees[j] <= D
    ]
    pairs.sort()
    basis: list[list[str]] = [[] for _ in range(D + 1)]
    where = {}
    for k, (d, i, j) in enumerate(pairs):
        where[(i, j)] = k
        if i == 0 and j == 0:
            name = "1"
        else:
            name = f"{A.names[i]}⊗{B.names[j]}"
        basis[d].append(name)

    products: dict = {}
    for k1, (d1, a, b) in enumerate(pairs):
        if d1 == 0:
            continue
        for k2, (d2, a2, b2) in enumerate(pairs):
            if d2 == 0 or d1 + d2 > D:
                continue
            pa = A.mul_basis(a, a2)
            if not pa:
                continue
            pb = B.mul_basis(b, b2)
            if not pb:
                continue
            s = f.sign(B.degrees[b] * A.degrees[a2])
            out = {}
            for i, x in pa.items():
                for j, y in pb.items():
                    out[where[(i, j)]] = f.mul(s, f.mul(x, y))
            products[(k1, k2)] = out
    return GradedAlgebra(f, D, tuple(tuple(r) for r in basis), products, truncated)


def wedge_algebra(parts: _Seq[GradedAlgebra]) -> GradedAlgebra:
    """Connected direct sum: the algebras share the unit, cross products vanish."""
    if not parts:
        raise AlgebraError("need at least one summand")
    f = parts[0].field
    for p in parts:
        if p.field != f:
            raise FieldMismatch(f"cannot combine {f} and {p.field}")
    D, truncated = _effective_top(parts, max(p.top_degree for p in parts))
    entries = [(0, -1, 0)]
    for s, p in enumerate(parts):
        for i in p.positive_indices():
            if p.degrees[i] <= D:
                entries.append((p.degrees[i], s, i))
    entries.sort()
    where = {(s, i): k for k, (_, s, i) in enumerate(entries)}
    basis: list[list[str]] = [[] for _ in range(D + 1)]
    basis[0].append("1")
    multi = len(parts) > 1
    for d, s, i in entries[1:]:
        name = parts[s].names[i]
        basis[d].append(f"{name}@{s + 1}" if multi else name)
    products: dict = {}
    for s, p in enumerate(parts):
        for (i, j), vec in p.products.items():
            if (s, i) in where and (s, j) in where and vec:
                products[(where[(s, i)], where[(s, j)])] = {where[(s, c)]: x for c, x in vec.items()}
    return GradedAlgebra(f, D, tuple(tuple(r) for r in basis), products, truncated)


# -- augmentation ideal powers ----------------------------------------------


@dataclass
class IdealPowerTable:
    """``powers[k-1][n]`` is an echelon basis of the degree-n part of Abar^k."""

    algebra: GradedAlgebra
    powers: list[list[Echelon]]

    @property
    def max_k(self) -> int:
        return len(self.powers)

    def component(self, k: int, n: int) -> list[dict]:
        if k < 1:
            raise ValueError("k must be >= 1")
        if k > len(self.powers) or n < 0 or n > self.algebra.top_degree:
            return []
        return self.powers[k - 1][n].basis()

    def dim(self, k: int, n: int) -> int:
        if k > len(self.powers) or n < 0 or n > self.algebra.top_degree:
            return 0
        return len(self.powers[k - 1][n])

    def is_zero(self, k: int) -> bool:
        return all(self.dim(k, n) == 0 for n in range(self.algebra.top_degree + 1))


def _left_mul(A: GradedAlgebra, i: int, v: Mapping) -> dict:
    # e_i * v for a positive-degree e_i and homogeneous v with room below the top
    p = A.field.p
    products = A.products
    out: dict = {}
    for j, b in v.items():
        prod = products.get((i, j))
        if prod:
            for c, x in prod.items():
                out[c] = out.get(c, 0) + x * b
    if p:
        return {c: x % p for c, x in out.items() if x % p}
    return {c: x for c, x in out.items() if x}


def ideal_powers(A: GradedAlgebra, max_k: int) -> IdealPowerTable:
    """Row-reduced bases of (Abar^k)^n for k <= max_k.

    Abar^k is spanned by g * v with g running over a lifted basis of the
    indecomposables Abar / Abar^2 and v over a basis of Abar^(k-1).  The
    indecomposables are found degree by degree while Abar^2 is built, since
    (Abar^2)^n only involves lower degrees.  Stops once a power vanishes.
    """
    f = A.field
    D = A.top_degree
    first = []
    for n in range(D + 1):
        e = Echelon(f)
        if n >= 1:
            for i in A.indices(n):
                e.add({i: f.one})
        first.append(e)
    powers = [first]
    gens: list[list[int]] = [[] for _ in range(D + 1)]
    zero = D < 1 or all(len(e) == 0 for e in first)
    while len(powers) < max_k and not zero:
        prev = powers[-1]
        second = len(powers) == 1
        cur = []
        for n in range(D + 1):
            e = Echelon(f)
            for a in range(1, n):
                if not gens[a] or not len(prev[n - a]):
                    continue
                rows = prev[n - a].pivots.values()
                for i in gens[a]:
                    for v in rows:
                        e.add(_left_mul(A, i, v))
            cur.append(e)
            if second and n >= 1:
                probe = Echelon(f, e.pivots.values())
                gens[n] = [i for i in A.indices(n) if probe.add({i: f.one})]
        powers.append(cur)
        zero = all(len(e) == 0 for e in cur)
    return IdealPowerTable(A, powers)


def product_length_sequence(A: GradedAlgebra, index_cap: int = DEFAULT_INDEX_CAP) -> Sequence:
    """sigma_A(k) = least degree holding a nonzero k-fold product of Abar."""
    cached = A._sigma.get(index_cap)
    if cached is not None:
        return cached
    for s in A._sigma.values():
        # a sequence that ended below its cap is complete for any larger cap
        if s.cap_note is None and len(s) <= index_cap + 1:
            return s
    table = ideal_powers(A, index_cap + 1)
    vals = [0]
    for k in range(1, min(index_cap, table.max_k) + 1):
        degs = [n for n in range(A.top_degree + 1) if table.dim(k, n)]
        if not degs:
            break
        vals.append(min(degs))
    cap = None
    if A.truncated:
        cap = A.top_degree
    elif len(vals) == index_cap + 1 and not table.is_zero(index_cap + 1):
        cap = vals[-1]
    A._sigma[index_cap] = out = Sequence(tuple(vals), cap)
    return out


def nilpotency(A: GradedAlgebra) -> int:
    """Greatest k with Abar^k != 0 (0 for the ground field)."""
    table = ideal_powers(A, A.top_degree + 1)
    k = 0
    while k < table.max_k and not table.is_zero(k + 1):
        k += 1
    return k


def cup_is_trivial(A: GradedAlgebra, a: int, b: int) -> bool:
    """True when every product A^a * A^b is zero."""
    if a + b > A.top_degree:
        return True
    return all(not A.mul_basis(i, j) for i in A.indices(a) for j in A.indices(b))


def nonzero_degrees(A: GradedAlgebra) -> list[int]:
    return [d for d in range(1, A.top_degree + 1) if A.dim(d)]
