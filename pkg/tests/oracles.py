"""Brute-force reference implementations used only by the tests.

Each oracle takes a route independent of the library code it checks.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

INF = float("inf")


def formal_by_definition(vals) -> bool:
    """The growth criterion with rational arithmetic, straight from the definition."""
    if len(vals) >= 2 and vals[1] <= 1:
        return False
    return all(Fraction(vals[k + 1]) >= Fraction(k + 1, k) * vals[k] for k in range(1, len(vals) - 1))


def all_formal(max_len: int, vmax: int):
    """Every formal sequence of length 1..max_len with values <= vmax, by filtering all increasing tuples."""
    out = []
    for n in range(1, max_len + 1):
        for tail in itertools.combinations(range(1, vmax + 1), n):
            vals = (0,) + tail
            if formal_by_definition(vals):
                out.append(vals)
    return out


def brute_optimal(k: int, n: int):
    """Pointwise maximum over all formal k-term sequences ending at n."""
    best = None
    for mid in itertools.combinations(range(2, n), k - 1):
        vals = (0,) + mid + (n,)
        if not formal_by_definition(vals):
            continue
        best = vals if best is None else tuple(max(a, b) for a, b in zip(best, vals))
    return best


def brute_closure(vals, cap: int):
    """Least superadditive strictly increasing majorant, by chaotic iteration to stability."""
    t = [0] + [vals[k] if k < len(vals) else 0 for k in range(1, cap + 1)]
    changed = True
    while changed:
        changed = False
        for k in range(1, cap + 1):
            for i in range(0, k):
                need = t[i] + t[k - i] if i else t[k - 1] + 1
                if t[k] < need:
                    t[k] = need
                    changed = True
    return tuple(t)


def brute_star(s, t, n: int):
    """(s*t)(k) for k < n by direct search, s and t given as functions."""
    return [min(s(i) + t(k - i) for i in range(k + 1)) for k in range(n)]


def monomial_sigma(gens, cap: int = 64):
    """sigma of a monomial algebra: least degree of a surviving monomial with >= k factors.

    ``gens`` is a list of (degree, truncation); a k-fold product of positive
    monomials is, up to sign, a monomial with exponent sum >= k.
    """
    best: dict[int, int] = {}
    ranges = [range(t) for _, t in gens]
    for exps in itertools.product(*ranges):
        weight = sum(exps)
        deg = sum(e * d for e, (d, _) in zip(exps, gens))
        for k in range(1, weight + 1):
            if k not in best or deg < best[k]:
                best[k] = deg
    vals = [0]
    k = 1
    while k in best and k <= cap:
        vals.append(best[k])
        k += 1
    return tuple(vals)


def naive_rank(rows, p: int | None = None) -> int:
    """Dense Gaussian elimination, O(n^3), over Q (Fractions) or F_p."""
    m = [[Fraction(x) if p is None else x % p for x in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c] if p is None else pow(m[r][c], -1, p)
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
                if p is not None:
                    m[i] = [a % p for a in m[i]]
        r += 1
    return r


def product_dims_sequence(dims):
    """Sum of the k smallest sphere dimensions, independent of the library."""
    d = sorted(dims)
    return tuple(sum(d[:k]) for k in range(len(d) + 1))


# -- random algebras ---------------------------------------------------------------


def random_monomial_gens(rng, char2: bool, budget: int = 12):
    """Random (degree, truncation) generators whose monomial algebra stays small."""
    while True:
        gens = []
        for _ in range(rng.randint(1, 3)):
            d = rng.randint(2, 7)
            if d % 2 == 1 and not char2:
                t = 2
            else:
                t = rng.randint(2, 4)
            gens.append((d, t))
        size = 1
        for _, t in gens:
            size *= t
        if size - 1 <= budget:
            return gens


def random_algebra(rng, field, budget: int = 12):
    """A connected graded-commutative algebra with at most ``budget`` positive basis elements.

    Monomial quotients, optionally wedged together, optionally rewritten in a
    random basis so the structure constants are no longer monomial.
    """
    from catseq.algebra import monomial_algebra, wedge_algebra

    char2 = field.characteristic == 2
    gens = random_monomial_gens(rng, char2, budget)
    limit = rng.randint(1, sum(t - 1 for _, t in gens))
    names = [f"g{i}" for i in range(len(gens))]
    A = monomial_algebra(field, [(n, d, t) for n, (d, t) in zip(names, gens)],
                         keep=lambda e: sum(e) <= limit)
    room = budget - (A.dim() - 1)
    if room >= 2 and rng.random() < 0.3:
        g2 = random_monomial_gens(rng, char2, room)
        B = monomial_algebra(field, [(f"h{i}", d, t) for i, (d, t) in enumerate(g2)])
        if B.dim() - 1 <= room:
            A = wedge_algebra([A, B])
    if rng.random() < 0.5:
        A = rebased(A, rng)
    return A


def _random_invertible(rng, n, field):
    import sympy

    while True:
        M = sympy.Matrix(n, n, lambda i, j: rng.randint(-2, 2))
        if field.p is None:
            if M.det() != 0:
                return M, M.inv()
        elif M.det() % field.p != 0:
            return M, M.inv_mod(field.p)


def rebased(A, rng):
    """The same algebra presented in a random basis of each degree, rebuilt from its table."""
    from catseq.algebra import algebra_from_table

    f = A.field
    new_names, change, inverse = {}, {}, {}
    for d in range(A.top_degree + 1):
        idx = list(A.indices(d))
        if not idx:
            continue
        new_names[d] = [f"b{d}_{i}" for i in range(len(idx))]
        if d == 0:
            M = Minv = None
        else:
            M, Minv = _random_invertible(rng, len(idx), f)
        change[d], inverse[d] = M, Minv

    def to_old(d, r):
        # new basis element r of degree d in old coordinates
        idx = list(A.indices(d))
        if change[d] is None:
            return {idx[0]: f.one}
        return {idx[c]: f(_frac(change[d][r, c])) for c in range(len(idx)) if change[d][r, c] != 0}

    def to_new(d, vec):
        idx = list(A.indices(d))
        out = {}
        for c, x in vec.items():
            col = idx.index(c)
            for r in range(len(idx)):
                y = f(_frac(inverse[d][col, r]))
                out[new_names[d][r]] = f.add(out.get(new_names[d][r], f.zero), f.mul(x, y))
        return {n: f.format(v) for n, v in out.items() if v != 0}

    consts = {}
    for a in range(1, A.top_degree + 1):
        for b in range(1, A.top_degree + 1 - a):
            if a not in new_names or b not in new_names or (a + b) not in new_names:
                continue
            for i, x in enumerate(new_names[a]):
                for j, y in enumerate(new_names[b]):
                    prod = A.mul(to_old(a, i), to_old(b, j))
                    if prod:
                        consts[(x, y)] = to_new(a + b, prod)
    return algebra_from_table(f, A.top_degree, new_names, consts, truncated=A.truncated)



def _frac(x):
    from fractions import Fraction

    return Fraction(int(x.p), int(x.q))
