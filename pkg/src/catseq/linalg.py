"""Exact linear algebra over Q and F_p on sparse vectors.

Vectors are dicts ``{column: coefficient}`` holding only nonzero entries.
Elements of Q are ``Fraction``; elements of F_p are ints in ``range(p)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping


_QZERO = Fraction(0)
_QONE = Fraction(1)


class FieldError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Field:
    """Either the rationals (``p is None``) or the prime field F_p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise FieldError(f"F_p requires p prime, got {self.p}")

    @property
    def characteristic(self) -> int:
        return self.p or 0

    @property
    def zero(self):
        return 0 if self.p else _QZERO

    @property
    def one(self):
        return 1 if self.p else _QONE

    def __call__(self, x):
        """Coerce an int, Fraction or coefficient string into the field."""
        if isinstance(x, str):
            x = Fraction(x.strip().replace("−", "-"))
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise FieldError(f"{x} has no image in F_{self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p else a * b

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p) if self.p else _QONE / a

    def sign(self, e: int):
        """(-1)^e in the field."""
        return self.neg(self.one) if e % 2 else self.one

    def format(self, a) -> str:
        if self.p:
            return str(a)
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def to_json(self):
        return "Q" if self.p is None else {"Fp": self.p}

    def __str__(self) -> str:
        return "Q" if self.p is None else f"F_{self.p}"


QQ = Field()


def GF(p: int) -> Field:
    return Field(p)


Vec = dict


def axpy(field: Field, a, x: Mapping, y: dict) -> dict:
    """y += a*x in place, dropping zeros."""
    p = field.p
    for col, v in x.items():
        w = y.get(col, 0) + a * v
        if p:
            w %= p
        if w == 0:
            y.pop(col, None)
        else:
            y[col] = w
    return y


def scale(field: Field, a, x: Mapping) -> dict:
    if a == 0:
        return {}
    if field.p:
        return {c: a * v % field.p for c, v in x.items()}
    return {c: a * v for c, v in x.items()}


class Echelon:
    """Incrementally maintained row-echelon basis of a subspace.

    Each stored row has leading coefficient 1 at its pivot column and no
    entries left of it.
    """

    def __init__(self, field: Field, rows: Iterable[Mapping] = ()):
        self.field = field
        self.pivots: dict[int, dict] = {}
        for row in rows:
            self.add(row)

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: Mapping) -> dict:
        """Remainder of vec after eliminating every pivot column it meets."""
        field = self.field
        v = {c: x for c, x in vec.items() if x != 0}
        done: dict = {}
        while v:
            col = min(v)
            row = self.pivots.get(col)
            if row is None:
                done[col] = v.pop(col)
                continue
            axpy(field, field.neg(v[col]), row, v)
        return done

    def add(self, vec: Mapping) -> bool:
        """Insert vec; return True when it enlarged the span."""
        r = self.reduce(vec)
        if not r:
            return False
        col = min(r)
        self.pivots[col] = scale(self.field, self.field.inv(r[col]), r)
        return True

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    def basis(self) -> list[dict]:
        """Reduced row-echelon basis, ordered by pivot column."""
        field = self.field
        cols = sorted(self.pivots)
        rows = {c: dict(self.pivots[c]) for c in cols}
        for c in reversed(cols):
            row = rows[c]
            for other in cols:
                if other < c and c in rows[other]:
                    axpy(field, field.neg(rows[other][c]), row, rows[other])
        return [rows[c] for c in cols]


def _sparse(row, field: Field) -> dict:
    items = row.items() if isinstance(row, Mapping) else enumerate(row)
    out = {}
    for i, x in items:
        x = field(x)
        if x != 0:
            out[i] = x
    return out


def row_reduce(rows: Iterable, field: Field) -> list[dict]:
    """RREF basis of the span of ``rows`` (dense lists or sparse dicts)."""
    return Echelon(field, (_sparse(r, field) for r in rows)).basis()


def rank(rows: Iterable, field: Field) -> int:
    return len(Echelon(field, (_sparse(r, field) for r in rows)))


def in_span(vec, rows: Iterable, field: Field) -> bool:
    return Echelon(field, (_sparse(r, field) for r in rows)).contains(_sparse(vec, field))
