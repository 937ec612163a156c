"""Categorical sequences and their arithmetic.

A sequence is a map k -> N u {inf} with s(0) = 0 whose finite values are
strictly increasing.  Only the finite prefix is stored; every index past
the prefix is infinite, or, when ``cap_note`` is set, "unknown but > D".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

INF = math.inf

DEFAULT_INDEX_CAP = 64


class SequenceError(ValueError):
    """Base class for invalid sequence input."""


class NotMonotone(SequenceError):
    pass


class BadOrigin(SequenceError):
    pass


class FiniteAfterInfinite(SequenceError):
    pass


class CapAmbiguous(SequenceError):
    pass


class BadInput(SequenceError):
    pass


def is_inf(v) -> bool:
    return isinstance(v, float) and math.isinf(v) and v > 0


@dataclass(frozen=True)
class Sequence:
    values: tuple[int, ...]
    cap_note: int | None = None

    def __post_init__(self):
        vals = self.values
        if not vals or vals[0] != 0:
            raise BadOrigin(f"sequence must start at 0, got {list(vals)}")
        for k in range(1, len(vals)):
            if vals[k] <= vals[k - 1]:
                raise NotMonotone(
                    f"finite values must strictly increase: s({k - 1})={vals[k - 1]}, s({k})={vals[k]}"
                )

    def __getitem__(self, k: int):
        if k < 0:
            raise IndexError(k)
        return self.values[k] if k < len(self.values) else INF

    def __len__(self) -> int:
        return len(self.values)

    @property
    def finite_length(self) -> int:
        """Largest index with a stored finite value."""
        return len(self.values) - 1

    def is_unknown(self, k: int) -> bool:
        return self.cap_note is not None and k >= len(self.values)

    def to_json(self) -> list:
        out: list = list(self.values)
        if self.cap_note is not None:
            out.append(f">{self.cap_note}")
        return out

    def __str__(self) -> str:
        body = ",".join(str(v) for v in self.values)
        if self.cap_note is not None:
            return f"({body},...)"
        return f"({body})"


@dataclass(frozen=True)
class CatBounds:
    lower: int
    upper: float | int

    def __post_init__(self):
        if self.lower > self.upper:
            raise BadInput(f"cat bounds out of order: {self.lower} > {self.upper}")


def make_sequence(values: Iterable, cap_note: int | None = None) -> Sequence:
    """Validate a list of naturals (with trailing inf allowed) into a Sequence."""
    vals = list(values)
    if not vals or is_inf(vals[0]) or vals[0] != 0:
        raise BadOrigin(f"values[0] must be 0, got {vals[:1]}")
    finite: list[int] = []
    seen_inf = False
    for k, v in enumerate(vals):
        if is_inf(v):
            seen_inf = True
            continue
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise BadInput(f"entry {k} is not a natural number: {v!r}")
        if seen_inf:
            raise FiniteAfterInfinite(f"finite entry {v} at index {k} follows an infinite one")
        if finite and v <= finite[-1]:
            raise NotMonotone(f"s({k - 1})={finite[-1]} is not < s({k})={v}")
        finite.append(v)
    return Sequence(tuple(finite), cap_note)


def _caps(*seqs: Sequence) -> int | None:
    notes = [s.cap_note for s in seqs if s.cap_note is not None]
    return min(notes) if notes else None


def _with_cap(vals: list, cap: int | None) -> Sequence:
    # values above the cap may hide a smaller unknown contribution
    finite = []
    for v in vals:
        if is_inf(v) or (cap is not None and v > cap):
            break
        finite.append(int(v))
    return Sequence(tuple(finite), cap)


def seq_min(s: Sequence, t: Sequence) -> Sequence:
    n = max(len(s), len(t))
    return _with_cap([min(s[k], t[k]) for k in range(n)], _caps(s, t))


def seq_star(s: Sequence, t: Sequence) -> Sequence:
    """(s*t)(k) = min over i+j=k of s(i) + t(j)."""
    n = len(s) + len(t) - 1
    vals = [min(s[i] + t[k - i] for i in range(k + 1)) for k in range(n)]
    return _with_cap(vals, _caps(s, t))


def seq_leq(s: Sequence, t: Sequence) -> bool:
    """Pointwise s <= t, with inf as top."""
    return all(s[k] <= t[k] for k in range(max(len(s), len(t))))


def superadditive_closure(s: Sequence, index_cap: int = DEFAULT_INDEX_CAP) -> Sequence:
    """Least strictly increasing superadditive t with t >= s on 0..index_cap.

    Indices where s is infinite impose no constraint, so the result always
    has finite values up to the cap.
    """
    n = max(index_cap, s.finite_length)
    t = [0] * (n + 1)
    for k in range(1, n + 1):
        best = t[k - 1] + 1
        if k < len(s):
            best = max(best, s.values[k])
        for i in range(1, k // 2 + 1):
            best = max(best, t[i] + t[k - i])
        t[k] = best
    return Sequence(tuple(t), s.cap_note)


def seq_length(s: Sequence) -> int:
    if s.cap_note is not None:
        raise CapAmbiguous(
            f"length of {s} depends on entries unknown above degree {s.cap_note}"
        )
    return s.finite_length


def cat_bounds_from_length(length: int, finite_dimensional: bool) -> CatBounds:
    if finite_dimensional:
        return CatBounds(length, length)
    return CatBounds(length, 2 * length)


def is_formal(s: Sequence) -> bool:
    """s(1) > 1 and k*s(k+1) >= (k+1)*s(k) wherever s(k+1) is finite."""
    if s[1] <= 1:
        return False
    vals = s.values
    return all(k * vals[k + 1] >= (k + 1) * vals[k] for k in range(1, len(vals) - 1))


def optimal_sequence(k: int, n: int) -> Sequence:
    """Pointwise-largest k-term sequence ending at n with the formal growth rate.

    Write n = k*x + r with 0 <= r < k; the first k - r steps have size x and
    the last r steps have size x + 1.
    """
    if k <= 0 or k > n:
        raise BadInput(f"need 0 < k <= n, got k={k}, n={n}")
    x, r = divmod(n, k)
    small = k - r
    vals = [j * x for j in range(small + 1)]
    vals += [small * x + j * (x + 1) for j in range(1, r + 1)]
    return Sequence(tuple(vals))

