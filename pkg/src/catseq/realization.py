"""Wedges of products of spheres and the realization of formal sequences."""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import GradedAlgebra, _default_names, exterior_algebra, monomial_algebra, \
    truncated_polynomial_algebra, wedge_algebra
from .linalg import Field
from .sequences import Sequence, SequenceError, is_formal, seq_min


class NotFormal(SequenceError):
    pass


class HasUnknowns(SequenceError):
    pass


@dataclass(frozen=True)
class SphereProduct:
    dims: tuple[int, ...]

    def __post_init__(self):
        if not self.dims:
            raise ValueError("a sphere product needs at least one factor")
        if any(isinstance(d, bool) or not isinstance(d, int) or d < 2 for d in self.dims):
            raise ValueError(f"sphere dimensions must be integers >= 2, got {self.dims}")
        object.__setattr__(self, "dims", tuple(sorted(self.dims)))

    def __str__(self) -> str:
        return "×".join(f"S^{d}" for d in self.dims)


@dataclass(frozen=True)
class WedgeOfSphereProducts:
    summands: tuple[SphereProduct, ...]

    def __post_init__(self):
        if not self.summands:
            raise ValueError("a wedge needs at least one summand")

    @classmethod
    def of(cls, *dims_lists) -> WedgeOfSphereProducts:
        return cls(tuple(SphereProduct(tuple(d)) for d in dims_lists))

    def to_json(self) -> dict:
        return {"summands": [list(p.dims) for p in self.summands]}

    def __str__(self) -> str:
        parts = [str(p) if len(p.dims) == 1 else f"({p})" for p in self.summands]
        return " ∨ ".join(parts)


def sequence_of_product(p: SphereProduct) -> Sequence:
    """sigma(k) is the sum of the k smallest sphere dimensions."""
    vals = [0]
    for d in p.dims:
        vals.append(vals[-1] + d)
    return Sequence(tuple(vals))


def sequence_of_wedge(w: WedgeOfSphereProducts) -> Sequence:
    out = sequence_of_product(w.summands[0])
    for p in w.summands[1:]:
        out = seq_min(out, sequence_of_product(p))
    return out


def stage_product(k: int, n: int) -> SphereProduct:
    """The product of spheres whose sequence is the optimal k-term one ending at n."""
    x, r = divmod(n, k)
    return SphereProduct((x,) * (k - r) + (x + 1,) * r)


def realize_formal(s: Sequence) -> WedgeOfSphereProducts:
    """Wedge of sphere products with sequence exactly s.

    One summand per prefix length k, realizing the optimal k-term sequence
    through s(k); for a formal s every earlier value is dominated, so the
    pointwise minimum reproduces s.
    """
    if s.cap_note is not None:
        raise HasUnknowns(f"{s} has entries unknown above degree {s.cap_note}")
    if s.finite_length < 1:
        raise NotFormal(f"{s} has length 0 and no realizing wedge")
    if not is_formal(s):
        raise NotFormal(f"{s} is not a formal sequence")
    summands = tuple(stage_product(k, s.values[k]) for k in range(1, len(s.values)))
    w = WedgeOfSphereProducts(summands)
    if sequence_of_wedge(w) != s:
        raise AssertionError(f"realization of {s} produced {sequence_of_wedge(w)}")
    return w


def sphere_cohomology(field: Field, n: int) -> GradedAlgebra:
    if n % 2 == 1 or field.characteristic == 2:
        return exterior_algebra(field, [n])
    return truncated_polynomial_algebra(field, [(n, 2)])


def product_cohomology(p: SphereProduct, field: Field) -> GradedAlgebra:
    """Tensor product of the spheres' rings, built directly on monomials."""
    names = _default_names(p.dims)
    return monomial_algebra(field, [(n, d, 2) for n, d in zip(names, p.dims)])


def cohomology_of_wedge(w: WedgeOfSphereProducts, field: Field) -> GradedAlgebra:
    return wedge_algebra([product_cohomology(p, field) for p in w.summands])
