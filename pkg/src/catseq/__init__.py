"""Categorical sequences: sequence arithmetic, graded algebras, realization and bound inference."""

from .algebra import (
    GradedAlgebra,
    IdealPowerTable,
    algebra_from_table,
    exterior_algebra,
    ideal_powers,
    nilpotency,
    product_length_sequence,
    tensor,
    truncated_polynomial_algebra,
)
from .inference import (
    Contradiction,
    Envelope,
    FactSet,
    Relation,
    ganea_bound,
    replay_trace,
    run_fixpoint,
)
from .linalg import GF, QQ, Field
from .realization import (
    SphereProduct,
    WedgeOfSphereProducts,
    cohomology_of_wedge,
    realize_formal,
    sequence_of_product,
    sequence_of_wedge,
)
from .sequences import (
    INF,
    CatBounds,
    Sequence,
    cat_bounds_from_length,
    is_formal,
    make_sequence,
    optimal_sequence,
    seq_length,
    seq_min,
    seq_star,
    superadditive_closure,
)

__all__ = [
    "CatBounds", "Contradiction", "Envelope", "FactSet", "Field", "GF", "GradedAlgebra",
    "INF", "IdealPowerTable", "QQ", "Relation", "Sequence", "SphereProduct",
    "WedgeOfSphereProducts", "algebra_from_table", "cat_bounds_from_length",
    "cohomology_of_wedge", "exterior_algebra", "ganea_bound", "ideal_powers", "is_formal",
    "make_sequence", "nilpotency", "optimal_sequence", "product_length_sequence",
    "realize_formal", "replay_trace", "run_fixpoint", "seq_length", "seq_min", "seq_star",
    "sequence_of_product", "sequence_of_wedge", "superadditive_closure", "tensor",
    "truncated_polynomial_algebra",
]
