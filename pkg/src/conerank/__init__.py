"""Nonnegative rank bounds and certificates for small matrices.

Exact certification for rank <= 3 (constructive factorization at rank <= 2,
nested-polygon geometry at rank 3), heuristic NMF upper bounds elsewhere, and
a numerical laboratory for the rank-three cosine kernel operator whose
discretizations exhibit unbounded nonnegative rank.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .errors import ConerankError, DimensionError, FormatError, PreconditionError
from .lowrank import factor_rank_le2
from .matcore import (
    ExactMatrix,
    FloatMatrix,
    GridSpec,
    circulant,
    rank_exact,
    rank_float,
    robbins_matrix,
    sample_kernel,
    scale_and_permute,
)
from .nmf import MinKResult, SearchResult, min_k_search, search_upper
from .nnfactor import (
    NonnegFactorization,
    RankBounds,
    bounds,
    product_witness,
    sandwich_witness,
    sum_witness,
    transpose_witness,
    trivial_witness,
    verify,
    zero_witness,
)
from .rank3geo import (
    NestedPolygonInstance,
    PolygonWitness,
    Rank3Result,
    min_nested_polygon,
    nnrank_rank3,
    projective_slice,
)
from .sconelab import (
    GridFunction,
    GrowthRow,
    IceCreamPoint,
    PoissonParams,
    apply_S,
    cone_membership,
    growth_experiment,
    moments,
    poisson_kernel,
    poisson_params,
    poisson_preimage,
)

__version__ = "0.1.0"

__all__ = [
    "ConerankError",
    "DimensionError",
    "ExactMatrix",
    "FloatMatrix",
    "FormatError",
    "GridFunction",
    "GridSpec",
    "GrowthRow",
    "IceCreamPoint",
    "KERNEL_BACKEND",
    "MinKResult",
    "NestedPolygonInstance",
    "NonnegFactorization",
    "PoissonParams",
    "PolygonWitness",
    "PreconditionError",
    "Rank3Result",
    "RankBounds",
    "SearchResult",
    "apply_S",
    "bounds",
    "circulant",
    "cone_membership",
    "factor_rank_le2",
    "growth_experiment",
    "min_k_search",
    "min_nested_polygon",
    "moments",
    "nnrank_rank3",
    "poisson_kernel",
    "poisson_params",
    "poisson_preimage",
    "product_witness",
    "projective_slice",
    "rank_exact",
    "rank_float",
    "robbins_matrix",
    "sample_kernel",
    "sandwich_witness",
    "scale_and_permute",
    "search_upper",
    "sum_witness",
    "transpose_witness",
    "trivial_witness",
    "verify",
    "zero_witness",
]
