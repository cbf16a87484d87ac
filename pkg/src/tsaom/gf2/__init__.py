"""Linear algebra over the field with two elements."""

from tsaom.gf2.matrices import (
    BitMat,
    format_matrix,
    gl_order,
    invert,
    invertible_probability,
    is_invertible,
    mat_mul,
    mat_vec,
    parse_matrix,
    permutation_matrix,
    rank,
    sample_invertible,
    sample_invertible_with_trials,
    transpose,
)
from tsaom.gf2.vectors import (
    BitVec,
    all_points,
    basis_vector,
    complement,
    concat_bits,
    concat_points,
    dot,
    format_vector,
    from_index,
    indicator,
    onemax,
    parse_vector,
    points_to_indices,
    prefix_range,
    split_bits,
    to_index,
)

__all__ = [
    "BitMat",
    "BitVec",
    "all_points",
    "basis_vector",
    "complement",
    "concat_bits",
    "concat_points",
    "dot",
    "format_matrix",
    "format_vector",
    "from_index",
    "gl_order",
    "indicator",
    "invert",
    "invertible_probability",
    "is_invertible",
    "mat_mul",
    "mat_vec",
    "onemax",
    "parse_matrix",
    "parse_vector",
    "permutation_matrix",
    "points_to_indices",
    "prefix_range",
    "rank",
    "sample_invertible",
    "sample_invertible_with_trials",
    "split_bits",
    "to_index",
    "transpose",
]
