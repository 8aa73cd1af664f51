"""Exact Cayley hyperdeterminants over Q, Z, Z/m and F_p, with rank
certificates, P-echelon detection and colored sum-ordered set analysis."""

from .errors import *  # noqa: F401,F403
from .ring import (
    Fp,
    Q,
    RingKind,
    RingSpec,
    RingValue,
    Z,
    Zmod,
    parse_ring,
    ring_factorial,
)
from .tensor import (
    SubtensorSelector,
    Tensor,
    contraction_product,
    diagonal_identity,
    direct_sum,
    hat_extension,
    identity_matrix,
    matrix,
    mode_permute,
    multilinear_product,
    outer_product,
    subtensor,
    tensor_new,
    tensor_slice,
    zeros,
)
from .determinant import (
    epsilon_sign,
    hyperdet,
    hyperdet_dp,
    hyperdet_naive,
    hyperpermanent,
    is_k_null,
    knull_propagate,
    laplace_expand,
    minor_summation,
    mixed_discriminant,
    reduce_repeated_index,
)
from .ranks import (
    Bipartition,
    Justification,
    RankCertificate,
    RankKind,
    SimpleTerm,
    brute_force_rank,
    certify_oprank_full,
    certify_prank_bound,
    certify_via_echelon,
    generic_null_bound,
    is_simple,
    oprank_direct_sum_check,
    verify_decomposition,
)
from .order import (
    Poset,
    chain,
    echelon_det,
    find_echelon_poset,
    is_echelon_form,
    order_polytope_contains,
    poset_new,
)
from .capset import (
    ColoredFamily,
    certify_family,
    gamma_bound,
    restriction_tensor,
    search_sum_ordered,
    size_bound,
    slice_rank_upper_count,
    verify_sum_ordered,
)

__version__ = "0.1.0"
