"""Fix-Mahonian permutation statistics: decompositions, bijections, exact
generating functions and exhaustive equidistribution checks."""

from .perm import (
    Permutation, ZeroWord, WordParseError, permutations, identity, inverse,
    des_set, des, maj, ides_set, imaj, inv, fix_set, fix, reduce,
)
from .decomp import (
    DecompositionError, FixedDecomposition, PixedDecomposition, ShuffleClassId,
    is_derangement, is_desarrangement, fixed_decomposition, fixed_recompose,
    zder, zder_inverse, dez_set, dez, maz, maf, pixed_factorization,
    pixed_decomposition, pixed_recompose, pix_set, pix, der, desar, mag,
    zdesar, zdesar_inverse, mafz, shuffle_class, enumerate_derangements,
    enumerate_desarrangements,
)
from .bijections import (
    BijectionTable, StatTransportSpec, FiberMismatch, matched_oracle,
    f2, f2_prime, f2_loc, dw_loc, dw_word, f3, f3_prime, phi_oracle, chz_oracle,
)
from .qseries import (
    ExactPolynomial, USeries, q_pochhammer, gf_coefficients_t, gf_coefficients_q,
    combinatorial_gf,
)

__version__ = "0.1.0"
