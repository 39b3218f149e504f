"""CUR and Nystrom low-rank approximation under volume sampling."""

from .bordered import BorderedResult, add_both_identity, add_column_identity, add_row_identity, gram_increment
from .compound import compound, compound_norm_sq, elementary_symmetric, volume_sq
from .cur import (
    BlockPartition,
    CurFactors,
    cur_approximation,
    error_decomposition,
    nystrom_approximation,
    optimal_middle_factor,
    partition,
)
from .errors import (
    CurvolError,
    DegenerateError,
    EnumerationSizeError,
    InvalidArgumentError,
    InvalidInputError,
    PreconditionError,
)
from .linalg import best_rank_k, frobenius_sq, pseudoinverse, submatrix, svd
from .local_bounds import average_volume_selection, eig_ratio_bound, local_cur_bound
from .subsets import IndexSet, binomial, complement, enumerate_subsets, supersets_count
from .volume_sampling import (
    BoundReport,
    SubsetDistribution,
    bound_suite,
    build_distribution,
    expected_errors_exact,
    expected_errors_mc,
    interpolation_factor,
    sample,
    zeta_closed_form,
)

__version__ = "0.1.0"
