"""Normal and unitary completions of 2x2 block matrices with prescribed corners."""

from .blocks import (
    BlockMatrix,
    CornerReport,
    assemble,
    check_normal_corner_conditions,
    corner_report,
    partition,
    random_normal,
)
from .completions import (
    CompletionResult,
    HermitianCornerParams,
    ValidationError,
    equal_singular_value_completion,
    hermitian_corner_completion,
    hermitian_corner_normality_check,
    hermitian_corner_unitary_completion,
    least_norm_symmetric_completion,
    symmetric_completion,
    symmetric_unitary_completion,
)
from .kernels import BACKEND
from .linalg import (
    Tolerances,
    commutation_residual,
    frobenius_norm,
    normality_residual,
    operator_norm,
    polar,
    psd_sqrt,
    singular_values,
    subspace_intersection_dimension,
    svd,
)
from .search import (
    FeasibilityReport,
    SearchConfig,
    SearchResult,
    alpha_lower_bound_search,
    example_n2,
    example_n3,
    feasibility_search,
    gradient_check,
)

__version__ = "0.1.0"
