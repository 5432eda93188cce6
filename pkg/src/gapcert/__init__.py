"""gapcert: duality-gap certificates for norm-regularized ERM solvers.

The package pairs first-order solvers (randomized exact coordinate
descent, proximal gradient) with globally finite duality-gap certificates
obtained by restricting the regularizer's support to a bounded set, plus
calculators that turn problem constants into sufficient iteration counts
and a harness that verifies recorded runs against them.
"""

from .certificates import (CertificateRecord, ProblemA, duality_gap,
                           duality_gap_general, elastic_net_gap, lasso_gap,
                           objective_value, primal_map, svm_gap,
                           trace_to_csv, trace_to_json, write_trace_csv)
from .data import (LabeledDataset, MatrixConstants, SparseMatrix,
                   add_scaled_column, load_libsvm, matrix_constants, matvec,
                   normalize_columns, save_libsvm, transpose,
                   transpose_matvec)
from .functions import (ElasticNet, GroupLasso, HingeBox, L1, LeastSquares,
                        Logistic, ScaledQuadratic, SquaredL2,
                        conjugate_oracle)
from .lipschitzing import (SupportBound, level_set_bound,
                           modified_conjugate_box, modified_conjugate_l1_scalar,
                           modified_conjugate_norm,
                           modified_conjugate_subgradient, safe_bound)
from .rates import (RateBound, RateInputs, VerifyReport,
                    bounded_support_rate_bound, cd_bounded_support_bound,
                    cd_elastic_net_bound, cd_l1_bound,
                    cd_strongly_convex_bound, estimate_linear_rate,
                    linear_rate_bound, lower_bound_threshold, verify_trace,
                    verify_gap_values)
from .solvers import (SolverConfig, SolverResult, averaged_iterate,
                      coordinate_descent, coordinate_min_quadratic,
                      coordinate_min_smooth, exact_coordinate_step,
                      prox_gradient, reference_optimum)
from . import datasets, problems

__version__ = "0.1.0"
