"""Semi-inner products, a determinant 2-norm and g-angles between subspaces of l^p."""
from .errors import (
    DegenerateSubspaceError,
    GAngleError,
    InvalidInputError,
    InvalidSubspaceError,
    LimitEstimationError,
    NumericalError,
    OptimizerInconsistencyError,
    OrthonormalizationError,
    SingularGramError,
    UndefinedDirectionError,
)
from .space import LpVector, SpaceConfig, TauPair, as_vector, g_closed, g_numeric, lp_norm, tau
from .gram import GramContext, ProjectionResult, gram_context, left_gram_schmidt, project
from .twonorm import OptimizerConfig, TwoNormResult, det2, two_norm_g, two_norm_oracle, two_norm_s
from .angle import (
    AngleReport,
    Subspace2,
    SweepResult,
    angle_1d,
    angle_2d,
    lemma_factorization_check,
    sup_orthonormal_2norm,
    sweep_orthonormal_2norm,
)

__version__ = "0.1.0"
