"""Spectral theory and slice functional calculus for quaternionic matrices.

The package follows the pencil Q_q(A) = A^2 - 2 Re(q) A + |q|^2 I
wherever spectral questions arise, keeps every spectral object a full
sphere of quaternions, and cross-checks each computation along two
independent routes: honest quaternion arithmetic on one side, the
complex adjoint embedding on the other.
"""

from .calculus import (
    Circle,
    SliceContour,
    SUITE_NAMES,
    TheoremReport,
    auto_contour,
    build_contour,
    calculus_intrinsic,
    calculus_sided,
    op_exp,
    op_log,
    op_nth_root,
    riesz_dunford,
    verify_theorems,
)
from .errors import (
    AlphaInSpectrum,
    BranchCut,
    DimensionMismatch,
    DomainError,
    DomainTooTight,
    NoConvergence,
    NonFiniteEntry,
    NonSquare,
    NotIntrinsic,
    NumericError,
    OddRealMultiplicity,
    OutOfDomain,
    ParseError,
    QuadratureStalled,
    QuatSpecError,
    SeriesDiverges,
    Singular,
    SingularNode,
    StructureViolation,
    UsageError,
    ZeroDivisor,
)
from .operators import (
    OperatorExpr,
    QMatrix,
    adjoint_structure_residual,
    complex_adjoint,
    delta,
    from_complex_adjoint,
    left_mult_rep,
    q_pencil,
    real_representation,
    right_mult_rep,
)
from .quaternion import I, J, K, ONE, Quaternion, Sphere, rotate_to_slice, sphere_of
from .slicefn import (
    AxSymDomain,
    INTRINSIC,
    LEFT,
    RIGHT,
    StemFunction,
    ValidationReport,
    catalog,
    cut_plane_domain,
    decompose,
    entire_domain,
    eval_stem,
    from_holomorphic_intrinsic,
    restrict_to_slice,
    stem_compose,
    stem_product,
    stem_sum,
    validate,
)
from .spectrum import (
    Classification,
    DistanceResult,
    SphereSet,
    classify,
    distance_to_spectrum,
    eigenvalues,
    neumann_coefficients,
    q_pencil_inverse,
    quaternion_matrix_inverse,
    s_resolvent,
    s_spectral_radius,
    s_spectrum,
)

__version__ = "0.1.0"
