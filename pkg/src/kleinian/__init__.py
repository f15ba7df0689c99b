"""Limit sets of discrete subgroups of the projective transformations of
the complex projective plane: projective geometry, element classification,
cyclic limit sets, pseudo-projective limits, word-ball accumulation and a
small rasterizer."""

from .cyclic import (
    KIND_EMPTY,
    KIND_LINES,
    KIND_WHOLE_PLANE,
    LimitSetDesc,
    limit_set_cyclic,
    power_matrix_closed_form,
)
from .elements import (
    COMPLEX_HOMOTHETY,
    DEFAULT_TOL,
    ELLIPTIC_FINITE,
    ELLIPTIC_KINDS,
    ELLIPTIC_SUSPECT,
    LOXODROMIC_KINDS,
    LOXOPARABOLIC,
    PARABOLIC_ELLIPTO,
    PARABOLIC_KINDS,
    PARABOLIC_RANK1,
    PARABOLIC_RANK2,
    SCREW,
    STRONGLY_LOXODROMIC,
    ElementClass,
    classify,
    eigen_frame,
    order_if_finite,
)
from .engine import (
    DualAccumulation,
    GroupDiagnostics,
    GroupPresentation,
    LimitSetEstimate,
    attracting_line_probe,
    c_gamma,
    diagnostics,
    enumerate_ball,
    example_group,
    kulkarni_estimate,
    minimality_probe,
    presentation,
)
from .errors import (
    AmbiguousClassification,
    BallTooLargeError,
    CoincidentLinesError,
    CoincidentPointsError,
    EllipticInputError,
    EmptySequenceError,
    FullRankMemberError,
    ImagePointOnLineError,
    InKernelError,
    KleinianError,
    LineNotInAccumulationError,
    NonDiscreteWitness,
    NotEllipticError,
    NotInvertibleError,
    UnsupportedShapeError,
    ZeroMatrixError,
    ZeroVectorError,
)
from .projective import (
    GroupElement,
    ProjLine,
    ProjPoint,
    apply_line,
    apply_point,
    chordal_dist,
    cofactor_matrix,
    compose,
    count_general_position,
    general_position3,
    identity_element,
    incidence_residual,
    incident,
    inverse,
    line_through,
    make_element,
    meet,
    normalize_line,
    normalize_point,
    psl_distance,
    unit_canonical,
)
from .pseudo import (
    PseudoProjMap,
    equicontinuity_complement,
    evaluate,
    from_matrix,
    inverse_limit,
    limit_of_sequence,
    line_collapse_check,
    power_sequence,
    sup_canonical,
)
from .render import RenderSpec, p6_bytes, render_gray, write_p6

__version__ = "0.1.0"
