"""Exact-arithmetic toolkit for totally nonnegative matrices.

Classification (TN / TP / oscillatory), successive elementary bidiagonal
factorization by Neville elimination, planar-network minor evaluation
through vertex-disjoint path families, and closed-form exponents for two
parametrized factorization classes, all over exact rationals.
"""

from .errors import (
    ClassMismatch,
    FeasibilityExceeded,
    IndexOutOfRange,
    InvalidPsiPattern,
    InvariantViolation,
    MalformedNumber,
    MethodDisagreement,
    NotITN,
    NotNormalizable,
    NotOscillatory,
    NotTN,
    OrderOutOfRange,
    OscillaxError,
    ParamOutOfRange,
    ShapeMismatch,
    TrackMismatch,
    Unpredictable,
    ZeroDenominator,
)
from .rational import coerce_rational, format_rational, parse_rational
from .matrix import (
    CompoundMatrix,
    IndexSet,
    Matrix,
    cauchy_binet_check,
    det,
    lex_subsets,
    mat_mul,
    mat_pow,
    minor,
    multiplicative_compound,
)
from .classify import (
    ClassificationReport,
    CornerSpec,
    MinorWitness,
    classify,
    corner_minors,
    is_irreducible,
    is_oscillatory,
    is_tn,
    is_tp,
    is_tp_given_tn,
)
from .seb import (
    EBFactor,
    FactorizationClass,
    PackedParams,
    SEBFactorization,
    classify_factorization,
    compose,
    eb_matrix,
    factorization_from_text,
    factorization_to_text,
    neville_factorize,
    normalize_commutation,
    pack_parameters,
    w_q_form,
)
from .planar import (
    PathFamily,
    PlanarNetwork,
    build_network,
    concat,
    enumerate_path_families,
    export_dot,
    min_copies_lower_corner,
    minor_via_paths,
    strip_u_diagonals,
)
from .exponent import (
    ClassTag,
    ExponentReport,
    Prediction,
    early_tp_product_scan,
    exponent_bruteforce,
    exponent_via_theorem,
    generate_z1,
    generate_z2,
    mu1,
    mu2,
    predict_exponent,
    product_family_check,
    psi_membership,
    r_lower,
    r_upper,
    recognize_class,
)

__version__ = "0.1.0"
