"""Eisenstein circle packings: exact quadruples, enumeration and invariants."""

__version__ = "0.1.0"

from .errors import EisError
from .quadruples import (
    EisensteinQuadruple,
    Quadruple,
    SwapKind,
    apply_swap,
    apply_word,
    congruence_predicates,
    has_stationary_symmetry,
    is_primitive,
    packing_type,
    reduce,
    standard_position,
    swap_classification,
    validate,
)
from .geometry import (
    OrientedCircleReal,
    ProjectivePoint,
    Wheel,
    inversive_product,
    packing_circles,
    realize_wheel,
    swap_wheel,
    tangency_point,
)
from .enumeration import (
    CurvatureSieve,
    GrowthFit,
    count_circles,
    enumerate_packing,
    fit_growth,
    iter_wheels,
)
from .forms import (
    FirstOddForm,
    count_packings,
    enumerate_reduced_forms,
    phi,
    reduce_form,
    roots_with_outer_curvature,
    tangent_curvatures,
    theta,
)
from .reciprocity import (
    ExtendedType,
    SporadicReport,
    chi2,
    is_obstructed,
    kronecker,
    packing_chi2,
    sporadic,
)
from .schmidt import (
    ReducedCoords,
    Window,
    canonicalize,
    classify_coset,
    enumerate_window,
    inversive_product_exact,
    reduce_to_line,
)
from .strongapprox import (
    closure,
    generators,
    identity_fibre_count,
    identity_fibre_search,
    mod3_surjectivity,
)
