from src.radopr.components.polyalg.rational import (
    as_fraction,
    format_fraction,
    is_integral,
    parse_fraction,
)
from src.radopr.components.polyalg.polynomial import (
    MultiIndex,
    Polynomial,
    canonical_order,
    degree,
    difference,
    infer_variables,
    is_homogeneous,
    parse_polynomial,
    render_polynomial,
    support,
)
from src.radopr.components.polyalg.matrix import (
    EchelonBasis,
    RationalMatrix,
    Vector,
    as_vector,
    constant_is_free,
    in_span,
    rref,
    solve_constant,
)
from src.radopr.components.polyalg.univariate import (
    UnivariatePoly,
    has_root_in,
    rational_roots,
    real_roots_upper_bound,
    sturm_count_roots,
)
