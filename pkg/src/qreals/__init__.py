"""q-deformed rationals and reals: exact arithmetic, families, roots and radii."""

from .cf import ContinuedFraction, Kind, format_cf, hj_cf_expand, parse_cf, regular_cf_expand
from .errors import QRealsError
from .exactalg import IntPoly, LaurentPoly, RationalFunction, TruncatedLaurentSeries, taylor_expand
from .families import Family, family_poly, family_quotient, fibonacci_poly, pell_poly, triangle_rows
from .qdeform import (
    QRational,
    QRealSeries,
    functional_equation,
    q_cf_hj_eval,
    q_cf_regular_eval,
    q_rational_recursive,
    q_real_series,
)
from .radius import R_SQRT2, R_STAR, genthm_check, radius_exact, radius_numeric
from .roots import annulus_check, find_roots, rouche_margin
from .scan import ScanConfig, conjecture_scan

__version__ = "0.1.0"

__all__ = [
    "ContinuedFraction", "Family", "IntPoly", "Kind", "LaurentPoly", "QRational", "QRealSeries",
    "QRealsError", "R_SQRT2", "R_STAR", "RationalFunction", "ScanConfig", "TruncatedLaurentSeries",
    "annulus_check", "conjecture_scan", "family_poly", "family_quotient", "fibonacci_poly", "find_roots",
    "format_cf", "functional_equation", "genthm_check", "hj_cf_expand", "parse_cf", "pell_poly",
    "q_cf_hj_eval", "q_cf_regular_eval", "q_rational_recursive", "q_real_series", "radius_exact",
    "radius_numeric", "regular_cf_expand", "rouche_margin", "taylor_expand", "triangle_rows",
]
