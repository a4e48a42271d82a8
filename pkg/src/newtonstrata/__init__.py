"""Newton strata combinatorics for unramified groups, with an isocrystal oracle over F_q((eps))."""

__version__ = "0.1.0"

from .rootdata import Pi1Element, Pi1Group, RootDatum, load_datum, preset  # noqa: E402
from .strata import (SigmaConjClass, StrataPoset, StrataRecord, basic, closure_downset, defect,  # noqa: E402
                     enumerate_bg_mu, kappa_of_cochar, length_formula, length_poset, mu_ordinary,
                     newton_leq, newton_leq_convex_oracle, strata_table, sup_inf)
from .polygons import gl_polygon_oracle  # noqa: E402

__all__ = [
    "Pi1Element", "Pi1Group", "RootDatum", "load_datum", "preset",
    "SigmaConjClass", "StrataPoset", "StrataRecord", "basic", "closure_downset", "defect",
    "enumerate_bg_mu", "kappa_of_cochar", "length_formula", "length_poset", "mu_ordinary",
    "newton_leq", "newton_leq_convex_oracle", "strata_table", "sup_inf", "gl_polygon_oracle",
]
