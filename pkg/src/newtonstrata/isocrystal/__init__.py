"""Matrix-level oracle over F_{q^m}((eps))."""

from .field import FiniteField, LaurentPoly, field_of
from .matrix import (LaurentMatrix, cartan_invariant, kappa_gl, load_matrix, matrix_from_dict,
                     newton_point_cartan_limit, newton_point_charpoly, newton_point_gl)
