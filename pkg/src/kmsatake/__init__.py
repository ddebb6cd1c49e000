"""Exact spherical functions for Kac-Moody root data via Demazure-Lusztig operators."""

from .coeffs import ParamCoeff
from .root_datum import (PosRealCoroot, RootDatum, WeylElt, build_root_datum, inversion_coroots,
                         load_config, min_coset_reps, poincare_series, positive_real_coroots, reflect,
                         weyl_ball)
from .series import (GroupSeries, TruncSeries, expand_b, expand_c, invert_unit, relabel_exponents,
                     series_add, series_monomial, series_mul, specialize)
from .dl_operators import DLContext, dl_apply_Hi, dl_apply_Hw, hw_group_element
from .symmetrizers import SymContext
from .satake import SatakeEngine, character_t0, delta_half, hall_littlewood, j_w, satake
from .tables import verify_rank_one_tables, verify_section36_tables

__all__ = [
    "ParamCoeff", "RootDatum", "WeylElt", "PosRealCoroot", "build_root_datum", "load_config",
    "reflect", "weyl_ball", "inversion_coroots", "positive_real_coroots", "min_coset_reps",
    "poincare_series", "TruncSeries", "GroupSeries", "series_monomial", "series_add", "series_mul",
    "expand_b", "expand_c", "invert_unit", "relabel_exponents", "specialize",
    "DLContext", "dl_apply_Hi", "dl_apply_Hw", "hw_group_element", "SymContext",
    "SatakeEngine", "satake", "j_w", "delta_half", "hall_littlewood", "character_t0",
    "verify_rank_one_tables", "verify_section36_tables",
]
