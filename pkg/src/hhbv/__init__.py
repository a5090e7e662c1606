"""Hochschild homology, BV structures and loop homology tables of spheres."""

from .algebra import GradedAlgebra, make_exterior, make_exterior_sphere, make_truncated_polynomial, validate
from .bv import (
    BVTable,
    BracketTable,
    Monomial,
    bracket_from_delta,
    reduce_mod_p,
    verify_bv,
    verify_gerstenhaber,
)
from .hochschild import (
    build_chain_complex,
    build_cochain_complex,
    connes_B,
    cup,
    delta_on_HH,
    gerst_bracket,
    hh_via_dual,
    theta_hat,
)
from .iso import bv_isomorphic, enumerate_algebra_automorphisms, gerstenhaber_isomorphic
from .linalg import Matrix, homology, smith_normal_form
from .models import circle_table, even_sphere_z_table, hh_sphere_f2_table, odd_sphere_table, s2_f2_table
from .rings import F2, INTEGERS, RATIONALS, Ring

__all__ = [name for name in dir() if not name.startswith("_")]
