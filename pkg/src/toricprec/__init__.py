"""Strict linear precision of lattice polytopes and the scaled toric models behind it."""
from .errors import (IrrationalAdjustment, NoConvergence, NonHorn, NormalSumNonzero, NotFullDimensional,
                     NotInterior, NotSLP, PoleAtInput, PolytopeError, RedundantFacet, ToricPrecError,
                     Unbounded, ZeroDenominator, ZeroSum)
from .polyalg import MultiPoly, RationalMatrix, poly_eval, positive_kernel_point
from .polytope import (Facet, LatticePolytope, facet_normal_sum, make_graphical_model, make_product,
                       make_segment, make_simplex, make_square, make_trapezoid, polytope_from_facets,
                       primitive_collections)
from .precision import (SLPReport, beta_poly, beta_w_poly, check_slp, lattice_distance,
                        multinomial_weights, normalized_blending, solve_slp_weights)
from .statistics import (HornMatrix, MLEResult, horn_eval, horn_matrix_slp, minimal_horn, mle,
                         mle_closed_form, mle_newton, tau_A, verify_horn)
from .moment import MomentComparison, compare_moment_maps, lattice_distance_lift, mu_FS, mu_quot
from .search import search_polygons

__version__ = "0.1.0"
