"""Exact spectral invariants of monotone twist maps of the sphere.

The main entry points are :func:`c_dk` (spectral values from concave lattice
paths), :func:`zeta_closed` / :func:`mu` / :func:`eta` (derived invariants)
and the certificate builders in :mod:`pfh_lattice.hofer_lab`.
"""
__version__ = "0.1.0"

from .errors import (
    CertificateError, IncompatibleSlopeError, LemmaInapplicable, OracleLimitError,
    ParityError, PathError, ProfileError,
)
from .surd import Surd, exact_sign, format_exact, sqrt_rational
from .twist import (
    FamilyConfig, InfiniteTwistSpec, Piece, TwistProfile, add_profiles, build_family,
    calabi, convex_interpolant, cubic_profile, default_infinite_twist, eval_dh, eval_h,
    hinge_profile, hofer_upper_bound, integral, inverse_slope, load_profile,
    localized_quadratic, max_value, mean, profile_from_json, profile_to_json,
    quadratic_profile, scale, support_area, zero_profile,
)
from .lattice import (
    IndexBreakdown, LatticePath, PrimitiveSegment, action, enumerate_paths,
    enumerate_shapes, farey_items, format_path, index_by_area, index_by_count,
    make_path, parse_path,
)
from .spectral import (
    AxiomReport, SpectralResult, axiom_report, c_dk, oracle_c_dk, oracle_table,
    spectral_table,
)
from .invariants import (
    Bound, InvariantBundle, eta, eta_lower_bound, invariant_bundle, mu,
    support_control, zeta_closed, zeta_limit,
)
from .hofer_lab import (
    GrowthReport, QuasiFlatReport, embedding_bounds, fold, fold_vector,
    growth_table, inverse_inf_norm, mu_matrix, separation,
)
