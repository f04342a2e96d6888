"""Desk-scale laboratory for factorial residues modulo a prime."""

from .errors import BudgetError
from .field_core import FieldCtx, Residue, factorial_scan, is_prime_u64, mod_inverse, wilson_pair
from .poly_lab import (
    BivarPoly,
    ExactDivisionError,
    MismatchCertificate,
    PolySpec,
    dickson_mismatch,
    dickson_poly,
    falling_product_poly,
    indecomposable_by_degree,
    phi_pair,
    q_kj,
    schmidt_psi,
)
from .point_counts import (
    CountReport,
    ProgressionSpec,
    count_full,
    count_full_bruteforce,
    count_interval,
    exp_sum_check,
    image_count,
    intersection_count,
    langweil_report,
)
from .fourier_probe import (
    SpectrumReport,
    fourier_error_bound,
    inversion_check,
    l1_log_bound,
    spectrum,
)
from .union_estimator import (
    FamilyReport,
    RegimeBound,
    TheoremParams,
    UnionFamilyStats,
    binomial_link,
    theorem1_params,
    theorem2_bound,
    union_lower_bound,
    verify_family,
)
from .residue_census import (
    ResidueSet,
    density_stats,
    embedding_check,
    erdos_scan,
    factorial_set,
    image_set,
    primes_in_range,
    product_set_card,
    quotient_set_card,
    scan_cardinalities,
)
from .factorizer import (
    NotRepresentableError,
    RepresentationCertificate,
    bounded_product_reach,
    find_representation,
    reach_bound,
    three_factorial,
    verify_certificate,
    wilson_quotient_embed,
)

__version__ = "0.1.0"
