"""Exact workbench for Bruhat order and (parabolic) Kazhdan-Lusztig
polynomials in Coxeter groups, with a verification harness that hunts for
combinatorial-invariance counterexamples on desk-scale corpora."""

from .bruhat import (
    BruhatInterval,
    IntervalSizeError,
    QuotientRestriction,
    atoms_in_quotient,
    bruhat_leq,
    bruhat_leq_lifting,
    build_interval,
    coset_slice,
    covers_down,
    interval_elements,
    lower_interval_elements,
    non_dominated_set,
    quotient_restrict,
)
from .coxeter import (
    CoxeterError,
    CoxeterSystem,
    Element,
    LengthCapError,
    build_system,
    is_finite_matrix,
    parse_word,
    validate_matrix,
)
from .harness import (
    CacheError,
    CampaignSpec,
    HarnessError,
    PolyTable,
    cache_load,
    cache_store,
    compute_table,
    default_campaign_spec,
    reproduce_remark,
    run_campaign,
    table_dump,
)
from .isosearch import (
    Fingerprint,
    IsoWitness,
    check_nondominated_transport,
    find_isomorphisms,
    fingerprint,
    is_corpus_coelementary,
    is_cosimple,
    is_lower_interval,
    is_short_edge,
)
from .klpoly import (
    KLError,
    Poly,
    audit_p_family,
    audit_r_family,
    deodhar_p_sum,
    deodhar_r_sum,
    p_poly,
    parabolic_p_poly,
    parabolic_r_poly,
    r_poly,
    w0_dual_r_check,
)

__version__ = "0.1.0"

__all__ = [
    "BruhatInterval",
    "CacheError",
    "CampaignSpec",
    "CoxeterError",
    "CoxeterSystem",
    "Element",
    "Fingerprint",
    "HarnessError",
    "IntervalSizeError",
    "IsoWitness",
    "KLError",
    "LengthCapError",
    "Poly",
    "PolyTable",
    "QuotientRestriction",
    "atoms_in_quotient",
    "audit_p_family",
    "audit_r_family",
    "bruhat_leq",
    "bruhat_leq_lifting",
    "build_interval",
    "build_system",
    "cache_load",
    "cache_store",
    "check_nondominated_transport",
    "compute_table",
    "coset_slice",
    "covers_down",
    "default_campaign_spec",
    "deodhar_p_sum",
    "deodhar_r_sum",
    "find_isomorphisms",
    "fingerprint",
    "interval_elements",
    "is_corpus_coelementary",
    "is_cosimple",
    "is_finite_matrix",
    "is_lower_interval",
    "is_short_edge",
    "lower_interval_elements",
    "non_dominated_set",
    "p_poly",
    "parabolic_p_poly",
    "parabolic_r_poly",
    "parse_word",
    "quotient_restrict",
    "r_poly",
    "reproduce_remark",
    "run_campaign",
    "table_dump",
    "validate_matrix",
    "w0_dual_r_check",
]
