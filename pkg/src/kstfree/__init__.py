"""Constructions and exact verification for K_{s,t}-free uniform hypergraphs."""

from .drc import DrcParams, drc_exact_stats, drc_sample
from .embedder import NotFound, embed_from_rich_core, find_cycle
from .errors import BudgetExceeded, KstError
from .fields import FieldSpec, find_prime, make_field, subgroup_cosets
from .hypergraph import UniformHypergraph, codegree, codegree_prune, hg_build, link
from .norm_family import build_norm_partition, krs_solution_count, verify_cover_property
from .product import best_residue, build_product, construction_report
from .verifier import find_Kst, find_pattern, is_t_rich

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "DrcParams",
    "FieldSpec",
    "KstError",
    "NotFound",
    "UniformHypergraph",
    "best_residue",
    "build_norm_partition",
    "build_product",
    "codegree",
    "codegree_prune",
    "construction_report",
    "drc_exact_stats",
    "drc_sample",
    "embed_from_rich_core",
    "find_Kst",
    "find_cycle",
    "find_pattern",
    "find_prime",
    "hg_build",
    "is_t_rich",
    "krs_solution_count",
    "link",
    "make_field",
    "subgroup_cosets",
    "verify_cover_property",
]
