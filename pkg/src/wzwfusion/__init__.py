"""Fusion rules of su(N)_k WZW models, conformal inclusions and level-rank duality."""
from .affine import AffineWeight, AlgebraLabel, enumerate_weights, parse_algebra, parse_weight
from .fusion import decompose, fusion_table, quantum_dim, verify_fusion
from .inclusion import ConformalInclusion, builtin_inclusion, kw_inequality_check, kw_scan, verify_branching
from .levelrank import beta, build_product_inclusion, ll_subsectors, pair, phi, verify_th42
from .modular import ModularData, modular_data, s_matrix_suNk, tensor, verify_modular
from .report import Check, Report

__version__ = "0.1.0"

__all__ = [
    "AffineWeight",
    "AlgebraLabel",
    "Check",
    "ConformalInclusion",
    "ModularData",
    "Report",
    "beta",
    "build_product_inclusion",
    "builtin_inclusion",
    "decompose",
    "enumerate_weights",
    "fusion_table",
    "kw_inequality_check",
    "kw_scan",
    "ll_subsectors",
    "modular_data",
    "pair",
    "parse_algebra",
    "parse_weight",
    "phi",
    "quantum_dim",
    "s_matrix_suNk",
    "tensor",
    "verify_branching",
    "verify_fusion",
    "verify_modular",
    "verify_th42",
]
