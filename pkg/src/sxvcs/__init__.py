"""Noise-free XOR visual cryptography from linear systems over GF(2)."""

from .access import (
    AccessStructure,
    ForbiddenFamily,
    QualifiedMatrix,
    build_T_F,
    derive_structure,
    forbidden_family,
    parse_structure,
    qualified_matrix,
    threshold_structure,
)
from .builder2n import build_all_prefix, build_b1_star, build_optimal_2n
from .existence import ExistenceVerdict, exists_expansion1, exists_sxvcs
from .gf2 import BitMatrix, GF2SolveResult, enumerate_solutions, rank, sample_solution, solve
from .imaging import ShareImage, SubpixelLayout, decode_by_template, encode, measure_noise, stack
from .scheme import (
    ContrastReport,
    LinearScheme,
    PixelDistribution,
    SchemeClass,
    SchemeKind,
    check_contrast,
    check_security,
    check_security_pw,
    classify,
    decompose_semi,
    insert,
    pxvcs_contrast_bound,
    stack_result,
    to_perfect_white,
    to_pxvcs,
)

__version__ = "0.1.0"
