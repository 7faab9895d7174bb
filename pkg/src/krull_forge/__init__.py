"""Class groups of simple Dedekind domains built as skew Laurent extensions.

Finitely generated abelian group arithmetic, free abelian divisor
arithmetic, the shift-automorphism Krull monoid construction, group
algebras with normed generators, skew Laurent polynomials, and the
class-group pipeline that ties them together.
"""

from krull_forge.abelian import (
    FGAbelianGroup,
    GroupElem,
    GroupHom,
    cokernel,
    parse_group,
    smith_normal_form,
)
from krull_forge.freeab import Cmp, FreeAbelian, lex_compare
from krull_forge.krull import KrullMonoidSpec, Prime
from krull_forge.construct import RealizationParams, build_realization
from krull_forge.galg import GroupAlgebra, GroupAlgebraElem, PrimeField, RationalField
from krull_forge.skew import SkewLaurentPoly, class_group_of_skew_extension, full_pipeline

__all__ = [
    "Cmp",
    "FGAbelianGroup",
    "FreeAbelian",
    "GroupAlgebra",
    "GroupAlgebraElem",
    "GroupElem",
    "GroupHom",
    "KrullMonoidSpec",
    "Prime",
    "PrimeField",
    "RationalField",
    "RealizationParams",
    "SkewLaurentPoly",
    "build_realization",
    "class_group_of_skew_extension",
    "cokernel",
    "full_pipeline",
    "lex_compare",
    "parse_group",
    "smith_normal_form",
]

__version__ = "0.1.0"
