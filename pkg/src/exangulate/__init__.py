"""Categories of extensions over finite instances, with law checkers."""

__version__ = "0.1.0"

from .algebra import FinAbGroup, GroupElement, GroupHom, cyclic
from .bifunctor import (
    Ext1Bifunctor,
    Extension,
    HomBifunctor,
    SplitBifunctor,
    baer_sum,
    direct_sum,
    relative_subfunctor,
)
from .category import FinAbBackend, TableBackend, table_from_groups
from .exangle import ExStructure, ext1_structure, realise, split_structure, verify_axioms
from .extcat import ExtensionCategory, verify_exact_category

__all__ = [
    "FinAbGroup",
    "GroupElement",
    "GroupHom",
    "cyclic",
    "Extension",
    "SplitBifunctor",
    "HomBifunctor",
    "Ext1Bifunctor",
    "baer_sum",
    "direct_sum",
    "relative_subfunctor",
    "FinAbBackend",
    "TableBackend",
    "table_from_groups",
    "ExStructure",
    "split_structure",
    "ext1_structure",
    "realise",
    "verify_axioms",
    "ExtensionCategory",
    "verify_exact_category",
]
