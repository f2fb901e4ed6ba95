"""Rational homology of configuration spaces of products of 1-manifolds.

Exact linear algebra over the rationals, the Ass and Ger operads with their
modules, the bar resolution, the diagonal complex whose homology is the E2
page, and a small command line on top.
"""

from .bar import BarEngine, BarWord, bar_level
from .bv import DiagEngine, TruncationError
from .e2 import BettiTable, E2Table, betti, character, e2_characters, e2_page
from .linalg import NotAComplex, SparseMatrix, homology_dim, rank
from .modules import (
    DecoratedSurjection,
    RightModule,
    check_module_axioms,
    circle_module,
    dump_module,
    load_module,
    module_from_operad,
)
from .operads import LoadError, ass_operad, check_operad_axioms, dump_operad, ger_operad, load_operad

__version__ = "0.1.0"
