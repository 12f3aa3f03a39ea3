"""itercc: exact iterated Laurent series over truncated Q-algebras.

Residues of top forms, the n-dimensional Contou-Carrere symbol, continuous
automorphisms, reciprocity on the projective line, and sampled
characterization of invariant polylinear/polymultiplicative maps.
"""

from .coeffring import Ring, RingElement
from .series import (INF, Classification, Decomposition, Series, lex_key,
                     lex_min, lex_sign)
from .residue import TopForm, res_form, residue
from .autos import Endomorphism
from .symbol import cc, cc_sharp, sgn, tame_symbol
from .ratfun import Point, Poly, RationalFunction, local_expansion
from .analysis import (CharacterizationResult, OmegaCheckResult,
                       ReciprocityResult, characterize_symbol,
                       extract_residue_constant, omega_invariance_check,
                       reciprocity_check)
from . import errors

__all__ = [
    "Ring", "RingElement",
    "INF", "Classification", "Decomposition", "Series",
    "lex_key", "lex_min", "lex_sign",
    "TopForm", "res_form", "residue",
    "Endomorphism",
    "cc", "cc_sharp", "sgn", "tame_symbol",
    "Point", "Poly", "RationalFunction", "local_expansion",
    "CharacterizationResult", "OmegaCheckResult", "ReciprocityResult",
    "characterize_symbol", "extract_residue_constant",
    "omega_invariance_check", "reciprocity_check",
    "errors",
]

__version__ = "0.1.0"
