"""Homology of 1-periodic cell complexes from finite window data.

The pipeline: a periodic complex is normalized so adjacent windows
suffice, the window pair (U, V) with its two inclusions is extracted,
translation endomorphisms on window homology are built and analyzed, and
homology classes of every finite quotient are split into toroidal and
non-toroidal parts, with explicit representatives, filtration behaviour
and two independent verification oracles.
"""

from .field import F2, QQ, Field
from .linalg import EndoAnalysis, LinAlgError, Matrix, Subspace, analyze_endo
from .complexes import (
    CellComplex, ChainMap, ContractError, HomologyBasis, homology,
    induced_map, validate,
)
from .periodic import (
    NormalizedPeriodic, PeriodicComplex, QuotientComplex, Strip, WindowPair,
    build_quotient, build_strip, build_window, normalize, validate_periodic,
)
from .monodromy import (
    DecompositionIncompatible, MonodromySet, build_monodromy,
    translation_witness,
)
from .toroidal import (
    ToroidalReport, ToroidalVerdict, classify, is_toroidal,
    nontoroidal_image, recover,
)
from .persistence import (
    FiltrationAnalysis, analyze_filtration, check_unimodality,
    toroidal_timeline,
)
from .mvss import BlowUpComplex, build_blowup, total_homology, vtrace
from .io import InputError, load_cycle, load_periodic

__version__ = "0.1.0"

__all__ = [
    "F2", "QQ", "Field",
    "EndoAnalysis", "LinAlgError", "Matrix", "Subspace", "analyze_endo",
    "CellComplex", "ChainMap", "ContractError", "HomologyBasis", "homology",
    "induced_map", "validate",
    "NormalizedPeriodic", "PeriodicComplex", "QuotientComplex", "Strip",
    "WindowPair", "build_quotient", "build_strip", "build_window",
    "normalize", "validate_periodic",
    "DecompositionIncompatible", "MonodromySet", "build_monodromy",
    "translation_witness",
    "ToroidalReport", "ToroidalVerdict", "classify", "is_toroidal",
    "nontoroidal_image", "recover",
    "FiltrationAnalysis", "analyze_filtration", "check_unimodality",
    "toroidal_timeline",
    "BlowUpComplex", "build_blowup", "total_homology", "vtrace",
    "InputError", "load_cycle", "load_periodic",
]
