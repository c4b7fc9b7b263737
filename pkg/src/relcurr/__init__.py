"""Relative currents of a free group relative to a malnormal subgroup system."""

from relcurr.approximation import ApproximationReport, approximate, combine_single, martin_threshold
from relcurr.boundary import PositionedPath, SubgroupSystem, build_system, decompose_compact_open
from relcurr.currents import (
    CurrentTable,
    RationalCurrentSum,
    act,
    build_eta_A,
    check_consistency,
    eval_rational,
    extend_k,
    normalize,
    restrict_relative,
)
from relcurr.errors import (
    InputError,
    InvariantError,
    MalnormalityError,
    NotStabilizingError,
    RelCurrError,
    ZeroCurrentError,
)
from relcurr.stallings import compute_L, contains, from_generators
from relcurr.words import Automorphism, CyclicWord, format_word, parse_word

__all__ = [
    "ApproximationReport", "Automorphism", "CurrentTable", "CyclicWord", "InputError",
    "InvariantError", "MalnormalityError", "NotStabilizingError", "PositionedPath",
    "RationalCurrentSum", "RelCurrError", "SubgroupSystem", "ZeroCurrentError", "act",
    "approximate", "build_eta_A", "build_system", "check_consistency", "combine_single",
    "compute_L", "contains", "decompose_compact_open", "eval_rational", "extend_k",
    "format_word", "from_generators", "martin_threshold", "normalize", "parse_word",
    "restrict_relative",
]
