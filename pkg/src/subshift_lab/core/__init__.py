from .alphabet import Alphabet, Word, is_prefix, is_subword, is_suffix, lex_le, occurrences, word
from .automaton import AvoidanceAutomaton, build_automaton
from .forbidden import DEFAULT_HORIZON, ForbiddenList, TailModel
from .language import (
    LanguageTable,
    LowerBound,
    count_language,
    count_table,
    entropy_estimates,
    enumerate_language,
    extendability_filter,
    language_table,
)
from .pliss import IndexSet, pliss_set
from .power import higher_power_forbidden, product_forbidden

__all__ = [
    "Alphabet", "Word", "word", "is_prefix", "is_suffix", "is_subword", "occurrences", "lex_le",
    "ForbiddenList", "TailModel", "DEFAULT_HORIZON", "AvoidanceAutomaton", "build_automaton",
    "count_language", "count_table", "enumerate_language", "extendability_filter",
    "LanguageTable", "language_table", "entropy_estimates", "LowerBound",
    "IndexSet", "pliss_set", "higher_power_forbidden", "product_forbidden",
]
