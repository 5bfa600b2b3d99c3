"""Computational toolkit for subshifts defined by forbidden words.

Counts and enumerates languages through an avoidance automaton, runs Miller's
weight-function constructions, certifies series hypotheses with interval
arithmetic, and approximates measures of maximal entropy.
"""
from .core import Alphabet, ForbiddenList, TailModel, build_automaton, count_language, word
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["Alphabet", "ForbiddenList", "TailModel", "build_automaton", "count_language", "word",
           "BACKEND", "__version__"]
