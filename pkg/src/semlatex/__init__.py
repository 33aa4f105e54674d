"""Bidirectional translation between semantic LaTeX and CAS syntax, with verification."""

__version__ = "0.1.0"

from .backward import backtranslate, backward_index, translate_back
from .cas import CasNode, ParseOptions, cosmetic, parse_cas, render_cas
from .evaluator import Convention, DomainSpec, Env, VarBox, evaluate, sample_points
from .forward import InfoRecord, TranslationResult, translate, translate_latex
from .latex_parser import parse_latex, tokenize
from .lexicon import Lexicon, MacroEntry, default_lexicon, load_lexicon
from .verifier import (
    RelationCase, RoundTripReport, VerdictReport, corpus_run, load_corpus, relation_test_numeric,
    relation_test_structural, round_trip,
)

__all__ = [
    "CasNode", "Convention", "DomainSpec", "Env", "InfoRecord", "Lexicon", "MacroEntry",
    "ParseOptions", "RelationCase", "RoundTripReport", "TranslationResult", "VarBox",
    "VerdictReport", "backtranslate", "backward_index", "corpus_run", "cosmetic",
    "default_lexicon", "evaluate", "load_corpus", "load_lexicon", "parse_cas", "parse_latex",
    "relation_test_numeric", "relation_test_structural", "render_cas", "round_trip",
    "sample_points", "tokenize", "translate", "translate_back", "translate_latex",
]
