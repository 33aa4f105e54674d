"""Exception hierarchy shared by the translator, the CAS parser and the verifier."""

from __future__ import annotations


class SemLatexError(Exception):
    """Base class for every error raised by this package."""


class LexiconError(SemLatexError):
    """A lexicon file could not be loaded or failed validation."""


class PatternError(LexiconError):
    """A translation pattern string is malformed."""


class ArityError(SemLatexError):
    """A macro or pattern received fewer arguments than it needs."""


class LatexSyntaxError(SemLatexError):
    """Tokenizer or PoM-parser rejection of a semantic LaTeX string."""


class DoubleScriptError(LatexSyntaxError):
    """`x^y^z` or `x_y_z`, rejected exactly as TeX rejects them."""


class MismatchedParenthesesError(LatexSyntaxError):
    pass


class TranslationError(SemLatexError):
    """Forward or backward translation could not be completed."""


class UntranslatableError(TranslationError):
    """No pattern exists for a macro (forward) or function (backward)."""


class IndexConflictError(LexiconError):
    """Two lexicon entries claim the same CAS function name and arity."""


class CasParseError(SemLatexError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position


class RenderError(SemLatexError):
    pass


class EvalError(SemLatexError):
    """Numerical evaluation failed (unbound name, unknown function, ...)."""


class DomainError(EvalError):
    pass


class PoleError(EvalError):
    pass


class SamplingError(SemLatexError):
    """No feasible sample point could be drawn from a domain."""


class CorpusError(SemLatexError):
    """A corpus file could not be read or contains a malformed case."""
