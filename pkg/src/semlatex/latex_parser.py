"""Tokenizer and PoM-style parser for semantic LaTeX.

The parse tree deliberately is *not* an expression tree. A semantic macro is a
leaf, and its ``@`` signs and braced arguments follow it as siblings in the
enclosing sequence. Only ``\\frac``-like, ``\\sqrt``, ``\\binom``, scripts,
braces and ``\\left``/``\\right`` pairs create hierarchy.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import DoubleScriptError, LatexSyntaxError
from .lexicon import Lexicon, MacroEntry, default_lexicon

COMMAND = "command"
LETTERS = "letter-run"
DIGITS = "digit-run"
SYMBOL = "symbol"
WHITESPACE = "whitespace"
AT = "at"
BRACE_OPEN = "brace-open"
BRACE_CLOSE = "brace-close"
BRACKET_OPEN = "bracket-open"
BRACKET_CLOSE = "bracket-close"

_SPACING_CONTROL = set(",;:! ") | {"\\"}
_FRACTIONS = {"\\frac", "\\ifrac", "\\dfrac", "\\tfrac", "\\cfrac"}
_BINOMIALS = {"\\binom", "\\dbinom", "\\tbinom"}


@dataclass(frozen=True)
class Token:
    lexeme: str
    cls: str


def tokenize(text: str) -> list[Token]:
    """Split LaTeX source into tokens; lexemes concatenate back to ``text``."""
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\\":
            if i + 1 >= n:
                raise LatexSyntaxError("lone '\\' at end of input")
            j = i + 1
            if text[j].isascii() and text[j].isalpha():
                while j < n and text[j].isascii() and text[j].isalpha():
                    j += 1
                tokens.append(Token(text[i:j], COMMAND))
            else:
                cls = WHITESPACE if text[j] in _SPACING_CONTROL else SYMBOL
                tokens.append(Token(text[i : j + 1], cls))
                j += 1
            i = j
        elif c.isspace() or c == "~":
            j = i
            while j < n and (text[j].isspace() or text[j] == "~"):
                j += 1
            tokens.append(Token(text[i:j], WHITESPACE))
            i = j
        elif c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j + 1 < n and text[j] == "." and text[j + 1].isdigit():
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            tokens.append(Token(text[i:j], DIGITS))
            i = j
        elif c.isascii() and c.isalpha():
            j = i
            while j < n and text[j].isascii() and text[j].isalnum():
                j += 1
            tokens.append(Token(text[i:j], LETTERS))
            i = j
        else:
            cls = {"@": AT, "{": BRACE_OPEN, "}": BRACE_CLOSE,
                   "[": BRACKET_OPEN, "]": BRACKET_CLOSE}.get(c, SYMBOL)
            tokens.append(Token(c, cls))
            i += 1
    return tokens


class NodeKind(enum.Enum):
    SEQUENCE = "Sequence"
    BALANCED = "BalancedExpression"
    FRACTION = "Fraction"
    BINOMIAL = "Binomial"
    SQUARE_ROOT = "SquareRoot"
    RADICAL = "Radical"
    UNDERSCORE = "Underscore"
    CARET = "Caret"
    SEMANTIC_MACRO = "SemanticMacro"
    GENERIC_MACRO = "GenericMacro"
    ALPHANUMERIC = "Alphanumeric"
    NUMBER = "Number"
    SYMBOL = "Symbol"
    AT = "At"


LEAF_KINDS = frozenset({
    NodeKind.SEMANTIC_MACRO, NodeKind.GENERIC_MACRO, NodeKind.ALPHANUMERIC,
    NodeKind.NUMBER, NodeKind.SYMBOL, NodeKind.AT,
})


@dataclass(eq=False)
class PomNode:
    kind: NodeKind
    text: str = ""
    children: list["PomNode"] = field(default_factory=list)
    tag: Optional[MacroEntry] = None
    space_before: bool = False
    close: str = ""  # closing delimiter of a BalancedExpression

    @property
    def is_leaf(self) -> bool:
        return self.kind in LEAF_KINDS

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind.value}
        if self.text:
            d["text"] = self.text
        if self.close:
            d["close"] = self.close
        if self.tag is not None:
            d["macro"] = self.tag.macro_name
        if self.space_before:
            d["space_before"] = True
        if self.children:
            d["children"] = [c.to_dict() for c in self.children]
        return d

    def structure(self) -> tuple:
        """Hashable summary used to compare trees."""
        return (self.kind, self.text, self.close, tuple(c.structure() for c in self.children))

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


def dump_text(node: PomNode, indent: int = 0) -> str:
    label = node.kind.value
    if node.text:
        label += f" {node.text}"
    if node.close:
        label += f" ... {node.close}"
    if node.tag is not None:
        t = node.tag
        label += f"  [params={t.num_params} vars={t.num_vars} ats={t.num_ats}]"
    lines = ["  " * indent + label]
    lines.extend(dump_text(c, indent + 1) for c in node.children)
    return "\n".join(lines)


def dump_json(node: PomNode) -> str:
    return json.dumps(node.to_dict(), indent=2)


class _Parser:
    def __init__(self, tokens: list[Token], lexicon: Lexicon) -> None:
        self.tokens = list(tokens)
        self.pos = 0
        self.lexicon = lexicon

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def skip_ws(self) -> bool:
        seen = False
        while self.pos < len(self.tokens) and self.tokens[self.pos].cls == WHITESPACE:
            self.pos += 1
            seen = True
        return seen

    def next_significant(self) -> Optional[Token]:
        self.skip_ws()
        tok = self.peek()
        if tok is not None:
            self.pos += 1
        return tok

    def sequence(self, closer: Optional[str]) -> list[PomNode]:
        nodes: list[PomNode] = []
        space = False
        while True:
            tok = self.peek()
            if tok is None:
                if closer == "}":
                    raise LatexSyntaxError("unbalanced braces: missing '}'")
                if closer == "\\right":
                    raise LatexSyntaxError("'\\left' without matching '\\right'")
                return nodes
            if tok.cls == WHITESPACE:
                self.pos += 1
                space = True
                continue
            if tok.cls == BRACE_CLOSE:
                if closer == "}":
                    return nodes
                raise LatexSyntaxError("unbalanced braces: unexpected '}'")
            if tok.lexeme == "\\right":
                if closer == "\\right":
                    return nodes
                raise LatexSyntaxError("'\\right' without matching '\\left'")
            node = self.item(nodes)
            node.space_before = space
            space = False
            nodes.append(node)

    def group(self) -> PomNode:
        """A braced group (consuming the closing brace) as a Sequence node."""
        children = self.sequence("}")
        self.pos += 1
        return PomNode(NodeKind.SEQUENCE, children=children)

    def argument(self) -> PomNode:
        """One argument of \\frac, \\sqrt, ... : a braced group or a single token."""
        tok = self.next_significant()
        if tok is None:
            raise LatexSyntaxError("missing argument at end of input")
        if tok.cls == BRACE_OPEN:
            return self.group()
        self.pos -= 1
        return PomNode(NodeKind.SEQUENCE, children=[self.single(for_script=False)])

    def single(self, for_script: bool) -> PomNode:
        tok = self.tokens[self.pos]
        if tok.cls in (LETTERS, DIGITS) and len(tok.lexeme) > 1 and for_script:
            # TeX scripts bind one character; push the remainder back.
            rest = tokenize(tok.lexeme[1:])
            self.tokens[self.pos : self.pos + 1] = [Token(tok.lexeme[0], tok.cls)] + rest
            tok = self.tokens[self.pos]
        if tok.cls in (BRACE_CLOSE, WHITESPACE) or tok.lexeme in ("^", "_", "\\right"):
            raise LatexSyntaxError(f"missing argument before {tok.lexeme!r}")
        return self.item([])

    def item(self, preceding: list[PomNode]) -> PomNode:
        tok = self.tokens[self.pos]
        self.pos += 1
        lex = tok.lexeme
        if tok.cls == BRACE_OPEN:
            return self.group()
        if lex in ("^", "_"):
            kind = NodeKind.CARET if lex == "^" else NodeKind.UNDERSCORE
            for prev in reversed(preceding):
                if prev.kind not in (NodeKind.CARET, NodeKind.UNDERSCORE):
                    break
                if prev.kind is kind:
                    what = "superscript" if lex == "^" else "subscript"
                    raise DoubleScriptError(f"Double {what} error")
            self.skip_ws()
            tok2 = self.peek()
            if tok2 is None:
                raise LatexSyntaxError(f"missing argument for '{lex}'")
            if tok2.cls == BRACE_OPEN:
                self.pos += 1
                arg = self.group()
            else:
                arg = self.single(for_script=True)
            return PomNode(kind, children=[arg])
        if tok.cls == COMMAND:
            return self.command(lex)
        if tok.cls == AT:
            return PomNode(NodeKind.AT, "@")
        if tok.cls == LETTERS:
            return PomNode(NodeKind.ALPHANUMERIC, lex)
        if tok.cls == DIGITS:
            return PomNode(NodeKind.NUMBER, lex)
        return PomNode(NodeKind.SYMBOL, lex)

    def command(self, lex: str) -> PomNode:
        if lex == "\\left":
            opener = self.next_significant()
            if opener is None:
                raise LatexSyntaxError("'\\left' without delimiter")
            inner = self.sequence("\\right")
            self.pos += 1
            closer = self.next_significant()
            if closer is None:
                raise LatexSyntaxError("'\\right' without delimiter")
            return PomNode(NodeKind.BALANCED, opener.lexeme, children=inner, close=closer.lexeme)
        if lex in _FRACTIONS:
            return PomNode(NodeKind.FRACTION, lex, children=[self.argument(), self.argument()])
        if lex in _BINOMIALS:
            return PomNode(NodeKind.BINOMIAL, lex, children=[self.argument(), self.argument()])
        if lex == "\\sqrt":
            self.skip_ws()
            tok = self.peek()
            if tok is not None and tok.cls == BRACKET_OPEN:
                self.pos += 1
                index: list[PomNode] = []
                while True:
                    t = self.peek()
                    if t is None:
                        raise LatexSyntaxError("unclosed '[' in \\sqrt index")
                    if t.cls == BRACKET_CLOSE:
                        self.pos += 1
                        break
                    if t.cls == WHITESPACE:
                        self.pos += 1
                        continue
                    index.append(self.item(index))
                return PomNode(NodeKind.RADICAL, lex,
                               children=[PomNode(NodeKind.SEQUENCE, children=index), self.argument()])
            return PomNode(NodeKind.SQUARE_ROOT, lex, children=[self.argument()])
        if lex in self.lexicon:
            name = lex[1:]
            variants = self.lexicon.variants(name)
            entry = self.lexicon.lookup(name, 0) or self.lexicon.lookup(name, variants[0])
            return PomNode(NodeKind.SEMANTIC_MACRO, lex, tag=entry)
        return PomNode(NodeKind.GENERIC_MACRO, lex)


def parse(tokens: list[Token], lexicon: Optional[Lexicon] = None) -> PomNode:
    """Build the PoM-parsed tree rooted at a Sequence node."""
    p = _Parser(tokens, lexicon if lexicon is not None else default_lexicon())
    return PomNode(NodeKind.SEQUENCE, children=p.sequence(None))


def parse_latex(text: str, lexicon: Optional[Lexicon] = None) -> PomNode:
    return parse(tokenize(text), lexicon)
