"""Forward translation: PoM-parsed semantic LaTeX -> CAS input syntax.

The tree walk follows the lookahead scheme: a leaf is translated together
with the list of its following siblings, and a semantic macro consumes the
siblings that hold its exponent, optional arguments, parameters, ``@`` signs
and variables. Translated pieces are collected in a TEO list so that postfix
operators (``!``) and superscripts can reach back to the previous operand.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    ArityError,
    LatexSyntaxError,
    MismatchedParenthesesError,
    TranslationError,
    UntranslatableError,
)
from .latex_parser import NodeKind, PomNode, parse_latex
from .lexicon import Lexicon, Literal, MacroEntry, Slot, TranslationPattern, default_lexicon

OPERAND, OPERATOR, RELATION, ELLIPSIS, OTHER = "operand", "operator", "relation", "ellipsis", "other"


@dataclass(frozen=True)
class TargetSyntax:
    name: str
    multiply: str
    relations: dict
    factorial: str
    doublefactorial: str
    sqrt: str
    root: str
    binomial: str
    subscript: str
    abs: str


TARGET_SYNTAX = {
    "maple": TargetSyntax(
        "maple", "*", {"=": "=", "<": "<", ">": ">"},
        "factorial({})", "doublefactorial({})", "sqrt({})", "({})^(1/({}))",
        "binomial({},{})", "{}[{}]", "abs({})",
    ),
    "mathematica": TargetSyntax(
        "mathematica", " ", {"=": "==", "<": "<", ">": ">"},
        "Factorial[{}]", "Factorial2[{}]", "Sqrt[{}]", "Surd[{},{}]",
        "Binomial[{},{}]", "Subscript[{},{}]", "Abs[{}]",
    ),
}

_OPEN = {"(": ")", "[": "]"}
_CLOSE = {")": "(", "]": "["}
_OPERATOR_SYMBOLS = set("+-*/,;:'")
_RELATION_SYMBOLS = set("=<>")


@dataclass
class TeoFragment:
    text: str
    grouped: bool = False
    role: str = OPERAND


@dataclass(frozen=True)
class InfoRecord:
    macro_name: str
    dlmf_link: str
    target_link: str
    chosen_pattern: str
    alternatives_not_taken: tuple = ()
    branch_cut_note: Optional[str] = None
    meaning: str = ""

    def to_dict(self) -> dict:
        return {
            "macro": self.macro_name,
            "meaning": self.meaning,
            "dlmf_link": self.dlmf_link,
            "target_link": self.target_link,
            "chosen_pattern": self.chosen_pattern,
            "alternatives_not_taken": [{"pattern": p, "note": n} for p, n in self.alternatives_not_taken],
            "branch_cut_note": self.branch_cut_note,
        }


@dataclass
class TranslationResult:
    output: str
    target: str
    info_log: list[InfoRecord] = field(default_factory=list)


def top_level_ops(text: str) -> set[str]:
    """Operator characters of ``text`` outside any bracket pair."""
    ops, depth = set(), 0
    for i, c in enumerate(text):
        if c in "([{":
            depth += 1
        elif c in ")]}":
            depth -= 1
        elif depth == 0 and c in "+-*/^=<>, !":
            if c == "-" and i == 0:
                ops.add("neg")
            else:
                ops.add(c)
    return ops


def is_self_delimiting(text: str) -> bool:
    """True for names, numbers, and texts wrapped by one bracket pair or call."""
    if not text:
        return False
    if text.replace(".", "").replace("_", "").isalnum():
        return True
    if text.startswith("\\[") and text.endswith("]") and text[2:-1].isalpha():
        return True
    start = 0
    while start < len(text) and (text[start].isalnum() or text[start] in "_\\"):
        start += 1
    if start == len(text) or text[start] not in "([{":
        return False
    depth = 0
    for i in range(start, len(text)):
        c = text[i]
        if c in "([{":
            depth += 1
        elif c in ")]}":
            depth -= 1
            if depth == 0:
                # a call like f(a)[b] stays self-delimiting
                if i == len(text) - 1:
                    return True
                if text[i + 1] not in "([":
                    return False
    return False


def _outer_pair(text: str) -> bool:
    """True if the first character's bracket closes at the last character."""
    depth = 0
    for i, c in enumerate(text):
        if c in "([{":
            depth += 1
        elif c in ")]}":
            depth -= 1
            if depth == 0:
                return i == len(text) - 1
    return False


def _needs_wrap(text: str) -> bool:
    return bool(top_level_ops(text) - {"^"})


class TeoList:
    """Ordered translated fragments; inserts inferred multiplications."""

    def __init__(self, syntax: TargetSyntax) -> None:
        self.syntax = syntax
        self.items: list[TeoFragment] = []

    def __len__(self) -> int:
        return len(self.items)

    def append(self, frag: TeoFragment) -> None:
        last = self.items[-1] if self.items else None
        if frag.role == OPERAND and last is not None:
            if last.role == OPERAND:
                self.items.append(TeoFragment(self.syntax.multiply, False, OPERATOR))
                last = self.items[-1]
            ops = top_level_ops(frag.text)
            if last.text.strip() in ("*", "/", "") and ops & {"+", "-", "neg", " ", "="}:
                frag = TeoFragment(f"({frag.text})", True, OPERAND)
            elif last.text == "/" and ops & {"*", "/"}:
                frag = TeoFragment(f"({frag.text})", True, OPERAND)
            elif last.text == "-" and ops & {"+", "-"}:
                frag = TeoFragment(f"({frag.text})", True, OPERAND)
        self.items.append(frag)

    def pop_operand(self) -> Optional[TeoFragment]:
        if self.items and self.items[-1].role == OPERAND:
            return self.items.pop()
        return None

    def text(self) -> str:
        return "".join(f.text for f in self.items)

    def as_fragment(self) -> TeoFragment:
        """The whole list as one fragment, parenthesized if it has several parts."""
        if len(self.items) == 1:
            return TeoFragment(self.items[0].text, self.items[0].grouped, OPERAND)
        text = self.text()
        return TeoFragment(text, is_self_delimiting(text), OPERAND)


def fill_in_context(pattern: TranslationPattern, args: list[str]) -> str:
    """Fill a pattern, parenthesizing arguments whose slot is not delimited.

    A slot counts as delimited when the neighbouring literal characters are
    brackets or commas (e.g. ``sin($0)``); ``arctan(1/$0)`` is not.
    """
    segs = pattern.segments
    out = []
    for k, seg in enumerate(segs):
        if isinstance(seg, Literal):
            out.append(seg.text)
            continue
        if seg.index >= len(args):
            raise ArityError(f"no argument for slot ${seg.index} ({len(args)} given)")
        arg = args[seg.index]
        left = segs[k - 1].text.rstrip()[-1:] if k > 0 and isinstance(segs[k - 1], Literal) else ""
        right = segs[k + 1].text.lstrip()[:1] if k + 1 < len(segs) and isinstance(segs[k + 1], Literal) else ""
        delimited = (left == "" or left in "([{,") and (right == "" or right in ")]},")
        if k > 0 and isinstance(segs[k - 1], Slot) or k + 1 < len(segs) and isinstance(segs[k + 1], Slot):
            delimited = False
        out.append(arg if delimited or not _needs_wrap(arg) else f"({arg})")
    return "".join(out)


class Translator:
    """Forward translator for one target; collects the info log and visit counts."""

    def __init__(self, lexicon: Lexicon, target: str) -> None:
        if target not in TARGET_SYNTAX:
            raise TranslationError(f"unknown target {target!r}")
        self.lexicon = lexicon
        self.target = target
        self.syntax = TARGET_SYNTAX[target]
        self.info_log: list[InfoRecord] = []
        self.visits: Counter = Counter()

    # -- tree walk ---------------------------------------------------------

    def translate(self, root: PomNode) -> TranslationResult:
        self.visits[id(root)] += 1
        teo = TeoList(self.syntax)
        if root.is_leaf:
            self.translate_node(root, [], teo)
        else:
            self.translate_sequence(root.children, teo)
        return TranslationResult(teo.text(), self.target, list(self.info_log))

    def translate_sequence(self, nodes: list[PomNode], teo: TeoList) -> None:
        siblings = list(nodes)
        while siblings:
            node = siblings.pop(0)
            self.translate_node(node, siblings, teo)

    def sub(self, nodes: list[PomNode]) -> TeoList:
        teo = TeoList(self.syntax)
        self.translate_sequence(nodes, teo)
        return teo

    def group_text(self, node: PomNode) -> str:
        """Translate a braced argument group to plain text."""
        self.visits[id(node)] += 1
        if node.kind is NodeKind.SEQUENCE:
            return self.sub(node.children).text()
        teo = TeoList(self.syntax)
        self.translate_node(node, [], teo, counted=True)
        return teo.text()

    def translate_node(self, node: PomNode, siblings: list[PomNode], teo: TeoList, counted: bool = False) -> None:
        if not counted:
            self.visits[id(node)] += 1
        kind = node.kind
        syn = self.syntax
        if kind is NodeKind.SEQUENCE:
            inner = self.sub(node.children)
            if len(inner) == 0:
                return
            frag = inner.as_fragment()
            if len(inner) > 1 and not frag.grouped:
                frag = TeoFragment(f"({frag.text})", True, OPERAND)
            teo.append(frag)
        elif kind is NodeKind.BALANCED:
            inner = self.sub(node.children).text()
            if node.text == "|" and node.close == "|":
                teo.append(TeoFragment(syn.abs.format(inner), True))
            else:
                teo.append(TeoFragment(f"({inner})", True))
        elif kind is NodeKind.FRACTION:
            num, den = (self.group_text(c) for c in node.children)
            teo.append(TeoFragment(f"({num})/({den})", False))
        elif kind is NodeKind.BINOMIAL:
            a, b = (self.group_text(c) for c in node.children)
            teo.append(TeoFragment(syn.binomial.format(a, b), True))
        elif kind is NodeKind.SQUARE_ROOT:
            teo.append(TeoFragment(syn.sqrt.format(self.group_text(node.children[0])), True))
        elif kind is NodeKind.RADICAL:
            index, radicand = (self.group_text(c) for c in node.children)
            teo.append(TeoFragment(syn.root.format(radicand, index), self.target != "maple"))
        elif kind in (NodeKind.CARET, NodeKind.UNDERSCORE):
            self.translate_script(node, teo)
        elif kind is NodeKind.SEMANTIC_MACRO:
            teo.append(self.translate_macro(node, siblings))
        elif kind is NodeKind.GENERIC_MACRO:
            self.translate_generic(node, teo)
        elif kind is NodeKind.ALPHANUMERIC:
            run = ""
            for ch in node.text:
                if ch.isdigit():
                    run += ch
                    continue
                if run:
                    teo.append(TeoFragment(run, True))
                    run = ""
                teo.append(TeoFragment(ch, True))
            if run:
                teo.append(TeoFragment(run, True))
        elif kind is NodeKind.NUMBER:
            teo.append(TeoFragment(node.text, True))
        elif kind is NodeKind.AT:
            raise TranslationError("'@' outside of a semantic macro")
        elif kind is NodeKind.SYMBOL:
            self.translate_symbol(node, siblings, teo)
        else:  # pragma: no cover - exhaustive over NodeKind
            raise TranslationError(f"unsupported node {kind}")

    # -- leaves --------------------------------------------------------------

    def translate_symbol(self, node: PomNode, siblings: list[PomNode], teo: TeoList) -> None:
        s = node.text
        if s in _OPEN:
            inner, close = self.take_until_closed(s, siblings)
            teo.append(TeoFragment(f"{s}{self.sub(inner).text()}{close}", True))
        elif s in _CLOSE:
            raise MismatchedParenthesesError(f"mismatched parentheses: unexpected {s!r}")
        elif s == "!":
            self.translate_postfix(node, siblings, teo)
        elif s in _RELATION_SYMBOLS:
            teo.append(TeoFragment(self.syntax.relations[s], False, RELATION))
        elif s in _OPERATOR_SYMBOLS:
            if s == "*":
                s = self.syntax.multiply
            teo.append(TeoFragment(s, False, OPERATOR))
        else:
            raise UntranslatableError(f"no translation for symbol {s!r}")

    def take_until_closed(self, opener: str, siblings: list[PomNode]) -> tuple[list[PomNode], str]:
        """Remove siblings up to the bracket matching ``opener``."""
        stack = [opener]
        inner: list[PomNode] = []
        while siblings:
            node = siblings.pop(0)
            if node.kind is NodeKind.SYMBOL and node.text in _OPEN:
                stack.append(node.text)
            elif node.kind is NodeKind.SYMBOL and node.text in _CLOSE:
                if stack[-1] != _CLOSE[node.text]:
                    raise MismatchedParenthesesError(
                        f"mismatched parentheses: {stack[-1]!r} closed by {node.text!r}"
                    )
                stack.pop()
                if not stack:
                    self.visits[id(node)] += 1
                    return inner, node.text
            inner.append(node)
        raise MismatchedParenthesesError(f"mismatched parentheses: {opener!r} is never closed")

    def translate_postfix(self, node: PomNode, siblings: list[PomNode], teo: TeoList) -> None:
        operand = teo.pop_operand()
        if operand is None:
            raise LatexSyntaxError("'!' without a preceding operand")
        text = operand.text
        if text.startswith("(") and _outer_pair(text):
            text = text[1:-1]
        if siblings and siblings[0].kind is NodeKind.SYMBOL and siblings[0].text == "!":
            self.visits[id(siblings.pop(0))] += 1
            teo.append(TeoFragment(self.syntax.doublefactorial.format(text), True))
        else:
            teo.append(TeoFragment(self.syntax.factorial.format(text), True))

    def translate_generic(self, node: PomNode, teo: TeoList) -> None:
        sym = self.lexicon.symbol(node.text)
        if sym is None or self.target not in sym.targets:
            raise UntranslatableError(f"no translation for macro {node.text} to {self.target}")
        text = sym.targets[self.target]
        if sym.role == "multiply":
            teo.append(TeoFragment(self.syntax.multiply, False, OPERATOR))
        elif sym.role == OPERAND:
            teo.append(TeoFragment(text, is_self_delimiting(text)))
        else:
            teo.append(TeoFragment(text, False, sym.role))

    def translate_script(self, node: PomNode, teo: TeoList) -> None:
        base = teo.pop_operand()
        if base is None:
            raise LatexSyntaxError("superscript or subscript without a base")
        arg = self.group_text(node.children[0])
        if node.kind is NodeKind.UNDERSCORE:
            teo.append(TeoFragment(self.syntax.subscript.format(base.text, arg), True))
            return
        b = base.text
        if top_level_ops(b):
            b = f"({b})"
        e = arg if is_self_delimiting(arg) else f"({arg})"
        teo.append(TeoFragment(f"{b}^{e}", False))

    # -- semantic macros ---------------------------------------------------

    def translate_macro(self, macro: PomNode, siblings: list[PomNode]) -> TeoFragment:
        name = macro.text[1:]
        variants = self.lexicon.variants(name)
        takes_args = any(
            (e := self.lexicon.lookup(name, v)) is not None and e.arity + e.num_ats > 0 for v in variants
        )
        power = None
        if takes_args and siblings and siblings[0].kind is NodeKind.CARET:
            caret = siblings.pop(0)
            self.visits[id(caret)] += 1
            power = self.group_text(caret.children[0])

        args: list[str] = []
        n_optional = 0
        if any(v > 0 for v in variants):
            while siblings and siblings[0].kind is NodeKind.SYMBOL and siblings[0].text == "[":
                self.visits[id(siblings.pop(0))] += 1
                inner, _ = self.take_until_closed("[", siblings)
                args.append(self.sub(inner).text())
                n_optional += 1

        entry = self.lexicon.lookup(name, n_optional)
        if entry is None:
            raise UntranslatableError(
                f"macro {macro.text} has no lexicon entry with {n_optional} optional argument(s)"
            )
        args.extend(self.take_groups(entry, entry.num_params, "parameter", siblings))
        ats = 0
        while siblings and siblings[0].kind is NodeKind.AT:
            self.visits[id(siblings.pop(0))] += 1
            ats += 1
        if ats > entry.num_ats:
            raise TranslationError(
                f"macro {macro.text} takes at most {entry.num_ats} '@' sign(s), found {ats}"
            )
        args.extend(self.take_groups(entry, entry.num_vars, "variable", siblings))

        pattern = entry.pattern(self.target)
        if pattern is None:
            raise UntranslatableError(f"no {self.target} translation for macro {macro.text}")
        text = fill_in_context(pattern, args)
        self.log(entry, pattern)
        if power is not None:
            return TeoFragment(f"({text})^({power})", False)
        if _needs_wrap(text):
            return TeoFragment(f"({text})", True)
        return TeoFragment(text, is_self_delimiting(text))

    def take_groups(self, entry: MacroEntry, count: int, what: str, siblings: list[PomNode]) -> list[str]:
        out = []
        for k in range(count):
            if not siblings or siblings[0].kind is not NodeKind.SEQUENCE:
                raise ArityError(
                    f"macro \\{entry.macro_name} expects {count} {what}(s) in braces, found {k}"
                )
            out.append(self.group_text(siblings.pop(0)))
        return out

    def log(self, entry: MacroEntry, pattern: TranslationPattern) -> None:
        alts = entry.alternatives.get(self.target, ())
        self.info_log.append(InfoRecord(
            macro_name=entry.macro_name,
            dlmf_link=entry.dlmf_link,
            target_link=entry.target_links.get(self.target, ""),
            chosen_pattern=str(pattern),
            alternatives_not_taken=tuple((str(a.pattern), a.note) for a in alts),
            branch_cut_note=entry.target_notes.get(self.target) or entry.branch_cut_note,
            meaning=entry.meaning,
        ))


def translate(root: PomNode, target: str, lexicon: Optional[Lexicon] = None) -> TranslationResult:
    """Translate a PoM-parsed tree to ``target`` ("maple" or "mathematica")."""
    return Translator(lexicon if lexicon is not None else default_lexicon(), target).translate(root)


def translate_latex(text: str, target: str = "maple", lexicon: Optional[Lexicon] = None) -> TranslationResult:
    """Parse and translate a semantic LaTeX string in one call."""
    lexicon = lexicon if lexicon is not None else default_lexicon()
    return translate(parse_latex(text, lexicon), target, lexicon)
