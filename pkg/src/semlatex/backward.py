"""Backward translation: display-form CAS trees -> semantic LaTeX."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .cas import (
    COMPLEX, DIVIDE, EXPSEQ, FLOAT, FUNCTION, INTNEG, INTPOS, MYFLOAT, NAME, POWER, PROD,
    RATIONAL, SUM, CasNode, cosmetic, function_args, parse_cas,
)
from .errors import IndexConflictError, TranslationError, UntranslatableError
from .forward import InfoRecord, TranslationResult
from .lexicon import Lexicon, MacroEntry, TranslationPattern, cas_call_shape, default_lexicon, fill_pattern, parse_pattern

IDOT = "\\idot"


@dataclass(frozen=True)
class BackwardRule:
    entry: MacroEntry
    permutation: tuple[int, ...]  # CAS argument position -> semantic slot
    pattern: TranslationPattern   # slots refer to CAS argument positions


def derived_backward_pattern(entry: MacroEntry, permutation: tuple[int, ...]) -> TranslationPattern:
    """``\\Name[..]{..}@{..}`` with slots renumbered to CAS argument positions."""
    cas_pos = {slot: pos for pos, slot in enumerate(permutation)}
    parts = ["\\" + entry.macro_name]
    k = 0
    for _ in range(entry.num_optional):
        parts.append(f"[${cas_pos[k]}]")
        k += 1
    for _ in range(entry.num_params):
        parts.append(f"{{${cas_pos[k]}}}")
        k += 1
    if entry.num_vars:
        parts.append("@" if entry.num_ats else "")
    for _ in range(entry.num_vars):
        parts.append(f"{{${cas_pos[k]}}}")
        k += 1
    return parse_pattern("".join(parts))


def backward_index(lexicon: Lexicon) -> dict[tuple[str, int], BackwardRule]:
    """Map (CAS function name, argument count) to the rule that inverts it.

    Entries whose Maple pattern is a plain call with bare slots are indexed;
    composite expansions are skipped unless they carry an explicit backward
    pattern, whose head call then supplies the key.
    """
    index: dict[tuple[str, int], BackwardRule] = {}
    for entry in lexicon:
        maple = entry.pattern("maple")
        if maple is None:
            continue
        shape = cas_call_shape(str(maple))
        if shape is None:
            continue
        fname, nargs, args = shape
        slots = [int(a[1:]) if a.startswith("$") and a[1:].isdigit() else None for a in args]
        pure = None not in slots and sorted(slots) == list(range(entry.arity))
        if entry.backward_pattern is not None:
            perm = tuple(s if s is not None else -1 for s in slots)
            rule = BackwardRule(entry, perm, entry.backward_pattern)
        elif pure:
            perm = tuple(slots)
            rule = BackwardRule(entry, perm, derived_backward_pattern(entry, perm))
        else:
            continue
        key = (fname, nargs)
        if key in index:
            raise IndexConflictError(
                f"both \\{index[key].entry.macro_name} and \\{entry.macro_name} "
                f"translate back from {fname} with {nargs} argument(s)"
            )
        index[key] = rule
    return index


def reverse_symbols(lexicon: Lexicon) -> dict[str, str]:
    """Maple name -> LaTeX for constants and Greek letters."""
    table: dict[str, str] = {}
    for latex, sym in lexicon.symbols.items():
        text = sym.targets.get("maple")
        if sym.role == "operand" and text and text not in table:
            table[text] = latex
    for entry in lexicon:
        maple = entry.pattern("maple")
        if entry.arity == 0 and maple is not None and not maple.slots:
            text = str(maple)
            if text.isidentifier():
                table[text] = "\\" + entry.macro_name
    return table


class BackTranslator:
    def __init__(self, lexicon: Lexicon) -> None:
        self.lexicon = lexicon
        self.index = backward_index(lexicon)
        self.names = reverse_symbols(lexicon)
        self.info_log: list[InfoRecord] = []

    def paren(self, s: str) -> str:
        return f"({s})"

    def tr(self, n: CasNode) -> str:
        k, p = n.kind, n.payload
        if k in (INTPOS, INTNEG):
            return str(p)
        if k == MYFLOAT:
            return p
        if k == FLOAT:
            return f"{p[0]}\\times10^{{{p[1]}}}"
        if k == NAME:
            return self.names.get(p, p)
        if k == RATIONAL:
            num, den = p
            frac = f"\\frac{{{abs(num)}}}{{{den}}}"
            return "-" + frac if num < 0 else frac
        if k == COMPLEX:
            re, im = p
            i = self.names.get("I", "I")
            imag = i if abs(im) == 1 else f"{abs(im)}{IDOT}{i}"
            if re == 0:
                return ("-" if im < 0 else "") + imag
            return f"{re}{'-' if im < 0 else '+'}{imag}"
        if k == DIVIDE:
            return f"\\frac{{{self.tr(n.children[0])}}}{{{self.tr(n.children[1])}}}"
        if k == SUM:
            out = []
            for idx, (t, f) in enumerate(zip(n.children, n.payload)):
                s = self.tr(t)
                if t.kind == SUM or (idx > 0 and s.startswith("-")):
                    s = self.paren(s)
                if idx == 0:
                    out.append(s if f == 1 else "-" + (self.paren(s) if t.kind == SUM else s))
                else:
                    out.append(("+" if f == 1 else "-") + s)
            return "".join(out)
        if k == PROD:
            kids = list(n.children)
            sign = ""
            if kids[0].kind == INTNEG and kids[0].payload == -1 and len(kids) > 1:
                sign = "-"
                kids = kids[1:]
                if kids[0].kind in (INTPOS, INTNEG, RATIONAL, MYFLOAT, FLOAT, COMPLEX):
                    sign, kids = "", list(n.children)
            parts = []
            for idx, f in enumerate(kids):
                s = self.tr(f)
                if f.kind == SUM or (idx > 0 and s.startswith("-")) or f.kind == COMPLEX and f.payload[0] != 0:
                    s = self.paren(s)
                parts.append(s)
            out = parts[0]
            for part in parts[1:]:
                out += IDOT + (" " if part[:1].isalnum() else "") + part
            return sign + out
        if k == POWER:
            base, exp = n.children
            if exp.kind == RATIONAL and exp.payload == (1, 2):
                return f"\\sqrt{{{self.tr(base)}}}"
            b = self.tr(base)
            if base.kind not in (NAME, INTPOS):
                b = self.paren(b)
            return f"{b}^{{{self.tr(exp)}}}"
        if k == FUNCTION:
            return self.function(n)
        if k == EXPSEQ:
            raise UntranslatableError("lists and expression sequences have no semantic LaTeX form")
        raise TranslationError(f"unsupported node kind {k}")

    def function(self, n: CasNode) -> str:
        args = function_args(n)
        if n.payload in ("factorial", "doublefactorial") and len(args) == 1:
            s = self.tr(args[0])
            if not (args[0].kind in (NAME, INTPOS)):
                s = self.paren(s)
            return s + ("!" if n.payload == "factorial" else "!!")
        rule = self.index.get((n.payload, len(args)))
        if rule is None:
            raise UntranslatableError(
                f"no backward translation for function {n.payload} with {len(args)} argument(s)"
            )
        e = rule.entry
        self.info_log.append(InfoRecord(
            macro_name=e.macro_name, dlmf_link=e.dlmf_link,
            target_link=e.target_links.get("maple", ""), chosen_pattern=str(rule.pattern),
            branch_cut_note=e.branch_cut_note, meaning=e.meaning,
        ))
        return fill_pattern(rule.pattern, [self.tr(a) for a in args])


def translate_back(node: CasNode, lexicon: Optional[Lexicon] = None) -> TranslationResult:
    """Translate a display-form tree (output of :func:`cosmetic`) to semantic LaTeX."""
    bt = BackTranslator(lexicon if lexicon is not None else default_lexicon())
    return TranslationResult(bt.tr(node), "latex", bt.info_log)


def backtranslate(text: str, lexicon: Optional[Lexicon] = None) -> TranslationResult:
    """Parse Maple input, apply the cosmetic rules and translate back."""
    return translate_back(cosmetic(parse_cas(text)), lexicon)
