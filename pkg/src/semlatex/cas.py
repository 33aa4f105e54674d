"""Maple-style 1D input: inert expression trees, cosmetic display form, rendering.

The inert form mirrors the CAS kernel's normalizations: subtraction is a SUM
term with factor -1, division is a product with a ``^(-1)`` power, and decimal
literals are mantissa/exponent pairs. Nothing is ever evaluated or folded.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Optional, Union

from .errors import CasParseError, RenderError

SUM, PROD, POWER, FUNCTION, EXPSEQ = "SUM", "PROD", "POWER", "FUNCTION", "EXPSEQ"
INTPOS, INTNEG, COMPLEX, FLOAT, RATIONAL = "INTPOS", "INTNEG", "COMPLEX", "FLOAT", "RATIONAL"
NAME, MYFLOAT, DIVIDE = "NAME", "MYFLOAT", "DIVIDE"

KINDS = frozenset({SUM, PROD, POWER, FUNCTION, EXPSEQ, INTPOS, INTNEG, COMPLEX,
                   FLOAT, RATIONAL, NAME, MYFLOAT, DIVIDE})
NUMERIC_KINDS = frozenset({INTPOS, INTNEG, COMPLEX, FLOAT, RATIONAL, MYFLOAT})
MYFLOAT_MAX_EXPONENT = 6


@dataclass(frozen=True)
class CasNode:
    kind: str
    children: tuple = ()
    payload: Any = None

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.payload is not None:
            d["payload"] = list(self.payload) if isinstance(self.payload, tuple) else self.payload
        if self.children:
            d["children"] = [c.to_dict() for c in self.children]
        return d

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


def integer(v: int) -> CasNode:
    return CasNode(INTPOS if v >= 0 else INTNEG, (), v)


def name(s: str) -> CasNode:
    return CasNode(NAME, (), s)


def function(fname: str, *args: CasNode, as_list: bool = False) -> CasNode:
    return CasNode(FUNCTION, (CasNode(EXPSEQ, tuple(args), "[]" if as_list else None),), fname)


def make_sum(terms: list[tuple[CasNode, int]]) -> CasNode:
    flat: list[tuple[CasNode, int]] = []
    for t, f in terms:
        if t.kind == SUM and f == 1:
            flat.extend(zip(t.children, t.payload))
        else:
            flat.append((t, f))
    if len(flat) == 1 and flat[0][1] == 1:
        return flat[0][0]
    return CasNode(SUM, tuple(t for t, _ in flat), tuple(f for _, f in flat))


def make_prod(factors: list[CasNode]) -> CasNode:
    flat: list[CasNode] = []
    for f in factors:
        flat.extend(f.children if f.kind == PROD else (f,))
    if len(flat) == 1:
        return flat[0]
    return CasNode(PROD, tuple(flat))


def is_int(n: CasNode) -> bool:
    return n.kind in (INTPOS, INTNEG)


def is_imaginary_unit(n: CasNode) -> bool:
    return n.kind == NAME and n.payload == "I"


def function_args(node: CasNode) -> tuple:
    return node.children[0].children


@dataclass(frozen=True)
class ParseOptions:
    unevaluated: bool = True


# ------------------------------------------------------------------ lexing

_Tok = tuple  # (kind, text, position)


def _lex(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and text[j].isdigit():
                j += 1
            is_float = False
            if j < n and text[j] == "." and not (j + 1 < n and text[j + 1] == "."):
                is_float = True
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    is_float = True
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            toks.append(("float" if is_float else "int", text[i:j], i))
            i = j
        elif c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("name", text[i:j], i))
            i = j
        elif c == "*" and text[i:i + 2] == "**":
            toks.append(("op", "^", i))
            i += 2
        elif c in "+-*/^!(),[]'":
            toks.append(("op", c, i))
            i += 1
        else:
            raise CasParseError(f"unexpected character {c!r}", i)
    return toks


def _float_payload(text: str) -> tuple[int, int]:
    mant, _, exp = text.lower().partition("e")
    whole, _, frac = mant.partition(".")
    m = int((whole + frac) or "0")
    return m, (int(exp) if exp else 0) - len(frac)


# ------------------------------------------------------------------ parsing


class _CasParser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.toks = _lex(text)
        self.i = 0

    def peek(self, value: Optional[str] = None) -> Optional[_Tok]:
        if self.i < len(self.toks):
            t = self.toks[self.i]
            if value is None or (t[0] == "op" and t[1] == value):
                return t
        return None

    def pos(self) -> int:
        return self.toks[self.i][2] if self.i < len(self.toks) else len(self.text)

    def expect(self, value: str) -> None:
        if not self.peek(value):
            found = self.toks[self.i][1] if self.i < len(self.toks) else "end of input"
            raise CasParseError(f"expected {value!r}, found {found!r}", self.pos())
        self.i += 1

    def top(self, opts: ParseOptions) -> CasNode:
        if not self.toks:
            raise CasParseError("empty input", 0)
        quoted = False
        if self.peek("'"):
            if not opts.unevaluated:
                raise CasParseError("unevaluation quotes are disabled", self.pos())
            quoted = True
            self.i += 1
        node = self.expr()
        if quoted:
            self.expect("'")
        if self.i < len(self.toks):
            tok = self.toks[self.i]
            if tok[1] == ",":
                raise CasParseError("expression sequence outside of a function call or list", tok[2])
            if tok[1] in ")]":
                raise CasParseError(f"unbalanced {tok[1]!r}", tok[2])
            raise CasParseError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def expr(self) -> CasNode:
        terms = [(self.product(), 1)]
        while self.peek("+") or self.peek("-"):
            sign = 1 if self.toks[self.i][1] == "+" else -1
            self.i += 1
            terms.append((self.product(), sign))
        if len(terms) == 1:
            return terms[0][0]
        node = make_sum(terms)
        return _complex_from_sum(node)

    def product(self) -> CasNode:
        left = self.unary()
        factors = [left]
        while self.peek("*") or self.peek("/"):
            op = self.toks[self.i][1]
            self.i += 1
            right = self.unary()
            if op == "*":
                factors.append(right)
            else:
                prev = factors[-1]
                if is_int(prev) and right.kind == INTPOS and right.payload > 0:
                    factors[-1] = CasNode(RATIONAL, (), (prev.payload, right.payload))
                else:
                    factors.append(CasNode(POWER, (right, integer(-1))))
        if len(factors) == 1:
            return factors[0]
        node = make_prod(factors)
        if (node.kind == PROD and len(node.children) == 2 and is_int(node.children[0])
                and is_imaginary_unit(node.children[1])):
            return CasNode(COMPLEX, (), (0, node.children[0].payload))
        return node

    def unary(self) -> CasNode:
        if self.peek("-"):
            self.i += 1
            return negate(self.unary())
        if self.peek("+"):
            self.i += 1
            return self.unary()
        return self.power()

    def power(self) -> CasNode:
        base = self.postfix()
        if self.peek("^"):
            self.i += 1
            if self.i >= len(self.toks):
                raise CasParseError("trailing operator '^'", self.pos())
            return CasNode(POWER, (base, self.unary()))
        return base

    def postfix(self) -> CasNode:
        node = self.primary()
        while self.peek("!"):
            start = self.toks[self.i][2]
            self.i += 1
            nxt = self.peek("!")
            if nxt and nxt[2] == start + 1:
                self.i += 1
                node = function("doublefactorial", node)
            else:
                node = function("factorial", node)
        return node

    def primary(self) -> CasNode:
        if self.i >= len(self.toks):
            raise CasParseError("unexpected end of input (trailing operator?)", self.pos())
        kind, text, at = self.toks[self.i]
        self.i += 1
        if kind == "int":
            return integer(int(text))
        if kind == "float":
            return CasNode(FLOAT, (), _float_payload(text))
        if kind == "name":
            if self.peek("("):
                self.i += 1
                args = self.arguments(")")
                if text == "sqrt" and len(args) == 1:
                    return CasNode(POWER, (args[0], CasNode(RATIONAL, (), (1, 2))))
                if text == "Float" and len(args) == 2 and all(is_int(a) for a in args):
                    return CasNode(FLOAT, (), (args[0].payload, args[1].payload))
                return CasNode(FUNCTION, (CasNode(EXPSEQ, tuple(args)),), text)
            return name(text)
        if text == "(":
            inner = self.expr()
            if self.peek(","):
                raise CasParseError("expression sequence inside parentheses", self.pos())
            self.expect(")")
            return inner
        if text == "[":
            return CasNode(EXPSEQ, tuple(self.arguments("]")), "[]")
        if text in ")]":
            raise CasParseError(f"unbalanced {text!r}", at)
        raise CasParseError(f"unexpected {text!r}", at)

    def arguments(self, closer: str) -> list[CasNode]:
        args: list[CasNode] = []
        if self.peek(closer):
            self.i += 1
            return args
        while True:
            if self.peek(",") or self.peek(closer):
                raise CasParseError("empty argument", self.pos())
            args.append(self.expr())
            if self.peek(","):
                self.i += 1
                continue
            if self.i >= len(self.toks):
                raise CasParseError(f"unbalanced: missing {closer!r}", self.pos())
            self.expect(closer)
            return args


def negate(node: CasNode) -> CasNode:
    """Unary minus: literals absorb the sign, anything else gets a -1 factor."""
    k, p = node.kind, node.payload
    if is_int(node):
        return integer(-p)
    if k == FLOAT:
        return CasNode(FLOAT, (), (-p[0], p[1]))
    if k == RATIONAL:
        return CasNode(RATIONAL, (), (-p[0], p[1]))
    if k == COMPLEX:
        return CasNode(COMPLEX, (), (-p[0], -p[1]))
    node = make_prod([integer(-1), node])
    if len(node.children) == 2 and is_imaginary_unit(node.children[1]):
        return CasNode(COMPLEX, (), (0, -1))
    return node


def _complex_from_sum(node: CasNode) -> CasNode:
    if node.kind != SUM or len(node.children) != 2 or node.payload[0] != 1:
        return node
    re, im = node.children
    if not is_int(re):
        return node
    f = node.payload[1]
    if is_imaginary_unit(im):
        return CasNode(COMPLEX, (), (re.payload, f))
    if im.kind == COMPLEX and im.payload[0] == 0:
        return CasNode(COMPLEX, (), (re.payload, f * im.payload[1]))
    return node


def parse_cas(text: str, opts: Optional[ParseOptions] = None) -> CasNode:
    """Parse Maple-style 1D input into the inert tree."""
    return _CasParser(text).top(opts or ParseOptions())


# ------------------------------------------------------------------ cosmetic


def _float_text(m: int, n: int) -> str:
    sign, digits = ("-" if m < 0 else ""), str(abs(m))
    if n >= 0:
        return f"{sign}{digits}{'0' * n}.0"
    digits = digits.rjust(-n + 1, "0")
    return f"{sign}{digits[:n]}.{digits[n:]}"


def cosmetic(node: CasNode) -> CasNode:
    """Display form: leading signs, subtraction, fractions, decimal floats."""
    kids = tuple(cosmetic(c) for c in node.children)
    k = node.kind
    if k == FLOAT:
        m, n = node.payload
        if abs(n) <= MYFLOAT_MAX_EXPONENT:
            return CasNode(MYFLOAT, (), _float_text(m, n))
        return node
    if k == PROD:
        return _cosmetic_prod(list(kids))
    if k == POWER:
        base, exp = kids
        if exp.kind == INTNEG:
            den = base if exp.payload == -1 else CasNode(POWER, (base, integer(-exp.payload)))
            return CasNode(DIVIDE, (integer(1), den))
        return CasNode(POWER, kids)
    if k == SUM:
        terms = []
        for t, f in zip(kids, node.payload):
            if t.kind == PROD and is_int(t.children[0]) and t.children[0].payload < 0:
                lead = t.children[0].payload
                rest = list(t.children[1:]) if lead == -1 else [integer(-lead), *t.children[1:]]
                t, f = (rest[0] if len(rest) == 1 else CasNode(PROD, tuple(rest))), -f
            elif t.kind == INTNEG:
                t, f = integer(-t.payload), -f
            terms.append((t, f))
        return CasNode(SUM, tuple(t for t, _ in terms), tuple(f for _, f in terms))
    if kids == node.children:
        return node
    return CasNode(k, kids, node.payload)


def _cosmetic_prod(factors: list[CasNode]) -> CasNode:
    sign = False
    nums: list[CasNode] = []
    dens: list[CasNode] = []
    for f in factors:
        if f.kind == INTNEG and f.payload == -1 and not sign:
            sign = True
        elif f.kind == DIVIDE and f.children[0].kind == INTPOS and f.children[0].payload == 1:
            dens.append(f.children[1])
        else:
            nums.append(f)
    if dens and all(d.kind == INTPOS and d.payload > 0 for d in dens):
        num = 1
        rest = []
        for f in nums:
            if f.kind == INTPOS:
                num *= f.payload
            else:
                rest.append(f)
        den = 1
        for d in dens:
            den *= d.payload
        out = ([integer(-1)] if sign else []) + [CasNode(RATIONAL, (), (num, den))] + rest
        return out[0] if len(out) == 1 else CasNode(PROD, tuple(out))
    if dens:
        num_node = integer(1) if not nums else nums[0] if len(nums) == 1 else CasNode(PROD, tuple(nums))
        den_node = dens[0] if len(dens) == 1 else CasNode(PROD, tuple(dens))
        div = CasNode(DIVIDE, (num_node, den_node))
        return CasNode(PROD, (integer(-1), div)) if sign else div
    out = ([integer(-1)] if sign else []) + nums
    return out[0] if len(out) == 1 else CasNode(PROD, tuple(out))


# ------------------------------------------------------------------ rendering

_MATHEMATICA_NAMES = {
    "sin": "Sin", "cos": "Cos", "tan": "Tan", "cot": "Cot", "sec": "Sec", "csc": "Csc",
    "sinh": "Sinh", "cosh": "Cosh", "tanh": "Tanh", "coth": "Coth",
    "arcsin": "ArcSin", "arccos": "ArcCos", "arctan": "ArcTan", "arccot": "ArcCot",
    "arcsinh": "ArcSinh", "arccosh": "ArcCosh", "arctanh": "ArcTanh",
    "exp": "Exp", "ln": "Log", "abs": "Abs", "Re": "Re", "Im": "Im",
    "factorial": "Factorial", "doublefactorial": "Factorial2",
    "JacobiP": "JacobiP", "LegendreP": "LegendreP", "BesselK": "BesselK",
    "EllipticF": "EllipticF",
}
_MATHEMATICA_CONSTANTS = {"Pi": "Pi", "I": "I", "infinity": "Infinity", "pi": "Pi"}


def _negative_leading(n: CasNode) -> bool:
    k, p = n.kind, n.payload
    if k == INTNEG:
        return True
    if k in (FLOAT, RATIONAL):
        return p[0] < 0
    if k == COMPLEX:
        return p[0] < 0 or (p[0] == 0 and p[1] < 0)
    if k == MYFLOAT:
        return p.startswith("-")
    if k == PROD:
        return _negative_leading(n.children[0])
    return False


class _Renderer:
    def __init__(self, target: str) -> None:
        if target not in ("maple", "mathematica"):
            raise RenderError(f"unknown target {target!r}")
        self.mma = target == "mathematica"

    def paren(self, s: str) -> str:
        return f"({s})"

    def render(self, n: CasNode) -> str:
        k, p = n.kind, n.payload
        if k in (INTPOS, INTNEG):
            return str(p)
        if k == NAME:
            return _MATHEMATICA_CONSTANTS.get(p, p) if self.mma else p
        if k == FLOAT:
            m, e = p
            if e < 0:
                return _float_text(m, e)
            if self.mma:
                return f"{m}*^{e}"
            return f"{m}." if e == 0 else f"{m}e{e}"
        if k == MYFLOAT:
            return p
        if k == RATIONAL:
            return f"{p[0]}/{p[1]}"
        if k == COMPLEX:
            re, im = p
            unit = "I"
            if re == 0:
                return f"{im}*{unit}"
            if im in (1, -1):
                return f"{re}{'+' if im > 0 else '-'}{unit}"
            return f"{re}{'+' if im >= 0 else '-'}{abs(im)}*{unit}"
        if k == SUM:
            out = []
            for idx, (t, f) in enumerate(zip(n.children, n.payload)):
                s = self.render(t)
                if t.kind == SUM or (idx > 0 and _negative_leading(t)) or (t.kind == COMPLEX and t.payload[0] != 0):
                    s = self.paren(s)
                elif f == -1 and t.kind == DIVIDE:
                    s = self.paren(s)
                if idx == 0:
                    out.append(s if f == 1 else f"-{self.paren(s) if t.kind in (SUM, PROD) else s}")
                else:
                    out.append(("+" if f == 1 else "-") + s)
            return "".join(out)
        if k == PROD:
            out = []
            for idx, f in enumerate(n.children):
                s = self.render(f)
                wrap = f.kind in (SUM, PROD)
                if idx == 0:
                    wrap = wrap or (f.kind == COMPLEX and f.payload[0] != 0)
                else:
                    wrap = wrap or f.kind in (COMPLEX, RATIONAL) or _negative_leading(f)
                    wrap = wrap or f.kind == DIVIDE
                out.append(self.paren(s) if wrap else s)
            return "*".join(out)
        if k == POWER:
            base, exp = n.children
            b = self.render(base)
            if base.kind not in (NAME, INTPOS, FUNCTION) and not (base.kind == FLOAT and base.payload[0] >= 0):
                b = self.paren(b)
            e = self.render(exp)
            if exp.kind not in (NAME, INTPOS, FUNCTION):
                e = self.paren(e)
            return f"{b}^{e}"
        if k == DIVIDE:
            a, b = n.children
            return f"({self.render(a)})/({self.render(b)})"
        if k == FUNCTION:
            args = ",".join(self.render(a) for a in function_args(n))
            if self.mma:
                fname = _MATHEMATICA_NAMES.get(p)
                if fname is None:
                    raise RenderError(f"function {p!r} has no Mathematica rendering")
                return f"{fname}[{args}]"
            return f"{p}({args})"
        if k == EXPSEQ:
            inner = ",".join(self.render(a) for a in n.children)
            if p == "[]":
                return f"{{{inner}}}" if self.mma else f"[{inner}]"
            raise RenderError("bare expression sequence cannot be rendered")
        raise RenderError(f"cannot render node kind {k}")


def render_cas(node: CasNode, target: str = "maple") -> str:
    """Emit ``node`` in target syntax with minimal parentheses."""
    return _Renderer(target).render(node)


def dump_cas_text(node: CasNode, indent: int = 0) -> str:
    label = node.kind
    if node.payload is not None:
        label += f" {node.payload}"
    lines = ["  " * indent + label]
    lines.extend(dump_cas_text(c, indent + 1) for c in node.children)
    return "\n".join(lines)


def dump_cas_json(node: CasNode) -> str:
    return json.dumps(node.to_dict(), indent=2)


def has_inert_violations(node: CasNode) -> bool:
    """True if a display-only kind (MYFLOAT, DIVIDE) occurs in the tree."""
    return any(n.kind in (MYFLOAT, DIVIDE) for n in node.walk())


CasLike = Union[str, CasNode]
