"""Canonical forms of inert trees for structural comparison.

A tree is mapped to a sparse polynomial over exact complex-rational
coefficients. Non-polynomial pieces (function calls, non-integer powers,
and, unless expansion is on, multi-term factors) become opaque atoms keyed
by the canonical form of their arguments. Two trees with the same canonical
form are equal as functions; different forms prove nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cas import (
    COMPLEX, DIVIDE, EXPSEQ, FLOAT, FUNCTION, INTNEG, INTPOS, MYFLOAT, NAME, POWER, PROD,
    RATIONAL, SUM, CasNode, function_args,
)

MAX_EXPAND_POWER = 8


@dataclass(frozen=True, order=True)
class CQ:
    """Exact complex rational."""
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __add__(self, o: "CQ") -> "CQ":
        return CQ(self.re + o.re, self.im + o.im)

    def __mul__(self, o: "CQ") -> "CQ":
        return CQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def inverse(self) -> "CQ":
        d = self.re * self.re + self.im * self.im
        if d == 0:
            raise ZeroDivisionError
        return CQ(self.re / d, -self.im / d)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)


ONE, ZERO, IMAG = CQ(Fraction(1)), CQ(), CQ(Fraction(0), Fraction(1))

# A monomial is (sorted tuple of (atom key, integer power), exponential argument)
# where the exponential argument is a frozen polynomial (or () for none).
Monomial = tuple
Poly = dict  # Monomial -> CQ


def _freeze(p: Poly) -> tuple:
    return tuple(sorted(((m, c) for m, c in p.items() if c), key=repr))


def _const(c: CQ) -> Poly:
    return {((), ()): c} if c else {}


def _atom(key: str, power: int = 1) -> Poly:
    return {(((key, power),), ()): ONE}


def _add(a: Poly, b: Poly, scale: CQ = ONE) -> Poly:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, ZERO) + c * scale
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _mul_mono(m1: Monomial, m2: Monomial) -> Monomial:
    powers: dict = dict(m1[0])
    for k, e in m2[0]:
        powers[k] = powers.get(k, 0) + e
    atoms = tuple(sorted((k, e) for k, e in powers.items() if e))
    if m1[1] and m2[1]:
        arg = _freeze(_add(dict(m1[1]), dict(m2[1])))
    else:
        arg = m1[1] or m2[1]
    return atoms, arg


def _mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = _mul_mono(m1, m2)
            v = out.get(m, ZERO) + c1 * c2
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def _is_monomial(p: Poly) -> bool:
    return len(p) == 1


def _as_const(p: Poly) -> Optional[CQ]:
    if not p:
        return ZERO
    if len(p) == 1 and ((), ()) in p:
        return p[((), ())]
    return None


class Canonicalizer:
    def __init__(self, expand: bool = False, exp_rewrite: bool = False) -> None:
        self.expand = expand or exp_rewrite
        self.exp_rewrite = exp_rewrite

    def key(self, p: Poly) -> str:
        return repr(_freeze(p))

    def opaque(self, p: Poly, power: int = 1) -> Poly:
        return _atom("(" + self.key(p) + ")", power)

    def exp_of(self, arg: Poly) -> Poly:
        if not arg:
            return _const(ONE)
        return {((), _freeze(arg)): ONE}

    def canon(self, n: CasNode) -> Poly:
        k, p = n.kind, n.payload
        if k in (INTPOS, INTNEG):
            return _const(CQ(Fraction(p)))
        if k == RATIONAL:
            return _const(CQ(Fraction(p[0], p[1])))
        if k == FLOAT:
            return _const(CQ(Fraction(p[0]) * Fraction(10) ** p[1]))
        if k == MYFLOAT:
            return _const(CQ(Fraction(p)))
        if k == COMPLEX:
            return _const(CQ(Fraction(p[0]), Fraction(p[1])))
        if k == NAME:
            return _const(IMAG) if p == "I" else _atom(p)
        if k == SUM:
            out: Poly = {}
            for c, f in zip(n.children, p):
                out = _add(out, self.canon(c), CQ(Fraction(f)))
            return out
        if k == PROD:
            out = _const(ONE)
            for c in n.children:
                out = self.times(out, self.canon(c))
            return out
        if k == DIVIDE:
            return self.times(self.canon(n.children[0]), self.power(self.canon(n.children[1]), -1))
        if k == POWER:
            base, exp = n.children
            bp, ep = self.canon(base), self.canon(exp)
            e = _as_const(ep)
            if e is not None and not e.im and e.re.denominator == 1:
                return self.power(bp, int(e.re))
            return _atom(f"pow({self.key(bp)},{self.key(ep)})")
        if k == FUNCTION:
            args = [self.canon(a) for a in function_args(n)]
            if p == "exp" and len(args) == 1 and self.exp_rewrite:
                return self.exp_of(args[0])
            if self.exp_rewrite and len(args) == 1 and p in ("sin", "cos", "sinh", "cosh"):
                return self.rewrite_trig(p, args[0])
            return _atom(f"{p}[{','.join(self.key(a) for a in args)}]")
        if k == EXPSEQ:
            return _atom(f"seq[{','.join(self.key(self.canon(a)) for a in n.children)}]")
        raise ValueError(f"cannot canonicalize node kind {k}")

    def rewrite_trig(self, fname: str, arg: Poly) -> Poly:
        half = CQ(Fraction(1, 2))
        if fname in ("sin", "cos"):
            arg = _mul(arg, _const(IMAG))
        plus = self.exp_of(arg)
        minus = self.exp_of(_mul(arg, _const(CQ(Fraction(-1)))))
        if fname in ("cosh", "cos"):
            return _add(_mul(plus, _const(half)), minus, half)
        out = _add(_mul(plus, _const(half)), minus, CQ(Fraction(-1, 2)))
        if fname == "sin":
            out = _mul(out, _const(IMAG.inverse()))
        return out

    def times(self, a: Poly, b: Poly) -> Poly:
        if self.expand or (len(a) <= 1 and len(b) <= 1):
            return _mul(a, b)
        a2 = a if len(a) <= 1 else self.opaque(a)
        b2 = b if len(b) <= 1 else self.opaque(b)
        return _mul(a2, b2)

    def power(self, base: Poly, k: int) -> Poly:
        if k == 0:
            return _const(ONE)
        if _is_monomial(base):
            (atoms, arg), c = next(iter(base.items()))
            if k < 0:
                try:
                    c = c.inverse()
                except ZeroDivisionError:
                    return _atom(f"pow({self.key(base)},{k})")
            cc = ONE
            for _ in range(abs(k)):
                cc = cc * c
            new_arg = _freeze({m: v * CQ(Fraction(k)) for m, v in dict(arg).items()}) if arg else ()
            return {(tuple((a, e * k) for a, e in atoms), new_arg): cc}
        if not base:
            return {} if k > 0 else _atom("pow(0,-1)")
        if self.expand and 0 < k <= MAX_EXPAND_POWER:
            out = _const(ONE)
            for _ in range(k):
                out = _mul(out, base)
            return out
        return self.opaque(base, k)


def canonical_form(node: CasNode, expand: bool = False, exp_rewrite: bool = False) -> tuple:
    """Hashable canonical form; equal forms imply equal functions."""
    return _freeze(Canonicalizer(expand, exp_rewrite).canon(node))


def structurally_equal(a: CasNode, b: CasNode, expand: bool = False, exp_rewrite: bool = False) -> bool:
    c = Canonicalizer(expand, exp_rewrite)
    return not _freeze(_add(c.canon(a), c.canon(b), CQ(Fraction(-1))))
