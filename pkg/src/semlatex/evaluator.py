"""Complex double-precision evaluation of inert CAS trees.

Branch cuts follow the principal values of :mod:`cmath` except where a
convention is selected explicitly (``arccot``). Every registered function
documents its cut and closure choice in ``domain_note``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .cas import (
    COMPLEX, DIVIDE, EXPSEQ, FLOAT, FUNCTION, INTNEG, INTPOS, MYFLOAT, NAME, POWER, PROD,
    RATIONAL, SUM, CasNode, function_args, parse_cas,
)
from .errors import DomainError, EvalError, PoleError, SamplingError

INF = math.inf


class Convention(enum.Enum):
    DLMF = "dlmf"
    MAPLE = "maple"


CONSTANTS = {"Pi": complex(math.pi), "I": 1j, "infinity": complex(INF)}


@dataclass
class Env:
    bindings: dict = field(default_factory=dict)
    convention: Convention = Convention.DLMF
    precision_digits: int = 10

    def with_bindings(self, bindings: dict) -> "Env":
        return Env(dict(bindings), self.convention, self.precision_digits)


# ---------------------------------------------------------------- cut geometry


def _dist_real_ray(z: complex, lo: float, hi: float) -> float:
    """Distance from z to the real segment [lo, hi] (ends may be infinite)."""
    x = min(max(z.real, lo), hi)
    return abs(z - x)


def _dist_imag_ray(z: complex, lo: float, hi: float) -> float:
    y = min(max(z.imag, lo), hi)
    return abs(z - 1j * y)


def _cut_log(z: complex, conv: Convention) -> float:
    return _dist_real_ray(z, -INF, 0.0)


def _cut_real_outer(z: complex, conv: Convention) -> float:
    return min(_dist_real_ray(z, -INF, -1.0), _dist_real_ray(z, 1.0, INF))


def _cut_imag_outer(z: complex, conv: Convention) -> float:
    return min(_dist_imag_ray(z, -INF, -1.0), _dist_imag_ray(z, 1.0, INF))


def _cut_acosh(z: complex, conv: Convention) -> float:
    return _dist_real_ray(z, -INF, 1.0)


def _cut_arccot(z: complex, conv: Convention) -> float:
    if conv is Convention.MAPLE:
        return _cut_imag_outer(z, conv)
    return _dist_imag_ray(z, -1.0, 1.0)


def _no_cut(z: complex, conv: Convention) -> float:
    return INF


# ---------------------------------------------------------------- registry


@dataclass(frozen=True)
class FnImpl:
    name: str
    arity: tuple[int, ...]
    domain_note: str
    impl: Callable[[Sequence[complex], Env], complex]
    cut_distance: Callable[[complex, Convention], float] = _no_cut


REGISTRY: dict[str, FnImpl] = {}


def register(fn: FnImpl) -> FnImpl:
    """Add or replace a function implementation (plugin point)."""
    REGISTRY[fn.name] = fn
    return fn


def _safe(f: Callable[[complex], complex], name: str) -> Callable[[Sequence[complex], Env], complex]:
    def call(args: Sequence[complex], env: Env) -> complex:
        try:
            return complex(f(args[0]))
        except ZeroDivisionError as exc:
            raise PoleError(f"{name}({args[0]}) is a pole") from exc
        except ValueError as exc:
            raise PoleError(f"{name}({args[0]}) is singular") from exc
        except OverflowError as exc:
            raise EvalError(f"{name}({args[0]}) overflows") from exc
    return call


def _as_nonneg_int(v: complex, what: str) -> int:
    if abs(v.imag) > 1e-12 or abs(v.real - round(v.real)) > 1e-9 or round(v.real) < 0:
        raise DomainError(f"{what} requires a nonnegative integer, got {v}")
    return int(round(v.real))


def _as_int(v: complex, what: str) -> int:
    if abs(v.imag) > 1e-12 or abs(v.real - round(v.real)) > 1e-9:
        raise DomainError(f"{what} requires an integer, got {v}")
    return int(round(v.real))


def _tan(z: complex) -> complex:
    c = cmath.cos(z)
    if c == 0:
        raise ZeroDivisionError
    return cmath.sin(z) / c


def _recip(f: Callable[[complex], complex]) -> Callable[[complex], complex]:
    def g(z: complex) -> complex:
        v = f(z)
        if v == 0:
            raise ZeroDivisionError
        return 1 / v
    return g


def arccot(z: complex, convention: Convention) -> complex:
    """Inverse cotangent under the selected branch-cut convention.

    MAPLE: Pi/2 - arctan(z), cuts on (-I*inf, -I] and [I, I*inf).
    DLMF:  arctan(1/z), cut on the segment [-I, I]; z = 0 is a pole.
    """
    if convention is Convention.MAPLE:
        return math.pi / 2 - cmath.atan(z)
    if z == 0:
        raise ZeroDivisionError
    return cmath.atan(1 / z)


def _arccot_impl(args: Sequence[complex], env: Env) -> complex:
    return _safe(lambda z: arccot(z, env.convention), "arccot")(args, env)


def factorial(args: Sequence[complex], env: Env) -> complex:
    return complex(math.factorial(_as_nonneg_int(args[0], "factorial")))


def doublefactorial(args: Sequence[complex], env: Env) -> complex:
    n = _as_nonneg_int(args[0], "doublefactorial")
    return complex(math.prod(range(n, 0, -2)))


def jacobi_p(n: int, a: complex, b: complex, x: complex) -> complex:
    """Jacobi polynomial by the three-term recurrence in the degree."""
    if n == 0:
        return 1 + 0j
    p0, p1 = 1 + 0j, (a + 1) + (a + b + 2) * (x - 1) / 2
    for k in range(2, n + 1):
        s = 2 * k + a + b
        d = 2 * k * (k + a + b) * (s - 2)
        if d == 0:
            return _jacobi_series(n, a, b, x)
        p0, p1 = p1, ((s - 1) * (s * (s - 2) * x + a * a - b * b) * p1
                      - 2 * (k + a - 1) * (k + b - 1) * s * p0) / d
    return p1


def _jacobi_series(n: int, a: complex, b: complex, x: complex) -> complex:
    # (a+1)_n / n! * 2F1(-n, n+a+b+1; a+1; (1-x)/2), terminating
    total, term = 0j, 1 + 0j
    for k in range(n + 1):
        total += term
        if k < n:
            term *= (-n + k) * (n + a + b + 1 + k) / ((a + 1 + k) * (k + 1)) * (1 - x) / 2
    poch = 1 + 0j
    for k in range(n):
        poch *= (a + 1 + k) / (k + 1)
    return poch * total


def _jacobi_impl(args: Sequence[complex], env: Env) -> complex:
    n = _as_nonneg_int(args[0], "JacobiP degree")
    return jacobi_p(n, args[1], args[2], args[3])


def legendre_p(n: int, x: complex) -> complex:
    """Legendre polynomial by Bonnet's recurrence; P_{-n-1} = P_n."""
    if n < 0:
        n = -n - 1
    p0, p1 = 1 + 0j, x
    if n == 0:
        return p0
    for k in range(1, n):
        p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
    return p1


def legendre_p_assoc(n: int, m: int, z: complex) -> complex:
    """Associated Legendre function of integer order m >= 0 (complex-argument form)."""
    if m < 0:
        raise DomainError("LegendreP order must be a nonnegative integer")
    if n < 0:
        n = -n - 1
    if m > n:
        return 0j
    pmm = math.prod(range(2 * m - 1, 0, -2)) * ((z + 1) ** (m / 2)) * ((z - 1) ** (m / 2)) if m else 1 + 0j
    if n == m:
        return complex(pmm)
    prev, cur = pmm, (2 * m + 1) * z * pmm
    for k in range(m + 1, n):
        prev, cur = cur, ((2 * k + 1) * z * cur - (k + m) * prev) / (k - m + 1)
    return complex(cur)


def _legendre_impl(args: Sequence[complex], env: Env) -> complex:
    if len(args) == 2:
        return legendre_p(_as_int(args[0], "LegendreP degree"), args[1])
    n = _as_int(args[0], "LegendreP degree")
    m = _as_nonneg_int(args[1], "LegendreP order")
    return legendre_p_assoc(n, m, args[2])


_PRINCIPAL = "principal branch of the complex function (IEEE double)"
for _name, _f, _cut, _note in [
    ("exp", cmath.exp, _no_cut, "entire"),
    ("ln", cmath.log, _cut_log, "cut (-inf, 0], continuous from above; ln(0) is a pole"),
    ("sqrt", cmath.sqrt, _cut_log, "cut (-inf, 0), continuous from above"),
    ("sin", cmath.sin, _no_cut, "entire"),
    ("cos", cmath.cos, _no_cut, "entire"),
    ("tan", _tan, _no_cut, "poles at odd multiples of Pi/2"),
    ("cot", _recip(_tan), _no_cut, "poles at multiples of Pi"),
    ("sec", _recip(cmath.cos), _no_cut, "poles at odd multiples of Pi/2"),
    ("csc", _recip(cmath.sin), _no_cut, "poles at multiples of Pi"),
    ("sinh", cmath.sinh, _no_cut, "entire"),
    ("cosh", cmath.cosh, _no_cut, "entire"),
    ("tanh", cmath.tanh, _no_cut, "poles at odd multiples of I*Pi/2"),
    ("coth", _recip(cmath.tanh), _no_cut, "poles at multiples of I*Pi"),
    ("arcsin", cmath.asin, _cut_real_outer, "cuts (-inf, -1] and [1, inf); " + _PRINCIPAL),
    ("arccos", cmath.acos, _cut_real_outer, "cuts (-inf, -1] and [1, inf); " + _PRINCIPAL),
    ("arctan", cmath.atan, _cut_imag_outer, "cuts (-I*inf, -I] and [I, I*inf); +-I are poles"),
    ("arcsinh", cmath.asinh, _cut_imag_outer, "cuts (-I*inf, -I] and [I, I*inf)"),
    ("arccosh", cmath.acosh, _cut_acosh, "cut (-inf, 1]"),
    ("arctanh", cmath.atanh, _cut_real_outer, "cuts (-inf, -1] and [1, inf); +-1 are poles"),
    ("abs", abs, _no_cut, "modulus"),
    ("Re", lambda z: z.real, _no_cut, "real part"),
    ("Im", lambda z: z.imag, _no_cut, "imaginary part"),
]:
    register(FnImpl(_name, (1,), _note, _safe(_f, _name), _cut))

register(FnImpl(
    "arccot", (1,),
    "MAPLE convention: Pi/2 - arctan(z), cuts on the imaginary axis beyond +-I; "
    "DLMF convention: arctan(1/z), cut on the segment [-I, I], pole at 0. "
    "The two agree for Re(z) > 0 and differ by Pi for Re(z) < 0.",
    _arccot_impl, _cut_arccot,
))
register(FnImpl("factorial", (1,), "nonnegative integers only", factorial))
register(FnImpl("doublefactorial", (1,), "nonnegative integers only", doublefactorial))
register(FnImpl("JacobiP", (4,), "polynomial in x; degree must be a nonnegative integer", _jacobi_impl))
register(FnImpl(
    "LegendreP", (2, 3),
    "integer degree only; the associated form uses (z+1)^(m/2)*(z-1)^(m/2), cut (-inf, 1]",
    _legendre_impl, _cut_acosh,
))


# ---------------------------------------------------------------- evaluation


def _int_power(a: complex, k: int) -> complex:
    if k < 0:
        if a == 0:
            raise PoleError("zero raised to a negative power")
        return 1 / _int_power(a, -k)
    result, base = 1 + 0j, a
    while k:
        if k & 1:
            result *= base
        base *= base
        k >>= 1
    return result


def evaluate(node: CasNode, env: Env) -> complex:
    """Numerically evaluate an inert (or display-form) tree."""
    k, p = node.kind, node.payload
    if k in (INTPOS, INTNEG):
        return complex(p)
    if k == FLOAT:
        return complex(p[0] * 10.0 ** p[1])
    if k == MYFLOAT:
        return complex(float(p))
    if k == RATIONAL:
        return complex(p[0] / p[1])
    if k == COMPLEX:
        return complex(p[0], p[1])
    if k == NAME:
        if p in env.bindings:
            return complex(env.bindings[p])
        if p in CONSTANTS:
            return CONSTANTS[p]
        raise EvalError(f"unbound variable {p!r}")
    if k == SUM:
        return sum((f * evaluate(c, env) for c, f in zip(node.children, p)), 0j)
    if k == PROD:
        out = 1 + 0j
        for c in node.children:
            out *= evaluate(c, env)
        return out
    if k == POWER:
        base, exp = node.children
        a = evaluate(base, env)
        if exp.kind in (INTPOS, INTNEG):
            return _int_power(a, exp.payload)
        b = evaluate(exp, env)
        if b.imag == 0 and b.real.is_integer() and abs(b.real) <= 64:
            return _int_power(a, int(b.real))
        if a == 0:
            if b.real > 0:
                return 0j
            raise PoleError("zero raised to a power with nonpositive real part")
        return cmath.exp(b * cmath.log(a))
    if k == DIVIDE:
        den = evaluate(node.children[1], env)
        if den == 0:
            raise PoleError("division by zero")
        return evaluate(node.children[0], env) / den
    if k == FUNCTION:
        fn = REGISTRY.get(p)
        if fn is None:
            raise EvalError(f"function {p!r} is not registered with the evaluator")
        args = [evaluate(a, env) for a in function_args(node)]
        if len(args) not in fn.arity:
            raise EvalError(f"{p} expects {' or '.join(map(str, fn.arity))} argument(s), got {len(args)}")
        return fn.impl(args, env)
    if k == EXPSEQ:
        raise EvalError("an expression sequence has no numeric value")
    raise EvalError(f"cannot evaluate node kind {k}")


def unregistered_functions(node: CasNode) -> set[str]:
    return {n.payload for n in node.walk() if n.kind == FUNCTION and n.payload not in REGISTRY}


def free_names(node: CasNode) -> set[str]:
    return {n.payload for n in node.walk() if n.kind == NAME and n.payload not in CONSTANTS}


# ---------------------------------------------------------------- sampling

EXCLUSION_RADIUS = 1e-3


@dataclass(frozen=True)
class VarBox:
    name: str
    re_min: float = -1.0
    re_max: float = 1.0
    im_min: float = -1.0
    im_max: float = 1.0

    @property
    def spans_all_quadrants(self) -> bool:
        return self.re_min < 0 < self.re_max and self.im_min < 0 < self.im_max


@dataclass(frozen=True)
class NotEqual:
    """Reject points where ``expr`` comes within the radius of ``value``."""
    expr: CasNode
    value: complex

    def distance(self, point: dict, convention: Convention) -> float:
        try:
            return abs(evaluate(self.expr, Env(point, convention)) - self.value)
        except EvalError:
            return 0.0


@dataclass(frozen=True)
class OffCut:
    """Reject points where ``var`` lies near a branch cut of ``fn``."""
    fn: str
    var: str

    def distance(self, point: dict, convention: Convention) -> float:
        impl = REGISTRY.get(self.fn)
        if impl is None:
            raise SamplingError(f"off_cut refers to unregistered function {self.fn!r}")
        return impl.cut_distance(complex(point[self.var]), convention)


def parse_exclusion(text: str):
    """Parse ``ne(expr,value)`` or ``off_cut(fn,var)``."""
    from .errors import CasParseError

    try:
        node = parse_cas(text)
    except CasParseError as exc:
        raise SamplingError(f"bad exclusion {text!r}: {exc}") from exc
    if node.kind != FUNCTION or node.payload not in ("ne", "off_cut") or len(function_args(node)) != 2:
        raise SamplingError(f"bad exclusion {text!r}: expected ne(expr,value) or off_cut(fn,var)")
    a, b = function_args(node)
    if node.payload == "ne":
        return NotEqual(a, evaluate(b, Env()))
    if a.kind != NAME or b.kind != NAME:
        raise SamplingError(f"bad exclusion {text!r}: off_cut takes a function name and a variable")
    return OffCut(a.payload, b.payload)


@dataclass(frozen=True)
class DomainSpec:
    variables: tuple = ()
    exclusions: tuple = ()
    convention: Convention = Convention.DLMF


def sample_points(domain: DomainSpec, count: int, seed: int, max_tries: int = 2000) -> list[dict]:
    """Draw ``count`` feasible points, deterministic under ``seed``.

    Variables whose box spans all four quadrants cycle through the quadrants,
    so every quadrant is hit once ``count >= 4``.
    """
    if count < 1:
        raise SamplingError("count must be positive")
    rng = np.random.default_rng(seed)
    points: list[dict] = []
    for i in range(count):
        quadrant = i % 4
        for _ in range(max_tries):
            point = {v.name: _draw(rng, v, quadrant) for v in domain.variables}
            if all(ex.distance(point, domain.convention) >= EXCLUSION_RADIUS for ex in domain.exclusions):
                points.append(point)
                break
        else:
            raise SamplingError(f"no feasible point found after {max_tries} draws (empty region?)")
    return points


def _draw(rng: np.random.Generator, box: VarBox, quadrant: int) -> complex:
    re_lo, re_hi, im_lo, im_hi = box.re_min, box.re_max, box.im_min, box.im_max
    if box.spans_all_quadrants:
        re_lo, re_hi = (0.0, re_hi) if quadrant in (0, 3) else (re_lo, 0.0)
        im_lo, im_hi = (0.0, im_hi) if quadrant in (0, 1) else (im_lo, 0.0)
    return complex(rng.uniform(re_lo, re_hi), rng.uniform(im_lo, im_hi))
