"""Verification harness: round trips, structural and numeric relation tests."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import IO, Iterable, Optional, Union

from .backward import backtranslate
from .canonical import structurally_equal
from .cas import CasNode, parse_cas
from .errors import CorpusError, EvalError, SemLatexError
from .evaluator import (
    Convention, DomainSpec, Env, VarBox, evaluate, free_names, parse_exclusion,
    sample_points, unregistered_functions,
)
from .forward import translate_latex
from .lexicon import Lexicon, default_lexicon

LATEX, MAPLE = "latex", "maple"

EQUAL, UNEQUAL, INCONCLUSIVE = "equal", "unequal", "inconclusive"
PASS, FAIL, SKIPPED = "pass", "fail", "skipped"

CAUSE_INVALID_VALUES = "invalid combinations of values"
CAUSE_BAD_TRANSLATION = "translation inappropriately defined"
CAUSE_SOURCE_ERROR = "error in the reference formula"
CAUSE_EVALUATOR_ERROR = "error in the numerical evaluator"
FAILURE_CAUSES = (CAUSE_INVALID_VALUES, CAUSE_BAD_TRANSLATION, CAUSE_SOURCE_ERROR, CAUSE_EVALUATOR_ERROR)

DEFAULT_TOL = 1e-9
DEFAULT_POINTS = 20


# ---------------------------------------------------------------- round trips


@dataclass(frozen=True)
class RoundTripStep:
    index: int
    text: str
    system: str


@dataclass
class RoundTripReport:
    steps: list[RoundTripStep] = field(default_factory=list)
    fixed_point_found: bool = False
    fixed_point_step: Optional[int] = None
    cycles_used: int = 0
    error: Optional[str] = None
    error_step: Optional[int] = None

    def table(self) -> str:
        """Step table: index, system, representation."""
        lines = [f"{s.index}\t{s.system}\t{s.text}" for s in self.steps]
        if self.error is not None:
            lines.append(f"{self.error_step}\terror\t{self.error}")
        if self.fixed_point_found:
            lines.append(f"fixed point at step {self.fixed_point_step}")
        else:
            lines.append(f"no fixed point within {self.cycles_used} cycle(s)")
        return "\n".join(lines)


def round_trip(text: str, start_system: str = LATEX, max_cycles: int = 4,
               lexicon: Optional[Lexicon] = None) -> RoundTripReport:
    """Alternate forward and backward translation until a fixed point.

    A fixed point is declared at step i when step i+2 reproduces it; since
    translation is deterministic, every later step repeats with period 2.
    """
    if start_system not in (LATEX, MAPLE):
        raise ValueError(f"start system must be {LATEX!r} or {MAPLE!r}")
    if max_cycles < 1:
        raise ValueError("max_cycles must be positive")
    lexicon = lexicon if lexicon is not None else default_lexicon()
    report = RoundTripReport([RoundTripStep(0, text, start_system)])
    system, current = start_system, text
    for cycle in range(1, max_cycles + 1):
        report.cycles_used = cycle
        for _ in range(2):
            i = len(report.steps)
            try:
                if system == LATEX:
                    current, system = translate_latex(current, "maple", lexicon).output, MAPLE
                else:
                    current, system = backtranslate(current, lexicon).output, LATEX
            except SemLatexError as exc:
                report.error, report.error_step = f"{type(exc).__name__}: {exc}", i
                return report
            report.steps.append(RoundTripStep(i, current, system))
            if i >= 2 and report.steps[i - 2].text == current:
                report.fixed_point_found, report.fixed_point_step = True, i - 2
                return report
    return report


# ---------------------------------------------------------------- relation cases


@dataclass(frozen=True)
class RelationCase:
    id: str
    lhs: str
    rhs: str
    variables: tuple = ()
    exclusions: tuple = ()
    ref: str = ""
    exp_rewrite: bool = False

    @classmethod
    def from_dict(cls, d: dict) -> "RelationCase":
        try:
            variables = tuple(
                VarBox(v["name"], float(v.get("re_min", -1)), float(v.get("re_max", 1)),
                       float(v.get("im_min", -1)), float(v.get("im_max", 1)))
                for v in d.get("vars", [])
            )
            return cls(str(d["id"]), d["lhs"], d["rhs"], variables, tuple(d.get("exclude", [])),
                       d.get("ref", ""), bool(d.get("exp_rewrite", False)))
        except (KeyError, TypeError, ValueError) as exc:
            raise CorpusError(f"malformed relation case ({exc})") from exc

    def to_dict(self) -> dict:
        return {
            "id": self.id, "lhs": self.lhs, "rhs": self.rhs,
            "vars": [asdict(v) for v in self.variables],
            "exclude": list(self.exclusions), "ref": self.ref, "exp_rewrite": self.exp_rewrite,
        }


@dataclass
class PointResidual:
    point: dict
    residual: float
    ratio: Optional[float]
    passed: bool
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "point": {k: [v.real, v.imag] for k, v in self.point.items()},
            "residual": self.residual if math.isfinite(self.residual) else None,
            "ratio": self.ratio,
            "passed": self.passed,
            "error": self.error,
        }


@dataclass
class VerdictReport:
    case_id: str
    structural_verdict: str = INCONCLUSIVE
    numeric_verdict: str = SKIPPED
    residuals: list[PointResidual] = field(default_factory=list)
    failure_cause_hint: Optional[str] = None
    translated: bool = True
    lhs_cas: str = ""
    rhs_cas: str = ""
    error: Optional[str] = None

    @property
    def max_residual(self) -> float:
        return max((r.residual for r in self.residuals), default=0.0)

    @property
    def passed(self) -> bool:
        return self.translated and (self.structural_verdict == EQUAL or self.numeric_verdict == PASS)

    def to_dict(self) -> dict:
        return {
            "id": self.case_id,
            "translated": self.translated,
            "lhs": self.lhs_cas,
            "rhs": self.rhs_cas,
            "structural_verdict": self.structural_verdict,
            "numeric_verdict": self.numeric_verdict,
            "max_residual": self.max_residual if math.isfinite(self.max_residual) else None,
            "failure_cause_hint": self.failure_cause_hint,
            "error": self.error,
            "residuals": [r.to_dict() for r in self.residuals],
        }


@dataclass
class StructuralResult:
    verdict: str
    lhs: Optional[CasNode] = None
    rhs: Optional[CasNode] = None
    error: Optional[str] = None


def _translate_side(text: str, target: str, lexicon: Lexicon) -> tuple[str, CasNode]:
    if target != MAPLE:
        raise ValueError("relation tests parse the CAS side and support the maple target only")
    out = translate_latex(text, target, lexicon).output
    return out, parse_cas(out)


def relation_test_structural(case: RelationCase, target: str = MAPLE,
                             lexicon: Optional[Lexicon] = None) -> StructuralResult:
    """Compare canonical forms: ``equal`` or ``inconclusive``, never ``unequal``."""
    lexicon = lexicon if lexicon is not None else default_lexicon()
    try:
        _, lhs = _translate_side(case.lhs, target, lexicon)
        _, rhs = _translate_side(case.rhs, target, lexicon)
    except SemLatexError as exc:
        return StructuralResult(INCONCLUSIVE, error=f"{type(exc).__name__}: {exc}")
    same = structurally_equal(lhs, rhs, exp_rewrite=case.exp_rewrite)
    return StructuralResult(EQUAL if same else INCONCLUSIVE, lhs, rhs)


def relation_test_numeric(case: RelationCase, target: str = MAPLE, tol: float = DEFAULT_TOL,
                          n_points: int = DEFAULT_POINTS, seed: int = 0,
                          lexicon: Optional[Lexicon] = None,
                          convention: Convention = Convention.DLMF) -> VerdictReport:
    """Evaluate D = lhs - rhs at seeded points; pass iff |D| < tol*max(1, |lhs|) everywhere."""
    lexicon = lexicon if lexicon is not None else default_lexicon()
    report = VerdictReport(case.id)
    try:
        report.lhs_cas, lhs = _translate_side(case.lhs, target, lexicon)
        report.rhs_cas, rhs = _translate_side(case.rhs, target, lexicon)
    except SemLatexError as exc:
        report.translated, report.error = False, f"{type(exc).__name__}: {exc}"
        return report
    missing = unregistered_functions(lhs) | unregistered_functions(rhs)
    if missing:
        report.error = f"functions not registered with the evaluator: {', '.join(sorted(missing))}"
        return report
    declared = {v.name for v in case.variables}
    undeclared = (free_names(lhs) | free_names(rhs)) - declared
    if undeclared:
        report.error = f"undeclared variables: {', '.join(sorted(undeclared))}"
        return report
    try:
        domain = DomainSpec(case.variables, tuple(parse_exclusion(e) for e in case.exclusions), convention)
        points = sample_points(domain, n_points, seed)
    except SemLatexError as exc:
        report.error = f"{type(exc).__name__}: {exc}"
        return report
    for point in points:
        env = Env(point, convention)
        try:
            lv, rv = evaluate(lhs, env), evaluate(rhs, env)
        except EvalError as exc:
            report.residuals.append(PointResidual(point, math.inf, None, False, f"{type(exc).__name__}: {exc}"))
            continue
        d = abs(lv - rv)
        ratio = abs(rv / lv) if lv != 0 else None
        ok = math.isfinite(d) and d < tol * max(1.0, abs(lv))
        report.residuals.append(PointResidual(point, d, ratio, ok))
    failed = sum(not r.passed for r in report.residuals)
    if failed == 0:
        report.numeric_verdict = PASS
    else:
        report.numeric_verdict = FAIL
        report.failure_cause_hint = (
            CAUSE_BAD_TRANSLATION if failed == len(report.residuals) else CAUSE_INVALID_VALUES
        )
    return report


def verify_case(case: RelationCase, target: str = MAPLE, tol: float = DEFAULT_TOL,
                n_points: int = DEFAULT_POINTS, seed: int = 0, lexicon: Optional[Lexicon] = None,
                convention: Convention = Convention.DLMF) -> VerdictReport:
    """Full pipeline for one case: translate, structural tier, numeric tier."""
    report = relation_test_numeric(case, target, tol, n_points, seed, lexicon, convention)
    if report.translated:
        structural = relation_test_structural(case, target, lexicon)
        report.structural_verdict = structural.verdict
        if structural.verdict == EQUAL and report.numeric_verdict == FAIL:
            # canonical equality is sound, so a numeric failure points at the evaluator
            report.failure_cause_hint = CAUSE_EVALUATOR_ERROR
    return report


# ---------------------------------------------------------------- corpus


@dataclass(frozen=True)
class RunConfig:
    tol: float = DEFAULT_TOL
    n_points: int = DEFAULT_POINTS
    seed: int = 0
    convention: Convention = Convention.DLMF
    lexicon: Optional[Lexicon] = None


@dataclass
class CorpusResult:
    reports: list[VerdictReport]
    summary: dict

    def write_jsonl(self, out: IO[str]) -> None:
        for r in self.reports:
            out.write(json.dumps(r.to_dict()) + "\n")
        out.write(json.dumps({"summary": self.summary}) + "\n")

    def text_summary(self) -> str:
        s = self.summary
        return (
            f"cases: {s['total']}\n"
            f"translated: {s['translated']} ({s['translated_pct']:.1f}%)\n"
            f"structurally equal: {s['structural_equal']} ({s['structural_pct']:.1f}% of translated)\n"
            f"numeric pass: {s['numeric_pass']} ({s['numeric_pct']:.1f}% of the inconclusive remainder)\n"
            f"verified: {s['verified']}"
        )


def load_corpus(path: Union[str, Path]) -> list[RelationCase]:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise CorpusError(f"{path}: cannot read corpus ({exc.strerror})") from exc
    cases = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            cases.append(RelationCase.from_dict(json.loads(line)))
        except (json.JSONDecodeError, CorpusError) as exc:
            raise CorpusError(f"{path}:{lineno}: {exc}") from exc
    return cases


def _pct(num: int, den: int) -> float:
    return 100.0 * num / den if den else 0.0


def summarize(reports: Iterable[VerdictReport]) -> dict:
    reports = list(reports)
    translated = [r for r in reports if r.translated]
    equal = [r for r in translated if r.structural_verdict == EQUAL]
    rest = [r for r in translated if r.structural_verdict != EQUAL]
    numeric = [r for r in rest if r.numeric_verdict == PASS]
    return {
        "total": len(reports),
        "translated": len(translated),
        "translated_pct": _pct(len(translated), len(reports)),
        "structural_equal": len(equal),
        "structural_pct": _pct(len(equal), len(translated)),
        "inconclusive": len(rest),
        "numeric_pass": len(numeric),
        "numeric_pct": _pct(len(numeric), len(rest)),
        "verified": sum(r.passed for r in reports),
    }


def corpus_run(corpus: Union[str, Path, list], target: str = MAPLE,
               config: Optional[RunConfig] = None) -> CorpusResult:
    """Run every case; individual failures are recorded and never abort the run."""
    config = config or RunConfig()
    cases = corpus if isinstance(corpus, list) else load_corpus(corpus)
    reports = []
    for case in cases:
        try:
            report = verify_case(case, target, config.tol, config.n_points, config.seed,
                                 config.lexicon, config.convention)
        except SemLatexError as exc:
            report = VerdictReport(case.id, translated=False, error=f"{type(exc).__name__}: {exc}")
        reports.append(report)
    reports.sort(key=lambda r: r.case_id)
    return CorpusResult(reports, summarize(reports))
