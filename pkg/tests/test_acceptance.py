"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""

import math
import random
import time
from pathlib import Path

import numpy as np
import pytest

import semlatex
from semlatex.cas import has_inert_violations, parse_cas, render_cas
from semlatex.errors import DoubleScriptError, LexiconError, MismatchedParenthesesError
from semlatex.evaluator import Convention, Env, arccot, evaluate
from semlatex.forward import translate_latex
from semlatex.latex_parser import parse_latex
from semlatex.lexicon import load_lexicon
from semlatex.verifier import (
    EQUAL, FAIL, INCONCLUSIVE, PASS, RunConfig, corpus_run, relation_test_numeric,
    relation_test_structural, round_trip,
)

from oracles import random_arith, ref_eval

CORPUS = Path(semlatex.__file__).parent / "data" / "corpus.jsonl"


@pytest.fixture
def report(capsys):
    def emit(label, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {label}" + (f" ({detail})" if detail else ""))
        assert ok, f"{label}: {detail}"
    return emit


def test_c01_golden_translations(report):
    start = time.perf_counter()
    goldens = [
        (r"\JacobiP{\alpha}{\beta}{n}@{\cos@{a\Theta}}", "maple", "JacobiP(n,alpha,beta,cos(a*Theta))"),
        (r"\JacobiP{\alpha}{\beta}{n}@{\cos@{a\Theta}}", "mathematica",
         r"JacobiP[n,\[Alpha],\[Beta],Cos[a \[CapitalTheta]]]"),
        (r"\Gudermannian{x}", "maple", "arctan(sinh(x))"),
        (r"\deriv[2]{x^2}{x}", "maple", "diff(x^2, [x$2])"),
        (r"\cos^n@{x}^m", "maple", "((cos(x))^(n))^m"),
        ("energy", "maple", "e*n*e*r*g*y"),
        ("4b", "maple", "4*b"),
        ("b4", "maple", "b*4"),
        ("n!", "maple", "factorial(n)"),
        ("n!!", "maple", "doublefactorial(n)"),
    ]
    wrong = [(s, t, translate_latex(s, t).output, want) for s, t, want in goldens
             if translate_latex(s, t).output != want]
    elapsed = time.perf_counter() - start
    report("C1 golden translations", not wrong and elapsed < 1.0, f"{len(wrong)} wrong, {elapsed:.3f}s")


def test_c02_half_cosine_round_trip(report):
    expected = [
        r"\frac{\cos@{a\Theta}}{2}",
        "(cos(a*Theta))/(2)",
        r"\frac{1}{2}\idot\cos@{a\idot\Theta}",
        "(1)/(2)*cos(a*Theta)",
        r"\frac{1}{2}\idot\cos@{a\idot\Theta}",
    ]
    start = time.perf_counter()
    rt = round_trip(expected[0], "latex", max_cycles=4)
    elapsed = time.perf_counter() - start
    ok = [s.text for s in rt.steps] == expected and rt.fixed_point_found and rt.fixed_point_step == 2
    report("C2 half-cosine round trip", ok and elapsed < 1.0, f"fixed point at {rt.fixed_point_step}, {elapsed:.3f}s")


def test_c03_non_termination(report):
    rt = round_trip(r"\EllIntF@{\phi}{k}", "latex", max_cycles=3)
    counts = [rt.steps[2 * k].text.count(r"\asin") for k in range((len(rt.steps) + 1) // 2)]
    ok = not rt.fixed_point_found and rt.cycles_used == 3 and counts == list(range(len(counts))) and len(counts) == 4
    report("C3 EllipticF non-termination", ok, f"asin counts {counts}")


def test_c04_parser_rejection(report):
    outcomes = {}
    for src, err, msg in [("x^y^z", DoubleScriptError, "Double superscript"),
                          ("x_y_z", DoubleScriptError, "Double subscript"),
                          ("(a]", MismatchedParenthesesError, "mismatched")]:
        try:
            translate_latex(src)
            outcomes[src] = False
        except err as exc:
            outcomes[src] = msg in str(exc)
    for src in ("n^m!", "a^bc^d"):
        parse_latex(src)
        outcomes[src] = True
    report("C4 parser rejection suite", all(outcomes.values()), str(outcomes))


def test_c05_identity_verification(report, sine_addition, sinh_addition):
    start = time.perf_counter()
    sine = relation_test_numeric(sine_addition, tol=1e-9, n_points=20, seed=0)
    t1 = time.perf_counter() - start
    start = time.perf_counter()
    structural = relation_test_structural(sinh_addition)
    sinh = relation_test_numeric(sinh_addition, tol=1e-9, n_points=20, seed=0)
    t2 = time.perf_counter() - start
    ok = (sine.numeric_verdict == PASS and len(sine.residuals) == 20
          and structural.verdict == INCONCLUSIVE and sinh.numeric_verdict == PASS
          and t1 < 1.0 and t2 < 1.0)
    report("C5 identity verification", ok,
           f"4.21.2 {sine.numeric_verdict} max {sine.max_residual:.1e}; sinh {structural.verdict}/{sinh.numeric_verdict}")


def test_c06_mutation_detection(report, sine_addition, swapped_lexicon):
    fixed = all(round_trip(side, lexicon=swapped_lexicon).fixed_point_found
                for side in (sine_addition.lhs, sine_addition.rhs))
    numeric = relation_test_numeric(sine_addition, tol=1e-9, n_points=20, seed=0, lexicon=swapped_lexicon)
    ok = fixed and numeric.numeric_verdict == FAIL and numeric.max_residual > 1e-3
    report("C6 mutation detection", ok, f"round trip fixed={fixed}, max residual {numeric.max_residual:.3g}")


def test_c07_branch_cut_convention(report):
    rng = np.random.default_rng(0)
    points = []
    while len(points) < 100:
        re_, im_ = rng.uniform(0.1, 3, size=2) * rng.choice([-1, 1], size=2)
        points.append(complex(re_, im_))
    agree = [abs(arccot(z, Convention.DLMF) - arccot(z, Convention.MAPLE)) for z in points]
    adjacent = max(abs(arccot(z, Convention.DLMF) - arccot(z, Convention.MAPLE))
                   for z in (0.5j + 0.001, 0.5j - 0.001))
    eq7 = max(abs(evaluate(parse_cas("arctan(1/z)"), Env({"z": z})) - arccot(z, Convention.DLMF))
              for z in points if abs(z) > 0.1)
    bad = sum(d >= 1e-10 for d in agree)
    ok = bad == 0 and adjacent > 0.1 and eq7 < 1e-10
    report("C7 branch-cut convention", ok,
           f"{bad}/100 off-axis points disagree (max {max(agree):.4f}), adjacent gap {adjacent:.3f}, "
           f"arctan(1/z) max diff {eq7:.1e}")


def test_c08_inert_form_properties(report):
    rng = random.Random(20240101)
    round_trip_bad = inert_bad = eval_bad = 0
    for _ in range(1000):
        text = random_arith(rng)
        tree = parse_cas(text)
        if parse_cas(render_cas(tree)) != tree:
            round_trip_bad += 1
        if has_inert_violations(tree):
            inert_bad += 1
        x = complex(rng.uniform(0.5, 2), rng.uniform(-2, 2))
        try:
            want = ref_eval(text, {"x": x})
        except ZeroDivisionError:
            continue
        got = evaluate(tree, Env({"x": x}))
        if not abs(got - want) <= 1e-12 * max(1.0, abs(want)):
            eval_bad += 1
    ok = round_trip_bad == inert_bad == eval_bad == 0
    report("C8 inert-form properties", ok, f"round trip {round_trip_bad}, inert {inert_bad}, eval {eval_bad} failures")


def test_c09_corpus_run(report, lexicon):
    start = time.perf_counter()
    result = corpus_run(CORPUS, "maple", RunConfig(lexicon=lexicon))
    elapsed = time.perf_counter() - start
    s = result.summary
    every = all(r.translated and (r.structural_verdict == EQUAL or r.numeric_verdict == PASS)
                for r in result.reports)
    shape = {"translated_pct", "structural_pct", "numeric_pct"} <= set(s)
    ok = s["total"] == 50 and s["translated_pct"] == 100.0 and every and shape and elapsed < 30
    report("C9 corpus run", ok,
           f"{s['translated_pct']:.0f}% translated, {s['structural_equal']} structural, "
           f"{s['numeric_pass']} numeric, {elapsed:.2f}s")


def test_c10_lexicon_validation(report, write_json, lexicon):
    bad = {"macro": "badsin", "params": 0, "vars": 1, "ats": 1, "meaning": "broken",
           "targets": {"maple": {"pattern": "sin($1)"}}}
    try:
        load_lexicon([write_json("bad.json", [bad])])
        rejected = False
    except LexiconError as exc:
        rejected = "badsin" in str(exc)
    base = translate_latex(r"\LegendreP{\nu}@{x}", lexicon=lexicon).output
    variant = translate_latex(r"\LegendreP[\mu]{\nu}@{x}", lexicon=lexicon).output
    ok = rejected and base == "LegendreP(nu,x)" and variant == "LegendreP(nu,mu,x)"
    report("C10 lexicon validation", ok, f"rejected={rejected}, {base} / {variant}")
