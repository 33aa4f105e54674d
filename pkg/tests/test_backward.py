from pathlib import Path

import pytest

import semlatex
from semlatex.backward import backtranslate, backward_index, translate_back
from semlatex.cas import DIVIDE, POWER, SUM, cosmetic, parse_cas
from semlatex.errors import IndexConflictError, UntranslatableError
from semlatex.forward import translate_latex
from semlatex.lexicon import load_lexicon
from semlatex.verifier import load_corpus, round_trip

CORPUS = Path(semlatex.__file__).parent / "data" / "corpus.jsonl"


def back(s, lexicon=None):
    return backtranslate(s, lexicon).output


class TestExamples:
    def test_jacobi(self):
        assert back("JacobiP(n,alpha,beta,cos(a*Theta))") == r"\JacobiP{\alpha}{\beta}{n}@{\cos@{a\idot\Theta}}"

    def test_half_factor(self):
        assert back("(cos(a*Theta))/(2)") == r"\frac{1}{2}\idot\cos@{a\idot\Theta}"

    def test_elliptic_f(self):
        assert back("EllipticF(phi,k)") == r"\EllIntF@{\asin@{\phi}}{k}"

    def test_gudermannian_not_recovered(self):
        forward = translate_latex(r"\Gudermannian{x}").output
        assert back(forward) == r"\atan@{\sinh@{x}}"

    @pytest.mark.parametrize("src, out", [
        ("-x+1", "-x+1"),
        ("x^(-1)", r"\frac{1}{x}"),
        ("1/2*x", r"\frac{1}{2}\idot x"),
        ("2*I+1", r"2\idot\iunit+1"),
        ("factorial(n+1)", "(n+1)!"),
        ("factorial(n)", "n!"),
        ("sqrt(x)", r"\sqrt{x}"),
        ("Pi*x", r"\cpi\idot x"),
        ("a-b*c", r"a-b\idot c"),
        ("LegendreP(nu,mu,x)", r"\LegendreP[\mu]{\nu}@{x}"),
        ("LegendreP(nu,x)", r"\LegendreP{\nu}@{x}"),
    ])
    def test_rendering(self, src, out):
        assert back(src) == out

    def test_info_log(self):
        res = backtranslate("sin(x)+cos(x)")
        assert sorted(r.macro_name for r in res.info_log) == ["cos", "sin"]


class TestIndex:
    def test_jacobi_permutation(self, lexicon):
        rule = backward_index(lexicon)[("JacobiP", 4)]
        assert rule.permutation == (2, 0, 1, 3)
        assert rule.entry.macro_name == "JacobiP"

    def test_sin_identity(self, lexicon):
        assert backward_index(lexicon)[("sin", 1)].permutation == (0,)

    def test_composite_not_indexed(self, lexicon):
        index = backward_index(lexicon)
        assert all(rule.entry.macro_name != "Gudermannian" for rule in index.values())

    def test_legendre_keyed_by_arity(self, lexicon):
        index = backward_index(lexicon)
        assert index[("LegendreP", 2)].entry.num_optional == 0
        assert index[("LegendreP", 3)].entry.num_optional == 1

    def test_conflict(self, write_json):
        entries = [
            {"macro": m, "params": 0, "vars": 1, "ats": 1, "meaning": m,
             "targets": {"maple": {"pattern": "sin($0)"}}}
            for m in ("sin", "sine")
        ]
        lex = load_lexicon([write_json("lex.json", entries)])
        with pytest.raises(IndexConflictError, match="sin"):
            backward_index(lex)

    def test_backward_slots_within_arity(self, lexicon):
        for (fname, nargs), rule in backward_index(lexicon).items():
            assert rule.pattern.max_slot < nargs, fname


class TestErrors:
    def test_untranslatable_names_function(self):
        with pytest.raises(UntranslatableError, match="foo"):
            back("foo(x)")


class TestProperties:
    @pytest.mark.parametrize("src", ["x-y", "x+y*(-1)", "x*y^(-1)", "(x+y)/z", "a-b/c", "-x^(-2)"])
    def test_no_inert_artifacts(self, src):
        display = cosmetic(parse_cas(src))
        for n in display.walk():
            if n.kind == POWER:
                assert n.children[1].payload != -1
        out = translate_back(display).output
        assert "+ (-1)" not in out and "+(-1)" not in out and "^(-1)" not in out and "^{-1}" not in out

    def test_divide_in_display(self):
        assert cosmetic(parse_cas("(x+y)/z")).kind == DIVIDE

    def test_corpus_fixed_points(self):
        for case in load_corpus(CORPUS):
            for side in (case.lhs, case.rhs):
                report = round_trip(side, max_cycles=4)
                assert report.error is None, (case.id, report.error)
                assert report.fixed_point_found and report.fixed_point_step <= 2, case.id
                step2 = report.steps[2].text
                again = backtranslate(translate_latex(step2).output).output
                assert again == step2

    def test_elliptic_family_has_no_fixed_point(self):
        assert not round_trip(r"\EllIntF@{\phi}{k}", max_cycles=3).fixed_point_found
