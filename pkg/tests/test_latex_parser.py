import pytest
from hypothesis import given, strategies as st

from semlatex.errors import DoubleScriptError, LatexSyntaxError
from semlatex.latex_parser import NodeKind, dump_json, dump_text, parse_latex, tokenize

K = NodeKind


def kinds(nodes):
    return [n.kind for n in nodes]


class TestTokenize:
    def test_digit_then_letter(self):
        assert [t.lexeme for t in tokenize("4b")] == ["4", "b"]

    def test_letter_then_digit(self):
        assert [t.lexeme for t in tokenize("b4")] == ["b4"]

    def test_macro(self):
        toks = tokenize(r"\cos@{a\Theta}")
        assert [t.lexeme for t in toks] == ["\\cos", "@", "{", "a", "\\Theta", "}"]
        assert toks[3].cls == "letter-run"

    def test_lone_backslash(self):
        with pytest.raises(LatexSyntaxError):
            tokenize("x\\")

    @given(st.text(alphabet="ab4 \\{}^_@[]()+!xyz\t.1", max_size=30).filter(lambda s: not s.endswith("\\")))
    def test_lexemes_reproduce_input(self, s):
        assert "".join(t.lexeme for t in tokenize(s)) == s


class TestParse:
    def test_jacobi_tree(self, lexicon):
        root = parse_latex(r"\JacobiP{\alpha}{\beta}{n}@{\cos@{a\Theta}}", lexicon)
        top = root.children
        assert kinds(top) == [K.SEMANTIC_MACRO, K.SEQUENCE, K.SEQUENCE, K.SEQUENCE, K.AT, K.SEQUENCE]
        assert top[0].tag.macro_name == "JacobiP" and not top[0].children
        inner = top[5].children
        assert kinds(inner) == [K.SEMANTIC_MACRO, K.AT, K.SEQUENCE]
        assert [n.text for n in inner[2].children] == ["a", "\\Theta"]
        assert inner[2].children[1].kind is K.GENERIC_MACRO

    def test_factorial_after_power(self, lexicon):
        top = parse_latex("n^m!", lexicon).children
        assert kinds(top) == [K.ALPHANUMERIC, K.CARET, K.SYMBOL]
        assert top[1].children[0].text == "m"

    def test_caret_single_binding(self, lexicon):
        top = parse_latex("t^uv", lexicon).children
        assert top[1].children[0].text == "u"
        assert top[2].text == "v"

    @given(st.sampled_from(list("abcxyz123")), st.sampled_from(list("abcxyz123")),
           st.sampled_from(list("abcxyz123")))
    def test_caret_single_binding_property(self, t, u, v):
        top = parse_latex(f"{t}^{u}{v}").children
        caret = next(n for n in top if n.kind is K.CARET)
        assert len(caret.children) == 1 and caret.children[0].text == u

    def test_double_superscript(self):
        with pytest.raises(DoubleScriptError, match="Double superscript"):
            parse_latex("x^y^z")

    def test_double_subscript(self):
        with pytest.raises(DoubleScriptError, match="Double subscript"):
            parse_latex("x_y_z")

    def test_mixed_scripts_allowed(self):
        parse_latex("x^a_b")
        parse_latex("a^bc^d")

    @pytest.mark.parametrize("bad", ["{a", "a}", r"\left( a", r"a \right)"])
    def test_unbalanced(self, bad):
        with pytest.raises(LatexSyntaxError):
            parse_latex(bad)

    def test_structural_kinds(self):
        top = parse_latex(r"\frac{a}{b}\binom{n}{k}\sqrt{x}\sqrt[3]{y}\left(z\right)").children
        assert kinds(top) == [K.FRACTION, K.BINOMIAL, K.SQUARE_ROOT, K.RADICAL, K.BALANCED]
        assert [len(n.children) for n in top[:4]] == [2, 2, 1, 2]

    def test_plain_parens_stay_symbols(self):
        assert kinds(parse_latex("(a)").children) == [K.SYMBOL, K.ALPHANUMERIC, K.SYMBOL]

    def test_fraction_variants(self):
        for cmd in ("frac", "ifrac", "dfrac", "tfrac"):
            assert parse_latex(f"\\{cmd}{{1}}{{2}}").children[0].kind is K.FRACTION

    def test_whitespace_flag(self):
        top = parse_latex("a b").children
        assert [n.space_before for n in top] == [False, True]

    def test_unknown_command_generic(self):
        assert parse_latex(r"\NoSuch").children[0].kind is K.GENERIC_MACRO

    def test_leaves_have_no_children(self, lexicon):
        root = parse_latex(r"\JacobiP{\alpha}{\beta}{n}@{\cos@{a\Theta}} + 2x!", lexicon)
        for node in root.walk():
            if node.is_leaf:
                assert node.children == []

    def test_deterministic(self, lexicon):
        s = r"\frac{\cos@{a\Theta}}{2}+\LegendreP[\mu]{\nu}@{x}^2"
        assert parse_latex(s, lexicon).structure() == parse_latex(s, lexicon).structure()

    def test_dumps(self):
        root = parse_latex(r"\sin@{x}")
        assert "SemanticMacro \\sin" in dump_text(root)
        assert '"kind": "Sequence"' in dump_json(root)
