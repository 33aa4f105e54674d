import pytest

from semlatex.canonical import canonical_form, structurally_equal
from semlatex.cas import parse_cas


def eq(a, b, **kw):
    return structurally_equal(parse_cas(a), parse_cas(b), **kw)


class TestCanonical:
    @pytest.mark.parametrize("a, b", [
        ("x+y", "y+x"),
        ("x*y", "y*x"),
        ("x-x", "0"),
        ("2*x+3*x", "5*x"),
        ("x/y*y", "x"),
        ("(1)/(2)*cos(a*Theta)", "cos(Theta*a)/2"),
        ("sin(x)^2*sin(x)", "sin(x)^3"),
        ("I*I", "-1"),
        ("f(x+y)", "f(y+x)"),
    ])
    def test_equal(self, a, b):
        assert eq(a, b)

    @pytest.mark.parametrize("a, b", [("x+1", "x"), ("sin(x)", "cos(x)"), ("x^(1/2)", "x")])
    def test_not_equal(self, a, b):
        assert not eq(a, b)

    def test_expansion_off_by_default(self):
        assert not eq("(x+1)^2", "x^2+2*x+1")
        assert eq("(x+1)^2", "x^2+2*x+1", expand=True)

    def test_exp_rewrite(self):
        assert not eq("sinh(x+y)", "sinh(x)*cosh(y)+cosh(x)*sinh(y)")
        assert eq("sinh(x+y)", "sinh(x)*cosh(y)+cosh(x)*sinh(y)", exp_rewrite=True)
        assert eq("sin(u+v)", "sin(u)*cos(v)+cos(u)*sin(v)", exp_rewrite=True)
        assert eq("exp(I*x)", "cos(x)+I*sin(x)", exp_rewrite=True)

    def test_form_is_hashable_and_deterministic(self):
        f = canonical_form(parse_cas("x*y+sin(z)"))
        assert hash(f) == hash(canonical_form(parse_cas("sin(z)+y*x")))
