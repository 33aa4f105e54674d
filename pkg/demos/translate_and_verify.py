"""Walk one identity through the whole pipeline.

Run: python3 demos/translate_and_verify.py
"""

from semlatex import default_lexicon
from semlatex.evaluator import VarBox
from semlatex.forward import translate_latex
from semlatex.verifier import RelationCase, relation_test_numeric, relation_test_structural, round_trip

LHS = r"\sin@{u+v}"
RHS = r"\sin@{u}\cos@{v}+\cos@{u}\sin@{v}"


def main() -> None:
    lexicon = default_lexicon()
    for side in (LHS, RHS):
        res = translate_latex(side, "maple", lexicon)
        print(f"{side}\n  maple:       {res.output}")
        print(f"  mathematica: {translate_latex(side, 'mathematica', lexicon).output}")

    box = dict(re_min=-2, re_max=2, im_min=-2, im_max=2)
    case = RelationCase("sine-addition", LHS, RHS, (VarBox("u", **box), VarBox("v", **box)))
    print("\nstructural:", relation_test_structural(case, lexicon=lexicon).verdict)
    good = relation_test_numeric(case, lexicon=lexicon)
    print(f"numeric:    {good.numeric_verdict} (max residual {good.max_residual:.2e})")

    # swap the sin and cos patterns: the round trip cannot tell, the numeric test can
    bad_lexicon = lexicon.with_patterns_swapped("sin", "cos")
    rt = round_trip(LHS, lexicon=bad_lexicon)
    print(f"\nswapped lexicon, round trip of {LHS}:")
    print(rt.table())
    bad = relation_test_numeric(case, lexicon=bad_lexicon)
    print(f"swapped lexicon, numeric: {bad.numeric_verdict} "
          f"(max residual {bad.max_residual:.2f}, hint: {bad.failure_cause_hint})")


if __name__ == "__main__":
    main()
