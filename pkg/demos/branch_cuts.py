"""Compare the two arccot branch-cut conventions on a small grid.

Run: python3 demos/branch_cuts.py
"""

import math

from semlatex.evaluator import Convention, arccot
from semlatex.forward import translate_latex


def main() -> None:
    res = translate_latex(r"\acot@{z}")
    rec = res.info_log[0]
    print(f"{rec.macro_name} -> {res.output}")
    for pattern, note in rec.alternatives_not_taken:
        print(f"  alternative {pattern}: {note}")
    print(f"  {rec.branch_cut_note}\n")

    print(f"{'z':>14}  {'dlmf':>22}  {'maple':>22}  difference")
    for z in (2 + 1j, 2 - 1j, -2 + 1j, -2 - 1j, 0.001 + 0.5j, -0.001 + 0.5j):
        d, m = arccot(z, Convention.DLMF), arccot(z, Convention.MAPLE)
        diff = m - d
        tag = "pi" if abs(diff - math.pi) < 1e-9 else f"{abs(diff):.3g}"
        print(f"{z!s:>14}  {d:22.6f}  {m:22.6f}  {tag}")


if __name__ == "__main__":
    main()
