"""Show a converging round trip and a diverging one.

Run: python3 demos/round_trips.py
"""

from semlatex.verifier import round_trip


def main() -> None:
    for text, cycles in ((r"\frac{\cos@{a\Theta}}{2}", 4), (r"\EllIntF@{\phi}{k}", 3),
                         (r"\Gudermannian{x}", 4)):
        print(round_trip(text, max_cycles=cycles).table())
        print()


if __name__ == "__main__":
    main()
