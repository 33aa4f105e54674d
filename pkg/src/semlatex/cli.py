"""Command-line front end.

Exit codes: 0 success, 1 translation or parse error, 2 verification failure,
3 configuration error (bad lexicon, unreadable input files, bad options).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .backward import backtranslate, backward_index
from .cas import dump_cas_json, dump_cas_text, parse_cas
from .errors import CorpusError, LexiconError, SemLatexError
from .evaluator import Convention
from .forward import translate_latex
from .latex_parser import dump_json, dump_text, parse_latex
from .lexicon import Lexicon, default_lexicon, default_lexicon_paths, load_lexicon
from .verifier import (
    EQUAL, PASS, RelationCase, RunConfig, corpus_run, round_trip, verify_case,
)

EXIT_OK, EXIT_TRANSLATION, EXIT_VERIFY, EXIT_CONFIG = 0, 1, 2, 3


class ConfigError(Exception):
    pass


def _read_input(text: Optional[str]) -> str:
    if text is not None:
        return text
    data = sys.stdin.read()
    return data.rstrip("\n")


def _lexicon(args: argparse.Namespace) -> Lexicon:
    if args.lexicon:
        return load_lexicon(args.lexicon)
    return default_lexicon()


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def cmd_translate(args: argparse.Namespace) -> int:
    result = translate_latex(_read_input(args.text), args.to, _lexicon(args))
    sys.stdout.write(result.output + "\n")
    if args.info:
        for rec in result.info_log:
            print(json.dumps(rec.to_dict()), file=sys.stderr)
    return EXIT_OK


def cmd_backtranslate(args: argparse.Namespace) -> int:
    result = backtranslate(_read_input(args.text), _lexicon(args))
    sys.stdout.write(result.output + "\n")
    return EXIT_OK


def cmd_roundtrip(args: argparse.Namespace) -> int:
    start = "latex" if args.start == "latex" else "maple"
    report = round_trip(_read_input(args.text), start, args.max_cycles, _lexicon(args))
    sys.stdout.write(report.table() + "\n")
    if report.error is not None:
        _err(report.error)
        return EXIT_TRANSLATION
    return EXIT_OK if report.fixed_point_found else EXIT_VERIFY


def _load_case(path: str) -> RelationCase:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read case file ({exc.strerror})") from exc
    try:
        return RelationCase.from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: malformed JSON ({exc.msg})") from exc
    except CorpusError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def cmd_verify(args: argparse.Namespace) -> int:
    case = _load_case(args.case)
    report = verify_case(case, "maple", args.tol, args.points, args.seed, _lexicon(args),
                         Convention(args.convention))
    sys.stdout.write(json.dumps(report.to_dict()) + "\n")
    if not report.translated:
        _err(report.error or "translation failed")
        return EXIT_TRANSLATION
    if report.error:
        _err(report.error)
    if report.structural_verdict == EQUAL or report.numeric_verdict == PASS:
        return EXIT_OK
    return EXIT_VERIFY


def cmd_corpus(args: argparse.Namespace) -> int:
    config = RunConfig(args.tol, args.points, args.seed, Convention(args.convention), _lexicon(args))
    try:
        result = corpus_run(args.file, "maple", config)
    except CorpusError as exc:
        raise ConfigError(str(exc)) from exc
    result.write_jsonl(sys.stdout)
    print(result.text_summary(), file=sys.stderr)
    return EXIT_OK if result.summary["verified"] == result.summary["total"] else EXIT_VERIFY


def cmd_lexicon_check(args: argparse.Namespace) -> int:
    paths = args.files or args.lexicon or [str(p) for p in default_lexicon_paths()]
    lex = load_lexicon(paths)
    index = backward_index(lex)
    print(f"ok: {len(lex)} macro entries, {len(lex.symbols)} symbols, "
          f"{len(index)} backward rules from {len(paths)} file(s)")
    return EXIT_OK


def cmd_dump_tree(args: argparse.Namespace) -> int:
    text = _read_input(args.text)
    if args.input == "latex":
        tree = parse_latex(text, _lexicon(args))
        out = dump_json(tree) if args.format == "json" else dump_text(tree)
    else:
        node = parse_cas(text)
        out = dump_cas_json(node) if args.format == "json" else dump_cas_text(node)
    sys.stdout.write(out + "\n")
    return EXIT_OK


def _global_options(suppress: bool) -> argparse.ArgumentParser:
    # accepted before and after the subcommand; SUPPRESS keeps the sub-level
    # defaults from overwriting values given at the top level
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--lexicon", action="append", metavar="PATH",
                   default=argparse.SUPPRESS if suppress else None,
                   help="lexicon JSON file (repeatable; replaces the bundled lexicon)")
    g.add_argument("--convention", choices=["dlmf", "maple"],
                   default=argparse.SUPPRESS if suppress else "dlmf",
                   help="branch-cut convention for numeric evaluation")
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _global_options(suppress=True)
    p = argparse.ArgumentParser(prog="semlatex", parents=[_global_options(suppress=False)],
                                description="Translate and verify semantic LaTeX <-> CAS syntax.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("translate", parents=[common], help="semantic LaTeX -> CAS syntax")
    t.add_argument("--to", choices=["maple", "mathematica"], default="maple")
    t.add_argument("--info", action="store_true", help="write info records as JSON lines to stderr")
    t.add_argument("text", nargs="?")
    t.set_defaults(func=cmd_translate)

    b = sub.add_parser("backtranslate", parents=[common], help="Maple syntax -> semantic LaTeX")
    b.add_argument("text", nargs="?")
    b.set_defaults(func=cmd_backtranslate)

    r = sub.add_parser("roundtrip", parents=[common], help="alternate translations to a fixed point")
    r.add_argument("--start", choices=["latex", "maple"], default="latex")
    r.add_argument("--max-cycles", type=int, default=4)
    r.add_argument("text", nargs="?")
    r.set_defaults(func=cmd_roundtrip)

    for name, helptext in (("verify", "run one relation case"), ("corpus", "run a corpus of relation cases")):
        v = sub.add_parser(name, parents=[common], help=helptext)
        if name == "verify":
            v.add_argument("--case", required=True, metavar="FILE")
            v.set_defaults(func=cmd_verify)
        else:
            v.add_argument("file")
            v.set_defaults(func=cmd_corpus)
        v.add_argument("--tol", type=float, default=1e-9)
        v.add_argument("--points", type=int, default=20)
        v.add_argument("--seed", type=int, default=0)

    lc = sub.add_parser("lexicon-check", parents=[common], help="validate lexicon files")
    lc.add_argument("files", nargs="*")
    lc.set_defaults(func=cmd_lexicon_check)

    d = sub.add_parser("dump-tree", parents=[common], help="print the parse tree")
    d.add_argument("--format", choices=["text", "json"], default="text")
    d.add_argument("--input", choices=["latex", "maple"], default="latex")
    d.add_argument("text", nargs="?")
    d.set_defaults(func=cmd_dump_tree)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    if getattr(args, "tol", 1.0) <= 0 or getattr(args, "points", 1) < 1 or getattr(args, "max_cycles", 1) < 1:
        _err("tolerance, point count and cycle count must be positive")
        return EXIT_CONFIG
    try:
        return args.func(args)
    except (LexiconError, ConfigError) as exc:
        _err(str(exc))
        return EXIT_CONFIG
    except SemLatexError as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_TRANSLATION


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
