"""Translation-pattern library: lexicon entries, placeholder patterns, loading.

A lexicon file is a JSON array. Each object is either a semantic macro entry
(key ``macro``) or a symbol entry (key ``symbol``) used for directly
translatable leaves such as Greek letters and relation commands.

Placeholders in patterns are written ``$i``. Digits are munched maximally, so
a slot followed by a literal digit must be written ``$(i)``. A literal dollar
sign (Maple's sequence operator) is written ``$(...)``: ``$($0)`` produces a
``$`` followed by slot 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import ArityError, LexiconError, PatternError

TARGETS = ("maple", "mathematica")
SYMBOL_ROLES = ("operand", "operator", "relation", "ellipsis", "multiply")


@dataclass(frozen=True)
class Literal:
    text: str


@dataclass(frozen=True)
class Slot:
    index: int


Segment = Union[Literal, Slot]


@dataclass(frozen=True)
class TranslationPattern:
    segments: tuple[Segment, ...]

    @property
    def slots(self) -> tuple[int, ...]:
        return tuple(s.index for s in self.segments if isinstance(s, Slot))

    @property
    def max_slot(self) -> int:
        """Largest slot index used, -1 if the pattern has no slots."""
        return max(self.slots, default=-1)

    def fill(self, args: Sequence[str]) -> str:
        return fill_pattern(self, args)

    def __str__(self) -> str:
        return serialize_pattern(self)


def _merge(segments: Iterable[Segment]) -> tuple[Segment, ...]:
    out: list[Segment] = []
    for seg in segments:
        if isinstance(seg, Literal):
            if not seg.text:
                continue
            if out and isinstance(out[-1], Literal):
                out[-1] = Literal(out[-1].text + seg.text)
                continue
        out.append(seg)
    return tuple(out)


def _parse_segments(text: str, offset: int) -> list[Segment]:
    segments: list[Segment] = []
    buf: list[str] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c != "$":
            buf.append(c)
            i += 1
            continue
        if buf:
            segments.append(Literal("".join(buf)))
            buf = []
        if i + 1 < n and text[i + 1].isdigit():
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            segments.append(Slot(int(text[i + 1 : j])))
            i = j
        elif i + 1 < n and text[i + 1] == "(":
            depth, j = 1, i + 2
            while j < n and depth:
                if text[j] == "(":
                    depth += 1
                elif text[j] == ")":
                    depth -= 1
                j += 1
            if depth:
                raise PatternError(f"unclosed '$(' at offset {offset + i} in pattern {text!r}")
            inner = text[i + 2 : j - 1]
            if inner.isdigit():
                segments.append(Slot(int(inner)))
            else:
                segments.append(Literal("$"))
                segments.extend(_parse_segments(inner, offset + i + 2))
            i = j
        else:
            raise PatternError(
                f"'$' must be followed by a digit or '(' (offset {offset + i} in {text!r})"
            )
    if buf:
        segments.append(Literal("".join(buf)))
    return segments


def parse_pattern(text: str) -> TranslationPattern:
    """Parse a raw pattern string into literal and slot segments."""
    return TranslationPattern(_merge(_parse_segments(text, 0)))


def serialize_pattern(pattern: TranslationPattern) -> str:
    """Inverse of :func:`parse_pattern` (up to literal merging)."""
    segs = list(pattern.segments)
    out: list[str] = []
    i = 0
    while i < len(segs):
        seg = segs[i]
        if isinstance(seg, Slot):
            nxt = segs[i + 1] if i + 1 < len(segs) else None
            if isinstance(nxt, Literal) and nxt.text[:1].isdigit():
                out.append(f"$({seg.index})")
            else:
                out.append(f"${seg.index}")
            i += 1
            continue
        pieces = seg.text.split("$")
        for k, piece in enumerate(pieces):
            out.append(piece)
            if k == len(pieces) - 1:
                break
            last_dollar = k == len(pieces) - 2 and pieces[-1] == ""
            nxt = segs[i + 1] if i + 1 < len(segs) else None
            if last_dollar and isinstance(nxt, Slot):
                out.append(f"$(${nxt.index})")
                i += 1
            else:
                out.append("$()")
        i += 1
    return "".join(out)


def fill_pattern(pattern: TranslationPattern, args: Sequence[str]) -> str:
    """Replace every slot ``i`` by ``args[i]``; literals are copied verbatim."""
    out = []
    for seg in pattern.segments:
        if isinstance(seg, Literal):
            out.append(seg.text)
        elif seg.index < len(args):
            out.append(args[seg.index])
        else:
            raise ArityError(f"no argument for slot ${seg.index} ({len(args)} given)")
    return "".join(out)


@dataclass(frozen=True)
class Alternative:
    pattern: TranslationPattern
    note: str = ""


@dataclass(frozen=True)
class MacroEntry:
    """One row of the lexicon: arity metadata plus per-target patterns.

    Slots number optional arguments first, then parameters, then variables.
    """

    macro_name: str
    num_optional: int = 0
    num_params: int = 0
    num_vars: int = 0
    num_ats: int = 0
    dlmf_snippet: str = ""
    dlmf_link: str = ""
    meaning: str = ""
    forward_patterns: Mapping[str, TranslationPattern] = field(default_factory=dict)
    backward_pattern: Optional[TranslationPattern] = None
    target_links: Mapping[str, str] = field(default_factory=dict)
    target_notes: Mapping[str, str] = field(default_factory=dict)
    branch_cut_note: Optional[str] = None
    alternatives: Mapping[str, tuple[Alternative, ...]] = field(default_factory=dict)

    @property
    def arity(self) -> int:
        return self.num_optional + self.num_params + self.num_vars

    @property
    def key(self) -> tuple[str, int]:
        return (self.macro_name, self.num_optional)

    def pattern(self, target: str) -> Optional[TranslationPattern]:
        return self.forward_patterns.get(target)


@dataclass(frozen=True)
class SymbolEntry:
    """A directly translatable leaf such as ``\\alpha`` or ``\\leq``."""

    latex: str
    role: str
    targets: Mapping[str, str]
    meaning: str = ""


class Lexicon:
    """Immutable index ``(macro name, optional-argument count) -> MacroEntry``."""

    def __init__(
        self,
        entries: Iterable[MacroEntry] = (),
        symbols: Iterable[SymbolEntry] = (),
    ) -> None:
        index: dict[tuple[str, int], MacroEntry] = {}
        for entry in entries:
            if entry.key in index:
                raise LexiconError(
                    f"duplicate entry for macro '{entry.macro_name}' "
                    f"with {entry.num_optional} optional argument(s)"
                )
            _validate_entry(entry)
            index[entry.key] = entry
        sym_index: dict[str, SymbolEntry] = {}
        for sym in symbols:
            if sym.latex in sym_index:
                raise LexiconError(f"duplicate symbol entry '{sym.latex}'")
            sym_index[sym.latex] = sym
        self._entries = MappingProxyType(index)
        self._symbols = MappingProxyType(sym_index)
        variants: dict[str, list[int]] = {}
        for name, opt in index:
            variants.setdefault(name, []).append(opt)
        self._variants = MappingProxyType({k: tuple(sorted(v)) for k, v in variants.items()})

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries.values())

    def __contains__(self, name: str) -> bool:
        return _bare(name) in self._variants

    @property
    def symbols(self) -> Mapping[str, SymbolEntry]:
        return self._symbols

    def lookup(self, name: str, optional_count: int = 0) -> Optional[MacroEntry]:
        """Exact lookup; a missing variant never falls back to the base entry."""
        return self._entries.get((_bare(name), optional_count))

    def variants(self, name: str) -> tuple[int, ...]:
        return self._variants.get(_bare(name), ())

    def symbol(self, latex: str) -> Optional[SymbolEntry]:
        return self._symbols.get(latex)

    def merged(self, other: "Lexicon") -> "Lexicon":
        return Lexicon(list(self) + list(other), list(self.symbols.values()) + list(other.symbols.values()))

    def with_patterns_swapped(self, name_a: str, name_b: str, target: str = "maple") -> "Lexicon":
        """Copy of the lexicon with the base patterns of two macros exchanged.

        Used to build deliberately inappropriate lexicons for mutation tests.
        """
        a, b = self.lookup(name_a), self.lookup(name_b)
        if a is None or b is None:
            raise LexiconError(f"cannot swap unknown macros {name_a!r}, {name_b!r}")
        new_a = replace(a, forward_patterns={**a.forward_patterns, target: b.forward_patterns[target]})
        new_b = replace(b, forward_patterns={**b.forward_patterns, target: a.forward_patterns[target]})
        entries = [new_a if e.key == a.key else new_b if e.key == b.key else e for e in self]
        return Lexicon(entries, self.symbols.values())


def _bare(name: str) -> str:
    return name[1:] if name.startswith("\\") else name


def _validate_entry(entry: MacroEntry) -> None:
    label = f"'{entry.macro_name}'" + (f" (X{entry.num_optional} variant)" if entry.num_optional else "")
    for n, v in (("optional", entry.num_optional), ("params", entry.num_params),
                 ("vars", entry.num_vars), ("ats", entry.num_ats)):
        if not isinstance(v, int) or v < 0:
            raise LexiconError(f"entry {label}: '{n}' must be a nonnegative integer")
    if entry.num_ats >= 1 and entry.num_vars < 1:
        raise LexiconError(f"entry {label}: declares @ signs but no variables")
    patterns = [(t, p) for t, p in entry.forward_patterns.items()]
    patterns += [(t, alt.pattern) for t, alts in entry.alternatives.items() for alt in alts]
    for target, pat in patterns:
        if pat.max_slot >= entry.arity:
            raise LexiconError(
                f"entry {label}: {target} pattern {str(pat)!r} uses slot ${pat.max_slot} "
                f"but the macro has only {entry.arity} argument(s)"
            )
    if entry.backward_pattern is not None:
        maple = entry.forward_patterns.get("maple")
        head = cas_call_shape(str(maple)) if maple is not None else None
        bound = head[1] if head else entry.arity
        if entry.backward_pattern.max_slot >= bound:
            raise LexiconError(
                f"entry {label}: backward pattern uses slot ${entry.backward_pattern.max_slot} "
                f"but the CAS function takes {bound} argument(s)"
            )


def cas_call_shape(text: str) -> Optional[tuple[str, int, list[str]]]:
    """Split ``Name(a, b, ...)`` into (name, argument count, argument texts).

    Returns None unless the whole string is one call with balanced brackets.
    """
    i = 0
    while i < len(text) and (text[i].isalnum() or text[i] == "_"):
        i += 1
    name = text[:i]
    if not name or not name[0].isalpha() or i >= len(text) or text[i] != "(" or not text.endswith(")"):
        return None
    depth, args, start = 0, [], i + 1
    for j in range(i, len(text)):
        c = text[j]
        if c in "([":
            depth += 1
        elif c in ")]":
            depth -= 1
            if depth == 0 and j != len(text) - 1:
                return None
        elif c == "," and depth == 1:
            args.append(text[start:j].strip())
            start = j + 1
    args.append(text[start:-1].strip())
    if args == [""]:
        args = []
    return name, len(args), args


# ---------------------------------------------------------------- loading


def _entry_from_json(obj: dict, where: str) -> MacroEntry:
    name = obj.get("macro")
    if not isinstance(name, str) or not name:
        raise LexiconError(f"{where}: entry without a 'macro' name")
    name = _bare(name)
    label = f"{where}: entry '{name}'"
    try:
        targets = obj.get("targets", {})
        forward = {t: parse_pattern(spec["pattern"]) for t, spec in targets.items()}
        links = {t: spec.get("link", "") for t, spec in targets.items()}
        notes = {t: spec["note"] for t, spec in targets.items() if spec.get("note")}
        alternatives = {
            t: tuple(Alternative(parse_pattern(a["pattern"]), a.get("note", ""))
                     for a in spec.get("alternatives", []))
            for t, spec in targets.items()
        }
        backward = obj.get("backward")
        entry = MacroEntry(
            macro_name=name,
            num_optional=obj.get("optional", 0),
            num_params=obj.get("params", 0),
            num_vars=obj.get("vars", 0),
            num_ats=obj.get("ats", 0),
            dlmf_snippet=obj.get("dlmf", ""),
            dlmf_link=obj.get("dlmf_link", ""),
            meaning=obj.get("meaning", ""),
            forward_patterns=MappingProxyType(forward),
            backward_pattern=parse_pattern(backward["pattern"]) if backward else None,
            target_links=MappingProxyType(links),
            target_notes=MappingProxyType(notes),
            branch_cut_note=obj.get("note"),
            alternatives=MappingProxyType({t: a for t, a in alternatives.items() if a}),
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise LexiconError(f"{label}: malformed field ({exc})") from exc
    except LexiconError as exc:
        raise LexiconError(f"{label}: {exc}") from exc
    try:
        _validate_entry(entry)
    except LexiconError as exc:
        raise LexiconError(f"{where}: {exc}") from exc
    return entry


def _symbol_from_json(obj: dict, where: str) -> SymbolEntry:
    role = obj.get("role", "operand")
    if role not in SYMBOL_ROLES:
        raise LexiconError(f"{where}: symbol {obj.get('symbol')!r} has unknown role {role!r}")
    targets = obj.get("targets")
    if not isinstance(targets, dict):
        raise LexiconError(f"{where}: symbol {obj.get('symbol')!r} lacks 'targets'")
    return SymbolEntry(obj["symbol"], role, MappingProxyType(dict(targets)), obj.get("meaning", ""))


def _read(path: Path) -> list:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise LexiconError(f"{path}: cannot read lexicon file ({exc.strerror})") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LexiconError(f"{path}:{exc.lineno}: malformed JSON ({exc.msg})") from exc
    if not isinstance(data, list):
        raise LexiconError(f"{path}:1: top level must be an array of entries")
    return data


def load_lexicon(paths: Iterable[Union[str, Path]]) -> Lexicon:
    """Load and validate lexicon files into one immutable :class:`Lexicon`."""
    entries: list[MacroEntry] = []
    symbols: list[SymbolEntry] = []
    seen: dict[tuple[str, int], str] = {}
    for p in paths:
        path = Path(p)
        for k, obj in enumerate(_read(path)):
            where = f"{path}[{k}]"
            if not isinstance(obj, dict):
                raise LexiconError(f"{where}: entry must be an object")
            if "symbol" in obj:
                symbols.append(_symbol_from_json(obj, where))
                continue
            entry = _entry_from_json(obj, where)
            if entry.key in seen:
                raise LexiconError(
                    f"{where}: duplicate entry '{entry.macro_name}' with "
                    f"{entry.num_optional} optional argument(s) (first in {seen[entry.key]})"
                )
            seen[entry.key] = where
            entries.append(entry)
    return Lexicon(entries, symbols)


def default_lexicon_paths() -> list[Path]:
    data = resources.files("semlatex") / "data"
    return [Path(str(data / "dlmf_macros.json")), Path(str(data / "symbols.json"))]


@lru_cache(maxsize=1)
def default_lexicon() -> Lexicon:
    """The bundled lexicon (cached; lexicons are immutable)."""
    return load_lexicon(default_lexicon_paths())
