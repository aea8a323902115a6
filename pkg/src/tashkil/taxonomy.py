"""Classification of Arabic combining marks into stacking layers.

Layers follow the order in which a calligrapher adds marks to a bare word:
dots, then Shadda, then short vowels, then case endings and small letters,
then explanatory signs, and finally decorative signs.  A lower layer sits
nearer the base letter.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .errors import InconsistentEntry, ParseError, UnknownMark

ARABIC_RANGES = ((0x0600, 0x06FF), (0x08A0, 0x08FF), (0xFB50, 0xFDFF))

FATHATAN = 0x064B
DAMMATAN = 0x064C
KASRATAN = 0x064D
FATHA = 0x064E
DAMMA = 0x064F
KASRA = 0x0650
SHADDA = 0x0651
SUKUN = 0x0652
MADDA = 0x0653
HAMZA_ABOVE = 0x0654
HAMZA_BELOW = 0x0655
SUPERSCRIPT_ALEF = 0x0670
SMALL_HIGH_SEEN = 0x06DC
SMALL_LOW_SEEN = 0x06E3


def in_arabic_blocks(scalar: int) -> bool:
    return any(lo <= scalar <= hi for lo, hi in ARABIC_RANGES)


class Kind(str, enum.Enum):
    POINT = "Point"
    SHADDA = "Shadda"
    VOWEL_ABOVE = "VowelAbove"
    VOWEL_BELOW = "VowelBelow"
    VERBALIZATION = "Verbalization"
    EXPLANATORY = "Explanatory"
    AESTHETIC = "Aesthetic"
    THROUGH = "Through"


class Side(str, enum.Enum):
    ABOVE = "Above"
    BELOW = "Below"
    THROUGH = "Through"


LAYER_OF_KIND: Mapping[Kind, int] = MappingProxyType({
    Kind.POINT: 0,
    Kind.SHADDA: 1,
    Kind.VOWEL_ABOVE: 2,
    Kind.VOWEL_BELOW: 2,
    Kind.VERBALIZATION: 3,
    Kind.EXPLANATORY: 4,
    Kind.AESTHETIC: 5,
    Kind.THROUGH: 0,
})

MAX_LAYER = 6

# Kinds whose side is fixed; the rest may go above or below.
_FIXED_SIDE: Mapping[Kind, Side] = MappingProxyType({
    Kind.SHADDA: Side.ABOVE,
    Kind.VOWEL_ABOVE: Side.ABOVE,
    Kind.VOWEL_BELOW: Side.BELOW,
    Kind.THROUGH: Side.THROUGH,
})


@dataclass(frozen=True)
class MarkClass:
    kind: Kind
    side: Side
    layer: int

    def __post_init__(self) -> None:
        problem = mark_class_problem(self.kind, self.side, self.layer)
        if problem:
            raise ValueError(problem)

    @classmethod
    def of(cls, kind: Kind, side: Side | None = None) -> MarkClass:
        """Build the class for ``kind`` with its fixed layer (and side, if fixed)."""
        if side is None:
            side = _FIXED_SIDE[kind]
        return cls(kind, side, LAYER_OF_KIND[kind])


def mark_class_problem(kind: Kind, side: Side, layer: int) -> str | None:
    """Return a description of why the combination is invalid, or None."""
    if not 0 <= layer <= MAX_LAYER:
        return f"layer {layer} outside 0-{MAX_LAYER}"
    if layer != LAYER_OF_KIND[kind]:
        return f"{kind.value} must have layer {LAYER_OF_KIND[kind]}, not {layer}"
    fixed = _FIXED_SIDE.get(kind)
    if fixed is not None and side is not fixed:
        return f"{kind.value} must be on side {fixed.value}, not {side.value}"
    if fixed is None and side is Side.THROUGH:
        return f"{kind.value} cannot be placed through the letter"
    return None


@dataclass(frozen=True)
class TaxonomyTable:
    entries: Mapping[int, MarkClass]
    version: str = "custom"

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    def __contains__(self, scalar: int) -> bool:
        return scalar in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def classify(self, scalar: int, offset: int | None = None) -> MarkClass:
        if not in_arabic_blocks(scalar):
            raise UnknownMark(scalar, offset)
        try:
            return self.entries[scalar]
        except KeyError:
            raise UnknownMark(scalar, offset) from None


def classify(scalar: int, table: TaxonomyTable | None = None) -> MarkClass:
    return (table or default_table()).classify(scalar)


def parse_scalar(token: str) -> int:
    token = token.strip()
    if not token[:2].upper() == "U+":
        raise ValueError(f"expected U+XXXX, got {token!r}")
    value = int(token[2:], 16)
    if not 0 <= value <= 0x10FFFF or 0xD800 <= value <= 0xDFFF:
        raise ValueError(f"{token} is not a Unicode scalar value")
    return value


def format_scalar(scalar: int) -> str:
    return f"U+{scalar:04X}"


def parse_table(text: str, source: str = "<string>") -> TaxonomyTable:
    entries: dict[int, MarkClass] = {}
    version = "custom"
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            if line.startswith("#version"):
                version = line.split(None, 1)[1].strip() if " " in line else version
            continue
        if not line:
            continue
        fields = [f.strip() for f in raw.split("\t")] if "\t" in raw else line.split()
        if len(fields) != 4:
            raise ParseError(f"expected 4 fields, got {len(fields)}", source, lineno)
        try:
            scalar = parse_scalar(fields[0])
            kind = Kind(fields[1])
            side = Side(fields[2])
            layer = int(fields[3])
        except ValueError as e:
            raise ParseError(str(e), source, lineno) from None
        if not in_arabic_blocks(scalar):
            raise InconsistentEntry(f"{fields[0]} is outside the Arabic blocks", source, lineno)
        problem = mark_class_problem(kind, side, layer)
        if problem:
            raise InconsistentEntry(f"{fields[0]}: {problem}", source, lineno)
        if scalar in entries:
            raise InconsistentEntry(f"{fields[0]} listed twice", source, lineno)
        entries[scalar] = MarkClass(kind, side, layer)
    return TaxonomyTable(entries, version)


def load_table(path: str | Path) -> TaxonomyTable:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"not UTF-8: {e}", str(path)) from None
    return parse_table(text, str(path))


def dump_table(table: TaxonomyTable) -> str:
    lines = [f"#version {table.version}", "# scalar\tkind\tside\tlayer"]
    for scalar in sorted(table.entries):
        mc = table.entries[scalar]
        lines.append(f"{format_scalar(scalar)}\t{mc.kind.value}\t{mc.side.value}\t{mc.layer}")
    return "\n".join(lines) + "\n"


_DEFAULT: TaxonomyTable | None = None


def default_table() -> TaxonomyTable:
    global _DEFAULT
    if _DEFAULT is None:
        text = resources.files("tashkil.data").joinpath("taxonomy.tsv").read_text(encoding="utf-8")
        _DEFAULT = parse_table(text, "taxonomy.tsv")
    return _DEFAULT
