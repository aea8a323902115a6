"""Splitting a diacritized word into letters and marks, and building layers.

A composed cluster keeps three independent lists: marks stacked upward,
marks stacked downward and marks drawn through the letter.  Which list a
mark lands in depends only on its class, never on where it was typed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .errors import NoSkeletonMapping, ParseError
from .ingest import DiacritizedWord
from .taxonomy import (
    Kind,
    MarkClass,
    Side,
    TaxonomyTable,
    default_table,
    format_scalar,
    parse_scalar,
)

# Synthetic point glyphs, indexed by (side, dot count).
POINT_GLYPHS: Mapping[tuple[Side, int], int] = MappingProxyType({
    (Side.ABOVE, 1): 0xE001,
    (Side.ABOVE, 2): 0xE002,
    (Side.ABOVE, 3): 0xE003,
    (Side.BELOW, 1): 0xE011,
    (Side.BELOW, 2): 0xE012,
    (Side.BELOW, 3): 0xE013,
})


class KasraPlacement(str, enum.Enum):
    BELOW = "below"
    ABOVE = "above"


@dataclass(frozen=True)
class LayeredCluster:
    base: int
    above: tuple[tuple[int, MarkClass], ...] = ()
    below: tuple[tuple[int, MarkClass], ...] = ()
    through: tuple[tuple[int, MarkClass], ...] = ()

    @property
    def sides(self) -> tuple[tuple[tuple[int, MarkClass], ...], ...]:
        return (self.above, self.below, self.through)

    def positions(self) -> list[tuple[int, int]]:
        """(list, index) of every mark, innermost first.

        Ordered by layer, then above before below before through, then stack
        position.
        """
        sides = self.sides
        return sorted(
            ((k, i) for k, lst in enumerate(sides) for i in range(len(lst))),
            key=lambda p: (sides[p[0]][p[1]][1].layer, p[0], p[1]),
        )

    def entries(self) -> list[tuple[int, MarkClass]]:
        return [self.sides[k][i] for k, i in self.positions()]

    def subset(self, keep) -> LayeredCluster:
        """Same cluster with only the marks at positions in ``keep``."""
        return LayeredCluster(self.base, *(
            tuple(e for i, e in enumerate(lst) if (k, i) in keep)
            for k, lst in enumerate(self.sides)
        ))

    @property
    def mark_scalars(self) -> list[int]:
        return [s for s, _ in self.above + self.below + self.through]

    def __len__(self) -> int:
        return len(self.above) + len(self.below) + len(self.through)


@dataclass(frozen=True)
class LayeredWord:
    clusters: tuple[LayeredCluster, ...]
    skeleton_mode: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "clusters", tuple(self.clusters))


@dataclass(frozen=True)
class RasmEntry:
    skeleton: int
    dots_side: Side | None
    dots: int


def split_chains(word: DiacritizedWord) -> tuple[list[int], list[list[int]]]:
    letters = [c.base.scalar for c in word.clusters]
    diacritics = [list(c.mark_scalars) for c in word.clusters]
    return letters, diacritics


def _stable_by_layer(items: list[tuple[int, MarkClass, int]]) -> tuple[tuple[int, MarkClass], ...]:
    # third element is a secondary key ahead of input order
    order = sorted(range(len(items)), key=lambda i: (items[i][1].layer, items[i][2]))
    return tuple((items[i][0], items[i][1]) for i in order)


def compose(
    word: DiacritizedWord,
    table: TaxonomyTable | None = None,
    skeleton_mode: bool = False,
    *,
    rasm: Mapping[int, RasmEntry] | None = None,
    kasra_under_shadda: KasraPlacement | str = KasraPlacement.BELOW,
) -> LayeredWord:
    table = table or default_table()
    kasra_under_shadda = KasraPlacement(kasra_under_shadda)
    if skeleton_mode and rasm is None:
        rasm = default_rasm()
    clusters = []
    for c in word.clusters:
        classes = [(m.scalar, table.classify(m.scalar, m.offset)) for m in c.marks]
        has_shadda = any(mc.kind is Kind.SHADDA for _, mc in classes)
        above: list[tuple[int, MarkClass, int]] = []
        below: list[tuple[int, MarkClass, int]] = []
        through: list[tuple[int, MarkClass, int]] = []
        base = c.base.scalar
        if skeleton_mode:
            entry = rasm.get(base)
            if entry is None:
                raise NoSkeletonMapping(base)
            base = entry.skeleton
            if entry.dots:
                point = (POINT_GLYPHS[entry.dots_side, entry.dots], MarkClass.of(Kind.POINT, entry.dots_side), 0)
                (above if entry.dots_side is Side.ABOVE else below).append(point)
        for scalar, mc in classes:
            if (kasra_under_shadda is KasraPlacement.ABOVE and has_shadda
                    and mc.kind is Kind.VOWEL_BELOW):
                # sits right after Shadda, ahead of the other vowels above
                above.append((scalar, MarkClass.of(Kind.VOWEL_ABOVE), 0))
            elif mc.side is Side.ABOVE:
                above.append((scalar, mc, 1))
            elif mc.side is Side.BELOW:
                below.append((scalar, mc, 1))
            else:
                through.append((scalar, mc, 1))
        clusters.append(LayeredCluster(
            base, _stable_by_layer(above), _stable_by_layer(below), _stable_by_layer(through)
        ))
    return LayeredWord(tuple(clusters), skeleton_mode)


def project_base(word: LayeredWord) -> list[int]:
    return [c.base for c in word.clusters]


def parse_rasm(text: str, source: str = "<string>") -> dict[int, RasmEntry]:
    table: dict[int, RasmEntry] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ParseError(f"expected 3 fields, got {len(fields)}", source, lineno)
        try:
            letter, skeleton = parse_scalar(fields[0]), parse_scalar(fields[1])
            tag, side_name, count_s = fields[2].split(":")
            if tag != "dots":
                raise ValueError(f"expected dots:<side>:<count>, got {fields[2]!r}")
            count = int(count_s)
            side = None if side_name == "none" else Side(side_name.capitalize())
        except ValueError as e:
            raise ParseError(str(e), source, lineno) from None
        if (side is None) != (count == 0) or (side is not None and (side, count) not in POINT_GLYPHS):
            raise ParseError(f"unsupported dot spec {fields[2]!r}", source, lineno)
        if letter in table:
            raise ParseError(f"{fields[0]} listed twice", source, lineno)
        table[letter] = RasmEntry(skeleton, side, count)
    return table


def load_rasm(path: str | Path) -> dict[int, RasmEntry]:
    path = Path(path)
    return parse_rasm(path.read_text(encoding="utf-8"), str(path))


def dump_rasm(table: Mapping[int, RasmEntry]) -> str:
    lines = ["# letter\tskeleton\tdots:side:count"]
    for letter in sorted(table):
        e = table[letter]
        side = "none" if e.dots_side is None else e.dots_side.value.lower()
        lines.append(f"{format_scalar(letter)}\t{format_scalar(e.skeleton)}\tdots:{side}:{e.dots}")
    return "\n".join(lines) + "\n"


_DEFAULT: Mapping[int, RasmEntry] | None = None


def default_rasm() -> Mapping[int, RasmEntry]:
    global _DEFAULT
    if _DEFAULT is None:
        text = resources.files("tashkil.data").joinpath("rasm.tsv").read_text(encoding="utf-8")
        _DEFAULT = MappingProxyType(parse_rasm(text, "rasm.tsv"))
    return _DEFAULT
