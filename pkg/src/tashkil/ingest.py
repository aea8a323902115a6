"""Parsing Arabic text into base-plus-marks clusters, and mark-order checks.

Words are the unit of processing.  Inside a word every base character opens
a cluster and the combining marks that follow it belong to that cluster, in
the order they were typed.

The canonical order produced by :func:`reorder` sorts marks by stacking
layer (nearest the letter first).  This is deliberately *not* the Unicode
canonical combining class order used by NFC, which puts the short vowels
(ccc 30-32) before Shadda (ccc 33).
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field

from .errors import InvalidUtf8, LeadingMark, UnknownMark
from .taxonomy import Side, TaxonomyTable, default_table

MARK_CATEGORIES = frozenset({"Mn", "Mc", "Me"})


def is_mark(scalar: int) -> bool:
    return unicodedata.category(chr(scalar)) in MARK_CATEGORIES


def _is_separator(ch: str) -> bool:
    return ch.isspace() or unicodedata.category(ch).startswith(("P", "Z", "C"))


@dataclass(frozen=True)
class CodeUnit:
    scalar: int
    offset: int = 0
    is_mark: bool = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if not 0 <= self.scalar <= 0x10FFFF or 0xD800 <= self.scalar <= 0xDFFF:
            raise ValueError(f"{self.scalar:#x} is not a Unicode scalar value")
        object.__setattr__(self, "is_mark", is_mark(self.scalar))

    @property
    def char(self) -> str:
        return chr(self.scalar)


@dataclass(frozen=True)
class Cluster:
    base: CodeUnit
    marks: tuple[CodeUnit, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "marks", tuple(self.marks))
        if self.base.is_mark:
            raise ValueError(f"cluster base U+{self.base.scalar:04X} is a combining mark")
        for m in self.marks:
            if not m.is_mark:
                raise ValueError(f"U+{m.scalar:04X} is not a combining mark")

    @property
    def text(self) -> str:
        return self.base.char + "".join(m.char for m in self.marks)

    @property
    def mark_scalars(self) -> tuple[int, ...]:
        return tuple(m.scalar for m in self.marks)


@dataclass(frozen=True)
class DiacritizedWord:
    clusters: tuple[Cluster, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "clusters", tuple(self.clusters))
        if not self.clusters:
            raise ValueError("a word needs at least one cluster")

    @classmethod
    def from_text(cls, text: str) -> DiacritizedWord:
        """Build a single word from ``text``, which must not contain separators."""
        words = segment(text)
        if len(words) != 1:
            raise ValueError(f"expected exactly one word in {text!r}, got {len(words)}")
        return words[0]

    @property
    def text(self) -> str:
        return "".join(c.text for c in self.clusters)

    @property
    def offset(self) -> int:
        return self.clusters[0].base.offset

    def __len__(self) -> int:
        return len(self.clusters)


def _decode(text: str | bytes) -> str:
    if isinstance(text, (bytes, bytearray)):
        try:
            return bytes(text).decode("utf-8")
        except UnicodeDecodeError as e:
            raise InvalidUtf8(e.start, e.reason) from None
    offset = 0
    for ch in text:
        if 0xD800 <= ord(ch) <= 0xDFFF:
            raise InvalidUtf8(offset, "lone surrogate")
        offset += len(ch.encode("utf-8"))
    return text


def _build_word(units: list[CodeUnit]) -> DiacritizedWord:
    if units[0].is_mark:
        raise LeadingMark(units[0].scalar, units[0].offset)
    clusters: list[Cluster] = []
    base, marks = units[0], []
    for u in units[1:]:
        if u.is_mark:
            marks.append(u)
        else:
            clusters.append(Cluster(base, tuple(marks)))
            base, marks = u, []
    clusters.append(Cluster(base, tuple(marks)))
    return DiacritizedWord(tuple(clusters))


def segment(text: str | bytes) -> list[DiacritizedWord]:
    """Split text into words of clusters.

    ``text`` may be ``bytes`` (decoded strictly as UTF-8) or ``str``.  Offsets
    recorded on every :class:`CodeUnit` are byte offsets into the UTF-8 form.
    """
    text = _decode(text)
    words: list[DiacritizedWord] = []
    current: list[CodeUnit] = []
    offset = 0
    for ch in text:
        if _is_separator(ch) and not is_mark(ord(ch)):
            if current:
                words.append(_build_word(current))
                current = []
        else:
            current.append(CodeUnit(ord(ch), offset))
        offset += len(ch.encode("utf-8"))
    if current:
        words.append(_build_word(current))
    return words


@dataclass(frozen=True)
class OrderViolation:
    offset: int
    code: str
    message: str
    cluster: int
    pair: tuple[int, int]

    def as_line(self) -> str:
        return f"{self.offset}\t{self.code}\t{self.message}"

    def as_dict(self) -> dict:
        return {
            "offset": self.offset,
            "code": self.code,
            "message": self.message,
            "cluster": self.cluster,
            "pair": list(self.pair),
        }


ORDER = "order"
DUPLICATE = "duplicate"


def lint_order(word: DiacritizedWord, taxonomy: TaxonomyTable | None = None) -> list[OrderViolation]:
    """Report marks coded against the nearest-first order, and duplicated classes.

    Above and below marks form independent stacks, so order is only checked
    between consecutive marks on the same side.  Marks through the letter do
    not stack and are never reported for order.
    """
    taxonomy = taxonomy or default_table()
    report: list[OrderViolation] = []
    for ci, cluster in enumerate(word.clusters):
        classes = [taxonomy.classify(m.scalar, m.offset) for m in cluster.marks]
        for side in (Side.ABOVE, Side.BELOW):
            idx = [i for i, mc in enumerate(classes) if mc.side is side]
            for a, b in zip(idx, idx[1:]):
                if classes[a].layer > classes[b].layer:
                    ma, mb = cluster.marks[a], cluster.marks[b]
                    report.append(OrderViolation(
                        mb.offset, ORDER,
                        f"U+{mb.scalar:04X} (layer {classes[b].layer}) coded after "
                        f"U+{ma.scalar:04X} (layer {classes[a].layer})",
                        ci, (a, b),
                    ))
        for b in range(len(classes)):
            for a in range(b):
                if classes[a] == classes[b]:
                    ma, mb = cluster.marks[a], cluster.marks[b]
                    what = "repeated" if ma.scalar == mb.scalar else f"same class as U+{ma.scalar:04X}"
                    report.append(OrderViolation(
                        mb.offset, DUPLICATE,
                        f"U+{mb.scalar:04X} {what} ({classes[b].kind.value}, {classes[b].side.value})",
                        ci, (a, b),
                    ))
                    break
    report.sort(key=lambda v: (v.offset, v.code))
    return report


def _sorted_marks(marks: tuple[CodeUnit, ...], taxonomy: TaxonomyTable) -> tuple[CodeUnit, ...]:
    layers = [taxonomy.classify(m.scalar, m.offset).layer for m in marks]
    order = sorted(range(len(marks)), key=lambda i: layers[i])
    return tuple(marks[i] for i in order)


def reorder(word: DiacritizedWord, taxonomy: TaxonomyTable | None = None) -> DiacritizedWord:
    """Stable-sort each cluster's marks by layer.  Code units keep their offsets."""
    taxonomy = taxonomy or default_table()
    return DiacritizedWord(tuple(
        Cluster(c.base, _sorted_marks(c.marks, taxonomy)) for c in word.clusters
    ))


def reorder_text(text: str | bytes, taxonomy: TaxonomyTable | None = None) -> str:
    """Rewrite ``text`` with every mark run in canonical order, separators untouched."""
    text = _decode(text)
    taxonomy = taxonomy or default_table()
    out: list[str] = []
    run: list[CodeUnit] = []
    offset = 0
    prev_base = False

    def flush() -> None:
        out.extend(u.char for u in _sorted_marks(tuple(run), taxonomy))
        run.clear()

    for ch in text:
        if is_mark(ord(ch)):
            if not prev_base:
                raise LeadingMark(ord(ch), offset)
            run.append(CodeUnit(ord(ch), offset))
        else:
            flush()
            out.append(ch)
            prev_base = not _is_separator(ch)
        offset += len(ch.encode("utf-8"))
    flush()
    return "".join(out)


def check_marks(word: DiacritizedWord, taxonomy: TaxonomyTable | None = None) -> None:
    """Raise :class:`UnknownMark` for the first unclassifiable mark in ``word``."""
    taxonomy = taxonomy or default_table()
    for c in word.clusters:
        for m in c.marks:
            taxonomy.classify(m.scalar, m.offset)


__all__ = [
    "CodeUnit", "Cluster", "DiacritizedWord", "OrderViolation", "UnknownMark",
    "segment", "lint_order", "reorder", "reorder_text", "check_marks", "is_mark",
]
