"""Glyph boxes and anchors.

Coordinates are font units with y pointing up and the baseline at 0.  The x
axis runs in reading direction: the renderer mirrors a finished line for
right-to-left display, so metrics are authored in the same logical frame as
the solver works in.

File format, one glyph per line::

    units_per_em 1000
    default_gap 60
    U+0628 620 30 -180 590 320            # advance xmin ymin xmax ymax
    U+0644 500 30 -300 470 760 420 760 - -  # optional anchor pairs, '-' = default
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Mapping, NamedTuple

from .errors import BadBox, MissingMetrics, ParseError
from .taxonomy import format_scalar, parse_scalar


class Box(NamedTuple):
    xmin: int
    ymin: int
    xmax: int
    ymax: int


@dataclass(frozen=True)
class GlyphMetrics:
    scalar: int
    advance: int
    bbox: Box
    anchor_above: tuple[int, int] | None = None
    anchor_below: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "bbox", Box(*self.bbox))
        b = self.bbox
        if self.anchor_above is None:
            object.__setattr__(self, "anchor_above", (self.advance // 2, b.ymax))
        if self.anchor_below is None:
            object.__setattr__(self, "anchor_below", (self.advance // 2, b.ymin))
        object.__setattr__(self, "anchor_above", tuple(self.anchor_above))
        object.__setattr__(self, "anchor_below", tuple(self.anchor_below))

    def problem(self) -> str | None:
        b = self.bbox
        if b.xmin > b.xmax:
            return f"xmin {b.xmin} > xmax {b.xmax}"
        if b.ymin > b.ymax:
            return f"ymin {b.ymin} > ymax {b.ymax}"
        if self.advance < 0:
            return f"negative advance {self.advance}"
        for name, (ax, _) in (("above", self.anchor_above), ("below", self.anchor_below)):
            if not b.xmin - self.advance <= ax <= b.xmax + self.advance:
                return f"anchor_{name} x {ax} outside [{b.xmin - self.advance}, {b.xmax + self.advance}]"
        return None

    def scaled(self, k: int) -> GlyphMetrics:
        return GlyphMetrics(
            self.scalar, self.advance * k, Box(*(v * k for v in self.bbox)),
            (self.anchor_above[0] * k, self.anchor_above[1] * k),
            (self.anchor_below[0] * k, self.anchor_below[1] * k),
        )


def height_of(m: GlyphMetrics) -> int:
    return max(m.bbox.ymax, 0)


def depth_of(m: GlyphMetrics) -> int:
    return max(-m.bbox.ymin, 0)


def width_of(m: GlyphMetrics) -> int:
    return m.bbox.xmax - m.bbox.xmin


@dataclass(frozen=True)
class MetricsSet:
    glyphs: Mapping[int, GlyphMetrics]
    units_per_em: int = 1000
    default_gap: int = 60

    def __post_init__(self) -> None:
        object.__setattr__(self, "glyphs", MappingProxyType(dict(self.glyphs)))
        if self.units_per_em <= 0:
            raise ValueError("units_per_em must be positive")
        if self.default_gap < 0:
            raise ValueError("default_gap must be non-negative")

    def __getitem__(self, scalar: int) -> GlyphMetrics:
        try:
            return self.glyphs[scalar]
        except KeyError:
            raise MissingMetrics(scalar) from None

    def __contains__(self, scalar: int) -> bool:
        return scalar in self.glyphs

    @property
    def grid(self) -> int:
        """Placement quantum: one thousandth of an em, at least one font unit."""
        return max(1, self.units_per_em // 1000)

    def scaled(self, k: int) -> MetricsSet:
        """Every length multiplied by the integer ``k``."""
        return MetricsSet(
            {s: g.scaled(k) for s, g in self.glyphs.items()},
            self.units_per_em * k,
            self.default_gap * k,
        )


def _int(token: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ValueError(f"expected an integer, got {token!r}") from None


def _anchor(tokens: list[str]) -> tuple[int, int] | None:
    if tokens == ["-", "-"]:
        return None
    return (_int(tokens[0]), _int(tokens[1]))


def parse_metrics(text: str, source: str = "<string>") -> MetricsSet:
    glyphs: dict[int, GlyphMetrics] = {}
    settings = {"units_per_em": 1000, "default_gap": 60}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            if tokens[0] in settings:
                if len(tokens) != 2:
                    raise ValueError(f"{tokens[0]} takes one value")
                settings[tokens[0]] = _int(tokens[1])
                continue
            scalar = parse_scalar(tokens[0])
            nums = tokens[1:]
            if len(nums) not in (5, 7, 9):
                raise ValueError(f"expected 5, 7 or 9 values after the scalar, got {len(nums)}")
            adv, xmin, ymin, xmax, ymax = (_int(t) for t in nums[:5])
            above = _anchor(nums[5:7]) if len(nums) >= 7 else None
            below = _anchor(nums[7:9]) if len(nums) == 9 else None
        except ValueError as e:
            raise ParseError(str(e), source, lineno) from None
        if scalar in glyphs:
            raise ParseError(f"{tokens[0]} listed twice", source, lineno)
        g = GlyphMetrics(scalar, adv, Box(xmin, ymin, xmax, ymax), above, below)
        problem = g.problem()
        if problem:
            raise BadBox(f"{tokens[0]}: {problem}", source, lineno)
        glyphs[scalar] = g
    if settings["units_per_em"] <= 0:
        raise ParseError("units_per_em must be positive", source)
    if settings["default_gap"] < 0:
        raise ParseError("default_gap must be non-negative", source)
    return MetricsSet(glyphs, settings["units_per_em"], settings["default_gap"])


def load_metrics(path: str | Path) -> MetricsSet:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"not UTF-8: {e}", str(path)) from None
    return parse_metrics(text, str(path))


def dump_metrics(metrics: MetricsSet) -> str:
    lines = [
        "# scalar advance xmin ymin xmax ymax above_x above_y below_x below_y",
        f"units_per_em {metrics.units_per_em}",
        f"default_gap {metrics.default_gap}",
    ]
    for scalar in sorted(metrics.glyphs):
        g = metrics.glyphs[scalar]
        nums = [g.advance, *g.bbox, *g.anchor_above, *g.anchor_below]
        lines.append(" ".join([format_scalar(scalar), *map(str, nums)]))
    return "\n".join(lines) + "\n"


_DEFAULT: MetricsSet | None = None


def default_metrics() -> MetricsSet:
    global _DEFAULT
    if _DEFAULT is None:
        text = resources.files("tashkil.data").joinpath("metrics.txt").read_text(encoding="utf-8")
        _DEFAULT = parse_metrics(text, "metrics.txt")
    return _DEFAULT
