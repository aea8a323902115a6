"""Sizing and placing marks around their base letters.

Marks on each side of a letter form a stack.  The first mark in a stack sits
one gap away from the letter's ink and every later mark sits one gap away
from the mark before it, so stacks grow outward from the letter.  Each mark
is centred on its letter's anchor.

After every cluster is stacked, neighbouring stacks are checked against each
other and the later one is moved away (or shrunk first, or just reported,
depending on the collision policy).

All positions are quantized to the metrics grid (a thousandth of an em), and
every rounding step is taken in grid units so that scaling the metrics and
the gap by an integer scales the output exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .compose import KasraPlacement, LayeredCluster, LayeredWord
from .errors import ConfigError, UnresolvedCollision
from .metrics import Box, GlyphMetrics, MetricsSet, width_of
from .taxonomy import SHADDA, SUKUN, Side, format_scalar, parse_scalar

MAX_PASSES = 8
_EPS = 1e-9


class CollisionPolicy(str, enum.Enum):
    RAISE = "raise"
    SHRINK = "shrink"
    REPORT = "report"


class Role(str, enum.Enum):
    BASE = "base"
    MARK = "mark"


def _four_places(value: float) -> bool:
    return abs(value * 10000 - round(value * 10000)) < 1e-6


@dataclass(frozen=True)
class SolverConfig:
    gap: int | float = 60
    scale_min: float = 0.75
    scale_max: float = 1.25
    fill_ratio: float = 0.8
    collision_policy: CollisionPolicy = CollisionPolicy.RAISE
    size_exempt: frozenset[int] = frozenset({SHADDA, SUKUN})
    kasra_under_shadda: KasraPlacement = KasraPlacement.BELOW

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "collision_policy", CollisionPolicy(self.collision_policy))
            object.__setattr__(self, "kasra_under_shadda", KasraPlacement(self.kasra_under_shadda))
        except ValueError as e:
            raise ConfigError(str(e)) from None
        object.__setattr__(self, "size_exempt", frozenset(self.size_exempt))
        if self.gap < 0:
            raise ConfigError(f"gap must be non-negative, got {self.gap}")
        if not 0 < self.scale_min <= 1 <= self.scale_max:
            raise ConfigError(f"need 0 < scale_min <= 1 <= scale_max, got {self.scale_min}, {self.scale_max}")
        if not (_four_places(self.scale_min) and _four_places(self.scale_max)):
            raise ConfigError("scale bounds take at most four decimal places")
        if self.fill_ratio <= 0:
            raise ConfigError(f"fill_ratio must be positive, got {self.fill_ratio}")

    @classmethod
    def for_metrics(cls, metrics: MetricsSet, **overrides) -> SolverConfig:
        overrides.setdefault("gap", metrics.default_gap)
        return cls(**overrides)

    def as_pairs(self) -> list[tuple[str, str]]:
        return [
            ("gap", _num(self.gap)),
            ("scale_min", _num(self.scale_min)),
            ("scale_max", _num(self.scale_max)),
            ("fill_ratio", _num(self.fill_ratio)),
            ("collision_policy", self.collision_policy.value),
            ("size_exempt", ",".join(format_scalar(s) for s in sorted(self.size_exempt))),
            ("kasra_under_shadda", self.kasra_under_shadda.value),
        ]


def _num(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


_CONFIG_KEYS = {
    "gap": float,
    "scale_min": float,
    "scale_max": float,
    "fill_ratio": float,
    "collision_policy": str,
    "kasra_under_shadda": str,
    "size_exempt": lambda v: frozenset(parse_scalar(t) for t in v.split(",") if t.strip()),
}


def config_overrides(pairs: Iterable[tuple[str, str]]) -> dict:
    """Convert textual ``key, value`` pairs into SolverConfig keyword arguments."""
    out = {}
    for key, value in pairs:
        key = key.strip().replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            v = _CONFIG_KEYS[key](value.strip())
        except ValueError as e:
            raise ConfigError(f"{key}: {e}") from None
        if key == "gap" and float(v).is_integer():
            v = int(v)
        out[key] = v
    return out


def parse_config(text: str) -> dict:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value")
        key, value = line.split("=", 1)
        pairs.append((key, value))
    return config_overrides(pairs)


def load_config(path: str | Path, base: SolverConfig | None = None) -> SolverConfig:
    overrides = parse_config(Path(path).read_text(encoding="utf-8"))
    return replace(base or SolverConfig(), **overrides)


@dataclass(frozen=True)
class PlacedGlyph:
    """One glyph in a plan.

    ``box`` is the glyph's own ink box before scaling; the placed ink box is
    ``origin + scale * box``.  Composite glyphs list several scalars.
    """

    scalars: tuple[int, ...]
    cluster: int
    role: Role
    side: Side | None
    level: int
    x: int
    y: int
    scale: float
    box: Box

    @property
    def scalar(self) -> int:
        return self.scalars[0]

    @property
    def glyph_id(self) -> str:
        return "+".join(format_scalar(s) for s in self.scalars)

    @property
    def ink(self) -> tuple[float, float, float, float]:
        s, b = self.scale, self.box
        return (self.x + s * b.xmin, self.y + s * b.ymin, self.x + s * b.xmax, self.y + s * b.ymax)


@dataclass(frozen=True)
class PlacementPlan:
    glyphs: tuple[PlacedGlyph, ...] = ()
    word_advance: int = 0
    line_ascent: int = 0
    line_descent: int = 0
    collisions: tuple[tuple[int, int], ...] = ()
    dropped: tuple[tuple[int, int], ...] = ()

    @property
    def marks(self) -> list[PlacedGlyph]:
        return [g for g in self.glyphs if g.role is Role.MARK]

    @property
    def bases(self) -> list[PlacedGlyph]:
        return [g for g in self.glyphs if g.role is Role.BASE]


@dataclass(frozen=True)
class MarkPiece:
    """Something to stack: a single mark, or several fused into one glyph."""

    scalars: tuple[int, ...]
    side: Side
    box: Box
    scale: float = 1.0


def _ceil_to(v: float, g: int) -> int:
    return g * math.ceil(v / g - _EPS)


def _floor_to(v: float, g: int) -> int:
    return g * math.floor(v / g + _EPS)


def _round_to(v: float, g: int) -> int:
    return g * round(v / g)


def fit_scale(base_width: int, mark_width: int, cfg: SolverConfig) -> float:
    """Scale that makes the mark cover ``fill_ratio`` of the letter, clamped."""
    if mark_width <= 0:
        raw = Fraction(1)
    else:
        raw = Fraction(str(cfg.fill_ratio)) * base_width / mark_width
    quantized = Fraction(round(raw * 10000), 10000)
    lo, hi = Fraction(str(cfg.scale_min)), Fraction(str(cfg.scale_max))
    return float(min(max(quantized, lo), hi))


def size_marks(cluster: LayeredCluster, metrics: MetricsSet, cfg: SolverConfig) -> list[tuple[int, float]]:
    """Scale for every mark, listed above, then below, then through."""
    base_width = width_of(metrics[cluster.base])
    out = []
    for scalar in cluster.mark_scalars:
        m = metrics[scalar]
        if scalar in cfg.size_exempt:
            out.append((scalar, 1.0))
        else:
            out.append((scalar, fit_scale(base_width, width_of(m), cfg)))
    return out


def pieces_for(cluster: LayeredCluster, metrics: MetricsSet, cfg: SolverConfig) -> dict[Side, list[MarkPiece]]:
    scales = iter(size_marks(cluster, metrics, cfg))
    pieces: dict[Side, list[MarkPiece]] = {side: [] for side in Side}
    for side, entries in ((Side.ABOVE, cluster.above), (Side.BELOW, cluster.below), (Side.THROUGH, cluster.through)):
        for scalar, _ in entries:
            _, s = next(scales)
            pieces[side].append(MarkPiece((scalar,), side, metrics[scalar].bbox, s))
    return pieces


@dataclass
class ClusterStack:
    """A letter with its mark stacks, laid out at pen position ``pen``."""

    index: int
    pen: int
    base_scalar: int
    base: GlyphMetrics
    pieces: dict[Side, list[MarkPiece]]
    gap: float
    grid: int
    offsets: dict[Side, int] = field(default_factory=lambda: {Side.ABOVE: 0, Side.BELOW: 0})
    placed: dict[Side, list[PlacedGlyph]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for side in Side:
            self.place(side)

    @property
    def base_glyph(self) -> PlacedGlyph:
        return PlacedGlyph((self.base_scalar,), self.index, Role.BASE, None, 0, self.pen, 0, 1.0, self.base.bbox)

    @property
    def glyphs(self) -> list[PlacedGlyph]:
        return [self.base_glyph, *self.placed[Side.ABOVE], *self.placed[Side.BELOW], *self.placed[Side.THROUGH]]

    @property
    def marks(self) -> list[PlacedGlyph]:
        return [*self.placed[Side.ABOVE], *self.placed[Side.BELOW], *self.placed[Side.THROUGH]]

    def _glyph(self, p: MarkPiece, side: Side, level: int, x: int, y: int) -> PlacedGlyph:
        return PlacedGlyph(p.scalars, self.index, Role.MARK, side, level, x, y, p.scale, p.box)

    def place(self, side: Side) -> None:
        g, gap, b = self.grid, self.gap, self.base.bbox
        out = []
        if side is Side.ABOVE:
            ax = self.pen + self.base.anchor_above[0]
            cursor = b.ymax + gap
            for level, p in enumerate(self.pieces[side], 1):
                s = p.scale
                y = _ceil_to(cursor - s * p.box.ymin, g)
                x = _round_to(ax - s * (p.box.xmin + p.box.xmax) / 2, g)
                cursor = y + s * p.box.ymax + gap
                out.append(self._glyph(p, side, level, x, y + self.offsets[side]))
        elif side is Side.BELOW:
            ax = self.pen + self.base.anchor_below[0]
            cursor = b.ymin - gap
            for level, p in enumerate(self.pieces[side], 1):
                s = p.scale
                y = _floor_to(cursor - s * p.box.ymax, g)
                x = _round_to(ax - s * (p.box.xmin + p.box.xmax) / 2, g)
                cursor = y + s * p.box.ymin - gap
                out.append(self._glyph(p, side, level, x, y + self.offsets[side]))
        else:
            ax = self.pen + self.base.anchor_above[0]
            mid = (b.ymin + b.ymax) / 2
            for level, p in enumerate(self.pieces[side], 1):
                s = p.scale
                x = _round_to(ax - s * (p.box.xmin + p.box.xmax) / 2, g)
                y = _round_to(mid - s * (p.box.ymin + p.box.ymax) / 2, g)
                out.append(self._glyph(p, side, level, x, y))
        self.placed[side] = out

    def shift(self, side: Side, dy: int) -> None:
        self.offsets[side] += dy
        self.place(side)


def layout(
    bases: Sequence[int],
    pieces: Sequence[dict[Side, list[MarkPiece]]],
    metrics: MetricsSet,
    cfg: SolverConfig,
) -> list[ClusterStack]:
    """Lay letters out along the pen in logical order and stack their marks."""
    stacks = []
    pen = 0
    for i, (scalar, p) in enumerate(zip(bases, pieces)):
        m = metrics[scalar]
        stacks.append(ClusterStack(i, pen, scalar, m, {s: list(p.get(s, [])) for s in Side}, cfg.gap, metrics.grid))
        pen += m.advance
    return stacks


def stack(cluster: LayeredCluster, metrics: MetricsSet, cfg: SolverConfig) -> list[PlacedGlyph]:
    """Stack one cluster on its own, pen at 0."""
    return layout([cluster.base], [pieces_for(cluster, metrics, cfg)], metrics, cfg)[0].glyphs


def separation(a: Sequence[float], b: Sequence[float]) -> tuple[float, float]:
    """Horizontal and vertical gaps between two boxes (negative when they overlap)."""
    return max(a[0] - b[2], b[0] - a[2]), max(a[1] - b[3], b[1] - a[3])


def _conflict(a: Sequence[float], b: Sequence[float], gap: float, tol: float) -> bool:
    sx, sy = separation(a, b)
    return sx < gap - tol and sy < gap - tol


def find_collisions(glyphs: Sequence[PlacedGlyph], gap: float, grid: int = 1) -> list[tuple[int, int]]:
    """Index pairs of marks closer than ``gap`` both horizontally and vertically."""
    tol = 1e-6 * grid
    marks = [(i, g.ink) for i, g in enumerate(glyphs) if g.role is Role.MARK]
    pairs = []
    for k, (i, a) in enumerate(marks):
        for j, b in marks[k + 1:]:
            if _conflict(a, b, gap, tol):
                pairs.append((i, j))
    return pairs


def _resolve_side(st: ClusterStack, side: Side, obstacles: list[PlacedGlyph], cfg: SolverConfig) -> None:
    gap, g = cfg.gap, st.grid
    tol = 1e-6 * g
    shrink = cfg.collision_policy is CollisionPolicy.SHRINK
    limit = len(obstacles) + len(st.pieces[side]) + 2
    for _ in range(limit):
        moving = st.placed[side]
        hit = None
        for ob in obstacles:
            a = ob.ink
            offenders = [k for k, m in enumerate(moving) if _conflict(a, m.ink, gap, tol)]
            if offenders:
                hit = (a, offenders)
                break
        if hit is None:
            return
        a, offenders = hit
        if shrink:
            pieces = st.pieces[side]
            smaller = [k for k in offenders if pieces[k].scale > cfg.scale_min]
            if smaller:
                for k in smaller:
                    pieces[k] = replace(pieces[k], scale=cfg.scale_min)
                st.place(side)
                continue
        # clear the lowest (or highest, below) mark that shares columns with the obstacle
        near = [m.ink for m in moving if separation(a, m.ink)[0] < gap - tol]
        if side is Side.ABOVE:
            st.shift(side, _ceil_to(a[3] + gap - min(b[1] for b in near), g))
        else:
            st.shift(side, -_ceil_to(max(b[3] for b in near) - (a[1] - gap), g))


def _resolve_pass(stacks: list[ClusterStack], cfg: SolverConfig) -> None:
    fixed: list[PlacedGlyph] = []
    for st in stacks:
        obstacles = fixed + st.placed[Side.THROUGH]
        for side in (Side.ABOVE, Side.BELOW):
            if st.placed[side]:
                _resolve_side(st, side, obstacles, cfg)
        fixed.extend(st.marks)


def _assemble(stacks: list[ClusterStack], grid: int) -> PlacementPlan:
    glyphs = tuple(g for st in stacks for g in st.glyphs)
    advance = sum(st.base.advance for st in stacks)
    if not glyphs:
        return PlacementPlan((), advance)
    top = max(g.ink[3] for g in glyphs)
    bottom = min(g.ink[1] for g in glyphs)
    return PlacementPlan(glyphs, advance, max(0, _ceil_to(top, grid)), max(0, _ceil_to(-bottom, grid)))


def resolve_collisions(stacks: list[ClusterStack], metrics: MetricsSet, cfg: SolverConfig) -> PlacementPlan:
    """Apply the collision policy across clusters and build the final plan.

    ``stacks`` are modified in place.  Clusters are visited in logical order
    and only the later one of a colliding pair ever moves.
    """
    grid = metrics.grid
    if cfg.collision_policy is CollisionPolicy.REPORT:
        plan = _assemble(stacks, grid)
        return replace(plan, collisions=tuple(find_collisions(plan.glyphs, cfg.gap, grid)))
    for _ in range(MAX_PASSES):
        _resolve_pass(stacks, cfg)
        plan = _assemble(stacks, grid)
        pairs = find_collisions(plan.glyphs, cfg.gap, grid)
        if not pairs:
            return plan
    raise UnresolvedCollision(pairs)


def solve(word: LayeredWord, metrics: MetricsSet, cfg: SolverConfig | None = None) -> PlacementPlan:
    """Size, stack and de-collide every mark of a composed word."""
    cfg = cfg or SolverConfig.for_metrics(metrics)
    pieces = [pieces_for(c, metrics, cfg) for c in word.clusters]
    stacks = layout([c.base for c in word.clusters], pieces, metrics, cfg)
    return resolve_collisions(stacks, metrics, cfg)
