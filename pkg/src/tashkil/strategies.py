"""Degraded mark handling as found in ordinary smart fonts, for comparison.

``LAYERED``
    the full layered solver.
``ALL_IN_ONE``
    every cluster with several marks gets one precomposed mark glyph.
``FREE_PLUS_COMPOSED``
    the outermost mark stays free; the rest are fused into one glyph drawn
    at design size.
``SHADDA_ONLY``
    the font can only pair a mark with Shadda: a cluster keeps its Shadda
    and its innermost short vowel (either side) and loses everything else.
    With neither present it keeps its innermost mark.  Dots are never
    dropped.

Clusters with at most one mark are shaped identically by every mode.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, replace

from .compose import LayeredWord
from .metrics import Box, MetricsSet
from .solver import (
    CollisionPolicy,
    MarkPiece,
    PlacementPlan,
    SolverConfig,
    layout,
    pieces_for,
    resolve_collisions,
)
from .taxonomy import Kind, MarkClass, Side, format_scalar, parse_scalar


class StrategyMode(str, enum.Enum):
    LAYERED = "layered"
    ALL_IN_ONE = "all-in-one"
    FREE_PLUS_COMPOSED = "free-plus-composed"
    SHADDA_ONLY = "shadda-only"


def composite_piece(entries: list[tuple[int, MarkClass]], metrics: MetricsSet) -> MarkPiece:
    """Fuse marks into one design-size glyph.

    Components are ordered by (layer, scalar), so the result depends only on
    the multiset of marks.  They are stacked outward on the side of the
    innermost component with the font's default gap between them, each
    centred on x = 0.  The piece's box is the union of the component boxes.
    """
    comps = sorted(entries, key=lambda e: (e[1].layer, e[0]))
    side = next((mc.side for _, mc in comps if mc.side is not Side.THROUGH), Side.THROUGH)
    gap = metrics.default_gap
    cursor = 0
    xs0, ys0, xs1, ys1 = [], [], [], []
    for scalar, _ in comps:
        b = metrics[scalar].bbox
        dx = -((b.xmin + b.xmax) // 2)
        if side is Side.BELOW:
            dy = cursor - b.ymax
            cursor = dy + b.ymin - gap
        else:
            dy = cursor - b.ymin
            cursor = dy + b.ymax + gap
        xs0.append(b.xmin + dx)
        ys0.append(b.ymin + dy)
        xs1.append(b.xmax + dx)
        ys1.append(b.ymax + dy)
    box = Box(min(xs0), min(ys0), max(xs1), max(ys1))
    return MarkPiece(tuple(sorted(s for s, _ in comps)), side, box, 1.0)


def _by_side(items: list[MarkPiece]) -> dict[Side, list[MarkPiece]]:
    out: dict[Side, list[MarkPiece]] = {side: [] for side in Side}
    for p in items:
        out[p.side].append(p)
    return out


def _shadda_only_keep(entries: list[tuple[int, MarkClass]]) -> set[int]:
    """Indices into ``entries`` (innermost first) that survive."""
    if len(entries) <= 1:
        return set(range(len(entries)))
    keep = {i for i, (_, mc) in enumerate(entries) if mc.kind is Kind.POINT}
    rest = [i for i in range(len(entries)) if i not in keep]
    shadda = next((i for i in rest if entries[i][1].kind is Kind.SHADDA), None)
    vowel = next((i for i in rest if entries[i][1].kind in (Kind.VOWEL_ABOVE, Kind.VOWEL_BELOW)), None)
    chosen = {i for i in (shadda, vowel) if i is not None}
    if not chosen and rest:
        chosen = {rest[0]}
    return keep | chosen


def shape_with(mode: StrategyMode | str, word: LayeredWord, metrics: MetricsSet,
               cfg: SolverConfig | None = None) -> PlacementPlan:
    mode = StrategyMode(mode)
    cfg = cfg or SolverConfig.for_metrics(metrics)
    all_pieces = []
    dropped: list[tuple[int, int]] = []
    for ci, cluster in enumerate(word.clusters):
        positions = cluster.positions()
        entries = [cluster.sides[k][i] for k, i in positions]
        if len(entries) <= 1 or mode is StrategyMode.LAYERED:
            all_pieces.append(pieces_for(cluster, metrics, cfg))
        elif mode is StrategyMode.ALL_IN_ONE:
            all_pieces.append(_by_side([composite_piece(entries, metrics)]))
        elif mode is StrategyMode.FREE_PLUS_COMPOSED:
            free = cluster.subset({positions[-1]})
            free_pieces = pieces_for(free, metrics, cfg)
            pieces = _by_side([composite_piece(entries[:-1], metrics)])
            for side in Side:
                pieces[side].extend(free_pieces[side])
            all_pieces.append(pieces)
        else:
            keep = _shadda_only_keep(entries)
            dropped.extend((ci, e[0]) for k, e in enumerate(entries) if k not in keep)
            kept = cluster.subset({positions[k] for k in keep})
            all_pieces.append(pieces_for(kept, metrics, cfg))
    stacks = layout([c.base for c in word.clusters], all_pieces, metrics, cfg)
    plan = resolve_collisions(stacks, metrics, cfg)
    return replace(plan, dropped=tuple(dropped))


@dataclass(frozen=True)
class ModeStats:
    mode: StrategyMode
    marks_rendered: int
    mark_glyphs: int
    dropped: tuple[int, ...]
    collisions: int
    vertical_extent: int

    def as_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "marks_rendered": self.marks_rendered,
            "mark_glyphs": self.mark_glyphs,
            "dropped": [format_scalar(s) for s in self.dropped],
            "collisions": self.collisions,
            "vertical_extent": self.vertical_extent,
        }

    @classmethod
    def from_dict(cls, d: dict) -> ModeStats:
        return cls(
            StrategyMode(d["mode"]), d["marks_rendered"], d["mark_glyphs"],
            tuple(parse_scalar(s) for s in d["dropped"]), d["collisions"], d["vertical_extent"],
        )


@dataclass(frozen=True)
class ComparisonReport:
    word: str
    modes: tuple[ModeStats, ...]

    def __getitem__(self, mode: StrategyMode | str) -> ModeStats:
        mode = StrategyMode(mode)
        return next(m for m in self.modes if m.mode is mode)

    def as_dict(self) -> dict:
        return {"word": self.word, "modes": [m.as_dict() for m in self.modes]}

    @classmethod
    def from_dict(cls, d: dict) -> ComparisonReport:
        return cls(d["word"], tuple(ModeStats.from_dict(m) for m in d["modes"]))

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), ensure_ascii=False, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str | bytes) -> ComparisonReport:
        return cls.from_dict(json.loads(text))


def compare(word: LayeredWord, metrics: MetricsSet, cfg: SolverConfig | None = None,
            label: str = "") -> ComparisonReport:
    """Shape ``word`` in every mode, with collisions reported rather than fixed."""
    cfg = replace(cfg or SolverConfig.for_metrics(metrics), collision_policy=CollisionPolicy.REPORT)
    stats = []
    for mode in StrategyMode:
        plan = shape_with(mode, word, metrics, cfg)
        marks = plan.marks
        stats.append(ModeStats(
            mode,
            sum(len(g.scalars) for g in marks),
            len(marks),
            tuple(s for _, s in plan.dropped),
            len(plan.collisions),
            plan.line_ascent + plan.line_descent,
        ))
    return ComparisonReport(label, tuple(stats))
