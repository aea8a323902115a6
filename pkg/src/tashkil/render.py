"""Canonical JSON and SVG output for placement plans.

JSON keys always appear in the same order, font units are integers and
scales carry exactly four decimals, so equal plans produce equal bytes.

The solver works left to right in logical order.  The SVG writer mirrors
every word about its own extent and lays words out from the right, which
turns logical order into right-to-left visual order without disturbing any
clearance the solver established.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Mapping, Sequence
from xml.sax.saxutils import quoteattr

from .errors import ParseError
from .metrics import Box, MetricsSet
from .solver import PlacedGlyph, PlacementPlan, Role
from .taxonomy import Side, parse_scalar

_SCALAR = re.compile(r"U\+[0-9A-Fa-f]{4,6}")
_SIDE_NAMES = {None: "null", Side.ABOVE: '"above"', Side.BELOW: '"below"', Side.THROUGH: '"through"'}


def _glyph_json(g: PlacedGlyph) -> str:
    return (
        f'{{"id":"{g.glyph_id}","cluster":{g.cluster},"role":"{g.role.value}",'
        f'"side":{_SIDE_NAMES[g.side]},"level":{g.level},"x":{int(g.x)},"y":{int(g.y)},'
        f'"scale":{g.scale:.4f},"box":[{",".join(str(int(v)) for v in g.box)}]}}'
    )


def _plan_json(plan: PlacementPlan) -> str:
    glyphs = ",".join(_glyph_json(g) for g in plan.glyphs)
    collisions = ",".join(f"[{i},{j}]" for i, j in plan.collisions)
    dropped = ",".join(f'[{c},"U+{s:04X}"]' for c, s in plan.dropped)
    return (
        f'{{"glyphs":[{glyphs}],"word_advance":{int(plan.word_advance)},'
        f'"line_ascent":{int(plan.line_ascent)},"line_descent":{int(plan.line_descent)},'
        f'"collisions":[{collisions}],"dropped":[{dropped}]}}'
    )


def to_json(plan: PlacementPlan) -> bytes:
    return _plan_json(plan).encode("utf-8")


def plans_to_json(plans: Sequence[PlacementPlan]) -> bytes:
    if not plans:
        return b"[]\n"
    return ("[\n" + ",\n".join(_plan_json(p) for p in plans) + "\n]\n").encode("utf-8")


def _parse_id(glyph_id: str) -> tuple[int, ...]:
    # "U+064E+U+0651": scalars joined by "+"
    if "+".join(_SCALAR.findall(glyph_id)) != glyph_id:
        raise ValueError(f"bad glyph id {glyph_id!r}")
    return tuple(parse_scalar(t) for t in _SCALAR.findall(glyph_id))


def _plan_from_dict(d: dict) -> PlacementPlan:
    glyphs = []
    for g in d["glyphs"]:
        side = None if g["side"] is None else Side(g["side"].capitalize())
        glyphs.append(PlacedGlyph(
            _parse_id(g["id"]),
            g["cluster"], Role(g["role"]), side, g["level"],
            g["x"], g["y"], float(g["scale"]), Box(*g["box"]),
        ))
    return PlacementPlan(
        tuple(glyphs), d["word_advance"], d["line_ascent"], d["line_descent"],
        tuple(tuple(p) for p in d["collisions"]),
        tuple((c, parse_scalar(s)) for c, s in d["dropped"]),
    )


def from_json(data: str | bytes) -> PlacementPlan | list[PlacementPlan]:
    """Parse output of :func:`to_json` (one plan) or :func:`plans_to_json` (a list)."""
    d = json.loads(data)
    if isinstance(d, list):
        return [_plan_from_dict(p) for p in d]
    return _plan_from_dict(d)


def parse_outlines(text: str, source: str = "<string>") -> dict[int, str]:
    """Outline table: ``U+XXXX<TAB>svg path data`` in glyph units, y up."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(None, 1)
        if len(parts) != 2:
            raise ParseError("expected scalar and path data", source, lineno)
        try:
            out[parse_scalar(parts[0])] = parts[1].strip()
        except ValueError as e:
            raise ParseError(str(e), source, lineno) from None
    return out


def load_outlines(path: str | Path) -> dict[int, str]:
    path = Path(path)
    return parse_outlines(path.read_text(encoding="utf-8"), str(path))


def _n(v: float) -> str:
    s = f"{v:.2f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


_STYLE = (
    "rect.base,path.base{fill:#e8e8e8;stroke:#333;stroke-width:4}"
    "rect.mark,path.mark{fill:none;stroke:#c0392b;stroke-width:4}"
)


def word_positions(plans: Sequence[PlacementPlan], word_space: float) -> list[float]:
    """Right edge of every word, first word rightmost."""
    total = sum(p.word_advance for p in plans) + word_space * max(len(plans) - 1, 0)
    rights = []
    right = total
    for p in plans:
        rights.append(right)
        right -= p.word_advance + word_space
    return rights


def visual_box(g: PlacedGlyph, right: float) -> tuple[float, float, float, float]:
    """Ink box in SVG user space (x mirrored about the word, y pointing down)."""
    x0, y0, x1, y1 = g.ink
    return (right - x1, -y1, right - x0, -y0)


def to_svg(
    plans: Sequence[PlacementPlan],
    metrics: MetricsSet | None = None,
    *,
    outlines: Mapping[int, str] | None = None,
    word_space: float | None = None,
    margin: float | None = None,
) -> bytes:
    em = metrics.units_per_em if metrics else 1000
    word_space = em * 3 / 10 if word_space is None else word_space
    margin = em / 10 if margin is None else margin
    outlines = outlines or {}
    rights = word_positions(plans, word_space)
    width = rights[0] if plans else 0
    ascent = max((p.line_ascent for p in plans), default=0)
    descent = max((p.line_descent for p in plans), default=0)
    view = (-margin, -ascent - margin, width + 2 * margin, ascent + descent + 2 * margin)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{" ".join(_n(v) for v in view)}">',
        f"<style>{_STYLE}</style>",
    ]
    body = []
    for wi, (plan, right) in enumerate(zip(plans, rights)):
        for g in plan.glyphs:
            cls = g.role.value
            attrs = f'class="{cls}" data-word="{wi}" data-cluster="{g.cluster}" data-id={quoteattr(g.glyph_id)}'
            path = outlines.get(g.scalar) if len(g.scalars) == 1 else None
            if path:
                s = g.scale
                body.append(
                    f'<path {attrs} transform="translate({_n(right - g.x)} {_n(-g.y)}) '
                    f'scale({_n(-s)} {_n(-s)})" d={quoteattr(path)}/>'
                )
            else:
                x0, y0, x1, y1 = visual_box(g, right)
                body.append(
                    f'<rect {attrs} x="{_n(x0)}" y="{_n(y0)}" '
                    f'width="{_n(x1 - x0)}" height="{_n(y1 - y0)}"/>'
                )
    if body:
        lines.append('<g class="glyphs">')
        lines.extend(body)
        lines.append("</g>")
    else:
        lines.append('<g class="glyphs"/>')
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")
