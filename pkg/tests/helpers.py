"""Shared test utilities: seeded word fuzzing and brute-force geometry checks.

The geometry checks recompute ink boxes from the raw plan fields instead of
going through the solver's own helpers.
"""

from __future__ import annotations

import random

from tashkil import DiacritizedWord
from tashkil.compose import default_rasm
from tashkil.taxonomy import default_table

LETTERS = sorted(default_rasm())
MARKS = sorted(default_table().entries)

PHRASE = "حَلَّتْ لِيَالِي الرَّبِيعِ بَعْدَ الشِّتَاءِ"


def random_word_text(rng: random.Random, max_clusters: int = 6, max_marks: int = 4) -> str:
    parts = []
    for _ in range(rng.randint(1, max_clusters)):
        parts.append(chr(rng.choice(LETTERS)))
        parts.extend(chr(rng.choice(MARKS)) for _ in range(rng.randint(0, max_marks)))
    return "".join(parts)


def fuzz_words(n: int, seed: int = 0, **kw) -> list[DiacritizedWord]:
    rng = random.Random(seed)
    return [DiacritizedWord.from_text(random_word_text(rng, **kw)) for _ in range(n)]


def ink_box(g) -> tuple[float, float, float, float]:
    xmin, ymin, xmax, ymax = g.box
    s = g.scale
    return (g.x + s * xmin, g.y + s * ymin, g.x + s * xmax, g.y + s * ymax)


def close_pairs(plan, gap: float, tol: float = 1e-6) -> list[tuple[int, int]]:
    """Every pair of marks whose boxes are closer than ``gap`` on both axes."""
    out = []
    glyphs = list(plan.glyphs)
    for i, a in enumerate(glyphs):
        if a.role.value != "mark":
            continue
        ba = ink_box(a)
        for j in range(i + 1, len(glyphs)):
            b = glyphs[j]
            if b.role.value != "mark":
                continue
            bb = ink_box(b)
            horizontal = max(bb[0] - ba[2], ba[0] - bb[2])
            vertical = max(bb[1] - ba[3], ba[1] - bb[3])
            if horizontal < gap - tol and vertical < gap - tol:
                out.append((i, j))
    return out


def stacks_of(plan):
    """{(cluster, side): [glyph, ...]} in stack order, for above and below marks."""
    out: dict = {}
    for g in plan.glyphs:
        if g.role.value == "mark" and g.side is not None and g.side.value in ("Above", "Below"):
            out.setdefault((g.cluster, g.side.value), []).append(g)
    for v in out.values():
        v.sort(key=lambda g: g.level)
    return out


def monotonicity_violations(plan) -> list:
    bad = []
    for (cluster, side), glyphs in stacks_of(plan).items():
        boxes = [ink_box(g) for g in glyphs]
        for k in range(1, len(boxes)):
            if side == "Above" and not boxes[k][1] > boxes[k - 1][1]:
                bad.append((cluster, side, k))
            if side == "Below" and not boxes[k][3] < boxes[k - 1][3]:
                bad.append((cluster, side, k))
    return bad
