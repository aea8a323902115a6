"""End-to-end acceptance criteria.

Each test is one criterion; the terminal summary prints a PASS/FAIL line per
test (see conftest.py).
"""

import itertools
import time

import pytest

from tashkil import DiacritizedWord, Shaper, compose, plans_to_json, reorder, solve, to_svg
from tashkil.compose import LayeredCluster, split_chains
from tashkil.errors import UnresolvedCollision
from tashkil.metrics import Box, GlyphMetrics, MetricsSet
from tashkil.solver import SolverConfig, size_marks
from tashkil.strategies import StrategyMode, shape_with
from tashkil.taxonomy import FATHA, SHADDA, Kind, MarkClass, Side

from helpers import MARKS, PHRASE, close_pairs, fuzz_words, ink_box, monotonicity_violations

CORPUS = fuzz_words(1000, seed=2024, max_clusters=6, max_marks=4)

# (base width, mark width) -> clamp(round4(0.8 * base / mark), 0.75, 1.25),
# worked out by hand with half-even rounding.
SCALE_ORACLE = [
    ((500, 400), "1.0000"), ((430, 400), "0.8600"), ((200, 400), "0.7500"), ((470, 360), "1.0444"),
    ((560, 320), "1.2500"), ((365, 300), "0.9733"), ((1000, 400), "1.2500"), ((290, 250), "0.9280"),
    ((400, 300), "1.0667"), ((611, 457), "1.0696"), ((777, 500), "1.2432"), ((333, 271), "0.9830"),
    ((123, 101), "0.9743"), ((409, 298), "1.0980"), ((900, 640), "1.1250"), ((250, 213), "0.9390"),
    ((480, 320), "1.2000"), ((380, 345), "0.8812"), ((531, 400), "1.0620"), ((313, 222), "1.1279"),
]


@pytest.fixture(scope="module")
def corpus_plans(metrics):
    cfg = SolverConfig.for_metrics(metrics)
    t0 = time.perf_counter()
    plans = [solve(compose(w), metrics, cfg) for w in CORPUS]
    return plans, time.perf_counter() - t0


def test_1_centrifugal_stacking(corpus_plans):
    plans, elapsed = corpus_plans
    assert len(plans) == 1000
    violations = [(i, v) for i, p in enumerate(plans) for v in monotonicity_violations(p)]
    print(f"stacking: {len(violations)} violations, {elapsed:.2f}s")
    assert violations == []
    assert elapsed < 5.0


def test_2_clearance(metrics):
    cfg = SolverConfig.for_metrics(metrics, collision_policy="raise")
    unresolved, overlaps = 0, []
    for i, w in enumerate(CORPUS):
        try:
            plan = solve(compose(w), metrics, cfg)
        except UnresolvedCollision:
            unresolved += 1
            continue
        overlaps.extend((i, pair) for pair in close_pairs(plan, cfg.gap))
    print(f"clearance: {len(overlaps)} overlaps, {unresolved} unresolved")
    assert (overlaps, unresolved) == ([], 0)


def _shadda_checks(plan):
    """Check Shadda sits under every other above mark of its cluster."""
    n = 0
    for shadda in (g for g in plan.marks if g.scalar == SHADDA):
        for v in plan.marks:
            if v.cluster == shadda.cluster and v.side is Side.ABOVE and v.scalar != SHADDA:
                assert ink_box(shadda)[3] < ink_box(v)[1], (plan, v)
                n += 1
    return n


def test_3_shadda_below_vowel(metrics, table):
    checked = sum(_shadda_checks(solve(compose(w), metrics)) for w in CORPUS)
    # every input order of Shadda with one or two other above marks, on several bases
    vowels = sorted(s for s, mc in table.entries.items() if mc.kind is Kind.VOWEL_ABOVE)
    above = sorted(s for s, mc in table.entries.items() if mc.side is Side.ABOVE and s != SHADDA)
    for base in (0x062F, 0x0628, 0x0644, 0x0633, 0x0627):
        for extra in itertools.chain(([v] for v in vowels), itertools.combinations(above, 2)):
            for perm in itertools.permutations([SHADDA, *extra]):
                w = DiacritizedWord.from_text(chr(base) + "".join(map(chr, perm)))
                checked += _shadda_checks(solve(compose(w), metrics))
    print(f"shadda order: {checked} cases")
    assert checked > 0


def _distinct_layer_sets(table):
    by_layer = {}
    for s, mc in table.entries.items():
        by_layer.setdefault(mc.layer, []).append(s)
    groups = [[None, *sorted(v)] for _, v in sorted(by_layer.items())]
    for choice in itertools.product(*groups):
        marks = [s for s in choice if s is not None]
        if 1 <= len(marks) <= 4:
            yield marks


def test_4_round_trip(table):
    for w in CORPUS:
        letters, marks = split_chains(w)
        rebuilt = "".join(chr(b) + "".join(map(chr, ms)) for b, ms in zip(letters, marks))
        assert rebuilt == w.text
        layered = compose(w)
        for c, lc in zip(w.clusters, layered.clusters):
            assert sorted(lc.mark_scalars) == sorted(m.scalar for m in c.marks)
        once = reorder(w)
        assert reorder(once) == once
    sets = perms = 0
    for marks in _distinct_layer_sets(table):
        results = set()
        for perm in itertools.permutations(marks):
            w = DiacritizedWord.from_text("د" + "".join(map(chr, perm)))
            results.add(reorder(w).text)
            perms += 1
        assert len(results) == 1, marks
        sets += 1
    print(f"round trip: {len(CORPUS)} words, {sets} mark sets, {perms} permutations")


def test_5_mode_agreement(metrics):
    cases = 0
    for base in (0x062F, 0x0628, 0x0644, 0x0633, 0x0627):
        for mark in MARKS:
            w = compose(DiacritizedWord.from_text(chr(base) + chr(mark)))
            plans = [shape_with(m, w, metrics) for m in StrategyMode]
            assert all(p == plans[0] for p in plans), (base, mark)
            assert len({plans_to_json([p]) for p in plans}) == 1
            cases += 1
    print(f"mode agreement: {cases} cases")
    assert cases == 70


def test_6_corpus(golden, metrics):
    outputs = []
    for _ in range(2):
        plans = Shaper().shape(PHRASE)
        assert sum(len(p.dropped) for p in plans) == 0
        assert sum(len(p.collisions) for p in plans) == 0
        assert all(close_pairs(p, 60) == [] for p in plans)
        outputs.append((plans_to_json(plans), to_svg(plans, metrics)))
    assert outputs[0] == outputs[1]
    assert outputs[0][0] == (golden / "corpus.json").read_bytes()
    assert outputs[0][1] == (golden / "corpus.svg").read_bytes()


def test_7_linearity(metrics):
    doubled = metrics.scaled(2)
    cfg1 = SolverConfig.for_metrics(metrics)
    cfg2 = SolverConfig.for_metrics(doubled)
    assert cfg2.gap == 2 * cfg1.gap
    for w in CORPUS[:100]:
        layered = compose(w)
        a, b = solve(layered, metrics, cfg1), solve(layered, doubled, cfg2)
        for ga, gb in zip(a.glyphs, b.glyphs, strict=True):
            for va, vb in ((ga.x, gb.x), (ga.y, gb.y), *zip(ga.box, gb.box)):
                assert float(va).is_integer() and vb == 2 * va
            assert ga.scale == gb.scale
        assert (b.word_advance, b.line_ascent, b.line_descent) == \
            (2 * a.word_advance, 2 * a.line_ascent, 2 * a.line_descent)


def test_8_scale_clamp(metrics):
    cfg = SolverConfig.for_metrics(metrics)
    for w in CORPUS:
        for c in compose(w).clusters:
            for _, s in size_marks(c, metrics, cfg):
                assert cfg.scale_min <= s <= cfg.scale_max
    for (wb, wm), expected in SCALE_ORACLE:
        ms = MetricsSet({
            0x062F: GlyphMetrics(0x062F, wb, Box(0, 0, wb, 500)),
            FATHA: GlyphMetrics(FATHA, 0, Box(0, 0, wm, 100)),
        })
        ((_, s),) = size_marks(LayeredCluster(0x062F, ((FATHA, MarkClass.of(Kind.VOWEL_ABOVE)),)), ms, cfg)
        assert f"{s:.4f}" == expected, (wb, wm)
