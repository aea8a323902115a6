import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from tashkil import DiacritizedWord, compose, project_base, reorder, split_chains
from tashkil.compose import POINT_GLYPHS, default_rasm, dump_rasm, parse_rasm
from tashkil.errors import NoSkeletonMapping, ParseError, UnknownMark
from tashkil.taxonomy import FATHA, FATHATAN, KASRA, SHADDA, Kind, Side

from helpers import LETTERS, MARKS, random_word_text

DAL, LAM, BEH = 0x062F, 0x0644, 0x066E


def W(*scalars):
    return DiacritizedWord.from_text("".join(map(chr, scalars)))


def test_split_chains_example():
    assert split_chains(W(0x062F, FATHA, SHADDA)) == ([0x062F], [[FATHA, SHADDA]])


def test_split_chains_unmarked():
    letters, diacritics = split_chains(W(0x0628, 0x0627, 0x0644))
    assert letters == [0x0628, 0x0627, 0x0644]
    assert diacritics == [[], [], []]


@pytest.mark.parametrize("seed", range(20))
def test_split_chains_zip_reconstructs(seed):
    text = random_word_text(random.Random(seed), max_clusters=3)
    letters, diacritics = split_chains(DiacritizedWord.from_text(text))
    assert "".join(chr(l) + "".join(map(chr, d)) for l, d in zip(letters, diacritics)) == text


def test_compose_dal_fatha_shadda(table):
    (c,) = compose(W(DAL, FATHA, SHADDA), table).clusters
    assert [(s, mc.layer) for s, mc in c.above] == [(SHADDA, 1), (FATHA, 2)]
    assert c.below == () and c.through == ()


def test_compose_lam_kasra(table):
    (c,) = compose(W(LAM, KASRA), table).clusters
    assert [s for s, _ in c.below] == [KASRA]
    assert c.above == ()


def test_compose_skeleton_beh_fathatan(table):
    # the shipped rasm table gives BEH one dot below and a dotless skeleton
    entry = default_rasm()[0x0628]
    assert (entry.skeleton, entry.dots_side, entry.dots) == (BEH, Side.BELOW, 1)
    word = compose(W(0x0628, FATHATAN), table, skeleton_mode=True)
    (c,) = word.clusters
    assert c.base == BEH
    assert [(s, mc.kind, mc.layer) for s, mc in c.below] == [(POINT_GLYPHS[Side.BELOW, 1], Kind.POINT, 0)]
    assert [(s, mc.layer) for s, mc in c.above] == [(FATHATAN, 3)]
    assert project_base(word) == [BEH]


def test_skeleton_points_go_innermost(table):
    (c,) = compose(W(0x0646, SHADDA, FATHA), table, skeleton_mode=True).clusters
    assert [s for s, _ in c.above] == [POINT_GLYPHS[Side.ABOVE, 1], SHADDA, FATHA]


def test_skeleton_missing_letter(table):
    with pytest.raises(NoSkeletonMapping):
        compose(W(0x06A9), table, skeleton_mode=True)


def test_unknown_mark(table):
    with pytest.raises(UnknownMark):
        compose(W(DAL, 0x0300), table)


def test_kasra_under_shadda_above(table):
    (c,) = compose(W(DAL, FATHA, KASRA, SHADDA), table, kasra_under_shadda="above").clusters
    assert [s for s, _ in c.above] == [SHADDA, KASRA, FATHA]
    assert c.below == ()
    (c,) = compose(W(DAL, KASRA), table, kasra_under_shadda="above").clusters
    assert [s for s, _ in c.below] == [KASRA]


def test_project_base(table):
    assert project_base(compose(W(DAL, FATHA, SHADDA), table)) == [DAL]
    assert project_base(compose(W(0x0628, 0x0627), table)) == [0x0628, 0x0627]


def test_rasm_round_trip():
    assert parse_rasm(dump_rasm(default_rasm())) == dict(default_rasm())


@pytest.mark.parametrize("line", ["U+0628\tU+066E\tdots:below:4", "U+0628\tU+066E\tdots:none:1",
                                  "U+0628\tU+066E", "U+0628\tU+066E\tpoints:below:1"])
def test_rasm_parse_errors(line):
    with pytest.raises(ParseError):
        parse_rasm(line + "\n")


word_texts = st.lists(
    st.tuples(st.sampled_from(LETTERS), st.lists(st.sampled_from(MARKS), max_size=4)),
    min_size=1, max_size=6,
).map(lambda cs: "".join(chr(b) + "".join(map(chr, ms)) for b, ms in cs))


@given(word_texts)
def test_compose_properties(text):
    word = DiacritizedWord.from_text(text)
    layered = compose(word)
    assert len(layered.clusters) == len(word.clusters)
    for src, c in zip(word.clusters, layered.clusters):
        assert Counter(c.mark_scalars) == Counter(src.mark_scalars)
        for stack in (c.above, c.below):
            layers = [mc.layer for _, mc in stack]
            assert layers == sorted(layers)
    assert compose(reorder(word)) == layered
    letters, _ = split_chains(word)
    assert project_base(layered) == letters
