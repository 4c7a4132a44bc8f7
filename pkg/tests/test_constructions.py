"""Generators: reference designs, planes, pasting and transfer checks."""

import hashlib

import pytest

import steinerlab as sl
from steinerlab.constructions import SEEDED_SHUFFLE, golden_text
from steinerlab.errors import NotPrime, SizeMismatch

SHA_15 = "a0db1ad5debf96d34a8441e5f88807ac6f6f20da0eab2edc3c541f33589ff772"
SHA_40 = "540710cfd8fb4a6a46d2b941179914a6db7ea3afcc733f9a595aca358d0cd7d3"


def test_example15_blocks(ex15):
    assert ex15.b == 35
    assert ex15.blocks[0] == (0, 1, 2)


def test_example40_blocks(ex40):
    assert ex40.b == 130
    assert ex40.blocks[-1] == (12, 35, 36, 37)


def test_examples_well_distributed(ex15_bundle, ex40_bundle):
    for _, _, wd in (ex15_bundle, ex40_bundle):
        assert wd.is_well_distributed


def test_golden_files_pinned(ex15, ex40):
    for d, name, sha in ((ex15, "example15", SHA_15), (ex40, "example40", SHA_40)):
        text = golden_text(name)
        assert sl.serialize(d) == text
        assert hashlib.sha256(text.encode()).hexdigest() == sha


def test_projective_plane_2_is_fano(fano):
    assert fano.v == 7 and fano.b == 7 and fano.k == 3


def test_projective_plane_3():
    d = sl.projective_plane(3)
    p = sl.params(d)
    assert (p.v, p.b, p.r, p.k) == (13, 13, 4, 4)


def test_affine_plane_7():
    d = sl.affine_plane(7)
    p = sl.params(d)
    assert (p.v, p.b, p.r, p.k) == (49, 56, 8, 7)


@pytest.mark.parametrize("q", [4, 6, 9, 1])
def test_nonprime_rejected(q):
    with pytest.raises(NotPrime):
        sl.projective_plane(q)
    with pytest.raises(NotPrime):
        sl.affine_plane(q)


def test_paste_size_mismatch(fano):
    with pytest.raises(SizeMismatch):
        sl.PasteRecipe(outer=fano, inner=fano)


def test_paste_sorted(pasted_bundle):
    recipe, pasted, _, _ = pasted_bundle
    assert pasted.v == 49 and pasted.k == 3 and pasted.b == 392
    p = sl.params(pasted)
    assert p.r == 24


def test_paste_copies_closed(pasted_bundle):
    recipe, pasted, _, _ = pasted_bundle
    copies = sl.paste_copies(pasted, recipe)
    assert len(copies) == 56
    for c in copies:
        assert c.is_closed()
        assert sl.closure(pasted, c.vertices).vertices == c.vertices


def test_paste_copy_coverage(pasted_bundle):
    recipe, pasted, _, _ = pasted_bundle
    copies = sl.paste_copies(pasted, recipe)
    vertex_counts = [0] * pasted.v
    block_counts = [0] * pasted.b
    for c in copies:
        for x in c.vertices:
            vertex_counts[x] += 1
        for i in c.block_ids:
            block_counts[i] += 1
    assert set(vertex_counts) == {8}  # (w-1)/(v-1) = 48/6
    assert set(block_counts) == {1}  # each block in exactly one copy


def test_transfer_check_sorted(pasted_bundle):
    recipe, pasted, _, _ = pasted_bundle
    rep = sl.transfer_check(pasted, recipe)
    assert rep.copies_closed
    assert rep.per_vertex_copy_count == 8
    assert rep.minimal_size == 7
    assert rep.minimal_count == 56
    assert rep.minimal_equals_copies
    assert rep.well_distributed and rep.m == 1 and rep.l == 8


def test_paste_shuffled_still_valid():
    recipe = sl.PasteRecipe(
        outer=sl.affine_plane(7), inner=sl.fano_plane(),
        bijection_rule=SEEDED_SHUFFLE, seed=5,
    )
    pasted = sl.paste(recipe)
    assert pasted.b == 392
    rep = sl.transfer_check(pasted, recipe)
    assert rep.copies_closed
    assert rep.per_vertex_copy_count == 8


def test_paste_shuffle_deterministic():
    mk = lambda: sl.paste(sl.PasteRecipe(
        outer=sl.affine_plane(7), inner=sl.fano_plane(),
        bijection_rule=SEEDED_SHUFFLE, seed=9,
    ))
    assert mk() == mk()
