"""Closure, minimal-subdesign enumeration, and the coverage certificate."""

from itertools import combinations

import pytest

import steinerlab as sl
from steinerlab.errors import DifferentParent, NoSubdesigns, NotProper


def test_closure_of_pair_is_one_block(ex15):
    sub = sl.closure(ex15, (0, 1))
    assert sub.vertices == (0, 1, 2)
    assert sub.block_ids == (sl.pair_block(ex15, 0, 1),)
    assert sub.is_trivial


def test_closure_inside_minimal_subdesign(ex15):
    # 0, 1, 3 are not collinear and generate the subdesign on 0..6
    sub = sl.closure(ex15, (0, 1, 3))
    assert sub.vertices == tuple(range(7))
    assert len(sub.block_ids) == 7
    standalone = sl.new_design(7, [ex15.blocks[i] for i in sub.block_ids])
    assert sl.params(standalone).b == 7


def test_closure_fano_noncollinear_is_everything(fano):
    sub = sl.closure(fano, (0, 1, 3))
    assert sub.vertices == tuple(range(7))


def test_closure_trivial_seeds(ex15):
    assert sl.closure(ex15, ()).vertices == ()
    assert sl.closure(ex15, (5,)).vertices == (5,)


def test_minimal_subdesigns_ex15(ex15_bundle):
    d, subs, _ = ex15_bundle
    assert len(subs) == 15
    for s in subs:
        assert s.size == 7
        assert s.is_closed()
        # each re-validates as a standalone (7, 3, 1) design
        relabeled = {x: i for i, x in enumerate(s.vertices)}
        blocks = [[relabeled[x] for x in d.blocks[i]] for i in s.block_ids]
        p = sl.params(sl.new_design(7, blocks))
        assert (p.v, p.b, p.r) == (7, 7, 3)


def test_minimal_subdesigns_ex40(ex40_bundle):
    d, subs, _ = ex40_bundle
    assert len(subs) == 40
    for s in subs:
        assert s.size == 13
        relabeled = {x: i for i, x in enumerate(s.vertices)}
        blocks = [[relabeled[x] for x in d.blocks[i]] for i in s.block_ids]
        p = sl.params(sl.new_design(13, blocks))
        assert (p.v, p.b, p.r) == (13, 13, 4)


def test_minimal_subdesigns_fano_empty(fano):
    assert sl.minimal_subdesigns(fano) == []
    with pytest.raises(NoSubdesigns):
        sl.wd_profile(fano)


def test_wd_profile_ex15(ex15_bundle):
    _, _, wd = ex15_bundle
    assert (wd.v_prime, wd.n, wd.l, wd.m) == (7, 15, 7, 3)
    assert wd.b_prime == 7
    assert wd.is_well_distributed


def test_wd_profile_ex40(ex40_bundle):
    _, _, wd = ex40_bundle
    assert (wd.v_prime, wd.n, wd.l, wd.m) == (13, 40, 13, 4)
    assert wd.b_prime == 13
    assert wd.is_well_distributed


def test_wd_profile_uneven(uneven15):
    subs = sl.minimal_subdesigns(uneven15)
    assert len(subs) == 7
    wd = sl.wd_profile(uneven15, subs)
    assert not wd.is_well_distributed
    assert wd.l is None and wd.m is None
    assert set(wd.vertex_counts) == {3, 7}
    assert set(wd.block_counts) == {1, 3}


def test_wd_double_counting(ex15_bundle, ex40_bundle):
    for _, subs, wd in (ex15_bundle, ex40_bundle):
        assert sum(wd.vertex_counts) == wd.n * wd.v_prime
        assert sum(wd.block_counts) == wd.n * wd.b_prime


def test_intersection_trichotomy(ex15_bundle, ex40_bundle):
    for d, subs, _ in (ex15_bundle, ex40_bundle):
        for s1, s2 in combinations(subs, 2):
            meet = sl.subdesign_intersection(s1, s2)
            assert meet.size in (0, 1, d.k)


def test_intersection_examples(ex15_bundle, ex40_bundle):
    d15, subs15, _ = ex15_bundle
    meet = sl.subdesign_intersection(subs15[0], subs15[1])
    assert meet.size == 3 and len(meet.block_ids) == 1
    d40, subs40, _ = ex40_bundle
    meet40 = sl.subdesign_intersection(subs40[0], subs40[1])
    assert meet40.size == 4


def test_intersection_self(ex15_bundle):
    _, subs, _ = ex15_bundle
    assert sl.subdesign_intersection(subs[0], subs[0]) == subs[0]


def test_intersection_different_parent(ex15_bundle, ex40_bundle):
    _, subs15, _ = ex15_bundle
    _, subs40, _ = ex40_bundle
    with pytest.raises(DifferentParent):
        sl.subdesign_intersection(subs15[0], subs40[0])


def test_size_bound_tight(ex15_bundle, ex40_bundle):
    for d, subs, wd in (ex15_bundle, ex40_bundle):
        for s in subs:
            assert sl.check_size_bound(d, s)
        assert d.v == (d.k - 1) * wd.v_prime + 1  # both reference designs are tight


def test_size_bound_hypothetical_false(ex15):
    fake = sl.SubDesign(vertices=tuple(range(8)), block_ids=(), parent=ex15)
    assert sl.check_size_bound(ex15, fake) is False


def test_size_bound_not_proper(ex15, ex15_bundle):
    _, subs, _ = ex15_bundle
    trivial = sl.closure(ex15, (0, 1))
    with pytest.raises(NotProper):
        sl.check_size_bound(ex15, trivial)
    whole = sl.SubDesign(
        vertices=tuple(range(15)), block_ids=tuple(range(35)), parent=ex15
    )
    with pytest.raises(NotProper):
        sl.check_size_bound(ex15, whole)


def test_every_inside_triple_regenerates(ex15_bundle):
    # spot-check: non-collinear triples inside a minimal subdesign close to it
    d, subs, _ = ex15_bundle
    s = subs[0]
    for t in combinations(s.vertices, 3):
        blk = d.blocks[sl.pair_block(d, t[0], t[1])]
        if t[2] in blk:
            continue
        assert sl.closure(d, t).vertices == s.vertices
