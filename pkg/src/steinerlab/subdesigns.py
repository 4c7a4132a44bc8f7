"""Closed subdesigns: closure from seeds, enumeration of the minimal ones,
and the even-coverage certificate.

A subdesign is a vertex subset closed under the pair -> block map, together
with the parent blocks it contains.  Closure of a vertex set is computed by
the grow-to-fixpoint procedure: add the block of every inside pair, then the
new vertices of those blocks, until nothing new appears.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional

from .core import Design
from .errors import DifferentParent, NoSubdesigns, NotProper

__all__ = [
    "SubDesign",
    "WDProfile",
    "closure",
    "minimal_subdesigns",
    "wd_profile",
    "subdesign_intersection",
    "check_size_bound",
]


@dataclass(frozen=True)
class SubDesign:
    """A closed (vertex set, block-id set) pair inside a parent design.

    Sizes 0, 1 and k are the trivial cases; anything larger is a proper
    nontrivial subdesign.  Equality ignores the parent object identity.
    """

    vertices: tuple[int, ...]
    block_ids: tuple[int, ...]
    parent: Design = field(repr=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def is_trivial(self) -> bool:
        return self.size <= self.parent.k

    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def is_closed(self) -> bool:
        """Listed blocks lie inside and are exactly the inside pairs' blocks."""
        vs = set(self.vertices)
        if any(not vs.issuperset(self.parent.blocks[i]) for i in self.block_ids):
            return False
        want = {self.parent.pair_to_block[p] for p in combinations(self.vertices, 2)}
        return set(self.block_ids) == want


def _close_mask(d: Design, seeds: Iterable[int], abort_above: Optional[int] = None):
    """Bitmask closure; returns (vertex list, mask) or None if the closure
    grows past `abort_above` vertices."""
    verts = list(dict.fromkeys(seeds))
    mask = 0
    for s in verts:
        mask |= 1 << s
    pair_row = d.pair_to_block
    blocks = d.blocks
    bmask = d.block_masks
    i = 1
    while i < len(verts):
        xi = verts[i]
        for j in range(i):
            xj = verts[j]
            bid = pair_row[(xi, xj) if xi < xj else (xj, xi)]
            new = bmask[bid] & ~mask
            if new:
                mask |= new
                for x in blocks[bid]:
                    if (1 << x) & new:
                        verts.append(x)
                if abort_above is not None and len(verts) > abort_above:
                    return None
        i += 1
    return verts, mask


def closure(d: Design, seeds: Iterable[int]) -> SubDesign:
    """Smallest closed subdesign containing `seeds` (possibly all of V)."""
    seeds = list(seeds)
    for s in seeds:
        if not (0 <= s < d.v):
            raise ValueError(f"seed {s} not in 0..{d.v - 1}")
    verts, _ = _close_mask(d, seeds)
    vs = tuple(sorted(verts))
    if len(vs) < 2:
        return SubDesign(vertices=vs, block_ids=(), parent=d)
    ids = sorted({d.pair_to_block[p] for p in combinations(vs, 2)})
    sub = SubDesign(vertices=vs, block_ids=tuple(ids), parent=d)
    assert sub.size in (0, 1, d.k) or sub.size > d.k
    return sub


def minimal_subdesigns(d: Design) -> list[SubDesign]:
    """All proper subdesigns of globally minimum nontrivial size.

    Runs closure over every vertex triple not inside one block and keeps the
    deduplicated closures of minimum size < v.  Two exact shortcuts keep the
    sweep near O(v^3) on structured inputs: a closure is abandoned once it
    outgrows the best size seen so far, and when the best size equals the
    Fisher floor k(k-1)+1 any triple inside an already-found subdesign must
    regenerate it.  Returns [] when every closure is the whole design.
    """
    v, k = d.v, d.k
    floor = k * (k - 1) + 1
    best = v  # proper subdesigns must be smaller than this
    found: dict[tuple[int, ...], int] = {}
    found_masks: list[int] = []
    pair_row = d.pair_to_block
    blocks = d.blocks

    for t in combinations(range(v), 3):
        x, y, z = t
        if z in blocks[pair_row[(x, y)]]:
            continue  # collinear
        if best == floor and found_masks:
            tm = (1 << x) | (1 << y) | (1 << z)
            if any(tm & m == tm for m in found_masks):
                continue
        res = _close_mask(d, t, abort_above=best)
        if res is None:
            continue
        verts, mask = res
        n = len(verts)
        if n >= best and not (n == best and best < v):
            continue
        vs = tuple(sorted(verts))
        if n < best:
            best = n
            found = {vs: mask}
            found_masks = [mask] if best == floor else []
        elif vs not in found:
            found[vs] = mask
            if best == floor:
                found_masks.append(mask)
    if best >= v:
        return []
    out = []
    for vs in sorted(found):
        ids = sorted({pair_row[p] for p in combinations(vs, 2)})
        out.append(SubDesign(vertices=vs, block_ids=tuple(ids), parent=d))
    return out


@dataclass(frozen=True)
class WDProfile:
    """Coverage certificate of the minimal subdesigns.

    `is_well_distributed` iff every vertex lies in the same number l of
    minimal subdesigns and every block in the same number m.  When it holds,
    n and l are determined by m:  n = m v(v-1)/(v'(v'-1)),  l = m(v-1)/(v'-1).
    Carries the parent's v and k so downstream formulas are self-contained.
    """

    v: int
    k: int
    v_prime: int
    b_prime: int
    n: int
    l: Optional[int]
    m: Optional[int]
    is_well_distributed: bool
    vertex_counts: tuple[int, ...]
    block_counts: tuple[int, ...]


def wd_profile(d: Design, subs: Optional[list[SubDesign]] = None) -> WDProfile:
    """Count per-vertex and per-block coverage by the minimal subdesigns.

    When coverage is even, the derived identities are asserted exactly:
    the subdesigns form a (v, v', m) design on V (every vertex pair in
    exactly m of them) and cover each of the b blocks exactly m times with
    b' = v'(v'-1)/(k(k-1)) blocks apiece.
    """
    if subs is None:
        subs = minimal_subdesigns(d)
    if not subs:
        raise NoSubdesigns("design has no proper nontrivial subdesigns")
    v, k = d.v, d.k
    v_prime = subs[0].size
    b_prime = v_prime * (v_prime - 1) // (k * (k - 1))
    assert all(s.size == v_prime for s in subs)
    assert all(len(s.block_ids) == b_prime for s in subs)

    vertex_counts = [0] * v
    block_counts = [0] * d.b
    for s in subs:
        for x in s.vertices:
            vertex_counts[x] += 1
        for i in s.block_ids:
            block_counts[i] += 1
    even = len(set(vertex_counts)) == 1 and len(set(block_counts)) == 1
    n = len(subs)
    l = vertex_counts[0] if even else None
    m = block_counts[0] if even else None
    if even:
        assert Fraction(m * v * (v - 1), v_prime * (v_prime - 1)) == n
        assert Fraction(m * (v - 1), v_prime - 1) == l
        # pair coverage of the subdesign family is exactly m
        pair_cover = {p: 0 for p in combinations(range(v), 2)}
        for s in subs:
            for p in combinations(s.vertices, 2):
                pair_cover[p] += 1
        assert all(c == m for c in pair_cover.values())
    return WDProfile(
        v=v,
        k=k,
        v_prime=v_prime,
        b_prime=b_prime,
        n=n,
        l=l,
        m=m,
        is_well_distributed=even,
        vertex_counts=tuple(vertex_counts),
        block_counts=tuple(block_counts),
    )


def subdesign_intersection(s1: SubDesign, s2: SubDesign) -> SubDesign:
    """Componentwise intersection; closed again, by closure of both sides."""
    if s1.parent != s2.parent:
        raise DifferentParent("subdesigns come from different designs")
    vs = tuple(sorted(set(s1.vertices).intersection(s2.vertices)))
    ids = tuple(sorted(set(s1.block_ids).intersection(s2.block_ids)))
    return SubDesign(vertices=vs, block_ids=ids, parent=s1.parent)


def check_size_bound(d: Design, s: SubDesign) -> bool:
    """v >= (k-1) v' + 1 for a proper nontrivial subdesign of size v'."""
    if s.size <= d.k or s.size >= d.v:
        raise NotProper(f"subdesign of size {s.size} is trivial or the whole design")
    return d.v >= (d.k - 1) * s.size + 1
