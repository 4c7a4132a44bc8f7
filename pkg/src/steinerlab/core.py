"""Validated block designs with unit pair coverage and their parameter identities.

A design here is a pair (V, B): V = {0..v-1} and B a collection of k-subsets
("blocks") such that every unordered pair of vertices lies in exactly one
block.  Construction goes through :func:`new_design`, which checks every
invariant exhaustively; all downstream analysis may therefore assume them.
Designs are immutable and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import (
    PairCoverageViolation,
    RepeatedBlock,
    SameVertex,
    TrivialDesign,
    UnequalBlockSize,
    VertexOutOfRange,
)

Block = tuple[int, ...]


@dataclass(frozen=True)
class Design:
    """An immutable (v, k, 1) block design.

    Blocks are stored sorted within each block and lexicographically across
    blocks, so equal designs compare equal and serialize identically.
    Derived lookup tables are built once at construction.
    """

    v: int
    k: int
    blocks: tuple[Block, ...]
    # derived, excluded from equality/hash
    pair_to_block: dict = field(init=False, repr=False, compare=False)
    vertex_to_blocks: tuple = field(init=False, repr=False, compare=False)
    block_masks: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pair_to_block: dict[tuple[int, int], int] = {}
        vertex_to_blocks: list[list[int]] = [[] for _ in range(self.v)]
        for i, b in enumerate(self.blocks):
            for x in b:
                vertex_to_blocks[x].append(i)
            for p in combinations(b, 2):
                pair_to_block[p] = i
        object.__setattr__(self, "pair_to_block", pair_to_block)
        object.__setattr__(
            self, "vertex_to_blocks", tuple(tuple(bs) for bs in vertex_to_blocks)
        )
        object.__setattr__(
            self, "block_masks", tuple(sum(1 << x for x in b) for b in self.blocks)
        )

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def r(self) -> int:
        """Blocks through each vertex; constant by the pair-coverage invariant."""
        return (self.v - 1) // (self.k - 1)


@dataclass(frozen=True)
class DesignParams:
    """The five classical parameters of a validated design."""

    v: int
    b: int
    r: int
    k: int
    lam: int

    def __post_init__(self):
        assert self.r * (self.k - 1) == self.lam * (self.v - 1)
        assert self.b * self.k == self.r * self.v
        assert self.b >= self.v, "Fisher bound violated"


@dataclass(frozen=True)
class BlockMeetProfile:
    """How the other blocks meet a reference block: in one vertex or not at all."""

    meet1: int
    meet0: int


def new_design(v: int, blocks: Iterable[Iterable[int]]) -> Design:
    """Validate and canonicalize a block list into a :class:`Design`.

    Checks, in order: vertex range, uniform block size with distinct
    vertices, no repeated blocks, exact unit pair coverage, and rejection of
    the degenerate cases (k <= 2, a single block covering all of V).

    Raises:
        VertexOutOfRange, UnequalBlockSize, RepeatedBlock, TrivialDesign,
        PairCoverageViolation
    """
    if v < 3:
        raise ValueError(f"need v >= 3, got {v}")
    block_list = [tuple(sorted(b)) for b in blocks]
    if not block_list:
        raise TrivialDesign("empty block collection")
    k = len(block_list[0])
    for b in block_list:
        for x in b:
            if not (0 <= x < v):
                raise VertexOutOfRange(f"vertex {x} not in 0..{v - 1}")
        if len(set(b)) != len(b):
            raise UnequalBlockSize(f"repeated vertex inside block {b}")
        if len(b) != k:
            raise UnequalBlockSize(f"block {b} has size {len(b)}, expected {k}")
    if k <= 2:
        raise TrivialDesign(f"block size {k} not supported (need k >= 3)")
    block_list.sort()
    for b1, b2 in zip(block_list, block_list[1:]):
        if b1 == b2:
            raise RepeatedBlock(f"block {b1} occurs more than once")
    if len(block_list) == 1 and k == v:
        raise TrivialDesign("single block covering every vertex")

    counts: dict[tuple[int, int], int] = {}
    for b in block_list:
        for p in combinations(b, 2):
            counts[p] = counts.get(p, 0) + 1
    for p in combinations(range(v), 2):
        c = counts.get(p, 0)
        if c != 1:
            raise PairCoverageViolation(p, c)

    return Design(v=v, k=k, blocks=tuple(block_list))


def params(d: Design) -> DesignParams:
    """Closed-form r and b, verified against actual per-vertex block counts."""
    v, k = d.v, d.k
    r = (v - 1) // (k - 1)
    b = v * (v - 1) // (k * (k - 1))
    per_vertex = [len(bs) for bs in d.vertex_to_blocks]
    assert all(c == r for c in per_vertex), "per-vertex block counts differ from r"
    assert b == d.b
    return DesignParams(v=v, b=b, r=r, k=k, lam=1)


def admissible(v: int, k: int, lam: int = 1) -> bool:
    """Divisibility conditions necessary for a (v, k, lam) design to exist."""
    if not (v > k >= 2 and lam >= 1):
        raise ValueError(f"need v > k >= 2 and lam >= 1, got {(v, k, lam)}")
    return lam * (v - 1) % (k - 1) == 0 and lam * v * (v - 1) % (k * (k - 1)) == 0


def pair_block(d: Design, x: int, y: int) -> int:
    """Id of the unique block containing both x and y."""
    if x == y:
        raise SameVertex(f"pair lookup needs two distinct vertices, got {x} twice")
    for z in (x, y):
        if not (0 <= z < d.v):
            raise VertexOutOfRange(f"vertex {z} not in 0..{d.v - 1}")
    return d.pair_to_block[(x, y) if x < y else (y, x)]


def block_meet_profile(d: Design, b0: int) -> BlockMeetProfile:
    """Count blocks meeting block b0 in exactly one vertex / not at all.

    Both counts are produced by brute force and must equal their closed
    forms k(v-k)/(k-1) and (v-k^2+k-1)(v-k)/(k(k-1)) exactly.
    """
    if not (0 <= b0 < d.b):
        raise VertexOutOfRange(f"block id {b0} not in 0..{d.b - 1}")
    ref = set(d.blocks[b0])
    meet1 = meet0 = 0
    for i, blk in enumerate(d.blocks):
        if i == b0:
            continue
        n = len(ref.intersection(blk))
        if n == 1:
            meet1 += 1
        elif n == 0:
            meet0 += 1
        else:
            raise AssertionError(f"blocks {b0} and {i} share {n} > 1 vertices")
    v, k = d.v, d.k
    assert Fraction(k * (v - k), k - 1) == meet1
    assert Fraction((v - k * k + k - 1) * (v - k), k * (k - 1)) == meet0
    assert 1 + meet1 + meet0 == d.b
    return BlockMeetProfile(meet1=meet1, meet0=meet0)


def is_symmetric(d: Design) -> bool:
    """True iff b = v; then every pair of blocks is checked to meet equally."""
    if d.b != d.v:
        return False
    sizes = {
        len(set(b1).intersection(b2)) for b1, b2 in combinations(d.blocks, 2)
    }
    assert len(sizes) == 1, f"symmetric design with unequal block meets {sizes}"
    return True


def derived_block_tbd(d: Design, b0: int) -> list[frozenset[int]]:
    """Intersections of size >= 2 of other blocks with block b0.

    With unit pair coverage two blocks share at most one vertex, so the
    result is always empty; kept as an explicit check.
    """
    if not (0 <= b0 < d.b):
        raise VertexOutOfRange(f"block id {b0} not in 0..{d.b - 1}")
    ref = set(d.blocks[b0])
    out = []
    for i, blk in enumerate(d.blocks):
        if i == b0:
            continue
        meet = ref.intersection(blk)
        if len(meet) >= 2:
            out.append(frozenset(meet))
    assert not out, "pair coverage 1 forces block meets of size <= 1"
    return out


def relabel(d: Design, perm: Sequence[int]) -> Design:
    """The design with every vertex x renamed to perm[x] (revalidated)."""
    if sorted(perm) != list(range(d.v)):
        raise ValueError("perm must be a permutation of 0..v-1")
    return new_design(d.v, [[perm[x] for x in b] for b in d.blocks])


def serialize(d: Design) -> str:
    """Canonical text form: 'v k' header, then one sorted block per line."""
    lines = [f"{d.v} {d.k}"]
    lines.extend(" ".join(str(x) for x in b) for b in d.blocks)
    return "\n".join(lines) + "\n"
