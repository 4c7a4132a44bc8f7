"""Design generators: the two reference designs with evenly covering
minimal subdesigns, prime-order planes, and the block-inflation pasting of
one design into the blocks of another.

The two reference designs are embedded verbatim and also shipped as data
files; the files are the source of truth for checksum pinning.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources

from .core import Design, new_design
from .errors import NotPrime, SizeMismatch
from .subdesigns import SubDesign, closure, minimal_subdesigns, wd_profile

__all__ = [
    "PasteRecipe",
    "TransferReport",
    "example_15",
    "example_40",
    "fano_plane",
    "projective_plane",
    "affine_plane",
    "paste",
    "paste_copies",
    "transfer_check",
    "golden_text",
]

_BLOCKS_15 = (
    (0, 1, 2), (0, 3, 4), (0, 5, 6), (0, 7, 8), (0, 9, 10),
    (0, 11, 12), (0, 13, 14), (1, 3, 5), (1, 4, 6), (1, 7, 9),
    (1, 8, 10), (1, 11, 13), (1, 12, 14), (2, 3, 6), (2, 4, 5),
    (2, 7, 10), (2, 8, 9), (2, 11, 14), (2, 12, 13), (3, 7, 11),
    (3, 8, 12), (3, 9, 13), (3, 10, 14), (4, 7, 12), (4, 8, 11),
    (4, 9, 14), (4, 10, 13), (5, 7, 13), (5, 8, 14), (5, 9, 11),
    (5, 10, 12), (6, 7, 14), (6, 8, 13), (6, 9, 12), (6, 10, 11),
)

_BLOCKS_40 = (
    (0, 1, 2, 12), (0, 3, 6, 9), (0, 4, 8, 10), (0, 5, 7, 11),
    (0, 13, 26, 39), (0, 14, 25, 28), (0, 15, 27, 38), (0, 16, 22, 32),
    (0, 17, 23, 34), (0, 18, 24, 33), (0, 19, 29, 35), (0, 20, 31, 37),
    (0, 21, 30, 36), (1, 3, 8, 11), (1, 4, 7, 9), (1, 5, 6, 10),
    (1, 13, 28, 38), (1, 14, 27, 39), (1, 15, 25, 26), (1, 16, 24, 34),
    (1, 17, 22, 33), (1, 18, 23, 32), (1, 19, 31, 36), (1, 20, 30, 35),
    (1, 21, 29, 37), (2, 3, 7, 10), (2, 4, 6, 11), (2, 5, 8, 9),
    (2, 13, 25, 27), (2, 14, 26, 38), (2, 15, 28, 39), (2, 16, 23, 33),
    (2, 17, 24, 32), (2, 18, 22, 34), (2, 19, 30, 37), (2, 20, 29, 36),
    (2, 21, 31, 35), (3, 4, 5, 12), (3, 13, 32, 35), (3, 14, 34, 37),
    (3, 15, 33, 36), (3, 16, 29, 39), (3, 17, 25, 31), (3, 18, 30, 38),
    (3, 19, 22, 26), (3, 20, 23, 28), (3, 21, 24, 27), (4, 13, 34, 36),
    (4, 14, 33, 35), (4, 15, 32, 37), (4, 16, 31, 38), (4, 17, 30, 39),
    (4, 18, 25, 29), (4, 19, 24, 28), (4, 20, 22, 27), (4, 21, 23, 26),
    (5, 13, 33, 37), (5, 14, 32, 36), (5, 15, 34, 35), (5, 16, 25, 30),
    (5, 17, 29, 38), (5, 18, 31, 39), (5, 19, 23, 27), (5, 20, 24, 26),
    (5, 21, 22, 28), (6, 7, 8, 12), (6, 13, 22, 29), (6, 14, 23, 31),
    (6, 15, 24, 30), (6, 16, 26, 35), (6, 17, 28, 37), (6, 18, 27, 36),
    (6, 19, 32, 39), (6, 20, 25, 34), (6, 21, 33, 38), (7, 13, 24, 31),
    (7, 14, 22, 30), (7, 15, 23, 29), (7, 16, 28, 36), (7, 17, 27, 35),
    (7, 18, 26, 37), (7, 19, 34, 38), (7, 20, 33, 39), (7, 21, 25, 32),
    (8, 13, 23, 30), (8, 14, 24, 29), (8, 15, 22, 31), (8, 16, 27, 37),
    (8, 17, 26, 36), (8, 18, 28, 35), (8, 19, 25, 33), (8, 20, 32, 38),
    (8, 21, 34, 39), (9, 10, 11, 12), (9, 13, 16, 19), (9, 14, 17, 20),
    (9, 15, 18, 21), (9, 22, 35, 39), (9, 23, 25, 37), (9, 24, 36, 38),
    (9, 26, 29, 32), (9, 27, 30, 33), (9, 28, 31, 34), (10, 13, 17, 21),
    (10, 14, 18, 19), (10, 15, 16, 20), (10, 22, 37, 38), (10, 23, 36, 39),
    (10, 24, 25, 35), (10, 26, 30, 34), (10, 27, 31, 32), (10, 28, 29, 33),
    (11, 13, 18, 20), (11, 14, 16, 21), (11, 15, 17, 19), (11, 22, 25, 36),
    (11, 23, 35, 38), (11, 24, 37, 39), (11, 26, 31, 33), (11, 27, 29, 34),
    (11, 28, 30, 32), (12, 13, 14, 15), (12, 16, 17, 18), (12, 19, 20, 21),
    (12, 22, 23, 24), (12, 25, 38, 39), (12, 26, 27, 28), (12, 29, 30, 31),
    (12, 32, 33, 34), (12, 35, 36, 37),
)

def example_15() -> Design:
    """The 15-point triple system whose 15 minimal subdesigns of size 7
    cover every vertex 7 times and every block 3 times."""
    return new_design(15, _BLOCKS_15)


def example_40() -> Design:
    """The 40-point quadruple system whose 40 minimal subdesigns of size 13
    cover every vertex 13 times and every block 4 times."""
    return new_design(40, _BLOCKS_40)


def golden_text(name: str) -> str:
    """Contents of a shipped golden design file ('example15'/'example40')."""
    return (
        resources.files("steinerlab.data").joinpath(f"{name}.txt").read_text("utf-8")
    )


def _check_prime(q: int) -> None:
    if q < 2 or any(q % p == 0 for p in range(2, int(q**0.5) + 1)):
        raise NotPrime(f"{q} is not prime (prime powers are out of scope)")


def projective_plane(q: int) -> Design:
    """The plane of order q over the q-element field: a (q^2+q+1, q+1, 1)
    design whose blocks are the homogeneous-coordinate lines."""
    _check_prime(q)
    points = (
        [(1, a, b) for a in range(q) for b in range(q)]
        + [(0, 1, a) for a in range(q)]
        + [(0, 0, 1)]
    )
    index = {p: i for i, p in enumerate(points)}
    blocks = []
    for coeff in points:  # lines are indexed by the dual coordinates
        A, B, C = coeff
        line = [
            index[p]
            for p in points
            if (A * p[0] + B * p[1] + C * p[2]) % q == 0
        ]
        blocks.append(line)
    return new_design(q * q + q + 1, blocks)


def fano_plane() -> Design:
    """The 7-point plane (projective of order 2)."""
    return projective_plane(2)


def affine_plane(q: int) -> Design:
    """The affine plane of order q: a (q^2, q, 1) design of lines
    y = m x + c plus the verticals."""
    _check_prime(q)
    blocks = []
    for m in range(q):
        for c in range(q):
            blocks.append([x * q + (m * x + c) % q for x in range(q)])
    for c in range(q):
        blocks.append([c * q + y for y in range(q)])
    return new_design(q * q, blocks)


SORTED_ORDER = "sorted-order"
SEEDED_SHUFFLE = "seeded-shuffle"


@dataclass(frozen=True)
class PasteRecipe:
    """Inflate every block of `outer` into a relabeled copy of `inner`.

    Requires the outer block size to equal the inner vertex count.  The
    per-block bijection is either the order-preserving one or a seeded
    pseudo-random shuffle (to probe dependence on the choice)."""

    outer: Design
    inner: Design
    bijection_rule: str = SORTED_ORDER
    seed: int = 0

    def __post_init__(self):
        if self.outer.k != self.inner.v:
            raise SizeMismatch(
                f"outer block size {self.outer.k} != inner vertex count {self.inner.v}"
            )
        if self.bijection_rule not in (SORTED_ORDER, SEEDED_SHUFFLE):
            raise ValueError(f"unknown bijection rule {self.bijection_rule!r}")


def _bijections(recipe: PasteRecipe) -> list[tuple[int, ...]]:
    """Image vector per outer block: inner vertex i maps to image[i]."""
    rng = random.Random(recipe.seed)
    out = []
    for blk in recipe.outer.blocks:
        image = list(blk)  # blocks are stored sorted
        if recipe.bijection_rule == SEEDED_SHUFFLE:
            rng.shuffle(image)
        out.append(tuple(image))
    return out


def paste(recipe: PasteRecipe) -> Design:
    """The inflated design on the outer vertex set, fully revalidated."""
    blocks = []
    for image in _bijections(recipe):
        for inner_block in recipe.inner.blocks:
            blocks.append([image[x] for x in inner_block])
    return new_design(recipe.outer.v, blocks)


def paste_copies(pasted: Design, recipe: PasteRecipe) -> list[SubDesign]:
    """The pasted copy of the inner design inside each outer block."""
    copies = []
    for image in _bijections(recipe):
        # the image of an inner block is the unique pasted block through the
        # image of its first pair
        ids = sorted(
            pasted.pair_to_block[tuple(sorted((image[ib[0]], image[ib[1]])))]
            for ib in recipe.inner.blocks
        )
        copies.append(
            SubDesign(vertices=tuple(sorted(image)), block_ids=tuple(ids), parent=pasted)
        )
    return copies


@dataclass(frozen=True)
class TransferReport:
    """Do the inner copies survive pasting as closed, minimal, even cover?"""

    copies_closed: bool
    per_vertex_copy_count: int  # (w-1)/(v-1), checked constant
    minimal_size: int
    minimal_count: int
    minimal_equals_copies: bool
    well_distributed: bool
    m: int | None
    l: int | None


def transfer_check(pasted: Design, recipe: PasteRecipe) -> TransferReport:
    """Verify each copy is a closed subdesign, then enumerate minimal
    subdesigns of the pasted design and report whether minimality and even
    coverage survive (they need not)."""
    copies = paste_copies(pasted, recipe)
    closed = all(c.is_closed() for c in copies)
    for c in copies:
        got = closure(pasted, c.vertices)
        closed = closed and got.vertices == c.vertices

    counts = [0] * pasted.v
    for c in copies:
        for x in c.vertices:
            counts[x] += 1
    assert len(set(counts)) == 1, "copy coverage must be uniform"
    expected = (pasted.v - 1) // (recipe.inner.v - 1)
    assert counts[0] == expected

    subs = minimal_subdesigns(pasted)
    wd = wd_profile(pasted, subs) if subs else None
    copy_sets = {c.vertices for c in copies}
    sub_sets = {s.vertices for s in subs}
    return TransferReport(
        copies_closed=closed,
        per_vertex_copy_count=counts[0],
        minimal_size=subs[0].size if subs else pasted.v,
        minimal_count=len(subs),
        minimal_equals_copies=sub_sets == copy_sets,
        well_distributed=bool(wd and wd.is_well_distributed),
        m=wd.m if wd else None,
        l=wd.l if wd else None,
    )
