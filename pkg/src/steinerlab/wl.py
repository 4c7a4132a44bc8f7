"""Pair colouring of incidence graphs: 2-dimensional colour refinement,
individualization, the triple-system split procedure, and the reduction of
the automorphism problem to the quotient structure of minimal subdesigns.

The refinement state is an (N x N) integer matrix over the nodes of the
bipartite incidence graph (vertices then blocks).  One round recolours each
ordered pair (x, y) with its old colour plus the sorted multiset of colour
pairs (c(x, z), c(z, y)) over all nodes z, then renumbers the distinct
signatures in lexicographic order so runs are reproducible.  Rounds repeat
until the class count stops growing.  The table is quadratic in N and a
round costs O(N^3); inputs beyond N = 2000 nodes are refused rather than
silently thrashing.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import Design
from .errors import (
    GraphTooLarge,
    NotAPermutation,
    NotSteinerTriple,
    NotWellDistributed,
    TableViolation,
)
from .subdesigns import SubDesign, WDProfile, closure, minimal_subdesigns, wd_profile

__all__ = [
    "IncidenceGraph",
    "PairColoring",
    "SplitResult",
    "QuotientDesign",
    "GipClassification",
    "incidence_graph",
    "wl2_refine",
    "individualize",
    "individualize_many",
    "verify_lambda1_stable",
    "steiner3_split",
    "quotient_design",
    "classify_gip_case",
    "automorphism_transfer",
    "find_automorphisms",
]

MAX_NODES = 2000

# colour ids of the reference 9-class partition
VX, BL, BE, DBE, CO, DCO, VS, Z0, Z1 = range(9)
NINE_CLASS_NAMES = (
    "vertex", "block", "belongs", "doesnt_belong", "contains",
    "doesnt_contain", "vertices", "0", "1",
)


@dataclass(frozen=True)
class IncidenceGraph:
    """Bipartite membership graph: nodes 0..v-1 are vertices, v..v+b-1 blocks."""

    v: int
    b: int
    adjacency: np.ndarray = field(repr=False, compare=False)

    @property
    def n_nodes(self) -> int:
        return self.v + self.b

    @property
    def n_edges(self) -> int:
        return int(self.adjacency.sum()) // 2


def incidence_graph(d: Design) -> IncidenceGraph:
    """Build the membership graph and assert the two degree invariants."""
    n = d.v + d.b
    if n > MAX_NODES:
        raise GraphTooLarge(f"{n} nodes exceeds the supported {MAX_NODES}")
    A = np.zeros((n, n), dtype=bool)
    for i, blk in enumerate(d.blocks):
        for x in blk:
            A[x, d.v + i] = True
            A[d.v + i, x] = True
    deg = A.sum(axis=1)
    assert (deg[: d.v] == d.r).all(), "vertex-side degrees must all equal r"
    assert (deg[d.v :] == d.k).all(), "block-side degrees must all equal k"
    return IncidenceGraph(v=d.v, b=d.b, adjacency=A)


@dataclass(frozen=True)
class PairColoring:
    """A stable colouring of ordered node pairs with its refinement trace.

    `rounds` counts the rounds that strictly refined; `history` lists the
    class count before round 1 and after each strict round.  Colour ids are
    contiguous 0..num_classes-1.
    """

    graph: IncidenceGraph
    colors: np.ndarray = field(repr=False, compare=False)  # (N, N) int64
    num_classes: int
    rounds: int
    history: tuple[int, ...]

    def class_sizes(self) -> dict[int, int]:
        ids, counts = np.unique(self.colors, return_counts=True)
        return {int(i): int(c) for i, c in zip(ids, counts)}

    def diagonal_classes(self, side: str = "V") -> set[int]:
        """Distinct colours on the vertex-side or block-side diagonal."""
        v = self.graph.v
        lo, hi = (0, v) if side == "V" else (v, self.graph.n_nodes)
        return {int(self.colors[x, x]) for x in range(lo, hi)}

    def is_discrete_on_vertices(self) -> bool:
        return len(self.diagonal_classes("V")) == self.graph.v


def _initial_coloring(g: IncidenceGraph, seeded: bool) -> np.ndarray:
    N = g.n_nodes
    if seeded:
        # 5 classes: the two diagonal sides, the two edge directions, rest
        C = np.full((N, N), 4, dtype=np.int64)
        C[g.adjacency] = 2
        lower = g.adjacency.copy()
        lower[: g.v, :] = False  # keep only block-to-vertex edges
        C[lower] = 3
        idx = np.arange(N)
        C[idx, idx] = np.where(idx < g.v, 0, 1)
    else:
        # 3 classes: diagonal, edge, non-edge
        C = np.full((N, N), 2, dtype=np.int64)
        C[g.adjacency] = 1
        np.fill_diagonal(C, 0)
    return C


def _round_rows(C: np.ndarray, ncolors: int, chunk: int):
    """Yield (x0, x1, row-bytes list) per chunk of x rows.

    Row = (old colour, sorted codes) in big-endian int64 bytes, so byte
    order equals numeric lexicographic order.
    """
    N = C.shape[0]
    CT = np.ascontiguousarray(C.T)
    for x0 in range(0, N, chunk):
        x1 = min(N, x0 + chunk)
        code = C[x0:x1, None, :] * np.int64(ncolors) + CT[None, :, :]
        code.sort(axis=2)
        rows = np.concatenate([C[x0:x1, :, None], code], axis=2)
        rows = rows.reshape((x1 - x0) * N, N + 1).astype(">i8")
        yield x0, x1, [rows[i].tobytes() for i in range(rows.shape[0])]


def _refine_to_stable(C: np.ndarray, ncolors: int):
    """Iterate rounds until no new class appears; renumber canonically."""
    N = C.shape[0]
    history = [ncolors]
    rounds = 0
    chunk = max(1, min(N, (4 << 20) // max(N * N, 1)))
    while True:
        signatures: set[bytes] = set()
        for _, _, byte_rows in _round_rows(C, ncolors, chunk):
            signatures.update(byte_rows)
        new_n = len(signatures)
        if new_n == ncolors:
            break  # stable: this round split nothing
        assert new_n > ncolors, "refinement must only split classes"
        order = {s: i for i, s in enumerate(sorted(signatures))}
        newC = np.empty_like(C)
        for x0, x1, byte_rows in _round_rows(C, ncolors, chunk):
            vals = np.fromiter(
                (order[s] for s in byte_rows), dtype=np.int64, count=len(byte_rows)
            )
            newC[x0:x1] = vals.reshape(x1 - x0, N)
        C = newC
        ncolors = new_n
        rounds += 1
        history.append(ncolors)
    return C, ncolors, rounds, history


def wl2_refine(
    g: IncidenceGraph,
    init: Optional[PairColoring] = None,
    seeded: bool = False,
) -> PairColoring:
    """Refine pair colours to stability.

    Starts from the 3-class colouring (diagonal / edge / non-edge) unless
    `init` is given; `seeded=True` instead starts from the 5-class variant
    that already distinguishes the two sides (faster, but a different and
    finer starting point).
    """
    if init is not None:
        C, ncolors = init.colors.copy(), init.num_classes
    else:
        C, ncolors = _renumber(_initial_coloring(g, seeded))
    C, ncolors, rounds, history = _refine_to_stable(C, ncolors)
    return PairColoring(
        graph=g, colors=C, num_classes=ncolors, rounds=rounds, history=tuple(history)
    )


def _renumber(C: np.ndarray) -> tuple[np.ndarray, int]:
    uniq, inv = np.unique(C, return_inverse=True)
    return inv.reshape(C.shape).astype(np.int64), len(uniq)


def individualize(c: PairColoring, x: int) -> PairColoring:
    """Fresh unique colour for the diagonal pair (x, x), then re-refine."""
    return individualize_many(c, [x])


def individualize_many(c: PairColoring, nodes: Sequence[int]) -> PairColoring:
    """Individualize several nodes at once, in order, then re-refine.

    Each node gets its own fresh colour, so the given order is part of the
    colouring (mirrors an ordered sequence of individualization choices).
    """
    C = c.colors.copy()
    ncolors = c.num_classes
    n = c.graph.n_nodes
    for i, x in enumerate(nodes):
        if not (0 <= x < n):
            raise ValueError(f"node {x} not in 0..{n - 1}")
        C[x, x] = ncolors + i
    C, ncolors = _renumber(C)
    C, ncolors, rounds, history = _refine_to_stable(C, ncolors)
    return PairColoring(
        graph=c.graph, colors=C, num_classes=ncolors, rounds=rounds,
        history=tuple(history),
    )


def _nine_class_matrix(d: Design) -> np.ndarray:
    """The reference stable partition for unit pair coverage."""
    v, b = d.v, d.b
    N = v + b
    M = np.zeros((v, b), dtype=np.int64)
    for i, blk in enumerate(d.blocks):
        for x in blk:
            M[x, i] = 1
    R = np.full((N, N), VS, dtype=np.int64)
    R[:v, v:] = np.where(M, BE, DBE)
    R[v:, :v] = np.where(M.T, CO, DCO)
    meets = M.T @ M  # block-to-block intersection sizes (0 or 1 off-diagonal)
    R[v:, v:] = np.where(meets, Z1, Z0)
    idx = np.arange(N)
    R[idx, idx] = np.where(idx < v, VX, BL)
    return R


def _nine_class_tables(d: Design) -> dict[int, dict[tuple[int, int], int]]:
    """Triangle-count table per class: for (x, y) in the class, how many z
    realize each (colour(x, z), colour(z, y)) signature."""
    v, b, k, r = d.v, d.b, d.k, d.r
    m1 = k * (v - k) // (k - 1)
    m0 = (v - k * k + k - 1) * (v - k) // (k * (k - 1))
    return {
        VX: {(VX, VX): 1, (VS, VS): v - 1, (BE, CO): r, (DBE, DCO): b - r},
        BL: {(BL, BL): 1, (Z1, Z1): m1, (Z0, Z0): m0, (CO, BE): k, (DCO, DBE): v - k},
        BE: {(VX, BE): 1, (VS, BE): k - 1, (VS, DBE): v - k, (BE, BL): 1,
             (BE, Z1): r - 1, (DBE, Z1): m1 - r + 1, (DBE, Z0): m0},
        DBE: {(VX, DBE): 1, (VS, BE): k, (VS, DBE): v - k - 1, (DBE, BL): 1,
              (BE, Z1): k, (BE, Z0): r - k, (DBE, Z1): m1 - k, (DBE, Z0): m0 - r + k},
        CO: {(BL, CO): 1, (Z1, CO): r - 1, (Z1, DCO): m1 - r + 1, (Z0, DCO): m0,
             (CO, VX): 1, (CO, VS): k - 1, (DCO, VS): v - k},
        DCO: {(BL, DCO): 1, (Z1, CO): k, (Z0, CO): r - k, (Z1, DCO): m1 - k,
              (Z0, DCO): m0 - r + k, (DCO, VX): 1, (CO, VS): k, (DCO, VS): v - k - 1},
        VS: {(VX, VS): 1, (VS, VX): 1, (VS, VS): v - 2, (BE, CO): 1,
             (BE, DCO): r - 1, (DBE, CO): r - 1, (DBE, DCO): b - 2 * r + 1},
        Z0: {(BL, Z0): 1, (Z0, BL): 1, (Z1, Z1): k * k, (Z1, Z0): m1 - k * k,
             (Z0, Z1): m1 - k * k, (Z0, Z0): b - 2 - 2 * m1 + k * k,
             (CO, DBE): k, (DCO, BE): k, (DCO, DBE): v - 2 * k},
        Z1: {(BL, Z1): 1, (Z1, BL): 1, (Z1, Z1): r - 2 + (k - 1) ** 2,
             (Z1, Z0): m1 - r + 1 - (k - 1) ** 2, (Z0, Z1): m1 - r + 1 - (k - 1) ** 2,
             (Z0, Z0): m0 - m1 + r - 1 + (k - 1) ** 2, (CO, BE): 1,
             (CO, DBE): k - 1, (DCO, BE): k - 1, (DCO, DBE): v - 2 * k + 1},
    }


def verify_lambda1_stable(d: Design, c: PairColoring) -> dict:
    """Check the stable colouring against the 9-class reference partition.

    Two facts are verified exactly: (1) the achieved stable colouring is
    coarser than or equal to the reference partition (each reference class
    is monochromatic in it), and (2) for every nonempty reference class the
    full triangle-count table holds at every pair, which is what makes the
    reference partition stable in the first place.
    """
    R = _nine_class_matrix(d)
    N = R.shape[0]
    if c.graph.n_nodes != N:
        raise ValueError("colouring belongs to a different design")

    coarser = {}
    for cls in range(9):
        mask = R == cls
        if not mask.any():
            continue
        achieved = set(np.unique(c.colors[mask]).tolist())
        if len(achieved) != 1:
            raise TableViolation(
                NINE_CLASS_NAMES[cls], "coarseness", 1, sorted(achieved)
            )
        coarser[NINE_CLASS_NAMES[cls]] = achieved.pop()

    tables = _nine_class_tables(d)
    indicators = [(R == g).astype(np.int64) for g in range(9)]
    record = {}
    for cls in range(9):
        mask = R == cls
        if not mask.any():
            record[NINE_CLASS_NAMES[cls]] = None
            continue
        total = np.zeros((N, N), dtype=np.int64)
        entries = {}
        for (g1, g2), expected in tables[cls].items():
            counts = indicators[g1] @ indicators[g2]
            got = np.unique(counts[mask])
            if got.size != 1 or int(got[0]) != expected:
                raise TableViolation(
                    NINE_CLASS_NAMES[cls],
                    (NINE_CLASS_NAMES[g1], NINE_CLASS_NAMES[g2]),
                    expected,
                    got.tolist(),
                )
            entries[(NINE_CLASS_NAMES[g1], NINE_CLASS_NAMES[g2])] = expected
            total += counts
        if not (total[mask] == N).all():
            raise TableViolation(
                NINE_CLASS_NAMES[cls], "totals", N,
                sorted(set(total[mask].ravel().tolist())),
            )
        record[NINE_CLASS_NAMES[cls]] = entries
    return {"coarser_mapping": coarser, "tables": record}


@dataclass(frozen=True)
class SplitResult:
    """Transcript of the triple-system complete-split procedure."""

    individualized: tuple[int, ...]
    discrete_on_vertices: bool
    chain: tuple[int, ...]  # ordered-set sizes at each stall, ending at v
    budget: int  # 1 + ceil(log2 v)


def _smallest_noncollinear_triple(d: Design) -> tuple[int, int, int]:
    for x in range(d.v - 2):
        for y in range(x + 1, d.v - 1):
            blk = d.blocks[d.pair_to_block[(x, y)]]
            for z in range(y + 1, d.v):
                if z not in blk:
                    return (x, y, z)
    raise NotSteinerTriple("every triple lies in one block")  # pragma: no cover


def steiner3_split(
    d: Design,
    initial: Optional[Sequence[int]] = None,
    rng: Optional[random.Random] = None,
    wl_cross_check: bool = False,
) -> SplitResult:
    """Order all vertices of a triple system from few individualizations.

    Starting from three vertices not in one block (each given a fresh
    ordered colour), repeatedly colour the third vertex of every block whose
    other two vertices are already coloured, ordering new colours by the
    colour pair that produced them.  When the coloured set stalls it is a
    closed subdesign (checked); one more vertex is then individualized.  The
    total number of individualized vertices stays below 2 + log2(v).

    With `wl_cross_check`, pair refinement with the same individualization
    sequence is run and must make the vertex diagonal discrete.
    """
    if d.k != 3:
        raise NotSteinerTriple(f"block size is {d.k}, need 3")
    v = d.v
    if initial is None:
        if rng is None:
            initial = _smallest_noncollinear_triple(d)
        else:
            while True:
                cand = tuple(sorted(rng.sample(range(v), 3)))
                blk = d.blocks[d.pair_to_block[(cand[0], cand[1])]]
                if cand[2] not in blk:
                    initial = cand
                    break
    initial = tuple(initial)
    if len(initial) != 3 or len(set(initial)) != 3:
        raise ValueError("need three distinct starting vertices")
    blk = d.blocks[d.pair_to_block[tuple(sorted(initial[:2]))]]
    if initial[2] in blk:
        raise ValueError("starting vertices must not lie in one block")

    order = list(initial)  # position = colour rank
    inside = set(order)
    individualized = list(initial)
    chain = []
    while True:
        grew = True
        while grew:
            grew = False
            candidates: dict[int, tuple[int, int]] = {}
            for j in range(1, len(order)):
                for i in range(j):
                    blk = d.blocks[
                        d.pair_to_block[
                            (order[i], order[j])
                            if order[i] < order[j]
                            else (order[j], order[i])
                        ]
                    ]
                    # λ=1, k=3: exactly one third vertex per pair
                    z = next(t for t in blk if t != order[i] and t != order[j])
                    if z in inside:
                        continue
                    key = (i, j)
                    if z not in candidates or key < candidates[z]:
                        candidates[z] = key
            if candidates:
                for z in sorted(candidates, key=candidates.get):
                    order.append(z)
                    inside.add(z)
                grew = True
        chain.append(len(order))
        if len(order) == v:
            break
        # the stalled set must be a closed subdesign
        stalled = closure(d, sorted(inside))
        assert set(stalled.vertices) == inside, "stall set is not closed"
        y = min(x for x in range(v) if x not in inside)
        order.append(y)
        inside.add(y)
        individualized.append(y)

    budget = 1 + math.ceil(math.log2(v))
    assert len(individualized) < 2 + math.log2(v), "split exceeded its budget"

    discrete = True
    if wl_cross_check:
        g = incidence_graph(d)
        refined = individualize_many(wl2_refine(g), list(individualized))
        discrete = refined.is_discrete_on_vertices()
        assert discrete, "pair refinement did not go discrete on the vertex side"
    return SplitResult(
        individualized=tuple(individualized),
        discrete_on_vertices=discrete,
        chain=tuple(chain),
        budget=budget,
    )


@dataclass(frozen=True)
class QuotientDesign:
    """The incidence structure whose blocks are the minimal subdesigns.

    Pair coverage is exactly m (> 1 allowed), so this is not a unit-coverage
    design and deliberately not a :class:`Design`.
    """

    v: int
    k: int  # = v'
    lam: int  # = m
    blocks: tuple[tuple[int, ...], ...]
    parent_b: int

    @property
    def n(self) -> int:
        return len(self.blocks)

    @property
    def n_less_than_parent_b(self) -> bool:
        return self.n < self.parent_b


def quotient_design(
    d: Design,
    subs: Optional[list[SubDesign]] = None,
    wd: Optional[WDProfile] = None,
) -> QuotientDesign:
    """Build (V, D) from the minimal subdesigns and verify its pair coverage."""
    if subs is None:
        subs = minimal_subdesigns(d)
    if wd is None:
        wd = wd_profile(d, subs)
    if not wd.is_well_distributed:
        raise NotWellDistributed("quotient structure needs even coverage")
    cover = np.zeros((d.v, d.v), dtype=np.int64)
    for s in subs:
        vs = list(s.vertices)
        for i, x in enumerate(vs):
            for y in vs[i + 1 :]:
                cover[x, y] += 1
    off = cover[np.triu_indices(d.v, k=1)]
    assert (off == wd.m).all(), "quotient pair coverage must be exactly m"
    return QuotientDesign(
        v=d.v,
        k=wd.v_prime,
        lam=wd.m,
        blocks=tuple(s.vertices for s in subs),
        parent_b=d.b,
    )


@dataclass(frozen=True)
class GipClassification:
    """Which of the four reduction routes applies to a design."""

    case: str  # "a" | "b" | "c" | "d"
    subs: tuple[SubDesign, ...]
    wd: Optional[WDProfile]
    block_coloring: Optional[tuple[int, ...]]  # case b: per-block coverage counts
    partition: Optional[tuple[tuple[int, ...], ...]]  # case c: block ids per subdesign
    quotient: Optional[QuotientDesign]  # case d


def classify_gip_case(
    d: Design, subs: Optional[list[SubDesign]] = None
) -> GipClassification:
    """(a) no subdesigns; (b) uneven coverage -> canonical block colouring;
    (c) even with m = 1 -> canonical block partition; (d) even with m > 1 ->
    quotient structure."""
    if subs is None:
        subs = minimal_subdesigns(d)
    if not subs:
        return GipClassification(
            case="a", subs=(), wd=None, block_coloring=None, partition=None,
            quotient=None,
        )
    wd = wd_profile(d, subs)
    if not wd.is_well_distributed:
        coloring = wd.block_counts
        assert len(set(coloring)) >= 2, "uneven coverage must colour the blocks"
        return GipClassification(
            case="b", subs=tuple(subs), wd=wd, block_coloring=coloring,
            partition=None, quotient=None,
        )
    if wd.m == 1:
        partition = tuple(s.block_ids for s in subs)
        seen: set[int] = set()
        for part in partition:
            assert seen.isdisjoint(part), "m = 1 must partition the blocks"
            seen.update(part)
        assert len(seen) == d.b
        return GipClassification(
            case="c", subs=tuple(subs), wd=wd, block_coloring=None,
            partition=partition, quotient=None,
        )
    q = quotient_design(d, subs, wd)
    return GipClassification(
        case="d", subs=tuple(subs), wd=wd, block_coloring=None, partition=None,
        quotient=q,
    )


def _check_permutation(pi: Sequence[int], v: int) -> tuple[int, ...]:
    pi = tuple(pi)
    if sorted(pi) != list(range(v)):
        raise NotAPermutation(f"not a bijection of 0..{v - 1}")
    return pi


def automorphism_transfer(
    pi: Sequence[int], d: Design, q: QuotientDesign
) -> tuple[bool, bool]:
    """Whether pi preserves the blocks, and whether it preserves the
    subdesign family.  With m > 1 every block is an intersection of two
    subdesigns and every subdesign is a union of blocks, so the two answers
    are always equal; this equivalence is asserted."""
    pi = _check_permutation(pi, d.v)
    block_set = set(d.blocks)
    on_blocks = all(
        tuple(sorted(pi[x] for x in blk)) in block_set for blk in d.blocks
    )
    sub_set = set(q.blocks)
    on_subs = all(
        tuple(sorted(pi[x] for x in blk)) in sub_set for blk in q.blocks
    )
    if q.lam > 1:
        assert on_blocks == on_subs, "transfer equivalence must hold for m > 1"
    return on_blocks, on_subs


def find_automorphisms(
    d: Design,
    limit: int = 16,
    budget: int = 500_000,
    coloring: Optional[PairColoring] = None,
) -> list[tuple[int, ...]]:
    """Up to `limit` automorphisms by depth-first search, identity first.

    Candidate images are restricted to the source vertex's stable diagonal
    colour class, and partial maps are pruned by forcing consistency of the
    induced block map (the pair -> block structure must transport).  The
    search stops quietly once `budget` image extensions have been tried, so
    the result is a sample, not the full group.
    """
    v = d.v
    if coloring is None:
        coloring = wl2_refine(incidence_graph(d))
    diag = [int(coloring.colors[x, x]) for x in range(v)]
    out: list[tuple[int, ...]] = []
    pi = [-1] * v
    used = [False] * v
    block_map: dict[int, int] = {}
    expansions = 0
    pair_to_block = d.pair_to_block

    def rec(x: int) -> None:
        nonlocal expansions
        if len(out) >= limit or expansions > budget:
            return
        if x == v:
            out.append(tuple(pi))
            return
        for y in range(v):
            if used[y] or diag[y] != diag[x]:
                continue
            expansions += 1
            if expansions > budget:
                return
            added = []
            ok = True
            for u in range(x):
                b1 = pair_to_block[(u, x)]
                b2 = pair_to_block[(pi[u], y) if pi[u] < y else (y, pi[u])]
                prev = block_map.get(b1)
                if prev is None:
                    block_map[b1] = b2
                    added.append(b1)
                elif prev != b2:
                    ok = False
                    break
            if ok:
                pi[x] = y
                used[y] = True
                rec(x + 1)
                pi[x] = -1
                used[y] = False
            for b1 in added:
                del block_map[b1]
            if len(out) >= limit:
                return

    rec(0)
    return out
