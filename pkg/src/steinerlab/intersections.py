"""Exact intersection statistics of the minimal-subdesign family.

Everything here is counted twice: once by brute force over the family, once
through the closed forms that the even-coverage certificate implies.  All
formula evaluation uses exact rationals; comparisons are equalities, never
tolerances.  Empty intersection classes yield absent (None) means, not zero.

Pair counts: for a reference subdesign D1, I_k / I_1 / I_0 count the others
meeting it in k, 1 or 0 vertices.  Triple counts: for an ordered pair
(D1, D2) every third subdesign D is classified by the pattern
(|D & (D1-D2)|, |D & D1 & D2|, |D & (D2-D1)|); the patterns that can occur
are fixed lists of 13 (intersection size 1 or k) or 9 (disjoint) entries,
plus, in the size-k case, the separate class of subdesigns containing the
common block exactly (always m-2 of them).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import Design
from .errors import (
    BadIntersectionSize,
    IdentityViolation,
    NonIntegerResult,
    NotWellDistributed,
    PreconditionUnmet,
)
from .subdesigns import SubDesign, WDProfile

__all__ = [
    "PairStats",
    "TripleProfile",
    "MeanProfile",
    "BoundsReport",
    "pair_stats",
    "triple_profile",
    "all_triple_profiles",
    "verify_connor_sums",
    "solve_dependent_counts",
    "mean_profiles",
    "verify_mean_system",
    "bounds_report",
]

CASE_ONE, CASE_K, CASE_ZERO = "1", "k", "0"

FINE_KEYS = (
    "meets_in_k_containing_x",
    "meets_in_k_avoiding_x",
    "meets_in_k_meeting_block_in_1",
    "meets_in_k_disjoint_from_block",
    "meets_only_in_x",
)


def patterns_for(case: str, k: int) -> tuple[tuple[int, int, int], ...]:
    """The exhaustive (i1, i2, i3) patterns of the given intersection case."""
    if case in (CASE_ONE, CASE_K):
        return (
            (k, 0, k), (k - 1, 1, k - 1), (k, 0, 1), (1, 0, k), (k, 0, 0),
            (0, 0, k), (k - 1, 1, 0), (0, 1, k - 1), (1, 0, 1), (1, 0, 0),
            (0, 0, 1), (0, 1, 0), (0, 0, 0),
        )
    if case == CASE_ZERO:
        return (
            (k, 0, k), (k, 0, 1), (1, 0, k), (k, 0, 0), (0, 0, k),
            (1, 0, 1), (1, 0, 0), (0, 0, 1), (0, 0, 0),
        )
    raise ValueError(f"unknown case {case!r}")


@dataclass(frozen=True)
class PairStats:
    """Intersection counts of one subdesign against the rest of the family."""

    d1: int
    i_k: int
    i_1: int
    i_0: int
    fine: dict  # FINE_KEYS -> count, for the reference vertex/block choice
    x: int
    block_id: int


def _closed_pair_forms(wd: WDProfile) -> dict[str, Fraction]:
    v, k, vp, m = wd.v, wd.k, wd.v_prime, wd.m
    return {
        "i_k": Fraction(vp * (vp - 1) * (m - 1), k * (k - 1)),
        "i_1": vp
        * (
            m * (Fraction(v - 1, vp - 1) - Fraction(vp - 1, k - 1))
            + Fraction(vp - k, k - 1)
        ),
        "i_0": m
        * (
            Fraction((v - 1) * (v - vp * vp), vp * (vp - 1))
            + Fraction(vp * (vp - 1), k)
        )
        - Fraction((vp - 1) * (vp - k), k),
        "meets_in_k_containing_x": Fraction((vp - 1) * (m - 1), k - 1),
        "meets_in_k_avoiding_x": Fraction((vp - 1) * (vp - k) * (m - 1), k * (k - 1)),
        "meets_in_k_meeting_block_in_1": Fraction(k * (vp - k) * (m - 1), k - 1),
        "meets_in_k_disjoint_from_block": Fraction(
            (vp - k * k + k - 1) * (vp - k) * (m - 1), k * (k - 1)
        ),
        "meets_only_in_x": m
        * (Fraction(v - 1, vp - 1) - Fraction(vp - 1, k - 1))
        + Fraction(vp - k, k - 1),
    }


def pair_stats(
    d: Design, subs: Sequence[SubDesign], d1: int, wd: WDProfile
) -> PairStats:
    """Brute-force I_k, I_1, I_0 and the per-vertex / per-block refinements.

    Every count is checked against its closed form, for every choice of
    reference vertex x in D1 and block B inside D1; the returned `fine`
    map reports the first (smallest) choice.
    """
    if not wd.is_well_distributed:
        raise NotWellDistributed("pair statistics need even coverage")
    ref = subs[d1]
    refset = ref.vertex_set()
    forms = _closed_pair_forms(wd)

    i_k = i_1 = i_0 = 0
    meet_k: list[frozenset[int]] = []
    meet_1: list[int] = []
    for j, s in enumerate(subs):
        if j == d1:
            continue
        inter = refset.intersection(s.vertices)
        if len(inter) == d.k:
            i_k += 1
            meet_k.append(inter)
        elif len(inter) == 1:
            i_1 += 1
            meet_1.append(next(iter(inter)))
        elif not inter:
            i_0 += 1
        else:
            raise BadIntersectionSize(
                f"subdesigns {d1} and {j} share {len(inter)} vertices"
            )
    for key, got in (("i_k", i_k), ("i_1", i_1), ("i_0", i_0)):
        if forms[key] != got:
            raise IdentityViolation(key, got, forms[key])
    assert i_k + i_1 + i_0 == len(subs) - 1

    for x in ref.vertices:
        containing = sum(1 for inter in meet_k if x in inter)
        avoiding = i_k - containing
        only_x = sum(1 for y in meet_1 if y == x)
        for key, got in (
            ("meets_in_k_containing_x", containing),
            ("meets_in_k_avoiding_x", avoiding),
            ("meets_only_in_x", only_x),
        ):
            if forms[key] != got:
                raise IdentityViolation(f"{key}[x={x}]", got, forms[key])
    for bid in ref.block_ids:
        blk = set(d.blocks[bid])
        in1 = sum(1 for inter in meet_k if len(blk.intersection(inter)) == 1)
        in0 = sum(1 for inter in meet_k if not blk.intersection(inter))
        for key, got in (
            ("meets_in_k_meeting_block_in_1", in1),
            ("meets_in_k_disjoint_from_block", in0),
        ):
            if forms[key] != got:
                raise IdentityViolation(f"{key}[B={bid}]", got, forms[key])

    x0 = ref.vertices[0]
    b0 = ref.block_ids[0]
    blk0 = set(d.blocks[b0])
    fine_ref = {
        "meets_in_k_containing_x": sum(1 for inter in meet_k if x0 in inter),
        "meets_in_k_avoiding_x": sum(1 for inter in meet_k if x0 not in inter),
        "meets_in_k_meeting_block_in_1": sum(
            1 for inter in meet_k if len(blk0.intersection(inter)) == 1
        ),
        "meets_in_k_disjoint_from_block": sum(
            1 for inter in meet_k if not blk0.intersection(inter)
        ),
        "meets_only_in_x": sum(1 for y in meet_1 if y == x0),
    }
    return PairStats(d1=d1, i_k=i_k, i_1=i_1, i_0=i_0, fine=fine_ref, x=x0, block_id=b0)


@dataclass(frozen=True)
class TripleProfile:
    """Classified third-subdesign counts for one ordered pair (D1, D2)."""

    d1: int
    d2: int
    intersection_size: int
    case: str  # "1", "k" or "0"
    counts: tuple[int, ...]  # aligned with patterns_for(case, k)
    exact_block: Optional[int]  # size-k case only: subdesigns containing D1 & D2
    sums: dict  # raw sums of i1, i2, i3 and their products over all D


def triple_profile(
    d: Design,
    subs: Sequence[SubDesign],
    d1: int,
    d2: int,
    wd: Optional[WDProfile] = None,
) -> TripleProfile:
    """Tally every third subdesign into its (i1, i2, i3) pattern class."""
    if d1 == d2:
        raise ValueError("need two distinct subdesign indices")
    k = d.k
    s1, s2 = subs[d1].vertex_set(), subs[d2].vertex_set()
    inter = s1.intersection(s2)
    i = len(inter)
    if i not in (0, 1, k):
        raise BadIntersectionSize(f"|D1 & D2| = {i} not in {{0, 1, {k}}}")
    case = CASE_ZERO if i == 0 else (CASE_ONE if i == 1 else CASE_K)
    only1 = s1 - s2
    only2 = s2 - s1
    pats = patterns_for(case, k)
    index = {p: n for n, p in enumerate(pats)}
    counts = [0] * len(pats)
    exact_block = 0
    sums = {key: 0 for key in ("i1", "i3", "i1sq", "i3sq", "i2", "i1i2", "i2i3", "i1i3")}
    for j, s in enumerate(subs):
        if j in (d1, d2):
            continue
        vs = s.vertex_set()
        a = len(vs.intersection(only1))
        b = len(vs.intersection(inter))
        c = len(vs.intersection(only2))
        sums["i1"] += a
        sums["i3"] += c
        sums["i1sq"] += a * a
        sums["i3sq"] += c * c
        sums["i2"] += b
        sums["i1i2"] += a * b
        sums["i2i3"] += b * c
        sums["i1i3"] += a * c
        if case == CASE_K and b == k:
            exact_block += 1
            continue
        try:
            counts[index[(a, b, c)]] += 1
        except KeyError:
            raise BadIntersectionSize(
                f"pattern {(a, b, c)} for subdesign {j} against ({d1}, {d2})"
            ) from None
    n = len(subs)
    if case == CASE_K:
        assert sum(counts) + exact_block == n - 2
        if wd is not None and wd.is_well_distributed:
            assert exact_block == wd.m - 2
    else:
        assert sum(counts) == n - 2
        exact_block = None
    return TripleProfile(
        d1=d1,
        d2=d2,
        intersection_size=i,
        case=case,
        counts=tuple(counts),
        exact_block=exact_block,
        sums=sums,
    )


def all_triple_profiles(
    d: Design, subs: Sequence[SubDesign], wd: Optional[WDProfile] = None
) -> list[TripleProfile]:
    """Profiles of every ordered pair of distinct subdesigns."""
    n = len(subs)
    return [
        triple_profile(d, subs, a, b, wd)
        for a in range(n)
        for b in range(n)
        if a != b
    ]


def _connor_rhs(wd: WDProfile, i: int) -> dict[str, Fraction]:
    v, vp, m = wd.v, wd.v_prime, wd.m
    l = Fraction(m * (v - 1), vp - 1)
    s1 = (vp - i) * (l - 1)
    s11 = (vp - i) * (m * (Fraction(v - 1, vp - 1) + vp - i - 1) - vp + i)
    s12 = i * (vp - i) * (m - 1)
    return {
        "i1": s1,
        "i3": s1,
        "i1sq": s11,
        "i3sq": s11,
        "i2": i * (l - 2),
        "i1i2": s12,
        "i2i3": s12,
        "i1i3": (vp - i) ** 2 * m,
    }


def verify_connor_sums(profile: TripleProfile, wd: WDProfile) -> dict:
    """Check the linear/quadratic sum identities on one profile, exactly."""
    if not wd.is_well_distributed:
        raise NotWellDistributed("sum identities need even coverage")
    rhs = _connor_rhs(wd, profile.intersection_size)
    record = {}
    for key, want in rhs.items():
        got = profile.sums[key]
        if Fraction(got) != want:
            raise IdentityViolation(f"sum {key} (pair {profile.d1},{profile.d2})", got, want)
        record[key] = got
    return record


def _as_int(x: Fraction, label: str) -> int:
    if x.denominator != 1:
        raise NonIntegerResult(f"{label} evaluated to {x}")
    return int(x)


def _ratio(a, b):
    """Exact quotient: Fraction for ints, plain division otherwise (keeps
    the closed forms evaluable with other exact scalar types)."""
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


def solve_dependent_counts(free: Sequence[int], wd: WDProfile, case: str) -> tuple[int, ...]:
    """Full pattern-count vector from the free head counts.

    free = first 4 counts for the size-1 and size-k cases, first 3 for the
    disjoint case.  Every dependent entry is evaluated with exact rationals
    and must come out a nonnegative integer.
    """
    vec = dependent_count_formulas(free, wd, case)
    out = tuple(_as_int(x, f"count #{idx + 1} ({case})") for idx, x in enumerate(vec))
    if any(x < 0 for x in out):
        raise NonIntegerResult(f"negative dependent count in {out}")
    return out


def dependent_count_formulas(
    free: Sequence, wd: WDProfile, case: str
) -> tuple[Fraction, ...]:
    """The closed-form full vector as exact rationals (no integrality check)."""
    v, k, vp, m = wd.v, wd.k, wd.v_prime, wd.m
    F = _ratio
    coerce = lambda x: Fraction(x) if isinstance(x, int) else x
    if case == CASE_ONE:
        a1, a2, a3, a4 = (coerce(x) for x in free)
        head = F((m - 1) * (vp - 1) * (vp - k), k * (k - 1))
        shared = m * (v - 1 - F(k * (vp - 1) ** 2, k - 1)) + F(
            (vp - 1) * (vp - k), k - 1
        )
        vec = [
            a1, a2, a3, a4,
            head - a1 - a3,
            head - a1 - a4,
            F((m - 1) * (vp - 1), k - 1) - a2,
            F((m - 1) * (vp - 1), k - 1) - a2,
            m * (vp - 1) ** 2 - k * k * a1 - (k - 1) ** 2 * a2 - k * a3 - k * a4,
            shared + k * k * a1 + (k - 1) ** 2 * a2 + k * a3 + (k - 1) * a4,
            shared + k * k * a1 + (k - 1) ** 2 * a2 + (k - 1) * a3 + k * a4,
            m * (F(v - 1, vp - 1) - 2 * F(vp - 1, k - 1)) + 2 * F(vp - k, k - 1) + a2,
            m
            * (
                F(v * (v - 1), vp * (vp - 1))
                + (vp - 1) ** 2
                + F(v - 1, vp - 1)
                - 2 * vp * (F(v - 1, vp - 1) - F(vp - 1, k))
            )
            - 2 * F((vp - 1) * (vp - k), k)
            - (k * k - 1) * a1
            - (k - 1) ** 2 * a2
            - (k - 1) * a3
            - (k - 1) * a4,
        ]
    elif case == CASE_K:
        c1, c2, c3, c4 = (coerce(x) for x in free)
        head = F((m - 1) * (vp - k) * (vp - k * k + k - 1), k * (k - 1))
        shared = m * (vp - k) * (
            F(v - 1, vp - 1) - F(k * vp - k * k + k - 1, k - 1)
        ) + F((vp - k) ** 2, k - 1)
        vec = [
            c1, c2, c3, c4,
            head - c1 - c3,
            head - c1 - c4,
            F(k * (m - 1) * (vp - k), k - 1) - c2,
            F(k * (m - 1) * (vp - k), k - 1) - c2,
            m * (vp - k) ** 2 - k * k * c1 - (k - 1) ** 2 * c2 - k * c3 - k * c4,
            shared + k * k * c1 + (k - 1) ** 2 * c2 + k * c3 + (k - 1) * c4,
            shared + k * k * c1 + (k - 1) ** 2 * c2 + (k - 1) * c3 + k * c4,
            m * k * (F(v - 1, vp - 1) - 2 * F(vp - k, k - 1) - 1)
            + 2 * k * F(vp - k, k - 1)
            + c2,
            m
            * (
                1
                - k
                + F(v * (v - 1), vp * (vp - 1))
                + (vp - k) ** 2
                + k * F(v - 1, vp - 1)
                - 2 * vp * (F(v - 1, vp - 1) - F(vp - 1, k))
            )
            - 2 * F((vp - 1) * (vp - k), k)
            - (k * k - 1) * c1
            - (k - 1) ** 2 * c2
            - (k - 1) * c3
            - (k - 1) * c4,
        ]
    elif case == CASE_ZERO:
        e1, e2, e3 = (coerce(x) for x in free)
        head = F((m - 1) * vp * (vp - 1), k * (k - 1))
        shared = m * vp * (F(v - 1, vp - 1) - F(k * vp - 1, k - 1)) + F(
            vp * (vp - k), k - 1
        )
        vec = [
            e1, e2, e3,
            head - e1 - e2,
            head - e1 - e3,
            m * vp * vp - k * k * e1 - k * e2 - k * e3,
            shared + k * k * e1 + k * e2 + (k - 1) * e3,
            shared + k * k * e1 + (k - 1) * e2 + k * e3,
            m
            * (
                F(v * (v - 1), vp * (vp - 1))
                + vp * vp
                - 2 * vp * (F(v - 1, vp - 1) - F(vp - 1, k))
            )
            - 2 * F((vp - 1) * (vp - k), k)
            - (k * k - 1) * e1
            - (k - 1) * e2
            - (k - 1) * e3,
        ]
    else:
        raise ValueError(f"unknown case {case!r}")
    return tuple(vec)


# mirror-symmetric mean pairs: (3,4), (5,6), (7,8), (10,11) for the 13-class
# cases, (2,3), (4,5), (7,8) for the disjoint case (1-based positions)
SYMMETRIC_PAIRS_13 = ((2, 3), (4, 5), (6, 7), (9, 10))
SYMMETRIC_PAIRS_9 = ((1, 2), (3, 4), (6, 7))

# cross-class identities on class sums (1-based mean indices):
#   sum_a[i] == sum_c[j], etc.
CROSS_A_C = ((1, 3), (2, 7), (3, 9), (5, 10), (7, 12))
CROSS_A_E = ((5, 2), (10, 6), (13, 7))
CROSS_C_E = ((5, 1), (13, 4))


@dataclass(frozen=True)
class MeanProfile:
    """Exact class-count means over ordered pairs, per intersection case.

    Means of empty classes are None.  max entries track the largest count
    observed per pattern (for the per-pair upper bounds)."""

    pairs_1: int
    pairs_k: int
    pairs_0: int
    a_sums: tuple[int, ...]
    c_sums: tuple[int, ...]
    e_sums: tuple[int, ...]
    a_means: tuple[Optional[Fraction], ...]
    c_means: tuple[Optional[Fraction], ...]
    e_means: tuple[Optional[Fraction], ...]
    a_max: tuple[Optional[int], ...]
    c_max: tuple[Optional[int], ...]
    e_max: tuple[Optional[int], ...]


def mean_profiles(
    d: Design,
    subs: Sequence[SubDesign],
    wd: WDProfile,
    profiles: Optional[Sequence[TripleProfile]] = None,
) -> MeanProfile:
    """Sweep all ordered pairs, then form exact per-class means.

    The mirror symmetries between pattern positions and the cross-class sum
    identities are asserted on the way (they hold with both sides zero when
    a class is empty).
    """
    if profiles is None:
        profiles = all_triple_profiles(d, subs, wd)
    sums = {CASE_ONE: [0] * 13, CASE_K: [0] * 13, CASE_ZERO: [0] * 9}
    maxes = {CASE_ONE: [0] * 13, CASE_K: [0] * 13, CASE_ZERO: [0] * 9}
    npairs = {CASE_ONE: 0, CASE_K: 0, CASE_ZERO: 0}
    for p in profiles:
        npairs[p.case] += 1
        acc = sums[p.case]
        mx = maxes[p.case]
        for idx, cnt in enumerate(p.counts):
            acc[idx] += cnt
            if cnt > mx[idx]:
                mx[idx] = cnt

    def finish(case):
        cnt = npairs[case]
        if cnt == 0:
            none = tuple(None for _ in sums[case])
            return tuple(sums[case]), none, none
        means = tuple(Fraction(s, cnt) for s in sums[case])
        return tuple(sums[case]), means, tuple(maxes[case])

    a_sums, a_means, a_max = finish(CASE_ONE)
    c_sums, c_means, c_max = finish(CASE_K)
    e_sums, e_means, e_max = finish(CASE_ZERO)

    for i, j in SYMMETRIC_PAIRS_13:
        if a_sums[i] != a_sums[j]:
            raise IdentityViolation(f"a[{i + 1}] = a[{j + 1}]", a_sums[i], a_sums[j])
        if c_sums[i] != c_sums[j]:
            raise IdentityViolation(f"c[{i + 1}] = c[{j + 1}]", c_sums[i], c_sums[j])
    for i, j in SYMMETRIC_PAIRS_9:
        if e_sums[i] != e_sums[j]:
            raise IdentityViolation(f"e[{i + 1}] = e[{j + 1}]", e_sums[i], e_sums[j])
    for i, j in CROSS_A_C:
        if a_sums[i - 1] != c_sums[j - 1]:
            raise IdentityViolation(f"sum a[{i}] = sum c[{j}]", a_sums[i - 1], c_sums[j - 1])
    for i, j in CROSS_A_E:
        if a_sums[i - 1] != e_sums[j - 1]:
            raise IdentityViolation(f"sum a[{i}] = sum e[{j}]", a_sums[i - 1], e_sums[j - 1])
    for i, j in CROSS_C_E:
        if c_sums[i - 1] != e_sums[j - 1]:
            raise IdentityViolation(f"sum c[{i}] = sum e[{j}]", c_sums[i - 1], e_sums[j - 1])

    return MeanProfile(
        pairs_1=npairs[CASE_ONE],
        pairs_k=npairs[CASE_K],
        pairs_0=npairs[CASE_ZERO],
        a_sums=a_sums,
        c_sums=c_sums,
        e_sums=e_sums,
        a_means=a_means,
        c_means=c_means,
        e_means=e_means,
        a_max=a_max,
        c_max=c_max,
        e_max=e_max,
    )


def global_mean_system(
    a1: Fraction, a2: Fraction, a3: Fraction, wd: WDProfile
) -> dict[str, Fraction]:
    """Every dependent mean as a function of the three free means.

    Valid only when all three intersection sizes occur (I_1, I_k, I_0 > 0).
    """
    v, k, vp, m = wd.v, wd.k, wd.v_prime, wd.m
    F = Fraction
    forms = _closed_pair_forms(wd)
    I1, Ik, I0 = forms["i_1"], forms["i_k"], forms["i_0"]
    out = {}
    out["a5"] = F((m - 1) * (vp - 1) * (vp - k), k * (k - 1)) - a1 - a3
    out["a7"] = F((m - 1) * (vp - 1), k - 1) - a2
    out["a9"] = m * (vp - 1) ** 2 - k * k * a1 - (k - 1) ** 2 * a2 - 2 * k * a3
    out["a10"] = (
        m * (v - 1 - F(k * (vp - 1) ** 2, k - 1))
        + F((vp - 1) * (vp - k), k - 1)
        + k * k * a1
        + (k - 1) ** 2 * a2
        + (2 * k - 1) * a3
    )
    out["a12"] = (
        m * (F(v - 1, vp - 1) - 2 * F(vp - 1, k - 1)) + 2 * F(vp - k, k - 1) + a2
    )
    out["a13"] = (
        m
        * (
            F(v * (v - 1), vp * (vp - 1))
            + (vp - 1) ** 2
            + F(v - 1, vp - 1)
            - 2 * vp * (F(v - 1, vp - 1) - F(vp - 1, k))
        )
        - 2 * F((vp - 1) * (vp - k), k)
        - (k * k - 1) * a1
        - (k - 1) ** 2 * a2
        - 2 * (k - 1) * a3
    )
    out["c1"] = F(vp - k, k) * (m * F(vp - k * k, k) + k - 1) + I1 / (
        k * k * Ik
    ) * (-2 * k * a1 + (k - 1) ** 2 * a2 - a3)
    out["c2"] = F(k * (m - 1) * (vp - k), k - 1) - I1 / Ik * a2
    out["c3"] = I1 / Ik * a1
    out["c5"] = F((m - k) * (vp - k) ** 2, k * k * (k - 1)) + I1 / (k * k * Ik) * (
        -k * (k - 2) * a1 - (k - 1) ** 2 * a2 + a3
    )
    out["c7"] = I1 / Ik * a2
    out["c9"] = I1 / Ik * a3
    out["c10"] = I1 * (F(vp - k, vp) - (a1 + a3) / Ik)
    out["c12"] = I1 * (F(k, vp) - a2 / Ik)
    out["c13"] = (
        m
        * (
            1
            - k
            + F(v * (v - 1), vp * (vp - 1))
            + F((vp - k) * (vp - k * k), k * k)
            + k * F(v - 1, vp - 1)
            - 2 * vp * (F(v - 1, vp - 1) - F(vp - 1, k))
        )
        - F((2 * vp - k - 1) * (vp - k), k)
        + (k - 1) * I1 / (k * k * Ik) * (2 * k * a1 + (k - 1) * a2 + (k + 1) * a3)
    )
    out["e1"] = F((m - k) * (vp - k) ** 2, k * k * (k - 1)) * Ik / I0 + I1 / (
        k * k * I0
    ) * (-k * (k - 2) * a1 - (k - 1) ** 2 * a2 + a3)
    out["e2"] = I1 / I0 * (F((m - 1) * (vp - 1) * (vp - k), k * (k - 1)) - a1 - a3)
    out["e4"] = Ik * (
        1
        - (vp - k)
        / I0
        * (
            m
            * (
                F(v - 1, vp - 1)
                - F(vp - 1, k - 1)
                + F(vp - k, k * k * (k - 1))
            )
            + F(vp - k, k)
        )
    ) + (k - 1) * I1 / (k * k * I0) * (2 * k * a1 + (k - 1) * a2 + (k + 1) * a3)
    out["e6"] = (
        m * vp * vp
        - k
        * (vp - k)
        * Ik
        / I0
        * (
            m
            * (
                2 * F(v - 1, vp - 1)
                - 2 * F(vp - 1, k - 1)
                + F(vp - k, k * (k - 1))
            )
            + F(vp - k, k - 1)
        )
        + I1 / I0 * (k * k * a1 + (k - 1) ** 2 * a2 + (2 * k - 1) * a3)
    )
    out["e7"] = (
        (vp - k)
        * Ik
        / I0
        * (m * ((2 * k - 1) * F(v - 1, vp - 1) - 2 * vp + 1) + vp - k)
        + m * vp * (F(v - 1, vp - 1) - F(k * vp - 1, k - 1))
        + F(vp * (vp - k), k - 1)
        - (k - 1) * I1 / I0 * ((k + 1) * a1 + (k - 1) * a2 + 2 * a3)
    )
    out["e9"] = (
        m
        * (
            F(v * (v - 1), vp * (vp - 1))
            + vp * vp
            - 2 * vp * (F(v - 1, vp - 1) - F(vp - 1, k))
        )
        - 2 * F((vp - 1) * (vp - k), k)
        - (k - 1)
        * (vp - k)
        * Ik
        / I0
        * (m * (2 * F(v - 1, vp - 1) - F((2 * k + 1) * vp - k, k * k)) + F(vp - k, k))
        + (k - 1) ** 2
        * I1
        / (k * k * I0)
        * (k * (k + 2) * a1 + (k * k - 1) * a2 + (2 * k + 1) * a3)
    )
    return out


def verify_mean_system(mp: MeanProfile, wd: WDProfile) -> dict:
    """Check every dependent mean against the three free means, exactly.

    Requires all three intersection sizes to occur; raises PreconditionUnmet
    naming the first empty class otherwise.
    """
    for name, cnt in (("I_1", mp.pairs_1), ("I_k", mp.pairs_k), ("I_0", mp.pairs_0)):
        if cnt == 0:
            raise PreconditionUnmet(f"{name} = 0 (no pairs in that class)")
    a1, a2, a3 = mp.a_means[0], mp.a_means[1], mp.a_means[2]
    want = global_mean_system(a1, a2, a3, wd)
    got = {}
    for name, expect in want.items():
        family = {"a": mp.a_means, "c": mp.c_means, "e": mp.e_means}[name[0]]
        actual = family[int(name[1:]) - 1]
        if actual != expect:
            raise IdentityViolation(f"mean {name}", actual, expect)
        got[name] = actual
    return got


@dataclass(frozen=True)
class BoundsReport:
    """Evaluation of every size/mean bound on the computed statistics."""

    m_basic_bound: Fraction
    m_basic_holds: bool
    v_regime: str  # "small" | "large" | "indeterminate" | "not-applicable"
    small_v_applicable: bool
    m_small_v_bound: Optional[Fraction]
    m_small_v_holds: Optional[bool]
    per_pair_bounds: dict  # name -> (bound, observed max, holds); None max if class empty
    mean_bounds: Optional[dict]  # corollary min/max on free means, when defined
    n_less_b: str  # "proved-case-1" | "proved-case-2" | "unproved"
    n_less_b_actual: bool

    @property
    def all_hold(self) -> bool:
        ok = self.m_basic_holds and (self.m_small_v_holds is not False)
        ok = ok and all(
            h for (_, mx, h) in self.per_pair_bounds.values() if mx is not None
        )
        if self.mean_bounds:
            ok = ok and all(rec["holds"] for rec in self.mean_bounds.values())
        return ok


def _v_regime(v: int, vp: int, k: int) -> str:
    """Which side of the size dichotomy v falls on (defined for k >= 4).

    small:  v < (1 - sqrt(1 - 4/k)) vp^2 / 2 + 1/2
    large:  v > (1 + sqrt(1 - 4/k)) vp^2 / 2 + 1/2
    Compared exactly by squaring: with t = (2v - 1)/vp^2, small means
    1 - t > 0 and (1 - t)^2 > 1 - 4/k; large means t - 1 > 0 and
    (t - 1)^2 > 1 - 4/k.
    """
    if k < 4:
        return "not-applicable"
    t = Fraction(2 * v - 1, vp * vp)
    disc = 1 - Fraction(4, k)
    if 1 - t > 0 and (1 - t) ** 2 > disc:
        return "small"
    if t - 1 > 0 and (t - 1) ** 2 > disc:
        return "large"
    return "indeterminate"


def bounds_report(
    d: Design, wd: WDProfile, mp: MeanProfile
) -> BoundsReport:
    """Evaluate all bounds: the basic m bound, the small-v refinement, the
    per-pair pattern-count caps, the corollary mean window, and the n < b
    classification."""
    if not wd.is_well_distributed:
        raise NotWellDistributed("bounds need even coverage")
    v, k = d.v, d.k
    vp, m, n = wd.v_prime, wd.m, wd.n
    F = Fraction

    m_basic = F(v - k, vp - k)
    small_applicable = v < F((vp - 1) ** 2, k - 1) + 1
    if small_applicable:
        m_small = F(vp - k, k - 1) / (F(vp - 1, k - 1) - F(v - 1, vp - 1))
        m_small_holds = m <= m_small
    else:
        m_small = None
        m_small_holds = None

    floor_div = lambda p, q: p // q
    caps = {
        "a1": F((vp - 1) * (vp - k), k * (k - 1)) * floor_div(vp - 1, k),
        "a2": F((vp - 1) ** 2, (k - 1) ** 2),
        "a3": F((vp - 1) ** 2 * (vp - k), k * (k - 1)),
        "c1": F((vp - k * k + k - 1) * (vp - k), k * (k - 1)) * floor_div(vp - k, k),
        "c2": F(k * (vp - k) ** 2, (k - 1) ** 2),
        "c3": F((vp - k * k + k - 1) * (vp - k) ** 2, k * (k - 1)),
        "e1": F(vp * (vp - 1), k * (k - 1)) * floor_div(vp, k),
        "e2": F(vp * vp * (vp - 1), k * (k - 1)),
    }
    observed = {
        "a1": mp.a_max[0], "a2": mp.a_max[1], "a3": mp.a_max[2],
        "c1": mp.c_max[0], "c2": mp.c_max[1], "c3": mp.c_max[2],
        "e1": mp.e_max[0], "e2": mp.e_max[1],
    }
    per_pair = {
        name: (caps[name], observed[name],
               True if observed[name] is None else observed[name] <= caps[name])
        for name in caps
    }

    mean_bounds = None
    if mp.pairs_1 and mp.pairs_k and mp.pairs_0:
        forms = _closed_pair_forms(wd)
        I1, Ik, I0 = forms["i_1"], forms["i_k"], forms["i_0"]
        a1, a2, a3 = mp.a_means[0], mp.a_means[1], mp.a_means[2]
        r = Ik / I1
        upper_a1 = min(caps["a1"], r * F((vp - k * k + k - 1) * (vp - k) ** 2, k * (k - 1)))
        lower_a2 = max(F(0), r * F(k * (vp - k), k - 1) * (m - F(vp - 1, k - 1)))
        upper_a2 = min(
            caps["a2"], F((m - 1) * (vp - 1), k - 1), r * F(k * (vp - k) * (m - 1), k - 1)
        )
        lower_a13 = max(
            F(0),
            F(vp - 1, k * (k - 1)) * ((m - 1) * (vp - k) - I0 / I1 * vp * vp),
        )
        upper_a13 = F((vp - 1) * (vp - k), k * (k - 1)) * min(
            floor_div(vp - 1, k) + vp - 1,
            r * F((vp - k * k + k - 1) * (vp - k), vp - 1) + vp - 1,
            F(m - 1),
        )
        mean_bounds = {
            "a1": {"value": a1, "upper": upper_a1, "holds": a1 <= upper_a1},
            "a2": {
                "value": a2,
                "lower": lower_a2,
                "upper": upper_a2,
                "holds": lower_a2 <= a2 <= upper_a2,
            },
            "a1+a3": {
                "value": a1 + a3,
                "lower": lower_a13,
                "upper": upper_a13,
                "holds": lower_a13 <= a1 + a3 <= upper_a13,
            },
        }

    if mp.pairs_1 == 0:
        classification = "proved-case-1"
    elif vp > k * k - k + 1 and mp.pairs_0 == 0:
        classification = "proved-case-2"
    else:
        classification = "unproved"

    return BoundsReport(
        m_basic_bound=m_basic,
        m_basic_holds=m <= m_basic,
        v_regime=_v_regime(v, vp, k),
        small_v_applicable=small_applicable,
        m_small_v_bound=m_small,
        m_small_v_holds=m_small_holds,
        per_pair_bounds=per_pair,
        mean_bounds=mean_bounds,
        n_less_b=classification,
        n_less_b_actual=n < d.b,
    )
