"""Double cycle D_n, proper mappings and quasi-intervals.

Points (x, y) of D_n = Z_n x {0, 1} are encoded as bit ``2x + y``, the same
layout as vertex sets of M_n, so a proper mapping acts as a bit permutation
that moves whole 2-bit columns and optionally swaps the two bits inside.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations, product
from math import factorial
from typing import Iterator, NamedTuple

import numpy as np

from .errors import CapExceeded, CountingError, RangeViolated
from .family import (
    Family,
    FamilyElement,
    MatchingParams,
    classify,
    enumerate_family,
    family_size,
    is_intersecting,
    star,
)
from .search import IntersectionGraph, max_clique

DEFAULT_MAPPING_CAP = 6


class DoubleCyclePoint(NamedTuple):
    x: int
    y: int

    @property
    def bit(self) -> int:
        return 2 * self.x + self.y


def points_of(mask: int) -> list[DoubleCyclePoint]:
    out = []
    b = 0
    while mask:
        if mask & 1:
            out.append(DoubleCyclePoint(*divmod(b, 2)))
        mask >>= 1
        b += 1
    return out


def points_mask(points, n: int) -> int:
    mask = 0
    for x, y in points:
        mask |= 1 << (2 * (x % n) + y)
    return mask


@dataclass(frozen=True)
class QuasiInterval:
    index: int
    points: int

    def __len__(self) -> int:
        return self.points.bit_count()

    def point_list(self) -> list[DoubleCyclePoint]:
        return points_of(self.points)


def _run(start: int, stop: int, row: int, n: int) -> int:
    """Row ``row`` at columns start..stop inclusive (mod n); empty when stop < start."""
    mask = 0
    for x in range(start, stop + 1):
        mask |= 1 << (2 * (x % n) + row)
    return mask


def quasi_intervals(params: MatchingParams) -> list[QuasiInterval]:
    n, p, k = params.n, params.p, params.k
    out = []
    if params.s % 2 == 0:
        for i in range(n):
            pts = _run(i - k, i + p - 1, 0, n) | _run(i, i + p + k - 1, 1, n)
            out.append(QuasiInterval(i, pts))
    else:
        for i in range(n):
            even = _run(i - k - 1, i + p - 1, 0, n) | _run(i, i + p + k - 1, 1, n)
            odd = _run(i - k, i + p - 1, 0, n) | _run(i, i + p + k, 1, n)
            out.append(QuasiInterval(2 * i, even))
            out.append(QuasiInterval(2 * i + 1, odd))
    size = params.set_size
    for b in out:
        if len(b) != size:
            raise AssertionError(f"quasi-interval B_{b.index} has {len(b)} points, expected {size}")
    return out


def _circular_distance(i: int, j: int, modulus: int) -> int:
    d = (i - j) % modulus
    return min(d, modulus - d)


@dataclass(frozen=True)
class QuasiPattern:
    params: MatchingParams
    matrix: tuple[tuple[bool, ...], ...]  # matrix[i][j]: B_i meets B_j
    reach: int  # claimed: i != j meet iff circular distance <= reach
    mismatches: tuple[tuple[int, int], ...]
    disjoint_failures: tuple[tuple[int, int], ...]

    @property
    def verdict(self) -> bool:
        return not self.mismatches and not self.disjoint_failures


def quasi_intersection_pattern(params: MatchingParams, check_range: bool = True) -> QuasiPattern:
    """Compare the full meet/miss matrix of the quasi-intervals with the claimed pattern.

    Even s: B_i meets B_j iff their circular index distance (mod n) is at
    most p+k-1, and B_{i-p-k+c}, B_{i+c} are disjoint for c = 1..p+k-1.
    Odd s: the same with distance (mod 2n) at most 2p+2k, and disjoint pairs
    B_{i-2p-2k-1+c}, B_{i+c} for c = 1..2p+2k.
    """
    if check_range and not params.ekr_range:
        raise RangeViolated(f"pattern is only claimed for n >= 2p+s, got {params}")
    qs = quasi_intervals(params)
    q = len(qs)
    p, k = params.p, params.k
    if params.s % 2 == 0:
        reach, gap, cs = p + k - 1, p + k, range(1, p + k)
    else:
        reach, gap, cs = 2 * p + 2 * k, 2 * p + 2 * k + 1, range(1, 2 * p + 2 * k + 1)
    matrix = tuple(
        tuple(i != j and bool(qs[i].points & qs[j].points) for j in range(q)) for i in range(q)
    )
    mismatches = tuple(
        (i, j)
        for i in range(q)
        for j in range(q)
        if i != j and matrix[i][j] != (_circular_distance(i, j, q) <= reach)
    )
    disjoint_failures = tuple(
        ((i - gap + c) % q, (i + c) % q)
        for i in range(q)
        for c in cs
        if qs[(i - gap + c) % q].points & qs[(i + c) % q].points
    )
    return QuasiPattern(params, matrix, reach, mismatches, disjoint_failures)


def quasi_cap(params: MatchingParams) -> int:
    """Claimed largest intersecting subcollection: p+k (even s) or 2p+s (odd s)."""
    return params.p + params.k if params.s % 2 == 0 else params.set_size


def max_intersecting_quasi(
    params: MatchingParams, check_range: bool = True
) -> tuple[int, tuple[int, ...]]:
    """Exact size and witness labels of the largest intersecting set of quasi-intervals."""
    if check_range and not params.ekr_range:
        raise RangeViolated(f"bound is only claimed for n >= 2p+s, got {params}")
    qs = quasi_intervals(params)
    rows = []
    for i, a in enumerate(qs):
        row = 0
        for j, b in enumerate(qs):
            if i != j and a.points & b.points:
                row |= 1 << j
        rows.append(row)
    result = max_clique(IntersectionGraph.from_rows(rows))
    return result.size, tuple(qs[i].index for i in result.witness)


@dataclass(frozen=True)
class ProperMapping:
    """Bijection V(M_n) -> D_n sending column i onto D_n column ``column_perm[i]``.

    ``orientation[i]`` False puts a_i on row 0 and b_i on row 1; True swaps them.
    """

    column_perm: tuple[int, ...]
    orientation: tuple[bool, ...]

    def __post_init__(self):
        n = len(self.column_perm)
        if sorted(self.column_perm) != list(range(n)) or len(self.orientation) != n:
            raise ValueError(f"not a proper mapping: {self}")

    @classmethod
    def identity(cls, n: int) -> ProperMapping:
        return cls(tuple(range(n)), (False,) * n)

    @property
    def n(self) -> int:
        return len(self.column_perm)

    def target(self, vertex: int) -> DoubleCyclePoint:
        column, row = divmod(vertex, 2)
        return DoubleCyclePoint(self.column_perm[column], row ^ self.orientation[column])


def enumerate_proper_mappings(n: int, cap: int = DEFAULT_MAPPING_CAP) -> Iterator[ProperMapping]:
    if n > cap:
        raise CapExceeded(f"mapping enumeration for n = {n} exceeds cap {cap}")
    for perm in permutations(range(n)):
        for flips in product((False, True), repeat=n):
            yield ProperMapping(perm, flips)


def total_mappings(n: int) -> int:
    return factorial(n) * 2**n


def apply_mapping(phi: ProperMapping, vset: int) -> int:
    out = 0
    for i, (dest, flip) in enumerate(zip(phi.column_perm, phi.orientation)):
        pair = vset >> (2 * i) & 3
        if flip and pair in (1, 2):
            pair ^= 3
        out |= pair << (2 * dest)
    return out


def preimage(phi: ProperMapping, b: QuasiInterval, params: MatchingParams) -> FamilyElement:
    """The unique vertex set that ``phi`` maps onto ``b``; checked to lie in H^(p,s)(n)."""
    out = 0
    for i, (dest, flip) in enumerate(zip(phi.column_perm, phi.orientation)):
        pair = b.points >> (2 * dest) & 3
        if flip and pair in (1, 2):
            pair ^= 3
        out |= pair << (2 * i)
    elem = FamilyElement.of(out, params.n)
    if (elem.spanned_edges, elem.isolated) != (params.p, params.s):
        raise AssertionError(f"preimage of B_{b.index} under {phi} is not in H: {elem}")
    return elem


class MappingTable:
    """All n!*2^n proper mappings as arrays, for vectorised image counts.

    ``image_bit[m, v]`` is the D_n bit that mapping m assigns to vertex bit v;
    ``source_bit`` is the inverse.
    """

    def __init__(self, n: int, cap: int = DEFAULT_MAPPING_CAP):
        if n > cap:
            raise CapExceeded(f"mapping enumeration for n = {n} exceeds cap {cap}")
        self.n = n
        perms = np.array(list(permutations(range(n))), dtype=np.int64).reshape(-1, n)
        flips = np.array(list(product((0, 1), repeat=n)), dtype=np.int64).reshape(-1, n)
        perm = np.repeat(perms, len(flips), axis=0)
        flip = np.tile(flips, (len(perms), 1))
        image = np.empty((len(perm), 2 * n), dtype=np.int64)
        image[:, 0::2] = 2 * perm + flip
        image[:, 1::2] = 2 * perm + (1 - flip)
        self.image_bit = image
        source = np.empty_like(image)
        rows = np.arange(len(image))[:, None]
        source[rows, image] = np.arange(2 * n)[None, :]
        self.source_bit = source

    def __len__(self) -> int:
        return len(self.image_bit)

    def mapping(self, m: int) -> ProperMapping:
        cols = self.image_bit[m, 0::2]
        return ProperMapping(tuple(int(c) // 2 for c in cols), tuple(bool(c % 2) for c in cols))

    @staticmethod
    def _gather(table: np.ndarray, mask: int) -> np.ndarray:
        bits = [b for b in range(table.shape[1]) if mask >> b & 1]
        if not bits:
            return np.zeros(len(table), dtype=np.uint64)
        return np.bitwise_or.reduce(np.left_shift(np.uint64(1), table[:, bits].astype(np.uint64)), axis=1)

    def images(self, vset: int) -> np.ndarray:
        return self._gather(self.image_bit, vset)

    def preimages(self, points: int) -> np.ndarray:
        return self._gather(self.source_bit, points)


def fiber_counts(params: MatchingParams, table: MappingTable | None = None) -> dict[tuple[int, int], int]:
    """Count mappings per (preimage set, quasi label) over every mapping and every B.

    Every preimage is checked for membership in H^(p,s)(n).
    """
    table = table or MappingTable(params.n)
    counts: dict[tuple[int, int], int] = {}
    for b in quasi_intervals(params):
        pre = table.preimages(b.points)
        values, freq = np.unique(pre, return_counts=True)
        for v, c in zip(values.tolist(), freq.tolist()):
            if classify(v, params.n) != (params.p, params.s):
                raise CountingError(f"preimage {v:#x} of B_{b.index} is not in H", (v, b.index))
            counts[(v, b.index)] = c
    return counts


def count_f(params: MatchingParams, h: int, b: QuasiInterval, cap: int = DEFAULT_MAPPING_CAP) -> int:
    """Number of proper mappings sending the vertex set ``h`` onto ``b``."""
    return sum(1 for phi in enumerate_proper_mappings(params.n, cap) if apply_mapping(phi, h) == b.points)


@dataclass(frozen=True)
class CountingReport:
    params: MatchingParams
    f_value: int
    total_mappings: int
    quasi_count: int
    family_size: int
    pairs_checked: int
    exhaustive: bool

    @property
    def identity_holds(self) -> bool:
        return self.total_mappings == self.family_size * self.f_value


def counting_canvass(
    family: Family, quasi: list[QuasiInterval], seed: int = 0, sample: int = 10, exhaustive_max_n: int = 4
) -> list[tuple[int, QuasiInterval]]:
    """(H, B) pairs to test: all of them for small n, else a seeded sample.

    The sample always contains an even- and an odd-labelled B when 2n
    quasi-intervals exist.
    """
    if family.params.n <= exhaustive_max_n:
        return [(h, b) for h in family.members for b in quasi]
    rng = random.Random(seed)
    pairs = [(rng.choice(family.members), rng.choice(quasi)) for _ in range(sample)]
    if len(quasi) == 2 * family.params.n:
        pairs[0] = (pairs[0][0], rng.choice(quasi[0::2]))
        pairs[-1] = (pairs[-1][0], rng.choice(quasi[1::2]))
    return pairs


def verify_counting_identities(
    params: MatchingParams, cap: int = DEFAULT_MAPPING_CAP, seed: int = 0, sample: int = 10
) -> CountingReport:
    """Count f over the canvass by direct enumeration and check n!*2^n = |H|*f.

    Raises CountingError carrying the offending pair if f is not constant.
    """
    if params.n > cap:
        raise CapExceeded(f"mapping enumeration for n = {params.n} exceeds cap {cap}")
    family = enumerate_family(params)
    quasi = quasi_intervals(params)
    pairs = counting_canvass(family, quasi, seed, sample)
    maps = list(enumerate_proper_mappings(params.n, cap))
    f_value = None
    for h, b in pairs:
        f = sum(1 for phi in maps if apply_mapping(phi, h) == b.points)
        if f_value is None:
            f_value = f
        elif f != f_value:
            raise CountingError(f"f = {f} for (H={h:#x}, B_{b.index}), earlier {f_value}", (h, b.index))
    return CountingReport(
        params, f_value, len(maps), len(quasi), len(family), len(pairs), params.n <= 4,
    )


@dataclass(frozen=True)
class DoubleCountReport:
    params: MatchingParams
    family_size: int  # |F|
    s_count: int  # triples (H, phi, B) with H in F and phi(H) = B
    expected: int  # |F| * Q * f
    per_mapping_max: int
    intersecting: bool
    bound_ok: bool | None  # None when F is not intersecting or n < 2p+s
    bound_tight: bool | None  # |F| equals the derived bound cap*|H|/Q

    @property
    def identity_ok(self) -> bool:
        return self.s_count == self.expected


def double_count(
    params: MatchingParams,
    members,
    f_value: int | None = None,
    table: MappingTable | None = None,
) -> DoubleCountReport:
    """Raw count of triples (H, phi, B) with H in ``members`` and phi(H) = B."""
    members = list(members)
    table = table or MappingTable(params.n)
    quasi = quasi_intervals(params)
    # labels may share a point set (e.g. p = n), so weight each hit by multiplicity
    targets, mult = np.unique(np.array([b.points for b in quasi], dtype=np.uint64), return_counts=True)
    hits = np.zeros(len(table), dtype=np.int64)
    for h in members:
        images = table.images(h)
        idx = np.minimum(np.searchsorted(targets, images), len(targets) - 1)
        hits += np.where(targets[idx] == images, mult[idx], 0)
    s_count = int(hits.sum())
    if f_value is None:
        f_value = count_f(params, enumerate_family(params)[0], quasi[0], cap=params.n)
    q = len(quasi)
    intersecting = is_intersecting(members)
    bound_ok = bound_tight = None
    if intersecting and params.ekr_range:
        cap, _ = max_intersecting_quasi(params)
        bound_ok = bool(s_count <= len(table) * cap and hits.max(initial=0) <= cap)
        bound_tight = len(members) * q == cap * family_size(params)
    return DoubleCountReport(
        params, len(members), s_count, len(members) * q * f_value,
        int(hits.max(initial=0)), intersecting, bound_ok, bound_tight,
    )


def random_intersecting_subfamily(family: Family, rng: random.Random) -> list[int]:
    """Greedy random intersecting subfamily of random target size."""
    order = list(family.members)
    rng.shuffle(order)
    target = rng.randint(1, len(order))
    chosen: list[int] = []
    for m in order:
        if all(m & c for c in chosen):
            chosen.append(m)
            if len(chosen) == target:
                break
    return sorted(chosen)


def stars(family: Family) -> list[list[int]]:
    return [star(family, v) for v in range(2 * family.params.n)]
