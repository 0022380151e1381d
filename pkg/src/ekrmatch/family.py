"""The perfect matching M_n and the families H^(p,s)(n).

Vertex sets are plain Python ints used as bit sets.  Column ``i`` of the
matching (the edge a_i b_i, 0-based) owns bits ``2i`` (a_i) and ``2i+1``
(b_i), so the column of a bit is its index halved.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb

from .errors import InvalidParams

MAX_COLUMNS = 32  # 2n <= 64 keeps a set inside one machine word

_EVEN = int("01" * MAX_COLUMNS, 2)  # bits 0, 2, 4, ...


@dataclass(frozen=True)
class MatchingParams:
    n: int
    p: int
    s: int

    def __post_init__(self):
        n, p, s = self.n, self.p, self.s
        if any(not isinstance(v, int) or isinstance(v, bool) for v in (n, p, s)):
            raise InvalidParams(f"n, p, s must be integers, got {(n, p, s)!r}")
        if n < 1 or p < 0 or s < 0:
            raise InvalidParams(f"need n >= 1 and p, s >= 0, got {(n, p, s)}")
        if 2 * p + s < 1:
            raise InvalidParams("2p+s must be at least 1")
        if p + s > n:
            raise InvalidParams(f"p+s = {p + s} exceeds n = {n}; the family is empty")
        if n > MAX_COLUMNS:
            raise InvalidParams(f"n = {n} exceeds the single-word limit {MAX_COLUMNS}")

    @property
    def k(self) -> int:
        return self.s // 2

    @property
    def set_size(self) -> int:
        return 2 * self.p + self.s

    @property
    def ekr_range(self) -> bool:
        return self.n >= 2 * self.p + self.s

    @property
    def quasi_count(self) -> int:
        """Number of quasi-intervals: n for even s, 2n for odd s."""
        return self.n if self.s % 2 == 0 else 2 * self.n

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n, self.p, self.s)


def valid_params(max_n: int, min_n: int = 1):
    """Yield every valid MatchingParams with min_n <= n <= max_n, sorted by (n, p, s)."""
    for n in range(min_n, max_n + 1):
        for p in range(n + 1):
            for s in range(n - p + 1):
                if 2 * p + s >= 1:
                    yield MatchingParams(n, p, s)


def family_size(params: MatchingParams) -> int:
    n, p, s = params.as_tuple()
    return comb(n, p) * comb(n - p, s) * 2**s


def full_mask(n: int) -> int:
    return (1 << (2 * n)) - 1


def vertex_bit(column: int, row: int) -> int:
    """Bit index of a_column (row 0) or b_column (row 1)."""
    return 2 * column + row


def classify(vset: int, n: int) -> tuple[int, int]:
    """Return (spanned edges, isolated vertices) of a vertex set of M_n."""
    if vset >> (2 * n):
        raise ValueError(f"set {vset:#x} has bits beyond 2n = {2 * n}")
    low = vset & _EVEN
    high = (vset >> 1) & _EVEN
    return (low & high).bit_count(), (low ^ high).bit_count()


@dataclass(frozen=True)
class FamilyElement:
    vertices: int
    spanned_edges: int
    isolated: int

    @classmethod
    def of(cls, vertices: int, n: int) -> FamilyElement:
        return cls(vertices, *classify(vertices, n))

    def __len__(self) -> int:
        return self.vertices.bit_count()


@dataclass(frozen=True)
class Family:
    params: MatchingParams
    members: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i: int) -> int:
        return self.members[i]

    def element(self, i: int) -> FamilyElement:
        return FamilyElement.of(self.members[i], self.params.n)

    def index(self, vset: int) -> int:
        return self._positions[vset]

    @property
    def _positions(self) -> dict[int, int]:
        pos = self.__dict__.get("_pos")
        if pos is None:
            pos = {m: i for i, m in enumerate(self.members)}
            object.__setattr__(self, "_pos", pos)
        return pos


def enumerate_family(params: MatchingParams) -> Family:
    """All subsets of V(M_n) spanning exactly p edges and s isolated vertices."""
    n, p, s = params.as_tuple()
    members = []
    for edge_cols in combinations(range(n), p):
        edge_bits = sum(3 << (2 * c) for c in edge_cols)
        rest = [c for c in range(n) if c not in edge_cols]
        for iso_cols in combinations(rest, s):
            for rows in product((0, 1), repeat=s):
                iso_bits = sum(1 << vertex_bit(c, r) for c, r in zip(iso_cols, rows))
                members.append(edge_bits | iso_bits)
    members.sort()
    expected = family_size(params)
    if len(members) != expected:
        raise AssertionError(f"enumerated {len(members)} members, closed form {expected}")
    return Family(params, tuple(members))


def star(family: Family, vertex: int) -> list[int]:
    """Members of ``family`` containing ``vertex`` (a bit index in 0..2n-1)."""
    if not 0 <= vertex < 2 * family.params.n:
        raise IndexError(f"vertex {vertex} out of range for n = {family.params.n}")
    bit = 1 << vertex
    return [m for m in family.members if m & bit]


def star_size_closed_form(params: MatchingParams) -> int:
    total = params.set_size * family_size(params)
    q, r = divmod(total, 2 * params.n)
    assert r == 0, f"(2p+s)|H| = {total} not divisible by 2n for {params}"
    return q


def is_intersecting(sets) -> bool:
    sets = list(sets)
    for i, a in enumerate(sets):
        for b in sets[i + 1:]:
            if not a & b:
                return False
    return True


def vertex_name(bit: int) -> str:
    """1-based label: bit 0 -> 'a1', bit 1 -> 'b1', bit 2 -> 'a2'."""
    column, row = divmod(bit, 2)
    return f"{'ab'[row]}{column + 1}"


def parse_vertex_name(name: str) -> int:
    row = "ab".index(name[0])
    column = int(name[1:]) - 1
    if column < 0:
        raise ValueError(f"bad vertex name {name!r}")
    return vertex_bit(column, row)


def bits_of(vset: int) -> list[int]:
    out = []
    while vset:
        low = vset & -vset
        out.append(low.bit_length() - 1)
        vset ^= low
    return out


def set_names(vset: int) -> list[str]:
    return [vertex_name(b) for b in bits_of(vset)]
