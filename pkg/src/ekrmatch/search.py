"""Exact maximum intersecting subfamilies via maximum clique search.

The intersection graph of a family has an edge between two members that
share a vertex, so an intersecting subfamily is a clique.  The solver is a
bitset branch and bound (static order by descending degree, greedy
sequential colouring for the upper bound, recursion on candidate rows)
compiled in :mod:`ekrmatch._kernel`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from ._kernel import rows_to_words, run_clique_search
from .errors import CapExceeded, OrderTooLarge
from .family import (
    Family,
    MatchingParams,
    enumerate_family,
    is_intersecting,
    star,
    star_size_closed_form,
)

DEFAULT_FAMILY_CAP = 4096
NAIVE_ORDER_LIMIT = 20
ORDER_SEED = 0


@dataclass(frozen=True)
class IntersectionGraph:
    order: int
    adjacency: tuple[int, ...]  # row v has bit u set iff u ~ v

    @classmethod
    def from_rows(cls, rows: Sequence[int]) -> IntersectionGraph:
        return cls(len(rows), tuple(rows))

    @classmethod
    def from_edges(cls, order: int, edges) -> IntersectionGraph:
        rows = [0] * order
        for u, v in edges:
            if u == v:
                raise ValueError("self loops are not allowed")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(order, tuple(rows))

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adjacency[v].bit_count()

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.adjacency) // 2

    def is_clique(self, vertices) -> bool:
        vs = list(vertices)
        return all(self.adjacent(u, v) for i, u in enumerate(vs) for v in vs[i + 1:])


@dataclass(frozen=True)
class SearchResult:
    size: int
    witness: tuple[int, ...]
    nodes_explored: int
    seeded_bound: int


def build_intersection_graph(family: Family, cap: int = DEFAULT_FAMILY_CAP) -> IntersectionGraph:
    if len(family) > cap:
        raise CapExceeded(f"family has {len(family)} members, cap is {cap}")
    members = family.members
    # stars[v]: bit mask over member indices containing vertex v
    stars = [0] * (2 * family.params.n)
    for i, m in enumerate(members):
        x = m
        while x:
            low = x & -x
            stars[low.bit_length() - 1] |= 1 << i
            x ^= low
    rows = []
    for i, m in enumerate(members):
        row = 0
        x = m
        while x:
            low = x & -x
            row |= stars[low.bit_length() - 1]
            x ^= low
        rows.append(row & ~(1 << i))
    return IntersectionGraph(len(members), tuple(rows))


def _check_seed(graph: IntersectionGraph, bound: int, witness) -> int:
    if witness:
        if not graph.is_clique(witness) or len(set(witness)) != len(witness):
            raise ValueError("seed witness is not a clique")
        bound = max(bound, len(witness))
    if bound > graph.order:
        raise ValueError(f"seed bound {bound} exceeds order {graph.order}")
    return bound


def _finish(graph: IntersectionGraph, witness, nodes: int, seed: int) -> SearchResult:
    witness = tuple(sorted(witness))
    if len(witness) < seed:
        raise ValueError(f"no clique of the seeded size {seed} exists")
    if not graph.is_clique(witness):
        raise AssertionError("solver returned a non-clique witness")
    return SearchResult(len(witness), witness, nodes, seed)


def search_order(graph: IntersectionGraph, order_seed: int = ORDER_SEED) -> list[int]:
    """Static vertex order: descending degree, ties by a fixed shuffle.

    Breaking ties by index is pathological on vertex-transitive families,
    whose members are sorted by bit value: greedy colouring then packs
    disjoint members badly and the bound is far from tight.
    """
    tie = list(range(graph.order))
    random.Random(order_seed).shuffle(tie)
    return sorted(range(graph.order), key=lambda v: (-graph.degree(v), tie[v]))


def _relabel(graph: IntersectionGraph, perm: list[int]) -> list[int]:
    inv = [0] * graph.order
    for new, old in enumerate(perm):
        inv[old] = new
    rows = []
    for old in perm:
        row, mapped = graph.adjacency[old], 0
        while row:
            low = row & -row
            mapped |= 1 << inv[low.bit_length() - 1]
            row ^= low
        rows.append(mapped)
    return rows


def max_clique(
    graph: IntersectionGraph,
    seed_lower_bound: int = 0,
    seed_witness: Sequence[int] | None = None,
    order_seed: int = ORDER_SEED,
) -> SearchResult:
    """Exact maximum clique of ``graph``.

    ``seed_lower_bound`` must be the size of some clique known to exist; the
    search then only explores branches able to reach that size.  When the
    clique itself is passed as ``seed_witness`` it becomes the incumbent and
    only strictly larger cliques are searched for.
    """
    seed = _check_seed(graph, seed_lower_bound, seed_witness)
    n = graph.order
    if n == 0:
        return SearchResult(0, (), 0, seed)
    perm = search_order(graph, order_seed)
    rows = _relabel(graph, perm)
    # cliques of size <= incumbent are pruned
    incumbent = len(seed_witness) if seed_witness else max(seed - 1, 0)
    size, ext, nodes = run_clique_search(rows_to_words(rows, n), (1 << n) - 1, 0, incumbent)
    if len(ext):
        witness = [perm[v] for v in ext.tolist()]
    else:
        witness = list(seed_witness or ())
    return _finish(graph, witness, nodes, seed)


def _column_states(member: int, n: int) -> list[tuple[int, int]]:
    return [(member >> (2 * c) & 1, member >> (2 * c + 1) & 1) for c in range(n)]


def _colour_sort(p_bits: int, adj: Sequence[int]) -> tuple[list[int], list[int]]:
    order: list[int] = []
    colours: list[int] = []
    colour = 0
    uncoloured = p_bits
    while uncoloured:
        colour += 1
        q = uncoloured
        while q:
            low = q & -q
            v = low.bit_length() - 1
            q &= ~low & ~adj[v]
            uncoloured &= ~low
            order.append(v)
            colours.append(colour)
    return order, colours


def symmetric_max_clique(
    family: Family,
    graph: IntersectionGraph,
    seed_lower_bound: int = 0,
    seed_witness: Sequence[int] | None = None,
    orbital_depth: int = 3,
    order_seed: int = ORDER_SEED,
) -> SearchResult:
    """Maximum clique of a family's intersection graph with orbital branching.

    Column permutations combined with per-column row swaps map H^(p,s)(n) to
    itself and preserve intersections.  At each node the candidates are
    grouped into orbits of the pointwise stabiliser of the current clique;
    only one representative per orbit is branched on and the whole orbit is
    dropped afterwards.  Two candidates share an orbit exactly when the
    multisets of their per-column signatures (clique states plus own state,
    up to swapping rows) agree.  Below ``orbital_depth`` clique members, or
    once every orbit is a singleton, the subproblem goes to the plain
    compiled search.
    """
    seed = _check_seed(graph, seed_lower_bound, seed_witness)
    n_items = graph.order
    if n_items == 0:
        return SearchResult(0, (), 0, seed)
    n = family.params.n
    perm = search_order(graph, order_seed)
    inv = {old: new for new, old in enumerate(perm)}
    adj = _relabel(graph, perm)
    words = rows_to_words(adj, n_items)
    states = [_column_states(family.members[old], n) for old in perm]

    if seed_witness:
        best, best_size = [inv[v] for v in seed_witness], len(seed_witness)
    else:
        best, best_size = [], max(seed - 1, 0)
    nodes = 0
    current: list[int] = []

    def orbits(p_bits: int, amask: list[int], bmask: list[int]) -> dict[int, int] | None:
        by_sig: dict[tuple, int] = {}
        x = p_bits
        while x:
            low = x & -x
            v = low.bit_length() - 1
            x ^= low
            key = tuple(sorted(
                min((a, b, sa, sb), (b, a, sb, sa))
                for a, b, (sa, sb) in zip(amask, bmask, states[v])
            ))
            by_sig[key] = by_sig.get(key, 0) | low
        if len(by_sig) == p_bits.bit_count():
            return None  # singleton orbits stay singletons in every subgroup
        orbit_of = {}
        for mask in by_sig.values():
            y = mask
            while y:
                low = y & -y
                orbit_of[low.bit_length() - 1] = mask
                y ^= low
        return orbit_of

    def expand(p_bits: int, amask: list[int], bmask: list[int]) -> None:
        nonlocal best, best_size, nodes
        depth = len(current)
        orbit_of = orbits(p_bits, amask, bmask) if depth < orbital_depth else None
        if orbit_of is None:
            size, ext, k_nodes = run_clique_search(words, p_bits, depth, best_size)
            nodes += k_nodes
            if len(ext):
                best, best_size = current + ext.tolist(), size
            return
        nodes += 1
        order, colours = _colour_sort(p_bits, adj)
        for idx in range(len(order) - 1, -1, -1):
            v = order[idx]
            if not p_bits >> v & 1:
                continue
            if depth + colours[idx] <= best_size:
                return
            current.append(v)
            new_p = p_bits & adj[v]
            if new_p:
                sv = states[v]
                expand(
                    new_p,
                    [a | (sa << depth) for a, (sa, _) in zip(amask, sv)],
                    [b | (sb << depth) for b, (_, sb) in zip(bmask, sv)],
                )
            elif len(current) > best_size:
                best, best_size = current.copy(), len(current)
            current.pop()
            p_bits &= ~orbit_of[v]

    expand((1 << n_items) - 1, [0] * n, [0] * n)
    return _finish(graph, [perm[v] for v in best], nodes, seed)


def naive_max_clique(graph: IntersectionGraph) -> int:
    """Exhaustive maximum clique size; used as an oracle for max_clique."""
    if graph.order > NAIVE_ORDER_LIMIT:
        raise OrderTooLarge(f"order {graph.order} > {NAIVE_ORDER_LIMIT}")
    adj = graph.adjacency

    def grow(size: int, cand: int) -> int:
        best = size
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            # only higher-indexed neighbours, so each clique is visited once
            best = max(best, grow(size + 1, cand & adj[v]))
        return best

    return grow(0, (1 << graph.order) - 1)


def max_intersecting(
    family: Family,
    cap: int = DEFAULT_FAMILY_CAP,
    seed_star: bool = True,
    symmetry: bool = True,
    order_seed: int = ORDER_SEED,
) -> SearchResult:
    """Largest intersecting subfamily of ``family``, witness as member indices.

    With ``seed_star`` the star at vertex a_1 is the starting incumbent.
    ``symmetry`` switches orbital branching on; it is only sound for complete
    families H^(p,s)(n), which is all this function accepts.
    """
    graph = build_intersection_graph(family, cap)
    seed_witness = [i for i, m in enumerate(family.members) if m & 1] if seed_star else None
    if symmetry:
        result = symmetric_max_clique(family, graph, seed_witness=seed_witness, order_seed=order_seed)
    else:
        result = max_clique(graph, seed_witness=seed_witness, order_seed=order_seed)
    if not is_intersecting(family[i] for i in result.witness):
        raise AssertionError("witness is not an intersecting family")
    return result


@dataclass(frozen=True)
class EkrVerdict:
    params: MatchingParams
    family_size: int
    star_size: int
    max_intersecting: int
    regime: str  # "ekr" or "degenerate"
    holds: bool
    witness: tuple[int, ...] = ()
    nodes_explored: int = 0


def verify_ekr_instance(
    params: MatchingParams,
    cap: int = DEFAULT_FAMILY_CAP,
    seed_star: bool = True,
    symmetry: bool = True,
) -> EkrVerdict:
    family = enumerate_family(params)
    if len(family) > cap:
        raise CapExceeded(f"family has {len(family)} members, cap is {cap}")
    star_size = star_size_closed_form(params)
    for v in range(2 * params.n):
        got = len(star(family, v))
        if got != star_size:
            raise AssertionError(f"star at vertex {v} has {got} members, expected {star_size}")
    result = max_intersecting(family, cap, seed_star, symmetry)
    if params.ekr_range:
        regime = "ekr"
        holds = result.size == star_size
    else:
        regime = "degenerate"
        holds = is_intersecting(family.members) and result.size == len(family)
    return EkrVerdict(
        params, len(family), star_size, result.size, regime, holds,
        result.witness, result.nodes_explored,
    )
