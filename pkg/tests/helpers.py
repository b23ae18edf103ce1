"""Independent oracles for the test suite.

Everything here enumerates exhaustively and shares no code path with the
library's counters, closed forms, or optimizers.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from homcert import (
    ActivitySystem,
    BipartiteGraph,
    Graph,
    TwoSortedTarget,
    two_sorted,
)


def hom_count_by_enumeration(g: Graph, h: Graph) -> int:
    """All |V(h)|^|V(g)| maps, each checked edge by edge (loops included)."""
    total = 0
    for f in itertools.product(range(h.vertex_count), repeat=g.vertex_count):
        if all(
            h.adjacent(f[u], f[v])
            for u in range(g.vertex_count)
            for v in g.neighbors[u]
            if v >= u
        ):
            total += 1
    return total


def restricted_count_by_enumeration(g: BipartiteGraph, target: TwoSortedTarget) -> int:
    total = 0
    n = g.vertex_count
    tg = target.graph
    for f in itertools.product(range(tg.vertex_count), repeat=n):
        if any(f[v] not in target.upper for v in g.class_e):
            continue
        if any(f[v] not in target.lower for v in g.class_o):
            continue
        if all(tg.adjacent(f[u], f[v]) for u in range(n) for v in g.graph.neighbors[u] if v > u):
            total += 1
    return total


def partition_by_enumeration(g: BipartiteGraph, h: Graph, acts: ActivitySystem) -> Fraction:
    total = Fraction(0)
    n = g.vertex_count
    for f in itertools.product(range(h.vertex_count), repeat=n):
        if not all(h.adjacent(f[u], f[v]) for u in range(n) for v in g.graph.neighbors[u] if v > u):
            continue
        w = Fraction(1)
        for v in g.class_e:
            w *= acts.lambdas[f[v]]
        for v in g.class_o:
            w *= acts.mus[f[v]]
        total += w
    return total


def independent_set_count_by_bitmask(g: Graph) -> int:
    """Third route for tiny graphs: test every vertex subset directly."""
    n = g.vertex_count
    count = 0
    for subset in range(1 << n):
        ok = True
        for u in range(n):
            if not subset >> u & 1:
                continue
            for v in g.neighbors[u]:
                if subset >> v & 1:
                    ok = False
                    break
            if not ok:
                break
        count += ok
    return count


def surjections_by_enumeration(n: int, a: int) -> int:
    total = 0
    for f in itertools.product(range(a), repeat=n):
        if set(f) == set(range(a)):
            total += 1
    return total


def weighted_surjections_by_enumeration(mus, n: int) -> Fraction:
    mus = [Fraction(x) for x in mus]
    a = len(mus)
    total = Fraction(0)
    for f in itertools.product(range(a), repeat=n):
        if set(f) == set(range(a)):
            w = Fraction(1)
            for i in f:
                w *= mus[i]
            total += w
    return total


def eta_by_pair_enumeration(h: Graph, acts: ActivitySystem) -> Fraction:
    """Exhaustive double loop over all (A, B) subset pairs."""
    m = h.vertex_count
    masks = h.neighbor_masks()
    lam_sum = [Fraction(0)] * (1 << m)
    mu_sum = [Fraction(0)] * (1 << m)
    for s in range(1, 1 << m):
        low = s & -s
        i = low.bit_length() - 1
        lam_sum[s] = lam_sum[s ^ low] + acts.lambdas[i]
        mu_sum[s] = mu_sum[s ^ low] + acts.mus[i]
    best = Fraction(0)
    for a_mask in range(1, 1 << m):
        common = (1 << m) - 1
        mm = a_mask
        while mm:
            low = mm & -mm
            mm ^= low
            common &= masks[low.bit_length() - 1]
        for b_mask in range(1, 1 << m):
            if b_mask & ~common:
                continue
            best = max(best, lam_sum[a_mask] * mu_sum[b_mask])
    return best


def random_graph(rng: random.Random, max_vertices: int = 6, p: float = 0.4,
                 loop_p: float = 0.3) -> Graph:
    n = rng.randint(0, max_vertices)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    loops = [v for v in range(n) if rng.random() < loop_p]
    return Graph(n, edges, loops)


def random_bipartite(rng: random.Random, max_half: int = 4, p: float = 0.5) -> BipartiteGraph:
    a = rng.randint(1, max_half)
    b = rng.randint(1, max_half)
    edges = [(i, a + j) for i in range(a) for j in range(b) if rng.random() < p]
    return BipartiteGraph(Graph(a + b, edges), range(a))


def random_two_sorted(rng: random.Random, max_side: int = 5, p: float = 0.5) -> TwoSortedTarget:
    u = rng.randint(1, max_side)
    l = rng.randint(1, max_side)
    edges = [(i, u + j) for i in range(u) for j in range(l) if rng.random() < p]
    return two_sorted(Graph(u + l, edges), range(u))


def random_activities(rng: random.Random, k: int, max_num: int = 3, max_den: int = 3) -> ActivitySystem:
    pairs = [
        (
            Fraction(rng.randint(1, max_num), rng.randint(1, max_den)),
            Fraction(rng.randint(1, max_num), rng.randint(1, max_den)),
        )
        for _ in range(k)
    ]
    return ActivitySystem.from_pairs(pairs)


def is_union_of_balanced_complete_bipartite(g: BipartiteGraph) -> bool:
    """True when every connected component is a K_{n,n} (same n not required
    per component beyond regularity, which callers check separately)."""
    seen = [False] * g.vertex_count
    for start in range(g.vertex_count):
        if seen[start]:
            continue
        comp = [start]
        seen[start] = True
        head = 0
        while head < len(comp):
            v = comp[head]
            head += 1
            for w in g.graph.neighbors[v]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
        e_side = [v for v in comp if v in g.class_e]
        o_side = [v for v in comp if v in g.class_o]
        if len(e_side) != len(o_side):
            return False
        for u in e_side:
            for w in o_side:
                if not g.graph.adjacent(u, w):
                    return False
    return True
