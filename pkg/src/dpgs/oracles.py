"""Exact, non-private reference computations used as referees.

Max flow (Dinic), maximum matching (Edmonds' blossom algorithm, including an
incremental insertion-only variant), exact densest subgraph via parametric
min cuts, core numbers via peeling, an arboricity bracket, and exact minimum
vertex cover by branch and bound for small graphs.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction


class TooLarge(ValueError):
    pass


class FlowNetwork:
    """Directed network with integer capacities, solved with Dinic's algorithm."""

    def __init__(self, n: int):
        self.n = n
        self.head: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_arc(self, u: int, v: int, cap: int) -> int:
        """Add u->v with the given capacity; returns the arc id."""
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)
        return len(self.to) - 2

    def _bfs(self, s: int, t: int) -> list[int] | None:
        level = [-1] * self.n
        level[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for a in self.head[u]:
                if self.cap[a] > 0 and level[self.to[a]] < 0:
                    level[self.to[a]] = level[u] + 1
                    q.append(self.to[a])
        return level if level[t] >= 0 else None

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        to, cap, head = self.to, self.cap, self.head
        while True:
            level = self._bfs(s, t)
            if level is None:
                return flow
            it = [0] * self.n
            while True:
                # iterative DFS for one blocking-flow augmenting path
                path: list[int] = []
                u = s
                while u != t:
                    advanced = False
                    hu = head[u]
                    while it[u] < len(hu):
                        a = hu[it[u]]
                        v = to[a]
                        if cap[a] > 0 and level[v] == level[u] + 1:
                            path.append(a)
                            u = v
                            advanced = True
                            break
                        it[u] += 1
                    if not advanced:
                        if u == s:
                            break
                        level[u] = -1
                        a = path.pop()
                        u = to[a ^ 1]
                        it[u] += 1
                if u != t:
                    break
                push = min(cap[a] for a in path)
                for a in path:
                    cap[a] -= push
                    cap[a ^ 1] += push
                flow += push

    def source_side(self, s: int) -> set[int]:
        """Vertices reachable from s in the residual graph."""
        seen = {s}
        q = deque([s])
        while q:
            u = q.popleft()
            for a in self.head[u]:
                if self.cap[a] > 0 and self.to[a] not in seen:
                    seen.add(self.to[a])
                    q.append(self.to[a])
        return seen


def max_flow(n: int, arcs, s: int, t: int) -> tuple[int, set[int]]:
    net = FlowNetwork(n)
    for u, v, c in arcs:
        net.add_arc(u, v, c)
    return net.max_flow(s, t), net.source_side(s)


# --- matching -------------------------------------------------------------


def _adjacency(n, edges):
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def _augment_from(adj, mate, root) -> bool:
    """Search for an augmenting path from a free root; flip it if found."""
    n = len(adj)
    used = [False] * n
    parent = [-1] * n
    base = list(range(n))
    used[root] = True
    q = deque([root])

    def lca(a, b):
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[mate[b]]

    def mark(v, b, child, blossom):
        while base[v] != b:
            blossom[base[v]] = blossom[base[mate[v]]] = True
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    while q:
        v = q.popleft()
        for w in adj[v]:
            if base[v] == base[w] or mate[v] == w:
                continue
            if w == root or (mate[w] != -1 and parent[mate[w]] != -1):
                b = lca(v, w)
                blossom = [False] * n
                mark(v, b, w, blossom)
                mark(w, b, v, blossom)
                for i in range(n):
                    if blossom[base[i]]:
                        base[i] = b
                        if not used[i]:
                            used[i] = True
                            q.append(i)
            elif parent[w] == -1:
                parent[w] = v
                if mate[w] == -1:
                    while w != -1:
                        pv = parent[w]
                        nxt = mate[pv]
                        mate[w] = pv
                        mate[pv] = w
                        w = nxt
                    return True
                used[mate[w]] = True
                q.append(mate[w])
    return False


def max_matching(n: int, edges) -> list[int]:
    """Maximum-cardinality matching as a mate array (-1 for unmatched)."""
    adj = _adjacency(n, edges)
    mate = [-1] * n
    # greedy warm start, then augment from every free vertex
    for u, v in edges:
        if mate[u] == -1 and mate[v] == -1:
            mate[u], mate[v] = v, u
    for r in range(n):
        if mate[r] == -1 and adj[r]:
            _augment_from(adj, mate, r)
    return mate


def exact_matching_size(n: int, edges) -> int:
    return sum(1 for v, m in enumerate(max_matching(n, edges)) if m > v)


class IncrementalMatching:
    """Maximum matching maintained under edge insertions.

    After inserting e, any augmenting path must use e, so the search is limited
    to the free vertices of e's connected component.
    """

    def __init__(self, n: int):
        self.n = n
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.mate = [-1] * n
        self.size = 0

    def add_edge(self, u: int, v: int) -> int:
        self.adj[u].append(v)
        self.adj[v].append(u)
        mate = self.mate
        if mate[u] == -1 and mate[v] == -1:
            mate[u], mate[v] = v, u
            self.size += 1
        elif mate[u] == -1 or mate[v] == -1:
            r = u if mate[u] == -1 else v
            if _augment_from(self.adj, mate, r):
                self.size += 1
        else:
            for r in self._component(u):
                if mate[r] == -1 and _augment_from(self.adj, mate, r):
                    self.size += 1
                    break
        return self.size

    def _component(self, s):
        seen = {s}
        q = deque([s])
        while q:
            x = q.popleft()
            for y in self.adj[x]:
                if y not in seen:
                    seen.add(y)
                    q.append(y)
        return sorted(seen)


def greedy_matching_size(edges) -> int:
    """Size of the greedy maximal matching over edges in the given order."""
    used = set()
    k = 0
    for u, v in edges:
        if u not in used and v not in used:
            used.update((u, v))
            k += 1
    return k


# --- densest subgraph -----------------------------------------------------


@dataclass(frozen=True)
class DensityResult:
    density: Fraction
    witness: frozenset


def induced_edge_count(edges, U) -> int:
    return sum(1 for u, v in edges if u in U and v in U)


def density_of(edges, U) -> Fraction:
    if not U:
        return Fraction(0)
    return Fraction(induced_edge_count(edges, U), len(U))


def density_network(n: int, edges, lam: Fraction) -> tuple[FlowNetwork, int, int]:
    """Network whose min cut is below m iff some U has density above lam.

    Nodes: source, one node per edge, one node per vertex, sink. Capacities are
    scaled by lam's denominator to stay integral.
    """
    lam = Fraction(lam)
    q, p = lam.denominator, lam.numerator
    m = len(edges)
    s, t = 0, m + n + 1
    big = q * m + p * n + 1
    net = FlowNetwork(m + n + 2)
    for i, (u, v) in enumerate(edges):
        net.add_arc(s, 1 + i, q)
        net.add_arc(1 + i, 1 + m + u, big)
        net.add_arc(1 + i, 1 + m + v, big)
    for v in range(n):
        net.add_arc(1 + m + v, t, p)
    return net, s, t


def denser_than(n: int, edges, lam: Fraction, prune: bool = True):
    """Return a vertex set with density strictly above lam, or None.

    A set denser than lam has minimum induced degree above floor(lam), so with
    ``prune`` the cut is only solved on the (floor(lam) + 1)-core.
    """
    lam = Fraction(lam)
    if prune and lam >= 1:
        core = exact_core_numbers(n, edges)
        k = math.floor(lam) + 1
        keep = [v for v in range(n) if core[v] >= k]
        if not keep:
            return None
        if len(keep) < n:
            idx = {v: i for i, v in enumerate(keep)}
            sub = [(idx[u], idx[v]) for u, v in edges if u in idx and v in idx]
            found = denser_than(len(keep), sub, lam, prune=False)
            return None if found is None else frozenset(keep[i] for i in found)
    m = len(edges)
    net, s, t = density_network(n, edges, lam)
    cut = net.max_flow(s, t)
    if cut >= m * lam.denominator:
        return None
    side = net.source_side(s)
    return frozenset(x - 1 - m for x in side if 1 + m <= x <= m + n)


def peeling_order(n: int, edges) -> list[int]:
    """Vertices in min-degree removal order (ties by id), via bucket queues."""
    adj = _adjacency(n, edges)
    deg = [len(a) for a in adj]
    maxd = max(deg, default=0)
    buckets = [set() for _ in range(maxd + 1)]
    for v in range(n):
        buckets[deg[v]].add(v)
    removed = [False] * n
    order = []
    d = 0
    for _ in range(n):
        d = max(d - 1, 0)
        while not buckets[d]:
            d += 1
        v = min(buckets[d])
        buckets[d].discard(v)
        removed[v] = True
        order.append(v)
        for w in adj[v]:
            if not removed[w]:
                buckets[deg[w]].discard(w)
                deg[w] -= 1
                buckets[deg[w]].add(w)
    return order


def peeling_densest(n: int, edges) -> DensityResult:
    """Charikar's greedy peeling: a 2-approximation to the densest subgraph."""
    if n == 0:
        return DensityResult(Fraction(0), frozenset())
    order = peeling_order(n, edges)
    pos = {v: i for i, v in enumerate(order)}
    # edges die when their first endpoint is peeled
    dead_at = [0] * n
    for u, v in edges:
        dead_at[min(pos[u], pos[v])] += 1
    m = len(edges)
    best, best_i = Fraction(m, n), 0
    for i in range(n - 1):
        m -= dead_at[i]
        d = Fraction(m, n - i - 1)
        if d > best:
            best, best_i = d, i + 1
    return DensityResult(best, frozenset(order[best_i:]))


def exact_density(n: int, edges, method: str = "bisect",
                  start: frozenset | None = None) -> DensityResult:
    """Maximum density |E[U]|/|U| over nonempty U, as an exact rational.

    ``bisect`` binary-searches the parametric cut on [m/n, n/2] until the gap
    is below 1/(n(n-1)), the minimum spacing of distinct densities. ``newton``
    starts from a feasible set (by default the peeling answer) and jumps to the
    density of each improving min-cut witness until none exists.
    """
    edges = list(edges)
    if n == 0:
        return DensityResult(Fraction(0), frozenset())
    if not edges:
        return DensityResult(Fraction(0), frozenset(range(n)))
    if method == "newton":
        best = start if start else peeling_densest(n, edges).witness
        lam = density_of(edges, best)
        while True:
            better = denser_than(n, edges, lam)
            if better is None:
                return DensityResult(lam, frozenset(best))
            best, lam = better, density_of(edges, better)
    if method != "bisect":
        raise ValueError(f"unknown method {method!r}")
    best = frozenset(range(n))
    lo, hi = Fraction(len(edges), n), Fraction(n, 2)
    gap = Fraction(1, n * (n - 1)) if n > 1 else Fraction(1)
    while hi - lo >= gap:
        mid = (lo + hi) / 2
        better = denser_than(n, edges, mid)
        if better is None:
            hi = mid
        else:
            best, lo = better, density_of(edges, better)
    return DensityResult(lo, best)


# --- cores, arboricity, vertex cover --------------------------------------


def exact_core_numbers(n: int, edges) -> list[int]:
    """Core number of every vertex by min-degree peeling."""
    adj = _adjacency(n, edges)
    deg = [len(a) for a in adj]
    core = [0] * n
    order = peeling_order(n, edges)
    # recompute along the peeling order: core(v) = running max of degree at removal
    removed = [False] * n
    k = 0
    for v in order:
        k = max(k, deg[v])
        core[v] = k
        removed[v] = True
        for w in adj[v]:
            if not removed[w]:
                deg[w] -= 1
    return core


def arboricity_bracket(n: int, edges) -> tuple[int, int]:
    """Bounds (ceil(k/2), k) on arboricity, with k the degeneracy."""
    k = max(exact_core_numbers(n, edges), default=0)
    return ((k + 1) // 2, k)


def exact_min_vertex_cover(n: int, edges, limit: int = 20) -> frozenset:
    """Minimum vertex cover by branch and bound; only for n <= limit."""
    if n > limit:
        raise TooLarge(f"exact vertex cover limited to n <= {limit}, got {n}")
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    best = [frozenset(v for v in range(n) if adj[v])]

    def lower_bound(g):
        used, k = set(), 0
        for u in g:
            if u in used:
                continue
            for w in g[u]:
                if w not in used:
                    used.update((u, w))
                    k += 1
                    break
        return k

    def without(g, vs):
        return {u: nb - vs for u, nb in g.items() if u not in vs and nb - vs}

    def go(g, chosen):
        if not g:
            if len(chosen) < len(best[0]):
                best[0] = frozenset(chosen)
            return
        if len(chosen) + lower_bound(g) >= len(best[0]):
            return
        v = max(g, key=lambda x: (len(g[x]), -x))
        if len(g[v]) == 1:
            # a leaf: taking its neighbour is never worse
            w = next(iter(g[v]))
            go(without(g, {w}), chosen | {w})
            return
        go(without(g, {v}), chosen | {v})
        nb = set(g[v])
        go(without(g, nb), chosen | nb)

    go({u: nb for u, nb in adj.items() if nb}, frozenset())
    return best[0]
