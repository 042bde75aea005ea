"""Edge-private k-core estimates under continual release.

For each group j the structure samples edges with probability p_j and lets
vertices climb through F levels, one level per Above answer of a private
per-(group, vertex) sparse vector on the sampled up-degree. A vertex's core
estimate comes from the largest group in which it reached the top level.

Within one level of one group, queries are independent of each other's
answers (a vertex moving from level l to l + 1 only changes up-degrees of
vertices at level l + 1), so each level is answered as one vectorized batch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from dpgs.dp import InvalidParameter, PrivacyLedger, laplace_from_uniform, seed_sequence
from dpgs.stream import EdgeUpdate, InvalidUpdate, Kind
from dpgs.util import lg, log_base


@dataclass
class CoreConstants:
    c1: float = 4.0
    c2: float = 4.0
    c3: float = 4.0


class CoreLevels:
    def __init__(self, n: int, eps: float, eta: float, seed=None,
                 test_mode: bool = False, consts: CoreConstants | None = None,
                 ledger: PrivacyLedger | None = None, record: bool = False):
        if not eps > 0 or not eta > 0:
            raise InvalidParameter("eps and eta must be positive")
        c = consts or CoreConstants()
        self.n, self.eps, self.eta, self.test_mode = n, eps, eta, test_mode
        b = 1 + eta
        self.L = c.c3 * lg(n) ** 3 / eps
        self.F = math.ceil(2 * log_base(n, b))
        lo = max(0, math.ceil(log_base(self.L, b)))
        self.Q = list(range(lo, self.F + 1))
        G = len(self.Q)
        self.p = np.array([min(1.0, c.c1 * lg(n) ** 3 / (eps * b ** j)) for j in self.Q])
        self.thr = np.array([self.p[g] * b ** (j - 1) for g, j in enumerate(self.Q)])
        # Q is empty when L already exceeds (1 + eta)^F; every estimate is then 1
        self.eps1 = eps / (6 * max(G, 1) * self.F)
        self.budget = c.c2 * log_base(n, b)
        self.rho_scale = 1 / (self.eps1 / 2)
        self.q_scale = 2 * self.budget / (self.eps1 / 2)
        s_noise, s_coins = seed_sequence(seed).spawn(2)
        self.noise_rng = np.random.default_rng(s_noise)
        self.coins = np.random.default_rng(s_coins)
        u = self.noise_rng.random((G, n))
        self.rho = np.zeros((G, n)) if test_mode else laplace_from_uniform(u, self.rho_scale)
        self.levels = np.zeros((G, n), dtype=np.int64)
        self.up = np.zeros((G, n), dtype=np.int64)
        self.count = np.zeros((G, n), dtype=np.int64)
        self.frozen = np.zeros((G, n), dtype=bool)
        self.adj = [[set() for _ in range(n)] for _ in range(G)]
        self.sampled = 0
        self.record = record
        self.transcript: list[tuple] = []
        self.t = 0
        if ledger is not None:
            ledger.charge("kcore.per_vertex_svts", eps)

    @property
    def top(self) -> int:
        return self.F - 1

    def sample_edge(self, up: EdgeUpdate) -> None:
        # two coins per group every step, consumed even for no-ops
        coins = self.coins.random((len(self.Q), 2))
        if up.is_noop:
            return
        u, v = up.edge
        lv = self.levels
        for g in range(len(self.Q)):
            if v in self.adj[g][u]:
                continue
            fire = ((lv[g, u] < self.top and coins[g, 0] <= self.p[g]) or
                    (lv[g, v] < self.top and coins[g, 1] <= self.p[g]))
            if not fire:
                continue
            self.adj[g][u].add(v)
            self.adj[g][v].add(u)
            self.sampled += 1
            if lv[g, v] >= lv[g, u]:
                self.up[g, u] += 1
            if lv[g, u] >= lv[g, v]:
                self.up[g, v] += 1

    def _move_up(self, g: int, x: int) -> None:
        lv, up, adj = self.levels[g], self.up[g], self.adj[g]
        l = lv[x]
        for y in adj[x]:
            if lv[y] == l:
                up[x] -= 1
            elif lv[y] == l + 1:
                up[y] += 1
        lv[x] = l + 1

    def update_levels(self) -> None:
        G, n, F = len(self.Q), self.n, self.F
        u = self.noise_rng.random((G, F - 1, n))
        if not self.test_mode:
            nu = laplace_from_uniform(u, self.q_scale)
        for g in range(G):
            lv = self.levels[g]
            for l in range(F - 1):
                at = np.flatnonzero((lv == l) & ~self.frozen[g])
                if at.size == 0:
                    continue
                dead = self.count[g, at] > self.budget
                if dead.any():
                    self.frozen[g, at[dead]] = True
                    at = at[~dead]
                noise = 0.0 if self.test_mode else nu[g, l, at]
                hit = self.up[g, at] + noise >= self.thr[g] + self.rho[g, at]
                movers = at[hit]
                if movers.size == 0:
                    continue
                self.count[g, movers] += 1
                if self.record:
                    for x in movers:
                        self.transcript.append((self.t, self.Q[g], int(x), l,
                                                int(self.up[g, x])))
                for x in movers:
                    self._move_up(g, int(x))

    def process(self, up: EdgeUpdate) -> None:
        if up.kind is Kind.DEL:
            raise InvalidUpdate("k-core estimation accepts insertion-only streams")
        self.t += 1
        self.sample_edge(up)
        self.update_levels()

    def release(self) -> np.ndarray:
        """Per-vertex estimates: (2 + eta)(1 + eta)^j for the largest group j
        where the vertex sits at the top level, or 1 when (1 + eta)^j <= L."""
        b = 1 + self.eta
        at_top = self.levels == self.top
        est = np.ones(self.n)
        Qa = np.array(self.Q)
        for v in range(self.n):
            js = Qa[at_top[:, v]]
            if js.size:
                j = int(js.max())
                if b ** j > self.L:
                    est[v] = (2 + self.eta) * b ** j
        return est

    @property
    def aborted(self) -> bool:
        return bool(self.frozen.any())


def exact_up_degrees(n: int, edges, levels) -> np.ndarray:
    """Up-degree (neighbors at the same or a higher level) for every vertex."""
    up = np.zeros(n, dtype=np.int64)
    for u, v in edges:
        if levels[v] >= levels[u]:
            up[u] += 1
        if levels[u] >= levels[v]:
            up[v] += 1
    return up
