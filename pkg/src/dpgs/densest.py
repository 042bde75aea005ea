"""Edge-private densest subgraph under continual release.

Edges are kept with probability p via per-edge uniform weights, so lowering p
only ever removes edges. The driver tracks the exact density of the sample with
a sparse vector against a geometrically growing threshold and recomputes a
private vertex set only when the threshold is crossed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from dpgs.dp import (AbortExceeded, Answer, InvalidParameter, LaplaceSampler,
                     PrivacyLedger, SvtInstance, laplace_from_uniform, seed_sequence)
from dpgs.oracles import density_of, exact_density
from dpgs.stream import EdgeUpdate, InvalidUpdate, Kind
from dpgs.util import lg, log_base


@dataclass
class DsgConstants:
    c1: float = 4.0
    c2: float = 4.0
    c3: float = 4.0
    c4: float = 4.0
    c5: float = 4.0


def static_dp_dsg(n: int, edges, eps: float, mode: str = "dp",
                  rng: np.random.Generator | None = None,
                  test_mode: bool = False) -> frozenset:
    """Vertex set of a (private) densest subgraph of a static graph.

    ``exact`` is the non-private flow answer. ``dp`` peels vertices with the
    exponential mechanism (budget eps / (2n) per round, low degree preferred)
    and then picks among the n peeling suffixes by report-noisy-max on density
    at budget eps / 2. With no edges the full vertex set is returned.
    """
    edges = list(edges)
    if not edges:
        return frozenset(range(n))
    if mode == "exact":
        return exact_density(n, edges, "newton").witness
    if mode != "dp":
        raise InvalidParameter(f"unknown mode {mode!r}")
    if not eps > 0:
        raise InvalidParameter("eps must be positive")
    rng = rng if rng is not None else np.random.default_rng()
    eps_r = eps / (2 * n)
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    deg = np.array([len(a) for a in adj], dtype=float)
    alive = np.ones(n, dtype=bool)
    order = []
    m_left = [len(edges)]
    m = len(edges)
    for _ in range(n - 1):
        idx = np.flatnonzero(alive)
        logits = -eps_r * deg[idx] / 2
        wt = np.exp(logits - logits.max())
        cum = np.cumsum(wt)
        k = min(int(np.searchsorted(cum, rng.random() * cum[-1], side="right")),
                len(idx) - 1)
        x = int(idx[k])
        alive[x] = False
        order.append(x)
        for y in adj[x]:
            if alive[y]:
                deg[y] -= 1
                m -= 1
        m_left.append(m)
    order.append(int(np.flatnonzero(alive)[0]))
    dens = np.array([m_left[i] / (n - i) for i in range(n)])
    u = rng.random(n)
    noisy = dens if test_mode else dens + laplace_from_uniform(u, 2 / (eps / 2))
    i = int(np.argmax(noisy))
    return frozenset(order[i:])


class DsgSampler:
    """Edge sample X with e in X iff its weight h_e <= p."""

    def __init__(self, n: int, eps: float, eta: float, svt_eps: float,
                 noise: LaplaceSampler, coins: np.random.Generator,
                 consts: DsgConstants | None = None, scale: float = 1.0):
        c = consts or DsgConstants()
        self.n, self.eps, self.eta, self.c4 = n, eps, eta, c.c4
        self.scale = scale
        self.m_prime = c.c3 * n * lg(n) ** 2 * scale / (eps * eta ** 2)
        self.p = 1.0
        self.H: dict[tuple[int, int], float] = {}
        self.svt = SvtInstance(svt_eps, 1, c.c5 * log_base(n, 1 + eta), noise,
                               "dsg_edge_count")
        self.coins = coins
        self.aborted = False
        self.version = 0

    def sample_edge(self, up: EdgeUpdate, m: int) -> None:
        if not self.aborted:
            ans = self.svt.process(m, self.m_prime)
            if ans is Answer.ABOVE:
                self.m_prime *= 1 + self.eta
                self.p = min(1.0, self.c4 * self.n * lg(self.n) ** 2 * self.scale
                             / (self.eps * self.eta ** 2 * self.m_prime))
                drop = [e for e, h in self.H.items() if h > self.p]
                for e in drop:
                    del self.H[e]
                if drop:
                    self.version += 1
            elif ans is Answer.ABORT:
                self.aborted = True
        h = self.coins.random()  # drawn every step so neighbors stay coupled
        if not up.is_noop and h <= self.p:
            self.H[up.edge] = h
            self.version += 1

    @property
    def X(self) -> list[tuple[int, int]]:
        return list(self.H)


class DsgDriver:
    """Releases a vertex set per update.

    ``release="persist"`` keeps the last computed set between Above answers
    (the full vertex set before the first one); ``release="literal"`` resets to
    the full vertex set on every Below. ``precise`` scales m', L and p by
    lg^3 n for the (1 + eta)-multiplicative setting.
    """

    def __init__(self, n: int, eps: float, eta: float, seed=None,
                 test_mode: bool = False, consts: DsgConstants | None = None,
                 mode: str = "dp", release: str = "persist", precise: bool = False,
                 ledger: PrivacyLedger | None = None, on_abort: str = "freeze"):
        if not eps > 0 or not eta > 0:
            raise InvalidParameter("eps and eta must be positive")
        if release not in ("persist", "literal"):
            raise InvalidParameter(f"unknown release mode {release!r}")
        c = consts or DsgConstants()
        self.n, self.eps, self.eta = n, eps, eta
        self.mode, self.release, self.test_mode = mode, release, test_mode
        self.on_abort = on_abort
        scale = lg(n) ** 3 if precise else 1.0
        ln = log_base(n, 1 + eta)
        self.eps1 = eps / (3 * c.c2 * ln)
        self.eps2 = eps / 3
        self.L = (1 + eta) * c.c1 * lg(n) ** 2 * scale / (eps * eta)
        s_noise, s_coins, s_static = seed_sequence(seed).spawn(3)
        noise = LaplaceSampler(np.random.default_rng(s_noise), test_mode)
        self.svt = SvtInstance(self.eps2, 1, c.c2 * ln, noise, "dsg_density")
        self.sampler = DsgSampler(n, eps, eta, self.eps2, noise,
                                  np.random.default_rng(s_coins), c, scale)
        self.static_rng = np.random.default_rng(s_static)
        self.ledger = ledger
        if ledger is not None:
            ledger.charge("dsg.edge_count_svt", self.eps2)
            ledger.charge("dsg.density_svt", self.eps2)
        self.m = 0
        self.S = frozenset(range(n))
        self.D = Fraction(0)
        self._seen = -1
        self._witness = None
        self.aborted = False
        self.above_times: list[int] = []
        self.t = 0

    def _density(self) -> Fraction:
        if self.sampler.version != self._seen:
            X = self.sampler.X
            start = self._witness if self._witness and density_of(X, self._witness) > 0 else None
            r = exact_density(self.n, X, "newton", start=start)
            self.D, self._witness = r.density, r.witness
            self._seen = self.sampler.version
        return self.D

    def process(self, up: EdgeUpdate) -> frozenset:
        if up.kind is Kind.DEL:
            raise InvalidUpdate("densest subgraph accepts insertion-only streams")
        self.t += 1
        if not up.is_noop:
            self.m += 1
        self.sampler.sample_edge(up, self.m)
        if self.sampler.aborted and not self.aborted:
            self._abort("edge-count")
        if self.aborted:
            return self.S
        D = self._density()
        ans = self.svt.process(float(D), self.sampler.p * self.L)
        if ans is Answer.ABOVE:
            self.L *= 1 + self.eta
            self.above_times.append(self.t)
            self.S = static_dp_dsg(self.n, self.sampler.X, self.eps1, self.mode,
                                   self.static_rng, self.test_mode)
            if self.ledger is not None and self.mode == "dp":
                self.ledger.charge("dsg.static", self.eps1)
        elif ans is Answer.ABORT:
            self._abort("density")
        elif self.release == "literal":
            self.S = frozenset(range(self.n))
        return self.S

    def _abort(self, which):
        first = not self.aborted
        self.aborted = True
        if first and self.on_abort == "raise":
            raise AbortExceeded(f"{which} SVT exhausted at t={self.t}")
