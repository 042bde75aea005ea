"""Edge-private matching-size estimation for insertion-only streams.

The estimator keeps a random sample S of the "good" edges: edges with at most
alpha_tilde later-arriving edges at each endpoint. On bounded-arboricity graphs
the number of good edges is within a factor alpha_tilde + 2 of the maximum
matching, and it has edge sensitivity 2, so a sparse vector over |S| / p
tracks it privately in sublinear space.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from dpgs.dp import (AbortExceeded, Answer, LaplaceSampler, PrivacyLedger,
                     SvtInstance, InvalidParameter, seed_sequence)
from dpgs.oracles import exact_core_numbers
from dpgs.stream import EdgeUpdate, InvalidUpdate, Kind
from dpgs.util import lg


def good_edge_count(edges, alpha_tilde: int) -> int:
    """Number of edges with at most alpha_tilde later edges at both endpoints."""
    later: dict[int, int] = defaultdict(int)
    good = 0
    for u, v in reversed(list(edges)):
        if later[u] <= alpha_tilde and later[v] <= alpha_tilde:
            good += 1
        later[u] += 1
        later[v] += 1
    return good


class MatchSample:
    """The sampled set S with per-endpoint later-arrival counters.

    Each stored edge keeps its arrival coin h; it stays sampled while h <= p,
    so halving p drops every stored edge independently with probability 1/2.
    """

    def __init__(self, alpha_tilde: int):
        self.alpha = alpha_tilde
        self.S: dict[tuple[int, int], list] = {}
        self.inc: dict[int, set] = defaultdict(set)

    def __len__(self) -> int:
        return len(self.S)

    def _remove(self, e):
        del self.S[e]
        self.inc[e[0]].discard(e)
        self.inc[e[1]].discard(e)

    def insert(self, e: tuple[int, int], h: float, p: float) -> None:
        for w in e:
            for f in list(self.inc[w]):
                c = self.S[f]
                k = 1 if f[0] == w else 2
                c[k] += 1
                if c[k] > self.alpha:
                    self._remove(f)
        if h <= p:
            self.S[e] = [h, 0, 0]
            self.inc[e[0]].add(e)
            self.inc[e[1]].add(e)

    def subsample(self, p: float) -> None:
        for e in [e for e, c in self.S.items() if c[0] > p]:
            self._remove(e)

    def clone(self) -> "MatchSample":
        s = MatchSample(self.alpha)
        s.S = {e: list(c) for e, c in self.S.items()}
        s.inc = defaultdict(set, {w: set(es) for w, es in self.inc.items() if es})
        return s


@dataclass
class MatchingConstants:
    # a1, a2 scale the Above budgets (and hence the query noise) of the
    # subsample and estimate sparse vectors; a3 scales the subsample threshold
    a1: float = 1.0
    a2: float = 1.5
    a3: float = 8.0


class EdgeDpMatching:
    """Continual-release estimate of the good-edge count, eps-edge-private.

    Emits (1 + eta)^j per timestep. If either sparse vector runs out of Above
    answers the estimate freezes; with ``on_abort="raise"`` the first abort
    also raises AbortExceeded.
    """

    def __init__(self, n: int, alpha_tilde: int, eps: float, eta: float,
                 seed=None, test_mode: bool = False,
                 consts: MatchingConstants | None = None,
                 noise: LaplaceSampler | None = None,
                 coins=None,
                 ledger: PrivacyLedger | None = None,
                 on_abort: str = "freeze"):
        if not eps > 0 or not eta > 0:
            raise InvalidParameter("eps and eta must be positive")
        if alpha_tilde < 1:
            raise InvalidParameter("alpha_tilde must be at least 1")
        self.n, self.eps, self.eta = n, eps, eta
        self.consts = consts or MatchingConstants()
        ss = seed_sequence(seed)
        s_noise, s_coins = ss.spawn(2)
        self.noise = noise or LaplaceSampler(np.random.default_rng(s_noise), test_mode)
        self.coins = coins if coins is not None else np.random.default_rng(s_coins)
        c = self.consts
        self.q1 = c.a1 * lg(n)
        self.q2 = c.a2 * lg(n) / eta
        self.sub_threshold = c.a3 * lg(n) ** 2 / (eps * eta ** 2)
        self.sub_svt = SvtInstance(eps / 2, 2, self.q1, self.noise, "subsample")
        self.est_svt = SvtInstance(eps / 2, 2, self.q2, self.noise, "estimate")
        if ledger is not None:
            ledger.charge("matching.subsample_svt", eps / 2)
            ledger.charge("matching.estimate_svt", eps / 2)
        self.sample = MatchSample(alpha_tilde)
        self.p = 1.0
        self.halvings: tuple[int, ...] = ()
        self.j = 0
        self.estimate = 1.0
        self.aborted = False
        self.on_abort = on_abort
        self.peak = 0
        self.t = 0

    def _abort(self, which: str):
        first = not self.aborted
        self.aborted = True
        if first and self.on_abort == "raise":
            raise AbortExceeded(f"{which} SVT exhausted at t={self.t}")

    def process(self, up: EdgeUpdate) -> float:
        if up.kind is Kind.DEL:
            raise InvalidUpdate("edge-DP matching accepts insertion-only streams")
        self.t += 1
        h = self.coins.random()  # drawn every step so neighbors stay coupled
        if self.aborted:
            return self.estimate
        if not up.is_noop:
            self.sample.insert(up.edge, h, self.p)
        self.peak = max(self.peak, len(self.sample))
        while True:
            ans = self.est_svt.process(len(self.sample), self.p * (1 + self.eta) ** self.j)
            if ans is Answer.ABOVE:
                self.j += 1
                continue
            if ans is Answer.ABORT:
                self._abort("estimate")
                return self.estimate
            break
        self.estimate = (1 + self.eta) ** self.j
        ans = self.sub_svt.process(len(self.sample), self.sub_threshold)
        if ans is Answer.ABOVE:
            self.p /= 2
            self.halvings += (self.t,)
            self.sample.subsample(self.p)
        elif ans is Answer.ABORT:
            self._abort("subsample")
        return self.estimate

    def above_counts(self) -> str:
        return f"{self.sub_svt.count};{self.est_svt.count}"

    def clone(self) -> "EdgeDpMatching":
        """Deep copy sharing nothing mutable; the noise sampler must be a tape."""
        c = object.__new__(EdgeDpMatching)
        c.__dict__.update(self.__dict__)
        c.noise = self.noise.clone()
        if hasattr(self.coins, "clone"):
            c.coins = self.coins.clone()
        c.sub_svt = self.sub_svt.clone(c.noise)
        c.est_svt = self.est_svt.clone(c.noise)
        c.sample = self.sample.clone()
        return c


class DegeneracyEstimate:
    """Private running upper estimate of arboricity via the degeneracy.

    Degeneracy changes by at most 1 per edge, so a sensitivity-1 sparse vector
    over thresholds 2^k yields a monotone power-of-two estimate.
    """

    def __init__(self, n: int, eps: float, noise: LaplaceSampler, c: float | None = None):
        self.n = n
        self.edges: list[tuple[int, int]] = []
        self.svt = SvtInstance(eps, 1, c or max(1.0, lg(n)), noise, "degeneracy")
        self.k = 0

    def process(self, up: EdgeUpdate) -> int:
        if not up.is_noop:
            self.edges.append(up.edge)
        d = max(exact_core_numbers(self.n, self.edges), default=0)
        while self.svt.process(d, 2 ** self.k) is Answer.ABOVE:
            self.k += 1
        return 2 ** self.k


class ArboricityGuessingMatching:
    """Runs instances for alpha_tilde = 2^1 .. 2^ceil(lg n) and reports the one
    matching a private degeneracy estimate.

    Half the budget goes to the estimate, the rest is split evenly over the
    instances.
    """

    def __init__(self, n: int, eps: float, eta: float, seed=None,
                 test_mode: bool = False, consts: MatchingConstants | None = None,
                 ledger: PrivacyLedger | None = None):
        ss = seed_sequence(seed)
        kids = ss.spawn(2)
        levels = max(1, math.ceil(lg(n)))
        self.alphas = [2 ** i for i in range(1, levels + 1)]
        inner_eps = eps / 2 / len(self.alphas)
        self.instances = [EdgeDpMatching(n, a, inner_eps, eta, seed=s,
                                         test_mode=test_mode, consts=consts,
                                         ledger=ledger)
                          for a, s in zip(self.alphas, kids[0].spawn(len(self.alphas)))]
        self.guess = DegeneracyEstimate(
            n, eps / 2, LaplaceSampler(np.random.default_rng(kids[1]), test_mode))
        if ledger is not None:
            ledger.charge("matching.degeneracy_svt", eps / 2)

        self.selected = self.instances[0]

    def process(self, up: EdgeUpdate) -> float:
        for inst in self.instances:
            inst.process(up)
        a = self.guess.process(up)
        self.selected = next((inst for alpha, inst in zip(self.alphas, self.instances)
                              if alpha >= a), self.instances[-1])
        return self.selected.estimate

    @property
    def aborted(self) -> bool:
        return any(i.aborted for i in self.instances)
