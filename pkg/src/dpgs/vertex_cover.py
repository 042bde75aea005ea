"""Node-private implicit vertex cover in one pass over an insertion-only stream.

The released object is a vertex ordering pi plus a degree threshold Lambda.
An edge is covered by an endpoint of degree above Lambda when one exists, and
otherwise by whichever endpoint comes first in pi. Each vertex can apply the
rule locally from its own degree, so the cover itself is never published.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from dpgs.dp import InvalidParameter, LaplaceSampler, PrivacyLedger, seed_sequence
from dpgs.sparsify import DegreeCapFilter
from dpgs.stream import Kind, UpdateStream, prefix_graph, require_insertion_only
from dpgs.util import lg


class EmptySelection(RuntimeError):
    pass


@dataclass(frozen=True)
class ImplicitCover:
    pi: tuple[int, ...]
    lam: int

    def rank(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.pi)}

    def to_json(self) -> str:
        return json.dumps({"pi": list(self.pi), "lambda": self.lam})

    @staticmethod
    def from_json(text: str) -> "ImplicitCover":
        d = json.loads(text)
        pi = tuple(int(v) for v in d["pi"])
        if sorted(pi) != list(range(len(pi))):
            raise InvalidParameter("pi is not a permutation of [0, n)")
        return ImplicitCover(pi, int(d["lambda"]))


def cover_lookup(edge, cover: ImplicitCover, deg, rank=None) -> int:
    rank = rank if rank is not None else cover.rank()
    u, v = edge
    hi = [x for x in (u, v) if deg[x] > cover.lam]
    cands = hi if hi else [u, v]
    return min(cands, key=rank.__getitem__)


def implicit_cover(edges, cover: ImplicitCover, n: int) -> set[int]:
    """The set of vertices the lookup rule assigns to at least one edge."""
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    rank = cover.rank()
    return {cover_lookup(e, cover, deg, rank) for e in edges}


def verify_cover(stream: UpdateStream, cover: ImplicitCover) -> tuple[bool, int]:
    """(covers every final edge, size of the assigned cover)."""
    if len(cover.pi) != stream.n:
        raise InvalidParameter("cover ordering does not match the stream's n")
    edges = prefix_graph(stream, len(stream)).edges()
    c = implicit_cover(edges, cover, stream.n)
    return all(u in c or v in c for u, v in edges), len(c)


def cover_size_under_permutation(edges, pi) -> int:
    """Vertices with an edge oriented to them when each edge goes to its
    earlier endpoint in pi."""
    rank = {v: i for i, v in enumerate(pi)}
    return len({u if rank[u] < rank[v] else v for u, v in edges})


def edge_private_vc(n: int, edges, eps: float, rng: np.random.Generator,
                    w: float | None = None) -> tuple[int, ...]:
    """Ordering built by repeatedly picking a vertex with probability
    proportional to its current degree plus w, then deleting it.

    Once no edges remain the rest follow in uniformly random order.
    """
    if not eps > 0:
        raise InvalidParameter("eps must be positive")
    w = 4.0 / eps if w is None else w
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    deg = np.array([len(a) for a in adj], dtype=float)
    alive = np.ones(n, dtype=bool)
    m = int(deg.sum()) // 2
    pi = []
    while m > 0:
        wt = np.where(alive, deg + w, 0.0)
        cum = np.cumsum(wt)
        x = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
        x = min(x, n - 1)
        pi.append(x)
        alive[x] = False
        for y in adj[x]:
            adj[y].discard(x)
            deg[y] -= 1
        m -= len(adj[x])
        deg[x] = 0
        adj[x] = set()
    rest = np.flatnonzero(alive)
    pi.extend(int(v) for v in rng.permutation(rest))
    return tuple(pi)


def private_selection(mechanism, tau: int, gamma: float, rng: np.random.Generator,
                      p: float | None = None):
    """Run ``mechanism`` in each of tau slots independently with probability p
    (p drawn once, with CDF x^gamma) and keep the lowest noisy score.

    ``mechanism(rng)`` returns (noisy score, solution). Raises EmptySelection
    when no slot fires.
    """
    if tau < 1:
        raise EmptySelection("no slots")
    if not gamma > 0:
        raise InvalidParameter("gamma must be positive")
    if p is None:
        p = rng.random() ** (1.0 / gamma)
    runs = int(rng.binomial(tau, p))
    best = None
    for _ in range(runs):
        score, sol = mechanism(rng)
        if best is None or score < best[0]:
            best = (score, sol)
    if best is None:
        raise EmptySelection("no slot fired")
    return best[1]


@dataclass
class CoverConfig:
    gamma: float = 2.0 ** -9
    tau: int | None = None      # default 8 * ceil(lg n)
    w: float | None = None      # default 4 / (edge budget)
    on_empty: str = "raise"     # or "random": release a data-independent ordering


def cover_params(alpha_tilde: float, eps: float) -> tuple[float, float]:
    """(xi, Lambda) balancing the high-degree excess against the noise."""
    xi = math.sqrt((2 ** 7 + 2 ** -2) * alpha_tilde / eps)
    return xi, (1 + 1 / xi) * 2 * alpha_tilde


def semi_stream_vc(stream: UpdateStream, alpha_tilde: float, eta: float, eps: float,
                   seed=None, test_mode: bool = False,
                   config: CoverConfig | None = None,
                   ledger: PrivacyLedger | None = None) -> ImplicitCover:
    """Degree-cap the stream, then privately select an ordering of the kept graph.

    ``eta`` is accepted for interface symmetry; the cap here depends only on
    alpha_tilde and eps.
    """
    require_insertion_only(stream)
    cfg = config or CoverConfig()
    n = stream.n
    _, cap = cover_params(alpha_tilde, eps)
    f = DegreeCapFilter(cap)
    kept = [up.edge for up in stream if f.admit(up).kind is Kind.INS]
    gamma = cfg.gamma
    edge_eps = eps / ((2 + 2 * gamma) * 2 * cap)
    score_scale = 2 * cap * (2 + gamma) * (2 + 2 * gamma) / (gamma * eps)
    tau = cfg.tau if cfg.tau is not None else 8 * math.ceil(lg(n))
    rng = np.random.default_rng(seed_sequence(seed))
    noise = LaplaceSampler(rng, test_mode)
    if ledger is not None:
        ledger.charge("vertex_cover.private_selection", eps)

    def run(r):
        pi = edge_private_vc(n, kept, edge_eps, r, cfg.w)
        return cover_size_under_permutation(kept, pi) + noise.sample(score_scale), pi

    try:
        pi = private_selection(run, tau, gamma, rng)
    except EmptySelection:
        if cfg.on_empty != "random":
            raise
        pi = tuple(int(v) for v in rng.permutation(n))
    return ImplicitCover(tuple(pi), math.floor(cap))
