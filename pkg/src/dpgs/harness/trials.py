"""Single-seed experiment trials shared by the scripts and the acceptance suite.

Each function takes a seed (plus parameters) and returns a plain dict of
measurements, so it can run in a worker process and be aggregated afterwards.
"""

from __future__ import annotations

import random
from collections import defaultdict

from dpgs.densest import DsgDriver
from dpgs.harness.generators import (forest_union_edges, gen_bounded_arboricity_stream,
                                     gen_clique_pendants, gen_planted_stream)
from dpgs.kcore import CoreLevels
from dpgs.matching import EdgeDpMatching, MatchingConstants
from dpgs.oracles import (IncrementalMatching, density_of, exact_core_numbers,
                          exact_density, exact_min_vertex_cover)
from dpgs.stream import UpdateStream, EdgeUpdate
from dpgs.vertex_cover import CoverConfig, implicit_cover, semi_stream_vc


def best_good_edges(edges, alpha_tilde: int) -> int:
    """max over prefixes t of the good-edge count of the first t edges.

    Appending an edge adds one later arrival at its two endpoints, so only
    edges at those endpoints can turn bad; the count is kept incrementally.
    """
    later = defaultdict(int)
    inc = defaultdict(list)
    good, best = 0, 0
    bad = set()
    for i, (u, v) in enumerate(edges):
        for w in (u, v):
            for j in inc[w]:
                if j in bad:
                    continue
                a, b = edges[j]
                if later[(j, a)] > alpha_tilde or later[(j, b)] > alpha_tilde:
                    continue
                later[(j, w)] += 1
                if later[(j, w)] > alpha_tilde:
                    bad.add(j)
                    good -= 1
        inc[u].append(i)
        inc[v].append(i)
        good += 1
        best = max(best, good)
    return best


def matching_utility(seed: int, n: int = 500, alpha: int = 2, T: int = 2000,
                     eps: float = 2.0, eta: float = 0.5,
                     consts: MatchingConstants | None = None) -> dict:
    s = gen_bounded_arboricity_stream(n, alpha, T, seed=seed)
    m = EdgeDpMatching(n, alpha, eps, eta, seed=seed, consts=consts)
    for up in s:
        m.process(up)
    return {"seed": seed, "estimate": m.estimate, "target": best_good_edges(
        s.edges_in_order(), alpha), "peak": m.peak, "aborted": m.aborted}


def vertex_cover_quality(seed: int, eps: float = 8.0, eta: float = 1.0) -> dict:
    rng = random.Random(seed)
    alpha = rng.randint(1, 3)
    n = rng.randint(2, 10)
    edges = forest_union_edges(n, alpha, rng)
    s = UpdateStream(n, [EdgeUpdate.insert(*e) for e in edges])
    cover = semi_stream_vc(s, alpha, eta, eps, seed=seed,
                           config=CoverConfig(on_empty="random"))
    C = implicit_cover(edges, cover, n)
    return {"seed": seed, "n": n, "alpha": alpha, "size": len(C),
            "opt": len(exact_min_vertex_cover(n, edges)),
            "covers": all(u in C or v in C for u, v in edges)}


def dsg_trace(seed: int, n: int = 150, p: float = 0.02, k: int = 15, eps: float = 8.0,
              eta: float = 0.5, mode: str = "dp", test_mode: bool = False) -> dict:
    """Released and optimal density after every update."""
    s = gen_planted_stream(n, p, k, seed=seed)
    d = DsgDriver(n, eps, eta, seed=seed, test_mode=test_mode, mode=mode)
    edges, released, opt = [], [], []
    witness = None
    for up in s:
        S = d.process(up)
        edges.append(up.edge)
        released.append(density_of(edges, S))
        r = exact_density(n, edges, "newton", start=witness)
        witness = r.witness
        opt.append(r.density)
    return {"seed": seed, "released": released, "opt": opt, "above": d.above_times,
            "aborted": d.aborted}


def kcore_run(seed: int, k: int = 30, leaves: int = 200, eps: float = 8.0,
              eta: float = 1.0, test_mode: bool = False) -> dict:
    s = gen_clique_pendants(k, leaves, seed=seed)
    c = CoreLevels(s.n, eps, eta, seed=seed, test_mode=test_mode)
    monotone = True
    prev = c.levels.copy()
    for up in s:
        c.process(up)
        monotone &= bool((c.levels >= prev).all())
        prev = c.levels.copy()
    core = exact_core_numbers(s.n, s.edges_in_order())
    return {"seed": seed, "estimates": c.release().tolist(), "core": core,
            "monotone": monotone, "max_count": int(c.count.max(initial=0)),
            "budget": c.budget, "frozen": bool(c.frozen.any()), "L": c.L}
