"""Empirical checks of sensitivity and privacy claims.

Every audit returns an AuditReport whose ``violations`` must be zero for the
claim to hold on the enumerated or sampled inputs.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from dpgs.dp import Answer, LaplaceSampler, SvtInstance, TapeSampler, UniformTape
from dpgs.matching import EdgeDpMatching, MatchingConstants
from dpgs.oracles import greedy_matching_size
from dpgs.sparsify import sparsify_stream, stream_edit_distance
from dpgs.stream import NOOP, EdgeUpdate, UpdateStream, node_neighbor
from dpgs.vertex_cover import cover_size_under_permutation
from dpgs.harness.generators import gen_gnp_stream


class NotEnumerable(ValueError):
    pass


@dataclass
class AuditReport:
    name: str
    bound: float
    worst: float = 0.0
    checked: int = 0
    skipped: int = 0
    violations: int = 0
    example: object = None
    extra: dict = field(default_factory=dict)

    def observe(self, value: float, example=None) -> None:
        self.checked += 1
        if value > self.worst:
            self.worst = value
        if value > self.bound:
            self.violations += 1
            if self.example is None:
                self.example = example

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def counterexample(self) -> str:
        """The first violating input; stream pairs are written in the stream
        file format, separated by a blank line."""
        ex = self.example
        if isinstance(ex, tuple) and ex and all(isinstance(x, UpdateStream) for x in ex):
            return "\n".join(x.dumps() for x in ex)
        return repr(ex)

    def summary(self) -> str:
        return (f"{self.name}: checked={self.checked} skipped={self.skipped} "
                f"worst={self.worst:g} bound={self.bound:g} violations={self.violations}")


def normal_form_extensions(used: set, labels: int, n: int):
    """Next edges for a stream whose vertices are labelled in order of first
    appearance; each isomorphism class of edge sequence is produced once."""
    for a in range(min(labels + 1, n)):
        top = labels + 1 if a == labels else labels
        lo = labels + 1 if a == labels else a + 1
        for b in range(lo, min(top + 1, n)):
            if (a, b) not in used:
                yield (a, b), max(labels, b + 1)


def audit_matching_coupled(n: int = 5, T: int = 8, alphas=(1, 2), seeds=range(5),
                           eps: float = 4.0, eta: float = 1.0,
                           consts: MatchingConstants | None = None,
                           test_mode: bool = False,
                           max_nodes: int = 5_000_000) -> AuditReport:
    """| |S_t| - |S'_t| | <= 2 over all edge-neighboring insertion-only pairs.

    Streams are enumerated up to vertex relabelling at full length T; every
    shorter stream is a prefix of one of these, and the pair differing at t*
    is compared at every later step. Both runs share their uniforms, so a
    comparison is skipped only when the subsampling schedules differ or a run
    has frozen after an abort.
    """
    if n > 6 or T > 10:
        raise NotEnumerable(f"n={n}, T={T} is too large to enumerate")
    consts = consts or MatchingConstants()
    rep = AuditReport("matching |S_t| coupled sensitivity", 2)
    rep.extra["nodes"] = 0
    for alpha in alphas:
        for seed in seeds:
            rng = np.random.default_rng(seed)
            noise = rng.random(4096).tolist()
            coins = rng.random(T + 1).tolist()
            root = EdgeDpMatching(n, alpha, eps, eta, consts=consts,
                                  noise=TapeSampler(noise, test_mode),
                                  coins=UniformTape(coins))
            _dfs(root, [], set(), 0, T, n, rep, max_nodes, (alpha, seed), [])
    return rep


def _dfs(base, twins, used, labels, T, n, rep, max_nodes, tag, prefix):
    if len(prefix) == T:
        return
    for e, nl in normal_form_extensions(used, labels, n):
        rep.extra["nodes"] += 1
        if rep.extra["nodes"] > max_nodes:
            raise NotEnumerable("node budget exceeded")
        up = EdgeUpdate.insert(*e)
        nb = base.clone()
        nb.process(up)
        tw_new = []
        for t_star, tw in twins:
            c = tw.clone()
            c.process(up)
            tw_new.append((t_star, c))
        c = base.clone()
        c.process(NOOP)
        tw_new.append((len(prefix) + 1, c))
        for t_star, tw in tw_new:
            if nb.aborted or tw.aborted or nb.halvings != tw.halvings:
                rep.skipped += 1
                continue
            rep.observe(abs(len(nb.sample) - len(tw.sample)),
                        (tag, tuple(prefix) + (e,), t_star))
        used.add(e)
        prefix.append(e)
        _dfs(nb, tw_new, used, nl, T, n, rep, max_nodes, tag, prefix)
        prefix.pop()
        used.discard(e)


def audit_sparsifier(pairs: int = 1000, n: int = 50, caps=(4, 8), seed=0) -> dict:
    """Edit distance between degree-capped outputs of node-neighboring streams.

    Inputs are G(n, p) streams whose mean degree is drawn uniformly from
    [1, 3 * cap], so both unsaturated and saturated regimes occur.
    """
    rng = random.Random(seed)
    reports = {}
    for cap in caps:
        rep = AuditReport(f"sparsifier edit distance, cap={cap}", 2 * cap)
        for i in range(pairs):
            d = rng.uniform(1, 3 * cap)
            s = gen_gnp_stream(n, min(1.0, d / (n - 1)), seed=rng.randrange(2 ** 32))
            v = rng.randrange(n)
            nb = node_neighbor(s, v)
            d = stream_edit_distance(sparsify_stream(s, cap), sparsify_stream(nb, cap))
            rep.observe(d, (s, nb))
        reports[cap] = rep
    return reports


def audit_cover_sensitivity(n_max: int = 6) -> AuditReport:
    """Fixed-ordering cover size changes by at most 1 when one edge is removed.

    Ranging over every labelled graph with the identity ordering covers every
    (graph, ordering) pair up to relabelling.
    """
    if n_max > 7:
        raise NotEnumerable(f"n={n_max} is too large to enumerate")
    rep = AuditReport("fixed-ordering cover size edge sensitivity", 1)
    for n in range(1, n_max + 1):
        pi = list(range(n))
        all_e = list(itertools.combinations(range(n), 2))
        for mask in range(1 << len(all_e)):
            E = [e for i, e in enumerate(all_e) if mask >> i & 1]
            full = cover_size_under_permutation(E, pi)
            for i in range(len(E)):
                rep.observe(abs(full - cover_size_under_permutation(E[:i] + E[i + 1:], pi)),
                            (n, E, i))
    return rep


def audit_greedy_node(pairs: int = 500, n: int = 30, seed=0) -> AuditReport:
    """Greedy maximal matching size under removal of one vertex's edges."""
    rng = random.Random(seed)
    rep = AuditReport("greedy matching node sensitivity", 1)
    for _ in range(pairs):
        s = gen_gnp_stream(n, rng.uniform(0.02, 0.4), seed=rng.randrange(2 ** 32))
        v = rng.randrange(n)
        nb = node_neighbor(s, v)
        a = greedy_matching_size(s.edges_in_order())
        b = greedy_matching_size(nb.edges_in_order())
        rep.observe(abs(a - b), (s, nb))
    return rep


def answer_vector(svt: SvtInstance, queries, thresholds) -> tuple:
    return tuple(svt.process(q, t).value for q, t in zip(queries, thresholds))


def svt_privacy_ratio(trials: int = 200_000, eps: float = 1.0, delta: float = 1.0,
                      c: float = 1, queries=(1.0, 1.0, 1.0, 1.0),
                      neighbor=(0.0, 0.0, 0.0, 0.0), thresholds=(1.0, 1.0, 1.0, 1.0),
                      min_count: int = 2000, slack: float = 1.15, seed=0) -> AuditReport:
    """Largest frequency ratio of an answer vector between two neighboring
    query sequences, over vectors seen at least ``min_count`` times in both.

    The bound is e^eps times ``slack``, which absorbs sampling error.
    """
    rng = np.random.default_rng(seed)
    counts = []
    for qs in (queries, neighbor):
        sampler = LaplaceSampler(rng)
        cnt = Counter()
        for _ in range(trials):
            cnt[answer_vector(SvtInstance(eps, delta, c, sampler), qs, thresholds)] += 1
        counts.append(cnt)
    rep = AuditReport("svt answer-vector frequency ratio", float(np.e ** eps) * slack)
    for vec in set(counts[0]) | set(counts[1]):
        a, b = counts[0][vec], counts[1][vec]
        if min(a, b) < min_count:
            rep.skipped += 1
            continue
        rep.observe(max(a / b, b / a), vec)
    rep.extra["counts"] = counts
    return rep
