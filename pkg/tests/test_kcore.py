import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import as_stream, random_graph
from dpgs.dp import InvalidParameter, PrivacyLedger
from dpgs.harness.generators import gen_gnp_stream
from dpgs.kcore import CoreConstants, CoreLevels, exact_up_degrees
from dpgs.stream import NOOP, EdgeUpdate, InvalidUpdate, edge_neighbor
from dpgs.util import lg, log_base

# p_j = 1 in every group and L below 1, so every group is present
FULL = CoreConstants(c1=1e12, c2=4.0, c3=1e-6)


def feed(c, stream):
    for up in stream:
        c.process(up)
    return c


def test_parameters():
    led = PrivacyLedger()
    c = CoreLevels(64, 2.0, 1.0, seed=0, ledger=led)
    assert c.L == pytest.approx(4 * 216 / 2.0)
    assert c.F == 12
    assert c.Q == list(range(math.ceil(math.log2(c.L)), 13))
    assert c.eps1 == pytest.approx(2.0 / (6 * len(c.Q) * 12))
    assert c.budget == pytest.approx(4 * 6)
    for g, j in enumerate(c.Q):
        assert c.p[g] == pytest.approx(min(1.0, 4 * 216 / (2.0 * 2 ** j)))
    assert led.total == 2.0
    with pytest.raises(InvalidParameter):
        CoreLevels(8, 0.0, 1.0)


def test_isolated_vertex_stays_at_ground_level():
    c = CoreLevels(6, 1.0, 1.0, seed=0, test_mode=True, consts=FULL)
    feed(c, as_stream(6, list(itertools.combinations(range(5), 2))))
    assert (c.levels[:, 5] == 0).all()


def test_clique_climbs_to_top():
    c = CoreLevels(5, 1.0, 1.0, seed=0, test_mode=True, consts=FULL)
    feed(c, as_stream(5, list(itertools.combinations(range(5), 2))))
    for _ in range(c.F):
        c.process(NOOP)
    for g, j in enumerate(c.Q):
        if 2 ** (j - 1) <= 4:
            assert (c.levels[g] == c.top).all(), j


def test_top_endpoints_never_sampled():
    c = CoreLevels(6, 1.0, 1.0, seed=0, test_mode=True, consts=FULL)
    c.levels[:, 0] = c.top
    c.levels[:, 1] = c.top
    c.sample_edge(EdgeUpdate.insert(0, 1))
    assert all(1 not in a[0] for a in c.adj)
    c.sample_edge(EdgeUpdate.insert(0, 2))
    assert all(2 in a[0] for a in c.adj)


def test_inclusion_frequency():
    # one qualifying endpoint: p; two: 1 - (1 - p)^2 (one coin per endpoint)
    c = CoreLevels(4, 1.0, 1.0, seed=3, consts=CoreConstants(c1=0.3 / 8, c3=1e-6))
    g = c.Q.index(0)
    p = c.p[g]
    assert 0 < p < 1
    trials = 10000
    for tops, want in (((0,), p), ((), 1 - (1 - p) ** 2)):
        c.levels[:] = 0
        for w in tops:
            c.levels[g, w] = c.top
        hits = 0
        for _ in range(trials):
            for a in c.adj[g]:
                a.clear()
            c.sample_edge(EdgeUpdate.insert(0, 1))
            hits += 1 in c.adj[g][0]
        assert abs(hits / trials - want) <= 3 * math.sqrt(want * (1 - want) / trials)


def test_up_degree_counters_match_recount():
    c = CoreLevels(30, 4.0, 1.0, seed=1, consts=FULL)
    for up in gen_gnp_stream(30, 0.3, 2):
        c.process(up)
        for g in range(len(c.Q)):
            E = [(u, v) for u in range(30) for v in c.adj[g][u] if u < v]
            assert (exact_up_degrees(30, E, c.levels[g]) == c.up[g]).all()


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6))
def test_levels_monotone_and_budget(seed):
    c = CoreLevels(20, 8.0, 1.0, seed=seed)
    prev = c.levels.copy()
    for up in gen_gnp_stream(20, 0.3, seed):
        c.process(up)
        assert (c.levels >= prev).all() and (c.levels <= c.top).all()
        prev = c.levels.copy()
    assert (c.count <= math.floor(c.budget) + 1).all()


def test_transcript_records_only_threshold_crossings():
    c = CoreLevels(25, 1.0, 1.0, seed=0, test_mode=True, consts=FULL, record=True)
    feed(c, gen_gnp_stream(25, 0.4, 5))
    assert c.transcript
    ascents = np.zeros_like(c.levels)
    for t, j, v, l, up in c.transcript:
        g = c.Q.index(j)
        assert up >= c.thr[g]
        assert l == ascents[g, v]
        ascents[g, v] += 1
    assert (ascents == c.levels).all()


def test_release_rules():
    c = CoreLevels(16, 1.0, 1.0, seed=0)
    assert (c.release() == 1).all()
    g = len(c.Q) - 1
    j = c.Q[g]
    c.levels[g, 3] = c.top
    est = c.release()
    want = 3.0 * 2 ** j if 2 ** j > c.L else 1.0
    assert est[3] == want and est[2] == 1.0
    assert set(np.unique(est)) <= {1.0} | {3.0 * 2 ** q for q in c.Q if 2 ** q > c.L}


def full_up_degree(n, edges, levels, v, at):
    return sum(1 for a, b in edges if v in (a, b) and levels[b if a == v else a] >= at)


@pytest.mark.parametrize("seed", range(5))
def test_level_invariants_noise_free(seed):
    n = 24
    c = CoreLevels(n, 1.0, 1.0, seed=seed, test_mode=True, consts=FULL)
    E = []
    for up in gen_gnp_stream(n, 0.35, seed):
        c.process(up)
        E.append(up.edge)
    b = 1 + c.eta
    for g, j in enumerate(c.Q):
        lv = c.levels[g]
        for v in range(n):
            l = lv[v]
            if l < c.top and not c.frozen[g, v]:
                assert full_up_degree(n, E, lv, v, l) <= b ** j
            if l > 0:
                assert full_up_degree(n, E, lv, v, l - 1) >= b ** (j - 2)


@settings(max_examples=20)
@given(st.integers(0, 10 ** 6))
def test_coupled_transcripts_first_differ_at_endpoints(seed):
    r = random.Random(seed)
    s = gen_gnp_stream(12, 0.5, seed)
    if len(s) == 0:
        return
    t_star = r.randint(1, len(s))
    e = s[t_star - 1].edge
    s2 = edge_neighbor(s, t_star)
    a = feed(CoreLevels(12, 2.0, 1.0, seed=seed, record=True), s)
    b = feed(CoreLevels(12, 2.0, 1.0, seed=seed, record=True), s2)
    key = lambda x: x[:4]
    ta, tb = [key(x) for x in a.transcript], [key(x) for x in b.transcript]
    for x, y in itertools.zip_longest(ta, tb):
        if x != y:
            first = min(z for z in (x, y) if z is not None)
            assert first[0] >= t_star
            assert first[2] in e
            break


def test_rejects_deletes():
    c = CoreLevels(4, 1.0, 1.0)
    with pytest.raises(InvalidUpdate):
        c.process(EdgeUpdate.delete(0, 1))


def test_noise_consumption_is_data_independent():
    a = feed(CoreLevels(10, 1.0, 1.0, seed=4), as_stream(10, [(0, 1), (2, 3)]))
    b = feed(CoreLevels(10, 1.0, 1.0, seed=4), [NOOP, NOOP])
    assert a.noise_rng.random() == b.noise_rng.random()
    assert a.coins.random() == b.coins.random()


def test_empty_group_range():
    c = feed(CoreLevels(4, 1.0, 1.0, seed=0), as_stream(4, [(0, 1), (1, 2)]))
    assert c.Q == [] and (c.release() == 1).all()
