import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import as_stream, random_graph
from dpgs.densest import DsgConstants, DsgDriver, DsgSampler, static_dp_dsg
from dpgs.dp import InvalidParameter, LaplaceSampler, PrivacyLedger, UniformTape
from dpgs.harness.generators import gen_planted_stream
from dpgs.oracles import density_of, exact_density
from dpgs.stream import NOOP, EdgeUpdate, InvalidUpdate, UpdateStream, edge_neighbor
from dpgs.util import lg, log_base

K4 = list(itertools.combinations(range(4), 2))


def test_static_exact_examples():
    assert static_dp_dsg(2, [(0, 1)], 1.0, "exact") == frozenset({0, 1})
    S = static_dp_dsg(6, K4 + [(4, 5)], 1.0, "exact")
    assert S == frozenset(range(4)) and density_of(K4, S) == Fraction(3, 2)
    assert static_dp_dsg(5, [], 1.0, "dp") == frozenset(range(5))
    with pytest.raises(InvalidParameter):
        static_dp_dsg(3, [(0, 1)], 1.0, "other")


def test_static_dp_on_clique_with_isolated_vertices():
    # contract: factor 2 with additive O(log n / eps); constant 4 here
    n, eps = 40, 16.0
    K = list(itertools.combinations(range(20), 2))
    opt = exact_density(n, K).density
    bound = opt / 2 - 4 * lg(n) / eps
    ok = sum(density_of(K, static_dp_dsg(n, K, eps, "dp", np.random.default_rng(s))) >= bound
             for s in range(50))
    assert ok >= 45


def test_static_dp_test_mode_is_deterministic_given_rng():
    a = static_dp_dsg(10, K4, 2.0, "dp", np.random.default_rng(3), test_mode=True)
    b = static_dp_dsg(10, K4, 2.0, "dp", np.random.default_rng(3), test_mode=True)
    assert a == b


def make_sampler(n, coins, eps=1.0, eta=1.0, consts=None):
    return DsgSampler(n, eps, eta, eps / 3, LaplaceSampler(None, test_mode=True), coins,
                      consts)


def test_sampler_keeps_everything_while_p_is_one():
    s = make_sampler(20, np.random.default_rng(0))
    E = random_graph(20, 0.3, random.Random(0))
    for m, e in enumerate(E, 1):
        s.sample_edge(EdgeUpdate.insert(*e), m)
    assert s.p == 1.0 and set(s.X) == set(E)


def test_sampler_marginal_law():
    # force one threshold crossing at the last step, then check each edge
    # survives with probability p
    c = DsgConstants(c3=0.01, c4=0.01)
    n, trials = 16, 3000
    E = list(itertools.combinations(range(6), 2))
    hits, ps = 0, set()
    for seed in range(trials):
        s = make_sampler(n, np.random.default_rng(seed), consts=c)
        for m, e in enumerate(E, 1):
            s.sample_edge(EdgeUpdate.insert(*e), m)
        ps.add(s.p)
        hits += E[0] in s.H
        assert all(h <= s.p for h in s.H.values())
    (p,) = ps
    assert p < 1
    assert abs(hits / trials - p) <= 3 * math.sqrt(p * (1 - p) / trials)


@given(st.integers(0, 10 ** 6))
def test_coupled_samples_differ_by_one_edge(seed):
    r = random.Random(seed)
    n = 12
    E = random_graph(n, 0.5, r)
    r.shuffle(E)
    if not E:
        return
    s1 = as_stream(n, E)
    s2 = edge_neighbor(s1, r.randint(1, len(E)))
    coins = np.random.default_rng(seed).random(len(E))
    c = DsgConstants(c3=0.05, c4=0.05)
    a = make_sampler(n, UniformTape(coins), consts=c)
    b = make_sampler(n, UniformTape(coins), consts=c)
    ma = mb = 0
    for x, y in zip(s1, s2):
        ma += not x.is_noop
        mb += not y.is_noop
        a.sample_edge(x, ma)
        b.sample_edge(y, mb)
        if a.p != b.p:
            break
        assert len(set(a.X) ^ set(b.X)) <= 1


def test_all_noop_stream_releases_everything():
    d = DsgDriver(8, 1.0, 1.0, seed=0)
    assert all(d.process(NOOP) == frozenset(range(8)) for _ in range(10))


def test_planted_clique_released_exactly():
    n, eps, eta = 100, 1.0, 1.0
    # initial L sits between the densities of K10 minus an edge (4.4) and K10 (4.5)
    c1 = 4.45 * eps * eta / ((1 + eta) * lg(n) ** 2)
    consts = DsgConstants(c1=c1, c3=1e6)
    E = list(itertools.combinations(range(10), 2))
    random.Random(1).shuffle(E)
    d = DsgDriver(n, eps, eta, seed=0, test_mode=True, consts=consts, mode="exact")
    for up in as_stream(n, E):
        S = d.process(up)
    assert d.sampler.p == 1.0
    assert density_of(E, S) == Fraction(9, 2)
    assert d.above_times == [len(E)]


def test_released_density_never_exceeds_opt():
    s = gen_planted_stream(40, 0.05, 8, seed=2)
    d = DsgDriver(40, 8.0, 1.0, seed=1)
    edges = []
    for up in s:
        S = d.process(up)
        edges.append(up.edge)
        assert density_of(edges, S) <= exact_density(40, edges).density


def test_literal_release_resets_on_below():
    consts = DsgConstants(c1=0.01, c3=1e6)
    d = DsgDriver(6, 1.0, 1.0, seed=0, test_mode=True, consts=consts, mode="exact",
                  release="literal")
    out = [d.process(u) for u in as_stream(6, K4)]
    assert out[0] == frozenset({0, 1})
    assert frozenset(range(6)) in out


def test_driver_parameters_and_ledger():
    led = PrivacyLedger()
    d = DsgDriver(64, 3.0, 0.5, seed=0, ledger=led)
    ln = log_base(64, 1.5)
    assert d.eps2 == pytest.approx(1.0)
    assert d.eps1 == pytest.approx(3.0 / (3 * 4 * ln))
    assert d.L == pytest.approx(1.5 * 4 * 36 / (3.0 * 0.5))
    assert d.sampler.m_prime == pytest.approx(4 * 64 * 36 / (3.0 * 0.25))
    assert led.total == pytest.approx(2.0)


def test_above_count_bounded():
    for seed in range(5):
        s = gen_planted_stream(60, 0.1, 12, seed=seed)
        d = DsgDriver(60, 2.0, 1.0, seed=seed)
        for up in s:
            d.process(up)
        assert len(d.above_times) <= d.svt.c + 1


def test_driver_rejects_deletes():
    d = DsgDriver(4, 1.0, 1.0)
    with pytest.raises(InvalidUpdate):
        d.process(EdgeUpdate.delete(0, 1))
    with pytest.raises(InvalidParameter):
        DsgDriver(4, 1.0, 1.0, release="sometimes")


def test_sampling_concentration_on_optimal_set():
    n, eps, eta = 200, 64.0, 1.0
    s = gen_planted_stream(n, 0.05, 30, seed=4)
    E = s.edges_in_order()
    res = exact_density(n, E)
    p = min(1.0, 4 * n * lg(n) ** 2 / (eps * eta ** 2 * len(E)))
    assert p < 1
    rng = np.random.default_rng(0)
    for _ in range(100):
        X = [e for e in E if rng.random() <= p]
        assert abs(density_of(X, res.witness) / p - res.density) <= eta * res.density
