import random
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import as_stream
from dpgs.dp import AbortExceeded, InvalidParameter, PrivacyLedger, TapeSampler, UniformTape
from dpgs.harness.audit import audit_matching_coupled, normal_form_extensions
from dpgs.harness.generators import forest_union_edges
from dpgs.matching import (ArboricityGuessingMatching, DegeneracyEstimate, EdgeDpMatching,
                           MatchSample, MatchingConstants, good_edge_count)
from dpgs.dp import LaplaceSampler
from dpgs.oracles import exact_matching_size
from dpgs.stream import NOOP, EdgeUpdate, InvalidUpdate, edge_neighbor
from dpgs.util import lg


def run(alg, stream):
    return [alg.process(up) for up in stream]


def test_eviction_hand_trace():
    m = EdgeDpMatching(4, 1, 1.0, 1.0, seed=0, test_mode=True)
    run(m, as_stream(4, [(0, 1), (0, 2), (0, 3)]))
    assert set(m.sample.S) == {(0, 2), (0, 3)}
    assert m.sample.S[(0, 2)][1] == 1 and m.sample.S[(0, 3)][1] == 0


def test_good_edges_star_center_outward():
    assert good_edge_count([(0, 1), (0, 2), (0, 3), (0, 4)], 1) == 2
    assert good_edge_count([(3, 7)], 0) == 1
    assert good_edge_count([], 2) == 0


def test_noop_stream_estimate_is_one():
    m = EdgeDpMatching(10, 2, 1.0, 0.5, seed=1, test_mode=True)
    assert run(m, [NOOP] * 20) == [1.0] * 20


def test_rejects_deletions_and_bad_params():
    m = EdgeDpMatching(4, 1, 1.0, 1.0, seed=0)
    with pytest.raises(InvalidUpdate):
        m.process(EdgeUpdate.delete(0, 1))
    with pytest.raises(InvalidParameter):
        EdgeDpMatching(4, 1, 0.0, 1.0)
    with pytest.raises(InvalidParameter):
        EdgeDpMatching(4, 0, 1.0, 1.0)


def test_parameters_and_ledger():
    led = PrivacyLedger()
    c = MatchingConstants(2, 3, 5)
    m = EdgeDpMatching(64, 2, 2.0, 0.5, consts=c, ledger=led)
    assert m.q1 == 2 * 6 and m.q2 == 3 * 6 / 0.5
    assert m.sub_threshold == pytest.approx(5 * 36 / (2.0 * 0.25))
    assert led.total == pytest.approx(2.0)


def test_sample_full_with_p_one():
    # test mode, huge subsample threshold: S is exactly the good edges
    r = random.Random(4)
    for _ in range(20):
        E = forest_union_edges(30, 2, r)
        m = EdgeDpMatching(30, 2, 1.0, 1.0, seed=0, test_mode=True,
                           consts=MatchingConstants(20, 20, 1e9))
        for i, up in enumerate(as_stream(30, E)):
            m.process(up)
            assert len(m.sample) == good_edge_count(E[:i + 1], 2)


@given(st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), max_size=40),
       st.integers(1, 3), st.integers(0, 1000))
def test_counters_distinct_and_bounded(pairs, alpha, seed):
    seen, E = set(), []
    for u, v in pairs:
        e = (min(u, v), max(u, v))
        if u != v and e not in seen:
            seen.add(e)
            E.append(e)
    m = EdgeDpMatching(8, alpha, 2.0, 1.0, seed=seed)
    last = 1.0
    for up in as_stream(8, E):
        est = m.process(up)
        assert est >= last
        last = est
        for w in range(8):
            cs = [c[1] if e[0] == w else c[2] for e, c in m.sample.S.items() if w in e]
            assert len(cs) == len(set(cs))
            assert all(x <= alpha for x in cs)
        assert 0 < m.p <= 1


def test_subsample_halving_law():
    rng = np.random.default_rng(0)
    s = MatchSample(5)
    for i in range(4000):
        s.insert((2 * i, 2 * i + 1), rng.random(), 1.0)
    assert len(s) == 4000
    s.subsample(0.5)
    assert abs(len(s) - 2000) < 4 * np.sqrt(1000)
    s.subsample(0.25)
    assert abs(len(s) - 1000) < 4 * np.sqrt(750)


def test_clone_is_independent():
    m = EdgeDpMatching(6, 1, 4.0, 1.0, noise=TapeSampler(np.random.default_rng(0).random(500)),
                       coins=UniformTape(np.random.default_rng(1).random(50)))
    run(m, as_stream(6, [(0, 1), (2, 3)]))
    c = m.clone()
    a = run(m, as_stream(6, [(0, 4), (1, 5)]))
    b = run(c, as_stream(6, [(0, 4), (1, 5)]))
    assert a == b and set(m.sample.S) == set(c.sample.S)
    c.process(EdgeUpdate.insert(3, 4))
    assert (3, 4) not in m.sample.S


def test_abort_freezes_or_raises():
    c = MatchingConstants(0.5, 0.5, 1e9)  # one Above allowed past the budget of 1
    m = EdgeDpMatching(4, 1, 1.0, 1.0, seed=0, consts=c, test_mode=True)
    run(m, as_stream(4, [(0, 1), (2, 3), (1, 2)]))
    assert m.aborted
    frozen = m.estimate
    assert m.process(NOOP) == frozen
    m = EdgeDpMatching(4, 1, 1.0, 1.0, seed=0, consts=c, test_mode=True, on_abort="raise")
    with pytest.raises(AbortExceeded):
        run(m, as_stream(4, [(0, 1), (2, 3), (1, 2)]))


def test_normal_form_extensions():
    first = list(normal_form_extensions(set(), 0, 5))
    assert first == [((0, 1), 2)]
    nxt = {e for e, _ in normal_form_extensions({(0, 1)}, 2, 5)}
    assert nxt == {(0, 2), (1, 2), (2, 3)}


def test_coupled_sensitivity_small_exhaustive():
    rep = audit_matching_coupled(n=4, T=5, alphas=(1,), seeds=range(2), test_mode=True)
    assert rep.checked > 0 and rep.ok, rep.summary()


@given(st.integers(0, 10 ** 6))
def test_coupled_sensitivity_random_streams(seed):
    r = random.Random(seed)
    n = 8
    E = [(u, v) for u in range(n) for v in range(u + 1, n) if r.random() < 0.4]
    r.shuffle(E)
    if not E:
        return
    s = as_stream(n, E)
    t_star = r.randint(1, len(E))
    s2 = edge_neighbor(s, t_star)
    tape = np.random.default_rng(seed).random(4000)
    coins = np.random.default_rng(seed + 1).random(len(E) + 1)
    kw = dict(consts=MatchingConstants(2, 20, 20))
    a = EdgeDpMatching(n, 2, 8.0, 1.0, noise=TapeSampler(tape), coins=UniformTape(coins), **kw)
    b = EdgeDpMatching(n, 2, 8.0, 1.0, noise=TapeSampler(tape), coins=UniformTape(coins), **kw)
    for x, y in zip(s, s2):
        a.process(x)
        b.process(y)
        if a.aborted or b.aborted or a.halvings != b.halvings:
            break
        assert abs(len(a.sample) - len(b.sample)) <= 2


def test_good_edge_bracket_on_forests():
    r = random.Random(9)
    for _ in range(30):
        alpha = r.randint(1, 3)
        n = r.randint(2, 40)
        E = forest_union_edges(n, alpha, r)
        mu = exact_matching_size(n, E)
        g = good_edge_count(E, alpha)
        assert mu <= g <= (alpha + 2) * mu


def test_degeneracy_estimate_power_of_two():
    d = DegeneracyEstimate(8, 1.0, LaplaceSampler(None, test_mode=True))
    K4 = [(a, b) for a in range(4) for b in range(a + 1, 4)]
    vals = [d.process(up) for up in as_stream(8, K4)]
    assert vals == sorted(vals)
    assert vals[-1] == 4  # degeneracy 3 passes threshold 2 only


def test_guessing_wrapper_selects_instance():
    r = random.Random(2)
    E = forest_union_edges(40, 2, r)
    led = PrivacyLedger()
    g = ArboricityGuessingMatching(40, 4.0, 1.0, seed=3, test_mode=True, ledger=led)
    out = run(g, as_stream(40, E))
    assert out == sorted(out)
    assert g.alphas == [2, 4, 8, 16, 32, 64]
    assert led.total == pytest.approx(4.0)
    assert g.selected.sample.alpha >= 2


def test_peak_sample_reported():
    r = random.Random(5)
    E = forest_union_edges(200, 2, r)
    m = EdgeDpMatching(200, 2, 2.0, 0.5, seed=7)
    run(m, as_stream(200, E))
    assert m.peak >= len(m.sample)
    assert m.peak <= 20 * lg(200) ** 2 / (2.0 * 0.25)
