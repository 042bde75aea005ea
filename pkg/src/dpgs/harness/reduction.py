"""Streams that encode inner-product queries, for continual-release lower
bounds on fully dynamic matching size and connected-component counts.

A secret bit vector y is loaded first; each query vector q is then toggled in
and out. Reading the exact counter at fixed positions recovers every
<q, y> as ||q|| + r0 - rj (matching) or ||q|| + rj - r0 (components).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from dpgs.oracles import exact_matching_size
from dpgs.stream import NOOP, DynamicGraph, EdgeUpdate, UpdateStream


@dataclass(frozen=True)
class ReductionSpec:
    y: tuple[int, ...]
    queries: tuple[tuple[int, ...], ...]
    target: str  # "matching" or "components"

    def __post_init__(self):
        if self.target not in ("matching", "components"):
            raise ValueError(f"unknown target {self.target!r}")
        if any(len(q) != len(self.y) for q in self.queries):
            raise ValueError("query length differs from secret length")


@dataclass(frozen=True)
class ReductionInstance:
    stream: UpdateStream
    readouts: tuple[int, ...]        # 1-based times: r0 first, then one per query
    answers: tuple[int, ...]         # true inner products


def random_spec(n: int, k: int, target: str, seed=None) -> ReductionSpec:
    rng = random.Random(seed)
    y = tuple(rng.randint(0, 1) for _ in range(n))
    qs = tuple(tuple(rng.randint(0, 1) for _ in range(n)) for _ in range(k))
    return ReductionSpec(y, qs, target)


def gen_reduction_stream(spec: ReductionSpec) -> ReductionInstance:
    n = len(spec.y)
    ups: list[EdgeUpdate] = []
    if spec.target == "matching":
        # u_i = i, v_i = n + i, w_i = 2n + i
        N = 3 * n
        ups += [EdgeUpdate.insert(i, n + i) if spec.y[i] else NOOP for i in range(n)]
        pair = lambda i: (n + i, 2 * n + i)
        reads = [n]
    else:
        # u_i = i, v_i = n + i, a_i = 2n + i, b_i = 3n + i
        N = 4 * n
        ups += [EdgeUpdate.insert(i, 2 * n + i) for i in range(n)]
        ups += [EdgeUpdate.insert(n + i, 3 * n + i) for i in range(n)]
        ups += [EdgeUpdate.insert(2 * n + i, 3 * n + i) if spec.y[i] else NOOP
                for i in range(n)]
        pair = lambda i: (i, n + i)
        reads = [3 * n]
    for q in spec.queries:
        start = len(ups)
        ups += [EdgeUpdate.insert(*pair(i)) if q[i] else NOOP for i in range(n)]
        ups += [EdgeUpdate.delete(*pair(i)) if q[i] else NOOP for i in range(n)]
        reads.append(start + n)
    answers = tuple(int(np.dot(q, spec.y)) for q in spec.queries)
    return ReductionInstance(UpdateStream(N, ups), tuple(reads), answers)


def components(g: DynamicGraph) -> int:
    seen = [False] * g.n
    c = 0
    for s in range(g.n):
        if seen[s]:
            continue
        c += 1
        seen[s] = True
        stack = [s]
        while stack:
            x = stack.pop()
            for y in g.adj[x]:
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
    return c


def exact_counter(stream: UpdateStream, target: str) -> list[int]:
    """Non-private continual counter r_1..r_T for the chosen statistic."""
    g = DynamicGraph(stream.n)
    out = []
    for up in stream:
        g.apply(up)
        if target == "matching":
            out.append(exact_matching_size(g.n, g.edges()))
        else:
            out.append(components(g))
    return out


def decode_inner_products(spec: ReductionSpec, inst: ReductionInstance, outputs) -> list:
    r0 = outputs[inst.readouts[0] - 1]
    res = []
    for q, t in zip(spec.queries, inst.readouts[1:]):
        rj = outputs[t - 1]
        if spec.target == "matching":
            res.append(sum(q) + r0 - rj)
        else:
            res.append(sum(q) + rj - r0)
    return res


def noisy_counter(exact_outputs, eps: float, seed=None) -> list[float]:
    """Experimental baseline: each output perturbed with Laplace noise at
    budget eps / T, which is private by basic composition."""
    rng = np.random.default_rng(seed)
    T = len(exact_outputs)
    return list(np.asarray(exact_outputs, float) + rng.laplace(0, T / eps, T))
