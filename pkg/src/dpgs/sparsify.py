"""Degree-capped sparsification and node-private matching estimates.

The filter admits an arriving edge only while both endpoints have fewer than
Lambda admitted edges. Deleting a vertex from the input changes the admitted
stream by a bounded number of edges, so an edge-private algorithm run on the
admitted stream at budget eps / (2 Lambda) is node-private.
"""

from __future__ import annotations

import math
from collections import defaultdict

import numpy as np

from dpgs.dp import (AbortExceeded, Answer, InvalidParameter, LaplaceSampler,
                     PrivacyLedger, SvtInstance, seed_sequence)
from dpgs.matching import EdgeDpMatching, MatchingConstants
from dpgs.oracles import IncrementalMatching
from dpgs.stream import NOOP, EdgeUpdate, InvalidUpdate, Kind, UpdateStream
from dpgs.util import log_base


def matching_cap(alpha_tilde: float, eta: float) -> float:
    """Degree cap that keeps a (1 + eta)-approximate matching."""
    return 5 * (1 + 5 / eta) * 2 * alpha_tilde


class DegreeCapFilter:
    def __init__(self, cap: float):
        if not cap > 0:
            raise InvalidParameter(f"degree cap must be positive, got {cap}")
        self.cap = cap
        self.deg: dict[int, int] = defaultdict(int)
        self.admitted = 0

    def admit(self, up: EdgeUpdate) -> EdgeUpdate:
        if up.kind is Kind.DEL:
            raise InvalidUpdate("the degree-cap filter accepts insertion-only streams")
        if up.is_noop:
            return NOOP
        u, v = up.edge
        if max(self.deg[u], self.deg[v]) < self.cap:
            self.deg[u] += 1
            self.deg[v] += 1
            self.admitted += 1
            return up
        return NOOP


def sparsify_stream(stream: UpdateStream, cap: float) -> UpdateStream:
    f = DegreeCapFilter(cap)
    return UpdateStream(stream.n, [f.admit(u) for u in stream])


def stream_edit_distance(a: UpdateStream, b: UpdateStream) -> int:
    """Edge edit distance between equal-length streams.

    A position where one side is a no-op costs one step; two different edges at
    the same position cost two.
    """
    if len(a) != len(b):
        raise ValueError("streams must have equal length")
    d = 0
    for x, y in zip(a, b):
        if x != y:
            d += 1 if (x.is_noop or y.is_noop) else 2
    return d


class NodeDpMatching:
    """Node-private matching-size estimates on the degree-capped stream.

    ``variant="sublinear"`` feeds admitted edges to the edge-private estimator
    at budget eps / (2 Lambda). ``variant="exact"`` keeps every admitted edge,
    maintains the exact maximum matching, and tracks it with a sparse vector of
    sensitivity 2 Lambda, reporting (1 + eta)^k.
    """

    def __init__(self, n: int, alpha_tilde: int, eps: float, eta: float,
                 variant: str = "sublinear", seed=None, test_mode: bool = False,
                 consts: MatchingConstants | None = None,
                 ledger: PrivacyLedger | None = None, on_abort: str = "freeze",
                 cap: float | None = None):
        if variant not in ("sublinear", "exact"):
            raise InvalidParameter(f"unknown variant {variant!r}")
        self.variant = variant
        self.n, self.eps, self.eta = n, eps, eta
        self.cap = cap if cap is not None else matching_cap(alpha_tilde, eta)
        self.filter = DegreeCapFilter(self.cap)
        self.on_abort = on_abort
        self.aborted = False
        self.estimate = 1.0
        self.t = 0
        if variant == "sublinear":
            self.inner = EdgeDpMatching(n, alpha_tilde, eps / (2 * self.cap), eta,
                                        seed=seed, test_mode=test_mode,
                                        consts=consts, ledger=None,
                                        on_abort=on_abort)
        else:
            rng = np.random.default_rng(seed_sequence(seed))
            self.matcher = IncrementalMatching(n)
            self.svt = SvtInstance(eps, 2 * self.cap, 10 * log_base(n, 1 + eta),
                                   LaplaceSampler(rng, test_mode), "exact_matching")
            self.k = 0
        if ledger is not None:
            ledger.charge(f"node_matching.{variant}", eps)

    @property
    def sample_size(self) -> int:
        if self.variant == "sublinear":
            return len(self.inner.sample)
        return self.filter.admitted

    @property
    def p(self) -> float:
        return self.inner.p if self.variant == "sublinear" else 1.0

    def above_counts(self) -> str:
        if self.variant == "sublinear":
            return self.inner.above_counts()
        return str(self.svt.count)

    def process(self, up: EdgeUpdate) -> float:
        self.t += 1
        kept = self.filter.admit(up)
        if self.variant == "sublinear":
            self.estimate = self.inner.process(kept)
            self.aborted = self.inner.aborted
            return self.estimate
        if self.aborted:
            return self.estimate
        if not kept.is_noop:
            self.matcher.add_edge(*kept.edge)
        while True:
            ans = self.svt.process(self.matcher.size, (1 + self.eta) ** self.k)
            if ans is Answer.ABOVE:
                self.k += 1
                continue
            if ans is Answer.ABORT:
                self.aborted = True
                if self.on_abort == "raise":
                    raise AbortExceeded(f"exact-matching SVT exhausted at t={self.t}")
                return self.estimate
            break
        self.estimate = (1 + self.eta) ** self.k
        return self.estimate
