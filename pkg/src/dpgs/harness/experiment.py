"""Run one algorithm over one stream and write its trace files."""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from dpgs.densest import DsgConstants, DsgDriver
from dpgs.dp import InvalidParameter, PrivacyLedger
from dpgs.kcore import CoreConstants, CoreLevels
from dpgs.matching import (ArboricityGuessingMatching, EdgeDpMatching,
                           MatchingConstants, good_edge_count)
from dpgs.oracles import IncrementalMatching, exact_core_numbers, exact_density
from dpgs.sparsify import NodeDpMatching
from dpgs.stream import DynamicGraph, UpdateStream, require_insertion_only
from dpgs.util import fmt
from dpgs.vertex_cover import CoverConfig, semi_stream_vc, verify_cover

ALGORITHMS = ("match-edge", "match-node", "match-node-exact", "vc", "dsg", "kcore")


@dataclass
class ExperimentConfig:
    alg: str
    eps: float
    eta: float
    alpha_tilde: int | None = None
    seed: int = 0
    test_mode: bool = False
    referee: bool = False
    consts: dict = field(default_factory=dict)
    every: int = 1
    dsg_mode: str = "dp"
    dsg_release: str = "persist"

    def __post_init__(self):
        if self.alg not in ALGORITHMS:
            raise InvalidParameter(f"unknown algorithm {self.alg!r}")
        if not self.eps > 0 or not self.eta > 0:
            raise InvalidParameter("eps and eta must be positive")
        if self.every < 1:
            raise InvalidParameter("--every must be at least 1")
        if self.alg in ("match-node", "match-node-exact", "vc") and self.alpha_tilde is None:
            raise InvalidParameter(f"{self.alg} needs --alpha-tilde")


@dataclass
class RunResult:
    aborted: bool
    files: list[str]
    summary: dict


def _constants(cls, overrides: dict):
    names = {f.name for f in fields(cls)}
    bad = set(overrides) - names
    if bad:
        raise InvalidParameter(f"unknown constants {sorted(bad)} for {cls.__name__}")
    return cls(**{k: float(v) for k, v in overrides.items()})


def _cover_config(overrides: dict) -> CoverConfig:
    cfg = CoverConfig(on_empty="random")
    for k, v in overrides.items():
        if k == "gamma":
            cfg.gamma = float(v)
        elif k == "tau":
            cfg.tau = int(float(v))
        elif k == "w":
            cfg.w = float(v)
        else:
            raise InvalidParameter(f"unknown constant {k!r} for vc")
    return cfg


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as f:
        f.write(",".join(header) + "\n")
        for r in rows:
            f.write(",".join(fmt(x) for x in r) + "\n")


def run_experiment(cfg: ExperimentConfig, stream: UpdateStream, out_dir) -> RunResult:
    require_insertion_only(stream)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ledger = PrivacyLedger()
    runner = {"match-edge": _run_matching, "match-node": _run_matching,
              "match-node-exact": _run_matching, "vc": _run_vc, "dsg": _run_dsg,
              "kcore": _run_kcore}[cfg.alg]
    aborted, files, summary = runner(cfg, stream, out, ledger)
    (out / "ledger.json").write_text(ledger.to_json() + "\n")
    summary = {"config": asdict(cfg), "n": stream.n, "T": len(stream),
               "aborted": aborted, "epsilon_spent": ledger.total, **summary}
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True,
                                                 default=str) + "\n")
    return RunResult(aborted, files + ["ledger.json", "summary.json"], summary)


def _run_matching(cfg, stream, out, ledger):
    consts = _constants(MatchingConstants, cfg.consts)
    n = stream.n
    node = cfg.alg != "match-edge"
    if cfg.alg == "match-edge" and cfg.alpha_tilde is None:
        algo = ArboricityGuessingMatching(n, cfg.eps, cfg.eta, seed=cfg.seed,
                                          test_mode=cfg.test_mode, consts=consts,
                                          ledger=ledger)
    elif cfg.alg == "match-edge":
        algo = EdgeDpMatching(n, cfg.alpha_tilde, cfg.eps, cfg.eta, seed=cfg.seed,
                              test_mode=cfg.test_mode, consts=consts, ledger=ledger)
    else:
        variant = "exact" if cfg.alg == "match-node-exact" else "sublinear"
        algo = NodeDpMatching(n, cfg.alpha_tilde, cfg.eps, cfg.eta, variant=variant,
                              seed=cfg.seed, test_mode=cfg.test_mode, consts=consts,
                              ledger=ledger)
    header = ["t", "estimate", "sample_size", "p", "svt_above_counts"]
    if node:
        header.append("admitted")
    if cfg.referee:
        header += ["opt_matching", "good_edges"]
    rows, edges = [], []
    ref = IncrementalMatching(n) if cfg.referee else None
    peak = 0
    for t, up in enumerate(stream, 1):
        est = algo.process(up)
        if isinstance(algo, ArboricityGuessingMatching):
            inner = algo.selected
            size, p, counts = len(inner.sample), inner.p, inner.above_counts()
        elif node:
            size, p, counts = algo.sample_size, algo.p, algo.above_counts()
        else:
            size, p, counts = len(algo.sample), algo.p, algo.above_counts()
        peak = max(peak, size)
        row = [t, float(est), size, float(p), counts]
        if node:
            row.append(algo.filter.admitted)
        if cfg.referee:
            if not up.is_noop:
                edges.append(up.edge)
                ref.add_edge(*up.edge)
            row += [ref.size, good_edge_count(edges, cfg.alpha_tilde or 1)]
        rows.append(row)
    _write_csv(out / "trace.csv", header, rows)
    aborted = algo.aborted
    return aborted, ["trace.csv"], {"peak_sample_size": peak,
                                    "final_estimate": rows[-1][1] if rows else 1.0}


def _run_vc(cfg, stream, out, ledger):
    cover = semi_stream_vc(stream, cfg.alpha_tilde, cfg.eta, cfg.eps, seed=cfg.seed,
                           test_mode=cfg.test_mode, config=_cover_config(cfg.consts),
                           ledger=ledger)
    (out / "cover.json").write_text(cover.to_json() + "\n")
    summary = {"lambda": cover.lam}
    if cfg.referee:
        valid, size = verify_cover(stream, cover)
        summary.update(cover_valid=valid, cover_size=size)
    return False, ["cover.json"], summary


def _run_dsg(cfg, stream, out, ledger):
    consts = _constants(DsgConstants, cfg.consts)
    d = DsgDriver(stream.n, cfg.eps, cfg.eta, seed=cfg.seed, test_mode=cfg.test_mode,
                  consts=consts, mode=cfg.dsg_mode, release=cfg.dsg_release,
                  ledger=ledger)
    g = DynamicGraph(stream.n)
    with open(out / "trace.jsonl", "w") as f:
        for t, up in enumerate(stream, 1):
            S = d.process(up)
            g.apply(up)
            inside = sum(1 for u, v in g.edges() if u in S and v in S) if S else 0
            rec = {"t": t, "released_size": len(S),
                   "released_density": inside / len(S) if S else 0.0,
                   "p": d.sampler.p, "sample_edges": len(d.sampler.H)}
            if cfg.referee:
                rec["opt_density"] = float(exact_density(g.n, g.edges(), "newton").density)
            # json writes the shortest repr that round-trips exactly
            f.write(json.dumps(rec) + "\n")
    return d.aborted, ["trace.jsonl"], {"above_times": d.above_times}


def _run_kcore(cfg, stream, out, ledger):
    consts = _constants(CoreConstants, cfg.consts)
    c = CoreLevels(stream.n, cfg.eps, cfg.eta, seed=cfg.seed, test_mode=cfg.test_mode,
                   consts=consts, ledger=ledger)
    rows = []
    for t, up in enumerate(stream, 1):
        c.process(up)
        if t % cfg.every == 0 or t == len(stream):
            est = c.release()
            rows.extend((t, v, float(est[v])) for v in range(stream.n))
    _write_csv(out / "trace.csv", ["t", "v", "estimate"], rows)
    est = c.release() if len(stream) else [1.0] * stream.n
    summary = {"max_estimate": float(max(est, default=1.0)), "sampled_edges": c.sampled}
    if cfg.referee:
        edges = stream.edges_in_order()
        kmax = max(exact_core_numbers(stream.n, edges), default=0)
        summary.update(degeneracy=kmax, arboricity_bracket=[(kmax + 1) // 2, kmax])
    return c.aborted, ["trace.csv"], summary


def worker_count() -> int:
    cap = int(os.environ.get("DPGS_THREADS", "0") or 0)
    n = os.cpu_count() or 1
    return max(1, min(n, cap) if cap > 0 else n)


def map_trials(fn, items, workers: int | None = None) -> list:
    """Apply fn to items, across processes when more than one worker is allowed.
    Results come back in input order, so output never depends on scheduling."""
    items = list(items)
    w = worker_count() if workers is None else workers
    if w <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=w) as ex:
        return list(ex.map(fn, items))
