"""Command-line entry point: ``dpgs run | gen | audit | verify-cover``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from dpgs.dp import InvalidParameter
from dpgs.stream import StreamError, UpdateStream

EXIT_ABORT = 3
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def _parse_consts(items) -> dict:
    out = {}
    for it in items or []:
        if "=" not in it:
            raise InvalidParameter(f"--const expects k=v, got {it!r}")
        k, v = it.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def cmd_run(a) -> int:
    from dpgs.harness.experiment import ExperimentConfig, run_experiment
    cfg = ExperimentConfig(alg=a.alg, eps=a.eps, eta=a.eta, alpha_tilde=a.alpha_tilde,
                           seed=a.seed, test_mode=a.test_mode, referee=a.referee,
                           consts=_parse_consts(a.const), every=a.every,
                           dsg_mode=a.dsg_mode, dsg_release=a.dsg_release)
    res = run_experiment(cfg, UpdateStream.read(a.stream), a.out)
    print(f"wrote {', '.join(res.files)} to {a.out}")
    if res.aborted:
        print("an SVT exhausted its Above budget; output was frozen", file=sys.stderr)
        return EXIT_ABORT
    return 0


def cmd_gen(a) -> int:
    from dpgs.harness import generators as G
    if a.kind == "forest":
        s = G.gen_bounded_arboricity_stream(a.n, a.alpha, a.T, seed=a.seed)
    elif a.kind == "planted":
        s = G.gen_planted_stream(a.n, a.p, a.k, seed=a.seed)
    else:
        from dpgs.harness.reduction import gen_reduction_stream, random_spec
        spec = random_spec(a.n, a.k, a.target, seed=a.seed)
        inst = gen_reduction_stream(spec)
        s = inst.stream
        meta = {"target": spec.target, "y": list(spec.y),
                "queries": [list(q) for q in spec.queries],
                "readouts": list(inst.readouts), "answers": list(inst.answers)}
        Path(str(a.out) + ".json").write_text(json.dumps(meta) + "\n")
    s.write(a.out)
    print(f"wrote n={s.n} T={len(s)} to {a.out}")
    return 0


def cmd_audit(a) -> int:
    from dpgs.harness import audit as A
    if a.kind == "svt-ratio":
        reps = [A.svt_privacy_ratio(trials=a.trials, seed=a.seed)]
    elif a.alg == "matching":
        reps = [A.audit_matching_coupled(n=a.n, T=a.T, seeds=range(a.seeds),
                                         test_mode=a.test_mode)]
    elif a.alg == "sparsifier":
        reps = list(A.audit_sparsifier(pairs=a.pairs, n=a.n, seed=a.seed).values())
    elif a.alg == "cover":
        reps = [A.audit_cover_sensitivity(a.n)]
    else:
        reps = [A.audit_greedy_node(pairs=a.pairs, n=a.n, seed=a.seed)]
    for r in reps:
        print(("PASS " if r.ok else "FAIL ") + r.summary())
        if not r.ok:
            print("first counterexample:\n" + r.counterexample())
    return 0 if all(r.ok for r in reps) else EXIT_VIOLATION


def cmd_verify_cover(a) -> int:
    from dpgs.vertex_cover import ImplicitCover, verify_cover
    ok, size = verify_cover(UpdateStream.read(a.stream),
                            ImplicitCover.from_json(Path(a.cover).read_text()))
    print(json.dumps({"valid": ok, "size": size}))
    return 0 if ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dpgs", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    r = sub.add_parser("run", help="run an algorithm over a stream file")
    r.add_argument("--alg", required=True,
                   choices=["match-edge", "match-node", "match-node-exact", "vc", "dsg", "kcore"])
    r.add_argument("--stream", required=True)
    r.add_argument("--eps", type=float, required=True)
    r.add_argument("--eta", type=float, required=True)
    r.add_argument("--alpha-tilde", type=int, default=None)
    r.add_argument("--test-mode", action="store_true", help="zero all Laplace noise")
    r.add_argument("--referee", action="store_true", help="add exact reference columns")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--const", nargs="*", metavar="K=V", help="override named constants")
    r.add_argument("--every", type=int, default=1, help="k-core: emit every k steps")
    r.add_argument("--dsg-mode", choices=["dp", "exact"], default="dp")
    r.add_argument("--dsg-release", choices=["persist", "literal"], default="persist")
    r.add_argument("--out", required=True)
    r.set_defaults(fn=cmd_run)

    g = sub.add_parser("gen", help="write a synthetic stream file")
    g.add_argument("kind", choices=["forest", "planted", "reduction"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--alpha", type=int, default=2)
    g.add_argument("--T", type=int, default=None)
    g.add_argument("--p", type=float, default=0.02)
    g.add_argument("--k", type=int, default=8)
    g.add_argument("--target", choices=["matching", "components"], default="matching")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(fn=cmd_gen)

    au = sub.add_parser("audit", help="empirical sensitivity and privacy checks")
    au.add_argument("kind", choices=["sensitivity", "svt-ratio"])
    au.add_argument("--alg", choices=["matching", "sparsifier", "cover", "greedy"],
                    default="matching")
    au.add_argument("--n", type=int, default=None)
    au.add_argument("--T", type=int, default=8)
    au.add_argument("--seeds", type=int, default=5)
    au.add_argument("--pairs", type=int, default=1000)
    au.add_argument("--trials", type=int, default=200_000)
    au.add_argument("--test-mode", action="store_true")
    au.add_argument("--seed", type=int, default=0)
    au.set_defaults(fn=cmd_audit)

    v = sub.add_parser("verify-cover", help="check an implicit cover against a stream")
    v.add_argument("--stream", required=True)
    v.add_argument("--cover", required=True)
    v.set_defaults(fn=cmd_verify_cover)
    return ap


_DEFAULT_N = {"matching": 5, "sparsifier": 50, "cover": 6, "greedy": 30}


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    if a.cmd == "gen" and a.kind == "forest" and a.T is None:
        a.T = a.alpha * (a.n - 1)
    if a.cmd == "audit" and a.n is None:
        a.n = _DEFAULT_N[a.alg]
    try:
        return a.fn(a)
    except (InvalidParameter, StreamError, ValueError, OSError) as e:
        print(f"dpgs: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
