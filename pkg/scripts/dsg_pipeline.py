"""Densest-subgraph releases on a planted clique, exact or private static step."""

import argparse

from dpgs.harness.trials import dsg_trace


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=150)
    ap.add_argument("--p", type=float, default=0.02)
    ap.add_argument("--k", type=int, default=15)
    ap.add_argument("--eps", type=float, default=8.0)
    ap.add_argument("--eta", type=float, default=0.5)
    ap.add_argument("--mode", choices=["dp", "exact"], default="dp")
    ap.add_argument("--test-mode", action="store_true")
    ap.add_argument("--seeds", type=int, default=10)
    a = ap.parse_args()
    print("seed  aboves  final_released  final_opt  worst_ratio_after_first_above")
    for s in range(a.seeds):
        r = dsg_trace(s, a.n, a.p, a.k, a.eps, a.eta, a.mode, a.test_mode)
        worst = float("nan")
        if r["above"]:
            i = r["above"][0] - 1
            worst = min(float(x / y) for x, y in zip(r["released"][i:], r["opt"][i:]) if y)
        print(f"{s:4d} {len(r['above']):7d} {float(r['released'][-1]):15.3f} "
              f"{float(r['opt'][-1]):10.3f} {worst:10.3f}")


if __name__ == "__main__":
    main()
