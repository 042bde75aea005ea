"""k-core estimates on a clique with pendant leaves."""

import argparse

import numpy as np

from dpgs.harness.trials import kcore_run


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=30)
    ap.add_argument("--leaves", type=int, default=200)
    ap.add_argument("--eps", type=float, default=8.0)
    ap.add_argument("--eta", type=float, default=1.0)
    ap.add_argument("--test-mode", action="store_true")
    ap.add_argument("--seeds", type=int, default=5)
    a = ap.parse_args()
    print("seed  clique_median  leaf_median  max_count  budget  L")
    for s in range(a.seeds):
        r = kcore_run(s, a.k, a.leaves, a.eps, a.eta, a.test_mode)
        est, core = np.array(r["estimates"]), np.array(r["core"])
        print(f"{s:4d} {np.median(est[core == a.k - 1]):14.1f} {np.median(est[core == 1]):12.1f} "
              f"{r['max_count']:10d} {r['budget']:7.1f} {r['L']:6.1f}")


if __name__ == "__main__":
    main()
