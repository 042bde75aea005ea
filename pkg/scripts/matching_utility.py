"""Edge-private matching estimates against the best good-edge count."""

import argparse
import statistics

from dpgs.harness.experiment import map_trials
from dpgs.harness.trials import matching_utility
from dpgs.matching import MatchingConstants
from dpgs.util import lg


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--alpha", type=int, default=2)
    ap.add_argument("--T", type=int, default=2000)
    ap.add_argument("--eps", type=float, default=2.0)
    ap.add_argument("--eta", type=float, default=0.5)
    ap.add_argument("--seeds", type=int, default=40)
    ap.add_argument("--consts", type=float, nargs=3, metavar=("A1", "A2", "A3"))
    a = ap.parse_args()
    consts = MatchingConstants(*a.consts) if a.consts else None
    fn = lambda s: matching_utility(s, a.n, a.alpha, a.T, a.eps, a.eta, consts)
    res = map_trials(fn, range(a.seeds), workers=1)
    slack = 40 * lg(a.n) ** 2 / (a.eps * a.eta)
    print("seed  target  estimate  ratio  peak  aborted")
    for r in res:
        print(f"{r['seed']:4d} {r['target']:7d} {r['estimate']:9.1f} "
              f"{r['estimate'] / max(r['target'], 1):6.2f} {r['peak']:5d}  {r['aborted']}")
    inside = sum(r["target"] / (1 + a.eta) - slack <= r["estimate"]
                 <= (1 + a.eta) * r["target"] + slack for r in res)
    print(f"inside band (additive {slack:.0f}): {inside}/{len(res)}; "
          f"median ratio {statistics.median(r['estimate'] / max(r['target'], 1) for r in res):.2f}")


if __name__ == "__main__":
    main()
