"""Sensitivity and privacy audits with their worst cases."""

import argparse

from dpgs.harness import audit as A
from dpgs.matching import MatchingConstants


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true", help="smaller enumeration sizes")
    a = ap.parse_args()
    T = 6 if a.quick else 8
    reps = [A.svt_privacy_ratio(trials=50_000 if a.quick else 200_000),
            A.audit_matching_coupled(n=5, T=T, test_mode=True),
            A.audit_matching_coupled(n=5, T=T, eps=8.0, consts=MatchingConstants(2, 20, 20)),
            *A.audit_sparsifier(pairs=200 if a.quick else 1000, caps=(3, 4, 8)).values(),
            A.audit_cover_sensitivity(5 if a.quick else 6),
            A.audit_greedy_node()]
    for r in reps:
        print(("PASS " if r.ok else "FAIL ") + r.summary())
        if not r.ok:
            print(r.counterexample())


if __name__ == "__main__":
    main()
