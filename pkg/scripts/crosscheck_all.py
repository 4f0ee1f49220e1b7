"""Fast deciders against the simulation oracle for every rule that has one."""
import argparse
import time

import numpy as np

from ftca import config
from ftca.cli import crosscheck_one
from ftca.deciders import has_fast_decider
from ftca.grid import Kind, Topology
from ftca.rules import all_rules, classify


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    a = p.parse_args()
    rng = np.random.default_rng(a.seed)
    for kind in Kind:
        sizes = (8, 16) if kind is Kind.TRIANGULAR else (6, 10, 16, 24)
        for r in all_rules(kind):
            if not has_fast_decider(r):
                continue
            t0 = time.perf_counter()
            bad = cells = 0
            for i in range(a.trials):
                n = sizes[i % len(sizes)]
                t = Topology.square(n) if kind is Kind.SQUARE else Topology.triangular(n)
                c = config.random(t, float(rng.choice([0.02, 0.1, 0.3, 0.5, 0.8])), int(rng.integers(2**32)))
                bad += len(crosscheck_one(r, c))
                cells += int((c.states == 0).sum())
            print(f"grid={kind.value} rule={r.name} class={classify(r).value} cells={cells} "
                  f"mismatches={bad} seconds={time.perf_counter() - t0:.2f}")


if __name__ == "__main__":
    main()
