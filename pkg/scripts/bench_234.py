"""Wall time of the rule-234 3-core decider against simulation, over sizes."""
import argparse
import time

from ftca import config
from ftca.deciders import decide_all
from ftca.engine import run_to_fixed_point
from ftca.grid import Topology
from ftca.rules import parse_rule


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sizes", default="64,128,256,512,1024")
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--repeats", type=int, default=3)
    a = p.parse_args()
    r = parse_rule("234", "sq")
    decide_all(r, config.random(Topology.square(8), 0.3, 0))
    for n in map(int, a.sizes.split(",")):
        c = config.random(Topology.square(n), a.density, n)
        c.topology.neighbor_table()
        best_dec = best_sim = float("inf")
        for _ in range(a.repeats):
            t0 = time.perf_counter()
            decide_all(r, c)
            best_dec = min(best_dec, time.perf_counter() - t0)
            t0 = time.perf_counter()
            tr = run_to_fixed_point(r, c)
            best_sim = min(best_sim, time.perf_counter() - t0)
        print(f"n={n} steps={tr.steps_to_fix} decider_s={best_dec:.5f} simulation_s={best_sim:.5f} "
              f"ratio={best_sim / best_dec:.1f}")


if __name__ == "__main__":
    main()
