"""Compile a netlist for every input assignment and compare probes with the evaluator."""
import argparse
import itertools
import time

from ftca.circuits import compile, evaluate_netlist, load, simulate


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("netlist")
    p.add_argument("--rule", default="2", choices=["2", "24"])
    a = p.parse_args()
    n = load(a.netlist)
    wrong = 0
    for bits in itertools.product((0, 1), repeat=len(n.input_order)):
        asg = dict(zip(n.input_order, bits))
        t0 = time.perf_counter()
        cc = compile(n, asg)
        run = simulate(cc, a.rule)
        want = evaluate_netlist(n, asg)
        wrong += run.outputs != want
        print(f"inputs={''.join(map(str, bits))} probes={run.outputs} expected={want} "
              f"layout={cc.layout_shape[0]}x{cc.layout_shape[1]} steps={run.trajectory.steps_to_fix} "
              f"seconds={time.perf_counter() - t0:.2f}")
    print(f"wrong={wrong}")
    return int(wrong > 0)


if __name__ == "__main__":
    raise SystemExit(main())
