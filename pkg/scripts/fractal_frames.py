"""Rule-1 growth from a single cell on both grids, written as PBM frames."""
import argparse
from pathlib import Path

from ftca import config
from ftca.cli import to_pbm
from ftca.engine import run_to_fixed_point
from ftca.grid import Topology
from ftca.rules import parse_rule


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--size", type=int, default=130)
    p.add_argument("--steps", type=int, default=64)
    p.add_argument("--every", type=int, default=8)
    p.add_argument("--rule", default="1")
    p.add_argument("--out", default="fractal_frames")
    a = p.parse_args()
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    n = a.size + a.size % 2
    for kind, t in (("sq", Topology.square(n)), ("tri", Topology.triangular(n))):
        seed = (t.rows // 2, t.cols // 2)
        tr = run_to_fixed_point(parse_rule(a.rule, kind), config.zeros(t).with_cells([seed]), max_steps=a.steps)
        for k in range(0, a.steps + 1, a.every):
            frame = tr.at(k)
            (out / f"{kind}_rule{a.rule}_{k:03d}.pbm").write_text(to_pbm(frame))
            print(f"grid={kind} rule={a.rule} step={k} active={frame.active_count()}")


if __name__ == "__main__":
    main()
