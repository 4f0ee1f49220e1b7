"""Write the OR compound (built from the bundled stamps) as a stamp file."""
import argparse
from pathlib import Path

from ftca.circuits.compiler import or_stamp
from ftca.circuits.gadgets import format_gadget, library


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "src/ftca/circuits/stamps/or.txt"))
    a = p.parse_args()
    lib = {k: v for k, v in library().items() if k != "or"}
    g = or_stamp(lib)
    Path(a.out).write_text(format_gadget(g))
    print(f"wrote {a.out} size={g.shape[0]}x{g.shape[1]} delay={g.outputs[0].delay}")


if __name__ == "__main__":
    main()
