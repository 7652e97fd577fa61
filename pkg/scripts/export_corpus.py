"""Write every corpus graph as JSON, ready for the command-line tool.

    python3 scripts/export_corpus.py graphs/
"""

import argparse
from fractions import Fraction
from pathlib import Path

from planar_ising import corpus
from planar_ising.graph import dump_graph


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("outdir", type=Path)
    ap.add_argument("--x", type=Fraction, help="uniform edge weight instead of the mixed default")
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)
    graphs = dict(corpus.standard_corpus(args.x))
    graphs["bowtie"] = corpus.bowtie(args.x)
    graphs["dumbbell"] = corpus.dumbbell(args.x)
    for name, g in graphs.items():
        path = args.outdir / f"{name}.json"
        path.write_text(dump_graph(g) + "\n")
        print(path)


if __name__ == "__main__":
    main()
