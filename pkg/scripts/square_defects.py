"""Square-by-square d'∘d' defects of the bicomplex, and whether each is exact.

Contracting two strand pairs in either order gives maps that agree only up
to homotopy.  This script lists, for every square that ends at the empty
cable, how many chain-level entries differ and whether the difference is a
d''-coboundary (so it disappears on d''-cohomology).
"""

from __future__ import annotations

import argparse
import json
from dataclasses import dataclass

from coloredkh import corpus
from coloredkh.bicomplex import Bicomplex


@dataclass
class DefectConfig:
    diagram: str = "kink"
    n: int = 4
    ring: str = "Z"


def run(cfg: DefectConfig) -> list[dict]:
    b = Bicomplex(corpus.get(cfg.diagram), cfg.n, cfg.ring)
    return b.square_defects()


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--diagram", default="kink")
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--ring", default="Z", choices=("Z", "Z2"))
    a = ap.parse_args()
    print(json.dumps(run(DefectConfig(a.diagram, a.n, a.ring)), indent=1))
