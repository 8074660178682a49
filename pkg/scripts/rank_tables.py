"""Colored Khovanov rank tables for small diagrams, written to data/ as JSON.

    python scripts/rank_tables.py                # default cases
    python scripts/rank_tables.py --case kink:4 --ring Z2
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from coloredkh import corpus
from coloredkh.bicomplex import Bicomplex, colored_jones
from coloredkh.poly import render

DATA = Path(__file__).resolve().parent.parent / "data"


@dataclass
class RankTableConfig:
    cases: list[tuple[str, tuple[int, ...]]] = field(default_factory=lambda: [
        ("kink", (2,)), ("kink", (3,)), ("hopf", (2, 1)), ("hopf", (2, 2)), ("trefoil", (2,)),
    ])
    ring: str = "Z"
    out_dir: Path = DATA


def run(cfg: RankTableConfig) -> list[Path]:
    written = []
    for name, n in cfg.cases:
        d = corpus.get(name)
        t = time.perf_counter()
        b = Bicomplex(d, n, cfg.ring)
        ranks = b.homology()
        doc = {
            "diagram": name,
            "shape": list(n),
            "ring": cfg.ring,
            "colored_jones": render(colored_jones(d, n)),
            "ranks": [[k, i, j, r] for (k, i, j), r in sorted(ranks.items())],
        }
        path = cfg.out_dir / f"ranks_{name}_{'-'.join(map(str, n))}_{cfg.ring}.json"
        path.write_text(json.dumps(doc, indent=1) + "\n")
        print(f"{name} n={n}: {sum(ranks.values())} classes, {time.perf_counter() - t:.1f}s -> {path.name}")
        written.append(path)
    return written


def _case(text: str) -> tuple[str, tuple[int, ...]]:
    name, _, n = text.partition(":")
    return name, tuple(int(v) for v in n.split(","))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--case", action="append", type=_case, help="NAME:n1,n2,...")
    ap.add_argument("--ring", default="Z", choices=("Z", "Z2"))
    args = ap.parse_args()
    cfg = RankTableConfig(ring=args.ring)
    if args.case:
        cfg.cases = args.case
    run(cfg)
