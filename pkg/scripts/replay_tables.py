"""Replay every row of the label tables through the Frobenius rules.

Prints one line per inconsistent row, first for the rows as printed and
then for the corrected rows, followed by the recorded errata.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from coloredkh.tables import TABLES, replay_all


@dataclass
class ReplayConfig:
    show_notes: bool = True


def run(cfg: ReplayConfig) -> int:
    bad = 0
    for printed in (True, False):
        reports = replay_all(printed=printed)
        wrong = [r for r in reports if not r.ok]
        bad += len(wrong) if not printed else 0
        print(f"{'printed' if printed else 'corrected'}: {len(reports) - len(wrong)}/{len(reports)} rows consistent")
        for r in wrong:
            print(f"  table {r.table} row {r.index + 1} ({r.s}): {'; '.join(r.problems)}")
    for n, tb in sorted(TABLES.items()):
        for e in tb.errata:
            print(f"erratum table {n} row {e.row + 1}: {e.note}")
        if cfg.show_notes:
            for note in tb.notes:
                print(f"note table {n}: {note}")
    return bad


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--no-notes", action="store_true")
    raise SystemExit(1 if run(ReplayConfig(not ap.parse_args().no_notes)) else 0)
