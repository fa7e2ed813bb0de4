"""Print |L_k F_P(C_n)| with the saturation log of every cell.

    python3 scripts/filtration_table.py --operad comm --n 1..4 --k 1..4
"""
from __future__ import annotations

import argparse
import json
import time
from dataclasses import dataclass, field

from kdendro import kan, operads, trees
from kdendro.cli import CATEGORIES, parse_range
from kdendro.presheaf import OperadicPresheaf, restrict_k


@dataclass
class FiltrationConfig:
    operad: str = "assoc"
    category: str = "cospan"
    n: list[int] = field(default_factory=lambda: [1, 2, 3, 4])
    k: list[int] = field(default_factory=lambda: [1, 2, 3, 4])
    unary_filter: bool = True
    records: bool = False


@dataclass
class Cell:
    n: int
    k: int
    cardinality: int
    full: int
    bound: int
    saturation: tuple[int, int]
    seconds: float


def run(cfg: FiltrationConfig) -> list[Cell]:
    category = CATEGORIES[cfg.category]() if cfg.operad in ("from_category", "cocartesian") else None
    P = operads.builtin(cfg.operad, max(max(cfg.n), max(cfg.k)), category)
    F = OperadicPresheaf(P)
    cells = []
    for n in cfg.n:
        C = trees.corolla(n)
        for k in cfg.k:
            start = time.monotonic()
            L = kan.LeftKanPresheaf(restrict_k(F, k), config=kan.LeftKanConfig(unary_filter=cfg.unary_filter))
            size = len(L.value(C))
            _, bound, low, high = L.saturation_log[-1]
            cells.append(Cell(n, k, size, F.size(C), bound, (low, high), time.monotonic() - start))
    return cells


def main(argv=None) -> None:
    defaults = FiltrationConfig()
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--operad", default=defaults.operad)
    parser.add_argument("--category", default=defaults.category, choices=sorted(CATEGORIES))
    parser.add_argument("--n", type=parse_range, default=defaults.n)
    parser.add_argument("--k", type=parse_range, default=defaults.k)
    parser.add_argument("--no-filter", dest="unary_filter", action="store_false")
    parser.add_argument("--records", action="store_true")
    cfg = FiltrationConfig(**vars(parser.parse_args(argv)))
    for c in run(cfg):
        if cfg.records:
            print(json.dumps({**c.__dict__, "stabilized": c.cardinality == c.full}, sort_keys=True))
        else:
            mark = "=" if c.cardinality == c.full else " "
            print(f"n={c.n} k={c.k} |L|={c.cardinality:<5}{mark} |F|={c.full:<4} bound={c.bound} saturation={c.saturation[0]}/{c.saturation[1]} {c.seconds:.2f}s")


if __name__ == "__main__":
    main()
