"""Print |R_k F_P(C_n)| for a range of arities and arity bounds.

    python3 scripts/cofiltration_table.py --operad assoc --n 1..5 --k 1..5
"""
from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass, field

from kdendro import kan, operads
from kdendro.cli import CATEGORIES, parse_range


@dataclass
class CofiltrationConfig:
    operad: str = "assoc"
    category: str = "cospan"
    n: list[int] = field(default_factory=lambda: [1, 2, 3, 4, 5])
    k: list[int] = field(default_factory=lambda: [1, 2, 3, 4, 5])
    time_budget: float | None = 60.0
    records: bool = False


def run(cfg: CofiltrationConfig) -> list[kan.TableRow]:
    category = CATEGORIES[cfg.category]() if cfg.operad in ("from_category", "cocartesian") else None
    P = operads.builtin(cfg.operad, max(cfg.n), category)
    return kan.arity_table(P, "right", cfg.n, cfg.k, cfg.time_budget)


def render(cfg: CofiltrationConfig, rows: list[kan.TableRow]) -> str:
    if cfg.records:
        return "\n".join(json.dumps(r.to_record(), sort_keys=True) for r in rows)
    width = max(len(str(r.cardinality)) for r in rows) + 1
    lines = ["n\\k " + "".join(f"{k:>{width}}" for k in cfg.k)]
    for n in cfg.n:
        cells = ("?" if r.cardinality is None else str(r.cardinality) for r in rows if r.n == n)
        lines.append(f"{n:<3} " + "".join(f"{c:>{width}}" for c in cells))
    return "\n".join(lines)


def main(argv=None) -> None:
    defaults = CofiltrationConfig()
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--operad", default=defaults.operad, choices=operads_names())
    parser.add_argument("--category", default=defaults.category, choices=sorted(CATEGORIES))
    parser.add_argument("--n", type=parse_range, default=defaults.n)
    parser.add_argument("--k", type=parse_range, default=defaults.k)
    parser.add_argument("--time-budget", type=float, default=defaults.time_budget)
    parser.add_argument("--records", action="store_true")
    cfg = CofiltrationConfig(**vars(parser.parse_args(argv)))
    rows = run(cfg)
    if not cfg.records:
        print(f"# right extension of {cfg.operad}: {json.dumps(asdict(cfg))}")
    print(render(cfg, rows))


def operads_names() -> tuple[str, ...]:
    return ("assoc", "comm", "trivial_unital", "from_category", "cocartesian")


if __name__ == "__main__":
    main()
