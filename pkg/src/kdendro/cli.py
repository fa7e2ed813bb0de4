"""Command-line interface.

Exit codes: 0 success, 1 a check failed (witness on stderr), 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from typing import Sequence

from . import kan, operads, presheaf, trees

SCHEMA = "kdendro/1"


@dataclass
class Budget:
    tree_size: int = 8
    arity: int = 5


class InputError(Exception):
    pass


class CheckFailed(Exception):
    def __init__(self, witness):
        super().__init__(str(witness))
        self.witness = witness


def parse_budget(text: str) -> Budget:
    try:
        size, arity = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("budget must look like TREE_SIZE,ARITY") from None
    return Budget(size, arity)


def parse_range(text: str) -> list:
    """``3``, ``1..4``, ``1,2,5`` or ``inf``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(trees.parse_bound(part) if part.lower() in ("inf", "∞") else int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return out


def parse_map(text: str) -> list[int]:
    text = text.strip().strip("[]")
    return [int(x) for x in text.replace(" ", ",").split(",") if x]


def _bound_arg(text: str):
    try:
        return trees.parse_bound(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def cospan_category() -> operads.FiniteCategory:
    """Three objects, two arrows ``f: a -> b`` and ``h: c -> b``, five morphisms in all."""
    return operads.free_category(["a", "b", "c"], {"f": ("a", "b"), "h": ("c", "b")})


CATEGORIES = {"cospan": cospan_category, "point": lambda: operads.free_category(["x"], {})}
OPERADS = ("assoc", "comm", "trivial_unital", "from_category", "cocartesian")


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def text(self, line: str) -> None:
        if self.fmt == "text":
            print(line, file=self.stream)

    def record(self, kind: str, **fields) -> None:
        if self.fmt == "records":
            print(json.dumps({"schema": SCHEMA, "kind": kind, **fields}, sort_keys=True, ensure_ascii=False), file=self.stream)


def _tree(text: str, budget: Budget) -> trees.ClosedTree:
    try:
        tree = trees.parse_tree(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if len(tree) > budget.tree_size:
        raise InputError(f"tree {tree.text} has {len(tree)} edges, over the budget of {budget.tree_size}")
    return tree


def _operad(args, cap: int, budget: Budget) -> operads.FiniteOperad:
    if cap > budget.arity:
        raise InputError(f"arity cap {cap} is over the budget of {budget.arity}")
    name = args.operad
    category = None
    if name in ("from_category", "cocartesian"):
        category = CATEGORIES[args.category]()
    return operads.builtin(name, cap, category)


def _needed_cap(tree: trees.ClosedTree, k=None) -> int:
    cap = tree.max_valence
    if k is not None and k != trees.INF:
        cap = max(cap, int(k))
    return max(cap, 1)


# ---------------------------------------------------------------------------
# subcommands


def cmd_trees(args, out: Output, budget: Budget) -> int:
    if args.canonical is not None:
        tree = _tree(args.canonical, budget)
        out.text(tree.text)
        out.record("tree", tree=tree.text, edges=len(tree))
        return 0
    if args.max_edges > budget.tree_size:
        raise InputError(f"max edges {args.max_edges} over the budget of {budget.tree_size}")
    found = trees.enumerate_trees(args.max_edges, args.k)
    if args.sample is not None:
        rng = random.Random(args.seed)
        found = sorted(rng.sample(found, min(args.sample, len(found))))
    if args.count:
        out.text(str(len(found)))
        out.record("count", count=len(found))
        return 0
    for t in found:
        out.text(t.text)
        out.record("tree", tree=t.text, edges=len(t))
    return 0


def cmd_hom(args, out: Output, budget: Budget) -> int:
    source, target = _tree(args.source, budget), _tree(args.target, budget)
    homs = trees.enumerate_homs(source, target, args.klass or ())
    if args.count:
        out.text(str(len(homs)))
        out.record("count", count=len(homs))
        return 0
    for f in homs:
        out.text(" ".join(map(str, f.map)) + "  " + ",".join(sorted(f.flags)))
        out.record("morphism", **f.to_record(), flags=sorted(f.flags))
    return 0


def cmd_factor(args, out: Output, budget: Budget) -> int:
    source, target = _tree(args.source, budget), _tree(args.target, budget)
    try:
        f = trees.validate_morphism(source, target, parse_map(args.map))
    except trees.InvalidMorphism as exc:
        raise CheckFailed({"invalid_morphism": exc.witness}) from None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    fac = trees.factorize(f, args.system)
    out.text(f"first  {' '.join(map(str, fac.first.map))} : {source.text} -> {fac.middle.text}")
    out.text(f"middle {fac.middle.text} = edges {sorted(fac.edges)}")
    out.text(f"second {' '.join(map(str, fac.second.map))} : {fac.middle.text} -> {target.text}")
    out.record(
        "factorization",
        system=args.system,
        first=fac.first.to_record(),
        middle=fac.middle.text,
        edges=sorted(fac.edges),
        second=fac.second.to_record(),
    )
    return 0


def cmd_segal(args, out: Output, budget: Budget) -> int:
    tree = _tree(args.tree, budget)
    if args.presheaf == "circle":
        F = presheaf.circle_presheaf()
    else:
        F = presheaf.OperadicPresheaf(_operad(args, _needed_cap(tree), budget))
    conditions = presheaf.SEGAL_CONDITIONS if args.condition == "all" else (args.condition,)
    failed = None
    for cond in conditions:
        try:
            result = presheaf.segal_check(F, tree, cond)
        except presheaf.DomainError as exc:
            raise InputError(str(exc)) from None
        verdict = "pass" if result.ok else "fail"
        out.text(verdict if len(conditions) == 1 else f"{cond} {verdict}")
        out.record("segal", tree=tree.text, condition=cond, ok=result.ok, witness=repr(result.witness) if result.witness else None)
        if not result.ok and failed is None:
            failed = {"condition": cond, "sizes": result.sizes, "witness": repr(result.witness)}
    if failed:
        raise CheckFailed(failed)
    return 0


def _extension_setup(args, budget: Budget):
    tree = _tree(args.tree, budget) if args.tree else trees.corolla(args.corolla)
    if len(tree) > budget.tree_size:
        raise InputError(f"tree has {len(tree)} edges, over the budget of {budget.tree_size}")
    k = args.k
    P = _operad(args, max(_needed_cap(tree), k), budget)
    F = presheaf.OperadicPresheaf(P)
    return tree, k, F, presheaf.restrict_k(F, k)


def cmd_lkan(args, out: Output, budget: Budget) -> int:
    tree, k, F, Fk = _extension_setup(args, budget)
    config = kan.LeftKanConfig(bound=args.bound, unary_filter=not args.no_filter)
    L = kan.LeftKanPresheaf(Fk, config=config)
    try:
        classes = L.value(tree)
    except kan.SaturationError as exc:
        raise CheckFailed({"saturation": str(exc)}) from None
    _, bound, low, high = L.saturation_log[-1]
    out.text(str(len(classes)))
    out.record("lkan", tree=tree.text, k=k, cardinality=len(classes), bound=bound, saturation=[low, high])
    if args.show:
        for cls in classes:
            rec = {"target": cls.target.text, "map": list(cls.gmap), "label": cls.label.to_record(F.operad)}
            out.text(f"  {cls.target.text} {' '.join(map(str, cls.gmap))}")
            out.record("class", **rec)
    return 0


def cmd_rkan(args, out: Output, budget: Budget) -> int:
    tree, k, F, Fk = _extension_setup(args, budget)
    R = kan.RightKanPresheaf(Fk)
    fams = R.value(tree)
    out.text(str(len(fams)))
    out.record("rkan", tree=tree.text, k=k, cardinality=len(fams))
    if args.show:
        poset = R.poset(tree)
        for fam in fams:
            comps = [
                {"subtree": sorted(poset.elements[i]), "label": lab.to_record(F.operad)}
                for i, lab in enumerate(fam.components)
            ]
            out.record("family", components=comps)
    return 0


def cmd_table(args, out: Output, budget: Budget) -> int:
    ns, ks = args.n, args.k
    if max(ns) > budget.arity:
        raise InputError(f"arity {max(ns)} is over the budget of {budget.arity}")
    P = _operad(args, max(ns), budget)
    if args.image_check:
        F = presheaf.OperadicPresheaf(P)
        failures = []
        for k in ks:
            rep = kan.image_check(F, k, args.side, ns)
            for n, full, ext, ok in rep.rows:
                out.text(f"k={k} n={n} {full} {ext} {'pass' if ok else 'fail'}")
                out.record("image_check", side=args.side, operad=P.name, k=k, n=n, value=full, extension=ext, ok=ok)
            if not rep.ok:
                failures.append({"k": k, "n": rep.witness, "rows": rep.rows})
        if failures:
            raise CheckFailed(failures)
        return 0
    rows = kan.arity_table(P, args.side, ns, ks, args.time_budget)
    for n in ns:
        cells = [r for r in rows if r.n == n]
        text = " ".join("?" if r.cardinality is None else str(r.cardinality) for r in cells)
        out.text(text if len(ns) == 1 else f"n={n}: {text}")
        for r in cells:
            out.record("table_row", **r.to_record())
    return 0


def cmd_operad(args, out: Output, budget: Budget) -> int:
    if args.load:
        try:
            with open(args.load, encoding="utf-8") as fh:
                P = operads.loads(fh.read(), validate=not args.skip_validation)
        except (OSError, ValueError, KeyError) as exc:
            raise InputError(f"cannot load operad: {exc}") from None
    else:
        P = _operad(args, args.cap, budget)
    if args.dump:
        print(operads.dumps(P), file=out.stream)
        return 0
    sizes = P.arity_sizes()
    out.text(f"{P.name} colors={len(P.colors)} arity sizes {' '.join(map(str, sizes))}")
    out.record("operad", name=P.name, colors=len(P.colors), arity_sizes=sizes)
    if args.validate:
        report = operads.validate_operad(P, method=args.method)
        out.text("pass" if report.ok else "fail")
        out.record("validation", ok=report.ok, checked=report.checked)
        if not report.ok:
            raise CheckFailed([(law, repr(detail)) for law, detail in report.witnesses[:3]])
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kdendro", description="Closed k-dendroidal trees, unital operads and arity restriction.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "records"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=parse_budget, default=Budget(), help="TREE_SIZE,ARITY (default 8,5)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_operad(p, default="assoc"):
        p.add_argument("--operad", choices=OPERADS, default=default)
        p.add_argument("--category", choices=sorted(CATEGORIES), default="cospan")

    p = sub.add_parser("trees", parents=[common], help="enumerate or canonicalize trees")
    p.add_argument("--max-edges", type=int, default=4)
    p.add_argument("--k", type=_bound_arg, default=trees.INF)
    p.add_argument("--count", action="store_true")
    p.add_argument("--sample", type=int)
    p.add_argument("--canonical", metavar="TREE")
    p.set_defaults(run=cmd_trees)

    p = sub.add_parser("hom", parents=[common], help="list morphisms between two trees")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--class", dest="klass", action="append", choices=trees.FLAGS)
    p.add_argument("--count", action="store_true")
    p.set_defaults(run=cmd_hom)

    p = sub.add_parser("factor", parents=[common], help="factor a morphism")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--map", required=True, help="target index of each source edge, e.g. 0,1,2")
    p.add_argument("--system", choices=("ms_rsub", "rms_sub"), default="ms_rsub")
    p.set_defaults(run=cmd_factor)

    p = sub.add_parser("segal", parents=[common], help="check a Segal condition")
    add_operad(p)
    p.add_argument("--presheaf", choices=("operadic", "circle"), default="operadic")
    p.add_argument("--tree", required=True)
    p.add_argument("--condition", choices=presheaf.SEGAL_CONDITIONS + ("all",), default="all")
    p.set_defaults(run=cmd_segal)

    for name, fn in (("lkan", cmd_lkan), ("rkan", cmd_rkan)):
        p = sub.add_parser(name, parents=[common], help=f"{'left' if name == 'lkan' else 'right'} extension from k-ary data")
        add_operad(p)
        where = p.add_mutually_exclusive_group(required=True)
        where.add_argument("--tree")
        where.add_argument("--corolla", type=int)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--show", action="store_true")
        if name == "lkan":
            p.add_argument("--bound", type=int)
            p.add_argument("--no-filter", action="store_true", help="keep objects with unary edges outside the image")
        p.set_defaults(run=fn)

    p = sub.add_parser("table", parents=[common], help="arity table of an extension")
    add_operad(p)
    p.add_argument("--side", choices=("left", "right"), required=True)
    p.add_argument("--n", type=parse_range, required=True)
    p.add_argument("--k", type=parse_range, required=True)
    p.add_argument("--time-budget", type=float)
    p.add_argument("--image-check", action="store_true")
    p.set_defaults(run=cmd_table)

    p = sub.add_parser("operad", parents=[common], help="build, validate, dump or load an operad")
    add_operad(p)
    p.add_argument("--cap", type=int, default=3)
    p.add_argument("--validate", action="store_true")
    p.add_argument("--method", choices=("partial", "exhaustive"), default="partial")
    p.add_argument("--dump", action="store_true")
    p.add_argument("--load", metavar="FILE")
    p.add_argument("--skip-validation", action="store_true")
    p.set_defaults(run=cmd_operad)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    random.seed(args.seed)
    out = Output(args.format)
    try:
        return args.run(args, out, args.budget)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CheckFailed as exc:
        print(f"check failed: {json.dumps(exc.witness, default=repr)}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
