"""Set-valued presheaves on closed k-dendroidal trees.

The main example is the presheaf of operadic labelings of a finite operad:
a labeling colors every edge and puts an operation at every edge whose inputs
are the colors of its children in canonical order. Morphisms act by region
evaluation, composing the labels of the target tree between the image of an
edge and the images of its children.
"""
from __future__ import annotations

import itertools
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

from .limits import BijectionReport, Diagram, compare_with_limit, limit
from .operads import ArityCapError, FiniteOperad, Operation, act, compose, perm_inv
from .trees import (
    INF,
    ClosedTree,
    Subtree,
    TreeMorphism,
    chain,
    compose as compose_morphisms,
    cut_at_edge,
    enumerate_homs,
    identity,
    induced_subtree,
    inclusion_between,
)

SEGAL_CONDITIONS = ("elementary", "cut_inner", "cut_below", "cut_root")


class DomainError(ValueError):
    """A tree outside the presheaf's valence bound."""


class Presheaf(ABC):
    """A presheaf of finite sets on closed trees with valence at most ``bound``."""

    bound: float | int

    def in_domain(self, tree: ClosedTree) -> bool:
        return tree.max_valence <= self.bound

    def _require(self, tree: ClosedTree) -> None:
        if not self.in_domain(tree):
            raise DomainError(f"{tree.text} is outside the domain (valence bound {self.bound})")

    @abstractmethod
    def value(self, tree: ClosedTree) -> tuple:
        """Elements over ``tree`` in a deterministic order."""

    @abstractmethod
    def restrict_element(self, f: TreeMorphism, x) -> Hashable:
        """Action of ``f: T -> T'`` on one element of ``F(T')``."""

    def restrict(self, f: TreeMorphism) -> dict:
        """``F(f)`` as a dictionary ``F(T') -> F(T)``."""
        key = (f.source, f.target, f.map)
        cache = self.__dict__.setdefault("_restrict_cache", {})
        out = cache.get(key)
        if out is None:
            self._require(f.source)
            out = {x: self.restrict_element(f, x) for x in self.value(f.target)}
            cache[key] = out
        return out

    def size(self, tree: ClosedTree) -> int:
        return len(self.value(tree))


class _Memo:
    """Idempotent per-key cache; concurrent fills compute the same value."""

    def __init__(self):
        self._data: dict = {}
        self._lock = threading.Lock()

    def get(self, key, compute):
        try:
            return self._data[key]
        except KeyError:
            pass
        value = compute()
        with self._lock:
            return self._data.setdefault(key, value)


# ---------------------------------------------------------------------------
# operadic labelings


@dataclass(frozen=True)
class Labeling:
    tree: ClosedTree
    colors: tuple
    ops: tuple[Operation, ...]

    def to_record(self, P: FiniteOperad) -> dict:
        return {
            "tree": self.tree.text,
            "colors": list(self.colors),
            "ops": [P.op_index(p) for p in self.ops],
        }

    def __lt__(self, other: "Labeling") -> bool:
        return self._key < other._key

    @property
    def _key(self):
        return (self.tree.sort_key, repr(self.colors), tuple(repr(p.label) for p in self.ops))


def labeling_from_record(P: FiniteOperad, record: Mapping) -> Labeling:
    from .trees import parse_tree

    tree = parse_tree(record["tree"])
    colors = tuple(record["colors"])
    ops = []
    for e in tree.edges:
        profile = (tuple(colors[c] for c in tree.children[e]), colors[e])
        ops.append(P.ops[profile][record["ops"][e]])
    return Labeling(tree, colors, tuple(ops))


class OperadicPresheaf(Presheaf):
    """Labelings by a finite operad on trees with valences ``<= k``."""

    def __init__(self, operad: FiniteOperad, k=None):
        if k is None:
            k = operad.arity_cap
        if k > operad.arity_cap:
            raise ArityCapError(f"valence bound {k} exceeds the operad's arity cap {operad.arity_cap}")
        self.operad = operad
        self.bound = k
        self._values = _Memo()
        self._memo = {}

    def __repr__(self) -> str:
        return f"OperadicPresheaf({self.operad.name}, k={self.bound})"

    def value(self, tree: ClosedTree) -> tuple[Labeling, ...]:
        self._require(tree)
        return self._values.get(tree, lambda: tuple(self._labelings(tree)))

    def _labelings(self, tree: ClosedTree):
        P = self.operad
        for colors in itertools.product(P.colors, repeat=len(tree)):
            choices = [
                P.ops[(tuple(colors[c] for c in tree.children[e]), colors[e])]
                for e in tree.edges
            ]
            for ops in itertools.product(*choices):
                yield Labeling(tree, colors, ops)

    def restrict_element(self, f: TreeMorphism, lab: Labeling) -> Labeling:
        key = (f.source, f.target, f.map, lab)
        hit = self._memo.get(key)
        if hit is None:
            hit = region_restrict(self.operad, f, lab)
            self._memo[key] = hit
        return hit


def region_restrict(P: FiniteOperad, f: TreeMorphism, lab: Labeling) -> Labeling:
    """Pull a labeling of ``f.target`` back along ``f``."""
    source, target = f.source, f.target
    colors = tuple(lab.colors[f.map[e]] for e in source.edges)
    ops = tuple(region_operation(P, target, lab, f.map[e], [f.map[c] for c in source.children[e]]) for e in source.edges)
    return Labeling(source, colors, ops)


def region_operation(P: FiniteOperad, tree: ClosedTree, lab: Labeling, base: int, variables: Sequence[int]) -> Operation:
    """Compose the labels of ``tree`` from ``base`` up to the edges ``variables``.

    The result has one input per variable, in the given order. Branches that
    contain no variable are closed off by the nullary of their color.
    """
    slot = {v: i for i, v in enumerate(variables)}
    if len(slot) != len(variables):
        raise ValueError("region variables must be distinct")
    below = set()
    for v in variables:
        e = v
        while e != base:
            e = tree.parent[e]
            if e < 0:
                raise ValueError(f"variable edge {v} is not above {base}")
            below.add(e)

    visited = set()

    def evaluate(x: int) -> tuple[Operation, list[int]]:
        if x in visited:
            raise AssertionError(f"region evaluation revisited edge {x}")
        visited.add(x)
        if x in slot:
            return P.identity[lab.colors[x]], [slot[x]]
        if x != base and x not in below:
            return P.nullary[lab.colors[x]], []
        parts = [evaluate(c) for c in tree.children[x]]
        op = compose(P, lab.ops[x], [q for q, _ in parts])
        return op, [v for _, vs in parts for v in vs]

    op, order = evaluate(base)
    if sorted(order) != list(range(len(variables))):
        raise AssertionError("region evaluation did not consume every variable exactly once")
    if order == list(range(len(order))):
        return op
    return act(P, perm_inv(order), op)


# ---------------------------------------------------------------------------
# explicit tables


class FunctorialityError(ValueError):
    pass


class TablePresheaf(Presheaf):
    """Values on a finite list of trees and restriction maps along every morphism among them."""

    def __init__(self, values: Mapping[ClosedTree, Sequence], restrictions: Mapping[TreeMorphism, Mapping], bound=INF, audit: bool = True):
        self.bound = bound
        self._values = {t: tuple(v) for t, v in values.items()}
        self._restrictions = {
            (f.source, f.target, f.map): dict(m) for f, m in restrictions.items()
        }
        if audit:
            audit_functoriality(self)

    @property
    def trees(self) -> list[ClosedTree]:
        return sorted(self._values)

    def in_domain(self, tree: ClosedTree) -> bool:
        return tree in self._values

    def value(self, tree: ClosedTree) -> tuple:
        self._require(tree)
        return self._values[tree]

    def restrict_element(self, f: TreeMorphism, x):
        try:
            return self._restrictions[(f.source, f.target, f.map)][x]
        except KeyError:
            raise DomainError(f"no stored restriction along {f.map} : {f.source.text} -> {f.target.text}") from None


def audit_functoriality(F: TablePresheaf) -> None:
    trees = F.trees
    homs = {(s, t): enumerate_homs(s, t) for s in trees for t in trees}
    for (s, t), fs in homs.items():
        for f in fs:
            key = (f.source, f.target, f.map)
            table = F._restrictions.get(key)
            if table is None:
                raise FunctorialityError(f"missing restriction along {f.map} : {s.text} -> {t.text}")
            if set(table) != set(F.value(t)) or not set(table.values()) <= set(F.value(s)):
                raise FunctorialityError(f"restriction along {f.map} : {s.text} -> {t.text} is not a map F(T') -> F(T)")
    for t in trees:
        ident = identity(t)
        if any(F.restrict_element(ident, x) != x for x in F.value(t)):
            raise FunctorialityError(f"identity of {t.text} acts nontrivially")
    for a in trees:
        for b in trees:
            for f in homs[(a, b)]:
                for c in trees:
                    for g in homs[(b, c)]:
                        gf = compose_morphisms(g, f)
                        for x in F.value(c):
                            if F.restrict_element(gf, x) != F.restrict_element(f, F.restrict_element(g, x)):
                                raise FunctorialityError(
                                    f"composition law fails for {f.map} then {g.map} on {x!r}"
                                )


def circle_presheaf() -> TablePresheaf:
    """The simplicial circle on chains of one to three edges.

    A chain with ``n + 1`` edges is the simplex ``[n]``; its value is the set of
    monotone maps ``[n] -> [1]`` with the two constant maps identified. It is
    not Segal: a 3-chain has 3 elements but two 2-chains glue to 4.
    """
    trees = [chain(1), chain(2), chain(3)]

    def cls(word: tuple[int, ...]):
        return "*" if len(set(word)) == 1 else word

    values = {}
    for t in trees:
        n = len(t)
        words = [tuple([0] * (n - j) + [1] * j) for j in range(n + 1)]
        values[t] = tuple(sorted({cls(w) for w in words}, key=repr))
    restrictions = {}
    for s in trees:
        for t in trees:
            for f in enumerate_homs(s, t):
                table = {}
                for x in values[t]:
                    word = (0,) * len(t) if x == "*" else x
                    table[x] = cls(tuple(word[f.map[e]] for e in s.edges))
                restrictions[f] = table
    return TablePresheaf(values, restrictions, bound=1)


class RestrictedPresheaf(Presheaf):
    """``F`` seen on trees with valences ``<= k`` only."""

    def __init__(self, base: Presheaf, k):
        if k > base.bound:
            raise ValueError(f"cannot restrict a presheaf with bound {base.bound} to {k}")
        self.base = base
        self.bound = k

    def __repr__(self) -> str:
        return f"RestrictedPresheaf({self.base!r}, k={self.bound})"

    def in_domain(self, tree: ClosedTree) -> bool:
        return tree.max_valence <= self.bound and self.base.in_domain(tree)

    def value(self, tree: ClosedTree) -> tuple:
        self._require(tree)
        return self.base.value(tree)

    def restrict_element(self, f: TreeMorphism, x):
        return self.base.restrict_element(f, x)

    def restrict(self, f: TreeMorphism) -> dict:
        self._require(f.source)
        self._require(f.target)
        return self.base.restrict(f)


def restrict_k(F: Presheaf, k) -> Presheaf:
    if k == F.bound:
        return F
    return RestrictedPresheaf(F, k)


# ---------------------------------------------------------------------------
# Segal conditions


@dataclass(frozen=True)
class PieceDiagram:
    """Subtrees of ``tree`` and the inclusions among them that shape a Segal limit."""

    tree: ClosedTree
    pieces: tuple[frozenset[int], ...]
    relations: tuple[tuple[int, int], ...]  # (small, big) piece indices


def _dedupe(pieces: list[frozenset[int]], relations: list[tuple[frozenset[int], frozenset[int]]]) -> tuple:
    uniq = list(dict.fromkeys(pieces))
    pos = {p: i for i, p in enumerate(uniq)}
    rels = sorted({(pos[a], pos[b]) for a, b in relations if a != b})
    return tuple(uniq), tuple(rels)


def segal_pieces(tree: ClosedTree, condition: str, edge: int | None = None) -> list[PieceDiagram]:
    """The diagrams whose limits the condition compares with ``F(tree)``."""
    if condition not in SEGAL_CONDITIONS:
        raise ValueError(f"unknown Segal condition {condition!r}")
    T = tree

    def eta(e):
        return frozenset({e})

    def corolla_at(e):
        return frozenset({e, *T.children[e]})

    diagrams = []
    if condition == "elementary":
        pieces, rels = [], []
        for e in T.edges:
            pieces += [eta(e), corolla_at(e)]
            rels.append((eta(e), corolla_at(e)))
            if e:
                rels.append((eta(e), corolla_at(T.parent[e])))
        diagrams.append(PieceDiagram(T, *_dedupe(pieces, rels)))
    elif condition == "cut_inner":
        edges = [edge] if edge is not None else [e for e in T.edges if e != 0 and T.children[e]]
        for e in edges:
            cut = cut_at_edge(T, e)
            pieces = [cut.upper.edges, cut.lower.edges, eta(e)]
            rels = [(eta(e), cut.upper.edges), (eta(e), cut.lower.edges)]
            diagrams.append(PieceDiagram(T, *_dedupe(pieces, rels)))
    elif condition == "cut_below":
        edges = [edge] if edge is not None else [e for e in T.edges if T.children[e]]
        for e0 in edges:
            lower = cut_at_edge(T, e0).lower.edges
            pieces = [lower, eta(e0), corolla_at(e0)]
            rels = [(eta(e0), lower), (eta(e0), corolla_at(e0))]
            for c in T.children[e0]:
                up = frozenset(T.upper(c))
                pieces += [eta(c), up]
                rels += [(eta(c), corolla_at(e0)), (eta(c), up)]
            diagrams.append(PieceDiagram(T, *_dedupe(pieces, rels)))
    else:
        pieces, rels = [corolla_at(0)], []
        for c in T.children[0]:
            up = frozenset(T.upper(c))
            pieces += [eta(c), up]
            rels += [(eta(c), corolla_at(0)), (eta(c), up)]
        diagrams.append(PieceDiagram(T, *_dedupe(pieces, rels)))
    return diagrams


def piece_limit(F: Presheaf, diagram: PieceDiagram) -> tuple[list[Subtree], list[tuple]]:
    subs = [induced_subtree(diagram.tree, p) for p in diagram.pieces]
    d = Diagram(nodes=list(range(len(subs))), values={i: F.value(s.tree) for i, s in enumerate(subs)})
    for small, big in diagram.relations:
        d.add_arrow(big, small, F.restrict(inclusion_between(subs[small], subs[big])))
    order = sorted(d.nodes, key=lambda i: -len(diagram.pieces[i]))
    return subs, limit(d, order)


@dataclass
class SegalResult:
    ok: bool
    condition: str
    tree: ClosedTree
    checks: int
    witness: tuple | None = None
    sizes: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def segal_check(F: Presheaf, tree: ClosedTree, condition: str) -> SegalResult:
    """Is ``F(tree)`` the limit of ``F`` over the pieces of ``condition``?"""
    F._require(tree)
    values = F.value(tree)
    diagrams = segal_pieces(tree, condition)
    for diagram in diagrams:
        subs, fams = piece_limit(F, diagram)
        maps = [F.restrict(s.inclusion) for s in subs]
        images = [tuple(m[x] for m in maps) for x in values]
        report: BijectionReport = compare_with_limit(values, images, fams)
        if not report.ok:
            return SegalResult(
                False, condition, tree, len(diagrams),
                (report.witness, tuple(tuple(sorted(p)) for p in diagram.pieces)),
                (report.source_size, report.limit_size),
            )
    return SegalResult(True, condition, tree, len(diagrams))
