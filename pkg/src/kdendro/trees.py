"""Closed rooted trees, their morphisms, and the subtree combinatorics around them.

A closed tree is stored in canonical form: edges are numbered ``0..n-1`` in
preorder of the canonical parenthesization, so the root is ``0`` and the upper
subtree above ``e`` is the contiguous index range ``[e, e + height_span[e])``.
Children are ordered by comparing their canonical texts as plain strings,
which puts ``'('`` before ``')'``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

INF = math.inf

FLAGS = (
    "rooted",
    "max_surjective",
    "subtree_inclusion",
    "rooted_subtree_inclusion",
    "isomorphism",
)


class TreeParseError(ValueError):
    """Malformed parenthesized tree text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class InvalidMorphism(ValueError):
    """An edge map that is not order- and independence-preserving.

    ``witness`` is ``(kind, x, y)`` where ``kind`` is ``"order"`` or
    ``"independence"`` and ``x, y`` are source edges.
    """

    def __init__(self, witness: tuple[str, int, int]):
        kind, x, y = witness
        super().__init__(f"{kind} violated by source edges ({x}, {y})")
        self.witness = witness


def parse_bound(value) -> float | int:
    """Parse a valence bound; ``inf``/``∞`` give the unbounded value."""
    if isinstance(value, (int, float)):
        if value != INF and (value < 1 or int(value) != value):
            raise ValueError(f"bad valence bound {value!r}")
        return value if value == INF else int(value)
    s = str(value).strip().lower()
    if s in ("inf", "infinity", "∞", "oo"):
        return INF
    n = int(s)
    if n < 1:
        raise ValueError(f"bad valence bound {value!r}")
    return n


def _parse_parents(text: str) -> list[int]:
    text = "".join(text.split())
    if not text:
        raise TreeParseError("empty tree text", 0)
    parents: list[int] = []
    stack: list[int] = []
    for pos, ch in enumerate(text):
        if ch == "(":
            if not stack and parents:
                raise TreeParseError("second root", pos)
            parents.append(stack[-1] if stack else -1)
            stack.append(len(parents) - 1)
        elif ch == ")":
            if not stack:
                raise TreeParseError("unbalanced ')'", pos)
            stack.pop()
        else:
            raise TreeParseError(f"unexpected character {ch!r}", pos)
    if stack:
        raise TreeParseError("unclosed '('", len(text))
    return parents


def _canonical_layout(parents: Sequence[int]) -> tuple[str, list[int]]:
    """Canonical text and a relabelling old edge -> canonical preorder index."""
    n = len(parents)
    children: list[list[int]] = [[] for _ in range(n)]
    root = None
    for e, p in enumerate(parents):
        if p < 0:
            if root is not None:
                raise ValueError("parent array has more than one root")
            root = e
        else:
            children[p].append(e)
    if root is None:
        raise ValueError("parent array has no root")

    # post-order without recursion: trees may be deep chains
    texts: list[str | None] = [None] * n
    order = []
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(children[v])
    if len(order) != n:
        raise ValueError("parent array is not a connected tree")
    for v in reversed(order):
        children[v].sort(key=lambda c: (texts[c], c))
        texts[v] = "(" + "".join(texts[c] for c in children[v]) + ")"

    relabel = [0] * n
    idx = 0
    stack = [root]
    while stack:
        v = stack.pop()
        relabel[v] = idx
        idx += 1
        stack.extend(reversed(children[v]))
    return texts[root], relabel


class ClosedTree:
    """A finite rooted tree with no leaves marked (every maximal edge is closed).

    Instances are canonical and interned: construct them with
    :func:`parse_tree`, :func:`canonicalize` or :meth:`from_parents`.
    """

    __slots__ = ("text", "parent", "children", "span", "__dict__")

    def __init__(self, text: str):
        parents = _parse_parents(text)
        canon, _ = _canonical_layout(parents)
        if canon != text:
            raise ValueError(f"{text!r} is not canonical; use parse_tree")
        n = len(parents)
        children: list[list[int]] = [[] for _ in range(n)]
        for e, p in enumerate(parents):
            if p >= 0:
                children[p].append(e)
        span = [1] * n
        for e in range(n - 1, 0, -1):
            span[parents[e]] += span[e]
        self.text = text
        self.parent = tuple(parents)
        self.children = tuple(tuple(c) for c in children)
        self.span = tuple(span)

    @staticmethod
    def from_parents(parents: Sequence[int]) -> tuple["ClosedTree", tuple[int, ...]]:
        """Canonical tree for a parent array, plus ``relabel[old] = new``."""
        text, relabel = _canonical_layout(parents)
        return parse_tree(text), tuple(relabel)

    def __len__(self) -> int:
        return len(self.parent)

    def __eq__(self, other) -> bool:
        return isinstance(other, ClosedTree) and other.text == self.text

    def __hash__(self) -> int:
        return hash(self.text)

    def __lt__(self, other: "ClosedTree") -> bool:
        return self.sort_key < other.sort_key

    def __repr__(self) -> str:
        return f"ClosedTree({self.text!r})"

    @property
    def sort_key(self) -> tuple[int, str]:
        return (len(self), self.text)

    @property
    def edges(self) -> range:
        return range(len(self))

    root = 0

    def valence(self, e: int) -> int:
        return len(self.children[e])

    @cached_property
    def max_valence(self) -> int:
        return max(len(c) for c in self.children)

    def is_k_dendroidal(self, k) -> bool:
        return self.max_valence <= k

    @cached_property
    def maximal(self) -> tuple[int, ...]:
        return tuple(e for e in self.edges if not self.children[e])

    @cached_property
    def depth(self) -> tuple[int, ...]:
        d = [0] * len(self)
        for e in range(1, len(self)):
            d[e] = d[self.parent[e]] + 1
        return tuple(d)

    def le(self, x: int, y: int) -> bool:
        """``x <= y``: ``y`` lies in the upper subtree rooted at ``x``."""
        return x <= y < x + self.span[x]

    def comparable(self, x: int, y: int) -> bool:
        return self.le(x, y) or self.le(y, x)

    def independent(self, x: int, y: int) -> bool:
        return not self.comparable(x, y)

    def ancestors(self, e: int) -> list[int]:
        """Edges strictly below ``e``, nearest first."""
        out = []
        while self.parent[e] >= 0:
            e = self.parent[e]
            out.append(e)
        return out

    def upper(self, e: int) -> range:
        return range(e, e + self.span[e])

    def down_closure(self, edges: Iterable[int]) -> frozenset[int]:
        out: set[int] = set()
        for e in edges:
            while e >= 0 and e not in out:
                out.add(e)
                e = self.parent[e]
        return frozenset(out)


@lru_cache(maxsize=None)
def parse_tree(text: str) -> ClosedTree:
    """Parse any parenthesized text into its canonical :class:`ClosedTree`."""
    parents = _parse_parents(text)
    canon, _ = _canonical_layout(parents)
    return _intern(canon)


@lru_cache(maxsize=None)
def _intern(canon: str) -> ClosedTree:
    return ClosedTree(canon)


def canonicalize(text: str) -> tuple[str, ClosedTree]:
    tree = parse_tree(text)
    return tree.text, tree


def corolla(n: int) -> ClosedTree:
    return parse_tree("(" + "()" * n + ")")


def chain(n: int) -> ClosedTree:
    """The linear tree with ``n`` edges."""
    if n < 1:
        raise ValueError("a chain has at least one edge")
    return parse_tree("(" * n + ")" * n)


ETA = corolla(0)


# ---------------------------------------------------------------------------
# enumeration


def _forests_rec(pool, total, parts, limit):
    if total == 0:
        yield ()
        return
    if parts < 1:
        return
    for i in range(limit - 1, -1, -1):
        s = pool[i][0]
        if s > total:
            continue
        for rest in _forests_rec(pool, total - s, parts - 1, i + 1):
            yield (i,) + rest


def trees_of_size(n: int, k=INF) -> tuple[ClosedTree, ...]:
    """All trees with exactly ``n`` edges and valences ``<= k``, sorted by text."""
    if n < 1:
        raise ValueError("trees have at least one edge")
    return tuple(_intern(t) for t in _trees_of_size_texts(n, k))


@lru_cache(maxsize=None)
def _trees_of_size_texts(n: int, k) -> tuple[str, ...]:
    if n == 1:
        return ("()",)
    pool = [(s, t) for s in range(1, n) for t in _trees_of_size_texts(s, k)]
    pool.sort(key=lambda st: st[0])
    out = set()
    for forest in _forests_rec(pool, n - 1, k, len(pool)):
        out.add("(" + "".join(sorted(pool[i][1] for i in forest)) + ")")
    return tuple(sorted(out))


def enumerate_trees(max_edges: int, k=INF) -> list[ClosedTree]:
    """One canonical representative per isomorphism class, sorted by (size, text)."""
    if max_edges < 1:
        raise ValueError("max_edges must be at least 1")
    return [t for n in range(1, max_edges + 1) for t in trees_of_size(n, k)]


def trees_with_maximal(m: int, max_edges: int, k=INF) -> list[ClosedTree]:
    return [t for t in enumerate_trees(max_edges, k) if len(t.maximal) == m]


# ---------------------------------------------------------------------------
# morphisms


def morphism_witness(source: ClosedTree, target: ClosedTree, mapping: Sequence[int]):
    """``None`` if the map is a morphism, else ``(kind, x, y)``."""
    if len(mapping) != len(source):
        raise ValueError(f"edge map has {len(mapping)} entries, source has {len(source)} edges")
    for y in mapping:
        if not (0 <= y < len(target)):
            raise ValueError(f"edge map value {y} is not an edge of the target")
    for x, y in itertools.combinations(source.edges, 2):
        fx, fy = mapping[x], mapping[y]
        if source.le(x, y):
            if not target.le(fx, fy):
                return ("order", x, y)
        elif not target.independent(fx, fy):
            return ("independence", x, y)
    return None


@dataclass(frozen=True)
class TreeMorphism:
    source: ClosedTree
    target: ClosedTree
    map: tuple[int, ...]

    def __call__(self, e: int) -> int:
        return self.map[e]

    @cached_property
    def image(self) -> frozenset[int]:
        return frozenset(self.map)

    @cached_property
    def injective(self) -> bool:
        return len(self.image) == len(self.map)

    @cached_property
    def rooted(self) -> bool:
        return self.map[0] == 0

    @cached_property
    def max_surjective(self) -> bool:
        return all(m in self.image for m in self.target.maximal)

    @cached_property
    def subtree_inclusion(self) -> bool:
        if not self.injective:
            return False
        # convexity: everything between the image root and an image edge is hit
        low = self.map[0]
        img = self.image
        for y in img:
            e = y
            while e != low:
                e = self.target.parent[e]
                if e < 0:
                    return False
                if e not in img:
                    return False
        return True

    @cached_property
    def rooted_subtree_inclusion(self) -> bool:
        return self.rooted and self.subtree_inclusion

    @cached_property
    def isomorphism(self) -> bool:
        return self.injective and len(self.source) == len(self.target)

    @property
    def flags(self) -> frozenset[str]:
        return frozenset(f for f in FLAGS if getattr(self, f))

    def to_record(self) -> dict:
        return {"source": self.source.text, "target": self.target.text, "map": list(self.map)}

    @staticmethod
    def from_record(record: dict) -> "TreeMorphism":
        source = _intern_checked(record["source"])
        target = _intern_checked(record["target"])
        return validate_morphism(source, target, record["map"])


def _intern_checked(text: str) -> ClosedTree:
    tree = parse_tree(text)
    if tree.text != "".join(text.split()):
        raise ValueError(f"morphism records need canonical tree text, got {text!r}")
    return tree


def validate_morphism(source: ClosedTree, target: ClosedTree, mapping) -> TreeMorphism:
    """Check an edge map; raise :class:`InvalidMorphism` with a witness pair on failure."""
    mapping = tuple(int(v) for v in mapping)
    witness = morphism_witness(source, target, mapping)
    if witness is not None:
        raise InvalidMorphism(witness)
    return TreeMorphism(source, target, mapping)


def identity(tree: ClosedTree) -> TreeMorphism:
    return TreeMorphism(tree, tree, tuple(tree.edges))


def compose(g: TreeMorphism, f: TreeMorphism) -> TreeMorphism:
    """``g ∘ f``."""
    if f.target != g.source:
        raise ValueError("morphisms are not composable")
    return TreeMorphism(f.source, g.target, tuple(g.map[y] for y in f.map))


@lru_cache(maxsize=None)
def _independent_before(tree: ClosedTree) -> tuple[tuple[int, ...], ...]:
    # in preorder, an earlier edge is either an ancestor or independent
    return tuple(
        tuple(x for x in range(e) if not tree.le(x, e)) for e in tree.edges
    )


def iter_homs(source: ClosedTree, target: ClosedTree, class_filter: Iterable[str] = ()) -> Iterator[TreeMorphism]:
    """Depth-first enumeration of morphisms in lexicographic order of the edge map."""
    want = frozenset(class_filter)
    unknown = want - set(FLAGS)
    if unknown:
        raise ValueError(f"unknown morphism classes {sorted(unknown)}")
    rooted = "rooted" in want or "rooted_subtree_inclusion" in want
    maxsurj = "max_surjective" in want or "isomorphism" in want
    injective = bool(want & {"subtree_inclusion", "rooted_subtree_inclusion", "isomorphism"})
    if "isomorphism" in want and len(source) != len(target):
        return
    if maxsurj and len(source.maximal) < len(target.maximal):
        return

    n = len(source)
    indep = _independent_before(source)
    tmax = set(target.maximal)
    fmap = [0] * n
    used: set[int] = set()

    def candidates(e: int) -> Iterable[int]:
        if e == 0:
            return (0,) if rooted else target.edges
        return target.upper(fmap[source.parent[e]])

    def rec(e: int):
        if e == n:
            m = TreeMorphism(source, target, tuple(fmap))
            if all(getattr(m, f) for f in want):
                yield m
            return
        is_max = not source.children[e]
        for y in candidates(e):
            if maxsurj and is_max and y not in tmax:
                continue
            if injective and y in used:
                continue
            ok = True
            for x in indep[e]:
                if target.comparable(fmap[x], y):
                    ok = False
                    break
            if not ok:
                continue
            fmap[e] = y
            if injective:
                used.add(y)
            yield from rec(e + 1)
            if injective:
                used.discard(y)

    yield from rec(0)


def enumerate_homs(source: ClosedTree, target: ClosedTree, class_filter: Iterable[str] = ()) -> list[TreeMorphism]:
    return list(iter_homs(source, target, class_filter))


@lru_cache(maxsize=None)
def automorphisms(tree: ClosedTree) -> tuple[TreeMorphism, ...]:
    return tuple(iter_homs(tree, tree, ("isomorphism",)))


# ---------------------------------------------------------------------------
# subtrees


@dataclass(frozen=True)
class Subtree:
    """An edge subset of ``ambient`` with its canonical tree and embedding."""

    ambient: ClosedTree
    edges: frozenset[int]
    tree: ClosedTree
    embedding: tuple[int, ...]  # canonical index -> ambient edge

    @cached_property
    def index(self) -> dict[int, int]:
        return {a: i for i, a in enumerate(self.embedding)}

    @cached_property
    def inclusion(self) -> TreeMorphism:
        return TreeMorphism(self.tree, self.ambient, self.embedding)


@lru_cache(maxsize=None)
def induced_subtree(ambient: ClosedTree, edges: frozenset[int]) -> Subtree:
    """Canonical tree on an edge subset, with the order induced from ``ambient``.

    The subset needs a minimum; each edge's parent is its nearest ambient
    ancestor inside the subset.
    """
    order = sorted(edges)
    if not order:
        raise ValueError("empty edge subset")
    low = order[0]
    pos = {e: i for i, e in enumerate(order)}
    parents = []
    for e in order:
        if e == low:
            parents.append(-1)
            continue
        p = ambient.parent[e]
        while p >= 0 and p not in pos:
            p = ambient.parent[p]
        if p < 0 or not ambient.le(low, e):
            raise ValueError("edge subset has no minimum")
        parents.append(pos[p])
    tree, relabel = ClosedTree.from_parents(parents)
    embedding = [0] * len(order)
    for i, e in enumerate(order):
        embedding[relabel[i]] = e
    return Subtree(ambient, frozenset(edges), tree, tuple(embedding))


def corestrict(f: TreeMorphism, sub: Subtree) -> TreeMorphism:
    """``f`` viewed as a map into the subtree ``sub`` of its target."""
    return TreeMorphism(f.source, sub.tree, tuple(sub.index[y] for y in f.map))


def inclusion_between(small: Subtree, big: Subtree) -> TreeMorphism:
    if small.ambient != big.ambient or not small.edges <= big.edges:
        raise ValueError("not nested subtrees of one ambient tree")
    return TreeMorphism(small.tree, big.tree, tuple(big.index[a] for a in small.embedding))


@dataclass(frozen=True)
class Factorization:
    first: TreeMorphism
    middle: ClosedTree
    second: TreeMorphism
    edges: frozenset[int]  # the middle as an edge subset of the target


def factor_edges(f: TreeMorphism, system: str) -> frozenset[int]:
    target = f.target
    if system == "ms_rsub":
        return target.down_closure(f.map)
    if system == "rms_sub":
        low = f.map[0]
        return frozenset(e for e in target.down_closure(f.map) if target.le(low, e))
    raise ValueError(f"unknown factorization system {system!r}")


def factorize(f: TreeMorphism, system: str) -> Factorization:
    """Factor ``f`` as ``second ∘ first``.

    ``ms_rsub``: max-surjective then rooted subtree inclusion.
    ``rms_sub``: rooted max-surjective then subtree inclusion.
    """
    sub = induced_subtree(f.target, factor_edges(f, system))
    return Factorization(corestrict(f, sub), sub.tree, sub.inclusion, sub.edges)


@dataclass(frozen=True)
class Cut:
    upper: Subtree  # T_{>=e}
    lower: Subtree  # closure of {x : not x > e}, with e maximal


def cut_at_edge(tree: ClosedTree, e: int) -> Cut:
    up = frozenset(tree.upper(e))
    low = frozenset(x for x in tree.edges if x == e or x not in up)
    return Cut(induced_subtree(tree, up), induced_subtree(tree, low))


def glue_at_edge(upper: ClosedTree, lower: ClosedTree, e: int) -> ClosedTree:
    """Identify the root of ``upper`` with the maximal edge ``e`` of ``lower``."""
    return glue_with_embeddings(upper, lower, e)[0]


def glue_with_embeddings(upper: ClosedTree, lower: ClosedTree, e: int):
    """Glued tree plus canonical positions of the upper and lower edges."""
    if not 0 <= e < len(lower):
        raise ValueError(f"{e} is not an edge of the lower tree")
    if lower.children[e]:
        raise ValueError(f"edge {e} is not maximal in the lower tree")
    n_low = len(lower)
    parents = list(lower.parent)
    up_pos = [e] + [n_low + i - 1 for i in range(1, len(upper))]
    for i in range(1, len(upper)):
        parents.append(up_pos[upper.parent[i]])
    tree, relabel = ClosedTree.from_parents(parents)
    return (
        tree,
        tuple(relabel[p] for p in up_pos),
        tuple(relabel[x] for x in range(n_low)),
    )


def _downsets_at(tree: ClosedTree, e: int, k) -> list[frozenset[int]]:
    """Rooted subtrees of ``T_{>=e}`` (downsets containing ``e``) with valences ``<= k``."""
    options = [[frozenset()] + _downsets_at(tree, c, k) for c in tree.children[e]]
    out = []
    for combo in itertools.product(*options):
        if sum(1 for s in combo if s) > k:
            continue
        out.append(frozenset({e}).union(*combo))
    return out


@lru_cache(maxsize=None)
def rooted_subtree_sets(tree: ClosedTree, k=INF, at: int = 0) -> tuple[frozenset[int], ...]:
    subs = _downsets_at(tree, at, k)
    subs.sort(key=lambda s: (len(s), sorted(s)))
    return tuple(subs)


@dataclass(frozen=True)
class SubtreePoset:
    """Rooted k-dendroidal subtrees of ``ambient`` ordered by containment."""

    ambient: ClosedTree
    k: float | int
    elements: tuple[frozenset[int], ...]

    def __len__(self) -> int:
        return len(self.elements)

    @cached_property
    def index(self) -> dict[frozenset[int], int]:
        return {s: i for i, s in enumerate(self.elements)}

    def leq(self, i: int, j: int) -> bool:
        return self.elements[i] <= self.elements[j]

    def subtree(self, i: int) -> Subtree:
        return induced_subtree(self.ambient, self.elements[i])

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """Pairs ``(small, big)`` with ``big`` one edge larger."""
        out = []
        for j, big in enumerate(self.elements):
            for e in big:
                if e != 0 and not (self.ambient.children[e] and any(c in big for c in self.ambient.children[e])):
                    i = self.index.get(big - {e})
                    if i is not None:
                        out.append((i, j))
        return tuple(sorted(out))


def rooted_subtrees(tree: ClosedTree, k=INF) -> SubtreePoset:
    return SubtreePoset(tree, k, rooted_subtree_sets(tree, k))


def all_subtree_sets(tree: ClosedTree) -> list[frozenset[int]]:
    """Every subtree (convex subset with a minimum) of ``tree``."""
    out = []
    for e in tree.edges:
        out.extend(rooted_subtree_sets(tree, INF, e))
    return out


# ---------------------------------------------------------------------------
# the Grothendieck description of rooted subtrees


@dataclass(frozen=True)
class GrothendieckObject:
    """A pair ``(I, X_I)``: root children ``I`` and a rooted subtree above each."""

    parts: tuple[tuple[int, frozenset[int]], ...]  # sorted by root child

    @property
    def I(self) -> frozenset[int]:
        return frozenset(e for e, _ in self.parts)

    @property
    def X(self) -> dict[int, frozenset[int]]:
        return dict(self.parts)

    def __lt__(self, other):
        return self._key < other._key

    @cached_property
    def _key(self):
        return tuple((e, sorted(s)) for e, s in self.parts)

    def leq(self, other: "GrothendieckObject") -> bool:
        mine, theirs = self.X, other.X
        return all(e in theirs and s <= theirs[e] for e, s in mine.items())


@dataclass(frozen=True)
class GrothendieckPoset:
    ambient: ClosedTree
    k: float | int
    objects: tuple[GrothendieckObject, ...]

    def gamma(self, obj: GrothendieckObject) -> frozenset[int]:
        """The corolla on ``I`` with each ``X_e`` grafted on."""
        return frozenset({0}).union(*(s for _, s in obj.parts))

    def psi(self, edges: frozenset[int]) -> GrothendieckObject:
        tree = self.ambient
        parts = tuple(
            (e, frozenset(x for x in edges if tree.le(e, x)))
            for e in tree.children[0]
            if e in edges
        )
        return GrothendieckObject(parts)

    def project(self, obj: GrothendieckObject) -> frozenset[int]:
        return obj.I

    def lift(self, obj: GrothendieckObject, bigger: Iterable[int]) -> GrothendieckObject:
        """coCartesian lift along ``I ⊆ I'``: new indices get their minimal subtree."""
        new = frozenset(bigger)
        if not obj.I <= new or not new <= set(self.ambient.children[0]):
            raise ValueError("lift target must contain I and lie in the root's children")
        mine = obj.X
        return GrothendieckObject(tuple((e, mine.get(e, frozenset({e}))) for e in sorted(new)))


def rsub_grothendieck(tree: ClosedTree, k=INF) -> GrothendieckPoset:
    kids = tree.children[0]
    objs = []
    for size in range(0, min(len(kids), k if k != INF else len(kids)) + 1):
        for I in itertools.combinations(kids, size):
            choices = [rooted_subtree_sets(tree, k, e) for e in I]
            for combo in itertools.product(*choices):
                objs.append(GrothendieckObject(tuple(zip(I, combo))))
    objs.sort(key=lambda o: (len(o.I), o._key))
    return GrothendieckPoset(tree, k, tuple(objs))


# ---------------------------------------------------------------------------
# elementary generators used by the colimit engine


def collapse_unary(tree: ClosedTree, e: int) -> TreeMorphism:
    """Degeneracy merging the unary edge ``e`` with its only child."""
    if tree.valence(e) != 1:
        raise ValueError(f"edge {e} is not unary")
    c = tree.children[e][0]
    keep = [x for x in tree.edges if x != c]
    pos = {x: i for i, x in enumerate(keep)}
    parents = []
    for x in keep:
        p = tree.parent[x]
        if p == c:
            p = e
        parents.append(pos[p] if p >= 0 else -1)
    quotient, relabel = ClosedTree.from_parents(parents)
    mapping = tuple(relabel[pos[e if x == c else x]] for x in tree.edges)
    return TreeMorphism(tree, quotient, mapping)


def contract_edge(tree: ClosedTree, e: int) -> Subtree:
    """The tree with inner edge ``e`` removed, as a face of ``tree``."""
    if e == 0 or not tree.children[e]:
        raise ValueError("only inner edges can be contracted")
    return induced_subtree(tree, frozenset(tree.edges) - {e})
