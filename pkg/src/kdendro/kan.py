"""Arity restriction and its two adjoints, computed at the level of sets.

The left extension ``L_k F (T)`` is the colimit of ``F`` over rooted
max-surjective maps ``g: T -> X`` into k-dendroidal trees, computed with a
union-find over pairs ``(g, λ)``. The right extension ``R_k F (T)`` is the set
of compatible families over the rooted k-dendroidal subtrees of ``T``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from networkx.utils import UnionFind

from .limits import Diagram, limit
from .operads import FiniteOperad
from .presheaf import OperadicPresheaf, Presheaf, restrict_k
from .trees import (
    INF,
    ClosedTree,
    GrothendieckObject,
    TreeMorphism,
    automorphisms,
    collapse_unary,
    compose,
    contract_edge,
    corestrict,
    corolla,
    enumerate_trees,
    factorize,
    inclusion_between,
    induced_subtree,
    iter_homs,
    rooted_subtrees,
    rsub_grothendieck,
)


class SaturationError(RuntimeError):
    """Class counts changed between the bound and a larger bound."""


class BudgetExceeded(RuntimeError):
    pass


def default_bound(tree: ClosedTree) -> int:
    """``2M - 1 + |T|`` with ``M`` the number of maximal edges."""
    return 2 * len(tree.maximal) - 1 + len(tree)


def _unary_in_image(X: ClosedTree, image: frozenset[int]) -> bool:
    return all(e in image for e in X.edges if X.valence(e) == 1)


# ---------------------------------------------------------------------------
# left extension


@dataclass(frozen=True)
class KanClass:
    """A colimit class, stored as its minimal representative ``(g: T -> X, λ)``."""

    tree: ClosedTree
    target: ClosedTree
    gmap: tuple[int, ...]
    label: Hashable

    @property
    def morphism(self) -> TreeMorphism:
        return TreeMorphism(self.tree, self.target, self.gmap)

    def __lt__(self, other: "KanClass") -> bool:
        return (self.target.sort_key, self.gmap, repr(self.label)) < (
            other.target.sort_key,
            other.gmap,
            repr(other.label),
        )


@dataclass
class LeftKanConfig:
    bound: int | None = None  # None: default_bound(T)
    unary_filter: bool = True
    saturation: bool = True
    max_elements: int = 2_000_000


@dataclass
class ColimitData:
    tree: ClosedTree
    bound: int
    objects: list[TreeMorphism]
    rep: dict[tuple, KanClass]  # (X, gmap, λ) -> class
    classes: tuple[KanClass, ...]
    relations: int

    def members(self, cls: KanClass) -> list[tuple]:
        return [key for key, r in self.rep.items() if r == cls]


def rooted_max_surjections(tree: ClosedTree, k, bound: int, unary_filter: bool) -> list[TreeMorphism]:
    """Rooted max-surjective maps out of ``tree`` into k-dendroidal trees of size ``<= bound``."""
    M = len(tree.maximal)
    limit_size = bound
    if unary_filter:
        limit_size = min(bound, len(tree) + M - 1)
    out = []
    for X in enumerate_trees(max(1, limit_size), k):
        if len(X.maximal) != M:
            continue
        for g in iter_homs(tree, X, ("rooted", "max_surjective")):
            if unary_filter and not _unary_in_image(X, g.image):
                continue
            out.append(g)
    return out


def _colimit(F: Presheaf, tree: ClosedTree, k, bound: int, unary_filter: bool, max_elements: int) -> ColimitData:
    objects = rooted_max_surjections(tree, k, bound, unary_filter)
    object_set = {(g.target, g.map) for g in objects}
    uf = UnionFind()
    index_in = {}
    count = 0
    for g in objects:
        vals = F.value(g.target)
        count += len(vals)
        if count > max_elements:
            raise BudgetExceeded(f"colimit for {tree.text} exceeds {max_elements} elements")
        for i, lam in enumerate(vals):
            node = (g.target, g.map, lam)
            uf[node]
            index_in[node] = i

    relations = 0

    def link(a, b):
        nonlocal relations
        relations += 1
        uf.union(a, b)

    for g in objects:
        X = g.target
        vals = F.value(X)
        # automorphisms: (α∘g, λ) ~ (g, F(α)λ)
        for alpha in automorphisms(X):
            if alpha.map == tuple(X.edges):
                continue
            ag = compose(alpha, g).map
            act = F.restrict(alpha)
            for lam in vals:
                link((X, ag, lam), (X, g.map, act[lam]))
        # inner faces away from the image: (g, λ) ~ (g_Y, F(d)λ)
        for y in X.edges:
            if y == 0 or not X.children[y] or y in g.image:
                continue
            Y = contract_edge(X, y)
            if Y.tree.max_valence > k:
                continue
            gy = corestrict(g, Y)
            if (Y.tree, gy.map) not in object_set:
                continue
            act = F.restrict(Y.inclusion)
            for lam in vals:
                link((X, g.map, lam), (Y.tree, gy.map, act[lam]))
        # degeneracies: (s∘g, λ'') ~ (g, F(s)λ'')
        for u in X.edges:
            if X.valence(u) != 1:
                continue
            s = collapse_unary(X, u)
            sg = compose(s, g)
            if (s.target, sg.map) not in object_set:
                continue
            act = F.restrict(s)
            for lam in F.value(s.target):
                link((s.target, sg.map, lam), (X, g.map, act[lam]))

    def key(node):
        X, gmap, lam = node
        return (len(X), X.text, gmap, index_in[node])

    rep: dict[tuple, KanClass] = {}
    classes = []
    for block in uf.to_sets():
        best = min(block, key=key)
        cls = KanClass(tree, best[0], best[1], best[2])
        classes.append((key(best), cls))
        for node in block:
            rep[node] = cls
    classes.sort(key=lambda kc: kc[0])
    return ColimitData(tree, bound, objects, rep, tuple(c for _, c in classes), relations)


class LeftKanPresheaf(Presheaf):
    """``L_k F`` on trees with valences ``<= ambient``."""

    def __init__(self, F: Presheaf, ambient=INF, config: LeftKanConfig | None = None):
        self.base = F
        self.k = F.bound
        self.bound = ambient
        self.config = config or LeftKanConfig()
        self._data: dict[ClosedTree, ColimitData] = {}
        self.saturation_log: list[tuple[str, int, int, int]] = []

    def __repr__(self) -> str:
        return f"LeftKanPresheaf({self.base!r}, ambient={self.bound})"

    def data(self, tree: ClosedTree) -> ColimitData:
        self._require(tree)
        got = self._data.get(tree)
        if got is None:
            cfg = self.config
            bound = cfg.bound if cfg.bound is not None else default_bound(tree)
            got = _colimit(self.base, tree, self.k, bound, cfg.unary_filter, cfg.max_elements)
            if cfg.saturation:
                bigger = _colimit(self.base, tree, self.k, bound + 2, cfg.unary_filter, cfg.max_elements)
                self.saturation_log.append((tree.text, bound, len(got.classes), len(bigger.classes)))
                if len(bigger.classes) != len(got.classes):
                    raise SaturationError(
                        f"{tree.text}: {len(got.classes)} classes at bound {bound}, "
                        f"{len(bigger.classes)} at {bound + 2}; rerun with a larger bound"
                    )
            self._data[tree] = got
        return got

    def value(self, tree: ClosedTree) -> tuple[KanClass, ...]:
        return self.data(tree).classes

    def normalize(self, g: TreeMorphism, lam) -> tuple:
        """Contract unary edges missed by ``g`` until the pair is a stored node."""
        data = self.data(g.source)
        F = self.base
        while (g.target, g.map, lam) not in data.rep:
            X = g.target
            spare = [y for y in X.edges if y != 0 and X.valence(y) == 1 and y not in g.image]
            if not spare:
                raise KeyError(f"no stored class for {g.map} : {g.source.text} -> {X.text}")
            Y = contract_edge(X, spare[0])
            lam = F.restrict(Y.inclusion)[lam]
            g = corestrict(g, Y)
        return (g.target, g.map, lam)

    def class_of(self, g: TreeMorphism, lam) -> KanClass:
        return self.data(g.source).rep[self.normalize(g, lam)]

    def restrict_element(self, f: TreeMorphism, cls: KanClass) -> KanClass:
        return lkan_restrict_pair(self, f, cls.morphism, cls.label)


def lkan_restrict_pair(L: LeftKanPresheaf, f: TreeMorphism, g: TreeMorphism, lam) -> KanClass:
    """Class of ``(m, F(s)λ)`` where ``g∘f = s∘m`` is the rms_sub factorization."""
    fac = factorize(compose(g, f), "rms_sub")
    mu = L.base.restrict(fac.second)[lam]
    return L.class_of(fac.first, mu)


def lkan_value(Fk: Presheaf, tree: ClosedTree, bound: int | None = None, unary_filter: bool = True, saturation: bool = True) -> tuple[KanClass, ...]:
    L = LeftKanPresheaf(Fk, INF, LeftKanConfig(bound=bound, unary_filter=unary_filter, saturation=saturation))
    return L.value(tree)


def lkan_counit(F: Presheaf, L: LeftKanPresheaf, tree: ClosedTree) -> dict:
    """``[g, λ] -> F(g)(λ)``."""
    return {cls: F.restrict(cls.morphism)[cls.label] for cls in L.value(tree)}


# ---------------------------------------------------------------------------
# right extension


@dataclass(frozen=True)
class KanFamily:
    """Components ``λ_X`` aligned with ``rooted_subtrees(tree, k).elements``."""

    tree: ClosedTree
    components: tuple

    def __lt__(self, other: "KanFamily") -> bool:
        return repr(self.components) < repr(other.components)


class RightKanPresheaf(Presheaf):
    """``R_k F`` on trees with valences ``<= ambient``."""

    def __init__(self, F: Presheaf, ambient=INF):
        self.base = F
        self.k = F.bound
        self.bound = ambient
        self._values: dict[ClosedTree, tuple[KanFamily, ...]] = {}

    def __repr__(self) -> str:
        return f"RightKanPresheaf({self.base!r}, ambient={self.bound})"

    def poset(self, tree: ClosedTree):
        return rooted_subtrees(tree, self.k)

    def value(self, tree: ClosedTree) -> tuple[KanFamily, ...]:
        self._require(tree)
        got = self._values.get(tree)
        if got is None:
            got = tuple(KanFamily(tree, comps) for comps in subtree_limit(self.base, tree, self.k))
            self._values[tree] = got
        return got

    def restrict_element(self, f: TreeMorphism, fam: KanFamily) -> KanFamily:
        """``λ_X = F(m)(λ'_Y)`` where ``f∘incl_X = incl_Y∘m`` is the ms_rsub factorization."""
        F = self.base
        src = self.poset(f.source)
        tgt = self.poset(f.target)
        comps = []
        for i in range(len(src)):
            sub = src.subtree(i)
            fac = factorize(compose(f, sub.inclusion), "ms_rsub")
            j = tgt.index[fac.edges]
            comps.append(F.restrict(fac.first)[fam.components[j]])
        return KanFamily(f.source, tuple(comps))


def subtree_limit(F: Presheaf, tree: ClosedTree, k) -> list[tuple]:
    """Compatible families over rooted k-dendroidal subtrees."""
    poset = rooted_subtrees(tree, k)
    subs = [poset.subtree(i) for i in range(len(poset))]
    d = Diagram(nodes=list(range(len(subs))), values={i: F.value(s.tree) for i, s in enumerate(subs)})
    for small, big in poset.covers:
        d.add_arrow(big, small, F.restrict(inclusion_between(subs[small], subs[big])))
    order = sorted(d.nodes, key=lambda i: (-len(poset.elements[i]), i))
    return limit(d, order)


def rkan_value(Fk: Presheaf, tree: ClosedTree) -> tuple[KanFamily, ...]:
    return RightKanPresheaf(Fk).value(tree)


def rkan_unit(F: Presheaf, R: RightKanPresheaf, tree: ClosedTree) -> dict:
    """``λ -> (F(incl_X) λ)_X``."""
    poset = R.poset(tree)
    maps = [F.restrict(poset.subtree(i).inclusion) for i in range(len(poset))]
    return {lam: KanFamily(tree, tuple(m[lam] for m in maps)) for lam in F.value(tree)}


# ---------------------------------------------------------------------------
# a second route to R_k through the root decomposition


@dataclass(frozen=True)
class RootDecomposed:
    """A family on the corollas ``{r} ∪ I`` and one decomposed element per root child."""

    corollas: tuple
    children: tuple


def root_decomposed_value(F: Presheaf, tree: ClosedTree, k) -> list[RootDecomposed]:
    """``lim_I F(C_I)`` fibered with ``∏ R_k F(T_{>=e})`` over the root children's colors."""
    G = rsub_grothendieck(tree, k)
    corolla_objects = [o for o in G.objects if all(len(s) == 1 for _, s in o.parts)]
    subs = [induced_subtree(tree, G.gamma(o)) for o in corolla_objects]
    d = Diagram(nodes=list(range(len(subs))), values={i: F.value(s.tree) for i, s in enumerate(subs)})
    pos = {o.I: i for i, o in enumerate(corolla_objects)}
    for o in corolla_objects:
        for e in o.I:
            small = pos[o.I - {e}]
            d.add_arrow(pos[o.I], small, F.restrict(inclusion_between(subs[small], subs[pos[o.I]])))
    order = sorted(d.nodes, key=lambda i: (-len(subs[i].edges), i))
    corolla_families = limit(d, order)

    kids = tree.children[0]
    uppers = [induced_subtree(tree, frozenset(tree.upper(c))) for c in kids]
    child_values = [root_decomposed_value(F, u.tree, k) for u in uppers]
    # each root child c is matched through the edge c of the 2-chain {r, c}
    edge_maps = []
    for c in kids:
        pair = subs[pos[frozenset({c})]]
        eta = induced_subtree(tree, frozenset({c}))
        edge_maps.append((pos[frozenset({c})], F.restrict(inclusion_between(eta, pair))))

    out = []

    def rec(i, chosen, fam):
        if i == len(kids):
            out.append(RootDecomposed(fam, tuple(chosen)))
            return
        node, m = edge_maps[i]
        want = m[fam[node]]
        for child in child_values[i]:
            if child.corollas[0] == want:
                chosen.append(child)
                rec(i + 1, chosen, fam)
                chosen.pop()

    for fam in corolla_families:
        rec(0, [], fam)
    return out


def decompose_family(F: Presheaf, fam: KanFamily, k) -> RootDecomposed:
    """Send a subtree family to its root decomposition through ``Γ``."""
    tree = fam.tree
    poset = rooted_subtrees(tree, k)
    G = rsub_grothendieck(tree, k)
    corolla_objects = [o for o in G.objects if all(len(s) == 1 for _, s in o.parts)]
    corollas = tuple(fam.components[poset.index[G.gamma(o)]] for o in corolla_objects)
    children = []
    for c in tree.children[0]:
        upper = induced_subtree(tree, frozenset(tree.upper(c)))
        inner = rooted_subtrees(upper.tree, k)
        comps = []
        for j in range(len(inner)):
            z = frozenset(upper.embedding[x] for x in inner.elements[j])
            obj = GrothendieckObject(((c, z),))
            x_sub = poset.subtree(poset.index[G.gamma(obj)])
            z_sub = induced_subtree(tree, z)
            comps.append(F.restrict(inclusion_between(z_sub, x_sub))[fam.components[poset.index[G.gamma(obj)]]])
        children.append(decompose_family(F, KanFamily(upper.tree, tuple(comps)), k))
    return RootDecomposed(corollas, tuple(children))


# ---------------------------------------------------------------------------
# checks and tables


@dataclass
class ImageReport:
    ok: bool
    side: str
    k: int
    rows: list[tuple[int, int, int, bool]]  # (n, |F(C_n)|, |extension|, bijective)
    witness: int | None = None


def _is_bijection(mapping: dict, codomain: Sequence) -> bool:
    vals = list(mapping.values())
    return len(set(vals)) == len(vals) and set(vals) == set(codomain)


def image_check(F: Presheaf, k, side: str, n_range: Iterable[int]) -> ImageReport:
    """Is the counit (left) or unit (right) a bijection at ``C_n`` for ``k < n``?"""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    Fk = restrict_k(F, k)
    rows = []
    witness = None
    for n in n_range:
        if n <= k:
            continue
        C = corolla(n)
        if side == "left":
            L = LeftKanPresheaf(Fk)
            counit = lkan_counit(F, L, C)
            ok = _is_bijection(counit, F.value(C))
            rows.append((n, len(F.value(C)), len(L.value(C)), ok))
        else:
            R = RightKanPresheaf(Fk)
            unit = rkan_unit(F, R, C)
            ok = _is_bijection(unit, R.value(C))
            rows.append((n, len(F.value(C)), len(R.value(C)), ok))
        if not ok and witness is None:
            witness = n
    return ImageReport(witness is None, side, k, rows, witness)


@dataclass
class TableRow:
    side: str
    operad: str
    n: int
    k: int | float
    cardinality: int | None
    stabilized: bool | None
    seconds: float = 0.0

    def to_record(self) -> dict:
        return {
            "side": self.side,
            "operad": self.operad,
            "n": self.n,
            "k": "inf" if self.k == INF else self.k,
            "cardinality": self.cardinality,
            "stabilized": self.stabilized,
        }


def extension_value(F: Presheaf, side: str, n: int, k) -> int:
    C = corolla(n)
    Fk = F if k >= F.bound else restrict_k(F, k)
    if side == "left":
        return len(LeftKanPresheaf(Fk).value(C))
    return len(RightKanPresheaf(Fk).value(C))


def arity_table(P: FiniteOperad, side: str, n_range: Iterable[int], k_range: Iterable, budget_seconds: float | None = None) -> list[TableRow]:
    """``|L_k F_P (C_n)|`` or ``|R_k F_P (C_n)|`` for every ``n`` and ``k``.

    Cells that would start after ``budget_seconds`` are left as markers with
    ``cardinality=None``.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    n_range, k_range = list(n_range), list(k_range)
    if n_range and max(n_range) > P.arity_cap:
        raise ValueError(f"arity {max(n_range)} exceeds the operad's cap {P.arity_cap}")
    F = OperadicPresheaf(P)
    start = time.monotonic()
    rows = []
    for n in n_range:
        full = len(F.value(corolla(n)))
        for k in k_range:
            if budget_seconds is not None and time.monotonic() - start > budget_seconds:
                rows.append(TableRow(side, P.name, n, k, None, None))
                continue
            t0 = time.monotonic()
            card = extension_value(F, side, n, k)
            rows.append(TableRow(side, P.name, n, k, card, card == full, time.monotonic() - t0))
    return rows
