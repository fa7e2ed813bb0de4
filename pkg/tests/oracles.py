"""Independent reference computations used to pin expected values.

Nothing here imports the package: trees are parent arrays, operations are
plain tuples, and every count is obtained by a different route than the
engine's.
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache


# ---------------------------------------------------------------------------
# rooted tree counts


def rooted_tree_counts(n_max: int) -> list[int]:
    """Unlabeled rooted trees by number of nodes, via the Euler transform recurrence."""
    a = [0, 1]
    for n in range(1, n_max):
        total = 0
        for k in range(1, n + 1):
            s = sum(d * a[d] for d in range(1, k + 1) if k % d == 0)
            total += s * a[n - k + 1]
        a.append(total // n)
    return a[1 : n_max + 1]


def ahu_signature(parents: list[int]) -> str:
    children = {i: [] for i in range(len(parents))}
    root = None
    for i, p in enumerate(parents):
        if p < 0:
            root = i
        else:
            children[p].append(i)

    def sig(v):
        return "[" + "".join(sorted(sig(c) for c in children[v])) + "]"

    return sig(root)


def brute_force_tree_classes(n: int, max_valence=math.inf) -> set[str]:
    """Isomorphism classes of rooted trees with ``n`` nodes from all parent arrays with ``p[i] < i``."""
    out = set()
    for choice in itertools.product(*(range(i) for i in range(1, n))):
        parents = [-1, *choice]
        degree = [0] * n
        for p in choice:
            degree[p] += 1
        if max(degree) <= max_valence:
            out.add(ahu_signature(parents))
    return out


# ---------------------------------------------------------------------------
# morphisms straight from the definition


def _ancestors_or_self(parents, x):
    out = {x}
    while parents[x] >= 0:
        x = parents[x]
        out.add(x)
    return out


def leq(parents, x, y) -> bool:
    return x in _ancestors_or_self(parents, y)


def is_morphism(src_parents, tgt_parents, mapping) -> bool:
    n = len(src_parents)
    for x in range(n):
        for y in range(n):
            if x == y:
                continue
            fx, fy = mapping[x], mapping[y]
            if leq(src_parents, x, y):
                if not leq(tgt_parents, fx, fy):
                    return False
            elif not leq(src_parents, y, x):
                if leq(tgt_parents, fx, fy) or leq(tgt_parents, fy, fx):
                    return False
    return True


def brute_force_homs(src_parents, tgt_parents) -> list[tuple[int, ...]]:
    m = len(tgt_parents)
    return [
        mapping
        for mapping in itertools.product(range(m), repeat=len(src_parents))
        if is_morphism(src_parents, tgt_parents, mapping)
    ]


def maximal(parents) -> set[int]:
    has_child = {p for p in parents if p >= 0}
    return set(range(len(parents))) - has_child


def is_subtree_set(parents, edges: set[int]) -> bool:
    """Convex with a minimum."""
    if not edges:
        return False
    lows = [e for e in edges if all(leq(parents, e, x) for x in edges)]
    if len(lows) != 1:
        return False
    low = lows[0]
    for e in edges:
        x = e
        while x != low:
            x = parents[x]
            if x not in edges:
                return False
    return True


def factorization_middles(src_parents, tgt_parents, mapping, system: str) -> list[frozenset[int]]:
    """All target edge sets through which ``mapping`` factors with the declared classes."""
    m = len(tgt_parents)
    image = set(mapping)
    found = []
    for r in range(1, m + 1):
        for subset in itertools.combinations(range(m), r):
            s = set(subset)
            if not image <= s or not is_subtree_set(tgt_parents, s):
                continue
            # the first factor must hit every maximal edge of the middle
            tops = {e for e in s if not any(x != e and leq(tgt_parents, e, x) for x in s)}
            if not tops <= image:
                continue
            low = next(e for e in s if all(leq(tgt_parents, e, x) for x in s))
            if system == "ms_rsub" and 0 in s:
                found.append(frozenset(s))
            if system == "rms_sub" and mapping[0] == low:
                found.append(frozenset(s))
    return found


# ---------------------------------------------------------------------------
# operad references


def assoc_substitute(p: tuple[int, ...], qs: list[tuple[int, ...]]) -> tuple[int, ...]:
    """Substitute linear orders: name each leaf by (block, position) and rank."""
    names = []
    for x in p:
        names.extend((x, y) for y in qs[x])
    ranking = sorted((b, y) for b, q in enumerate(qs) for y in range(len(q)))
    rank = {name: i for i, name in enumerate(ranking)}
    return tuple(rank[name] for name in names)


def assoc_restrict(order: tuple[int, ...], keep: set[int]) -> tuple[int, ...]:
    kept = sorted(keep)
    renumber = {old: new for new, old in enumerate(kept)}
    return tuple(renumber[x] for x in order if x in keep)


def planar_reading(children: list[list[int]], orders: dict[int, tuple[int, ...]], base: int, variables: list[int]) -> tuple[int, ...]:
    """Read the variables above ``base`` in the planar order fixed by the vertex orders."""
    slot = {v: i for i, v in enumerate(variables)}
    out = []

    def walk(x):
        if x in slot:
            out.append(slot[x])
            return
        kids = children[x]
        for position in orders[x]:
            walk(kids[position])

    walk(base)
    return tuple(out)


# ---------------------------------------------------------------------------
# extension oracles


def phylogenetic_trees(leaves: tuple, max_degree) -> list:
    """Rooted leaf-labelled trees without unary vertices, internal degrees in ``2..max_degree``.

    A tree is a frozenset of child subtrees; a leaf is its label.
    """
    leaves = tuple(sorted(leaves))
    if len(leaves) == 1:
        return [leaves[0]]
    out = []
    for blocks in _set_partitions(leaves):
        if not 2 <= len(blocks) <= max_degree:
            continue
        options = [phylogenetic_trees(tuple(b), max_degree) for b in blocks]
        for combo in itertools.product(*options):
            out.append(frozenset(combo))
    return out


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [(first,) + part[i]] + part[i + 1 :]
        yield [(first,)] + part


def _contractions(tree):
    """Trees obtained by contracting one internal edge."""
    if not isinstance(tree, frozenset):
        return
    kids = list(tree)
    for i, c in enumerate(kids):
        if isinstance(c, frozenset):
            yield frozenset(kids[:i] + kids[i + 1 :]) | c
        for cc in _contractions(c):
            yield frozenset(kids[:i] + [cc] + kids[i + 1 :])


def component_count(nodes, neighbours) -> int:
    nodes = list(nodes)
    index = {n: i for i, n in enumerate(nodes)}
    parent = list(range(len(nodes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for n in nodes:
        for m in neighbours(n):
            if m in index:
                parent[find(index[n])] = find(index[m])
    return len({find(i) for i in range(len(nodes))})


def comm_left_count(n: int, k) -> int:
    """Components of leaf-labelled trees with degrees ``<= k`` under edge contraction."""
    if n == 0:
        return 1
    if n == 1:
        return 1
    trees = phylogenetic_trees(tuple(range(n)), k)
    return component_count(trees, _contractions)


def planar_trees(n: int, max_degree) -> list:
    """Planar rooted trees with ``n`` unlabelled leaves, no unary vertices, degrees ``<= max_degree``."""

    @lru_cache(maxsize=None)
    def build(m):
        if m == 1:
            return ("L",)
        out = []
        for parts in _compositions(m):
            if not 2 <= len(parts) <= max_degree:
                continue
            for combo in itertools.product(*(build(p) for p in parts)):
                out.append(tuple(combo))
        return tuple(out)

    return list(build(n))


def _compositions(m):
    if m == 0:
        yield ()
        return
    for first in range(1, m + 1):
        for rest in _compositions(m - first):
            yield (first,) + rest


def _planar_contractions(tree):
    if tree == "L":
        return
    kids = list(tree)
    for i, c in enumerate(kids):
        if c != "L":
            yield tuple(kids[:i] + list(c) + kids[i + 1 :])
        for cc in _planar_contractions(c):
            yield tuple(kids[:i] + [cc] + kids[i + 1 :])


def assoc_left_count(n: int, k) -> int:
    """Components of planar trees under contraction, times the ``n!`` leaf orderings."""
    if n <= 1:
        return 1
    return component_count(planar_trees(n, k), _planar_contractions) * math.factorial(n)


def assoc_right_count(n: int, k) -> int:
    """Choices of linear orders on all subsets of size ``<= k`` that agree under restriction."""
    top = min(k, n)
    subsets = list(itertools.combinations(range(n), top))
    total = 0
    for orders in itertools.product(*(itertools.permutations(s) for s in subsets)):
        agree = True
        for (a, oa), (b, ob) in itertools.combinations(zip(subsets, orders), 2):
            common = set(a) & set(b)
            if [x for x in oa if x in common] != [x for x in ob if x in common]:
                agree = False
                break
        if agree:
            total += 1
    return total


def cocartesian_count(hom_counts: dict, inputs: tuple, output) -> int:
    return math.prod(hom_counts[(x, output)] for x in inputs)
