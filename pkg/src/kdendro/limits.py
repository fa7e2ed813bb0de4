"""Limits of finite diagrams of finite sets.

A diagram has nodes carrying finite sets and arrows ``big -> small`` given as
dictionaries. A limit element picks one value per node so that every arrow
sends the ``big`` value to the ``small`` value.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterator, Mapping, Sequence


@dataclass
class Diagram:
    nodes: list[Hashable]
    values: dict[Hashable, tuple]
    arrows: list[tuple[Hashable, Hashable, Mapping]] = field(default_factory=list)  # (big, small, map)

    def add_arrow(self, big, small, mapping: Mapping) -> None:
        self.arrows.append((big, small, mapping))


def _eager_order(diagram: Diagram, order: Sequence[Hashable]) -> list[Hashable]:
    """Follow ``order``, but place every node reachable by an arrow from a placed node right away.

    Reached nodes are forced, so they add no branching and let conflicts
    surface as soon as possible.
    """
    below: dict[Hashable, list] = {n: [] for n in order}
    for big, small, _ in diagram.arrows:
        below[big].append(small)
    rank = {n: i for i, n in enumerate(order)}
    placed: set = set()
    out = []
    for start in order:
        if start in placed:
            continue
        stack = [start]
        while stack:
            node = stack.pop()
            if node in placed:
                continue
            placed.add(node)
            out.append(node)
            stack.extend(sorted((s for s in below[node] if s not in placed), key=rank.__getitem__, reverse=True))
    return out


def _plan(diagram: Diagram, order: Sequence[Hashable]):
    pos = {n: i for i, n in enumerate(order)}
    # an arrow is checked (or used to force) once both ends are placed
    forced_by: dict[Hashable, tuple] = {}
    checks: dict[Hashable, list] = {n: [] for n in order}
    for big, small, mapping in diagram.arrows:
        if pos[big] < pos[small] and small not in forced_by:
            forced_by[small] = (big, mapping)
        else:
            later = big if pos[big] > pos[small] else small
            checks[later].append((big, small, mapping))
    return forced_by, checks


def iter_limit(diagram: Diagram, order: Sequence[Hashable] | None = None) -> Iterator[tuple]:
    """Yield limit elements as tuples aligned with ``diagram.nodes``.

    ``order`` fixes the assignment order; put nodes that determine others first.
    Output order is deterministic for a given diagram and order.
    """
    order = list(order) if order is not None else list(diagram.nodes)
    if set(order) != set(diagram.nodes) or len(order) != len(diagram.nodes):
        raise ValueError("order must list every node exactly once")
    order = _eager_order(diagram, order)
    forced_by, checks = _plan(diagram, order)
    chosen: dict[Hashable, object] = {}

    def rec(i: int):
        if i == len(order):
            yield tuple(chosen[n] for n in diagram.nodes)
            return
        node = order[i]
        if node in forced_by:
            big, mapping = forced_by[node]
            candidates = (mapping[chosen[big]],)
        else:
            candidates = diagram.values[node]
        for v in candidates:
            chosen[node] = v
            if all(m[chosen[b]] == chosen[s] for b, s, m in checks[node]):
                yield from rec(i + 1)
        chosen.pop(node, None)

    yield from rec(0)


def limit(diagram: Diagram, order: Sequence[Hashable] | None = None) -> list[tuple]:
    return list(iter_limit(diagram, order))


@dataclass
class BijectionReport:
    ok: bool
    source_size: int
    limit_size: int
    witness: tuple | None = None


def compare_with_limit(source: Sequence, images: Sequence[tuple], limit_elements: Sequence[tuple]) -> BijectionReport:
    """Is ``source[i] -> images[i]`` a bijection onto ``limit_elements``?

    The witness is ``("doubly_hit", family, x, y)`` or ``("missing", family)``.
    """
    seen: dict[tuple, object] = {}
    witness = None
    for x, img in zip(source, images):
        if img in seen:
            witness = witness or ("doubly_hit", img, seen[img], x)
        else:
            seen[img] = x
    if witness is None:
        for fam in limit_elements:
            if fam not in seen:
                witness = ("missing", fam)
                break
    if witness is None and len(seen) != len(limit_elements):
        # an image outside the limit means the diagram is not commutative
        stray = next(img for img in seen if img not in set(limit_elements))
        witness = ("not_compatible", stray)
    return BijectionReport(witness is None, len(source), len(limit_elements), witness)
