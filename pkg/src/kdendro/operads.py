"""Finite colored unital symmetric operads given by explicit tables.

Input slots are numbered from 0. A permutation ``sigma`` is a tuple with
``sigma[j]`` the image of ``j``; products compose right to left, so
``mul(s, t)[x] == s[t[x]]``. The symmetric groups act on the right: slot ``j``
of ``act(sigma, p)`` is slot ``sigma[j]`` of ``p``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Iterator, NamedTuple, Sequence


class Operation(NamedTuple):
    inputs: tuple
    output: Hashable
    label: Hashable

    @property
    def arity(self) -> int:
        return len(self.inputs)

    @property
    def profile(self) -> tuple[tuple, Hashable]:
        return (self.inputs, self.output)


class OperadTableError(ValueError):
    """A table entry required by the operad axioms is missing or malformed."""


class ArityCapError(ValueError):
    """A query needs arities beyond the tabulated cap."""


def perm_mul(s: Sequence[int], t: Sequence[int]) -> tuple[int, ...]:
    """``s ∘ t``."""
    return tuple(s[x] for x in t)


def perm_inv(s: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(s)
    for i, v in enumerate(s):
        out[v] = i
    return tuple(out)


def is_perm(s: Sequence[int], n: int) -> bool:
    return len(s) == n and sorted(s) == list(range(n))


def _starts(arities: Sequence[int]) -> list[int]:
    return list(itertools.accumulate(arities, initial=0))[:-1]


def block_perm(sigma: Sequence[int], arities: Sequence[int]) -> tuple[int, ...]:
    """Permutation of blocks: slot ``start'_j + t`` goes to ``start_{sigma(j)} + t``.

    ``arities`` are the block sizes in the unpermuted order.
    """
    starts = _starts(arities)
    out = []
    for j in range(len(sigma)):
        i = sigma[j]
        out.extend(starts[i] + t for t in range(arities[i]))
    return tuple(out)


def block_sum(perms: Sequence[Sequence[int]]) -> tuple[int, ...]:
    out: list[int] = []
    for tau in perms:
        base = len(out)
        out.extend(base + x for x in tau)
    return tuple(out)


@dataclass
class FiniteOperad:
    """Table-driven operad; ``ops`` maps a profile ``(inputs, output)`` to its operations."""

    colors: tuple
    ops: dict[tuple, tuple[Operation, ...]]
    gamma: dict[tuple, Operation]
    sigma: dict[tuple, Operation]
    identity: dict[Hashable, Operation]
    nullary: dict[Hashable, Operation]
    arity_cap: int
    name: str = "operad"

    def __hash__(self) -> int:
        return id(self)

    def __eq__(self, other) -> bool:
        return self is other

    def operations(self, inputs: Sequence, output) -> tuple[Operation, ...]:
        inputs = tuple(inputs)
        if len(inputs) > self.arity_cap:
            raise ArityCapError(f"arity {len(inputs)} exceeds cap {self.arity_cap} of {self.name}")
        return self.ops.get((inputs, output), ())

    def op_index(self, p: Operation) -> int:
        return self._index[p]

    @property
    def _index(self) -> dict[Operation, int]:
        cached = self.__dict__.get("_index_cache")
        if cached is None:
            cached = {p: i for ops in self.ops.values() for i, p in enumerate(ops)}
            self.__dict__["_index_cache"] = cached
        return cached

    def all_operations(self) -> Iterator[Operation]:
        for key in sorted(self.ops, key=_profile_key):
            yield from self.ops[key]

    def ops_by_output(self, color) -> list[Operation]:
        cache = self.__dict__.setdefault("_by_output", {})
        if color not in cache:
            cache[color] = sorted(
                (p for p in self.all_operations() if p.output == color),
                key=lambda p: p.arity,
            )
        return cache[color]

    def arity_sizes(self, color=None) -> list[int]:
        """Number of operations of each arity ``0..arity_cap`` (one-colored reading)."""
        out = []
        for n in range(self.arity_cap + 1):
            out.append(sum(len(v) for (ins, o), v in self.ops.items() if len(ins) == n and (color is None or o == color)))
        return out


def _profile_key(profile):
    inputs, output = profile
    return (len(inputs), repr(inputs), repr(output))


def compose(P: FiniteOperad, p: Operation, qs: Sequence[Operation]) -> Operation:
    """``γ(p; q_0, ..., q_{n-1})``."""
    qs = tuple(qs)
    if len(qs) != p.arity:
        raise ValueError(f"{p.label!r} has arity {p.arity} but {len(qs)} operations were supplied")
    for i, q in enumerate(qs):
        if q.output != p.inputs[i]:
            raise ValueError(f"slot {i} expects color {p.inputs[i]!r}, got {q.output!r}")
    total = sum(q.arity for q in qs)
    if total > P.arity_cap or p.arity > P.arity_cap:
        raise ArityCapError(f"composite arity {total} exceeds cap {P.arity_cap}")
    try:
        return P.gamma[(p, qs)]
    except KeyError:
        raise OperadTableError(f"no composition entry for {p!r} with {qs!r}") from None


def act(P: FiniteOperad, sigma: Sequence[int], p: Operation) -> Operation:
    sigma = tuple(sigma)
    if not is_perm(sigma, p.arity):
        raise ValueError(f"{sigma!r} is not a permutation of {p.arity} inputs")
    try:
        return P.sigma[(sigma, p)]
    except KeyError:
        raise OperadTableError(f"no action entry for {sigma!r} on {p!r}") from None


def restrict_op(P: FiniteOperad, p: Operation, keep: Iterable[int]) -> Operation:
    """Plug the nullary into every slot outside ``keep`` and identities inside it."""
    keep = set(keep)
    if not keep <= set(range(p.arity)):
        raise ValueError(f"slots {sorted(keep)} are not inputs of an arity-{p.arity} operation")
    qs = [P.identity[c] if i in keep else P.nullary[c] for i, c in enumerate(p.inputs)]
    return compose(P, p, qs)


# ---------------------------------------------------------------------------
# building tables from rules


def _choices_for(P_ops_by_output: Callable, colors: Sequence, budget: int) -> Iterator[tuple[Operation, ...]]:
    """Tuples of operations with the given output colors and total arity ``<= budget``."""
    if not colors:
        yield ()
        return
    head, rest = colors[0], colors[1:]
    for q in P_ops_by_output(head):
        if q.arity > budget:
            break
        for tail in _choices_for(P_ops_by_output, rest, budget - q.arity):
            yield (q,) + tail


def build_operad(
    name: str,
    colors: Sequence,
    ops: dict[tuple, Sequence[Operation]],
    compose_rule: Callable[[Operation, tuple[Operation, ...]], Operation],
    act_rule: Callable[[tuple[int, ...], Operation], Operation],
    arity_cap: int,
    identity: dict,
) -> FiniteOperad:
    """Tabulate ``compose_rule`` and ``act_rule`` on everything within ``arity_cap``."""
    ops = {k: tuple(v) for k, v in ops.items()}
    nullary = {}
    for c in colors:
        zs = ops.get(((), c), ())
        if len(zs) == 1:
            nullary[c] = zs[0]
    P = FiniteOperad(tuple(colors), ops, {}, {}, dict(identity), nullary, arity_cap, name)
    for p in P.all_operations():
        for qs in _choices_for(P.ops_by_output, p.inputs, arity_cap):
            P.gamma[(p, qs)] = compose_rule(p, qs)
        for sigma in itertools.permutations(range(p.arity)):
            P.sigma[(sigma, p)] = act_rule(sigma, p)
    return P


def _check_cap(arity_cap: int) -> int:
    if not isinstance(arity_cap, int) or arity_cap < 0:
        raise ValueError("arity_cap must be a non-negative integer")
    return arity_cap


# ---------------------------------------------------------------------------
# builtins

ASSOC_COLOR = "*"


def assoc(arity_cap: int = 4) -> FiniteOperad:
    """Linear orders: an arity-n operation lists its input slots in order."""
    _check_cap(arity_cap)
    c = ASSOC_COLOR
    ops = {
        ((c,) * n, c): [Operation((c,) * n, c, order) for order in itertools.permutations(range(n))]
        for n in range(arity_cap + 1)
    }

    def rule(p, qs):
        starts = _starts([q.arity for q in qs])
        order = tuple(starts[x] + y for x in p.label for y in qs[x].label)
        return Operation((c,) * len(order), c, order)

    def action(sigma, p):
        inv = perm_inv(sigma)
        return Operation(p.inputs, c, tuple(inv[x] for x in p.label))

    return build_operad("assoc", [c], ops, rule, action, arity_cap, {c: ops[((c,), c)][0]})


def comm(arity_cap: int = 4) -> FiniteOperad:
    _check_cap(arity_cap)
    c = ASSOC_COLOR
    ops = {((c,) * n, c): [Operation((c,) * n, c, n)] for n in range(arity_cap + 1)}

    def rule(p, qs):
        n = sum(q.arity for q in qs)
        return ops[((c,) * n, c)][0]

    return build_operad("comm", [c], ops, rule, lambda s, p: p, arity_cap, {c: ops[((c,), c)][0]})


def trivial_unital(arity_cap: int = 4) -> FiniteOperad:
    """One color, a nullary and an identity, nothing of arity two or more."""
    _check_cap(arity_cap)
    c = ASSOC_COLOR
    ops = {((c,) * n, c): ([Operation((c,) * n, c, n)] if n <= 1 else []) for n in range(arity_cap + 1)}

    def rule(p, qs):
        n = sum(q.arity for q in qs)
        return ops[((c,) * n, c)][0]

    return build_operad("trivial_unital", [c], ops, rule, lambda s, p: p, arity_cap, {c: ops[((c,), c)][0]})


@dataclass(frozen=True)
class FiniteCategory:
    """Objects, named morphisms ``name -> (source, target)``, identities and a composition table.

    ``composition[(g, f)]`` is ``g ∘ f`` for composable ``f: X -> Y``, ``g: Y -> Z``.
    """

    objects: tuple
    morphisms: dict[str, tuple]
    identities: dict
    composition: dict[tuple[str, str], str]

    def hom(self, x, y) -> list[str]:
        return sorted(m for m, st in self.morphisms.items() if st == (x, y))


class CategoryError(ValueError):
    pass


def validate_category(C: FiniteCategory) -> None:
    objs = set(C.objects)
    for m, (s, t) in C.morphisms.items():
        if s not in objs or t not in objs:
            raise CategoryError(f"morphism {m!r} has endpoints outside the objects")
    for x in C.objects:
        i = C.identities.get(x)
        if i is None or C.morphisms.get(i) != (x, x):
            raise CategoryError(f"object {x!r} lacks an identity")
    for f, (a, b) in C.morphisms.items():
        for g, (b2, c) in C.morphisms.items():
            if b2 != b:
                continue
            h = C.composition.get((g, f))
            if h is None:
                raise CategoryError(f"missing composite {g!r} ∘ {f!r}")
            if C.morphisms.get(h) != (a, c):
                raise CategoryError(f"composite {g!r} ∘ {f!r} has the wrong endpoints")
    for f, (a, b) in C.morphisms.items():
        if C.composition[(C.identities[b], f)] != f or C.composition[(f, C.identities[a])] != f:
            raise CategoryError(f"identity law fails at {f!r}")
    for f, (a, b) in C.morphisms.items():
        for g, (b2, c) in C.morphisms.items():
            if b2 != b:
                continue
            for h, (c2, d) in C.morphisms.items():
                if c2 != c:
                    continue
                left = C.composition[(h, C.composition[(g, f)])]
                right = C.composition[(C.composition[(h, g)], f)]
                if left != right:
                    raise CategoryError(f"associativity fails at {h!r}, {g!r}, {f!r}")


def free_category(objects: Sequence, arrows: dict[str, tuple]) -> FiniteCategory:
    """Objects plus the given arrows, assuming no two arrows are composable."""
    morphisms = {f"id_{x}": (x, x) for x in objects}
    morphisms.update(arrows)
    identities = {x: f"id_{x}" for x in objects}
    composition = {}
    for f, (a, b) in morphisms.items():
        for g, (b2, _c) in morphisms.items():
            if b2 != b:
                continue
            if g == identities[b]:
                composition[(g, f)] = f
            elif f == identities[a]:
                composition[(g, f)] = g
            else:
                raise CategoryError(f"{g!r} ∘ {f!r} is a nontrivial composite")
    C = FiniteCategory(tuple(objects), morphisms, identities, composition)
    validate_category(C)
    return C


NULLARY_LABEL = "!"


def from_category(C: FiniteCategory, arity_cap: int = 4) -> FiniteOperad:
    """The unital operad with unary operations the morphisms of ``C`` and nothing above."""
    _check_cap(arity_cap)
    validate_category(C)
    colors = tuple(C.objects)
    ops: dict[tuple, list[Operation]] = {}
    for n in range(arity_cap + 1):
        for ins in itertools.product(colors, repeat=n):
            for y in colors:
                if n == 0:
                    ops[(ins, y)] = [Operation((), y, NULLARY_LABEL)]
                elif n == 1:
                    ops[(ins, y)] = [Operation(ins, y, m) for m in C.hom(ins[0], y)]
                else:
                    ops[(ins, y)] = []

    def rule(p, qs):
        if p.arity == 0:
            return p
        (q,) = qs
        if q.arity == 0:
            return Operation((), p.output, NULLARY_LABEL)
        return Operation(q.inputs, p.output, C.composition[(p.label, q.label)])

    identity = {x: Operation((x,), x, C.identities[x]) for x in colors}
    return build_operad("from_category", colors, ops, rule, lambda s, p: p, arity_cap, identity)


def cocartesian(C: FiniteCategory, arity_cap: int = 4) -> FiniteOperad:
    """Operations ``(X_1..X_n; Y)`` are tuples of morphisms ``X_i -> Y``."""
    _check_cap(arity_cap)
    validate_category(C)
    colors = tuple(C.objects)
    ops: dict[tuple, list[Operation]] = {}
    for n in range(arity_cap + 1):
        for ins in itertools.product(colors, repeat=n):
            for y in colors:
                homs = [C.hom(x, y) for x in ins]
                ops[(ins, y)] = [Operation(ins, y, t) for t in itertools.product(*homs)]

    def rule(p, qs):
        label = tuple(C.composition[(f, g)] for f, q in zip(p.label, qs) for g in q.label)
        inputs = tuple(x for q in qs for x in q.inputs)
        return Operation(inputs, p.output, label)

    def action(sigma, p):
        return Operation(tuple(p.inputs[s] for s in sigma), p.output, tuple(p.label[s] for s in sigma))

    identity = {x: Operation((x,), x, (C.identities[x],)) for x in colors}
    return build_operad("cocartesian", colors, ops, rule, action, arity_cap, identity)


def builtin(name: str, arity_cap: int = 4, category: FiniteCategory | None = None) -> FiniteOperad:
    if name == "assoc":
        return assoc(arity_cap)
    if name == "comm":
        return comm(arity_cap)
    if name == "trivial_unital":
        return trivial_unital(arity_cap)
    if name in ("from_category", "cocartesian"):
        if category is None:
            raise ValueError(f"{name} needs a category")
        return (from_category if name == "from_category" else cocartesian)(category, arity_cap)
    raise ValueError(f"unknown builtin operad {name!r}")


# ---------------------------------------------------------------------------
# validation


@dataclass
class OperadReport:
    witnesses: list[tuple[str, Any]] = field(default_factory=list)
    checked: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.witnesses

    def __bool__(self) -> bool:
        return self.ok


def _require_gamma(P: FiniteOperad, p: Operation, qs: tuple) -> Operation:
    try:
        r = P.gamma[(p, qs)]
    except KeyError:
        raise OperadTableError(f"missing composition entry γ({p!r}; {qs!r})") from None
    want_inputs = tuple(x for q in qs for x in q.inputs)
    if r.inputs != want_inputs or r.output != p.output or r not in P._index:
        raise OperadTableError(f"composition entry γ({p!r}; {qs!r}) = {r!r} has the wrong profile")
    return r


def _require_sigma(P: FiniteOperad, sigma: tuple, p: Operation) -> Operation:
    try:
        r = P.sigma[(sigma, p)]
    except KeyError:
        raise OperadTableError(f"missing action entry {p!r}·{sigma!r}") from None
    if r.inputs != tuple(p.inputs[s] for s in sigma) or r.output != p.output or r not in P._index:
        raise OperadTableError(f"action entry {p!r}·{sigma!r} = {r!r} has the wrong profile")
    return r


def validate_operad(P: FiniteOperad, method: str = "partial", max_witnesses: int = 20) -> OperadReport:
    """Check totality, unitality, unit laws, associativity and equivariance within the cap.

    ``method="exhaustive"`` compares both sides of every full composite
    ``γ(γ(p; q); r)``. ``method="partial"`` checks that each table entry equals
    its iterated one-slot composite and that the one-slot laws hold, which
    together imply the full laws and scale to larger caps.

    Raises :class:`OperadTableError` for missing entries; law violations are
    collected as ``(law, detail)`` witnesses.
    """
    if method not in ("partial", "exhaustive"):
        raise ValueError(f"unknown validation method {method!r}")
    report = OperadReport()
    cap = P.arity_cap

    def fail(law, detail):
        if len(report.witnesses) < max_witnesses:
            report.witnesses.append((law, detail))

    for n in range(cap + 1):
        for ins in itertools.product(P.colors, repeat=n):
            for y in P.colors:
                if (ins, y) not in P.ops:
                    raise OperadTableError(f"missing operation set for profile ({ins!r}; {y!r})")
    for (ins, y), ops in P.ops.items():
        for p in ops:
            if p.profile != (ins, y):
                raise OperadTableError(f"operation {p!r} filed under profile ({ins!r}; {y!r})")
    for c in P.colors:
        zs = P.ops[((), c)]
        if len(zs) != 1:
            fail("unital", {"color": c, "nullary_count": len(zs)})
        elif P.nullary.get(c) != zs[0]:
            raise OperadTableError(f"designated nullary of {c!r} is not the table's element")
        if cap >= 1 and P.identity.get(c) not in P.ops[((c,), c)]:
            raise OperadTableError(f"no designated identity for color {c!r}")

    ops = list(P.all_operations())
    for p in ops:
        for qs in _choices_for(P.ops_by_output, p.inputs, cap):
            _require_gamma(P, p, qs)
        for sigma in itertools.permutations(range(p.arity)):
            _require_sigma(P, sigma, p)
    report.checked["operations"] = len(ops)
    if cap < 1 or not report.ok:
        return report

    for p in ops:
        if _require_gamma(P, P.identity[p.output], (p,)) != p:
            fail("left_unit", {"op": p})
        ids = tuple(P.identity[c] for c in p.inputs)
        if _require_gamma(P, p, ids) != p:
            fail("right_unit", {"op": p})

    for p in ops:
        n = p.arity
        if _require_sigma(P, tuple(range(n)), p) != p:
            fail("action_identity", {"op": p})
        if n > 4:
            continue
        for s in itertools.permutations(range(n)):
            ps = _require_sigma(P, s, p)
            for t in itertools.permutations(range(n)):
                if _require_sigma(P, perm_mul(s, t), p) != _require_sigma(P, t, ps):
                    fail("action_composition", {"op": p, "sigma": s, "tau": t})

    if method == "exhaustive":
        _exhaustive_laws(P, fail, report)
    else:
        _partial_laws(P, ops, fail, report)
    return report


def _circ(P: FiniteOperad, p: Operation, i: int, q: Operation) -> Operation:
    qs = tuple(q if j == i else P.identity[c] for j, c in enumerate(p.inputs))
    return _require_gamma(P, p, qs)


def _partial_laws(P: FiniteOperad, ops: list[Operation], fail, report: OperadReport) -> None:
    cap = P.arity_cap

    # every entry agrees with plugging one slot at a time, nullaries first so
    # intermediate arities never exceed the final one
    count = 0
    for (p, qs), pq in list(P.gamma.items()):
        count += 1
        current = p
        pos = list(range(len(qs)))
        order = sorted(range(len(qs)), key=lambda i: (qs[i].arity != 0, i))
        for i in order:
            current = _circ(P, current, pos[i], qs[i])
            for j in range(i + 1, len(qs)):
                pos[j] += qs[i].arity - 1
        if current != pq:
            fail("associativity", {"p": p, "q": qs, "table": pq, "iterated": current})
    report.checked["decomposition"] = count

    count = 0
    for p in ops:
        n = p.arity
        for i in range(n):
            for q in P.ops_by_output(p.inputs[i]):
                m = q.arity
                if n + m - 1 > cap:
                    break
                pq = _circ(P, p, i, q)
                # sequential: (p ∘_i q) ∘_{i+j} r = p ∘_i (q ∘_j r)
                for j in range(m):
                    for r in P.ops_by_output(q.inputs[j]):
                        if n + m + r.arity - 2 > cap or m + r.arity - 1 > cap:
                            break
                        count += 1
                        left = _circ(P, pq, i + j, r)
                        right = _circ(P, p, i, _circ(P, q, j, r))
                        if left != right:
                            fail("associativity", {"p": p, "i": i, "q": q, "j": j, "r": r})
                # parallel: (p ∘_i q) ∘_{j+m-1} r = (p ∘_j r) ∘_i q for i < j
                for j in range(i + 1, n):
                    for r in P.ops_by_output(p.inputs[j]):
                        if n + m + r.arity - 2 > cap or n + r.arity - 1 > cap:
                            break
                        count += 1
                        left = _circ(P, pq, j + m - 1, r)
                        right = _circ(P, _circ(P, p, j, r), i, q)
                        if left != right:
                            fail("associativity", {"p": p, "i": i, "q": q, "j": j, "r": r})
                # equivariance in the inner operation
                for tau in itertools.permutations(range(m)):
                    count += 1
                    left = _circ(P, p, i, _require_sigma(P, tau, q))
                    perms = [tau if s == i else (0,) for s in range(n)]
                    if left != _require_sigma(P, block_sum(perms), pq):
                        fail("equivariance_inner", {"p": p, "i": i, "q": q, "tau": tau})
                # equivariance in the outer operation: (p·σ) ∘_i q with σ(i) the plugged slot
                for sigma in itertools.permutations(range(n)):
                    count += 1
                    j = perm_inv(sigma)[i]
                    left = _circ(P, _require_sigma(P, sigma, p), j, q)
                    arities = [m if s == i else 1 for s in range(n)]
                    if left != _require_sigma(P, block_perm(sigma, arities), pq):
                        fail("equivariance_outer", {"p": p, "i": i, "q": q, "sigma": sigma})
    report.checked["one_slot_laws"] = count


def _exhaustive_laws(P: FiniteOperad, fail, report: OperadReport) -> None:
    cap = P.arity_cap
    count = 0
    for (p, qs), pq in list(P.gamma.items()):
        arities = [q.arity for q in qs]
        starts = _starts(arities)
        for rs in _choices_for(P.ops_by_output, pq.inputs, cap):
            count += 1
            left = _require_gamma(P, pq, rs)
            inner = tuple(
                _require_gamma(P, q, rs[s : s + a]) for q, s, a in zip(qs, starts, arities)
            )
            right = _require_gamma(P, p, inner)
            if left != right:
                fail("associativity", {"p": p, "q": qs, "r": rs, "left": left, "right": right})
    report.checked["associativity"] = count

    count = 0
    for (p, qs), pq in list(P.gamma.items()):
        arities = [q.arity for q in qs]
        for sigma in itertools.permutations(range(p.arity)):
            count += 1
            ps = _require_sigma(P, sigma, p)
            moved = tuple(qs[sigma[j]] for j in range(p.arity))
            left = _require_gamma(P, ps, moved)
            right = _require_sigma(P, block_perm(sigma, arities), pq)
            if left != right:
                fail("equivariance_outer", {"p": p, "q": qs, "sigma": sigma})
        for taus in itertools.product(*(itertools.permutations(range(a)) for a in arities)):
            if all(t == tuple(range(len(t))) for t in taus):
                continue
            count += 1
            acted = tuple(_require_sigma(P, t, q) for t, q in zip(taus, qs))
            left = _require_gamma(P, p, acted)
            right = _require_sigma(P, block_sum(taus), pq)
            if left != right:
                fail("equivariance_inner", {"p": p, "q": qs, "tau": taus})
    report.checked["equivariance"] = count


# ---------------------------------------------------------------------------
# interchange


def _freeze(x):
    if isinstance(x, list):
        return tuple(_freeze(v) for v in x)
    return x


def _thaw(x):
    if isinstance(x, tuple):
        return [_thaw(v) for v in x]
    return x


def operad_to_dict(P: FiniteOperad) -> dict:
    index = {}
    ops_out = []
    for key in sorted(P.ops, key=_profile_key):
        ins, y = key
        labels = []
        for p in P.ops[key]:
            index[p] = len(index)
            labels.append(_thaw(p.label))
        ops_out.append({"inputs": _thaw(ins), "output": _thaw(y), "labels": labels})
    return {
        "name": P.name,
        "arity_cap": P.arity_cap,
        "colors": [_thaw(c) for c in P.colors],
        "ops": ops_out,
        "gamma": [[index[p], [index[q] for q in qs], index[r]] for (p, qs), r in P.gamma.items()],
        "sigma": [[list(s), index[p], index[r]] for (s, p), r in P.sigma.items()],
        "identities": [[_thaw(c), index[p]] for c, p in P.identity.items()],
        "nullaries": [[_thaw(c), index[p]] for c, p in P.nullary.items()],
    }


def operad_from_dict(doc: dict, validate: bool = True) -> FiniteOperad:
    flat: list[Operation] = []
    ops: dict[tuple, tuple[Operation, ...]] = {}
    for entry in doc["ops"]:
        ins, y = _freeze(entry["inputs"]), _freeze(entry["output"])
        group = tuple(Operation(ins, y, _freeze(lab)) for lab in entry["labels"])
        ops[(ins, y)] = group
        flat.extend(group)
    P = FiniteOperad(
        colors=tuple(_freeze(c) for c in doc["colors"]),
        ops=ops,
        gamma={(flat[p], tuple(flat[q] for q in qs)): flat[r] for p, qs, r in doc["gamma"]},
        sigma={(tuple(s), flat[p]): flat[r] for s, p, r in doc["sigma"]},
        identity={_freeze(c): flat[i] for c, i in doc["identities"]},
        nullary={_freeze(c): flat[i] for c, i in doc["nullaries"]},
        arity_cap=int(doc["arity_cap"]),
        name=doc.get("name", "operad"),
    )
    if validate:
        report = validate_operad(P)
        if not report.ok:
            law, detail = report.witnesses[0]
            raise OperadTableError(f"{law} fails: {detail!r}")
    return P


def dumps(P: FiniteOperad) -> str:
    return json.dumps(operad_to_dict(P), sort_keys=True)


def loads(text: str, validate: bool = True) -> FiniteOperad:
    return operad_from_dict(json.loads(text), validate)


def mutate_gamma(P: FiniteOperad, key: tuple, value: Operation) -> FiniteOperad:
    """Copy of ``P`` with one composition entry overwritten."""
    gamma = dict(P.gamma)
    if key not in gamma:
        raise KeyError(key)
    gamma[key] = value
    return FiniteOperad(P.colors, P.ops, gamma, P.sigma, P.identity, P.nullary, P.arity_cap, P.name + "*")

