import itertools
import math
from concurrent.futures import ThreadPoolExecutor

import pytest

import oracles
from kdendro import operads, presheaf
from kdendro.operads import ArityCapError, Operation
from kdendro.presheaf import (
    SEGAL_CONDITIONS,
    DomainError,
    FunctorialityError,
    OperadicPresheaf,
    TablePresheaf,
    circle_presheaf,
    restrict_k,
    segal_check,
)
from kdendro.trees import ETA, chain, compose, corolla, enumerate_homs, enumerate_trees, identity, parse_tree, validate_morphism

STAR = operads.ASSOC_COLOR
STAIRCASE = parse_tree("((()())())")  # root 0; a = 1 with children c = 2, d = 3; b = 4


def order(*slots):
    return Operation((STAR,) * len(slots), STAR, tuple(slots))


def staircase_labeling(F, root, upper):
    for lab in F.value(STAIRCASE):
        if lab.ops[0].label == root and lab.ops[1].label == upper:
            return lab
    raise LookupError


# ---------------------------------------------------------------------------
# values


def test_value_examples(F_assoc, comm4):
    assert F_assoc.size(corolla(3)) == 6
    assert F_assoc.size(STAIRCASE) == 4
    F_comm = OperadicPresheaf(comm4)
    assert all(F_comm.size(t) == 1 for t in enumerate_trees(5))


@pytest.mark.parametrize("name", ["assoc", "comm", "trivial_unital"])
def test_one_colored_product_law(name):
    P = operads.builtin(name, 4)
    F = OperadicPresheaf(P)
    sizes = P.arity_sizes()
    for t in enumerate_trees(6, 4):
        assert F.size(t) == math.prod(sizes[t.valence(e)] for e in t.edges)


def test_colored_product_law(cospan):
    P = operads.cocartesian(cospan, 3)
    F = OperadicPresheaf(P)
    for t in enumerate_trees(4, 3):
        expected = 0
        for colors in itertools.product(P.colors, repeat=len(t)):
            expected += math.prod(
                len(P.operations(tuple(colors[c] for c in t.children[e]), colors[e])) for e in t.edges
            )
        assert F.size(t) == expected


def test_eta_values_are_colors(cospan):
    F = OperadicPresheaf(operads.from_category(cospan, 2))
    assert sorted(lab.colors[0] for lab in F.value(ETA)) == ["a", "b", "c"]


def test_domain_errors(assoc4):
    F = OperadicPresheaf(operads.assoc(3))
    with pytest.raises(DomainError):
        F.value(corolla(4))
    with pytest.raises(ArityCapError):
        OperadicPresheaf(operads.assoc(3), k=4)
    with pytest.raises(DomainError):
        restrict_k(OperadicPresheaf(assoc4), 2).value(corolla(3))


def test_record_roundtrip(cospan):
    P = operads.cocartesian(cospan, 3)
    F = OperadicPresheaf(P)
    for t in enumerate_trees(3):
        for lab in F.value(t):
            record = lab.to_record(P)
            assert presheaf.labeling_from_record(P, record) == lab
            assert record["tree"] == t.text


def test_concurrent_fills_agree(assoc4):
    F = OperadicPresheaf(assoc4)
    trees = enumerate_trees(5) * 4
    with ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(F.value, trees))
    for t, v in zip(trees, results):
        assert v is F.value(t)


# ---------------------------------------------------------------------------
# restriction by region evaluation


def test_region_example_corolla_into_staircase(F_assoc):
    lab = staircase_labeling(F_assoc, (0, 1), (0, 1))
    f = validate_morphism(corolla(3), STAIRCASE, (0, 2, 3, 4))
    assert F_assoc.restrict_element(f, lab).ops[0] == order(0, 1, 2)


def test_region_example_chain_into_staircase(F_assoc):
    lab = staircase_labeling(F_assoc, (0, 1), (0, 1))
    f = validate_morphism(chain(2), STAIRCASE, (0, 1))
    pulled = F_assoc.restrict_element(f, lab)
    assert pulled.ops == (F_assoc.operad.identity[STAR], F_assoc.operad.nullary[STAR])


def test_identity_acts_trivially(F_assoc):
    for t in enumerate_trees(5):
        assert F_assoc.restrict(identity(t)) == {x: x for x in F_assoc.value(t)}


def test_region_matches_planar_reading(F_assoc):
    checked = 0
    for s in enumerate_trees(4):
        for t in enumerate_trees(5):
            kids = [list(c) for c in t.children]
            for f in enumerate_homs(s, t):
                for lab in F_assoc.value(t):
                    orders = {e: lab.ops[e].label for e in t.edges}
                    pulled = F_assoc.restrict_element(f, lab)
                    for e in s.edges:
                        variables = [f.map[c] for c in s.children[e]]
                        assert pulled.ops[e].label == oracles.planar_reading(kids, orders, f.map[e], variables)
                        checked += 1
    assert checked > 10000


def test_region_rejects_bad_variables(F_assoc):
    lab = F_assoc.value(STAIRCASE)[0]
    with pytest.raises(ValueError):
        presheaf.region_operation(F_assoc.operad, STAIRCASE, lab, 1, [2, 2])
    with pytest.raises(ValueError):
        presheaf.region_operation(F_assoc.operad, STAIRCASE, lab, 1, [4])


def _check_functoriality(F, trees):
    homs = {(s, t): enumerate_homs(s, t) for s in trees for t in trees}
    pairs = 0
    for a in trees:
        for b in trees:
            for f in homs[(a, b)]:
                rf = F.restrict(f)
                for c in trees:
                    for g in homs[(b, c)]:
                        rg = F.restrict(g)
                        rgf = F.restrict(compose(g, f))
                        for x in F.value(c):
                            assert rgf[x] == rf[rg[x]], (f.map, g.map, x)
                        pairs += 1
    return pairs


def test_functoriality_assoc_up_to_five_edges(F_assoc):
    assert _check_functoriality(F_assoc, enumerate_trees(5)) > 10000


def test_functoriality_cocartesian(cospan):
    F = OperadicPresheaf(operads.cocartesian(cospan, 3))
    assert _check_functoriality(F, enumerate_trees(4, 3)) > 100


# ---------------------------------------------------------------------------
# Segal conditions


def test_staircase_passes_every_condition(F_assoc, comm4):
    for condition in SEGAL_CONDITIONS:
        assert segal_check(F_assoc, STAIRCASE, condition)
        assert segal_check(OperadicPresheaf(comm4), STAIRCASE, condition)


@pytest.mark.parametrize("name", ["assoc", "comm", "trivial_unital", "cocartesian"])
def test_segal_conditions_agree(name, cospan):
    P = operads.builtin(name, 4, cospan if name == "cocartesian" else None)
    F = OperadicPresheaf(P, k=4 if name != "cocartesian" else 2)
    trees = enumerate_trees(6 if name != "cocartesian" else 4, F.bound)
    for t in trees:
        verdicts = {c: segal_check(F, t, c).ok for c in SEGAL_CONDITIONS}
        assert set(verdicts.values()) == {True}, (t.text, verdicts)


def test_circle_fails_inner_cut():
    F = circle_presheaf()
    result = segal_check(F, chain(3), "cut_inner")
    assert not result
    assert result.sizes == (3, 4)
    assert result.witness is not None
    assert [F.size(t) for t in (chain(1), chain(2), chain(3))] == [1, 2, 3]


def test_circle_passes_on_smaller_chains():
    F = circle_presheaf()
    assert segal_check(F, chain(2), "cut_inner")
    assert segal_check(F, chain(2), "elementary")


def test_unknown_condition(F_assoc):
    with pytest.raises(ValueError):
        segal_check(F_assoc, STAIRCASE, "sideways")


# ---------------------------------------------------------------------------
# table presheaves


def _constant_table(trees, value="x"):
    values = {t: (value,) for t in trees}
    restrictions = {f: {value: value} for s in trees for t in trees for f in enumerate_homs(s, t)}
    return values, restrictions


def test_table_audit_accepts_constant():
    trees = [ETA, chain(2)]
    F = TablePresheaf(*_constant_table(trees))
    assert F.trees == [ETA, chain(2)]
    assert all(segal_check(F, t, c) for t in trees for c in SEGAL_CONDITIONS)


def test_table_audit_rejects_missing_map():
    values, restrictions = _constant_table([ETA, chain(2)])
    restrictions.pop(next(iter(restrictions)))
    with pytest.raises(FunctorialityError):
        TablePresheaf(values, restrictions)


def test_table_audit_rejects_broken_identity():
    values = {ETA: ("x", "y")}
    swap = {identity(ETA): {"x": "y", "y": "x"}}
    with pytest.raises(FunctorialityError):
        TablePresheaf(values, swap)


def test_table_audit_rejects_broken_composition():
    good = circle_presheaf()
    values = {t: good.value(t) for t in good.trees}
    restrictions = {}
    for s in good.trees:
        for t in good.trees:
            for f in enumerate_homs(s, t):
                restrictions[f] = good.restrict(f)
    TablePresheaf(values, restrictions)
    # send one element of the 3-chain to the wrong face of its bottom 2-chain
    face = validate_morphism(chain(2), chain(3), (0, 1))
    table = dict(restrictions[face])
    target = next(x for x in table if table[x] == "*")
    table[target] = next(y for y in values[chain(2)] if y != "*")
    restrictions[face] = table
    with pytest.raises(FunctorialityError):
        TablePresheaf(values, restrictions)


def test_table_missing_tree_is_domain_error():
    F = circle_presheaf()
    with pytest.raises(DomainError):
        F.value(corolla(2))
