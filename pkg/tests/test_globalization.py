import random

import pytest

from fwreg.corpus import FINITE_GROUP_MODELS, example, random_restricted
from fwreg.errors import NotExact, OrbitMissed
from fwreg.globalization import FiniteGSet, check_restriction, globalize, recover_action_on_subset
from fwreg.groups import FiniteGroup, FreeGroup
from fwreg.partial import PartialAction, global_action, restrict
from oracles import quotient_classes

Z2 = FiniteGroup.cyclic(2, "s")


def swap():
    return global_action(Z2, ["1", "2"], lambda g, x: x if g == "e" else {"1": "2", "2": "1"}[x])


def test_global_action_globalizes_to_itself():
    glob = globalize(swap())
    assert len(glob) == 2 and glob.exact
    assert glob.embedded() == frozenset(glob.points)


def test_swap_restricted_to_one_point_grows_a_second_point():
    glob = globalize(restrict(swap(), ["1"]))
    assert [glob.label(p) for p in glob.points] == ["1", "s@1"]
    one, other = glob.points
    assert glob.act("s", one) == other and glob.act("s", other) == one


def test_broken_shift_keeps_the_gap_open():
    a = example("broken-shift").action
    glob = globalize(a, 3)
    u = a.group.element("u")
    # u is undefined at 0 and u^-1 at 1, so no k makes both (ku)0 and (k)1 defined
    assert glob.class_of(u, "0") != glob.embed("1")
    assert not glob.exact
    with pytest.raises(NotExact):
        glob.as_gset()


def test_unbroken_shift_glues_u_at_0_with_1():
    pts = [str(n) for n in range(-3, 4)]
    a = PartialAction(FreeGroup(["u"], kind="cyclic"), pts, {"u": [(str(n), str(n + 1)) for n in range(-3, 3)]})
    glob = globalize(a, 3)
    assert glob.class_of(a.group.element("u"), "0") == glob.embed("1")


def partition(glob):
    out = {}
    for node, p in glob._class_of.items():
        out.setdefault(p, set()).add(node)
    return {frozenset(v) for v in out.values()}


def oracle_partition(a):
    G = a.group
    mul = {(g, h): G.mul(g, h) for g in G.elements for h in G.elements}
    inv = {g: G.inv(g) for g in G.elements}
    alpha = {g: a.at(g).as_dict() for g in G.elements}
    return set(quotient_classes(G.elements, mul, inv, alpha, list(a.carrier)))


@pytest.mark.parametrize("name", FINITE_GROUP_MODELS)
def test_classes_match_naive_closure_on_corpus(name):
    a = example(name).action
    assert partition(globalize(a)) == oracle_partition(a)


@pytest.mark.parametrize("seed", range(30))
def test_classes_match_naive_closure_on_random_restrictions(seed):
    a = random_restricted(random.Random(seed)).action
    assert partition(globalize(a)) == oracle_partition(a)


def test_a1_z2_adds_one_point():
    glob = globalize(example("a1-z2").action)
    labels = [glob.label(p) for p in glob.points]
    assert labels == ["eta", "c0", "c1", "c2", "s@c0"]


@pytest.mark.parametrize("name", FINITE_GROUP_MODELS + ("broken-shift", "cremona-2"))
def test_restriction_recovers_the_corpus_action(name):
    a = example(name).action
    assert check_restriction(globalize(a), a)


def test_corrupted_table_fails_restriction():
    a = example("a1-z2").action
    glob = globalize(a)
    c1 = glob.embed("c1")
    glob._table[("s", 1), c1] = c1
    assert not check_restriction(glob, a)


def test_recovery_on_full_subset_is_identity():
    E = FiniteGSet.from_action(swap())
    rep = recover_action_on_subset(E, ["1", "2"])
    assert {rep.globalization.label(p): y for p, y in rep.bijection.items()} == {"1": "1", "2": "2"}


def test_recovery_names_the_missed_orbit():
    a = global_action(Z2, ["1", "2", "3", "4"], lambda g, x: x if g == "e" else {"1": "2", "2": "1", "3": "4", "4": "3"}[x])
    with pytest.raises(OrbitMissed) as info:
        recover_action_on_subset(FiniteGSet.from_action(a), ["1"])
    assert info.value.orbits == [("3", "4")]
