import pytest

from fwreg.corpus import FINITE_GROUP_MODELS, example
from fwreg.errors import DomainNotDense, NotIrreducible
from fwreg.globalization import globalize
from fwreg.groups import FiniteGroup
from fwreg.partial import PartialAction
from fwreg.commensuration import property_fw_oracle
from fwreg.regularization import base_stage, check_idempotent, glued_topology, regularize, sepcore_stage
from fwreg.spaces import affine_line
from oracles import replay_pipeline


def top_of(name):
    inst = example(name)
    return glued_topology(globalize(inst.action), inst.space)


def labels(top, S):
    return {top.base.label(p) for p in S}


def test_global_action_glues_to_the_same_space():
    top = top_of("a1-global")
    assert labels(top, top.space.points) == {"eta", "c0", "c1", "c2"}
    assert top.space.relation() == {(top.base.embed(x), top.base.embed(y)) for x, y in affine_line(3).relation()}


def test_a1_z2_adds_a_closed_point_below_eta():
    top = top_of("a1-z2")
    extra = next(p for p in top.space.points if top.base.label(p) == "s@c0")
    eta, c0 = top.base.embed("eta"), top.base.embed("c0")
    assert top.space.lt(extra, eta) and top.dims[extra] == 0
    assert top.gset.act("s", c0) == extra
    assert top.embedded_open and top.embedded_dense


def test_non_dense_domain_is_reported():
    S = affine_line(2)
    G = FiniteGroup.cyclic(2, "s")
    # the empty domain is open but not dense
    a = PartialAction(G, S.points, {"e": [(x, x) for x in S.points], "s": []})
    top = glued_topology(globalize(a), S)
    assert top.embedded_open and not top.embedded_dense
    assert not top.domains_dense


def test_base_stage():
    top = top_of("a1-z2")
    rec = base_stage(top)
    assert rec.i == 1 and rec.J == ("e",) and rec.Z == {"eta", "c0", "c1", "c2"}
    assert rec.invariant_ok


def test_stage_zero_on_a1_z2():
    top = top_of("a1-z2")
    rec = sepcore_stage(top, 0, ("e",), frozenset(top.carrier_space.points), property_fw_oracle("exact"))
    assert labels(top, rec.K) == {"s@c0"}
    assert labels(top, rec.Y_i) == {"c0", "c1", "c2"}
    assert labels(top, rec.L) == {"c0"} and labels(top, rec.L_closure) == {"c0"}
    assert rec.Z_next == {"eta", "c1", "c2"}
    assert labels(top, rec.Y_next_i) == {"c1", "c2"}
    assert rec.F == frozenset() and rec.h == "e" and rec.J_next == ("e",)


def test_global_action_stages_are_trivial():
    res = regularize(example("a1-global").action, affine_line(3))
    for rec in res.stages[1:]:
        assert rec.L == frozenset() and rec.h == "e"
    assert res.final_J == ("e",)
    assert labels(res.top, res.core.U) == {"eta", "c0", "c1", "c2"}


def test_a1_z2_pipeline_output():
    res = regularize(example("a1-z2").action, affine_line(3))
    assert labels(res.top, res.noetherian_open) == {"eta", "c1", "c2"}
    assert labels(res.top, res.core.U) == {"eta", "c1", "c2"}
    assert set(res.core.pair_witness.values()) == {"e"}
    assert res.ok


def replay(name):
    inst = example(name)
    a, G = inst.action, inst.action.group
    els = G.ball(None)
    mul = {(g, h): G.mul(g, h) for g in els for h in els}
    inv = {g: G.inv(g) for g in els}
    alpha = {g: a.at(g).as_dict() for g in els}
    return replay_pipeline(els, mul, inv, alpha, list(a.carrier), set(inst.space.relation()))


@pytest.mark.parametrize("name", FINITE_GROUP_MODELS)
def test_pipeline_matches_replay(name):
    inst = example(name)
    res = regularize(inst.action, inst.space)
    want = replay(name)
    node = lambda p: (p.g, p.x)
    assert {node(p) for p in res.noetherian_open} == want["Y"]
    assert {node(p) for p in res.core.U} == want["U"]
    assert list(res.final_J) == want["J"] and res.final_Z == want["Z"]
    for rec, w in zip(res.stages[1:], want["stages"]):
        assert rec.i == w["i"] and {node(p) for p in rec.L} == w["L"] and rec.h == w["h"]


@pytest.mark.parametrize("name", FINITE_GROUP_MODELS)
def test_stage_invariants_and_bounds(name):
    inst = example(name)
    res = regularize(inst.action, inst.space)
    d = inst.space.dimension()
    for rec in res.stages:
        Y = res.top.sweep(rec.J_next, rec.Z_next)
        assert res.top.gset.is_invariant(res.top.at_least(Y, rec.i))
        assert len(rec.J_next) <= 2 ** (d - rec.i)
    assert len(res.final_J) <= 2**d
    assert res.ok
    assert check_idempotent(res)


def test_reducible_carrier_and_sparse_domains_are_refused():
    with pytest.raises(NotIrreducible):
        regularize(example("broken-z2").action, example("broken-z2").space)
    S = affine_line(2)
    G = FiniteGroup.cyclic(2, "s")
    a = PartialAction(G, S.points, {"e": [(x, x) for x in S.points], "s": []})
    with pytest.raises(DomainNotDense):
        regularize(a, S)
