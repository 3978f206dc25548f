from functools import lru_cache

import pytest
from hypothesis import given, strategies as st

from fwreg.core import core_oracle, movable_sets, noetherian_core, verify_core
from fwreg.errors import ActionNotContinuous, XNotDenseOpen
from fwreg.globalization import FiniteGSet
from fwreg.groups import FiniteGroup
from fwreg.spaces import FiniteSpace, all_spaces
from oracles import dense_opens, generated_group, invariant, pair_property

V_SPACE = FiniteSpace(["eta", "a", "b"], [("a", "eta"), ("b", "eta")])


def gset_from(space, perms):
    """G-set of the group generated by the point permutations ``perms``."""
    pts = list(space.points)
    index = {x: i for i, x in enumerate(pts)}
    gens = {f"g{k}": tuple(index[p[x]] for x in pts) for k, p in enumerate(perms)}
    distinct = {}
    for s, p in gens.items():
        if p != tuple(range(len(pts))):
            distinct.setdefault(p, s)
    gens = {s: p for p, s in distinct.items()}
    if not gens:
        G = FiniteGroup.cyclic(1, "r")
        return FiniteGSet(G, pts, {})
    G, perm = FiniteGroup.from_permutations(gens)
    return FiniteGSet(G, pts, {s: {x: pts[perm[s][index[x]]] for x in pts} for s in G.generators})


def test_trivial_group_returns_x():
    E = gset_from(V_SPACE, [])
    X = {"eta", "a"}
    cert = noetherian_core(V_SPACE, E, X)
    assert cert.U == X
    assert set(cert.pair_witness.values()) == {"e"}


def test_swap_on_three_point_space():
    E = gset_from(V_SPACE, [{"eta": "eta", "a": "b", "b": "a"}])
    cert = noetherian_core(V_SPACE, E, {"eta", "a"})
    assert cert.movable == {"eta": {"eta", "a", "b"}, "a": {"eta", "a"}, "b": {"eta", "b"}}
    assert cert.minimal_dense_open == {"eta"}
    assert cert.K == frozenset() and cert.W == {"eta", "a", "b"}
    assert cert.U_prime == {"eta"} and cert.U == {"eta"}
    # the only invariant dense open with the pair property
    assert core_oracle(V_SPACE, E, {"eta", "a"}) == [frozenset({"eta"})]


def test_invariant_x_is_its_own_core():
    E = gset_from(V_SPACE, [{"eta": "eta", "a": "b", "b": "a"}])
    assert noetherian_core(V_SPACE, E, V_SPACE.points).U == set(V_SPACE.points)


def test_rejects_non_open_x_and_non_monotone_maps():
    E = gset_from(V_SPACE, [])
    with pytest.raises(XNotDenseOpen):
        noetherian_core(V_SPACE, E, {"a"})
    G = FiniteGroup.cyclic(2, "s")
    bad = FiniteGSet(G, V_SPACE.points, {"s": {"eta": "a", "a": "eta", "b": "b"}})
    with pytest.raises(ActionNotContinuous):
        noetherian_core(V_SPACE, bad, V_SPACE.points)


@lru_cache(maxsize=None)
def spaces_of_size(n):
    return all_spaces(n)


@st.composite
def instances(draw):
    n = draw(st.integers(1, 5))
    S = draw(st.sampled_from(spaces_of_size(n)))
    homeos = S.homeomorphism_group()
    gens = draw(st.lists(st.sampled_from(homeos), max_size=2))
    X = draw(st.sampled_from(sorted(S.dense_opens(), key=sorted)))
    return S, gens, X


@given(instances())
def test_core_matches_brute_force(inst):
    S, gens, X = inst
    E = gset_from(S, gens)
    perms = generated_group(gens, S.points)
    cert = noetherian_core(S, E, X)
    le = set(S.relation())
    assert cert.U in dense_opens(S.points, le)
    assert invariant(cert.U, perms) and pair_property(cert.U, X, perms)
    assert verify_core(S, E, X, cert).ok
    # the shortcut through the minimal dense open equals the intersection over all dense opens
    F = {x: S.complement(U) for x, U in cert.movable.items()}
    K = frozenset(S.points)
    for V in dense_opens(S.points, le):
        K &= S.closure(set().union(*(F[x] for x in V)))
    assert K == cert.K


@given(instances())
def test_movable_sets_symmetric_and_equivariant(inst):
    S, gens, X = inst
    E = gset_from(S, gens)
    U = movable_sets(S, E, frozenset(X))
    for x in S.points:
        for y in S.points:
            assert (y in U[x]) == (x in U[y])
    for p in generated_group(gens, S.points):
        for x in S.points:
            assert U[p[x]] == {p[y] for y in U[x]}
