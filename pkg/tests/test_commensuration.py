import pytest
from hypothesis import given, strategies as st

from fwreg.commensuration import (
    FiniteBackend,
    PeriodicZSet,
    SymbolicZSet,
    ZShift,
    dictionary_check,
    is_commensurated,
    neumann_witness,
    property_fw_oracle,
    transfix,
    window_commensurated,
    window_transfixed,
)
from fwreg.corpus import FINITE_GROUP_MODELS, example
from fwreg.errors import HypothesisViolated, InvalidCertificate, NoWitnessWithinBound, TransfixerFailed
from fwreg.globalization import FiniteGSet
from fwreg.groups import FiniteGroup, FreeGroup
from oracles import neumann_shift, subsets

Z = ZShift()
N = SymbolicZSet("nonneg")
SINGLETON = SymbolicZSet("empty", {0})
EVENS = PeriodicZSet(2, {0}, {0})


def test_natural_numbers_are_commensurated_but_not_transfixed():
    assert is_commensurated(Z, N).verdict
    assert transfix(Z, N).verdict == "not-transfixed"


def test_singleton_is_transfixed_but_not_above():
    cert = transfix(Z, SINGLETON)
    assert cert.verdict == "transfixed"
    assert cert.Y == SymbolicZSet("empty") and cert.delta == {0}
    assert not cert.above


def test_evens_are_not_commensurated():
    assert not is_commensurated(Z, EVENS).verdict
    assert not window_commensurated(EVENS)


def swap_gset(points=("1", "2")):
    G = FiniteGroup.cyclic(2, "s")
    return FiniteGSet(G, points, {"s": {points[0]: points[1], points[1]: points[0]}})


def test_full_orbit_is_finely_transfixed_above():
    E = FiniteBackend(swap_gset())
    cert = transfix(E, {"1", "2"})
    assert cert.Y == {"1", "2"} and cert.delta == frozenset()
    assert cert.above and cert.finely_above


def test_any_subset_of_a_finite_gset_is_commensurated():
    E = FiniteBackend(swap_gset())
    for X in subsets(["1", "2"]):
        assert is_commensurated(E, X).verdict


def test_neumann_empty_set_gives_identity():
    assert neumann_witness(Z, set()).g == ()


def test_neumann_shift_of_0_and_3_is_u():
    w = neumann_witness(Z, {0, 3})
    assert w.g == (("u", 1),) and w.recheck(Z)


def test_neumann_on_a_finite_orbit_warns_then_fails():
    E = FiniteBackend(swap_gset())
    with pytest.warns(HypothesisViolated), pytest.raises(NoWitnessWithinBound):
        neumann_witness(E, {"1", "2"})


@pytest.mark.parametrize("name", FINITE_GROUP_MODELS + ("broken-shift", "cremona-2"))
def test_dictionary_agrees_on_corpus(name):
    report = dictionary_check(example(name).action)
    assert report.ok, report.mismatches


def test_dictionary_on_global_action_is_trivially_cofinite():
    rows = dictionary_check(example("a1-global").action).rows
    assert rows["commensurated"] == (True, True)
    assert rows["transfixed_above"] == (True, True)
    assert rows["finely_transfixed_above"] == (True, True)


def test_broken_shift_cofinite_matches_commensurated():
    rows = dictionary_check(example("broken-shift").action).rows
    assert rows["commensurated"] == (True, True)


def test_exact_strategy_delegates_to_transfix():
    E = FiniteBackend(swap_gset(("1", "2")))
    assert property_fw_oracle("exact")(E, {"1"}) == transfix(E, {"1"})
    with pytest.raises(TransfixerFailed):
        property_fw_oracle("exact")(Z, SINGLETON)


def test_certificate_strategy_accepts_empty_set_for_singleton():
    cert = property_fw_oracle("cert", SymbolicZSet("empty"))(Z, SINGLETON)
    assert cert.delta == {0}


def test_certificate_strategy_rejects_naturals_for_naturals():
    with pytest.raises(InvalidCertificate) as info:
        property_fw_oracle("cert", N)(Z, N)
    # u^-1 moves 0 to -1, off N
    assert info.value.witness == ("u^-1", 0)


# -- finite G-sets against brute force --------------------------------------------


@st.composite
def gsets(draw):
    n = draw(st.integers(1, 6))
    pts = list(range(n))
    gens = {s: dict(zip(pts, draw(st.permutations(pts)))) for s in ("a", "b")}
    X = frozenset(draw(st.sets(st.sampled_from(pts))))
    return FiniteGSet(FreeGroup(["a", "b"]), pts, gens), X


def brute_invariant_sets(E: FiniteGSet):
    orbits = E.orbits()
    for chosen in subsets(range(len(orbits))):
        yield frozenset().union(*(orbits[i] for i in chosen)) if chosen else frozenset()


@given(gsets())
def test_transfix_finds_a_closest_invariant_set(data):
    E, X = data
    cert = transfix(FiniteBackend(E), X)
    best = min(len(Y ^ X) for Y in brute_invariant_sets(E))
    assert E.is_invariant(cert.Y) and len(cert.delta) == best
    supersets = [Y for Y in brute_invariant_sets(E) if X <= Y]
    smallest = min(supersets, key=len)
    assert cert.above_Y == smallest
    assert cert.finely_above == (smallest == X)
    assert E.is_invariant(X - cert.strip)


# -- subsets of Z ---------------------------------------------------------------------

bases = st.sampled_from(["empty", "all", "nonneg", "nonpos"])
deltas = st.frozensets(st.integers(-6, 6), max_size=5)


@given(bases, deltas, bases, deltas)
def test_symbolic_set_algebra_matches_membership(b1, d1, b2, d2):
    A, B = SymbolicZSet(b1, d1), SymbolicZSet(b2, d2)
    for n in range(-15, 16):
        assert (n in A.symmetric_difference(B)) == ((n in A) != (n in B))
        assert (n in A.difference(B)) == ((n in A) and n not in B)
        assert (n in A.complement()) == (n not in A)
        assert (n in A.shift(2)) == (n - 2 in A)


@given(bases, deltas)
def test_symbolic_verdicts_match_windowed_oracle(b, d):
    X = SymbolicZSet(b, d)
    assert is_commensurated(Z, X).verdict == window_commensurated(X)
    assert (transfix(Z, X).verdict == "transfixed") == window_transfixed(X)[0]


@given(st.integers(1, 4), st.data())
def test_periodic_sets_commensurated_iff_tails_constant(period, data):
    residues = list(range(period))
    up = data.draw(st.sets(st.sampled_from(residues)))
    down = data.draw(st.sets(st.sampled_from(residues)))
    X = PeriodicZSet(period, up, down)
    constant = len(up) in (0, period) and len(down) in (0, period)
    assert is_commensurated(Z, X).verdict == constant == window_commensurated(X)


@given(st.frozensets(st.integers(-10, 10), max_size=6))
def test_neumann_matches_shift_scan(F):
    span = (max(F) - min(F)) if F else 0
    k = neumann_shift(F, 2 * span + 2)
    w = neumann_witness(Z, F, 2 * span + 2)
    assert Z.offset(w.g) == k and w.recheck(Z)
