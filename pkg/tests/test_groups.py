from itertools import permutations

import pytest

from fwreg.errors import MalformedGroup, UnknownSymbol
from fwreg.groups import FiniteGroup, FreeGroup, format_word, free_reduce, parse_word, subgroup_classes


def test_words_parse_and_format():
    w = parse_word("a*b^-2")
    assert w == (("a", 1), ("b", -1), ("b", -1))
    assert format_word(w) == "a*b^-2"
    assert parse_word("1") == ()
    with pytest.raises(UnknownSymbol):
        parse_word("a b")


def test_free_reduce_cancels_adjacent_inverses():
    assert free_reduce([("a", 1), ("b", 1), ("b", -1), ("a", -1)]) == ()
    assert free_reduce([("a", 1), ("a", 1)]) == (("a", 1), ("a", 1))


def test_ball_is_length_lex_with_positive_letters_first():
    G = FreeGroup(["a", "b"])
    names = [G.format(w) for w in G.ball(2)]
    assert names[:5] == ["1", "a", "b", "a^-1", "b^-1"]
    # 1 + 4 + 4*3 reduced words
    assert len(names) == 17
    assert len(G.ball(3)) == 1 + 4 + 12 + 36


def test_cyclic_free_group_reduces_exponents():
    Z = FreeGroup(["u"], kind="cyclic")
    assert Z.element("u*u*u^-1") == (("u", 1),)
    assert [Z.format(w) for w in Z.ball(2)] == ["1", "u", "u^-1", "u^2", "u^-2"]


def test_free_group_laws():
    G = FreeGroup(["a", "b"])
    for g in G.ball(2):
        assert G.mul(g, G.inv(g)) == G.identity
        for h in G.ball(1):
            for k in G.ball(1):
                assert G.mul(G.mul(g, h), k) == G.mul(g, G.mul(h, k))


def test_cyclic_finite_group():
    C = FiniteGroup.cyclic(3, "r")
    assert C.elements == ("e", "r", "r2")
    assert C.inv("r") == "r2"
    assert C.mul("r", "r2") == "e"
    assert C.element("r^-1") == "r2"
    assert FiniteGroup.cyclic(1, "r").generators == ()


def test_finite_group_rejects_non_group_table():
    table = {(a, b): "e" for a in ("e", "x") for b in ("e", "x")}
    with pytest.raises(MalformedGroup):
        FiniteGroup(["e", "x"], table)


@pytest.mark.parametrize("n, expected", [(3, 4), (4, 11)])
def test_subgroup_classes_of_symmetric_groups(n, expected):
    # conjugacy classes of subgroups: S3 has 4, S4 has 11
    perms = list(permutations(range(n)))
    assert len(subgroup_classes(perms)) == expected


def test_from_permutations_builds_s3():
    G, perm = FiniteGroup.from_permutations({"a": (1, 0, 2), "b": (1, 2, 0)})
    assert len(G.elements) == 6
    for g in G.elements:
        for h in G.elements:
            p, q = perm[g], perm[h]
            assert perm[G.mul(g, h)] == tuple(p[i] for i in q)
