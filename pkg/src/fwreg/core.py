"""Dense invariant open set on which every pair of points can be moved into X together.

For a finite space Y with a group acting by homeomorphisms and a dense open
X, the construction is:

* ``U_x`` = union of ``g⁻¹X`` over the g with ``gx ∈ X``,
* ``F_x = Y ∖ U_x``,
* ``K`` = closure of the union of ``F_x`` over the minimal dense open
  (the maximal points), ``W = Y ∖ K``,
* ``U′`` = interior of the intersection of ``U_y`` over ``y ∈ W``, and
  ``U = U′ ∩ W``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable

from fwreg.errors import ActionNotContinuous, XNotDenseOpen
from fwreg.globalization import FiniteGSet
from fwreg.spaces import FiniteSpace

Point = Hashable


@dataclass
class CoreCertificate:
    U: frozenset
    pair_witness: dict  # (x, y) -> group element
    movable: dict = field(default_factory=dict)  # x -> U_x
    K: frozenset = frozenset()
    W: frozenset = frozenset()
    U_prime: frozenset = frozenset()
    minimal_dense_open: frozenset = frozenset()

    def F(self, space: FiniteSpace, x: Point) -> frozenset:
        return space.complement(self.movable[x])


def check_action(space: FiniteSpace, gset: FiniteGSet) -> None:
    if set(gset.points) != set(space.points):
        raise ActionNotContinuous("the G-set does not act on the points of the space")
    for letter in gset.group.letters:
        m = gset.letter_map(letter)
        if not space.is_monotone(m):
            raise ActionNotContinuous(f"generator letter {letter[0]}^{letter[1]} is not monotone")


def check_dense_open(space: FiniteSpace, X: Iterable[Point]) -> frozenset:
    X = frozenset(X)
    if not X <= set(space.points):
        raise XNotDenseOpen("X leaves the space")
    if not space.is_open(X):
        raise XNotDenseOpen("X is not open")
    if not space.is_dense(X):
        raise XNotDenseOpen("X is not dense")
    return X


def movable_sets(space: FiniteSpace, gset: FiniteGSet, X: frozenset) -> dict:
    """``x -> {y : some g puts both gx and gy in X}``."""
    actions = gset.element_actions()
    out = {}
    for x in space.points:
        U = set()
        for _, p in actions:
            if p[x] in X:
                U.update(y for y in space.points if p[y] in X)
        out[x] = frozenset(U)
    return out


def noetherian_core(space: FiniteSpace, gset: FiniteGSet, X: Iterable[Point]) -> CoreCertificate:
    X = check_dense_open(space, X)
    check_action(space, gset)
    movable = movable_sets(space, gset, X)
    V = space.minimal_dense_open()
    bad = set()
    for x in V:
        bad |= space.complement(movable[x])
    K = space.closure(bad)
    W = space.complement(K)
    common = frozenset(space.points)
    for y in W:
        common &= movable[y]
    U_prime = space.interior(common)
    U = U_prime & W
    actions = gset.element_actions()
    witness = {}
    for x in space.sorted(U):
        for y in space.sorted(U):
            witness[x, y] = next(g for g, p in actions if p[x] in X and p[y] in X)
    return CoreCertificate(
        U=U,
        pair_witness=witness,
        movable=movable,
        K=K,
        W=W,
        U_prime=U_prime,
        minimal_dense_open=V,
    )


@dataclass
class CoreCheck:
    dense: bool
    open: bool
    invariant: bool
    witnesses: bool
    symmetric: bool
    equivariant: bool

    @property
    def ok(self) -> bool:
        return all(vars(self).values())


def verify_core(space: FiniteSpace, gset: FiniteGSet, X: Iterable[Point], cert: CoreCertificate) -> CoreCheck:
    """Re-derive every claimed property from the definitions."""
    X = frozenset(X)
    U = cert.U
    pts = space.points
    witnesses = set(cert.pair_witness) == {(x, y) for x in U for y in U} and all(
        gset.act(g, x) in X and gset.act(g, y) in X for (x, y), g in cert.pair_witness.items()
    )
    fresh = movable_sets(space, gset, X)
    symmetric = all((y in fresh[x]) == (x in fresh[y]) for x in pts for y in pts)
    equivariant = all(
        fresh[p[x]] == frozenset(p[y] for y in fresh[x]) for _, p in gset.element_actions() for x in pts
    )
    return CoreCheck(
        dense=space.is_dense(U),
        open=space.is_open(U),
        invariant=gset.is_invariant(U),
        witnesses=witnesses and fresh == cert.movable,
        symmetric=symmetric,
        equivariant=equivariant,
    )


def core_oracle(space: FiniteSpace, gset: FiniteGSet, X: Iterable[Point]) -> list[frozenset]:
    """Every invariant dense open subset whose pairs can be moved into X together."""
    X = frozenset(X)
    actions = gset.element_actions()
    out = []

    def together(x, y):
        return any(p[x] in X and p[y] in X for _, p in actions)

    for U in space.dense_opens():
        if gset.is_invariant(U) and all(together(x, y) for x in U for y in U):
            out.append(U)
    return out
