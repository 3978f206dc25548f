"""Named example instances.

Finite-group models on small Alexandrov spaces, the Cremona involution with
coordinate permutations over small fields, and shift instances on Z.
"""

from __future__ import annotations

import random

from fwreg.commensuration import PeriodicZSet, SymbolicZSet
from fwreg.errors import FWRegError
from fwreg.fields import SUPPORTED, field, normalize, projective_plane, token
from fwreg.groups import FiniteGroup, FreeGroup
from fwreg.instance import Instance, from_action
from fwreg.partial import PartialAction
from fwreg.spaces import FiniteSpace, affine_line


def _identity(points):
    return [(x, x) for x in points]


def a1_z2() -> Instance:
    """Z/2 on the line with closed points c0, c1, c2; s swaps c1 and c2 and misses c0."""
    S = affine_line(3)
    G = FiniteGroup.cyclic(2, "s")
    a = PartialAction(G, S.points, {"e": _identity(S.points), "s": [("eta", "eta"), ("c1", "c2"), ("c2", "c1")]})
    return from_action(a, S)


def a1_global() -> Instance:
    """Same line, s now total: fixes eta and c0, swaps c1 and c2."""
    S = affine_line(3)
    G = FiniteGroup.cyclic(2, "s")
    s = [("eta", "eta"), ("c0", "c0"), ("c1", "c2"), ("c2", "c1")]
    a = PartialAction(G, S.points, {"e": _identity(S.points), "s": s})
    return from_action(a, S, subsets={"X": ["eta", "c1"]})


def a1_z3() -> Instance:
    """Z/3 rotating c1 -> c2 -> c3 on a four-point line, undefined at c0."""
    S = affine_line(4)
    G = FiniteGroup.cyclic(3, "r")
    r = [("eta", "eta"), ("c1", "c2"), ("c2", "c3"), ("c3", "c1")]
    r2 = [(y, x) for x, y in r]
    a = PartialAction(G, S.points, {"e": _identity(S.points), "r": r, "r2": r2})
    return from_action(a, S)


def fano_space() -> FiniteSpace:
    """Generic point over 7 lines over 7 points, lines ``{i, i+1, i+3} mod 7``."""
    lines = {f"L{i}": [f"p{(i + k) % 7}" for k in (0, 1, 3)] for i in range(7)}
    pts = ["eta"] + list(lines) + [f"p{i}" for i in range(7)]
    rel = [(l, "eta") for l in lines] + [(p, l) for l, ps in lines.items() for p in ps]
    return FiniteSpace(pts, rel)


def fano_z7() -> Instance:
    """Singer cycle on the Fano model, restricted to the complement of closure(L0)."""
    Y = fano_space()
    G = FiniteGroup.cyclic(7, "t")

    def shift(x, k):
        if x == "eta":
            return x
        return f"{x[0]}{(int(x[1:]) + k) % 7}" if x[0] == "p" else f"L{(int(x[1:]) + k) % 7}"

    X = [x for x in Y.points if x not in Y.closure(["L0"])]
    keep = set(X)
    assignment = {}
    for k, g in enumerate(G.elements):
        assignment[g] = [(x, shift(x, k)) for x in X if shift(x, k) in keep]
    a = PartialAction(G, X, assignment)
    return from_action(a, Y.subspace(X))


def broken_z2() -> Instance:
    """Deliberately invalid: s is not an involution on its domain."""
    G = FiniteGroup.cyclic(2, "s")
    pts = ["1", "2", "3"]
    a = PartialAction(G, pts, {"e": _identity(pts), "s": [("1", "2"), ("2", "3")]})
    return from_action(a)


def cremona_action(q: int) -> PartialAction:
    """sigma: (x:y:z) -> (yz:xz:xy) on xyz != 0; tau swaps x, y; rho: (x:y:z) -> (y:z:x)."""
    F = field(q)
    pts = projective_plane(F)

    def sigma(v):
        x, y, z = v
        return normalize(F, (F.mul(y, z), F.mul(x, z), F.mul(x, y)))

    gens = {
        "sigma": [(token(v), token(sigma(v))) for v in pts if all(v)],
        "tau": [(token(v), token(normalize(F, (v[1], v[0], v[2])))) for v in pts],
        "rho": [(token(v), token(normalize(F, (v[1], v[2], v[0])))) for v in pts],
    }
    G = FreeGroup(["sigma", "tau", "rho"])
    return PartialAction(G, [token(v) for v in pts], gens)


def cremona(q: int) -> Instance:
    return from_action(cremona_action(q))


def zshift(variant: str) -> Instance:
    G = FreeGroup(["u"], kind="cyclic")
    sets = {
        "N": SymbolicZSet("nonneg"),
        "singleton": SymbolicZSet("empty", {0}),
        "evens": PeriodicZSet(2, {0}, {0}),
        "neumann": SymbolicZSet("empty", {0, 3}),
        "cofinite": SymbolicZSet("all", {0, 3}),
    }
    if variant not in sets:
        raise FWRegError(f"unknown shift variant {variant!r}")
    return Instance(group=G, zsets={"X": sets[variant]})


def broken_shift(window: int = 3) -> Instance:
    """u: n -> n+1 on -window..window plus a fixed eta, undefined at 0."""
    pts = ["eta"] + [str(n) for n in range(-window, window + 1)]
    u = [("eta", "eta")] + [(str(n), str(n + 1)) for n in range(-window, window) if n != 0]
    a = PartialAction(FreeGroup(["u"], kind="cyclic"), pts, {"u": u})
    return from_action(a)


FINITE_GROUP_MODELS = ("a1-z2", "a1-global", "a1-z3", "fano-z7")

_BUILDERS = {
    "a1-z2": a1_z2,
    "a1-global": a1_global,
    "a1-z3": a1_z3,
    "fano-z7": fano_z7,
    "broken-z2": broken_z2,
    "broken-shift": broken_shift,
    **{f"cremona-{q}": (lambda q=q: cremona(q)) for q in SUPPORTED},
    **{f"zshift-{v}": (lambda v=v: zshift(v)) for v in ("N", "singleton", "evens", "neumann", "cofinite")},
}

NAMES = tuple(_BUILDERS)


def example(name: str) -> Instance:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise FWRegError(f"unknown example {name!r}; known: {', '.join(NAMES)}") from None


def random_restricted(rng: random.Random, max_points: int = 6) -> Instance:
    """Random permutation action of a cyclic group, restricted to a random subset."""
    n = rng.randint(1, max_points)
    order = rng.randint(1, 4)
    pts = [f"x{i}" for i in range(n)]
    # a random permutation whose order divides ``order``: cycles of length dividing it
    perm, rest = {}, pts[:]
    rng.shuffle(rest)
    while rest:
        length = rng.choice([d for d in range(1, order + 1) if order % d == 0 and d <= len(rest)])
        cyc, rest = rest[:length], rest[length:]
        for i, x in enumerate(cyc):
            perm[x] = cyc[(i + 1) % length]
    G = FiniteGroup.cyclic(order, "r")
    keep = [x for x in pts if rng.random() < 0.7] or pts[:1]
    sub = set(keep)
    assignment = {}
    for k, g in enumerate(G.elements):
        pairs = []
        for x in keep:
            y = x
            for _ in range(k):
                y = perm[y]
            if y in sub:
                pairs.append((x, y))
        assignment[g] = pairs
    return from_action(PartialAction(G, keep, assignment))
