"""Universal globalization of a partial action, plus finite G-sets.

The globalization is the quotient of ``G × X`` where ``(g, x) ~ (h, y)``
whenever some ``k`` makes ``(kg)x`` and ``(kh)y`` defined and equal. For
infinite groups only the ball of words of length ``<= radius`` is explored;
the result is flagged exact when the explored classes are closed under every
generator, since merges inside the ball are then already final.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

from networkx.utils import UnionFind

from fwreg.errors import NotExact, OrbitMissed, PreconditionError, TruncationInconclusive
from fwreg.groups import FiniteGroup, FreeGroup, GroupHandle, Letter
from fwreg.partial import Carrier, PartialAction, PartialBijection

Point = Hashable


@dataclass(frozen=True)
class GlobalPoint:
    """Class of ``(g, x)`` in G × X, named by its length-lex least member."""

    g: Hashable
    x: Point

    def label(self, group: GroupHandle) -> str:
        if self.g == group.identity:
            return str(self.x)
        return f"{group.format(self.g)}@{self.x}"


class FiniteGSet:
    """A group acting by total permutations of a finite point set.

    ``generator_maps`` gives one bijection per generator symbol. For finite
    groups the induced element permutations are checked to respect the table.
    """

    def __init__(self, group: GroupHandle, points: Iterable[Point], generator_maps: Mapping[str, Mapping]):
        self.group = group
        self.points = tuple(points)
        self._index = {x: i for i, x in enumerate(self.points)}
        pts = set(self.points)
        self._letter_maps: dict[Letter, dict] = {}
        for s in group.generators:
            m = dict(generator_maps[s])
            if set(m) != pts or set(m.values()) != pts:
                raise PreconditionError(f"generator {s} does not permute the points")
            self._letter_maps[s, 1] = m
            self._letter_maps[s, -1] = {y: x for x, y in m.items()}
        self._perm_cache: dict = {}
        if isinstance(group, FiniteGroup):
            for g in group.elements:
                pg = self.perm(g)
                for s in group.generators:
                    gs = self.perm(group.mul(g, s))
                    ps = self._letter_maps[s, 1]
                    if any(gs[x] != pg[ps[x]] for x in self.points):
                        raise PreconditionError("generator permutations do not respect the group table")

    @classmethod
    def from_action(cls, a: PartialAction) -> "FiniteGSet":
        """A partial action whose generator images are all total."""
        G = a.group
        maps = {}
        for s in G.generators:
            f = a.evaluate(((s, 1),))
            if not f.is_total():
                raise PreconditionError(f"generator {s} is not total, the action is not global")
            maps[s] = f.as_dict()
        E = cls(G, a.carrier, maps)
        if isinstance(G, FiniteGroup):
            for g in G.elements:
                if a.at(g).as_dict() != E.perm(g):
                    raise PreconditionError(f"stored image of {g} is not the induced permutation")
        return E

    def sorted(self, S: Iterable[Point]) -> tuple:
        return tuple(sorted(S, key=self._index.__getitem__))

    def letter_map(self, letter: Letter) -> dict:
        return self._letter_maps[letter]

    def perm(self, g) -> dict:
        hit = self._perm_cache.get(g)
        if hit is None:
            hit = {x: x for x in self.points}
            for letter in reversed(self.group.word(g)):
                m = self._letter_maps[letter]
                hit = {x: m[y] for x, y in hit.items()}
            self._perm_cache[g] = hit
        return hit

    def act(self, g, x: Point) -> Point:
        return self.perm(g)[x]

    def translate(self, g, S: Iterable[Point]) -> frozenset:
        p = self.perm(g)
        return frozenset(p[x] for x in S)

    def orbits(self) -> list[frozenset]:
        uf = UnionFind(self.points)
        for letter, m in self._letter_maps.items():
            for x, y in m.items():
                uf.union(x, y)
        return sorted(
            (frozenset(c) for c in uf.to_sets()),
            key=lambda O: min(self._index[x] for x in O),
        )

    def orbit_of(self, x: Point) -> frozenset:
        seen, todo = {x}, [x]
        while todo:
            y = todo.pop()
            for m in self._letter_maps.values():
                z = m[y]
                if z not in seen:
                    seen.add(z)
                    todo.append(z)
        return frozenset(seen)

    def is_invariant(self, S: Iterable[Point]) -> bool:
        S = frozenset(S)
        return all(m[x] in S for m in self._letter_maps.values() for x in S)

    def saturate(self, S: Iterable[Point]) -> frozenset:
        out: set = set()
        for x in S:
            if x not in out:
                out |= self.orbit_of(x)
        return frozenset(out)

    def element_actions(self) -> list[tuple[Hashable, dict]]:
        """Distinct permutations, each with its length-lex least group element."""
        seen: dict = {}
        out = []
        if isinstance(self.group, FiniteGroup):
            candidates = self.group.iter_elements()
        else:
            candidates = self._free_search()
        for g in candidates:
            p = self.perm(g)
            key = tuple(p[x] for x in self.points)
            if key not in seen:
                seen[key] = g
                out.append((g, p))
        return out

    def _free_search(self):
        # breadth-first over reduced words; stops once a layer adds nothing new
        G = self.group
        seen = {tuple(self.points)}
        layer = [G.identity]
        yield G.identity
        while layer:
            nxt = []
            for w in layer:
                for l in G.letters:
                    if w and w[-1] == (l[0], -l[1]):
                        continue
                    v = w + (l,)
                    p = self.perm(v)
                    key = tuple(p[x] for x in self.points)
                    if key not in seen:
                        seen.add(key)
                        nxt.append(v)
                        yield v
            layer = nxt

    def restrict_to(self, subset: Iterable[Point]) -> PartialAction:
        """The restricted partial action on ``subset`` (finite groups only)."""
        if not isinstance(self.group, FiniteGroup):
            raise PreconditionError("restriction of a G-set needs a finite group")
        sub = set(subset)
        carrier = Carrier(self.sorted(sub))
        return PartialAction(
            self.group,
            carrier,
            {g: [(x, self.act(g, x)) for x in carrier if self.act(g, x) in sub] for g in self.group.elements},
        )


class Globalization:
    def __init__(self, action: PartialAction, radius, points, class_of, table, exact: bool):
        self.action = action
        self.group = action.group
        self.carrier = action.carrier
        self.radius = radius
        self.points: tuple[GlobalPoint, ...] = tuple(points)
        self._index = {p: i for i, p in enumerate(self.points)}
        self._class_of = class_of
        self._table = table
        self.exact = exact
        self.embedding = {x: class_of[self.group.identity, x] for x in self.carrier}

    def __len__(self) -> int:
        return len(self.points)

    def __repr__(self) -> str:
        return f"Globalization({len(self.points)} points, radius={self.radius}, exact={self.exact})"

    def embed(self, x: Point) -> GlobalPoint:
        return self.embedding[x]

    def embedded(self, xs: Iterable[Point] | None = None) -> frozenset:
        xs = self.carrier if xs is None else xs
        return frozenset(self.embedding[x] for x in xs)

    def index(self, p: GlobalPoint) -> int:
        return self._index[p]

    def sorted(self, S: Iterable[GlobalPoint]) -> tuple:
        return tuple(sorted(S, key=self._index.__getitem__))

    def class_of(self, g, x: Point) -> GlobalPoint | None:
        return self._class_of.get((g, x))

    def members(self, p: GlobalPoint) -> list:
        return [node for node, q in self._class_of.items() if q == p]

    def act_letter(self, letter: Letter, p: GlobalPoint) -> GlobalPoint | None:
        return self._table[letter, p]

    def act(self, g, p: GlobalPoint | None) -> GlobalPoint | None:
        """``g · p``; None when the truncated quotient does not reach it."""
        for letter in reversed(self.group.word(g)):
            if p is None:
                return None
            p = self._table[letter, p]
        return p

    def translate(self, g, S: Iterable[GlobalPoint]) -> frozenset:
        out = set()
        for p in S:
            q = self.act(g, p)
            if q is None:
                raise TruncationInconclusive(f"{self.group.format(g)} moves {p} outside the explored ball")
            out.add(q)
        return frozenset(out)

    def require_exact(self) -> "Globalization":
        if not self.exact:
            raise TruncationInconclusive(
                f"classes still open at the boundary of radius {self.radius}"
            )
        return self

    def as_gset(self) -> FiniteGSet:
        if not self.exact:
            raise NotExact("only exact globalizations are G-sets")
        maps = {s: {p: self._table[(s, 1), p] for p in self.points} for s in self.group.generators}
        return FiniteGSet(self.group, self.points, maps)

    def label(self, p: GlobalPoint) -> str:
        return p.label(self.group)


def globalize(a: PartialAction, radius: int = 3) -> Globalization:
    """Quotient of ``ball(radius) × X``; finite groups ignore ``radius``."""
    G = a.group
    if isinstance(G, FiniteGroup):
        ball, radius = G.ball(None), None
    else:
        if radius < 1:
            raise PreconditionError("radius must be at least 1")
        ball = G.ball(radius)
    in_ball = set(ball)
    nodes = [(g, x) for g in ball for x in a.carrier]
    uf = UnionFind(nodes)
    for k in ball:
        buckets: dict = {}
        for g in ball:
            for x, z in a.at(G.mul(k, g)).pairs:
                buckets.setdefault(z, []).append((g, x))
        for members in buckets.values():
            uf.union(*members)
    cidx = a.carrier.index

    def key(node):
        return (G.sort_key(node[0]), cidx(node[1]))

    classes = [sorted(c, key=key) for c in uf.to_sets()]
    classes.sort(key=lambda c: key(c[0]))
    points = [GlobalPoint(*c[0]) for c in classes]
    class_of = {node: p for p, c in zip(points, classes) for node in c}
    table = {}
    for p in points:
        for letter in G.letters:
            sg = G.mul(G.letter_element(letter), p.g)
            table[letter, p] = class_of[sg, p.x] if sg in in_ball else None
    exact = isinstance(G, FiniteGroup) or all(v is not None for v in table.values())
    return Globalization(a, radius, points, class_of, table, exact)


def check_restriction(glob: Globalization, a: PartialAction) -> bool:
    """Does the global action, cut down to the embedded carrier, give back ``a``?"""
    G = a.group
    keys = G.elements if isinstance(G, FiniteGroup) else [((s, e),) for s in G.generators for e in (1, -1)]
    inside = {glob.embed(x): x for x in a.carrier}
    if len(inside) != len(a.carrier):
        return False
    for key in keys:
        g = key if isinstance(G, FiniteGroup) else G.element(key)
        f = a.at(g)
        for x in a.carrier:
            image = glob.act(g, glob.embed(x))
            expected = f.get(x)
            if expected is None:
                if image in inside:
                    return False
            elif image != glob.embed(expected):
                return False
    return True


@dataclass
class RecoveryReport:
    globalization: Globalization
    bijection: dict  # GlobalPoint -> point of E


def recover_action_on_subset(E: FiniteGSet, X: Iterable[Point]) -> RecoveryReport:
    """Globalize the restriction of ``E`` to ``X`` and map it back onto ``E``."""
    X = frozenset(X)
    missed = [O for O in E.orbits() if not O & X]
    if missed:
        raise OrbitMissed(
            f"{len(missed)} orbit(s) do not meet the subset",
            orbits=[E.sorted(O) for O in missed],
        )
    glob = globalize(E.restrict_to(X))
    phi = {}
    for (g, x), p in glob._class_of.items():
        y = E.act(g, x)
        if phi.setdefault(p, y) != y:
            raise PreconditionError(f"class {p} maps to two points of E")
    if sorted(map(E._index.get, phi.values())) != list(range(len(E.points))):
        raise PreconditionError("globalization is not in bijection with E")
    for p in glob.points:
        for letter in glob.group.letters:
            if phi[glob.act_letter(letter, p)] != E.letter_map(letter)[phi[p]]:
                raise PreconditionError("recovered bijection is not equivariant")
    for x in X:
        if phi[glob.embed(x)] != x:
            raise PreconditionError("recovered bijection moves the subset")
    return RecoveryReport(glob, phi)
