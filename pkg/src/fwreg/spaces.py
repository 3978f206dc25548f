"""Finite Alexandrov spaces stored as specialization preorders.

Convention: ``x <= y`` means x lies in the closure of {y}. Open sets are the
up-closed sets, closed sets the down-closed ones, and generic points are
maximal.
"""

from __future__ import annotations

from functools import cached_property
from itertools import combinations
from typing import Hashable, Iterable, Iterator, Mapping

from fwreg.errors import CapExceeded, PreconditionError

Point = Hashable


class FiniteSpace:
    def __init__(self, points: Iterable[Point], relations: Iterable[tuple[Point, Point]] = ()):
        self.points = tuple(points)
        self._index = {x: i for i, x in enumerate(self.points)}
        if len(self._index) != len(self.points):
            raise PreconditionError("space points must be unique")
        up = {x: {x} for x in self.points}
        for a, b in relations:
            if a not in self._index or b not in self._index:
                raise PreconditionError(f"relation {a!r} <= {b!r} uses an unknown point")
            up[a].add(b)
        # transitive closure, Warshall style over the up-sets
        for k in self.points:
            above_k = up[k]
            for x in self.points:
                if k in up[x]:
                    up[x] |= above_k
        self._up = {x: frozenset(up[x]) for x in self.points}
        self._down = {x: frozenset(y for y in self.points if x in self._up[y]) for x in self.points}
        self._all = frozenset(self.points)

    # -- basic relation -------------------------------------------------

    def le(self, x: Point, y: Point) -> bool:
        return y in self._up[x]

    def lt(self, x: Point, y: Point) -> bool:
        return y in self._up[x] and x not in self._up[y]

    def above(self, x: Point) -> frozenset:
        return self._up[x]

    def below(self, x: Point) -> frozenset:
        return self._down[x]

    def relation(self) -> frozenset:
        return frozenset((x, y) for x in self.points for y in self._up[x])

    def cover_relations(self) -> list[tuple[Point, Point]]:
        """A generating set: ``x < y`` with nothing strictly between, plus equivalences."""
        out = []
        for x in self.points:
            for y in self._up[x]:
                if x == y:
                    continue
                if x in self._up[y]:
                    out.append((x, y))
                    continue
                if not any(self.lt(x, z) and self.lt(z, y) for z in self.points):
                    out.append((x, y))
        return out

    def sorted(self, points: Iterable[Point]) -> tuple:
        return tuple(sorted(points, key=self._index.__getitem__))

    def __contains__(self, x) -> bool:
        return x in self._index

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteSpace) and self.points == other.points and self._up == other._up

    def __hash__(self) -> int:
        return hash((self.points, frozenset(self._up.items())))

    def __repr__(self) -> str:
        return f"FiniteSpace({len(self.points)} points)"

    # -- topology -------------------------------------------------------

    def _check(self, S) -> frozenset:
        S = frozenset(S)
        if not S <= self._all:
            raise PreconditionError(f"points {sorted(map(str, S - self._all))} are not in the space")
        return S

    def closure(self, S: Iterable[Point]) -> frozenset:
        out = set()
        for x in self._check(S):
            out |= self._down[x]
        return frozenset(out)

    def up_closure(self, S: Iterable[Point]) -> frozenset:
        """Smallest open set containing S."""
        out = set()
        for x in self._check(S):
            out |= self._up[x]
        return frozenset(out)

    def interior(self, S: Iterable[Point]) -> frozenset:
        S = self._check(S)
        return frozenset(x for x in S if self._up[x] <= S)

    def is_open(self, S: Iterable[Point]) -> bool:
        S = self._check(S)
        return all(self._up[x] <= S for x in S)

    def is_closed(self, S: Iterable[Point]) -> bool:
        S = self._check(S)
        return all(self._down[x] <= S for x in S)

    def is_dense(self, S: Iterable[Point]) -> bool:
        return self.closure(S) == self._all

    def complement(self, S: Iterable[Point]) -> frozenset:
        return self._all - self._check(S)

    @cached_property
    def maximal_points(self) -> frozenset:
        return frozenset(x for x in self.points if all(x in self._up[y] for y in self._up[x]))

    def minimal_dense_open(self) -> frozenset:
        """The maximal points: open, dense, and inside every dense open set."""
        return self.maximal_points

    def opens(self) -> Iterator[frozenset]:
        """All open sets, generated as up-closures of antichains of generators."""
        seen = set()
        pts = self.points
        for r in range(len(pts) + 1):
            for combo in combinations(pts, r):
                U = self.up_closure(combo)
                if U not in seen:
                    seen.add(U)
                    yield U

    def dense_opens(self) -> Iterator[frozenset]:
        top = self.maximal_points
        return (U for U in self.opens() if top <= U)

    # -- dimension ------------------------------------------------------

    @cached_property
    def dimensions(self) -> dict:
        """Length of the longest strict chain below each point."""
        dim: dict = {}

        def height(x):
            if x not in dim:
                lower = [y for y in self._down[x] if x not in self._down[y]]
                dim[x] = 1 + max(map(height, lower)) if lower else 0
            return dim[x]

        for x in self.points:
            height(x)
        return {x: dim[x] for x in self.points}

    def dimension(self, x: Point | None = None) -> int:
        if x is not None:
            return self.dimensions[x]
        return max(self.dimensions.values(), default=-1)

    def strata(self) -> list[frozenset]:
        """``[X_0, X_1, ..., X_d]`` by point dimension."""
        d = self.dimension()
        return [frozenset(x for x in self.points if self.dimensions[x] == i) for i in range(d + 1)]

    def stratum_at_least(self, i: int) -> frozenset:
        return frozenset(x for x in self.points if self.dimensions[x] >= i)

    def is_irreducible(self) -> tuple[bool, Point | None]:
        """True with the generic point iff exactly one point is dense."""
        generic = [x for x in self.points if self._down[x] == self._all]
        if len(generic) == 1:
            return True, generic[0]
        return False, None

    # -- maps -----------------------------------------------------------

    def subspace(self, S: Iterable[Point]) -> "FiniteSpace":
        S = self._check(S)
        pts = self.sorted(S)
        return FiniteSpace(pts, ((x, y) for x in pts for y in self._up[x] if y in S))

    def is_monotone(self, f: Mapping) -> bool:
        return all(self.le(f[x], f[y]) for x in f for y in f if self.le(x, y))

    def is_partial_homeomorphism(self, f: Mapping, target: "FiniteSpace | None" = None) -> bool:
        """Order isomorphism from an open subset onto an open subset."""
        target = self if target is None else target
        dom, img = frozenset(f), frozenset(f.values())
        if len(img) != len(dom) or not self.is_open(dom) or not target.is_open(img):
            return False
        return all(self.le(x, y) == target.le(f[x], f[y]) for x in dom for y in dom)

    def homeomorphism_group(self, cap: int = 9) -> list[dict]:
        """All order automorphisms as point dictionaries, identity first."""
        if len(self.points) > cap:
            raise CapExceeded(f"space has {len(self.points)} points, cap is {cap}")
        pts = self.points
        # points can only map to points with the same up/down profile sizes
        profile = {x: (len(self._up[x]), len(self._down[x]), self.dimensions[x]) for x in pts}
        out = []

        def extend(i, f, used):
            if i == len(pts):
                out.append(dict(f))
                return
            x = pts[i]
            for y in pts:
                if y in used or profile[y] != profile[x]:
                    continue
                if all(self.le(x, z) == self.le(y, f[z]) and self.le(z, x) == self.le(f[z], y) for z in pts[:i]):
                    f[x] = y
                    used.add(y)
                    extend(i + 1, f, used)
                    used.discard(y)
                    del f[x]

        extend(0, {}, set())
        ident = {x: x for x in pts}
        out.sort(key=lambda f: f != ident)
        return out

    def partial_homeomorphisms(self) -> Iterator[dict]:
        """Every order isomorphism between two open subsets (for exhaustive tests)."""
        opens = list(self.opens())
        for U in opens:
            src = self.sorted(U)
            for V in opens:
                if len(V) != len(U):
                    continue
                yield from self._isos(src, V)

    def _isos(self, src, V) -> Iterator[dict]:
        tgt = self.sorted(V)

        def extend(i, f, used):
            if i == len(src):
                yield dict(f)
                return
            x = src[i]
            for y in tgt:
                if y in used:
                    continue
                if all(self.le(x, z) == self.le(y, f[z]) and self.le(z, x) == self.le(f[z], y) for z in src[:i]):
                    f[x] = y
                    used.add(y)
                    yield from extend(i + 1, f, used)
                    used.discard(y)
                    del f[x]

        yield from extend(0, {}, set())


def affine_line(n_closed: int, generic: str = "eta", prefix: str = "c") -> FiniteSpace:
    """Combinatorial affine line: one generic point above ``n_closed`` closed points."""
    closed = [f"{prefix}{i}" for i in range(n_closed)]
    return FiniteSpace([generic] + closed, [(c, generic) for c in closed])


def chain(n: int) -> FiniteSpace:
    pts = [f"x{i}" for i in range(n)]
    return FiniteSpace(pts, zip(pts, pts[1:]))


def antichain(n: int) -> FiniteSpace:
    return FiniteSpace([f"x{i}" for i in range(n)])


def disjoint_union(*spaces: FiniteSpace) -> FiniteSpace:
    pts, rel = [], []
    for k, S in enumerate(spaces):
        tag = {x: f"{x}_{k}" for x in S.points}
        pts += [tag[x] for x in S.points]
        rel += [(tag[a], tag[b]) for a, b in S.relation()]
    return FiniteSpace(pts, rel)


def all_spaces(n: int) -> list[FiniteSpace]:
    """Every preorder on ``n`` points up to isomorphism (points ``0..n-1``).

    Grown one point at a time: the new point gets a down-set below it and an
    up-set above it, then duplicates are removed by digraph isomorphism.
    """
    import networkx as nx
    from networkx.algorithms.isomorphism import DiGraphMatcher

    if n == 0:
        return [FiniteSpace([])]
    found = [FiniteSpace([0])]
    for m in range(1, n):
        buckets: dict = {}
        out = []
        for S in found:
            closeds = [frozenset(c) for c in _down_sets(S)]
            opens = list(S.opens())
            for D in closeds:
                for U in opens:
                    if not all(S.le(d, u) for d in D for u in U):
                        continue
                    rel = list(S.relation()) + [(d, m) for d in D] + [(m, u) for u in U]
                    T = FiniteSpace(list(S.points) + [m], rel)
                    g = nx.DiGraph()
                    g.add_nodes_from(T.points)
                    g.add_edges_from((a, b) for a, b in T.relation() if a != b)
                    key = (
                        tuple(sorted((g.in_degree(v), g.out_degree(v)) for v in g)),
                        nx.weisfeiler_lehman_graph_hash(g),
                    )
                    if any(DiGraphMatcher(g, h).is_isomorphic() for h in buckets.get(key, ())):
                        continue
                    buckets.setdefault(key, []).append(g)
                    out.append(T)
        found = out
    return found


def _down_sets(S: FiniteSpace) -> Iterator[frozenset]:
    seen = set()
    pts = S.points
    for r in range(len(pts) + 1):
        for combo in combinations(pts, r):
            C = S.closure(combo)
            if C not in seen:
                seen.add(C)
                yield C
