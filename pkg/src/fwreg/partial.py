"""Partial bijections on finite carriers and partial group actions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping

from fwreg.errors import CarrierMismatch, NotInjective, PreconditionError, UnknownSymbol
from fwreg.groups import FiniteGroup, FreeGroup, GroupHandle, Word, element_of

Point = Hashable


class Carrier:
    """Finite ordered set of point identifiers."""

    __slots__ = ("elements", "_index")

    def __init__(self, elements: Iterable[Point]):
        self.elements = tuple(elements)
        self._index = {x: i for i, x in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise PreconditionError("carrier identifiers must be unique")

    def index(self, x: Point) -> int:
        return self._index[x]

    def sorted(self, points: Iterable[Point]) -> tuple:
        return tuple(sorted(points, key=self._index.__getitem__))

    def __contains__(self, x) -> bool:
        return x in self._index

    def __iter__(self) -> Iterator[Point]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        return isinstance(other, Carrier) and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        return f"Carrier({list(self.elements)!r})"


class PartialBijection:
    """Injective partial map of a carrier into itself."""

    __slots__ = ("carrier", "_fwd", "_bwd")

    def __init__(self, carrier: Carrier, pairs: Iterable[tuple[Point, Point]] | Mapping):
        if isinstance(pairs, Mapping):
            pairs = pairs.items()
        fwd, bwd = {}, {}
        for x, y in pairs:
            if x not in carrier or y not in carrier:
                raise CarrierMismatch(f"pair {x!r} -> {y!r} leaves the carrier")
            if fwd.get(x, y) != y or bwd.get(y, x) != x:
                raise NotInjective(f"pair {x!r} -> {y!r} breaks injectivity")
            fwd[x] = y
            bwd[y] = x
        self.carrier = carrier
        self._fwd = {x: fwd[x] for x in carrier.sorted(fwd)}
        self._bwd = bwd

    @classmethod
    def identity(cls, carrier: Carrier, domain: Iterable[Point] | None = None) -> "PartialBijection":
        dom = carrier if domain is None else domain
        return cls(carrier, ((x, x) for x in dom))

    @property
    def domain(self) -> frozenset:
        return frozenset(self._fwd)

    @property
    def codomain(self) -> frozenset:
        return frozenset(self._bwd)

    @property
    def pairs(self) -> tuple[tuple[Point, Point], ...]:
        return tuple(self._fwd.items())

    def as_dict(self) -> dict:
        return dict(self._fwd)

    def get(self, x: Point, default=None):
        return self._fwd.get(x, default)

    def preimage(self, y: Point, default=None):
        return self._bwd.get(y, default)

    def image(self, points: Iterable[Point]) -> frozenset:
        return frozenset(self._fwd[x] for x in points if x in self._fwd)

    def pullback(self, points: Iterable[Point]) -> frozenset:
        """``{x in domain : f(x) in points}``."""
        return frozenset(self._bwd[y] for y in points if y in self._bwd)

    def __call__(self, x: Point) -> Point:
        return self._fwd[x]

    def __contains__(self, pair) -> bool:
        x, y = pair
        return x in self._fwd and self._fwd[x] == y

    def __len__(self) -> int:
        return len(self._fwd)

    def is_total(self) -> bool:
        return len(self._fwd) == len(self.carrier)

    def restricted(self, subset: Iterable[Point]) -> "PartialBijection":
        s = set(subset)
        return PartialBijection(self.carrier, ((x, y) for x, y in self._fwd.items() if x in s and y in s))

    def issubset(self, other: "PartialBijection") -> bool:
        return all(other._fwd.get(x, _MISSING) == y for x, y in self._fwd.items())

    __le__ = issubset

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PartialBijection)
            and self.carrier == other.carrier
            and self._fwd == other._fwd
        )

    def __hash__(self) -> int:
        return hash(frozenset(self._fwd.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{x!r}->{y!r}" for x, y in self._fwd.items())
        return f"PartialBijection({{{inner}}})"


_MISSING = object()


def compose(f: PartialBijection, g: PartialBijection) -> PartialBijection:
    """``g`` after ``f``: pairs ``(x, g(f(x)))`` wherever both steps are defined."""
    if f.carrier != g.carrier:
        raise CarrierMismatch("compose needs partial bijections on one carrier")
    pairs = []
    for x, y in f._fwd.items():
        z = g._fwd.get(y, _MISSING)
        if z is not _MISSING:
            pairs.append((x, z))
    return PartialBijection(f.carrier, pairs)


def inverse(f: PartialBijection) -> PartialBijection:
    return PartialBijection(f.carrier, ((y, x) for x, y in f._fwd.items()))


def composition_domain(f: PartialBijection, g: PartialBijection) -> frozenset:
    """Domain of ``g`` after ``f`` from the birational-map domain formula.

    Reads ``U_f ∩ f^-1(U_g ∩ U_{f^-1})`` literally with set operations; kept
    separate from :func:`compose` so each can check the other.
    """
    u_f = f.domain
    u_f_inv = f.codomain
    return u_f & f.pullback(g.domain & u_f_inv)


class PartialAction:
    """A group handle with a partial bijection for each generator or element.

    Free and cyclic groups take one partial bijection per generator symbol
    and act on words by composition. Finite groups take one per element and
    ``evaluate`` returns the stored value.
    """

    def __init__(self, group: GroupHandle, carrier: Carrier | Iterable[Point], assignment: Mapping):
        if not isinstance(carrier, Carrier):
            carrier = Carrier(carrier)
        self.group = group
        self.carrier = carrier
        table = {}
        keys = group.generators if isinstance(group, FreeGroup) else group.elements
        for key, value in assignment.items():
            if isinstance(group, FiniteGroup):
                key = element_of(group, key)
            if key not in keys:
                raise UnknownSymbol(f"assignment for unknown symbol {key!r}")
            if not isinstance(value, PartialBijection):
                value = PartialBijection(carrier, value)
            if value.carrier != carrier:
                raise CarrierMismatch(f"image of {key!r} lives on another carrier")
            table[key] = value
        missing = [k for k in keys if k not in table]
        if missing:
            raise UnknownSymbol(f"no partial bijection given for {missing}")
        self.assignment = {k: table[k] for k in keys}
        self._cache: dict = {}

    @property
    def kind(self) -> str:
        return self.group.kind

    def at(self, g) -> PartialBijection:
        """Partial bijection of a group element (not a word)."""
        hit = self._cache.get(g)
        if hit is not None:
            return hit
        if isinstance(self.group, FiniteGroup):
            value = self.assignment[g]
        else:
            if not g:
                value = PartialBijection.identity(self.carrier)
            else:
                sym, e = g[0]
                step = self.assignment[sym] if e == 1 else self._inverse_of(sym)
                value = compose(self.at(g[1:]), step)
        self._cache[g] = value
        return value

    def _inverse_of(self, sym: str) -> PartialBijection:
        key = ("inverse", sym)
        if key not in self._cache:
            self._cache[key] = inverse(self.assignment[sym])
        return self._cache[key]

    def evaluate(self, w: Word | str) -> PartialBijection:
        return self.at(self.group.element(w))

    def act(self, g, x: Point, default=None):
        return self.at(g).get(x, default)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PartialAction)
            and self.group == other.group
            and self.carrier == other.carrier
            and self.assignment == other.assignment
        )

    def __repr__(self) -> str:
        return f"PartialAction({self.group!r}, {len(self.carrier)} points)"


def evaluate(a: PartialAction, w: Word | str) -> PartialBijection:
    return a.evaluate(w)


@dataclass(frozen=True)
class Violation:
    axiom: str  # "identity" | "inverse" | "containment"
    g: object
    h: object
    x: Point


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    pairs_checked: int = 0
    bound: int | None = None

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(a: PartialAction, word_length_bound: int = 3) -> ValidationReport:
    """Check the three partial-action axioms.

    Finite groups are checked on all element pairs; free groups on all pairs
    of reduced words of length at most ``word_length_bound``.
    """
    G = a.group
    elems = G.ball(None) if isinstance(G, FiniteGroup) else G.ball(word_length_bound)
    report = ValidationReport(bound=None if isinstance(G, FiniteGroup) else word_length_bound)
    one = a.at(G.identity)
    for x in a.carrier:
        if one.get(x, _MISSING) != x:
            report.violations.append(Violation("identity", G.identity, G.identity, x))
    for g in elems:
        ag_inv, inv = a.at(G.inv(g)), inverse(a.at(g))
        if ag_inv != inv:
            bad = next(y for y in a.carrier if ag_inv.get(y, _MISSING) != inv.get(y, _MISSING))
            report.violations.append(Violation("inverse", g, G.inv(g), bad))
    if isinstance(G, FiniteGroup):
        for g in elems:
            ag = a.at(g)
            for h in elems:
                report.pairs_checked += 1
                ah, agh = a.at(h), a.at(G.mul(g, h))
                for x, y in ah.pairs:
                    z = ag.get(y, _MISSING)
                    if z is not _MISSING and agh.get(x, _MISSING) != z:
                        report.violations.append(Violation("containment", g, h, x))
                        break
        return report
    # free groups: evaluate the reduced product letter by letter, never via g and h
    steps = {}
    for sym, f in a.assignment.items():
        steps[sym, 1] = f.as_dict()
        steps[sym, -1] = inverse(f).as_dict()
    tables = {g: a.at(g).as_dict() for g in elems}
    for g in elems:
        ag = tables[g]
        for h in elems:
            report.pairs_checked += 1
            gh = G.mul(g, h)
            for x, y in tables[h].items():
                z = ag.get(y, _MISSING)
                if z is _MISSING:
                    continue
                w = x
                for letter in reversed(gh):
                    w = steps[letter].get(w, _MISSING)
                    if w is _MISSING:
                        break
                if w != z:
                    report.violations.append(Violation("containment", g, h, x))
                    break
    return report


def restrict(a: PartialAction, subset: Iterable[Point]) -> PartialAction:
    """Intersect every stored partial bijection with ``subset × subset``.

    For finite groups every element is stored, so this is the restricted
    partial action exactly. For free groups only generator images are cut.
    """
    sub = set(subset)
    if not sub <= set(a.carrier):
        raise CarrierMismatch("restriction subset leaves the carrier")
    carrier = Carrier(a.carrier.sorted(sub))
    assignment = {
        k: PartialBijection(carrier, ((x, y) for x, y in v.pairs if x in sub and y in sub))
        for k, v in a.assignment.items()
    }
    return PartialAction(a.group, carrier, assignment)


def global_action(group: GroupHandle, carrier: Iterable[Point], act) -> PartialAction:
    """Partial action from a total action ``act(g, x)``.

    For finite groups ``act`` is called on every element, for free groups on
    each generator.
    """
    carrier = carrier if isinstance(carrier, Carrier) else Carrier(carrier)
    keys = group.elements if isinstance(group, FiniteGroup) else group.generators
    if isinstance(group, FreeGroup):
        return PartialAction(group, carrier, {s: [(x, act(((s, 1),), x)) for x in carrier] for s in keys})
    return PartialAction(group, carrier, {g: [(x, act(g, x)) for x in carrier] for g in keys})
