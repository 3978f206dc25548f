"""Commensurated and transfixed subsets, Neumann witnesses, transfixing strategies.

Three backends describe the G-set:

* :class:`FiniteBackend` wraps a :class:`FiniteGSet` (total action).
* :class:`ZShift` is the shift action of the infinite cyclic group on the
  integers, with subsets given symbolically by their two tails plus a finite
  correction.
* :class:`LazyBall` is the globalization of a free-kind partial action on a
  finite carrier. Orbit finiteness is read off the carrier: a Schreier
  component of the carrier is a finite orbit exactly when every generator and
  inverse is defined on all of it; otherwise ``s^n`` produces infinitely many
  distinct classes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import count
from typing import Callable, Hashable, Iterable, Iterator

from networkx.utils import UnionFind

from fwreg.errors import (
    CommensurationFailed,
    InexpressibleSubset,
    InvalidCertificate,
    HypothesisViolated,
    NoWitnessWithinBound,
    NotCommensurated,
    PreconditionError,
    TransfixerFailed,
    TruncationInconclusive,
)
from fwreg.globalization import FiniteGSet, Globalization, globalize
from fwreg.groups import FiniteGroup, FreeGroup, Word
from fwreg.partial import PartialAction

Point = Hashable

# -- symbolic subsets of the integers ------------------------------------------

_BASES = {
    (False, False): "empty",
    (True, True): "all",
    (True, False): "nonneg",
    (False, True): "nonpos",
}
_TAILS = {v: k for k, v in _BASES.items()}


@dataclass(frozen=True)
class SymbolicZSet:
    """``base △ delta`` with base one of empty, all, nonneg (n >= 0), nonpos (n <= 0)."""

    base: str
    delta: frozenset = frozenset()

    def __post_init__(self):
        if self.base not in _TAILS:
            raise InexpressibleSubset(f"unknown base {self.base!r}")
        object.__setattr__(self, "delta", frozenset(int(n) for n in self.delta))

    @classmethod
    def finite(cls, elements: Iterable[int]) -> "SymbolicZSet":
        return cls("empty", frozenset(elements))

    @classmethod
    def from_tails(cls, pos: bool, neg: bool, member: Callable[[int], bool], lo: int, hi: int) -> "SymbolicZSet":
        """Canonical form of a set agreeing with its tails outside ``[lo, hi]``."""
        base = cls(_BASES[pos, neg])
        return cls(base.base, frozenset(n for n in range(lo, hi + 1) if member(n) != base.in_base(n)))

    @property
    def tails(self) -> tuple[bool, bool]:
        """Membership far to the right, far to the left."""
        return _TAILS[self.base]

    def in_base(self, n: int) -> bool:
        pos, neg = self.tails
        if n > 0:
            return pos
        if n < 0:
            return neg
        return pos or neg

    def __contains__(self, n: int) -> bool:
        return self.in_base(n) != (n in self.delta)

    def span(self) -> tuple[int, int]:
        """A window outside of which membership follows the tails."""
        lo = min(self.delta, default=0)
        hi = max(self.delta, default=0)
        return min(lo, 0) - 1, max(hi, 0) + 1

    def is_finite(self) -> bool:
        return self.tails == (False, False)

    def elements(self) -> list[int]:
        if not self.is_finite():
            raise InexpressibleSubset("set is infinite")
        return sorted(self.delta)

    def shift(self, k: int) -> "SymbolicZSet":
        lo, hi = self.span()
        pos, neg = self.tails
        return SymbolicZSet.from_tails(pos, neg, lambda n: (n - k) in self, lo + k - 1, hi + k + 1)

    def complement(self) -> "SymbolicZSet":
        lo, hi = self.span()
        pos, neg = self.tails
        return SymbolicZSet.from_tails(not pos, not neg, lambda n: n not in self, lo, hi)

    def symmetric_difference(self, other: "SymbolicZSet") -> "SymbolicZSet":
        lo = min(self.span()[0], other.span()[0])
        hi = max(self.span()[1], other.span()[1])
        pos = self.tails[0] != other.tails[0]
        neg = self.tails[1] != other.tails[1]
        return SymbolicZSet.from_tails(pos, neg, lambda n: (n in self) != (n in other), lo, hi)

    def difference(self, other: "SymbolicZSet") -> "SymbolicZSet":
        lo = min(self.span()[0], other.span()[0])
        hi = max(self.span()[1], other.span()[1])
        pos = self.tails[0] and not other.tails[0]
        neg = self.tails[1] and not other.tails[1]
        return SymbolicZSet.from_tails(pos, neg, lambda n: n in self and n not in other, lo, hi)

    def issubset(self, other: "SymbolicZSet") -> bool:
        d = self.difference(other)
        return d.is_finite() and not d.delta

    def describe(self) -> str:
        names = {"empty": "{}", "all": "Z", "nonneg": "Z>=0", "nonpos": "Z<=0"}
        if not self.delta:
            return names[self.base]
        return f"{names[self.base]} xor {{{','.join(map(str, sorted(self.delta)))}}}"


@dataclass(frozen=True)
class PeriodicZSet:
    """Eventually periodic set: residues mod ``period`` on each side of 0, then ``△ delta``.

    ``up`` governs ``n >= 0`` and ``down`` governs ``n < 0``.
    """

    period: int
    up: frozenset
    down: frozenset
    delta: frozenset = frozenset()

    def __post_init__(self):
        if self.period < 1:
            raise InexpressibleSubset("period must be positive")
        for name in ("up", "down", "delta"):
            object.__setattr__(self, name, frozenset(int(n) for n in getattr(self, name)))
        if not (self.up | self.down) <= set(range(self.period)):
            raise InexpressibleSubset("residues must lie in range(period)")

    def __contains__(self, n: int) -> bool:
        side = self.up if n >= 0 else self.down
        return ((n % self.period) in side) != (n in self.delta)

    def to_symbolic(self) -> SymbolicZSet | None:
        """Same set as a :class:`SymbolicZSet`, or None when a tail is not constant."""
        full = frozenset(range(self.period))
        if self.up not in (frozenset(), full) or self.down not in (frozenset(), full):
            return None
        lo = min(self.delta, default=0) - 1
        hi = max(self.delta, default=0) + 1
        return SymbolicZSet.from_tails(self.up == full, self.down == full, self.__contains__, lo, hi)

    def describe(self) -> str:
        return f"period={self.period} up={sorted(self.up)} down={sorted(self.down)} delta={sorted(self.delta)}"


ZSubset = SymbolicZSet | PeriodicZSet


def window_radius(X: ZSubset) -> int:
    """Brute-force window size: ``3 * (max |delta| + 1)``, times the period if any."""
    m = max((abs(n) for n in X.delta), default=0)
    return 3 * (m + 1) * getattr(X, "period", 1)


def window_commensurated(X: ZSubset, N: int | None = None) -> bool:
    """Windowed oracle: ``X ∖ (X+1)`` and ``X ∖ (X-1)`` stop growing between N and 2N."""
    N = window_radius(X) if N is None else N

    def boundary(M):
        return sum(1 for n in range(-M, M + 1) for k in (1, -1) if n in X and (n - k) not in X)

    return boundary(N) == boundary(2 * N)


def window_transfixed(X: ZSubset, N: int | None = None) -> tuple[bool, str | None]:
    """Windowed oracle: is X or its complement bounded? Returns the invariant set name."""
    N = window_radius(X) if N is None else N

    def sizes(M):
        inside = sum(1 for n in range(-M, M + 1) if n in X)
        return inside, 2 * M + 1 - inside

    (a1, b1), (a2, b2) = sizes(N), sizes(2 * N)
    if a1 == a2:
        return True, "empty"
    if b1 == b2:
        return True, "all"
    return False, None


# -- backends --------------------------------------------------------------------


class FiniteBackend:
    kind = "finite"
    radius = None

    def __init__(self, gset: FiniteGSet):
        self.gset = gset
        self.group = gset.group

    @classmethod
    def from_globalization(cls, glob: Globalization) -> "FiniteBackend":
        return cls(glob.as_gset())

    def check_subset(self, X) -> frozenset:
        X = frozenset(X)
        if not X <= set(self.gset.points):
            raise InexpressibleSubset("subset leaves the G-set")
        return X

    def orbits(self) -> list[frozenset]:
        return self.gset.orbits()

    def finite_orbits(self) -> list[frozenset]:
        return self.orbits()

    def act_set(self, g, S) -> frozenset:
        return self.gset.translate(g, S)

    def elements(self, bound: int | None) -> Iterator:
        G = self.group
        if isinstance(G, FiniteGroup):
            return iter(G.ball(bound))
        return iter(G.ball(bound if bound is not None else 0))

    def sorted(self, S) -> list:
        return list(self.gset.sorted(S))


class ZShift:
    """The infinite cyclic group ``<u>`` acting on the integers by ``u·n = n + 1``."""

    kind = "symbolic-z"
    radius = None

    def __init__(self, symbol: str = "u"):
        self.group = FreeGroup([symbol], kind="cyclic")
        self.symbol = symbol

    def check_subset(self, X):
        if isinstance(X, PeriodicZSet):
            return X
        if isinstance(X, SymbolicZSet):
            return X
        try:
            return SymbolicZSet.finite(X)
        except TypeError as exc:
            raise InexpressibleSubset(f"cannot read {X!r} as a subset of Z") from exc

    def offset(self, g: Word) -> int:
        return sum(e for _, e in g)

    def element_for(self, k: int) -> Word:
        return ((self.symbol, 1 if k > 0 else -1),) * abs(k)

    def act_set(self, g, S) -> frozenset:
        k = self.offset(g)
        return frozenset(n + k for n in S)

    def elements(self, bound: int) -> Iterator[Word]:
        return iter(self.group.ball(bound))

    def sorted(self, S) -> list:
        return sorted(S)


class LazyBall:
    """Globalization of a free-kind partial action on a finite carrier, explored to a radius."""

    kind = "lazy-ball"

    def __init__(self, action: PartialAction, radius: int = 3):
        if not isinstance(action.group, FreeGroup):
            raise PreconditionError("lazy-ball backend needs a free or cyclic group")
        self.action = action
        self.group = action.group
        self.radius = radius
        self.glob = globalize(action, radius)
        self._components = _schreier_components(action)

    def check_subset(self, X) -> frozenset:
        X = frozenset(X)
        carrier = set(self.action.carrier)
        if X <= carrier:
            return frozenset(self.glob.embed(x) for x in X)
        if X <= set(self.glob.points):
            return X
        raise InexpressibleSubset("subset is neither carrier points nor explored classes")

    def component_of(self, p) -> tuple[frozenset, bool]:
        """(carrier component of the orbit through ``p``, orbit is finite)."""
        return self._components[p.x]

    def finite_orbits(self) -> list[frozenset]:
        seen, out = set(), []
        for x in self.action.carrier:
            comp, closed = self._components[x]
            if closed and comp not in seen:
                seen.add(comp)
                out.append(frozenset(self.glob.embed(y) for y in comp))
        return out

    def act_set(self, g, S) -> frozenset:
        out = set()
        for p in S:
            q = self.glob.act(g, p)
            if q is None:
                raise TruncationInconclusive(
                    f"{self.group.format(g)} leaves the ball of radius {self.radius}"
                )
            out.add(q)
        return frozenset(out)

    def elements(self, bound: int) -> Iterator[Word]:
        return iter(self.group.ball(bound))

    def sorted(self, S) -> list:
        return list(self.glob.sorted(S))


def _schreier_components(a: PartialAction) -> dict:
    uf = UnionFind(a.carrier)
    closed_points = set()
    for s, f in a.assignment.items():
        for x, y in f.pairs:
            uf.union(x, y)
    for x in a.carrier:
        if all(x in f.domain and x in f.codomain for f in a.assignment.values()):
            closed_points.add(x)
    out = {}
    for comp in uf.to_sets():
        comp = frozenset(comp)
        closed = comp <= closed_points
        for x in comp:
            out[x] = (comp, closed)
    return out


Backend = FiniteBackend | ZShift | LazyBall


# -- commensuration ----------------------------------------------------------------


@dataclass
class CommensurationReport:
    verdict: bool
    counts: dict = field(default_factory=dict)  # generator letter -> |X △ sX|
    note: str = ""
    radius: int | None = None


def is_commensurated(E: Backend, X) -> CommensurationReport:
    X = E.check_subset(X)
    if isinstance(E, ZShift):
        if isinstance(X, PeriodicZSet):
            sym = X.to_symbolic()
            if sym is None:
                return CommensurationReport(False, note="a tail is periodic but not constant, so X minus X+1 is infinite")
            X = sym
        sizes = {}
        for k in (1, -1):
            d = X.symmetric_difference(X.shift(k))
            sizes[E.group.format(E.element_for(k))] = len(d.delta)
        return CommensurationReport(True, sizes, note="tails are constant")
    counts = {}
    for letter in E.group.letters:
        if letter[1] == -1:
            continue
        g = E.group.letter_element(letter)
        counts[letter[0]] = len(X ^ E.act_set(g, X))
    note = "finite G-set" if isinstance(E, FiniteBackend) else "generators suffice for a finitely generated group"
    return CommensurationReport(True, counts, note=note, radius=E.radius)


# -- transfixing -------------------------------------------------------------------


@dataclass
class TransfixCertificate:
    verdict: str  # transfixed | not-transfixed | inconclusive
    Y: object = None
    delta: object = None
    above: bool = False
    above_Y: object = None
    finely_above: bool = False
    strip: object = None  # L with X ∖ L finely transfixed above
    obstruction: str | None = None
    radius: int | None = None

    @property
    def transfixed(self) -> bool:
        return self.verdict == "transfixed"


def transfix(E: Backend, X) -> TransfixCertificate:
    X = E.check_subset(X)
    if isinstance(E, ZShift):
        return _transfix_z(E, X)
    if not is_commensurated(E, X).verdict:
        raise NotCommensurated("subset is not commensurated")
    if isinstance(E, FiniteBackend):
        orbits = [(O, True) for O in E.orbits()]
    else:
        orbits = _lazy_orbits(E, X)
    Y: set = set()
    above_Y: set | None = set()
    strip: set = set()
    for O, finite in orbits:
        inside = O & X
        if not finite:
            # an infinite orbit can never be added, only its trace on X removed
            if inside:
                above_Y = None
                strip |= inside
            continue
        if len(inside) > len(O - inside):
            Y |= O
        if inside and above_Y is not None:
            above_Y |= O
        if inside and inside != O:
            strip |= inside
    Y = frozenset(Y)
    return TransfixCertificate(
        verdict="transfixed",
        Y=Y,
        delta=frozenset(Y ^ X),
        above=above_Y is not None,
        above_Y=None if above_Y is None else frozenset(above_Y),
        finely_above=above_Y is not None and above_Y == X,
        strip=frozenset(strip),
        radius=E.radius,
    )


def _lazy_orbits(E: LazyBall, X: frozenset) -> list[tuple[frozenset, bool]]:
    """Finite orbits in full, plus the explored trace of each infinite orbit meeting X."""
    out = [(O, True) for O in E.finite_orbits()]
    seen = set()
    for p in E.sorted(X):
        comp, closed = E.component_of(p)
        if closed or comp in seen:
            continue
        seen.add(comp)
        trace = frozenset(q for q in X if q.x in comp)
        out.append((trace, False))
    return out


def _transfix_z(E: ZShift, X) -> TransfixCertificate:
    if isinstance(X, PeriodicZSet):
        sym = X.to_symbolic()
        if sym is None:
            raise NotCommensurated("periodic tail: X minus X+1 is infinite")
        X = sym
    pos, neg = X.tails
    if pos != neg:
        return TransfixCertificate(
            verdict="not-transfixed",
            obstruction="X differs from both invariant sets {} and Z by an infinite set",
        )
    Y = SymbolicZSet("all" if pos else "empty")
    delta = X.symmetric_difference(Y)
    above = pos or not X.delta
    return TransfixCertificate(
        verdict="transfixed",
        Y=Y,
        delta=frozenset(delta.delta),
        above=above,
        above_Y=(Y if pos else SymbolicZSet("empty")) if above else None,
        finely_above=above,
        strip=frozenset() if pos else frozenset(X.delta),
    )


# -- Neumann witness ---------------------------------------------------------------


@dataclass
class NeumannWitness:
    g: Word
    F: frozenset
    checked_bound: int | None
    tried: int

    def recheck(self, E: Backend) -> bool:
        return not (self.F & E.act_set(self.g, self.F))


def neumann_witness(E: Backend, F, bound: int = 8) -> NeumannWitness:
    """First g in length-lex order with ``F ∩ gF = ∅``."""
    if isinstance(E, ZShift):
        F = frozenset(int(n) for n in F)
        hits_finite = False
    else:
        F = E.check_subset(F)
        hits_finite = any(F & O for O in E.finite_orbits())
    if hits_finite:
        warnings.warn("F meets a finite orbit; a witness need not exist", HypothesisViolated, stacklevel=2)
    tried = 0
    for g in E.elements(bound):
        tried += 1
        if not (F & E.act_set(g, F)):
            return NeumannWitness(g, F, bound, tried)
    raise NoWitnessWithinBound(f"no g of length <= {bound} moves F off itself")


def neumann_cover(E: Backend, X, bound: int = 8) -> NeumannWitness:
    """Witness g with ``Ŷ = X ∪ gX`` where Ŷ is the invariant superset of X."""
    cert = transfix(E, X)
    if not cert.finely_above:
        raise PreconditionError("subset is not finely transfixed above")
    if isinstance(E, ZShift):
        X = E.check_subset(X)
        X = X.to_symbolic() if isinstance(X, PeriodicZSet) else X
        F = cert.above_Y.difference(X).elements()
    else:
        F = cert.above_Y - E.check_subset(X)
    return neumann_witness(E, F, bound)


# -- the partial-action / G-set dictionary ------------------------------------------


@dataclass
class DictionaryReport:
    rows: dict = field(default_factory=dict)  # notion -> (partial side, G-set side)

    @property
    def mismatches(self) -> list[str]:
        return [k for k, (a, b) in self.rows.items() if a != b]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def dictionary_check(a: PartialAction, glob: Globalization | None = None, radius: int = 3) -> DictionaryReport:
    """Compute each notion once from the partial action and once inside its globalization."""
    G = a.group
    if glob is None:
        glob = globalize(a, radius)
    if isinstance(G, FiniteGroup):
        E = FiniteBackend.from_globalization(glob.require_exact())
        X = glob.embedded()
        maps = [a.at(g) for g in G.elements]
    else:
        E = LazyBall(a, glob.radius)
        X = a.carrier
        maps = [a.evaluate(((s, e),)) for s in G.generators for e in (1, -1)]
    # partial side, read off the stored maps only
    missing = [len(set(a.carrier) - f.domain) for f in maps]
    # finite carrier: every gap X ∖ D_g is finite and Y = ∅ sits at finite distance
    cofinite = transfixed = True
    everything_total = not any(missing)
    # X̂ is finite for finite groups; for free groups iff every generator is total
    hat_minus_x_finite = isinstance(G, FiniteGroup) or everything_total
    report = DictionaryReport()
    cert = transfix(E, X)
    report.rows["commensurated"] = (cofinite, is_commensurated(E, X).verdict)
    report.rows["transfixed"] = (transfixed, cert.transfixed)
    report.rows["transfixed_above"] = (hat_minus_x_finite, cert.above)
    # X̂ ∖ X avoids finite orbits only when it is empty here: every orbit of X̂ is finite
    # for finite groups, and for free groups X̂ ∖ X is finite only when empty
    report.rows["finely_transfixed_above"] = (everything_total, cert.finely_above)
    return report


# -- transfixing strategies ------------------------------------------------------


class Transfixer:
    """Callable ``(backend, X) -> TransfixCertificate`` used by the regularization pipeline."""

    name = "abstract"

    def __call__(self, E: Backend, X) -> TransfixCertificate:
        raise NotImplementedError


class ExactTransfixer(Transfixer):
    name = "exact"

    def __call__(self, E, X):
        if isinstance(E, ZShift):
            raise TransfixerFailed("exact strategy needs a finite or explored backend")
        return transfix(E, X)


class SymbolicTransfixer(Transfixer):
    name = "symbolic"

    def __call__(self, E, X):
        if not isinstance(E, ZShift):
            raise TransfixerFailed("symbolic strategy only handles the shift on Z")
        return transfix(E, X)


class CertificateTransfixer(Transfixer):
    """Accept a user-supplied invariant set Y after checking it."""

    name = "cert"

    def __init__(self, Y):
        self.Y = Y

    def __call__(self, E, X):
        X = E.check_subset(X)
        if isinstance(E, ZShift):
            return self._z(E, X)
        Y = E.check_subset(self.Y)
        for letter in E.group.letters:
            g = E.group.letter_element(letter)
            for y in E.sorted(Y):
                moved = E.act_set(g, [y])
                if not moved <= Y:
                    raise InvalidCertificate(
                        f"{E.group.format(g)} moves {y} out of Y", witness=(E.group.format(g), y)
                    )
        finite_orbits = E.finite_orbits()
        if isinstance(E, LazyBall):
            covered = set().union(*finite_orbits) if finite_orbits else set()
            if not Y <= covered:
                raise InvalidCertificate("Y meets an infinite orbit, so Y △ X is infinite")
        strip = set(X - Y)
        for O in finite_orbits:
            if O <= Y and not O <= X:
                strip |= O & X
        above = Y >= X
        return TransfixCertificate(
            verdict="transfixed",
            Y=Y,
            delta=frozenset(Y ^ X),
            above=above,
            above_Y=Y if above else None,
            finely_above=above and Y == X,
            strip=frozenset(strip),
            radius=E.radius,
        )

    def _z(self, E: ZShift, X):
        Y = self.Y if isinstance(self.Y, SymbolicZSet) else SymbolicZSet.finite(self.Y)
        X = X.to_symbolic() if isinstance(X, PeriodicZSet) else X
        if X is None:
            raise NotCommensurated("periodic tail")
        u, u_inv = E.element_for(1), E.element_for(-1)
        for g, k in ((u, 1), (u_inv, -1)):
            moved_out = Y.difference(Y.shift(-k))  # y with y + k outside Y
            if moved_out.delta or not moved_out.is_finite():
                y = _first_member(moved_out)
                raise InvalidCertificate(
                    f"{E.group.format(g)} moves {y} out of Y", witness=(E.group.format(g), y)
                )
        d = X.symmetric_difference(Y)
        if not d.is_finite():
            raise InvalidCertificate("Y △ X is infinite", witness=("tails", Y.describe()))
        above = X.issubset(Y)
        return TransfixCertificate(
            verdict="transfixed",
            Y=Y,
            delta=frozenset(d.delta),
            above=above,
            above_Y=Y if above else None,
            finely_above=above,
            strip=frozenset(X.difference(Y).delta) if X.difference(Y).is_finite() else None,
        )


def _first_member(S: SymbolicZSet) -> int:
    # members closest to 0 first, positive before negative
    for k in count():
        for n in (k, -k) if k else (0,):
            if n in S:
                return n
    raise AssertionError("unreachable")


def property_fw_oracle(strategy: str, certificate=None) -> Transfixer:
    if strategy == "exact":
        return ExactTransfixer()
    if strategy == "symbolic":
        return SymbolicTransfixer()
    if strategy == "cert":
        if certificate is None:
            raise PreconditionError("cert strategy needs a set Y")
        return CertificateTransfixer(certificate)
    raise PreconditionError(f"unknown transfixing strategy {strategy!r}")
