"""Glued topology on the globalization and the dimension-descending pipeline.

The pipeline keeps a finite set J of group elements and a subset Z of the
carrier. At stage i it arranges that the points of dimension >= i of
``Y = ∪_{g∈J} g·Z`` form an invariant set, shrinking Z by the closure of a
finite strip L and doubling J by a Neumann element h when needed. The final
Y is an invariant dense open set of the globalization, and the core step then
extracts the part where every pair of points fits in one translate of the
carrier.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Mapping

from fwreg.commensuration import FiniteBackend, TransfixCertificate, Transfixer, neumann_witness, property_fw_oracle
from fwreg.core import CoreCertificate, noetherian_core, verify_core
from fwreg.errors import (
    CarrierMismatch,
    CommensurationFailed,
    DomainNotDense,
    NonHomeomorphicChart,
    NotIrreducible,
    TransfixerFailed,
)
from fwreg.globalization import FiniteGSet, Globalization, globalize
from fwreg.groups import FiniteGroup
from fwreg.partial import PartialAction, global_action
from fwreg.spaces import FiniteSpace

Point = Hashable


def _stored_maps(a: PartialAction) -> list:
    if isinstance(a.group, FiniteGroup):
        return [(g, a.at(g)) for g in a.group.elements]
    return [(((s, 1),), f) for s, f in a.assignment.items()]


def check_partial_homeomorphisms(a: PartialAction, S: FiniteSpace) -> None:
    if set(a.carrier) != set(S.points):
        raise CarrierMismatch("action carrier and space points differ")
    for g, f in _stored_maps(a):
        if not S.is_partial_homeomorphism(f.as_dict()):
            raise NonHomeomorphicChart(f"{a.group.format(g)} is not a homeomorphism between open sets")


@dataclass
class TopGlobalization:
    base: Globalization
    carrier_space: FiniteSpace
    space: FiniteSpace
    gset: FiniteGSet
    charts: dict  # group element -> {x: point of the globalization}
    dims: dict  # point -> dimension read in a chart
    embedded_open: bool
    embedded_dense: bool
    domains_dense: bool

    def sweep(self, J, Z) -> frozenset:
        """``∪_{g∈J} g·Z`` for a set Z of carrier points."""
        return frozenset(self.gset.act(g, self.base.embed(z)) for g in J for z in Z)

    def at_least(self, A, i: int) -> frozenset:
        return frozenset(p for p in A if self.dims[p] >= i)

    def layer(self, A, i: int) -> frozenset:
        return frozenset(p for p in A if self.dims[p] == i)


def glued_topology(glob: Globalization, S: FiniteSpace) -> TopGlobalization:
    """Specialization order generated by the translated copies of the carrier."""
    glob.require_exact()
    check_partial_homeomorphisms(glob.action, S)
    E = glob.as_gset()
    charts = {}
    for g, p in E.element_actions():
        charts[g] = {x: p[glob.embed(x)] for x in S.points}
    relation = {(c[x], c[y]) for c in charts.values() for x, y in S.relation()}
    space = FiniteSpace(glob.points, relation)
    dims: dict = {}
    for g, chart in charts.items():
        image = frozenset(chart.values())
        if not space.is_open(image):
            raise NonHomeomorphicChart(f"chart {glob.group.format(g)} is not open")
        for x in S.points:
            for y in S.points:
                if S.le(x, y) != space.le(chart[x], chart[y]):
                    raise NonHomeomorphicChart(f"chart {glob.group.format(g)} distorts the order at {x}, {y}")
        for x, p in chart.items():
            if dims.setdefault(p, S.dimension(x)) != S.dimension(x):
                raise NonHomeomorphicChart(f"charts disagree on the dimension of {glob.label(p)}")
    X = glob.embedded()
    domains_dense = all(S.is_dense(f.domain) for _, f in _stored_maps(glob.action))
    return TopGlobalization(
        base=glob,
        carrier_space=S,
        space=space,
        gset=E,
        charts=charts,
        dims=dims,
        embedded_open=space.is_open(X),
        embedded_dense=space.is_dense(X),
        domains_dense=domains_dense,
    )


@dataclass
class StageRecord:
    i: int
    J: tuple
    Z: frozenset
    Y: frozenset
    K: frozenset = frozenset()
    Y_i: frozenset = frozenset()
    L: frozenset = frozenset()
    L_closure: frozenset = frozenset()
    Z_next: frozenset = frozenset()
    Y_next: frozenset = frozenset()
    Y_next_i: frozenset = frozenset()
    F: frozenset = frozenset()
    h: object = None
    J_next: tuple = ()
    overlaps: dict = field(default_factory=dict)  # h -> |hK_i ∩ Y_i|
    transfix: TransfixCertificate | None = None
    invariant_ok: bool = True
    bound_ok: bool = True


def _layer_gset(top: TopGlobalization, i: int) -> FiniteGSet:
    E = top.gset
    layer = [p for p in E.points if top.dims[p] == i]
    maps = {s: {p: E.letter_map((s, 1))[p] for p in layer} for s in E.group.generators}
    return FiniteGSet(E.group, layer, maps)


def _sorted_elements(group, elements) -> tuple:
    return tuple(sorted(set(elements), key=group.sort_key))


def base_stage(top: TopGlobalization) -> StageRecord:
    d = top.carrier_space.dimension()
    J = (top.base.group.identity,)
    Z = frozenset(top.carrier_space.points)
    Y = top.sweep(J, Z)
    return StageRecord(
        i=d,
        J=J,
        Z=Z,
        Y=Y,
        K=top.space.complement(Y),
        Z_next=Z,
        Y_next=Y,
        J_next=J,
        invariant_ok=top.gset.is_invariant(top.at_least(Y, d)),
    )


def sepcore_stage(
    top: TopGlobalization, i: int, J: tuple, Z: frozenset, transfixer: Transfixer, bound: int = 8
) -> StageRecord:
    E = top.gset
    G = E.group
    d = top.carrier_space.dimension()
    Y = top.sweep(J, Z)
    K = top.space.complement(Y)
    # the side condition is read against the current piece Z, not the original X:
    # earlier strips remove points of X above dimension i from Y on purpose
    Z_hat = top.base.embedded(Z)
    K_i, Y_i = top.layer(K, i), top.layer(Y, i)
    overlaps = {}
    for h, p in E.element_actions():
        hK = frozenset(p[q] for q in K)
        if top.at_least(hK & Z_hat, i + 1):
            raise CommensurationFailed(f"{G.format(h)}K meets Z above dimension {i}")
        overlaps[G.format(h)] = len(frozenset(p[q] for q in K_i) & Y_i)
    backend = FiniteBackend(_layer_gset(top, i))
    cert = transfixer(backend, Y_i)
    L = frozenset(cert.strip or ())
    if not L <= Y_i:
        raise TransfixerFailed("strip leaves Y_i")
    L_closure = top.space.closure(L)
    Z_next = frozenset(z for z in Z if all(E.act(g, top.base.embed(z)) not in L_closure for g in J))
    Y_next = top.sweep(J, Z_next)
    Y_next_i = top.layer(Y_next, i)
    F = E.saturate(Y_next_i) - Y_next_i
    if F:
        h = neumann_witness(backend, F, bound).g
    else:
        h = G.identity
    J_next = _sorted_elements(G, list(J) + [G.mul(h, g) for g in J])
    return StageRecord(
        i=i,
        J=J,
        Z=Z,
        Y=Y,
        K=K,
        Y_i=Y_i,
        L=L,
        L_closure=L_closure,
        Z_next=Z_next,
        Y_next=Y_next,
        Y_next_i=Y_next_i,
        F=F,
        h=h,
        J_next=J_next,
        overlaps=overlaps,
        transfix=cert,
        invariant_ok=E.is_invariant(top.at_least(top.sweep(J_next, Z_next), i)),
        bound_ok=len(J_next) <= 2 ** (d - i),
    )


@dataclass
class RegularizationResult:
    top: TopGlobalization
    stages: list
    final_J: tuple
    final_Z: frozenset
    noetherian_open: frozenset
    core_space: FiniteSpace
    core_gset: FiniteGSet
    core_X: frozenset
    core: CoreCertificate
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def regularize(
    a: PartialAction,
    S: FiniteSpace,
    transfixer: Transfixer | Mapping[int, Transfixer] | str = "exact",
    bound: int = 8,
    radius: int = 3,
) -> RegularizationResult:
    irreducible, _ = S.is_irreducible()
    if not irreducible:
        raise NotIrreducible("the carrier space has no generic point")
    check_partial_homeomorphisms(a, S)
    for g, f in _stored_maps(a):
        if not S.is_dense(f.domain):
            raise DomainNotDense(f"domain of {a.group.format(g)} is not dense")
    if isinstance(transfixer, str):
        transfixer = property_fw_oracle(transfixer)
    top = glued_topology(globalize(a, radius), S)
    stages = [base_stage(top)]
    J, Z = stages[0].J_next, stages[0].Z_next
    for i in range(S.dimension() - 1, -1, -1):
        strategy = transfixer[i] if isinstance(transfixer, Mapping) else transfixer
        try:
            record = sepcore_stage(top, i, J, Z, strategy, bound)
        except TransfixerFailed as exc:
            exc.partial = stages
            raise
        stages.append(record)
        J, Z = record.J_next, record.Z_next
    Y = top.sweep(J, Z)
    E = top.gset
    sub = top.space.subspace(Y)
    checks = {
        "stage_invariants": all(r.invariant_ok for r in stages),
        "stage_bounds": all(r.bound_ok for r in stages),
        "noetherian_open_invariant": E.is_invariant(Y),
        "noetherian_open_open": top.space.is_open(Y),
        "noetherian_open_dense": top.space.is_dense(Y),
    }
    maps = {s: {p: E.letter_map((s, 1))[p] for p in sub.points} for s in E.group.generators}
    sub_gset = FiniteGSet(E.group, sub.points, maps)
    X_in = top.base.embedded() & Y
    core = noetherian_core(sub, sub_gset, X_in)
    checks["core"] = verify_core(sub, sub_gset, X_in, core).ok
    return RegularizationResult(
        top=top,
        stages=stages,
        final_J=J,
        final_Z=Z,
        noetherian_open=Y,
        core_space=sub,
        core_gset=sub_gset,
        core_X=X_in,
        core=core,
        checks=checks,
    )


def restricted_global_action(result: RegularizationResult) -> tuple[PartialAction, FiniteSpace]:
    """The global action on the core U, with U's subspace topology."""
    U = result.core.U
    space = result.top.space.subspace(U)
    E = result.top.gset
    return global_action(E.group, space.points, E.act), space


def check_idempotent(result: RegularizationResult, transfixer="exact") -> bool:
    """Regularizing the action on U again returns U."""
    a, space = restricted_global_action(result)
    again = regularize(a, space, transfixer)
    back = {again.top.base.embed(x): x for x in space.points}
    return frozenset(back.get(p) for p in again.core.U) == result.core.U
