"""Certificates: JSON records of one command run, and their replay verifier.

A certificate embeds the instance text, its SHA-256, the normalized
arguments and the result. ``verify`` re-derives every result field from the
instance: witnesses are checked for validity and length-lex minimality,
globalization classes are checked pairwise against the direct equivalence
``α(h⁻¹g)x = y``, and pipeline stages are replayed set operation by set
operation from the recorded J and Z.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from typing import Callable

from fwreg.commensuration import (
    FiniteBackend,
    LazyBall,
    PeriodicZSet,
    SymbolicZSet,
    ZShift,
    is_commensurated,
    neumann_witness,
    property_fw_oracle,
    window_commensurated,
    window_transfixed,
)
from fwreg.core import check_dense_open, noetherian_core
from fwreg.errors import FWRegError, HypothesisViolated, PreconditionError
from fwreg.globalization import FiniteGSet, globalize
from fwreg.groups import FiniteGroup
from fwreg.instance import Instance, parse, parse_transfixing_set
from fwreg.partial import validate
from fwreg.regularization import _layer_gset, check_idempotent, regularize

FORMAT = "fwreg-certificate/1"

_ARG_DEFAULTS = {
    "validate": {"bound": 3},
    "globalize": {"radius": 3},
    "commensurated": {"subset": None, "radius": 3},
    "transfix": {"subset": None, "radius": 3, "transfixer": None, "transfixer_set": None},
    "neumann": {"subset": None, "radius": 3, "bound": 8},
    "noetherian-core": {"subset": None},
    "regularize": {"transfixer": "exact", "bound": 8, "radius": 3},
}
COMMANDS = tuple(_ARG_DEFAULTS)


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def dumps(cert: dict) -> str:
    return json.dumps(cert, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def normalize_args(command: str, args: dict | None) -> dict:
    if command not in _ARG_DEFAULTS:
        raise PreconditionError(f"unknown command {command!r}")
    out = dict(_ARG_DEFAULTS[command])
    for k, v in (args or {}).items():
        if k not in out:
            raise PreconditionError(f"{command} takes no argument {k!r}")
        if v is not None:
            out[k] = v
    return out


def canonical_args(command: str, inst: Instance, args: dict) -> dict:
    """Blank out arguments the instance makes irrelevant, so every stored value matters."""
    out = dict(args)
    finite = inst.group is not None and isinstance(inst.group, FiniteGroup)
    if "radius" in out and (finite or inst.is_zshift()):
        out["radius"] = None
    if "bound" in out and finite:
        out["bound"] = None
    if command == "transfix":
        if out["transfixer"] is None:
            out["transfixer"] = "symbolic" if inst.is_zshift() else "exact"
        if out["transfixer"] != "cert":
            out["transfixer_set"] = None
    return out


def produce(command: str, instance_text: str, args: dict | None = None) -> dict:
    inst = parse(instance_text)
    args = canonical_args(command, inst, normalize_args(command, args))
    result = _RUNNERS[command](inst, args)
    return {
        "format": FORMAT,
        "command": command,
        "args": args,
        "instance_sha256": digest(instance_text),
        "instance": instance_text,
        "result": result,
    }


# -- naming points and group elements ------------------------------------------------


class Namer:
    """Labels for carrier tokens, globalization points, or integers."""

    def __init__(self, glob=None):
        self.glob = glob
        self._lookup = {glob.label(p): p for p in glob.points} if glob is not None else None

    def name(self, p) -> str | int:
        if self.glob is None:
            return p
        return self.glob.label(p)

    def names(self, S) -> list:
        if self.glob is None:
            return sorted(S)
        return [self.glob.label(p) for p in self.glob.sorted(S)]

    def point(self, label):
        if self.glob is None:
            return label
        try:
            return self._lookup[label]
        except KeyError:
            raise PreconditionError(f"unknown point label {label!r}") from None


def _zset_json(Z) -> dict:
    if isinstance(Z, SymbolicZSet):
        return {"base": Z.base, "delta": sorted(Z.delta)}
    return {"period": Z.period, "up": sorted(Z.up), "down": sorted(Z.down), "delta": sorted(Z.delta)}


def _context(inst: Instance, args: dict):
    """(backend, X as backend points, namer) for the subset commands."""
    X = inst.subset(args.get("subset"))
    if inst.is_zshift():
        if not isinstance(X, (SymbolicZSet, PeriodicZSet)):
            raise PreconditionError("shift instances take zset subsets")
        return ZShift(inst.group.generators[0]), X, Namer()
    if inst.group is None or not inst.points:
        raise PreconditionError("instance needs points and a group")
    if isinstance(X, (SymbolicZSet, PeriodicZSet)):
        raise PreconditionError("zsets need a shift instance")
    a = inst.action
    if isinstance(a.group, FiniteGroup):
        glob = globalize(a)
        return FiniteBackend(glob.as_gset()), frozenset(glob.embed(x) for x in X), Namer(glob)
    E = LazyBall(a, args["radius"])
    return E, E.check_subset(X), Namer(E.glob)


def _subset_json(X, namer: Namer):
    if isinstance(X, (SymbolicZSet, PeriodicZSet)):
        return _zset_json(X)
    return namer.names(X)


# -- runners -------------------------------------------------------------------------


def _run_validate(inst: Instance, args: dict) -> dict:
    a = inst.action
    G = a.group
    rep = validate(a, args["bound"])
    return {
        "ok": rep.ok,
        "bound": rep.bound,
        "pairs_checked": rep.pairs_checked,
        "violations": [
            {"axiom": v.axiom, "g": G.format(v.g), "h": G.format(v.h), "x": v.x} for v in rep.violations
        ],
    }


def _letter_name(letter) -> str:
    return letter[0] if letter[1] == 1 else f"{letter[0]}^-1"


def _run_globalize(inst: Instance, args: dict) -> dict:
    a = inst.action
    G = a.group
    report = validate(a, args["radius"])
    if not report.ok:
        v = report.violations[0]
        raise PreconditionError(f"not a partial action: {v.axiom} fails at {G.format(v.g)}, {G.format(v.h)}, {v.x}")
    glob = globalize(a, args["radius"])
    classes: dict = {p: [] for p in glob.points}
    for (g, x), p in glob._class_of.items():
        classes[p].append((g, x))
    cidx = a.carrier.index
    return {
        "radius": glob.radius,
        "exact": glob.exact,
        "points": [glob.label(p) for p in glob.points],
        "embedding": {x: glob.label(glob.embed(x)) for x in a.carrier},
        "classes": {
            glob.label(p): [
                [G.format(g), x] for g, x in sorted(members, key=lambda n: (G.sort_key(n[0]), cidx(n[1])))
            ]
            for p, members in classes.items()
        },
        "action": {
            _letter_name(l): {
                glob.label(p): (None if glob.act_letter(l, p) is None else glob.label(glob.act_letter(l, p)))
                for p in glob.points
            }
            for l in G.letters
        },
    }


def _run_commensurated(inst: Instance, args: dict) -> dict:
    E, X, namer = _context(inst, args)
    rep = is_commensurated(E, X)
    return {
        "backend": E.kind,
        "subset": _subset_json(X, namer),
        "verdict": rep.verdict,
        "counts": rep.counts,
        "note": rep.note,
        "radius": rep.radius,
    }


def _transfixer(args: dict):
    if args["transfixer"] == "cert":
        if args["transfixer_set"] is None:
            raise PreconditionError("cert strategy needs the set file")
        return property_fw_oracle("cert", parse_transfixing_set(args["transfixer_set"]))
    return property_fw_oracle(args["transfixer"])


def _cert_json(cert, namer: Namer) -> dict:
    def conv(S):
        if S is None:
            return None
        if isinstance(S, SymbolicZSet):
            return _zset_json(S)
        return namer.names(S)

    return {
        "verdict": cert.verdict,
        "Y": conv(cert.Y),
        "delta": None if cert.delta is None else (sorted(cert.delta) if namer.glob is None else namer.names(cert.delta)),
        "above": cert.above,
        "above_Y": conv(cert.above_Y),
        "finely_above": cert.finely_above,
        "strip": None if cert.strip is None else (sorted(cert.strip) if namer.glob is None else namer.names(cert.strip)),
        "obstruction": cert.obstruction,
        "radius": cert.radius,
    }


def _run_transfix(inst: Instance, args: dict) -> dict:
    E, X, namer = _context(inst, args)
    strategy = _transfixer(args)
    if isinstance(getattr(strategy, "Y", None), tuple):
        # labels name globalization points; shift instances have none
        strategy.Y = frozenset(namer.point(l) for l in strategy.Y)
    cert = strategy(E, X)
    out = _cert_json(cert, namer)
    out.update({"backend": E.kind, "strategy": strategy.name, "subset": _subset_json(X, namer)})
    return out


def _run_neumann(inst: Instance, args: dict) -> dict:
    E, X, namer = _context(inst, args)
    if isinstance(E, ZShift):
        Xs = X.to_symbolic() if isinstance(X, PeriodicZSet) else X
        if Xs is None or not Xs.is_finite():
            raise PreconditionError("F must be a finite set")
        F = frozenset(Xs.delta)
        violated = False
    else:
        F = X
        violated = any(F & O for O in E.finite_orbits())
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HypothesisViolated)
        w = neumann_witness(E, F, args["bound"])
    return {
        "backend": E.kind,
        "F": namer.names(F),
        "g": E.group.format(w.g),
        "bound": w.checked_bound,
        "tried": w.tried,
        "hypothesis_violated": violated,
        "radius": E.radius,
    }


def _global_gset(inst: Instance) -> FiniteGSet:
    a = inst.action
    if not isinstance(a.group, FiniteGroup):
        raise PreconditionError("the core step needs a finite group")
    return FiniteGSet.from_action(a)


def _core_json(space, gset, X, core, name: Callable, names: Callable) -> dict:
    G = gset.group
    return {
        "X": names(X),
        "U": names(core.U),
        "pair_witness": [[name(x), name(y), G.format(g)] for (x, y), g in core.pair_witness.items()],
        "movable": {name(x): names(U) for x, U in core.movable.items()},
        "K": names(core.K),
        "W": names(core.W),
        "U_prime": names(core.U_prime),
        "minimal_dense_open": names(core.minimal_dense_open),
    }


def _run_core(inst: Instance, args: dict) -> dict:
    gset = _global_gset(inst)
    space = inst.space
    X = inst.subset(args["subset"])
    core = noetherian_core(space, gset, X)
    return _core_json(space, gset, frozenset(X), core, lambda p: p, space.sorted)


def _run_regularize(inst: Instance, args: dict) -> dict:
    if inst.is_zshift():
        raise PreconditionError("the pipeline needs a finite carrier space")
    a = inst.action
    G = a.group
    res = regularize(a, inst.space, args["transfixer"], args["bound"], args["radius"])
    top = res.top
    glob = top.base
    namer = Namer(glob)
    names = namer.names

    def words(J):
        return [G.format(g) for g in J]

    stages = []
    for r in res.stages:
        stages.append(
            {
                "i": r.i,
                "J": words(r.J),
                "Z": inst.space.sorted(r.Z),
                "Y": names(r.Y),
                "K": names(r.K),
                "Y_i": names(r.Y_i),
                "L": names(r.L),
                "L_closure": names(r.L_closure),
                "Z_next": inst.space.sorted(r.Z_next),
                "Y_next": names(r.Y_next),
                "Y_next_i": names(r.Y_next_i),
                "F": names(r.F),
                "h": None if r.h is None else G.format(r.h),
                "J_next": words(r.J_next),
                "overlaps": r.overlaps,
                "transfix": None if r.transfix is None else _cert_json(r.transfix, namer),
                "invariant_ok": r.invariant_ok,
                "bound_ok": r.bound_ok,
            }
        )
    space = top.space
    return {
        "globalization": {
            "points": [glob.label(p) for p in glob.points],
            "order": sorted(
                [glob.label(x), glob.label(y)] for x, y in space.relation() if x != y
            ),
            "dims": {glob.label(p): d for p, d in top.dims.items()},
            "embedded_open": top.embedded_open,
            "embedded_dense": top.embedded_dense,
            "domains_dense": top.domains_dense,
        },
        "stages": stages,
        "final_J": words(res.final_J),
        "final_Z": inst.space.sorted(res.final_Z),
        "noetherian_open": names(res.noetherian_open),
        "core": _core_json(res.core_space, res.core_gset, res.core_X, res.core, namer.name, names),
        "checks": res.checks,
        "idempotent": check_idempotent(res, args["transfixer"]),
    }


_RUNNERS = {
    "validate": _run_validate,
    "globalize": _run_globalize,
    "commensurated": _run_commensurated,
    "transfix": _run_transfix,
    "neumann": _run_neumann,
    "noetherian-core": _run_core,
    "regularize": _run_regularize,
}


# -- verification ----------------------------------------------------------------------


def verify(cert: dict) -> list[str]:
    """Problems found in a certificate; empty means accepted."""
    problems: list[str] = []
    try:
        _verify(cert, problems)
    except FWRegError as exc:
        problems.append(f"replay failed: {exc}")
    except (KeyError, TypeError, ValueError, AttributeError, IndexError) as exc:
        problems.append(f"malformed certificate: {type(exc).__name__}: {exc}")
    return problems


def _verify(cert: dict, problems: list[str]) -> None:
    if not isinstance(cert, dict) or set(cert) != {"format", "command", "args", "instance_sha256", "instance", "result"}:
        problems.append("certificate fields are not the expected set")
        return
    if cert["format"] != FORMAT:
        problems.append(f"unknown format {cert['format']!r}")
        return
    command = cert["command"]
    if command not in _VERIFIERS:
        problems.append(f"unknown command {command!r}")
        return
    text = cert["instance"]
    if digest(text) != cert["instance_sha256"]:
        problems.append("instance digest does not match the embedded instance")
        return
    args = cert["args"]
    if not isinstance(args, dict) or set(args) != set(_ARG_DEFAULTS[command]):
        problems.append("argument names do not match the command")
        return
    inst = parse(text)
    if _plain(canonical_args(command, inst, args)) != _plain(args):
        problems.append("arguments are not in canonical form for this instance")
        return
    result = cert["result"]
    _VERIFIERS[command](inst, args, result, problems)


def _plain(value):
    # tuples and lists compare equal once both sides are JSON values
    return json.loads(json.dumps(value))


def _expect(problems: list[str], what: str, claimed, actual) -> None:
    if _plain(claimed) != _plain(actual):
        problems.append(f"{what}: certificate says {claimed!r}, instance gives {actual!r}")


def _same_keys(problems, result: dict, keys: set) -> bool:
    if not isinstance(result, dict) or set(result) != keys:
        problems.append("result fields are not the expected set")
        return False
    return True


def _verify_validate(inst, args, result, problems):
    if not _same_keys(problems, result, {"ok", "bound", "pairs_checked", "violations"}):
        return
    a = inst.action
    G = a.group
    finite = isinstance(G, FiniteGroup)
    _expect(problems, "bound", result["bound"], args["bound"])
    n = len(G.elements) if finite else len(G.ball(args["bound"]))
    _expect(problems, "pairs_checked", result["pairs_checked"], n * n)
    # every listed violation must be a real one
    for v in result["violations"]:
        g, h, x = G.element(v["g"]), G.element(v["h"]), v["x"]
        if v["axiom"] == "identity":
            real = a.at(G.identity).get(x) != x
        elif v["axiom"] == "inverse":
            undo = {y: z for z, y in a.at(g).pairs}
            real = h == G.inv(g) and a.at(h).get(x) != undo.get(x)
        elif v["axiom"] == "containment":
            y = a.at(h).get(x)
            z = None if y is None else a.at(g).get(y)
            real = z is not None and a.at(G.mul(g, h)).get(x) != z
        else:
            real = False
        if not real:
            problems.append(f"listed violation {v} does not hold")
    fresh = _run_validate(inst, args)
    _expect(problems, "violations", result["violations"], fresh["violations"])
    _expect(problems, "ok", result["ok"], not result["violations"])


def _verify_globalize(inst, args, result, problems):
    if not _same_keys(problems, result, {"radius", "exact", "points", "embedding", "classes", "action"}):
        return
    a = inst.action
    G = a.group
    finite = isinstance(G, FiniteGroup)
    radius = None if finite else args["radius"]
    _expect(problems, "radius", result["radius"], radius)
    ball = G.ball(radius)
    nodes = {(g, x) for g in ball for x in a.carrier}
    cidx = a.carrier.index

    def key(node):
        return (G.sort_key(node[0]), cidx(node[1]))

    def label(node):
        g, x = node
        return x if g == G.identity else f"{G.format(g)}@{x}"

    class_of = {}
    for lab, members in result["classes"].items():
        mem = [(G.element(w), x) for w, x in members]
        if not mem:
            problems.append(f"class {lab} is empty")
            continue
        if mem != sorted(mem, key=key) or label(mem[0]) != lab:
            problems.append(f"class {lab} is not named by its least member")
        g0, x0 = mem[0]
        for g, x in mem:
            if (g, x) in class_of:
                problems.append(f"node {label((g, x))} listed twice")
            class_of[g, x] = lab
            # direct equivalence: α(h⁻¹g)x = y
            if a.at(G.mul(G.inv(g0), g)).get(x) != x0:
                problems.append(f"{label((g, x))} is not equivalent to {lab}")
    if set(class_of) != nodes:
        problems.append("classes do not partition the explored nodes")
        return
    for g in ball:
        for h in ball:
            f = a.at(G.mul(G.inv(h), g))
            for x, y in f.pairs:
                if class_of[g, x] != class_of[h, y]:
                    problems.append(f"equivalent nodes {label((g, x))} and {label((h, y))} are split")
                    return
    reps = {lab: (G.element(m[0][0]), m[0][1]) for lab, m in result["classes"].items()}
    _expect(problems, "points", result["points"], sorted(reps, key=lambda l: key(reps[l])))
    _expect(problems, "embedding", result["embedding"], {x: class_of[G.identity, x] for x in a.carrier})
    in_ball = set(ball)
    table = {}
    for l in G.letters:
        row = {}
        for lab, (w, x) in reps.items():
            sw = G.mul(G.letter_element(l), w)
            row[lab] = class_of[sw, x] if sw in in_ball else None
        table[_letter_name(l)] = row
    _expect(problems, "action", result["action"], table)
    exact = finite or all(v is not None for row in table.values() for v in row.values())
    _expect(problems, "exact", result["exact"], exact)


def _verify_commensurated(inst, args, result, problems):
    if not _same_keys(problems, result, {"backend", "subset", "verdict", "counts", "note", "radius"}):
        return
    E, X, namer = _context(inst, args)
    _expect(problems, "backend", result["backend"], E.kind)
    _expect(problems, "subset", result["subset"], _subset_json(X, namer))
    if isinstance(E, ZShift):
        _expect(problems, "verdict against the windowed oracle", result["verdict"], window_commensurated(X))
    else:
        counts = {}
        for s in E.group.generators:
            g = E.group.letter_element((s, 1))
            counts[s] = len(X ^ E.act_set(g, X))
        _expect(problems, "counts", result["counts"], counts)
        _expect(problems, "verdict", result["verdict"], True)
    fresh = _run_commensurated(inst, args)
    for k in ("verdict", "counts", "note", "radius"):
        _expect(problems, k, result[k], fresh[k])


def _verify_transfix(inst, args, result, problems):
    keys = {"backend", "strategy", "subset", "verdict", "Y", "delta", "above", "above_Y", "finely_above", "strip", "obstruction", "radius"}
    if not _same_keys(problems, result, keys):
        return
    E, X, namer = _context(inst, args)
    if result["verdict"] == "transfixed" and not isinstance(E, ZShift):
        Y = frozenset(namer.point(l) for l in result["Y"])
        for l in E.group.letters:
            if not E.act_set(E.group.letter_element(l), Y) <= Y:
                problems.append(f"Y is not invariant under {_letter_name(l)}")
        _expect(problems, "delta", result["delta"], namer.names(Y ^ X))
    if isinstance(E, ZShift):
        ok, _ = window_transfixed(X)
        _expect(problems, "verdict against the windowed oracle", result["verdict"] == "transfixed", ok)
    fresh = _run_transfix(inst, args)
    for k in sorted(keys):
        _expect(problems, k, result[k], fresh[k])


def _verify_neumann(inst, args, result, problems):
    keys = {"backend", "F", "g", "bound", "tried", "hypothesis_violated", "radius"}
    if not _same_keys(problems, result, keys):
        return
    E, X, namer = _context(inst, args)
    _expect(problems, "backend", result["backend"], E.kind)
    _expect(problems, "bound", result["bound"], args["bound"])
    _expect(problems, "radius", result["radius"], E.radius)
    if isinstance(E, ZShift):
        Xs = X.to_symbolic() if isinstance(X, PeriodicZSet) else X
        F = frozenset(Xs.delta)
        violated = False
    else:
        F = X
        violated = any(F & O for O in E.finite_orbits())
    _expect(problems, "F", result["F"], namer.names(F))
    _expect(problems, "hypothesis_violated", result["hypothesis_violated"], violated)
    g = E.group.element(result["g"])
    if args["bound"] is not None and E.group.length(g) > args["bound"]:
        problems.append("witness is longer than the bound")
    if F & E.act_set(g, F):
        problems.append("witness does not move F off itself")
    earlier = 0
    for h in E.elements(args["bound"]):
        if h == g:
            break
        earlier += 1
        if not (F & E.act_set(h, F)):
            problems.append(f"{E.group.format(h)} is an earlier witness")
            break
    _expect(problems, "tried", result["tried"], earlier + 1)


def _check_core(space, gset, X, claimed, name, problems, prefix=""):
    """Re-derive a core record from the definitions, without the library routine."""
    G = gset.group
    label = {name(p): p for p in space.points}
    elements = list(G.iter_elements()) if isinstance(G, FiniteGroup) else [g for g, _ in gset.element_actions()]

    def names(S):
        return [name(p) for p in space.sorted(S)]

    _expect(problems, prefix + "X", claimed["X"], names(X))
    movable = {}
    for x in space.points:
        U = set()
        for g in elements:
            if gset.act(g, x) in X:
                U |= {y for y in space.points if gset.act(g, y) in X}
        movable[x] = frozenset(U)
    _expect(problems, prefix + "movable", claimed["movable"], {name(x): names(U) for x, U in movable.items()})
    V = frozenset(x for x in space.points if all(space.le(y, x) for y in space.points if space.le(x, y)))
    _expect(problems, prefix + "minimal_dense_open", claimed["minimal_dense_open"], names(V))
    K = space.closure(set().union(*(set(space.points) - movable[x] for x in V)) if V else set())
    _expect(problems, prefix + "K", claimed["K"], names(K))
    W = frozenset(space.points) - K
    _expect(problems, prefix + "W", claimed["W"], names(W))
    common = frozenset(space.points)
    for y in W:
        common &= movable[y]
    U_prime = frozenset(x for x in common if space.above(x) <= common)
    _expect(problems, prefix + "U_prime", claimed["U_prime"], names(U_prime))
    U = U_prime & W
    _expect(problems, prefix + "U", claimed["U"], names(U))
    if not (space.is_open(U) and space.is_dense(U) and gset.is_invariant(U)):
        problems.append(prefix + "U is not an invariant dense open set")
    expected_pairs = [[name(x), name(y)] for x in space.sorted(U) for y in space.sorted(U)]
    _expect(problems, prefix + "pair list", [row[:2] for row in claimed["pair_witness"]], expected_pairs)
    for xl, yl, gw in claimed["pair_witness"]:
        x, y = label[xl], label[yl]
        g = G.element(gw)
        if not (gset.act(g, x) in X and gset.act(g, y) in X):
            problems.append(f"{prefix}witness {gw} does not move ({xl}, {yl}) into X")
            continue
        first = next(h for h in elements if gset.act(h, x) in X and gset.act(h, y) in X)
        if first != g:
            problems.append(f"{prefix}witness {gw} for ({xl}, {yl}) is not the first in order")


def _verify_core(inst, args, result, problems):
    keys = {"X", "U", "pair_witness", "movable", "K", "W", "U_prime", "minimal_dense_open"}
    if not _same_keys(problems, result, keys):
        return
    gset = _global_gset(inst)
    space = inst.space
    X = check_dense_open(space, inst.subset(args["subset"]))
    _check_core(space, gset, X, result, lambda p: p, problems)


def _verify_regularize(inst, args, result, problems):
    keys = {"globalization", "stages", "final_J", "final_Z", "noetherian_open", "core", "checks", "idempotent"}
    if not _same_keys(problems, result, keys):
        return
    from fwreg.regularization import glued_topology

    a = inst.action
    G = a.group
    S = inst.space
    top = glued_topology(globalize(a, args["radius"]), S)
    glob = top.base
    namer = Namer(glob)
    names, pt = namer.names, namer.point
    gl = result["globalization"]
    _expect(problems, "points", gl["points"], [glob.label(p) for p in glob.points])
    order = sorted([glob.label(x), glob.label(y)] for x, y in top.space.relation() if x != y)
    _expect(problems, "order", gl["order"], order)
    _expect(problems, "dims", gl["dims"], {glob.label(p): d for p, d in top.dims.items()})
    for k in ("embedded_open", "embedded_dense", "domains_dense"):
        _expect(problems, k, gl[k], getattr(top, k))
    E = top.gset
    d = S.dimension()
    X = glob.embedded()
    strategy = property_fw_oracle(args["transfixer"])
    J = (G.identity,)
    Z = frozenset(S.points)
    stages = result["stages"]
    if [s["i"] for s in stages] != list(range(d, -1, -1)):
        problems.append("stages do not run from the top dimension down to 0")
        return
    for n, st in enumerate(stages):
        i = st["i"]
        where = f"stage {i}: "
        _expect(problems, where + "J", st["J"], [G.format(g) for g in J])
        _expect(problems, where + "Z", st["Z"], S.sorted(Z))
        Y = top.sweep(J, Z)
        K = top.space.complement(Y)
        _expect(problems, where + "Y", st["Y"], names(Y))
        _expect(problems, where + "K", st["K"], names(K))
        if n == 0:
            for k, v in (("Y_i", []), ("L", []), ("L_closure", []), ("Y_next_i", []), ("F", []), ("h", None), ("overlaps", {}), ("transfix", None)):
                _expect(problems, where + k, st[k], v)
            _expect(problems, where + "Z_next", st["Z_next"], S.sorted(Z))
            _expect(problems, where + "Y_next", st["Y_next"], names(Y))
            _expect(problems, where + "J_next", st["J_next"], [G.format(g) for g in J])
            _expect(problems, where + "invariant_ok", st["invariant_ok"], E.is_invariant(top.at_least(Y, d)))
            _expect(problems, where + "bound_ok", st["bound_ok"], True)
            continue
        Y_i = top.layer(Y, i)
        _expect(problems, where + "Y_i", st["Y_i"], names(Y_i))
        overlaps = {}
        for h in G.iter_elements() if isinstance(G, FiniteGroup) else [g for g, _ in E.element_actions()]:
            hK = E.translate(h, K)
            if top.at_least(hK & glob.embedded(Z), i + 1):
                problems.append(where + f"{G.format(h)}K meets Z above dimension {i}")
            overlaps.setdefault(G.format(h), len(E.translate(h, top.layer(K, i)) & Y_i))
        _expect(problems, where + "overlaps", st["overlaps"], overlaps)
        L = frozenset(pt(l) for l in st["L"])
        layer = _layer_gset(top, i)
        rest = Y_i - L
        if not layer.is_invariant(rest):
            problems.append(where + "Y_i minus L is not finely transfixed above")
        cert = strategy(FiniteBackend(layer), Y_i)
        _expect(problems, where + "transfix", st["transfix"], _cert_json(cert, namer))
        _expect(problems, where + "L", st["L"], names(cert.strip))
        L_closure = top.space.closure(L)
        _expect(problems, where + "L_closure", st["L_closure"], names(L_closure))
        Z_next = frozenset(z for z in Z if all(E.act(g, glob.embed(z)) not in L_closure for g in J))
        _expect(problems, where + "Z_next", st["Z_next"], S.sorted(Z_next))
        Y_next = top.sweep(J, Z_next)
        _expect(problems, where + "Y_next", st["Y_next"], names(Y_next))
        Y_next_i = top.layer(Y_next, i)
        _expect(problems, where + "Y_next_i", st["Y_next_i"], names(Y_next_i))
        F = E.saturate(Y_next_i) - Y_next_i
        _expect(problems, where + "F", st["F"], names(F))
        h = G.element(st["h"])
        if not F:
            _expect(problems, where + "h", st["h"], G.format(G.identity))
        else:
            if F & E.translate(h, F):
                problems.append(where + "h does not move F off itself")
            for k in G.ball(G.length(h)):
                if G.sort_key(k) >= G.sort_key(h):
                    break
                if not (F & E.translate(k, F)):
                    problems.append(where + f"{G.format(k)} is an earlier Neumann element")
                    break
        J_next = tuple(sorted(set(J) | {G.mul(h, g) for g in J}, key=G.sort_key))
        _expect(problems, where + "J_next", st["J_next"], [G.format(g) for g in J_next])
        _expect(problems, where + "invariant_ok", st["invariant_ok"], E.is_invariant(top.at_least(top.sweep(J_next, Z_next), i)))
        _expect(problems, where + "bound_ok", st["bound_ok"], len(J_next) <= 2 ** (d - i))
        J, Z = J_next, Z_next
    _expect(problems, "final_J", result["final_J"], [G.format(g) for g in J])
    _expect(problems, "final_Z", result["final_Z"], S.sorted(Z))
    Yfin = top.sweep(J, Z)
    _expect(problems, "noetherian_open", result["noetherian_open"], names(Yfin))
    sub = top.space.subspace(Yfin)
    maps = {s: {p: E.letter_map((s, 1))[p] for p in sub.points} for s in G.generators}
    sub_gset = FiniteGSet(G, sub.points, maps)
    X_in = X & Yfin
    _check_core(sub, sub_gset, X_in, result["core"], glob.label, problems, prefix="core ")
    checks = {
        "stage_invariants": all(s["invariant_ok"] for s in stages),
        "stage_bounds": all(s["bound_ok"] for s in stages),
        "noetherian_open_invariant": E.is_invariant(Yfin),
        "noetherian_open_open": top.space.is_open(Yfin),
        "noetherian_open_dense": top.space.is_dense(Yfin),
        "core": not any(p.startswith("core ") for p in problems),
    }
    _expect(problems, "checks", result["checks"], checks)
    fresh = _run_regularize(inst, args)
    _expect(problems, "idempotent", result["idempotent"], fresh["idempotent"])


_VERIFIERS = {
    "validate": _verify_validate,
    "globalize": _verify_globalize,
    "commensurated": _verify_commensurated,
    "transfix": _verify_transfix,
    "neumann": _verify_neumann,
    "noetherian-core": _verify_core,
    "regularize": _verify_regularize,
}
