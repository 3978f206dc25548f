"""Line-oriented instance files.

::

    # comment
    points eta c0 c1
    le c0 eta
    group finite e s          (or: group free s t / group cyclic u)
    mul e s s                 (finite only: e*s = s)
    generators s              (finite only, optional)
    map s: c1 -> c1
    map e:                    (declares an empty partial bijection)
    subset X: eta c1
    zset N base=nonneg delta=0,3
    zset EV period=2 up=0 down=0 delta=

The serializer writes the canonical form, which parses back to itself byte
for byte. Comments and blank lines are not kept.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from fwreg.commensuration import PeriodicZSet, SymbolicZSet, ZSubset
from fwreg.errors import FWRegError, ParseError
from fwreg.groups import FiniteGroup, FreeGroup, GroupHandle, element_of
from fwreg.partial import Carrier, PartialAction
from fwreg.spaces import FiniteSpace

_TOKEN = re.compile(r"[^\s:#@,]+\Z")


@dataclass
class Instance:
    points: tuple = ()
    relations: tuple = ()
    group: GroupHandle | None = None
    maps: dict = field(default_factory=dict)  # symbol or element -> list of (a, b)
    subsets: dict = field(default_factory=dict)  # name -> tuple of points
    zsets: dict = field(default_factory=dict)  # name -> ZSubset

    @property
    def space(self) -> FiniteSpace:
        return FiniteSpace(self.points, self.relations)

    @property
    def carrier(self) -> Carrier:
        return Carrier(self.points)

    @property
    def action(self) -> PartialAction:
        if self.group is None:
            raise FWRegError("instance declares no group")
        return PartialAction(self.group, self.carrier, {k: v for k, v in self.maps.items()})

    def subset(self, name: str | None = None):
        """A named subset or zset; default is the first declared, else the whole carrier."""
        if name is None:
            if self.subsets:
                return next(iter(self.subsets.values()))
            if self.zsets:
                return next(iter(self.zsets.values()))
            return tuple(self.points)
        if name in self.subsets:
            return self.subsets[name]
        if name in self.zsets:
            return self.zsets[name]
        raise FWRegError(f"no subset named {name!r}")

    def is_zshift(self) -> bool:
        return bool(self.zsets) and not self.points


def _ints(text: str, line: int, col: int) -> frozenset:
    if not text:
        return frozenset()
    try:
        return frozenset(int(t) for t in text.split(","))
    except ValueError:
        raise ParseError(f"bad integer list {text!r}", line, col) from None


def parse(text: str) -> Instance:
    inst = Instance()
    points: list = []
    point_set: set = set()
    relations: list = []
    group_decl = None
    mul_lines: list = []
    generators = None
    maps: dict = {}
    map_lines: list = []

    def check_point(tok, line, col):
        if tok not in point_set:
            raise ParseError(f"unknown point {tok!r}", line, col)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        words = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", body)]
        head, hcol = words[0]
        args = words[1:]
        if head == "points":
            for tok, col in args:
                if not _TOKEN.match(tok):
                    raise ParseError(f"bad point token {tok!r}", lineno, col)
                if tok in point_set:
                    raise ParseError(f"duplicate point {tok!r}", lineno, col)
                points.append(tok)
                point_set.add(tok)
        elif head == "le":
            if len(args) != 2:
                raise ParseError("le needs two points", lineno, hcol)
            for tok, col in args:
                check_point(tok, lineno, col)
            relations.append((args[0][0], args[1][0]))
        elif head == "group":
            if group_decl is not None:
                raise ParseError("group declared twice", lineno, hcol)
            if not args or args[0][0] not in ("free", "cyclic", "finite"):
                raise ParseError("group kind must be free, cyclic or finite", lineno, hcol)
            group_decl = (args[0][0], [t for t, _ in args[1:]], lineno)
        elif head == "mul":
            if len(args) != 3:
                raise ParseError("mul needs three elements", lineno, hcol)
            mul_lines.append((tuple(t for t, _ in args), lineno))
        elif head == "generators":
            generators = [t for t, _ in args]
        elif head == "map":
            m = re.match(r"\s*map\s+([^:\s]+)\s*:(.*)\Z", body)
            if not m:
                raise ParseError("expected 'map g: a -> b'", lineno, hcol)
            key, rest = m.group(1), m.group(2).strip()
            pairs = maps.setdefault(key, [])
            if rest:
                pm = re.match(r"(\S+)\s*->\s*(\S+)\Z", rest)
                if not pm:
                    raise ParseError("expected 'a -> b'", lineno, body.index(":") + 2)
                a, b = pm.group(1), pm.group(2)
                check_point(a, lineno, body.index(a, body.index(":")) + 1)
                check_point(b, lineno, body.rindex(b) + 1)
                pairs.append((a, b))
            map_lines.append((key, lineno))
        elif head == "subset":
            m = re.match(r"\s*subset\s+([^:\s]+)\s*:(.*)\Z", body)
            if not m:
                raise ParseError("expected 'subset NAME: points'", lineno, hcol)
            name = m.group(1)
            if name in inst.subsets or name in inst.zsets:
                raise ParseError(f"duplicate subset name {name!r}", lineno, hcol)
            toks = m.group(2).split()
            for tok in toks:
                check_point(tok, lineno, body.index(tok, body.index(":")) + 1)
            inst.subsets[name] = tuple(toks)
        elif head == "zset":
            if not args:
                raise ParseError("zset needs a name", lineno, hcol)
            name = args[0][0]
            if name in inst.subsets or name in inst.zsets:
                raise ParseError(f"duplicate subset name {name!r}", lineno, hcol)
            fields = {}
            for tok, col in args[1:]:
                if "=" not in tok:
                    raise ParseError(f"expected key=value, got {tok!r}", lineno, col)
                k, v = tok.split("=", 1)
                fields[k] = (v, col)
            try:
                if "base" in fields:
                    if set(fields) - {"base", "delta"}:
                        raise ParseError("base zsets take base= and delta= only", lineno, hcol)
                    inst.zsets[name] = SymbolicZSet(fields["base"][0], _ints(fields.get("delta", ("", 0))[0], lineno, hcol))
                elif "period" in fields:
                    if set(fields) - {"period", "up", "down", "delta"}:
                        raise ParseError("periodic zsets take period=, up=, down=, delta=", lineno, hcol)
                    inst.zsets[name] = PeriodicZSet(
                        int(fields["period"][0]),
                        _ints(fields.get("up", ("", 0))[0], lineno, hcol),
                        _ints(fields.get("down", ("", 0))[0], lineno, hcol),
                        _ints(fields.get("delta", ("", 0))[0], lineno, hcol),
                    )
                else:
                    raise ParseError("zset needs base= or period=", lineno, hcol)
            except ValueError as exc:
                raise ParseError(str(exc), lineno, hcol) from None
            except FWRegError as exc:
                if isinstance(exc, ParseError):
                    raise
                raise ParseError(str(exc), lineno, hcol) from None
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, hcol)

    inst.points = tuple(points)
    index = {p: i for i, p in enumerate(points)}
    inst.relations = tuple(sorted(set(relations), key=lambda r: (index[r[0]], index[r[1]])))
    if group_decl is not None:
        kind, syms, gline = group_decl
        try:
            if kind == "finite":
                table = {}
                for (a, b, c), ln in mul_lines:
                    if (a, b) in table:
                        raise ParseError(f"product {a}*{b} given twice", ln, 1)
                    table[a, b] = c
                inst.group = FiniteGroup(syms, table, generators=generators)
            else:
                if mul_lines or generators is not None:
                    raise ParseError("mul/generators lines need a finite group", gline, 1)
                inst.group = FreeGroup(syms, kind=kind)
        except ParseError:
            raise
        except FWRegError as exc:
            raise ParseError(str(exc), gline, 1) from None
        normalized = {}
        for key, ln in map_lines:
            try:
                k = element_of(inst.group, key) if isinstance(inst.group, FiniteGroup) else key
            except FWRegError:
                raise ParseError(f"unknown group symbol {key!r}", ln, 5) from None
            if isinstance(inst.group, FreeGroup) and k not in inst.group.generators:
                raise ParseError(f"maps of free groups are given per generator, not {key!r}", ln, 5)
            normalized.setdefault(k, [])
            for pair in maps[key]:
                if pair not in normalized[k]:
                    normalized[k].append(pair)
        keys = inst.group.generators if isinstance(inst.group, FreeGroup) else inst.group.elements
        for k in keys:
            normalized.setdefault(k, [])
        inst.maps = {k: sorted(normalized[k], key=lambda pr: index[pr[0]]) for k in keys}
        if points:
            try:
                inst.action
            except FWRegError as exc:
                raise ParseError(str(exc), gline, 1) from None
    elif map_lines:
        raise ParseError("map lines need a group", map_lines[0][1], 1)
    inst.subsets = {
        name: tuple(sorted(set(toks), key=index.__getitem__)) for name, toks in inst.subsets.items()
    }
    return inst


def _int_list(values) -> str:
    return ",".join(map(str, sorted(values)))


def serialize(inst: Instance) -> str:
    lines = []
    if inst.points:
        lines.append("points " + " ".join(inst.points))
    for a, b in inst.relations:
        lines.append(f"le {a} {b}")
    G = inst.group
    if isinstance(G, FiniteGroup):
        lines.append("group finite " + " ".join(G.elements))
        for a in G.elements:
            for b in G.elements:
                lines.append(f"mul {a} {b} {G.mul(a, b)}")
        lines.append("generators " + " ".join(G.generators) if G.generators else "generators")
    elif isinstance(G, FreeGroup):
        lines.append(f"group {G.kind} " + " ".join(G.generators))
    if G is not None:
        keys = G.generators if isinstance(G, FreeGroup) else G.elements
        for k in keys:
            pairs = inst.maps.get(k, [])
            if not pairs:
                lines.append(f"map {k}:")
            for a, b in pairs:
                lines.append(f"map {k}: {a} -> {b}")
    for name, pts in inst.subsets.items():
        lines.append(f"subset {name}: " + " ".join(pts) if pts else f"subset {name}:")
    for name, Z in inst.zsets.items():
        if isinstance(Z, SymbolicZSet):
            lines.append(f"zset {name} base={Z.base} delta={_int_list(Z.delta)}")
        else:
            lines.append(
                f"zset {name} period={Z.period} up={_int_list(Z.up)} down={_int_list(Z.down)} delta={_int_list(Z.delta)}"
            )
    return "\n".join(lines) + "\n"


def load(path: str | Path) -> Instance:
    return parse(Path(path).read_text())


def from_action(a: PartialAction, space: FiniteSpace | None = None, subsets=None, zsets=None) -> Instance:
    """Instance for a partial action whose points are string tokens."""
    pts = tuple(a.carrier)
    for p in pts:
        if not isinstance(p, str) or not _TOKEN.match(p):
            raise FWRegError(f"point {p!r} is not a valid token")
    relations = ()
    if space is not None:
        relations = tuple((x, y) for x, y in space.cover_relations())
    G = a.group
    keys = G.generators if isinstance(G, FreeGroup) else G.elements
    inst = Instance(
        points=pts,
        relations=relations,
        group=G,
        maps={k: list(a.assignment[k].pairs) for k in keys},
        subsets={k: tuple(a.carrier.sorted(v)) for k, v in (subsets or {}).items()},
        zsets=dict(zsets or {}),
    )
    return parse(serialize(inst))


def parse_transfixing_set(text: str):
    """A user-supplied invariant set: one ``subset Y: labels`` or ``zset Y ...`` line.

    Labels name points of the globalization (``x`` or ``word@x``).
    """
    found = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        head = body.split()[0]
        if head == "zset":
            found.append(next(iter(parse(body).zsets.values())))
        elif head == "subset":
            m = re.match(r"\s*subset\s+([^:\s]+)\s*:(.*)\Z", body)
            if not m:
                raise ParseError("expected 'subset NAME: labels'", lineno, 1)
            found.append(tuple(m.group(2).split()))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, 1)
    if len(found) != 1:
        raise ParseError(f"expected exactly one set, found {len(found)}", 1, 1)
    return found[0]
