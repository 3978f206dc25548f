"""Group handles: free groups (including infinite cyclic) and finite groups.

Elements are opaque hashables owned by the handle. Free-group elements are
freely reduced words; finite-group elements are their symbol names. Every
handle enumerates elements in length-lex order over its letters, positive
letters first and inverse letters after them, in declared generator order.
"""

from __future__ import annotations

import re
from itertools import product
from typing import Hashable, Iterable, Iterator, Sequence

from fwreg.errors import MalformedGroup, UnknownSymbol

Letter = tuple[str, int]
Word = tuple[Letter, ...]

_SYMBOL = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_FACTOR = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?\Z")


def parse_word(text: str) -> Word:
    """Parse ``"s*t^-1*u^2"`` into letters; ``"1"`` is the empty word."""
    text = text.strip()
    if text in ("1", ""):
        return ()
    letters: list[Letter] = []
    for factor in text.split("*"):
        m = _FACTOR.match(factor.strip())
        if not m:
            raise UnknownSymbol(f"malformed word factor {factor!r}")
        sym, exp = m.group(1), int(m.group(2) or 1)
        if exp == 0:
            continue
        letters.extend([(sym, 1 if exp > 0 else -1)] * abs(exp))
    return tuple(letters)


def format_word(word: Sequence[Letter]) -> str:
    """Inverse of :func:`parse_word`, run-length compressing powers."""
    if not word:
        return "1"
    out = []
    i = 0
    while i < len(word):
        sym, e = word[i]
        j = i
        while j < len(word) and word[j] == (sym, e):
            j += 1
        n = (j - i) * e
        out.append(sym if n == 1 else f"{sym}^{n}")
        i = j
    return "*".join(out)


def free_reduce(word: Iterable[Letter]) -> Word:
    out: list[Letter] = []
    for sym, e in word:
        if out and out[-1] == (sym, -e):
            out.pop()
        else:
            out.append((sym, e))
    return tuple(out)


class FreeGroup:
    """Free group on ordered symbols; ``kind="cyclic"`` marks rank one."""

    is_finite = False

    def __init__(self, symbols: Sequence[str], kind: str = "free"):
        symbols = tuple(symbols)
        if len(set(symbols)) != len(symbols) or not symbols:
            raise MalformedGroup("generator symbols must be distinct and non-empty")
        for s in symbols:
            if not _SYMBOL.match(s):
                raise MalformedGroup(f"bad generator symbol {s!r}")
        if kind == "cyclic" and len(symbols) != 1:
            raise MalformedGroup("cyclic groups have exactly one generator")
        if kind not in ("free", "cyclic"):
            raise MalformedGroup(f"unknown free kind {kind!r}")
        self.kind = kind
        self.generators = symbols
        self.letters: tuple[Letter, ...] = tuple((s, 1) for s in symbols) + tuple(
            (s, -1) for s in symbols
        )
        self._letter_rank = {l: i for i, l in enumerate(self.letters)}
        self.identity: Word = ()

    def __repr__(self) -> str:
        return f"FreeGroup({list(self.generators)!r}, kind={self.kind!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeGroup) and (self.kind, self.generators) == (
            other.kind,
            other.generators,
        )

    def __hash__(self) -> int:
        return hash((self.kind, self.generators))

    def element(self, word: Word | str) -> Word:
        if isinstance(word, str):
            word = parse_word(word)
        for sym, e in word:
            if sym not in self.generators or e not in (1, -1):
                raise UnknownSymbol(f"unknown letter {sym}^{e}")
        return free_reduce(word)

    def letter_element(self, letter: Letter) -> Word:
        return (letter,)

    def word(self, g: Word) -> Word:
        return g

    def mul(self, a: Word, b: Word) -> Word:
        i = 0
        while i < min(len(a), len(b)) and a[-1 - i] == (b[i][0], -b[i][1]):
            i += 1
        return a[: len(a) - i] + b[i:]

    def inv(self, a: Word) -> Word:
        return tuple((s, -e) for s, e in reversed(a))

    def length(self, g: Word) -> int:
        return len(g)

    def sort_key(self, g: Word) -> tuple:
        return (len(g), tuple(self._letter_rank[l] for l in g))

    def ball(self, radius: int | None) -> list[Word]:
        """Reduced words of length at most ``radius`` in length-lex order."""
        if radius is None:
            raise MalformedGroup("free groups need a finite radius")
        out: list[Word] = [()]
        layer: list[Word] = [()]
        for _ in range(radius):
            nxt = []
            for w in layer:
                for l in self.letters:
                    if w and w[-1] == (l[0], -l[1]):
                        continue
                    nxt.append(w + (l,))
            out.extend(nxt)
            layer = nxt
        return out

    def iter_elements(self) -> Iterator[Word]:
        r = 0
        while True:
            yield from (w for w in self.ball(r) if len(w) == r)
            r += 1

    def format(self, g: Word) -> str:
        return format_word(g)


class FiniteGroup:
    """A finite group given by a complete multiplication table over symbols."""

    is_finite = True
    kind = "finite"

    def __init__(
        self,
        elements: Sequence[str],
        table: dict[tuple[str, str], str],
        generators: Sequence[str] | None = None,
        check: bool = True,
    ):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements) or not self.elements:
            raise MalformedGroup("element symbols must be distinct and non-empty")
        self._set = frozenset(self.elements)
        self.table = dict(table)
        for a, b in product(self.elements, repeat=2):
            c = self.table.get((a, b))
            if c is None:
                raise MalformedGroup(f"table missing product {a}*{b}")
            if c not in self._set:
                raise MalformedGroup(f"product {a}*{b}={c} is not an element")
        ids = [
            e
            for e in self.elements
            if all(self.table[e, x] == x and self.table[x, e] == x for x in self.elements)
        ]
        if len(ids) != 1:
            raise MalformedGroup("table has no two-sided identity")
        self.identity = ids[0]
        self._inv = {}
        for a in self.elements:
            inv = [b for b in self.elements if self.table[a, b] == self.identity]
            if len(inv) != 1 or self.table[inv[0], a] != self.identity:
                raise MalformedGroup(f"element {a} has no two-sided inverse")
            self._inv[a] = inv[0]
        if check:
            for a, b, c in product(self.elements, repeat=3):
                if self.table[self.table[a, b], c] != self.table[a, self.table[b, c]]:
                    raise MalformedGroup(f"table not associative at ({a},{b},{c})")
        if generators is None:
            generators = [e for e in self.elements if e != self.identity]
        self.generators = tuple(generators)
        for s in self.generators:
            if s not in self._set:
                raise MalformedGroup(f"generator {s!r} is not an element")
        self.letters: tuple[Letter, ...] = tuple((s, 1) for s in self.generators) + tuple(
            (s, -1) for s in self.generators
        )
        self._letter_rank = {l: i for i, l in enumerate(self.letters)}
        self._words = self._canonical_words()
        if len(self._words) != len(self.elements):
            raise MalformedGroup("generators do not generate the group")
        self._order = sorted(self.elements, key=self.sort_key)

    def __repr__(self) -> str:
        return f"FiniteGroup(order={len(self.elements)}, generators={list(self.generators)!r})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteGroup)
            and self.elements == other.elements
            and self.table == other.table
            and self.generators == other.generators
        )

    def __hash__(self) -> int:
        return hash((self.elements, self.generators))

    def __len__(self) -> int:
        return len(self.elements)

    def _canonical_words(self) -> dict[str, Word]:
        words = {self.identity: ()}
        layer = [self.identity]
        while layer:
            nxt = []
            for g in layer:
                for l in self.letters:
                    h = self.mul(g, self.letter_element(l))
                    if h not in words:
                        words[h] = words[g] + (l,)
                        nxt.append(h)
            layer = nxt
        return words

    def letter_element(self, letter: Letter) -> str:
        sym, e = letter
        if sym not in self._set:
            raise UnknownSymbol(f"unknown element symbol {sym!r}")
        return sym if e == 1 else self._inv[sym]

    def element(self, word: Word | str) -> str:
        if isinstance(word, str):
            word = parse_word(word)
        g = self.identity
        for l in word:
            if l[1] not in (1, -1):
                raise UnknownSymbol(f"bad exponent in letter {l}")
            g = self.table[g, self.letter_element(l)]
        return g

    def word(self, g: str) -> Word:
        return self._words[g]

    def mul(self, a: str, b: str) -> str:
        return self.table[a, b]

    def inv(self, a: str) -> str:
        return self._inv[a]

    def length(self, g: str) -> int:
        return len(self._words[g])

    def sort_key(self, g: str) -> tuple:
        w = self._words[g]
        return (len(w), tuple(self._letter_rank[l] for l in w))

    def ball(self, radius: int | None = None) -> list[str]:
        if radius is None:
            return list(self._order)
        return [g for g in self._order if len(self._words[g]) <= radius]

    def iter_elements(self) -> Iterator[str]:
        return iter(self._order)

    def format(self, g: str) -> str:
        return format_word(self._words[g])

    @classmethod
    def cyclic(cls, n: int, symbol: str = "r") -> "FiniteGroup":
        """Z/n with elements ``e, r, r2, ...`` generated by ``r``."""
        names = ["e"] + [symbol if k == 1 else f"{symbol}{k}" for k in range(1, n)]
        table = {(names[a], names[b]): names[(a + b) % n] for a in range(n) for b in range(n)}
        return cls(names, table, generators=[symbol] if n > 1 else [], check=False)

    @classmethod
    def from_permutations(
        cls, gens: dict[str, Sequence[int]]
    ) -> tuple["FiniteGroup", dict[str, tuple[int, ...]]]:
        """Permutation group generated by named permutations of ``range(n)``.

        Non-generator elements are named by their canonical word. Returns the
        group and the map from element symbol to permutation tuple.
        """
        perms = {s: tuple(p) for s, p in gens.items()}
        if len({len(p) for p in perms.values()}) > 1:
            raise MalformedGroup("generators act on different degrees")
        n = len(next(iter(perms.values()))) if perms else 0
        ident = tuple(range(n))
        if len(set(perms.values()) | {ident}) != len(perms) + 1:
            raise MalformedGroup("generator permutations must be distinct and non-trivial")
        letter_perm = {}
        for s, p in perms.items():
            q = [0] * n
            for i, j in enumerate(p):
                q[j] = i
            letter_perm[s, 1] = p
            letter_perm[s, -1] = tuple(q)
        letters = [(s, 1) for s in perms] + [(s, -1) for s in perms]
        # the word l1...lk acts as l1 after ... after lk
        word_of = {ident: ()}
        layer = [ident]
        while layer:
            nxt = []
            for p in layer:
                for l in letters:
                    q = tuple(p[i] for i in letter_perm[l])
                    if q not in word_of:
                        word_of[q] = word_of[p] + (l,)
                        nxt.append(q)
            layer = nxt
        name = {p: format_word(w) for p, w in word_of.items()}
        table = {
            (name[p], name[q]): name[tuple(p[i] for i in q)]
            for p, q in product(word_of, repeat=2)
        }
        group = cls([name[p] for p in word_of], table, generators=list(perms), check=False)
        return group, {name[p]: p for p in word_of}


GroupHandle = FreeGroup | FiniteGroup


def element_of(group: GroupHandle, g: Hashable | str | Word):
    """Accept an element, a word tuple or a word string."""
    if isinstance(g, str):
        if isinstance(group, FiniteGroup) and g in group.elements:
            return g
        return group.element(parse_word(g))
    if isinstance(group, FreeGroup):
        return group.element(tuple(g))
    return g


def subgroup_classes(perms: Sequence[tuple[int, ...]]) -> list[list[tuple[int, ...]]]:
    """Subgroups of a permutation group, one per conjugacy class.

    ``perms`` must list every element of the group. Uses cyclic extension:
    each class representative is joined with every cyclic subgroup, and new
    subgroups are kept only if not conjugate to a kept one.
    """
    if not perms:
        return []
    n = len(perms[0])
    idx = {p: i for i, p in enumerate(perms)}
    N = len(perms)
    mul = [[idx[tuple(p[k] for k in q)] for q in perms] for p in perms]
    ident = idx[tuple(range(n))]
    inv = [row.index(ident) for row in mul]

    def closure(gens, base_mask, base_elems):
        # right cosets H*e of the already-closed base subgroup H
        elems, mask, reps = list(base_elems), base_mask, [ident]
        i = 0
        while i < len(reps):
            row = mul[reps[i]]
            i += 1
            for g in gens:
                e = row[g]
                if not mask >> e & 1:
                    for h in base_elems:
                        b = mul[h][e]
                        mask |= 1 << b
                        elems.append(b)
                    reps.append(e)
        return mask, elems

    def cycle_type(p):
        seen, ct = set(), []
        for i in range(n):
            c, j = 0, i
            while j not in seen:
                seen.add(j)
                j = p[j]
                c += 1
            if c:
                ct.append(c)
        return tuple(sorted(ct))

    ctypes = [cycle_type(p) for p in perms]

    def invariant(elems):
        counts: dict = {}
        for e in elems:
            counts[ctypes[e]] = counts.get(ctypes[e], 0) + 1
        return len(elems), tuple(sorted(counts.items()))

    cyclic: dict[int, int] = {}
    for g in range(N):
        m, _ = closure([g], 1 << ident, [ident])
        cyclic.setdefault(m, g)
    buckets: dict = {}
    kept: list = []
    known: set = set()

    def add(mask, elems, gens):
        if mask in known:
            return
        known.add(mask)
        bucket = buckets.setdefault(invariant(elems), [])
        for m in bucket:
            for t in range(N):
                ti, c = inv[t], 0
                for e in elems:
                    c |= 1 << mul[mul[t][e]][ti]
                if c == m:
                    return
        bucket.append(mask)
        kept.append((mask, elems, gens))

    add(1 << ident, [ident], [])
    i = 0
    while i < len(kept):
        mask, elems, gens = kept[i]
        i += 1
        done = set()
        for cmask, g in cyclic.items():
            if cmask & ~mask == 0:
                continue
            m, el = closure(gens + [g], mask, elems)
            if m not in done:
                done.add(m)
                add(m, el, gens + [g])
    return [[perms[e] for e in sorted(el)] for _, el, _ in kept]
