"""Small finite fields and projective-plane point sets.

Elements of GF(p^k) are integers whose base-p digits are polynomial
coefficients, lowest degree first, reduced modulo a fixed irreducible
polynomial.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from fwreg.errors import UnsupportedField

# monic irreducible polynomials, coefficients lowest degree first
_MODULI = {
    4: (2, (1, 1, 1)),  # x^2 + x + 1 over F2
    8: (2, (1, 1, 0, 1)),  # x^3 + x + 1 over F2
    9: (3, (1, 0, 1)),  # x^2 + 1 over F3
}
SUPPORTED = (2, 3, 4, 5, 7, 8, 9)


class GF:
    def __init__(self, q: int):
        if q not in SUPPORTED:
            raise UnsupportedField(f"GF({q}) is not in the supported table {SUPPORTED}")
        self.q = q
        if q in _MODULI:
            self.p, modulus = _MODULI[q]
            self.k = len(modulus) - 1
        else:
            self.p, modulus, self.k = q, (0, 1), 1
        self.elements = tuple(range(q))
        self._add = [[self._poly_add(a, b) for b in range(q)] for a in range(q)]
        self._mul = [[self._poly_mul(a, b, modulus) for b in range(q)] for a in range(q)]

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _number(self, digits) -> int:
        return sum(d * self.p**i for i, d in enumerate(digits))

    def _poly_add(self, a: int, b: int) -> int:
        return self._number((x + y) % self.p for x, y in zip(self._digits(a), self._digits(b)))

    def _poly_mul(self, a: int, b: int, modulus) -> int:
        if self.k == 1:
            return a * b % self.p
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(self._digits(a)):
            for j, y in enumerate(self._digits(b)):
                prod[i + j] = (prod[i + j] + x * y) % self.p
        # reduce using x^k = -(lower terms of the modulus)
        for deg in range(len(prod) - 1, self.k - 1, -1):
            c = prod[deg]
            if c:
                prod[deg] = 0
                for i in range(self.k):
                    prod[deg - self.k + i] = (prod[deg - self.k + i] - c * modulus[i]) % self.p
        return self._number(prod[: self.k])

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return next(b for b in self.elements if self._mul[a][b] == 1)

    def __repr__(self) -> str:
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)


Proj = tuple[int, int, int]


def normalize(F: GF, v: Proj) -> Proj:
    """Scale so the first nonzero coordinate is 1."""
    lead = next((c for c in v if c), None)
    if lead is None:
        raise ValueError("the zero vector is not a projective point")
    s = F.inv(lead)
    return tuple(F.mul(s, c) for c in v)


def projective_plane(F: GF) -> list[Proj]:
    """All points of P²(F), normalized, in lexicographic order."""
    pts = {normalize(F, v) for v in product(F.elements, repeat=3) if any(v)}
    return sorted(pts)


def token(v: Proj) -> str:
    return ".".join(map(str, v))
