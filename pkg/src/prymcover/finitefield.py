"""Finite fields F_{p^i} with a deterministic modulus choice.

Elements are coefficient tuples (constant first) modulo the
lexicographically least monic irreducible polynomial of degree i, where
polynomials are ordered by their integer encoding sum(c_j * p^j) over the
non-leading coefficients.  This pins the field representation, so point
counts and any serialized element are reproducible across runs.

The quadratic character is computed definitionally, by raising to
(q - 1) / 2; bulk consumers should use the cached square tables built by
`chi_table` / `sqrt_table`, which the tests cross-check against the
definitional power map.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, List, Tuple

from .errors import InternalCheckError
from .scalars import is_prime

Elem = Tuple[int, ...]


def _poly_mulmod(a: List[int], b: List[int], mod: List[int], p: int) -> List[int]:
    """Product of coefficient lists reduced by the monic modulus, all mod p."""
    deg = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for k in range(len(prod) - 1, deg - 1, -1):
        c = prod[k]
        if c:
            prod[k] = 0
            for j in range(deg):
                prod[k - deg + j] = (prod[k - deg + j] - c * mod[j]) % p
    out = prod[:deg]
    out += [0] * (deg - len(out))
    return out


def _poly_powmod(base: List[int], e: int, mod: List[int], p: int) -> List[int]:
    deg = len(mod) - 1
    result = [1] + [0] * (deg - 1)
    b = list(base) + [0] * max(0, deg - len(base))
    while e:
        if e & 1:
            result = _poly_mulmod(result, b, mod, p)
        b = _poly_mulmod(b, b, mod, p)
        e >>= 1
    return result


def _poly_gcd_is_one(a: List[int], b: List[int], p: int) -> bool:
    def trim(v):
        while v and v[-1] == 0:
            v.pop()
        return v

    a, b = trim(list(a)), trim(list(b))
    while b:
        inv = pow(b[-1], p - 2, p)
        r = list(a)
        while len(r) >= len(b):
            c = r[-1] * inv % p
            if c:
                shiftpos = len(r) - len(b)
                for j in range(len(b)):
                    r[shiftpos + j] = (r[shiftpos + j] - c * b[j]) % p
            r.pop()
            trim(r)
            if not r:
                break
        a, b = b, trim(r)
    return len(a) == 1


def _is_irreducible(mod: List[int], p: int) -> bool:
    """Monic `mod` of degree d is irreducible over F_p iff x^(p^d) = x mod it
    and x^(p^(d/l)) - x is coprime to it for every prime l dividing d."""
    d = len(mod) - 1
    x = [0, 1]
    xq = _poly_powmod(x, p**d, mod, p)
    xq_t = list(xq)
    while xq_t and xq_t[-1] == 0:
        xq_t.pop()
    if xq_t != [0, 1]:
        return False
    for ell in set(_small_prime_factors(d)):
        sub = _poly_powmod(x, p ** (d // ell), mod, p)
        sub[1] = (sub[1] - 1) % p
        if not _poly_gcd_is_one(sub, mod, p):
            return False
    return True


def _small_prime_factors(n: int) -> List[int]:
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def least_irreducible(p: int, deg: int) -> Tuple[int, ...]:
    """Lexicographically least monic irreducible of given degree over F_p,
    returned as the full coefficient tuple (constant first, lead 1)."""
    if deg == 1:
        return (0, 1)
    for code in range(p**deg):
        coeffs = []
        k = code
        for _ in range(deg):
            coeffs.append(k % p)
            k //= p
        mod = coeffs + [1]
        if _is_irreducible(mod, p):
            return tuple(mod)
    raise InternalCheckError(f"no irreducible of degree {deg} over F_{p}")


class FiniteField:
    """Arithmetic in F_{p^deg} on coefficient tuples."""

    def __init__(self, p: int, deg: int = 1):
        if not is_prime(p):
            raise ValueError(f"field characteristic must be prime, got {p}")
        if deg < 1:
            raise ValueError("extension degree must be positive")
        self.p = p
        self.deg = deg
        self.order = p**deg
        self.modulus = least_irreducible(p, deg)
        # x^(deg+t) mod modulus, coefficients constant-first
        red: List[Tuple[int, ...]] = []
        cur = [(-c) % p for c in self.modulus[:deg]]
        red.append(tuple(cur))
        for _ in range(deg - 2):
            nxt = [0] + cur[:-1]
            top = cur[-1]
            if top:
                for j in range(deg):
                    nxt[j] = (nxt[j] - top * self.modulus[j]) % p
            cur = [v % p for v in nxt]
            red.append(tuple(cur))
        self._red = red
        self._zero: Elem = (0,) * deg
        self._one: Elem = (1,) + (0,) * (deg - 1)
        self._tables: Tuple[Dict[Elem, int], Dict[Elem, Elem]] = None  # type: ignore
        self._elems: List[Elem] = None  # type: ignore

    def zero(self) -> Elem:
        return self._zero

    def one(self) -> Elem:
        return self._one

    def embed(self, a: int) -> Elem:
        """Image of an integer under Z -> F_p -> F_{p^deg}."""
        return (a % self.p,) + (0,) * (self.deg - 1)

    def elements(self) -> Iterable[Elem]:
        return itertools.product(range(self.p), repeat=self.deg)

    def element_list(self) -> List[Elem]:
        """All elements as a cached list, in the deterministic product order."""
        if self._elems is None:
            self._elems = list(self.elements())
        return self._elems

    def add(self, a: Elem, b: Elem) -> Elem:
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a: Elem, b: Elem) -> Elem:
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a: Elem) -> Elem:
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a: Elem, b: Elem) -> Elem:
        p = self.p
        deg = self.deg
        if deg == 1:
            return (a[0] * b[0] % p,)
        prod = [0] * (2 * deg - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        for k in range(2 * deg - 2, deg - 1, -1):
            c = prod[k] % p
            if c:
                red = self._red[k - deg]
                for j, rj in enumerate(red):
                    if rj:
                        prod[j] += c * rj
        return tuple(v % p for v in prod[:deg])

    def pow(self, a: Elem, e: int) -> Elem:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self._one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: Elem) -> Elem:
        if a == self._zero:
            raise ZeroDivisionError("inverse of zero field element")
        return self.pow(a, self.order - 2)

    def chi(self, a: Elem) -> int:
        """Quadratic character by definition: a^((q-1)/2) in {-1, 0, 1}."""
        if a == self._zero:
            return 0
        r = self.pow(a, (self.order - 1) // 2)
        if r == self._one:
            return 1
        if r == self.neg(self._one):
            return -1
        raise InternalCheckError("character power landed outside {±1}")

    def _build_tables(self) -> None:
        sqrt: Dict[Elem, Elem] = {}
        for z in self.elements():
            if z == self._zero:
                continue
            s = self.mul(z, z)
            if s not in sqrt:
                sqrt[s] = z
        chi: Dict[Elem, int] = {}
        for z in self.elements():
            if z == self._zero:
                chi[z] = 0
            else:
                chi[z] = 1 if z in sqrt else -1
        self._tables = (chi, sqrt)

    def chi_table(self) -> Dict[Elem, int]:
        """Quadratic character of every element, from one squaring pass."""
        if self._tables is None:
            self._build_tables()
        return self._tables[0]

    def sqrt_table(self) -> Dict[Elem, Elem]:
        """One square root of every nonzero square (first found in element
        order; the other root is its negation)."""
        if self._tables is None:
            self._build_tables()
        return self._tables[1]

    def __repr__(self) -> str:
        return f"FiniteField({self.p}, {self.deg})"


_FIELD_CACHE: Dict[Tuple[int, int], FiniteField] = {}


def get_field(p: int, deg: int = 1) -> FiniteField:
    """Shared field instances so character tables are built once per run."""
    key = (p, deg)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = FiniteField(p, deg)
    return _FIELD_CACHE[key]


def least_nonresidue(p: int) -> int:
    """Smallest positive quadratic nonresidue modulo an odd prime."""
    if p == 2:
        raise ValueError("p must be odd")
    for n in range(2, p):
        if pow(n, (p - 1) // 2, p) == p - 1:
            return n
    raise InternalCheckError(f"no nonresidue below {p}")
