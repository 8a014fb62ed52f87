"""Table-backed arithmetic in small finite fields GF(p^m), p^m <= 256.

Elements are canonical integers in ``[0, q)``.  For ``m > 1`` the integer's
base-p digits are the polynomial coefficients, constant term first, so in
GF(4) built on ``x^2 + x + 1`` the element ``x`` is 2 and ``x + 1`` is 3.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import product
from typing import Sequence

from .errors import DivisionByZero, FieldMismatch, NotPrime, OrderTooLarge, ReduciblePolynomial

MAX_ORDER = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# Polynomials over GF(p) are coefficient lists, lowest degree first, with no
# trailing zeros (the zero polynomial is the empty list).

def _trim(poly: list[int]) -> list[int]:
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def _poly_mod(num: Sequence[int], den: Sequence[int], p: int) -> list[int]:
    num = list(num)
    lead_inv = pow(den[-1], p - 2, p)
    while len(_trim(num)) >= len(den):
        shift = len(num) - len(den)
        factor = num[-1] * lead_inv % p
        for i, d in enumerate(den):
            num[shift + i] = (num[shift + i] - factor * d) % p
    return num


def _monic_polys(p: int, degree: int):
    for low in product(range(p), repeat=degree):
        yield list(reversed(low)) + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = _trim(list(c % p for c in poly))
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for divisor in _monic_polys(p, d):
            if not _poly_mod(poly, divisor, p):
                return False
    return True


def default_modulus(p: int, m: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree ``m``, ordered by integer encoding.

    The encoding reads the coefficient list as base-p digits, constant term
    least significant, so over GF(2) the degree-3 choice is x^3 + x + 1.
    """
    for low in range(p ** m):
        coeffs = [(low // p ** i) % p for i in range(m)] + [1]
        if is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise ReduciblePolynomial(f"no irreducible polynomial of degree {m} over GF({p})")  # pragma: no cover


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """GF(p^m) with full addition, multiplication, negation and inverse tables.

    Instances are immutable.  Two specs compare equal when they have the same
    characteristic, degree and modulus.
    """

    p: int
    m: int
    modulus: tuple[int, ...]
    q: int
    add_table: tuple[tuple[int, ...], ...] = dc_field(repr=False)
    sub_table: tuple[tuple[int, ...], ...] = dc_field(repr=False)
    mul_table: tuple[tuple[int, ...], ...] = dc_field(repr=False)
    neg_table: tuple[int, ...] = dc_field(repr=False)
    inv_table: tuple[int, ...] = dc_field(repr=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def __str__(self) -> str:
        return f"GF({self.q})"

    @property
    def is_prime_field(self) -> bool:
        return self.m == 1

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(self, self.element(value))

    def element(self, value: int) -> int:
        """Canonical integer for ``value``; prime fields reduce mod p."""
        if self.m == 1:
            return value % self.p
        if not 0 <= value < self.q:
            raise ValueError(f"{value} is not an element of {self}")
        return value

    def elements(self) -> range:
        return range(self.q)

    # integer-level arithmetic, used by the matrix kernels

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.sub_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in {self}")
        return self.inv_table[a]

    def div(self, a: int, b: int) -> int:
        return self.mul_table[a][self.inv(b)]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul_table[result][a]
            a = self.mul_table[a][a]
            e >>= 1
        return result

    def encode(self, coeffs: Sequence[int]) -> int:
        """Polynomial coefficients (constant term first) -> canonical integer."""
        if len(coeffs) > self.m or any(not 0 <= c < self.p for c in coeffs):
            raise ValueError(f"{list(coeffs)} does not encode an element of {self}")
        return sum(c * self.p ** i for i, c in enumerate(coeffs))

    def decode(self, value: int) -> tuple[int, ...]:
        """Canonical integer -> its ``m`` polynomial coefficients."""
        return tuple((value // self.p ** i) % self.p for i in range(self.m))


@dataclass(frozen=True)
class FieldElement:
    """A field value bound to its field; arithmetic checks both operands agree."""

    field: FieldSpec
    value: int

    def _other(self, other: object) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        if isinstance(other, int):
            return self.field.element(other)
        raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._other(other)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.value))

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"{self.field}({self.value})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def neg(a: FieldElement) -> FieldElement:
    return -a


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def _build_tables(p: int, m: int, modulus: tuple[int, ...]):
    q = p ** m
    digits = [tuple((v // p ** i) % p for i in range(m)) for v in range(q)]

    def encode(coeffs):
        return sum(c * p ** i for i, c in enumerate(coeffs))

    add_t = tuple(
        tuple(encode((x + y) % p for x, y in zip(digits[a], digits[b])) for b in range(q))
        for a in range(q)
    )
    neg_t = tuple(encode((-x) % p for x in digits[a]) for a in range(q))
    sub_t = tuple(tuple(add_t[a][neg_t[b]] for b in range(q)) for a in range(q))

    def poly_mul(a, b):
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(digits[a]):
            if x:
                for j, y in enumerate(digits[b]):
                    prod[i + j] = (prod[i + j] + x * y) % p
        if m > 1:
            prod = _poly_mod(prod, modulus, p)
        return encode((prod + [0] * m)[:m])

    mul_t = tuple(tuple(poly_mul(a, b) for b in range(q)) for a in range(q))
    inv_t = [0] * q
    for a in range(1, q):
        row = mul_t[a]
        inv_t[a] = row.index(1)
    return q, add_t, sub_t, mul_t, neg_t, tuple(inv_t)


@lru_cache(maxsize=None)
def _make_field_cached(p: int, m: int, modulus: tuple[int, ...]) -> FieldSpec:
    q, add_t, sub_t, mul_t, neg_t, inv_t = _build_tables(p, m, modulus)
    return FieldSpec(p, m, modulus, q, add_t, sub_t, mul_t, neg_t, inv_t)


def make_field(p: int, m: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Build GF(p^m).

    ``modulus`` lists the m+1 coefficients of a monic irreducible polynomial,
    constant term first.  When omitted for ``m > 1`` the smallest irreducible
    (see :func:`default_modulus`) is used.  Prime fields ignore ``modulus``.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if m < 1:
        raise ValueError(f"extension degree must be >= 1, got {m}")
    if p ** m > MAX_ORDER:
        raise OrderTooLarge(f"GF({p}^{m}) has order {p ** m} > {MAX_ORDER}")
    if m == 1:
        return _make_field_cached(p, 1, ())
    if modulus is None:
        mod = default_modulus(p, m)
    else:
        mod = tuple(int(c) for c in modulus)
        if len(mod) != m + 1 or mod[-1] != 1 or any(not 0 <= c < p for c in mod):
            raise ReduciblePolynomial(
                f"modulus must be {m + 1} coefficients in [0, {p}) ending in 1, got {list(mod)}"
            )
        if not is_irreducible(mod, p):
            raise ReduciblePolynomial(f"{list(mod)} is reducible over GF({p})")
    return _make_field_cached(p, m, mod)


def field_of_order(q: int) -> FieldSpec:
    """GF(q) for a prime power q, using the default modulus."""
    for p in range(2, q + 1):
        if q % p == 0:
            m, rest = 0, q
            while rest % p == 0:
                rest //= p
                m += 1
            if rest != 1:
                raise NotPrime(f"{q} is not a prime power")
            return make_field(p, m)
    raise NotPrime(f"{q} is not a prime power")
