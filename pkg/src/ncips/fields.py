"""Exact field arithmetic: GF(2), prime fields Z_p, and the rationals Q.

Elements are plain Python values (int for GF(2)/Z_p, Fraction for Q); a
Field object supplies the operations.  Nothing here ever goes through
floating point.
"""

from __future__ import annotations

from fractions import Fraction


class FieldMismatchError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """Base class; subclasses define the carrier and the operations."""

    name: str
    zero: object
    one: object

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def from_int(self, n: int):
        raise NotImplementedError

    def parse(self, text: str):
        """Parse a constant token ("3", "-2", and "3/4" over Q only)."""
        text = text.strip()
        if "/" in text:
            raise ValueError(f"constant {text!r} is not valid over {self.name}")
        return self.from_int(int(text))

    def to_text(self, a) -> str:
        return str(a)

    def __eq__(self, other):
        return type(self) is type(other)

    def __hash__(self):
        return hash(type(self))

    def __repr__(self):
        return self.name


class GF2(Field):
    name = "gf2"
    zero = 0
    one = 1

    def add(self, a, b):
        return a ^ b

    def neg(self, a):
        return a

    def mul(self, a, b):
        return a & b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF(2)")
        return 1

    def from_int(self, n: int):
        return n & 1


class PrimeField(Field):
    """Z_p for prime p < 2^31 (products then fit in 64-bit intermediates)."""

    def __init__(self, p: int):
        if p >= 1 << 31:
            raise ValueError(f"modulus {p} too large (need p < 2^31)")
        if not _is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p
        self.name = f"zp:{p}"
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b):
        s = a + b
        return s - self.p if s >= self.p else s

    def neg(self, a):
        return self.p - a if a else 0

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f"inverse of 0 in Z_{self.p}")
        return pow(a, self.p - 2, self.p)

    def from_int(self, n: int):
        return n % self.p

    def __eq__(self, other):
        return type(other) is PrimeField and other.p == self.p

    def __hash__(self):
        return hash(("zp", self.p))


class Rationals(Field):
    name = "q"
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return 1 / a

    def from_int(self, n: int):
        return Fraction(n)

    def parse(self, text: str):
        return Fraction(text.strip())


GF2_FIELD = GF2()
QQ = Rationals()

_prime_cache: dict[int, PrimeField] = {}


def prime_field(p: int) -> PrimeField:
    f = _prime_cache.get(p)
    if f is None:
        f = _prime_cache[p] = PrimeField(p)
    return f


def parse_field_spec(spec: str) -> Field:
    """Resolve a field tag: "gf2", "q", or "zp:<prime>"."""
    spec = spec.strip().lower()
    if spec == "gf2":
        return GF2_FIELD
    if spec == "q":
        return QQ
    if spec.startswith("zp:"):
        return prime_field(int(spec[3:]))
    raise ValueError(f"unknown field spec {spec!r}")


def check_same_field(a: Field, b: Field) -> None:
    if a != b:
        raise FieldMismatchError(f"field mismatch: {a.name} vs {b.name}")
