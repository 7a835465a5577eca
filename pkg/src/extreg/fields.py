"""Exact coefficient fields, selectable at runtime.

Two fields are supported: the rationals (arbitrary-precision ``Fraction``
values) and prime fields F_p (int residues in ``[0, p)`` with ``p`` prime
and below 2**31).  A field object carries no state beyond its definition
and exposes the arithmetic as methods over raw scalar values, in the style
of sympy's domains; containers (elements, matrices) hold one field
reference and plain values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

_WORD_LIMIT = 2 ** 31

_MR_BASES = (2, 3, 5, 7, 11, 13, 17)  # deterministic below 3.4e14


def is_prime(n: int) -> bool:
    """Deterministic primality test for word-sized integers."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldParseError(ValueError):
    """Raised for field names that do not denote a supported field."""


@dataclass(frozen=True)
class Rationals:
    """The field Q with exact reduced-fraction arithmetic."""

    characteristic = 0

    @property
    def name(self) -> str:
        return "Q"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, k: int):
        return Fraction(k)

    def from_fraction(self, num: int, den: int):
        if den == 0:
            raise ZeroDivisionError("denominator is zero")
        return Fraction(num, den)

    def coerce(self, value):
        return Fraction(value)

    def validate(self, value) -> bool:
        # Fraction normalizes on construction: gcd 1, positive denominator
        return isinstance(value, Fraction)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def div(self, a, b):
        return a * self.inv(b)

    def render(self, value) -> str:
        return str(value)

    def __repr__(self):
        return "Rationals()"


@dataclass(frozen=True)
class PrimeField:
    """The field F_p of residues mod a word-sized prime p."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 2:
            raise FieldParseError(f"field characteristic must be an integer >= 2, got {self.p}")
        if self.p >= _WORD_LIMIT:
            raise FieldParseError(f"prime {self.p} exceeds the 2^31 word-size limit")
        if not is_prime(self.p):
            raise FieldParseError(f"{self.p} is not prime")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def name(self) -> str:
        return f"F{self.p}"

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, k: int):
        return k % self.p

    def from_fraction(self, num: int, den: int):
        if den == 0:
            raise ZeroDivisionError("denominator is zero")
        return num * self.inv(den % self.p) % self.p

    def coerce(self, value):
        if isinstance(value, Fraction):
            return self.from_fraction(value.numerator, value.denominator)
        return int(value) % self.p

    def validate(self, value) -> bool:
        return isinstance(value, int) and 0 <= value < self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def render(self, value) -> str:
        return str(value)

    def __repr__(self):
        return f"PrimeField({self.p})"


QQ = Rationals()

FieldSpec = Rationals | PrimeField


def parse_field(text: str) -> FieldSpec:
    """Parse a CLI field name: "Q", or "Fp" with p a decimal prime."""
    text = text.strip()
    if text == "Q":
        return QQ
    if len(text) > 1 and text[0] == "F" and text[1:].isdigit():
        return PrimeField(int(text[1:]))
    raise FieldParseError(f'unknown field "{text}" (expected "Q" or "F<prime>")')
