"""Exact scalar fields: the rationals and prime fields F_p.

Elements are plain Python values: ``Fraction`` for Q and ``int`` in
``range(p)`` for F_p.  All arithmetic goes through a :class:`Field` so that
reduction mod p is never forgotten.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from ..errors import MalformedInputError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(n**0.5) + 1):
        if n % d == 0:
            return False
    return True


class Field:
    """An exact field, either ``Field.rationals()`` or ``Field.prime(p)``."""

    def __init__(self, p: int | None = None):
        if p is not None and not is_prime(p):
            raise MalformedInputError(f"{p} is not prime")
        self.p = p
        self.zero = self(0)
        self.one = self(1)

    @classmethod
    def rationals(cls) -> "Field":
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(p)

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    @property
    def characteristic(self) -> int:
        return self.p or 0

    @property
    def order(self) -> int | None:
        return self.p

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    # element handling

    def __call__(self, x) -> int | Fraction:
        if isinstance(x, str):
            return self.parse(x)
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def reduce(self, x):
        return x % self.p if self.p is not None else x

    def add(self, a, b):
        return self.reduce(a + b)

    def sub(self, a, b):
        return self.reduce(a - b)

    def mul(self, a, b):
        return self.reduce(a * b)

    def neg(self, a):
        return self.reduce(-a)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / Fraction(a)
        return pow(int(a), -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_invertible_int(self, n: int) -> bool:
        return self.p is None or n % self.p != 0

    def elements(self):
        if self.p is None:
            raise ValueError("QQ is not enumerable")
        return range(self.p)

    def vectors(self, n: int):
        """All vectors of length n, lexicographically (F_p only)."""
        return itertools.product(self.elements(), repeat=n)

    def count(self, n: int) -> int | None:
        return None if self.p is None else self.p**n

    def random_element(self, rng: random.Random, height: int = 3):
        if self.p is not None:
            return rng.randrange(self.p)
        return Fraction(rng.randint(-height, height), rng.randint(1, height))

    def roots_of_unity(self, n: int) -> list:
        """Solutions of x**n == 1 in the field, sorted."""
        if self.p is None:
            return [Fraction(-1), Fraction(1)] if n % 2 == 0 else [Fraction(1)]
        return [x for x in range(1, self.p) if pow(x, n, self.p) == 1]

    def format(self, x) -> str:
        if self.p is not None:
            return str(int(x) % self.p)
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def parse(self, s: str):
        try:
            if self.p is None:
                return Fraction(s.strip())
            s = s.strip()
            if "/" in s:
                return self(Fraction(s))
            return int(s) % self.p
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInputError(f"bad scalar {s!r} for {self}") from exc
