"""Exact scalar fields: the rationals and prime fields.

Rationals are plain :class:`fractions.Fraction` values (canonical form is
guaranteed by the stdlib). Prime-field elements are :class:`FpElement`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache


class FieldMismatchError(TypeError):
    """Raised when values from two different fields are combined."""


class FpElement:
    """Residue class modulo a prime ``p``; immutable."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "v", v % p)

    def __setattr__(self, name, value):
        raise AttributeError("FpElement is immutable")

    def _coerce(self, other):
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise FieldMismatchError(f"GF({self.p}) vs GF({other.p})")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(-self.v, self.p)

    def __pos__(self):
        return self

    def inverse(self) -> "FpElement":
        if self.v == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.p})")
        return FpElement(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * FpElement(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(o, self.p) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FpElement(pow(self.v, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.p == other.p and self.v == other.v
        if isinstance(other, (int, Fraction)):
            return self.v == self._coerce(other) % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"FpElement({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


class Field:
    """Base class; concrete fields are :data:`QQ` and :func:`GF` instances."""

    characteristic: int
    name: str

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def contains(self, x) -> bool:
        raise NotImplementedError

    def parse(self, text: str):
        """Parse an exact scalar such as ``-3/4`` or ``7``."""
        return self(parse_rational(text))

    def __repr__(self):
        return self.name


class RationalField(Field):
    characteristic = 0
    name = "Q"

    def __call__(self, x):
        if isinstance(x, FpElement):
            raise FieldMismatchError(f"cannot coerce {x!r} into Q")
        return Fraction(x)

    def contains(self, x) -> bool:
        return isinstance(x, (Fraction, int)) and not isinstance(x, bool)

    def __reduce__(self):
        return (_rational_field, ())


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.characteristic = p
        self.name = f"GF({p})"

    def __call__(self, x):
        if isinstance(x, FpElement):
            if x.p != self.characteristic:
                raise FieldMismatchError(f"{x!r} is not in {self.name}")
            return x
        if isinstance(x, Fraction):
            if x.denominator % self.characteristic == 0:
                raise ZeroDivisionError(f"{x} has no image in {self.name}")
            return FpElement(x.numerator * pow(x.denominator, -1, self.characteristic),
                             self.characteristic)
        return FpElement(int(x), self.characteristic)

    def contains(self, x) -> bool:
        return isinstance(x, FpElement) and x.p == self.characteristic

    def __reduce__(self):
        return (GF, (self.characteristic,))


QQ = RationalField()


def _rational_field():
    return QQ


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    """The prime field with ``p`` elements (instances are cached)."""
    return PrimeField(p)


_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not _RATIONAL.match(text):
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(text)


def parse_field(text: str) -> Field:
    """Parse ``Q``, ``QQ``, ``F7``, ``GF7``, ``GF(7)`` or ``Fp 7``."""
    t = text.strip().replace(" ", "")
    if t in ("Q", "QQ"):
        return QQ
    m = re.fullmatch(r"(?:GF|Fp|F)\(?(\d+)\)?", t)
    if m:
        return GF(int(m.group(1)))
    raise ValueError(f"unknown field {text!r}")


def field_of(x) -> Field:
    if isinstance(x, FpElement):
        return GF(x.p)
    if isinstance(x, (Fraction, int)):
        return QQ
    raise TypeError(f"not a field element: {x!r}")


def format_scalar(x) -> str:
    return str(x)
