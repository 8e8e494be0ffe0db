"""Exact scalars over the rationals and prime fields.

Internally the library works on *raw* values: :class:`fractions.Fraction`
for Q and canonical ``int`` residues for F_p.  A :class:`FieldSpec` knows
how to reduce, invert, parse and print raw values.  :class:`Scalar` is the
public immutable wrapper with operator overloading.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

__all__ = [
    "FieldSpec",
    "Scalar",
    "QQ",
    "GF",
    "scalar_parse",
    "scalar_inv",
    "field_enumerate",
]

_SCALAR_RE = re.compile(r"^\s*(-?[0-9]+)(?:/([0-9]+))?\s*$")
_FIELD_RE = re.compile(r"^(?:Q|QQ|F([0-9]+)|GF\(([0-9]+)\))$")

MAX_PRIME = 2**31


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Descriptor of the ground field: ``kind`` is ``"Q"`` or ``"Fp"``."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.p is not None:
                raise ValueError("the rational field takes no modulus")
        elif self.kind == "Fp":
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"modulus must be prime, got {self.p!r}")
            if self.p >= MAX_PRIME:
                raise ValueError(f"modulus must be < 2**31, got {self.p}")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    # -- descriptors ---------------------------------------------------
    @property
    def is_finite(self) -> bool:
        return self.kind == "Fp"

    def characteristic(self) -> int:
        return 0 if self.kind == "Q" else self.p

    def order(self) -> int | None:
        return self.p if self.kind == "Fp" else None

    @property
    def label(self) -> str:
        return "Q" if self.kind == "Q" else f"F{self.p}"

    @classmethod
    def from_label(cls, text: str) -> "FieldSpec":
        """Parse ``Q``, ``F5`` or ``GF(5)``."""
        m = _FIELD_RE.match(text.strip())
        if not m:
            raise ValueError(f"cannot parse field {text!r}")
        p = m.group(1) or m.group(2)
        return QQ if p is None else GF(int(p))

    def __str__(self) -> str:
        return self.label

    # -- raw arithmetic ------------------------------------------------
    def reduce(self, x):
        if self.kind == "Q":
            return x if type(x) is Fraction else Fraction(x)
        return x % self.p

    def coerce(self, x):
        """Map an int, Fraction or Scalar of this field to a raw value."""
        if isinstance(x, Scalar):
            if x.field != self:
                raise ValueError(f"scalar over {x.field} used in {self}")
            return x.value
        if self.kind == "Fp":
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise ZeroDivisionError(f"denominator vanishes in {self}")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    @property
    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError(f"inverse of zero in {self}")
        if self.kind == "Q":
            return 1 / x
        return pow(x, -1, self.p)

    def parse(self, text: str):
        m = _SCALAR_RE.match(text)
        if not m:
            raise ValueError(f"malformed scalar {text!r}")
        num, den = m.groups()
        if den is not None:
            if self.kind == "Fp":
                raise ValueError(f"fraction syntax not accepted over {self}: {text!r}")
            if int(den) == 0:
                raise ZeroDivisionError(f"zero denominator in {text!r}")
            return Fraction(int(num), int(den))
        return self.reduce(int(num))

    def format(self, x) -> str:
        return str(x)

    def elements(self) -> Iterator:
        if self.kind != "Fp":
            raise ValueError("cannot enumerate an infinite field")
        return iter(range(self.p))


QQ = FieldSpec("Q")


def GF(p: int) -> FieldSpec:
    return FieldSpec("Fp", p)


@dataclass(frozen=True)
class Scalar:
    """Immutable element of a :class:`FieldSpec`, stored canonically."""

    value: Union[int, Fraction]
    field: FieldSpec

    def __post_init__(self):
        if self.field.kind == "Q":
            if type(self.value) is not Fraction:
                object.__setattr__(self, "value", Fraction(self.value))
        elif not (isinstance(self.value, int) and 0 <= self.value < self.field.p):
            object.__setattr__(self, "value", self.field.coerce(self.value))

    def _other(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise ValueError(f"mixed fields {self.field} and {other.field}")
            return other.value
        if isinstance(other, (int, Fraction)):
            return self.field.coerce(other)
        return NotImplemented

    def _wrap(self, raw) -> "Scalar":
        return Scalar(self.field.reduce(raw), self.field)

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value - o)

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(o - self.value)

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self._wrap(self.value * self.field.inv(o))

    def __neg__(self):
        return self._wrap(-self.value)

    def __bool__(self):
        return self.value != 0

    def inverse(self) -> "Scalar":
        return Scalar(self.field.inv(self.value), self.field)

    def __str__(self):
        return self.field.format(self.value)

    def __repr__(self):
        return f"Scalar({self}, {self.field.label})"


def scalar_parse(text: str, field: FieldSpec) -> Scalar:
    return Scalar(field.parse(text), field)


def scalar_inv(x: Scalar) -> Scalar:
    return x.inverse()


def field_enumerate(field: FieldSpec) -> list[Scalar]:
    """All elements of a prime field in the order 0, 1, ..., p-1."""
    return [Scalar(v, field) for v in field.elements()]
