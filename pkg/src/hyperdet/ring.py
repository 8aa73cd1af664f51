"""Exact commutative-ring scalars.

A :class:`RingSpec` describes one of four rings: the rationals ``Q``, the
integers ``Z``, the residues ``Z/m`` or a prime field ``F_p``.  Elements are
carried as plain Python payloads in canonical form (``Fraction`` for ``Q``,
``int`` for ``Z``, an ``int`` in ``[0, m)`` for the modular kinds) so that
numpy object arrays of payloads can be used directly by the tensor code.
:class:`RingValue` wraps a payload together with its ring for the public API.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterator

from .errors import ParseError, SpecMismatch, UnsupportedRing

__all__ = [
    "RingKind",
    "RingSpec",
    "RingValue",
    "Q",
    "Z",
    "Fp",
    "Zmod",
    "parse_ring",
    "ring_add",
    "ring_mul",
    "ring_neg",
    "ring_zero",
    "ring_one",
    "ring_is_zero",
    "ring_factorial",
    "is_prime",
]

PRIME_LIMIT = 2**31


def is_prime(p: int) -> bool:
    """Trial division; fine for the moduli this package accepts (< 2**31)."""
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class RingKind(enum.Enum):
    RATIONALS = "Q"
    INTEGERS = "Z"
    INTEGERS_MOD = "Zmod"
    PRIME_FIELD = "Fp"


_INT_RE = re.compile(r"[+-]?\d+\Z")
_FRAC_RE = re.compile(r"([+-]?\d+)/(\d+)\Z")


@dataclass(frozen=True)
class RingSpec:
    kind: RingKind
    modulus: int | None = None

    def __post_init__(self):
        if self.kind in (RingKind.RATIONALS, RingKind.INTEGERS):
            if self.modulus is not None:
                raise ValueError(f"{self.kind.value} takes no modulus")
        elif self.kind is RingKind.INTEGERS_MOD:
            if not isinstance(self.modulus, int) or self.modulus < 2:
                raise ValueError(f"Zmod needs a modulus >= 2, got {self.modulus!r}")
        else:
            p = self.modulus
            if not isinstance(p, int) or p >= PRIME_LIMIT or not is_prime(p):
                raise ValueError(f"Fp needs a prime below 2**31, got {p!r}")

    # -- descriptors -------------------------------------------------------

    def __str__(self):
        if self.modulus is None:
            return self.kind.value
        return f"{self.kind.value}:{self.modulus}"

    @property
    def characteristic(self) -> int:
        return 0 if self.modulus is None else self.modulus

    @property
    def is_modular(self) -> bool:
        return self.modulus is not None

    @property
    def is_field(self) -> bool:
        return self.kind in (RingKind.RATIONALS, RingKind.PRIME_FIELD)

    @property
    def is_finite(self) -> bool:
        return self.modulus is not None

    # -- payload arithmetic --------------------------------------------------
    # These operate on canonical payloads and are what the array code uses.

    def coerce(self, x) -> int | Fraction:
        """Map an int, Fraction, string or RingValue to a canonical payload."""
        if isinstance(x, RingValue):
            if x.spec != self:
                raise SpecMismatch(f"value in {x.spec} used as {self}")
            return x.payload
        if isinstance(x, str):
            return self.parse_value(x)
        if isinstance(x, bool):
            x = int(x)
        if self.kind is RingKind.RATIONALS:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                if self.kind is RingKind.INTEGERS:
                    raise ValueError(f"{x} is not an integer")
                return x.numerator * self.inv(x.denominator % self.modulus) % self.modulus
            x = x.numerator
        x = int(x)
        if self.modulus is None:
            return x
        return x % self.modulus

    def zero(self):
        return Fraction(0) if self.kind is RingKind.RATIONALS else 0

    def one(self):
        return Fraction(1) if self.kind is RingKind.RATIONALS else 1

    def add(self, a, b):
        s = a + b
        return s % self.modulus if self.modulus else s

    def sub(self, a, b):
        s = a - b
        return s % self.modulus if self.modulus else s

    def mul(self, a, b):
        s = a * b
        return s % self.modulus if self.modulus else s

    def neg(self, a):
        return (-a) % self.modulus if self.modulus else -a

    def inv(self, a):
        """Multiplicative inverse; only defined for fields (and units mod m)."""
        if self.kind is RingKind.INTEGERS:
            if a in (1, -1):
                return a
            raise UnsupportedRing(f"{a} is not a unit in Z")
        if self.kind is RingKind.RATIONALS:
            if a == 0:
                raise ZeroDivisionError("inverse of 0")
            return 1 / Fraction(a)
        try:
            return pow(int(a), -1, self.modulus)
        except ValueError:
            raise ZeroDivisionError(f"{a} is not invertible mod {self.modulus}") from None

    def from_int(self, k: int):
        return self.coerce(int(k))

    def elements(self) -> Iterator[int]:
        if not self.is_finite:
            raise UnsupportedRing(f"{self} is infinite")
        return iter(range(self.modulus))

    # -- text form -------------------------------------------------------------

    def format(self, payload) -> str:
        return str(payload)

    def parse_value(self, s: str):
        s = s.strip()
        if _INT_RE.match(s):
            return self.coerce(int(s))
        m = _FRAC_RE.match(s)
        if m and self.kind is RingKind.RATIONALS:
            den = int(m.group(2))
            if den == 0:
                raise ParseError(f"zero denominator in {s!r}")
            return Fraction(int(m.group(1)), den)
        raise ParseError(f"cannot parse {s!r} as an element of {self}")

    def __call__(self, x) -> "RingValue":
        return RingValue(self, self.coerce(x))


Q = RingSpec(RingKind.RATIONALS)
Z = RingSpec(RingKind.INTEGERS)


def Fp(p: int) -> RingSpec:
    return RingSpec(RingKind.PRIME_FIELD, p)


def Zmod(m: int) -> RingSpec:
    return RingSpec(RingKind.INTEGERS_MOD, m)


def parse_ring(text: str) -> RingSpec:
    """Parse ``Q``, ``Z``, ``Zmod:<m>`` or ``Fp:<p>``."""
    text = text.strip()
    if text == "Q":
        return Q
    if text == "Z":
        return Z
    head, sep, tail = text.partition(":")
    if sep and tail.isdigit():
        try:
            if head == "Fp":
                return Fp(int(tail))
            if head == "Zmod":
                return Zmod(int(tail))
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    raise ParseError(f"bad ring descriptor {text!r}")


@dataclass(frozen=True)
class RingValue:
    """An element of a ring; immutable, hashable, canonical."""

    spec: RingSpec
    payload: int | Fraction

    def _other(self, other) -> int | Fraction:
        if isinstance(other, RingValue):
            if other.spec != self.spec:
                raise SpecMismatch(f"{self.spec} vs {other.spec}")
            return other.payload
        return self.spec.coerce(other)

    def __add__(self, other):
        return RingValue(self.spec, self.spec.add(self.payload, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return RingValue(self.spec, self.spec.sub(self.payload, self._other(other)))

    def __rsub__(self, other):
        return RingValue(self.spec, self.spec.sub(self._other(other), self.payload))

    def __mul__(self, other):
        return RingValue(self.spec, self.spec.mul(self.payload, self._other(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return RingValue(self.spec, self.spec.neg(self.payload))

    def __eq__(self, other):
        if isinstance(other, RingValue):
            return self.spec == other.spec and self.payload == other.payload
        if isinstance(other, (int, Fraction)):
            try:
                return self.payload == self.spec.coerce(other)
            except (ValueError, ZeroDivisionError):
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.spec, self.payload))

    def __bool__(self):
        return self.payload != 0

    def is_zero(self) -> bool:
        return self.payload == 0

    def inverse(self) -> "RingValue":
        return RingValue(self.spec, self.spec.inv(self.payload))

    def __str__(self):
        return self.spec.format(self.payload)

    def __repr__(self):
        return f"RingValue({self.spec}, {self})"


def _check(a: RingValue, b: RingValue):
    if a.spec != b.spec:
        raise SpecMismatch(f"{a.spec} vs {b.spec}")


def ring_add(a: RingValue, b: RingValue) -> RingValue:
    _check(a, b)
    return a + b


def ring_mul(a: RingValue, b: RingValue) -> RingValue:
    _check(a, b)
    return a * b


def ring_neg(a: RingValue) -> RingValue:
    return -a


def ring_zero(spec: RingSpec) -> RingValue:
    return RingValue(spec, spec.zero())


def ring_one(spec: RingSpec) -> RingValue:
    return RingValue(spec, spec.one())


def ring_is_zero(a: RingValue) -> bool:
    return a.is_zero()


def ring_factorial(spec: RingSpec, n: int) -> RingValue:
    """Image of ``n!`` under the canonical map Z -> R."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return spec(factorial(n))
