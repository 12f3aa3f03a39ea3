"""Exact arithmetic in the truncated polynomial rings Q[x1..xm]/(x1^d1, ..., xm^dm).

These rings are Artinian, local and connected, so an element is a unit
exactly when its constant term is nonzero, and the nilpotent ideal is the
set of elements with constant term zero.  All coefficients are
`fractions.Fraction`; nothing here is approximate.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import (
    InvalidRingSpecError,
    NotNilpotentError,
    NotOnePlusNilpotentError,
    NotUnitError,
    RingMismatchError,
)

Exponents = tuple[int, ...]
Scalar = Union[int, Fraction]


class Ring:
    """The ring Q[x1..xm]/(x1^d1, ..., xm^dm); m = 0 gives the field Q."""

    __slots__ = ("bounds", "ngens", "_zero_exp", "_zero", "_one")

    def __init__(self, bounds: Iterable[int] = ()):
        bounds = tuple(int(d) for d in bounds)
        if any(d < 1 for d in bounds):
            raise InvalidRingSpecError(f"degree bounds must be >= 1, got {bounds}")
        self.bounds = bounds
        self.ngens = len(bounds)
        self._zero_exp = (0,) * self.ngens
        self._zero = RingElement._raw(self, {})
        self._one = RingElement._raw(self, {self._zero_exp: Fraction(1)})

    @property
    def nilpotency_index(self) -> int:
        """Smallest K with Nil(A)^K = 0."""
        return 1 + sum(d - 1 for d in self.bounds)

    @property
    def zero(self) -> "RingElement":
        return self._zero

    @property
    def one(self) -> "RingElement":
        return self._one

    def constant(self, q: Scalar) -> "RingElement":
        q = Fraction(q)
        if q == 0:
            return self.zero
        return RingElement._raw(self, {self._zero_exp: q})

    def gen(self, i: int) -> "RingElement":
        """The i-th nilpotent generator (0-based)."""
        if not 0 <= i < self.ngens:
            raise InvalidRingSpecError(f"ring has {self.ngens} generators, asked for #{i}")
        exp = tuple(1 if j == i else 0 for j in range(self.ngens))
        if self.bounds[i] == 1:
            return self.zero
        return RingElement._raw(self, {exp: Fraction(1)})

    def element(self, terms: Mapping[Exponents, Scalar]) -> "RingElement":
        """Build an element from a {generator-exponents: rational} mapping."""
        out: dict[Exponents, Fraction] = {}
        for exp, c in terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.ngens:
                raise InvalidRingSpecError(f"exponent {exp} has wrong arity for {self}")
            if any(e < 0 for e in exp):
                raise InvalidRingSpecError(f"negative generator exponent in {exp}")
            c = Fraction(c)
            if c == 0 or any(e >= d for e, d in zip(exp, self.bounds)):
                continue
            out[exp] = out.get(exp, Fraction(0)) + c
        return RingElement._raw(self, {e: c for e, c in out.items() if c != 0})

    def __eq__(self, other) -> bool:
        return isinstance(other, Ring) and self.bounds == other.bounds

    def __hash__(self) -> int:
        return hash(("Ring", self.bounds))

    def __repr__(self) -> str:
        if self.ngens == 0:
            return "Ring(Q)"
        gens = ", ".join(f"e{i+1}^{d}" for i, d in enumerate(self.bounds))
        return f"Ring(Q[{gens}])"


def _check_same_ring(a: "RingElement", b: "RingElement") -> None:
    if a.ring != b.ring:
        raise RingMismatchError(f"elements of {a.ring} and {b.ring} cannot be combined")


class RingElement:
    """Element of a truncated polynomial ring; immutable after construction."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Mapping[Exponents, Scalar]):
        elt = ring.element(terms)
        self.ring = ring
        self.terms = elt.terms

    @classmethod
    def _raw(cls, ring: Ring, terms: dict[Exponents, Fraction]) -> "RingElement":
        self = object.__new__(cls)
        self.ring = ring
        self.terms = terms
        return self

    # -- predicates -------------------------------------------------------

    @property
    def constant_term(self) -> Fraction:
        return self.terms.get(self.ring._zero_exp, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_nilpotent(self) -> bool:
        return self.constant_term == 0

    @property
    def is_unit(self) -> bool:
        return self.constant_term != 0

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        _check_same_ring(self, other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp, Fraction(0)) + c
            if s == 0:
                out.pop(exp, None)
            else:
                out[exp] = s
        return RingElement._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return RingElement._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        _check_same_ring(self, other)
        bounds = self.ring.bounds
        if len(self.terms) == 1 and len(other.terms) == 1:
            (e1, c1), = self.terms.items()
            (e2, c2), = other.terms.items()
            exp = tuple(a + b for a, b in zip(e1, e2))
            if any(e >= d for e, d in zip(exp, bounds)):
                return self.ring._zero
            return RingElement._raw(self.ring, {exp: c1 * c2})
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                if any(e >= d for e, d in zip(exp, bounds)):
                    continue
                s = out.get(exp, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(exp, None)
                else:
                    out[exp] = s
        return RingElement._raw(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.invert() ** (-k)
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def invert(self) -> "RingElement":
        """Exact inverse; the unit criterion is 'constant term nonzero'."""
        c = self.constant_term
        if c == 0:
            raise NotUnitError(f"{self} has zero constant term, not a unit")
        # self = c * (1 + u) with u nilpotent, so invert the geometric way.
        u = (self - self.ring.constant(c)) * self.ring.constant(Fraction(1, 1) / c)
        acc = self.ring.one
        power = self.ring.one
        for _ in range(self.ring.nilpotency_index):
            power = power * (-u)
            if power.is_zero:
                break
            acc = acc + power
        return acc * self.ring.constant(Fraction(1, 1) / c)

    def exp(self) -> "RingElement":
        """exp of a nilpotent element; the defining series is a finite sum."""
        if not self.is_nilpotent:
            raise NotNilpotentError(f"exp needs a nilpotent argument, got {self}")
        acc = self.ring.one
        power = self.ring.one
        for k in range(1, self.ring.nilpotency_index + 1):
            power = power * self
            if power.is_zero:
                break
            acc = acc + power * self.ring.constant(Fraction(1, math.factorial(k)))
        return acc

    def log(self) -> "RingElement":
        """log of 1 + nilpotent; inverse of :meth:`exp`."""
        u = self - self.ring.one
        if not u.is_nilpotent:
            raise NotOnePlusNilpotentError(f"log needs 1 + nilpotent, got {self}")
        acc = self.ring.zero
        power = self.ring.one
        for k in range(1, self.ring.nilpotency_index + 1):
            power = power * u
            if power.is_zero:
                break
            acc = acc + power * self.ring.constant(Fraction((-1) ** (k + 1), k))
        return acc

    # -- comparisons and display ------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self.terms.items())))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for exp in sorted(self.terms):
            c = self.terms[exp]
            mono = "*".join(
                f"e{i+1}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(exp) if e > 0
            )
            if not mono:
                bits.append(str(c))
            elif c == 1:
                bits.append(mono)
            elif c == -1:
                bits.append(f"-{mono}")
            else:
                bits.append(f"{c}*{mono}")
        out = bits[0]
        for b in bits[1:]:
            out += f" - {b[1:]}" if b.startswith("-") else f" + {b}"
        return out

    def __repr__(self) -> str:
        return f"<{self} in {self.ring}>"
