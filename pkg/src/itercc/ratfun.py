"""Rational functions on the projective line over A, and their local expansions.

A rational function is a pair of univariate polynomials over the coefficient
ring.  Points are rational numbers x (local parameter t - x) or the point at
infinity (local parameter 1/t).  Expanding numerator and denominator around a
point and dividing in the one-variable series ring gives the local image used
by the reciprocity check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping, Optional

from .coeffring import Ring, RingElement
from .errors import ExpansionFailureError, RingMismatchError
from .series import Series


class Poly:
    """Sparse univariate polynomial over a truncated coefficient ring."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: Ring, coeffs: Mapping[int, object]):
        clean: dict[int, RingElement] = {}
        for k, c in coeffs.items():
            k = int(k)
            if k < 0:
                raise ExpansionFailureError("polynomials have nonnegative exponents")
            if not isinstance(c, RingElement):
                c = ring.constant(c)
            elif c.ring != ring:
                raise RingMismatchError("coefficient from a different ring")
            if not c.is_zero:
                clean[k] = c
        self.ring = ring
        self.coeffs = clean

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Largest stored exponent; -1 for the zero polynomial."""
        return max(self.coeffs, default=-1)

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s.is_zero:
                out.pop(k, None)
            else:
                out[k] = s
        return Poly(self.ring, out)

    def __neg__(self) -> "Poly":
        return Poly(self.ring, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        out: dict[int, RingElement] = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                c = c1 * c2
                if c.is_zero:
                    continue
                k = k1 + k2
                s = out.get(k)
                s = c if s is None else s + c
                if s.is_zero:
                    out.pop(k, None)
                else:
                    out[k] = s
        return Poly(self.ring, out)

    def scale(self, c) -> "Poly":
        if not isinstance(c, RingElement):
            c = self.ring.constant(c)
        return Poly(self.ring, {k: x * c for k, x in self.coeffs.items()})

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ExpansionFailureError("negative polynomial power")
        result = Poly(self.ring, {0: 1})
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shifted(self, x: Fraction) -> "Poly":
        """The polynomial P(x + t) as a polynomial in t, by binomial expansion."""
        out = Poly(self.ring, {})
        for k, c in self.coeffs.items():
            # (x + t)^k = sum_j C(k, j) x^(k-j) t^j
            binom = 1
            row: dict[int, RingElement] = {}
            for j in range(k + 1):
                row[j] = c * (Fraction(binom) * x ** (k - j))
                binom = binom * (k - j) // (j + 1)
            out = out + Poly(self.ring, row)
        return out

    def rational_part(self) -> dict[int, Fraction]:
        """The polynomial modulo nilpotents, as {exponent: rational}."""
        out = {}
        for k, c in self.coeffs.items():
            q = c.constant_term
            if q != 0:
                out[k] = q
        return out

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        bits = []
        for k in sorted(self.coeffs):
            c = str(self.coeffs[k])
            if " " in c:
                c = f"({c})"
            bits.append(c if k == 0 else (f"{c}*t^{k}" if k > 1 else f"{c}*t"))
        return " + ".join(bits)


@dataclass(frozen=True)
class Point:
    """A rational point of the projective line, or the point at infinity."""

    x: Optional[Fraction]  # None encodes infinity

    @classmethod
    def finite(cls, x) -> "Point":
        return cls(Fraction(x))

    @classmethod
    def infinity(cls) -> "Point":
        return cls(None)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __str__(self) -> str:
        return "inf" if self.x is None else str(self.x)


class RationalFunction:
    """Quotient of polynomials over A; the function must stay a unit of
    the function field tensored with A (numerator and denominator nonzero
    modulo nilpotents)."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly):
        if num.ring != den.ring:
            raise RingMismatchError("numerator and denominator over different rings")
        if not den.rational_part():
            raise ExpansionFailureError("denominator is zero modulo nilpotents")
        if not num.rational_part():
            raise ExpansionFailureError("numerator is zero modulo nilpotents")
        self.num = num
        self.den = den

    @property
    def ring(self) -> Ring:
        return self.num.ring

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __str__(self) -> str:
        if self.den.coeffs == {0: self.ring.one}:
            return str(self.num)
        return f"({self.num}) / ({self.den})"


def rational_roots(coeffs: Mapping[int, Fraction]) -> tuple[dict[Fraction, int], int]:
    """All rational roots with multiplicities of a nonzero rational polynomial.

    Returns (roots, leftover_degree) where leftover_degree counts the part of
    the polynomial that has no rational zeros.
    """
    if not coeffs:
        raise ExpansionFailureError("zero polynomial has no well-defined roots")
    roots: dict[Fraction, int] = {}
    work = dict(coeffs)
    # strip the power of t: root at 0
    low = min(work)
    if low > 0:
        roots[Fraction(0)] = low
        work = {k - low: c for k, c in work.items()}
    deg = max(work)
    if deg == 0:
        return roots, 0
    # clear denominators to an integer polynomial
    mult = 1
    for c in work.values():
        mult = mult * c.denominator // gcd(mult, c.denominator)
    ivec = [int(work.get(k, Fraction(0)) * mult) for k in range(deg + 1)]

    def divide_out(vec: list[int], root: Fraction) -> Optional[list[int]]:
        # synthetic division by (t - root) over Q; None if not a root
        rem = Fraction(0)
        out = [Fraction(0)] * (len(vec) - 1)
        for k in range(len(vec) - 1, 0, -1):
            out[k - 1] = Fraction(vec[k]) + rem
            rem = out[k - 1] * root
        if Fraction(vec[0]) + rem != 0:
            return None
        m = 1
        for q in out:
            m = m * q.denominator // gcd(m, q.denominator)
        return [int(q * m) for q in out]

    def candidates(vec: list[int]):
        a0, ad = abs(vec[0]), abs(vec[-1])
        ps = [d for d in range(1, a0 + 1) if a0 % d == 0]
        qs = [d for d in range(1, ad + 1) if ad % d == 0]
        seen = set()
        for p in ps:
            for q in qs:
                for sign in (1, -1):
                    c = Fraction(sign * p, q)
                    if c not in seen:
                        seen.add(c)
                        yield c

    while len(ivec) > 1:
        if ivec[0] == 0:
            roots[Fraction(0)] = roots.get(Fraction(0), 0) + 1
            ivec = ivec[1:]
            continue
        for cand in candidates(ivec):
            nxt = divide_out(ivec, cand)
            if nxt is not None:
                roots[cand] = roots.get(cand, 0) + 1
                ivec = nxt
                break
        else:
            break
    return roots, len(ivec) - 1


def _laurent(ring: Ring, coeffs: Mapping[int, RingElement], window: int) -> Series:
    # Dropping exponents at/above the window keeps exactness below it.
    return Series(ring, 1, {(k,): c for k, c in coeffs.items() if k < window},
                  (window,))


def local_expansion(rf: RationalFunction, point: Point, window: int) -> Series:
    """Image of the function in A((s)), s the local parameter at the point."""
    ring = rf.ring
    if point.is_infinity:
        # t = 1/s: a polynomial sum c_k t^k becomes sum c_k s^-k
        num = _laurent(ring, {-k: c for k, c in rf.num.coeffs.items()}, window)
        den = _laurent(ring, {-k: c for k, c in rf.den.coeffs.items()}, window)
    else:
        num = _laurent(ring, rf.num.shifted(point.x).coeffs, window)
        den = _laurent(ring, rf.den.shifted(point.x).coeffs, window)
    try:
        return num * den.invert()
    except Exception as exc:  # noqa: BLE001 - reported with position context
        raise ExpansionFailureError(f"cannot expand {rf} at {point}: {exc}") from exc
