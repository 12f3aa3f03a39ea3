"""n-fold iterated Laurent series over a truncated coefficient ring.

A series is a finite dictionary {exponent vector: coefficient} together with
a rectangular *window* of upper bounds (P1, ..., Pn): the series is exact at
every exponent l with l_i < P_i for all i, and says nothing about exponents
outside that region.  Monomial order is lexicographic from the last variable:
(l_1, ..., l_n) <= (l'_1, ..., l'_n) iff l_n < l'_n, or l_n = l'_n and the
prefix comparison holds.  This order decides positivity of support,
valuations and topological nilpotence.

All arithmetic is exact inside the computed windows.  Window propagation for
products is conservative: coordinate i of the product window is
min(P_f,i + lo_i(g), P_g,i + lo_i(f)) with lo_i the smallest stored exponent
(or the factor's own bound when nothing is stored).  Truncating iterations
(inversion, exp, log, the unit decomposition) run at an internally padded
working window so that every kept coefficient is the true value for the
stored input, and shrink the claimed output window by the nilpotent
re-entry budget of the input; a cap turns silent divergence into
NonTerminatingError.  Exactness of the rectangular model is only as good as
the support shapes allow: invertible coefficients at exponents outside the
nonnegative orthant can combine escape-and-return paths that no rectangle
captures, so callers who need exact identities keep such content nilpotent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .coeffring import Ring, RingElement
from .errors import (
    EmptyWindowError,
    InsufficientWindowError,
    NonTerminatingError,
    NotTopNilpotentError,
    NotUnitError,
    OutsideWindowError,
    RingMismatchError,
    TermOutsideWindowError,
    ZeroModNilError,
)

INF = math.inf

ExpVec = tuple[int, ...]
Window = tuple  # entries are ints or math.inf


# --- lexicographic order helpers -------------------------------------------

def lex_key(l: ExpVec) -> ExpVec:
    """Sort key realizing the last-coordinate-first order."""
    return tuple(reversed(l))


def lex_sign(l: ExpVec) -> int:
    """+1, 0 or -1 according to the position of l relative to 0."""
    for i in range(len(l) - 1, -1, -1):
        if l[i]:
            return 1 if l[i] > 0 else -1
    return 0


def lex_min(vectors: Iterable[ExpVec]) -> ExpVec:
    return min(vectors, key=lex_key)


# --- window helpers ---------------------------------------------------------

def normalize_window(window, nvars: int) -> Window:
    if window is None:
        return (INF,) * nvars
    w = tuple(INF if (p is None or p == INF) else int(p) for p in window)
    if len(w) != nvars:
        raise TermOutsideWindowError(f"window {window} has wrong arity, expected {nvars}")
    return w


def window_min(a: Window, b: Window) -> Window:
    return tuple(min(x, y) for x, y in zip(a, b))


def window_shift(w: Window, l: ExpVec) -> Window:
    return tuple(p + x for p, x in zip(w, l))


def inside_window(l: ExpVec, w: Window) -> bool:
    return all(x < p for x, p in zip(l, w))


def _lo(s: "Series", i: int):
    """Smallest i-th exponent the factor can contribute to a product."""
    if s.terms:
        return min(l[i] for l in s.terms)
    return s.window[i]


# --- classification record & decomposition ---------------------------------

@dataclass(frozen=True)
class Classification:
    is_unit: bool
    is_top_nilpotent: bool
    v: Optional[ExpVec]
    leading: Optional[RingElement]


@dataclass(frozen=True)
class Decomposition:
    """f = a * fplus * fminus * t^v with a a unit of the coefficient ring,
    fplus supported on {0} u {lex > 0} with constant term 1, and fminus
    supported on {0} u {lex < 0} with constant term 1 and nilpotent tail."""

    a: RingElement
    fplus: "Series"
    fminus: "Series"
    v: ExpVec

    def sharp_part(self) -> "Series":
        """The combined factor fplus * fminus, an element of 1 + (top-nilpotent)."""
        return self.fplus * self.fminus

    def product(self) -> "Series":
        return (self.fplus * self.fminus).scale(self.a).mul_monomial(self.v)


class Series:
    """Finitely supported view of an iterated Laurent series below a window."""

    __slots__ = ("ring", "nvars", "terms", "window")

    def __init__(self, ring: Ring, nvars: int, terms: Mapping[ExpVec, object],
                 window=None):
        window = normalize_window(window, nvars)
        clean: dict[ExpVec, RingElement] = {}
        for l, c in terms.items():
            l = tuple(int(x) for x in l)
            if len(l) != nvars:
                raise TermOutsideWindowError(f"exponent {l} has wrong arity, expected {nvars}")
            if not isinstance(c, RingElement):
                c = ring.constant(c)
            elif c.ring != ring:
                raise RingMismatchError("coefficient from a different ring")
            if c.is_zero:
                continue
            if not inside_window(l, window):
                raise TermOutsideWindowError(f"term at {l} lies outside window {window}")
            clean[l] = c
        self.ring = ring
        self.nvars = nvars
        self.terms = clean
        self.window = window

    @classmethod
    def _raw(cls, ring: Ring, nvars: int, terms: dict[ExpVec, RingElement],
             window: Window) -> "Series":
        self = object.__new__(cls)
        self.ring = ring
        self.nvars = nvars
        self.terms = terms
        self.window = window
        return self

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ring: Ring, nvars: int, window=None) -> "Series":
        return cls._raw(ring, nvars, {}, normalize_window(window, nvars))

    @classmethod
    def constant(cls, ring: Ring, nvars: int, value, window=None) -> "Series":
        return cls.monomial(ring, nvars, (0,) * nvars, value, window)

    @classmethod
    def one(cls, ring: Ring, nvars: int, window=None) -> "Series":
        return cls.constant(ring, nvars, 1, window)

    @classmethod
    def monomial(cls, ring: Ring, nvars: int, exps, coeff=1, window=None) -> "Series":
        window = normalize_window(window, nvars)
        exps = tuple(int(x) for x in exps)
        if not isinstance(coeff, RingElement):
            coeff = ring.constant(coeff)
        terms = {}
        if not coeff.is_zero and inside_window(exps, window):
            terms[exps] = coeff
        return cls._raw(ring, nvars, terms, window)

    @classmethod
    def variable(cls, ring: Ring, nvars: int, i: int, window=None) -> "Series":
        """The series t_{i+1}."""
        exps = tuple(1 if j == i else 0 for j in range(nvars))
        return cls.monomial(ring, nvars, exps, 1, window)

    # -- structural helpers --------------------------------------------------

    def _check_compatible(self, other: "Series") -> None:
        if not isinstance(other, Series):
            raise RingMismatchError(f"cannot combine a series with {type(other).__name__}")
        if self.ring != other.ring or self.nvars != other.nvars:
            raise RingMismatchError("series live over different rings or variable counts")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, l) -> RingElement:
        l = tuple(int(x) for x in l)
        if not inside_window(l, self.window):
            raise OutsideWindowError(f"exponent {l} is outside window {self.window}")
        return self.terms.get(l, self.ring.zero)

    def truncate(self, window) -> "Series":
        """Restrict to the intersection with the given window (never enlarges)."""
        w = window_min(self.window, normalize_window(window, self.nvars))
        return Series._raw(self.ring, self.nvars,
                           {l: c for l, c in self.terms.items() if inside_window(l, w)}, w)

    def agrees_with(self, other: "Series") -> bool:
        """Equality on the intersection of the two windows."""
        self._check_compatible(other)
        w = window_min(self.window, other.window)
        mine = {l: c for l, c in self.terms.items() if inside_window(l, w)}
        theirs = {l: c for l, c in other.terms.items() if inside_window(l, w)}
        return mine == theirs

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return (self.ring == other.ring and self.nvars == other.nvars
                and self.terms == other.terms and self.window == other.window)

    # -- linear operations ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction, RingElement)):
            other = Series.constant(self.ring, self.nvars, other, self.window)
        self._check_compatible(other)
        w = window_min(self.window, other.window)
        out = {l: c for l, c in self.terms.items() if inside_window(l, w)}
        for l, c in other.terms.items():
            if not inside_window(l, w):
                continue
            s = out.get(l)
            s = c if s is None else s + c
            if s.is_zero:
                out.pop(l, None)
            else:
                out[l] = s
        return Series._raw(self.ring, self.nvars, out, w)

    __radd__ = __add__

    def __neg__(self):
        return Series._raw(self.ring, self.nvars,
                           {l: -c for l, c in self.terms.items()}, self.window)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, RingElement)):
            other = Series.constant(self.ring, self.nvars, other, self.window)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Series":
        """Multiply every coefficient by a ring element (or rational)."""
        if not isinstance(c, RingElement):
            c = self.ring.constant(c)
        out = {}
        for l, x in self.terms.items():
            y = x * c
            if not y.is_zero:
                out[l] = y
        return Series._raw(self.ring, self.nvars, out, self.window)

    def mul_monomial(self, l, coeff=None) -> "Series":
        """Multiply by the exact monomial coeff * t^l; the window shifts by l."""
        l = tuple(int(x) for x in l)
        out = {tuple(a + b for a, b in zip(m, l)): c for m, c in self.terms.items()}
        s = Series._raw(self.ring, self.nvars, out, window_shift(self.window, l))
        if coeff is not None:
            s = s.scale(coeff)
        return s

    # -- multiplication --------------------------------------------------------

    def _product_window(self, other: "Series") -> Window:
        w = []
        for i in range(self.nvars):
            w.append(min(self.window[i] + _lo(other, i), other.window[i] + _lo(self, i)))
        return tuple(w)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RingElement)):
            return self.scale(other)
        self._check_compatible(other)
        w = self._product_window(other)
        if self.terms and other.terms:
            # Stored terms sit strictly inside their windows, so this cannot
            # fire through public constructors; it guards the representation.
            for i in range(self.nvars):
                if w[i] <= _lo(self, i) + _lo(other, i):
                    raise EmptyWindowError(
                        f"product window {w} is empty in coordinate {i + 1}")
        return Series._raw(self.ring, self.nvars,
                           _convolve(self.terms, other.terms, w), w)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, RingElement)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.invert() ** (-k)
        result = Series.one(self.ring, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # -- calculus ---------------------------------------------------------------

    def derivative(self, i: int) -> "Series":
        """Partial derivative with respect to t_{i+1} (0-based index)."""
        if not 0 <= i < self.nvars:
            raise OutsideWindowError(f"no variable with index {i}")
        out = {}
        for l, c in self.terms.items():
            if l[i] == 0:
                continue
            m = tuple(x - 1 if j == i else x for j, x in enumerate(l))
            out[m] = c * l[i]
        w = tuple(p - 1 if j == i else p for j, p in enumerate(self.window))
        return Series._raw(self.ring, self.nvars, out, w)

    # -- classification -----------------------------------------------------------

    @property
    def is_top_nilpotent(self) -> bool:
        """Stored-support test: every coefficient at lex-nonpositive exponent
        is nilpotent.  Sufficient for finitely supported series."""
        return all(c.is_nilpotent for l, c in self.terms.items() if lex_sign(l) <= 0)

    @property
    def is_sharp(self) -> bool:
        """True when the series is 1 + (topologically nilpotent)."""
        zero_exp = (0,) * self.nvars
        if not inside_window(zero_exp, self.window):
            raise InsufficientWindowError(
                "cannot test sharpness: the constant term is outside the window")
        if self.terms.get(zero_exp, self.ring.zero).constant_term != 1:
            return False
        return all(c.is_nilpotent for l, c in self.terms.items()
                   if lex_sign(l) < 0)

    def classify(self, require_valuation: bool = False) -> Classification:
        """Unit test, valuation and leading coefficient, per the criterion
        'leading coefficient invertible, everything lex-below it nilpotent'."""
        unit_support = [l for l, c in self.terms.items() if not c.is_nilpotent]
        top_nil = self.is_top_nilpotent
        if unit_support:
            v = lex_min(unit_support)
            return Classification(True, top_nil, v, self.terms[v])
        if all(p == INF for p in self.window):
            if require_valuation:
                raise ZeroModNilError("series is zero modulo nilpotents: no valuation")
            return Classification(False, top_nil, None, None)
        raise InsufficientWindowError(
            "no invertible coefficient inside the window; enlarge it to classify")

    def valuation(self) -> ExpVec:
        return self.classify(require_valuation=True).v

    # -- inversion, exp/log, decomposition ----------------------------------------

    def invert(self) -> "Series":
        """Inverse of a unit: factor out leading coefficient and t^v, then sum
        the geometric series of the topologically nilpotent remainder."""
        cls = self.classify()
        if not cls.is_unit:
            raise NotUnitError("cannot invert: series is zero modulo nilpotents")
        v, a = cls.v, cls.leading
        ainv = a.invert()
        h = self.mul_monomial(tuple(-x for x in v), ainv)  # 1 + g on window W
        w = h.window
        g = h - Series.one(self.ring, self.nvars, w)
        acc = _with_window(_geometric_inverse(g, w), _nilpotent_shrink(g, w))
        return acc.scale(ainv).mul_monomial(tuple(-x for x in v))

    def exp(self) -> "Series":
        """exp of a topologically nilpotent series, exact below the window."""
        if not self.is_top_nilpotent:
            raise NotTopNilpotentError("exp needs a topologically nilpotent argument")
        w = self.window
        work = _padded_window(self, w)
        acc = Series.one(self.ring, self.nvars, work)
        power = acc
        cap = _iteration_cap(self, work)
        for k in range(1, cap + 1):
            power = _mul_fixed(power, self, work).scale(Fraction(1, k))
            if not power.terms:
                return _with_window(acc, _nilpotent_shrink(self, w))
            acc = _add_fixed(acc, power, work)
        raise NonTerminatingError(f"exp did not terminate within {cap} iterations")

    def log(self) -> "Series":
        """log of 1 + (topologically nilpotent); inverse of :meth:`exp`."""
        w = self.window
        g = self - Series.one(self.ring, self.nvars, w)
        if not g.is_top_nilpotent:
            raise NotTopNilpotentError("log needs an argument of the form 1 + top-nilpotent")
        work = _padded_window(g, w)
        acc = Series.zero(self.ring, self.nvars, work)
        power = Series.one(self.ring, self.nvars, work)
        cap = _iteration_cap(g, work)
        for k in range(1, cap + 1):
            power = _mul_fixed(power, g, work)
            if not power.terms:
                return _with_window(acc, _nilpotent_shrink(g, w))
            acc = _add_fixed(acc, power.scale(Fraction((-1) ** (k + 1), k)), work)
        raise NonTerminatingError(f"log did not terminate within {cap} iterations")

    def decompose(self) -> Decomposition:
        """Unique splitting f = a * fplus * fminus * t^v of a unit.

        Start from f modulo nilpotents (which lies in a*V+ after factoring
        t^v) and lift: at each round split the multiplicative residual
        1 + r into lex-negative / constant / lex-positive parts and absorb
        them into fminus, a, fplus.  The residual's coefficients live in
        Nil^(2^k) after k rounds, so Nil^K = 0 forces exact termination.
        """
        cls = self.classify()
        if not cls.is_unit:
            raise NotUnitError("cannot decompose: series is zero modulo nilpotents")
        v = cls.v
        h = self.mul_monomial(tuple(-x for x in v))
        w = h.window
        g = h - Series.one(self.ring, self.nvars, w)
        claim = _nilpotent_shrink(g, w)
        # each round re-divides h, losing a band of the working window per
        # product; pad beyond the power-iteration budget to keep the residual
        # true below the claim through all K+2 rounds
        k = self.ring.nilpotency_index
        work = []
        for i, p in enumerate(_padded_window(g, w)):
            if p == INF:
                work.append(INF)
                continue
            lo = min((l[i] for l in g.terms), default=0)
            work.append(p + (2 * k + 4) * max(0, -lo) + 2)
        work = tuple(work)

        r0 = cls.leading.constant_term
        plus_terms = {}
        for l, c in h.terms.items():
            q = c.constant_term
            if q != 0:
                plus_terms[l] = self.ring.constant(q / r0)
        a = self.ring.constant(r0)
        fplus = Series._raw(self.ring, self.nvars, plus_terms, work)
        fminus = Series.one(self.ring, self.nvars, work)
        one = Series.one(self.ring, self.nvars, work)

        for _ in range(k + 2):
            prod = _mul_fixed(fplus, fminus, work).scale(a)
            r = _add_fixed(_mul_fixed(h, _inverse_fixed(prod, work), work), -one, work)
            # only the residual below the claim is trustworthy; anything
            # between claim and work is boundary junk of the truncation
            r = _with_window(r, claim)
            if not r.terms:
                break
            rneg, rpos = {}, {}
            rconst = self.ring.zero
            for l, c in r.terms.items():
                s = lex_sign(l)
                if s < 0:
                    rneg[l] = c
                elif s > 0:
                    rpos[l] = c
                else:
                    rconst = c
            a = a * (self.ring.one + rconst)
            if rpos:
                fplus = _mul_fixed(fplus, _add_fixed(one, Series._raw(
                    self.ring, self.nvars, rpos, work), work), work)
            if rneg:
                fminus = _mul_fixed(fminus, _add_fixed(one, Series._raw(
                    self.ring, self.nvars, rneg, work), work), work)
        else:
            raise NonTerminatingError("unit decomposition failed to stabilize")
        return Decomposition(a, _with_window(fplus, claim),
                             _with_window(fminus, claim), v)

    # -- display ------------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for l in sorted(self.terms, key=lex_key):
            c = self.terms[l]
            mono = "*".join(
                f"t{i+1}" + (f"^{e}" if e != 1 else "")
                for i, e in enumerate(l) if e != 0
            )
            cs = str(c)
            if " " in cs:
                cs = f"({cs})"
            if not mono:
                bits.append(cs)
            elif cs == "1":
                bits.append(mono)
            elif cs == "-1":
                bits.append(f"-{mono}")
            else:
                bits.append(f"{cs}*{mono}")
        out = bits[0]
        for b in bits[1:]:
            out += f" - {b[1:]}" if b.startswith("-") else f" + {b}"
        return out

    def __repr__(self) -> str:
        w = ",".join("inf" if p == INF else str(p) for p in self.window)
        return f"<series {self} | window {w}>"


# --- fixed-window kernels ----------------------------------------------------

def _convolve(a: dict, b: dict, window: Window) -> dict:
    out: dict[ExpVec, RingElement] = {}
    for l1, c1 in a.items():
        for l2, c2 in b.items():
            l = tuple(x + y for x, y in zip(l1, l2))
            if not inside_window(l, window):
                continue
            c = c1 * c2
            if c.is_zero:
                continue
            s = out.get(l)
            s = c if s is None else s + c
            if s.is_zero:
                out.pop(l, None)
            else:
                out[l] = s
    return out


def _mul_fixed(f: Series, g: Series, window: Window) -> Series:
    return Series._raw(f.ring, f.nvars, _convolve(f.terms, g.terms, window), window)


def _add_fixed(f: Series, g: Series, window: Window) -> Series:
    out = {l: c for l, c in f.terms.items() if inside_window(l, window)}
    for l, c in g.terms.items():
        if not inside_window(l, window):
            continue
        s = out.get(l)
        s = c if s is None else s + c
        if s.is_zero:
            out.pop(l, None)
        else:
            out[l] = s
    return Series._raw(f.ring, f.nvars, out, window)


def _with_window(s: Series, window: Window) -> Series:
    """Hard reset of the window; internal use by fixed-window iterations."""
    return Series._raw(s.ring, s.nvars,
                       {l: c for l, c in s.terms.items() if inside_window(l, window)},
                       window)


def _iteration_cap(g: Series, window: Window) -> int:
    k = g.ring.nilpotency_index
    diam = 0
    for i, p in enumerate(window):
        if p == INF:
            continue
        lo = min((l[i] for l in g.terms), default=p)
        diam += max(0, p - lo)
    return 10 * (diam + k) + 10


def _padded_window(g: Series, window: Window) -> Window:
    """Working window for truncating power iterations of g soundly.

    Dropping a term outside the target window is only safe if no later
    product with terms of g can bring it back inside.  Coefficients pick up
    a nilpotent factor from every lex-nonpositive term (so at most K-1 of
    those contribute), while lex-positive terms never decrease the last
    coordinate; walking coordinates from the last one down, the possible
    future decrease of each coordinate is bounded by the number of
    still-alive factors times the deepest negative step of g.  The returned
    window adds exactly that budget.
    """
    n = g.nvars
    if not g.terms:
        return window
    k = g.ring.nilpotency_index
    lo = [min(l[i] for l in g.terms) for i in range(n)]
    padded = [None] * n
    count_above = 0  # bound on factors whose last positive coordinate is > i
    for i in range(n - 1, -1, -1):
        drop = max(0, -lo[i])
        if drop == 0:
            dec = 0
        elif count_above == INF:
            dec = INF
        else:
            dec = (k - 1 + count_above) * drop
        if window[i] == INF or dec == INF:
            padded[i] = INF
        else:
            padded[i] = window[i] + dec
        if padded[i] == INF:
            count_above = INF
        elif count_above != INF:
            count_above += max(0, padded[i] + dec)
    return tuple(padded)


def _nilpotent_shrink(g: Series, window: Window) -> Window:
    """How far the claimable window drops because of hidden input content.

    Terms of the input beyond its window can multiply the stored nilpotent
    negative-exponent terms (at most K-1 of them before the coefficient
    dies) and land back below the window, so results of truncating
    operations are only exact below window - (K-1)*|negative nilpotent
    support| in every coordinate."""
    k = g.ring.nilpotency_index
    out = []
    for i, p in enumerate(window):
        if p == INF:
            out.append(INF)
            continue
        lo = min((l[i] for l, c in g.terms.items() if c.is_nilpotent), default=0)
        out.append(p - (k - 1) * max(0, -lo))
    return tuple(out)


def _geometric_inverse(g: Series, window: Window) -> Series:
    """(1 + g)^-1 = sum (-g)^k, exact below the window for the stored g."""
    work = _padded_window(g, window)
    one = Series.one(g.ring, g.nvars, work)
    acc = one
    power = one
    neg = -g
    cap = _iteration_cap(g, work)
    for _ in range(cap):
        power = _mul_fixed(power, neg, work)
        if not power.terms:
            return _with_window(acc, window)
        acc = _add_fixed(acc, power, work)
    raise NonTerminatingError(
        f"inversion did not terminate within {cap} iterations; "
        "the window is too small or the argument is not a unit")


def _inverse_fixed(u: Series, window: Window) -> Series:
    """Inverse of a unit with valuation 0, computed at a fixed window."""
    zero_exp = (0,) * u.nvars
    c = u.terms.get(zero_exp)
    if c is None or not c.is_unit:
        raise NotUnitError("internal inversion expects a unit constant term")
    cinv = c.invert()
    g = _add_fixed(u.scale(cinv), -Series.one(u.ring, u.nvars, window), window)
    return _geometric_inverse(g, window).scale(cinv)
