"""The sign pairing and the n-dimensional Contou-Carrere symbol.

The symbol of n+1 units is assembled multiplicatively from the three
defining reductions:

  * constants pair with valuations:   (a, f_1, ..., f_n) = a^det(v(f_1..f_n));
  * a sharp slot turns exponential:   (f_0 sharp, ...) =
        exp Res(log f_0  df_1/f_1 ^ ... ^ df_n/f_n);
  * pure monomials give signs:        (t^l_0, ..., t^l_n) = (-1)^sgn(l_0..l_n).

Each argument is split through the unit decomposition, the symbol expands
multilinearly into 3^(n+1) classified terms, and antisymmetry moves the
distinguished factor into slot 0 (each transposition inverts the value).
The classical tame symbol over Q is kept as an independent one-dimensional
oracle.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iterproduct

from .coeffring import RingElement
from .errors import (CrossCheckMismatchError, NotFieldError, NotSharpError,
                     NotUnitError, RingMismatchError)
from .intmat import det_cols
from .residue import residue, series_determinant
from .series import Series

_CONST, _SHARP, _MONO = 0, 1, 2


# --- the sign map -----------------------------------------------------------

def _minor_det(vectors, skip) -> int:
    return det_cols([v for k, v in enumerate(vectors) if k not in skip])


def _sgn_product_form(vectors) -> int:
    """1 + sum_i det(..hat l_i..) + prod_i (1 + det(..hat l_i..)), mod 2."""
    dets = [_minor_det(vectors, {i}) for i in range(len(vectors))]
    prod = 1
    for d in dets:
        prod *= 1 + d
    return (1 + sum(dets) + prod) % 2


def _sgn_pair_sum(vectors) -> int:
    """Pairwise form: sum over i < j of det(..hat l_i..hat l_j.., l_i * l_j),
    the last column being the componentwise product, mod 2."""
    m = len(vectors)
    total = 0
    for i in range(m):
        for j in range(i + 1, m):
            rest = [v for k, v in enumerate(vectors) if k != i and k != j]
            prod_col = tuple(a * b for a, b in zip(vectors[i], vectors[j]))
            total += det_cols(rest + [prod_col])
    return total % 2


def sgn(*vectors) -> int:
    """The unique polylinear antisymmetric sign of n+1 vectors in Z^n, in {0, 1}.

    Both closed formulas are evaluated and must agree; a mismatch would mean
    an implementation bug and raises instead of returning silently.
    """
    vectors = [tuple(int(x) for x in v) for v in vectors]
    n = len(vectors[0])
    if len(vectors) != n + 1 or any(len(v) != n for v in vectors):
        raise RingMismatchError(f"sgn takes {n + 1} vectors of length {n}")
    primary = _sgn_product_form(vectors)
    check = _sgn_pair_sum(vectors)
    if primary != check:
        raise CrossCheckMismatchError(
            f"sign formulas disagree on {vectors}: {primary} vs {check}")
    return primary


# --- the symbol -------------------------------------------------------------

def cc_sharp(f0: Series, *rest: Series) -> RingElement:
    """exp Res(log f0 df1/f1 ^ ... ^ dfn/fn) for f0 = 1 + (top-nilpotent)."""
    n = f0.nvars
    if len(rest) != n:
        raise RingMismatchError(f"symbol over {n} variables takes {n + 1} arguments")
    if not f0.is_sharp:
        raise NotSharpError(f"slot 0 must be 1 + (topologically nilpotent), got {f0}")
    logf0 = f0.log()
    rows = []
    scale = Series.one(f0.ring, n)
    for f in rest:
        f0._check_compatible(f)
        rows.append([f.derivative(j) for j in range(n)])
        scale = scale * f.invert()
    form = logf0 * series_determinant(rows) * scale
    return residue(form).exp()


def _value_power(value: RingElement, k: int) -> RingElement:
    if k >= 0:
        return value ** k
    return value.invert() ** (-k)


def cc(*fs: Series) -> RingElement:
    """The n-dimensional Contou-Carrere symbol of n+1 units; a unit of A."""
    if not fs:
        raise RingMismatchError("the symbol needs at least one argument")
    ring, n = fs[0].ring, fs[0].nvars
    if len(fs) != n + 1:
        raise RingMismatchError(f"symbol over {n} variables takes {n + 1} arguments")
    parts = []
    for f in fs:
        fs[0]._check_compatible(f)
        dec = f.decompose()
        parts.append((dec.a, dec.sharp_part(), dec.v))

    one = ring.one
    total = one
    for kinds in iterproduct((_CONST, _SHARP, _MONO), repeat=n + 1):
        factors = []
        trivial = False
        for slot, kind in enumerate(kinds):
            a, g, v = parts[slot]
            if kind == _CONST:
                if a == one:
                    trivial = True
                    break
                factors.append(a)
            elif kind == _SHARP:
                if g.terms == {(0,) * n: one}:
                    trivial = True
                    break
                factors.append(g)
            else:
                if all(x == 0 for x in v):
                    trivial = True
                    break
                factors.append(v)
        if trivial:
            continue
        total = total * _term_value(ring, n, kinds, factors)
    if not total.is_unit:
        raise NotUnitError("internal error: symbol value is not a unit")
    return total


def _term_value(ring, n, kinds, factors) -> RingElement:
    """One multilinear term: all slots are pure constants, sharps or monomials."""
    if all(k == _MONO for k in kinds):
        return ring.constant((-1) ** sgn(*factors))

    if _SHARP in kinds:
        if _CONST in kinds:
            # d(constant) = 0 kills the wedge, so the term is 1.
            return ring.one
        i = kinds.index(_SHARP)
        kinds = list(kinds)
        factors = list(factors)
        kinds[0], kinds[i] = kinds[i], kinds[0]
        factors[0], factors[i] = factors[i], factors[0]
        args = [
            f if k == _SHARP else Series.monomial(ring, n, f)
            for k, f in zip(kinds, factors)
        ]
        value = cc_sharp(*args)
        return value.invert() if i != 0 else value

    # constants and monomials only
    i = kinds.index(_CONST)
    kinds = list(kinds)
    factors = list(factors)
    kinds[0], kinds[i] = kinds[i], kinds[0]
    factors[0], factors[i] = factors[i], factors[0]
    if _CONST in kinds[1:]:
        # det over valuations has a zero column
        return ring.one
    d = det_cols(factors[1:])
    value = _value_power(factors[0], d)
    return value.invert() if i != 0 else value


def tame_symbol(f: Series, g: Series) -> RingElement:
    """Classical tame symbol over the field Q, n = 1:
    (-1)^(v(f) v(g)) * f^v(g)/g^v(f) evaluated at t = 0.

    The evaluation collapses to leading coefficients, which keeps this an
    oracle independent of the exp/Res machinery.
    """
    if f.ring.ngens != 0:
        raise NotFieldError("the tame symbol is defined over the field Q only")
    if f.nvars != 1:
        raise RingMismatchError("the tame symbol is one-dimensional")
    f._check_compatible(g)
    cf, cg = f.classify(), g.classify()
    if not (cf.is_unit and cg.is_unit):
        raise NotUnitError("tame symbol arguments must be nonzero")
    vf, vg = cf.v[0], cg.v[0]
    lf = cf.leading.constant_term
    lg = cg.leading.constant_term
    value = Fraction(-1) ** (vf * vg) * lf ** vg / lg ** vf
    return f.ring.constant(value)
