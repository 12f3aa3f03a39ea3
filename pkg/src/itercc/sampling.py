"""Seeded random generators for elements, series and automorphisms.

Used by the sampled verification procedures in :mod:`itercc.analysis` and by
the test suite.  Everything is driven by an explicit random.Random so runs
are reproducible from a single seed.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product as iterproduct

from .autos import Endomorphism
from .coeffring import Ring, RingElement
from .series import Series, lex_sign


def random_rational(rng: random.Random, nonzero: bool = False) -> Fraction:
    while True:
        q = Fraction(rng.randint(-4, 4), rng.choice([1, 1, 2, 3]))
        if q != 0 or not nonzero:
            return q


def random_ring_element(ring: Ring, rng: random.Random) -> RingElement:
    terms = {}
    monomials = list(iterproduct(*(range(d) for d in ring.bounds)))
    for exp in monomials:
        if rng.random() < 0.5:
            terms[exp] = random_rational(rng)
    return ring.element(terms)


def random_nilpotent(ring: Ring, rng: random.Random) -> RingElement:
    x = random_ring_element(ring, rng)
    return x - ring.constant(x.constant_term)


def random_unit_constant(ring: Ring, rng: random.Random) -> RingElement:
    return ring.constant(random_rational(rng, nonzero=True)) + random_nilpotent(ring, rng)


def random_exponent(rng: random.Random, nvars: int, lo: int, hi: int) -> tuple[int, ...]:
    return tuple(rng.randint(lo, hi) for _ in range(nvars))


def random_top_nilpotent(ring: Ring, nvars: int, rng: random.Random,
                         window, max_terms: int = 2, lo: int = -2, hi: int = 2) -> Series:
    """A topologically nilpotent series: lex-nonpositive support carries
    nilpotent coefficients; invertible coefficients appear only at exponents
    in the nonnegative orthant, where the rectangular window model is
    faithful (products of such terms never drift back below a window)."""
    out = Series.zero(ring, nvars, window)
    for _ in range(rng.randint(1, max_terms)):
        exp = random_exponent(rng, nvars, lo, hi)
        if lex_sign(exp) > 0 and all(x >= 0 for x in exp):
            c = ring.constant(random_rational(rng, nonzero=True)) \
                if rng.random() < 0.7 else random_nilpotent(ring, rng)
        else:
            c = random_nilpotent(ring, rng)
        out = out + Series.monomial(ring, nvars, exp, c, window)
    return out


def random_sharp(ring: Ring, nvars: int, rng: random.Random, window,
                 max_terms: int = 2, lo: int = -2, hi: int = 2) -> Series:
    return Series.one(ring, nvars, window) + random_top_nilpotent(
        ring, nvars, rng, window, max_terms, lo, hi)


def random_unit(ring: Ring, nvars: int, rng: random.Random, window,
                max_terms: int = 2, lo: int = -2, hi: int = 2,
                vrange: int = 2) -> Series:
    """A random unit: constant x sharp x monomial."""
    a = random_unit_constant(ring, rng)
    sharp = random_sharp(ring, nvars, rng, window, max_terms, lo, hi)
    v = random_exponent(rng, nvars, -vrange, vrange)
    return sharp.scale(a).mul_monomial(v)


def random_series(ring: Ring, nvars: int, rng: random.Random, window,
                  max_terms: int = 3, lo: int = -2, hi: int = 2) -> Series:
    out = Series.zero(ring, nvars, window)
    for _ in range(rng.randint(1, max_terms)):
        exp = random_exponent(rng, nvars, lo, hi)
        c = random_ring_element(ring, rng)
        out = out + Series.monomial(ring, nvars, exp, c, window)
    return out


def random_unipotent(nvars: int, rng: random.Random, lo: int = -2, hi: int = 2):
    return tuple(
        tuple(1 if i == j else (rng.randint(lo, hi) if j > i else 0)
              for j in range(nvars))
        for i in range(nvars)
    )


def random_automorphism(ring: Ring, nvars: int, rng: random.Random, window,
                        perturb: bool = True) -> Endomorphism:
    """Monomial automorphism of a random unipotent matrix, with each image
    optionally multiplied by 1 + (small rational top-nilpotent series)."""
    base = Endomorphism.from_matrix(ring, random_unipotent(nvars, rng))
    if not perturb:
        return base
    images = []
    for im in base.images:
        factor = Series.one(ring, nvars, window)
        if rng.random() < 0.8:
            # perturbation exponents stay in the nonnegative orthant, where
            # truncated substitution is faithful; the monomial part of the
            # image may still carry negative exponents (it stays exact)
            exp = tuple(abs(x) for x in random_exponent(rng, nvars, -1, 2))
            if lex_sign(exp) == 0:
                exp = tuple(1 for _ in exp)
            # rational coefficients only: the automorphism is defined over Q
            factor = factor + Series.monomial(
                ring, nvars, exp, random_rational(rng, nonzero=True), window)
        images.append(im.truncate(window) * factor)
    return Endomorphism(images, require_automorphism=True)


def random_scaling(ring: Ring, nvars: int, rng: random.Random) -> Endomorphism:
    """The automorphism t_i -> a_i t_i with random nonzero rational a_i."""
    images = [
        Series.variable(ring, nvars, i).scale(
            rng.choice([Fraction(2), Fraction(3), Fraction(1, 2),
                        Fraction(-1), Fraction(5), Fraction(-2)]))
        for i in range(nvars)
    ]
    return Endomorphism(images, require_automorphism=True)
