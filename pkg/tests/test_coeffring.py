from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from itercc import Ring
from itercc.errors import (InvalidRingSpecError, NotNilpotentError,
                           NotOnePlusNilpotentError, NotUnitError,
                           RingMismatchError)
from itercc.sampling import random_nilpotent, random_unit_constant


class TestConstruction:
    def test_field_case(self):
        ring = Ring([])
        assert ring.ngens == 0
        assert ring.nilpotency_index == 1
        assert ring.constant(Fraction(3, 2)) + ring.constant(Fraction(1, 2)) == 2

    def test_dual_numbers(self):
        ring = Ring([2])
        eps = ring.gen(0)
        assert ring.nilpotency_index == 2
        assert eps * eps == ring.zero

    def test_two_generators(self):
        ring = Ring([2, 3])
        e1, e2 = ring.gen(0), ring.gen(1)
        assert ring.nilpotency_index == 4
        assert not (e1 * e2 * e2).is_zero
        assert (e1 * e2 * e2 * e2).is_zero

    def test_invalid_bounds(self):
        with pytest.raises(InvalidRingSpecError):
            Ring([0])
        with pytest.raises(InvalidRingSpecError):
            Ring([2, -1])

    def test_bound_one_generator_is_zero(self):
        assert Ring([1]).gen(0).is_zero

    def test_ring_mismatch(self):
        with pytest.raises(RingMismatchError):
            Ring([2]).one + Ring([3]).one


class TestArithmetic:
    def test_add(self, dual):
        eps = dual.gen(0)
        assert dual.one + eps == dual.element({(0,): 1, (1,): 1})

    def test_defining_relation(self, dual):
        eps = dual.gen(0)
        assert (eps * eps).is_zero

    def test_hand_expansion(self, dual):
        # (1/2 + e)(2 - e) = 1 + (2 - 1/2) e
        eps = dual.gen(0)
        x = dual.constant(Fraction(1, 2)) + eps
        y = dual.constant(2) - eps
        assert x * y == dual.one + eps * dual.constant(Fraction(3, 2))

    def test_pow(self, cubic):
        eps = cubic.gen(0)
        assert (dualish := (cubic.one + eps) ** 3) == cubic.element(
            {(0,): 1, (1,): 3, (2,): 3})
        assert dualish * (cubic.one + eps) ** -3 == cubic.one


class TestInversion:
    def test_one(self, dual):
        assert dual.one.invert() == dual.one

    def test_two_plus_eps(self, dual):
        eps = dual.gen(0)
        x = dual.constant(2) + eps
        inv = x.invert()
        assert inv == dual.element({(0,): Fraction(1, 2), (1,): Fraction(-1, 4)})
        assert x * inv == dual.one

    def test_nilpotent_not_unit(self, dual):
        with pytest.raises(NotUnitError):
            dual.gen(0).invert()


class TestNilpotence:
    def test_examples(self, two_gen):
        e1, e2 = two_gen.gen(0), two_gen.gen(1)
        assert two_gen.zero.is_nilpotent
        assert (e1 * e2).is_nilpotent
        assert not (two_gen.one + e1).is_nilpotent

    def test_power_vanishes_at_index(self, two_gen, rng):
        k = two_gen.nilpotency_index
        for _ in range(50):
            x = random_nilpotent(two_gen, rng)
            assert (x ** k).is_zero


class TestExpLog:
    def test_exp_zero(self, cubic):
        assert cubic.zero.exp() == cubic.one

    def test_exp_truncated(self, cubic):
        eps = cubic.gen(0)
        assert eps.exp() == cubic.element({(0,): 1, (1,): 1, (2,): Fraction(1, 2)})

    def test_log_truncated(self, cubic):
        eps = cubic.gen(0)
        assert (cubic.one + eps).log() == cubic.element(
            {(1,): 1, (2,): Fraction(-1, 2)})

    def test_exp_requires_nilpotent(self, dual):
        with pytest.raises(NotNilpotentError):
            dual.one.exp()

    def test_log_requires_one_plus_nilpotent(self, dual):
        with pytest.raises(NotOnePlusNilpotentError):
            (dual.constant(2)).log()


def _random_element_strategy(ring):
    monos = []
    from itertools import product
    for exp in product(*(range(d) for d in ring.bounds)):
        monos.append(exp)
    frac = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.fixed_dictionaries({}, optional={m: frac for m in monos}).map(ring.element)


class TestRingAxioms:
    @settings(max_examples=200)
    @given(st.data())
    def test_associativity_distributivity(self, data):
        ring = Ring([2, 3])
        elems = _random_element_strategy(ring)
        x, y, z = (data.draw(elems) for _ in range(3))
        assert (x * y) * z == x * (y * z)
        assert (x + y) + z == x + (y + z)
        assert x * (y + z) == x * y + x * z
        assert x * y == y * x

    def test_invert_roundtrip_random_units(self, two_gen, rng):
        for _ in range(100):
            u = random_unit_constant(two_gen, rng)
            assert u * u.invert() == two_gen.one

    def test_log_exp_roundtrip(self, two_gen, rng):
        for _ in range(100):
            x = random_nilpotent(two_gen, rng)
            assert x.exp().log() == x

    def test_exp_is_homomorphism(self, two_gen, rng):
        for _ in range(50):
            x = random_nilpotent(two_gen, rng)
            y = random_nilpotent(two_gen, rng)
            assert (x + y).exp() == x.exp() * y.exp()
