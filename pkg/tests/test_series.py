from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from itercc import INF, Series, lex_key, lex_sign
from itercc.errors import (InsufficientWindowError, NonTerminatingError,
                           NotTopNilpotentError, NotUnitError,
                           OutsideWindowError, TermOutsideWindowError,
                           ZeroModNilError)
from itercc.sampling import (random_sharp, random_top_nilpotent, random_unit)

vec2 = st.tuples(st.integers(-6, 6), st.integers(-6, 6))


class TestLexOrder:
    def test_defining_examples(self):
        # last coordinate decides first
        assert lex_key((1, 0)) < lex_key((0, 1))
        assert lex_sign((1, 0)) == 1
        assert lex_sign((-3, 1)) == 1
        assert lex_sign((3, -1)) == -1
        assert lex_sign((0, 0)) == 0

    @given(vec2, vec2)
    def test_total(self, a, b):
        assert (lex_key(a) < lex_key(b)) + (lex_key(a) > lex_key(b)) + (a == b) == 1

    @given(vec2, vec2, vec2)
    def test_translation_invariant(self, a, b, c):
        shifted = tuple(x + y for x, y in zip(a, c)), tuple(x + y for x, y in zip(b, c))
        assert (lex_key(a) < lex_key(b)) == (lex_key(shifted[0]) < lex_key(shifted[1]))


class TestMake:
    def test_zero(self, field):
        s = Series(field, 1, {})
        assert s.is_zero and s.window == (INF,)

    def test_one_plus_t(self, field):
        s = Series(field, 1, {(0,): 1, (1,): 1})
        assert s.coeff((1,)) == field.one

    def test_nilpotent_negative_term(self, dual):
        eps = dual.gen(0)
        s = Series(dual, 2, {(-1, 0): eps})
        assert s.coeff((-1, 0)) == eps

    def test_term_outside_window(self, field):
        with pytest.raises(TermOutsideWindowError):
            Series(field, 1, {(4,): 1}, (3,))

    def test_zero_coefficients_dropped(self, field):
        assert Series(field, 1, {(2,): 0}).is_zero


class TestAddNeg:
    def test_sum(self, field):
        s = Series(field, 1, {(0,): 1, (1,): 1}) + Series(field, 1, {(1,): 1})
        assert s.terms == {(0,): field.one, (1,): field.constant(2)}

    def test_cancellation(self, field):
        f = Series(field, 1, {(0,): 1, (3,): Fraction(2, 7)})
        assert (f + (-f)).is_zero

    def test_window_min_rule(self, field):
        f = Series(field, 1, {(0,): 1}, (5,))
        g = Series(field, 1, {(0,): 1}, (3,))
        assert (f + g).window == (3,)


class TestMul:
    def test_telescoping(self, field):
        f = Series(field, 1, {(-1,): 1, (0,): 1})
        t = Series.variable(field, 1, 0)
        assert (f * t).terms == {(0,): field.one, (1,): field.one}

    def test_truncating_product(self, field):
        # (1 - t) * (1 + t + t^2 + t^3 + t^4 | window 5) = 1 within window 5
        f = Series(field, 1, {(0,): 1, (1,): -1})
        g = Series(field, 1, {(k,): 1 for k in range(5)}, (5,))
        prod = f * g
        assert prod.window == (5,)
        assert prod.terms == {(0,): field.one}

    def test_monomials_cancel(self, field):
        a = Series.monomial(field, 2, (1, -1))
        b = Series.monomial(field, 2, (-1, 1))
        assert (a * b).terms == {(0, 0): field.one}

    def test_scale_by_nilpotent_collapses(self, dual):
        eps = dual.gen(0)
        f = Series(dual, 1, {(0,): eps})
        assert (f * f).is_zero


class TestDerivative:
    def test_power(self, field):
        t3 = Series.monomial(field, 1, (3,))
        assert t3.derivative(0).terms == {(2,): field.constant(3)}

    def test_negative_power_two_vars(self, field):
        s = Series.monomial(field, 2, (-1, 1))
        assert s.derivative(0).terms == {(-2, 1): field.constant(-1)}

    def test_constant(self, field):
        assert Series.one(field, 1).derivative(0).is_zero

    def test_window_drops(self, field):
        f = Series(field, 1, {(1,): 1}, (5,))
        assert f.derivative(0).window == (4,)

    def test_leibniz(self, dual, rng):
        for _ in range(20):
            f = random_unit(dual, 2, rng, (5, 5))
            g = random_unit(dual, 2, rng, (5, 5))
            for i in range(2):
                lhs = (f * g).derivative(i)
                rhs = f * g.derivative(i) + g * f.derivative(i)
                assert lhs.agrees_with(rhs)


class TestClassify:
    def test_unit_with_nilpotent_tail(self, dual):
        eps = dual.gen(0)
        f = Series(dual, 1, {(-1,): eps, (0,): dual.constant(2), (1,): 1})
        cls = f.classify()
        assert cls.is_unit and cls.v == (0,) and cls.leading == dual.constant(2)

    def test_top_nilpotent_not_unit(self, dual):
        eps = dual.gen(0)
        f = Series(dual, 2, {(5, -1): eps})
        cls = f.classify()
        assert cls.is_top_nilpotent and not cls.is_unit and cls.v is None

    def test_lex_valuation_two_vars(self, field):
        f = Series(field, 2, {(1, 0): 1, (0, 1): 1})
        assert f.classify().v == (1, 0)

    def test_zero_mod_nil_raises_for_valuation(self, dual):
        f = Series(dual, 1, {(0,): dual.gen(0)})
        with pytest.raises(ZeroModNilError):
            f.classify(require_valuation=True)

    def test_insufficient_window(self, dual):
        f = Series(dual, 1, {(0,): dual.gen(0)}, (3,))
        with pytest.raises(InsufficientWindowError):
            f.classify()

    def test_translation_equivariance(self, dual, rng):
        for _ in range(30):
            u = random_sharp(dual, 2, rng, (5, 5))
            l = (rng.randint(-3, 3), rng.randint(-3, 3))
            assert u.mul_monomial(l).classify().v == l


class TestInvert:
    def test_geometric(self, field):
        f = Series(field, 1, {(0,): 1, (1,): -1}, (5,))
        inv = f.invert()
        assert inv.terms == {(k,): field.one for k in range(5)}
        assert (f * inv).agrees_with(Series.one(field, 1))

    def test_nilpotent_shift(self, dual):
        eps = dual.gen(0)
        f = Series(dual, 1, {(1,): 1, (0,): eps}, (6,))
        inv = f.invert()
        assert inv.terms == {(-1,): dual.one, (-2,): -eps}

    def test_two_variables(self, field):
        f = Series(field, 2, {(1, 0): 1, (0, 1): 1}, (4, 4))
        inv = f.invert()
        expected = {(-1, 0): field.one, (-2, 1): -field.one,
                    (-3, 2): field.one, (-4, 3): -field.one}
        assert inv.terms == expected
        assert (f * inv).agrees_with(Series.one(field, 2))

    def test_roundtrip_random_units(self, dual, rng):
        for _ in range(100):
            n = rng.choice([1, 2])
            f = random_unit(dual, n, rng, (6,) * n)
            assert (f * f.invert()).agrees_with(Series.one(dual, n))

    def test_not_unit(self, dual):
        with pytest.raises(NotUnitError):
            Series(dual, 1, {(0,): dual.gen(0)}).invert()

    def test_nonterminating_on_infinite_window(self, field):
        f = Series(field, 1, {(0,): 1, (1,): -1})  # exact 1 - t, no window
        with pytest.raises(NonTerminatingError):
            f.invert()


class TestDecompose:
    def test_monomial(self, field):
        dec = Series.monomial(field, 1, (3,)).decompose()
        assert dec.a == field.one and dec.v == (3,)
        assert dec.fplus.terms == {(0,): field.one}
        assert dec.fminus.terms == {(0,): field.one}

    def test_already_split(self, field):
        f = Series(field, 1, {(-1,): 5, (0,): 5}, (6,))
        dec = f.decompose()
        assert dec.a == field.constant(5) and dec.v == (-1,)
        assert dec.fplus.terms == {(0,): field.one, (1,): field.one}
        assert dec.fminus.terms == {(0,): field.one}

    def test_worked_nilpotent_case(self, dual):
        # 1 + t + eps t^-1 forces a = 1 - eps
        eps = dual.gen(0)
        f = Series(dual, 1, {(0,): 1, (1,): 1, (-1,): eps}, (6,))
        dec = f.decompose()
        assert dec.a == dual.one - eps
        assert dec.fminus.terms == {(0,): dual.one, (-1,): eps}
        assert dec.v == (0,)
        # fplus = (1+t)(1 + eps t (1+t)^-1) telescopes to 1 + (1+eps) t
        assert dec.fplus.terms == {(0,): dual.one, (1,): dual.one + eps}
        assert dec.product().agrees_with(f)

    def test_membership_and_roundtrip_random(self, dual, rng):
        for _ in range(100):
            n = rng.choice([1, 2])
            f = random_unit(dual, n, rng, (6,) * n)
            dec = f.decompose()
            assert dec.product().agrees_with(f)
            assert dec.a.is_unit
            zero = (0,) * n
            assert dec.fplus.terms.get(zero) == dual.one
            assert dec.fminus.terms.get(zero) == dual.one
            assert all(lex_sign(l) > 0 for l in dec.fplus.terms if l != zero)
            assert all(lex_sign(l) < 0 for l in dec.fminus.terms if l != zero)
            assert all(c.is_nilpotent for l, c in dec.fminus.terms.items() if l != zero)


class TestExpLog:
    def test_exp_zero(self, field):
        assert Series.zero(field, 1).exp().terms == {(0,): field.one}

    def test_exp_nilpotent_coefficient(self, dual):
        eps = dual.gen(0)
        f = Series(dual, 1, {(-1,): eps})
        assert f.exp().terms == {(0,): dual.one, (-1,): eps}

    def test_log_window(self, field):
        u = Series(field, 1, {(0,): 1, (1,): 1}, (4,))
        assert u.log().terms == {(1,): field.one, (2,): field.constant(Fraction(-1, 2)),
                                 (3,): field.constant(Fraction(1, 3))}

    def test_exp_requires_top_nilpotent(self, dual):
        f = Series(dual, 1, {(-1,): 1}, (4,))
        with pytest.raises(NotTopNilpotentError):
            f.exp()

    def test_log_requires_sharp(self, dual):
        with pytest.raises(NotTopNilpotentError):
            Series(dual, 1, {(0,): 2}, (4,)).log()

    def test_exp_nonterminating_infinite_window(self, field):
        with pytest.raises(NonTerminatingError):
            Series.variable(field, 1, 0).exp()

    def test_log_exp_identity(self, dual, rng):
        for _ in range(100):
            n = rng.choice([1, 2])
            f = random_top_nilpotent(dual, n, rng, (5,) * n)
            assert f.exp().log().agrees_with(f)

    def test_exp_additive_to_multiplicative(self, dual, rng):
        for _ in range(50):
            n = rng.choice([1, 2])
            f = random_top_nilpotent(dual, n, rng, (5,) * n)
            g = random_top_nilpotent(dual, n, rng, (5,) * n)
            assert (f + g).exp().agrees_with(f.exp() * g.exp())


class TestCoeff:
    def test_stored(self, field):
        f = Series(field, 1, {(0,): 1, (1,): 2})
        assert f.coeff((1,)) == field.constant(2)

    def test_absent_inside_window(self, field):
        f = Series(field, 1, {(0,): 1}, (5,))
        assert f.coeff((3,)).is_zero

    def test_outside_window(self, field):
        f = Series(field, 1, {(0,): 1}, (5,))
        with pytest.raises(OutsideWindowError):
            f.coeff((5,))


# --- window soundness over random pipelines ---------------------------------

_OPS = ("add", "mul", "neg", "derive", "invert", "exp", "log")


def _make_plan(rng, n, depth):
    literals = []
    for _ in range(2):
        terms = {}
        for _ in range(rng.randint(1, 3)):
            exp = tuple(rng.randint(-2, 2) for _ in range(n))
            terms[exp] = (rng.randint(-3, 3), rng.random() < 0.4)
        literals.append(terms)
    ops = [rng.choice(_OPS) for _ in range(depth)]
    picks = [(rng.randrange(4), rng.randrange(4)) for _ in range(depth)]
    return literals, ops, picks


def _eval_plan(ring, n, plan, window):
    literals, ops, picks = plan
    eps = ring.gen(0)
    pool = []
    for terms in literals:
        s = Series.zero(ring, n, window)
        for exp, (q, nil) in terms.items():
            c = ring.constant(q) * eps if nil else ring.constant(q)
            s = s + Series.monomial(ring, n, exp, c, window)
        pool.append(s)
    pool.append(Series.one(ring, n, window))
    pool.append(Series.one(ring, n, window) + pool[0] - pool[0])
    for op, (i, j) in zip(ops, picks):
        a, b = pool[i % len(pool)], pool[j % len(pool)]
        try:
            if op == "add":
                out = a + b
            elif op == "mul":
                out = a * b
            elif op == "neg":
                out = -a
            elif op == "derive":
                out = a.derivative(i % n)
            elif op == "invert":
                out = a.invert()
            elif op == "exp":
                out = _sharpen(a, ring, n).exp()
            else:
                out = (_sharpen(a, ring, n) + Series.one(ring, n, a.window)).log()
        except Exception:
            return None
        pool.append(out)
    return pool[-1]


def _sharpen(s, ring, n):
    """Strip unit parts outside the nonnegative orthant so exp/log apply
    within the faithful region of the window model."""
    terms = {}
    for l, c in s.terms.items():
        if lex_sign(l) <= 0 or any(x < 0 for x in l):
            c = c - ring.constant(c.constant_term)
        if not c.is_zero:
            terms[l] = c
    return Series._raw(ring, n, terms, s.window)


class TestWindowSoundness:
    def test_pipelines_agree_after_enlarging(self, dual, rng):
        checked = 0
        for trial in range(60):
            n = 1 + trial % 2
            plan = _make_plan(rng, n, depth=rng.randint(2, 5))
            small = _eval_plan(dual, n, plan, (5,) * n)
            big = _eval_plan(dual, n, plan, (9,) * n)
            if small is None or big is None:
                continue
            assert small.agrees_with(big), f"plan {plan} diverged"
            checked += 1
        assert checked >= 20
