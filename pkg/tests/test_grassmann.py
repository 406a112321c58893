import json
import random
from fractions import Fraction
from itertools import combinations

import pytest
from sympy import QQ

from superko.grassmann import (
    CircleValue,
    GrassmannAlgebra,
    GrassmannElement,
    GrassmannError,
    GrassmannHom,
    body,
    exp_nilpotent_even,
    multiply,
)
from superko._exact import QQ_I


@pytest.fixture
def alg():
    return GrassmannAlgebra(4)


def _random_element(rng, alg, parity=None):
    terms = {}
    for m in range(1 << alg.q):
        if parity is not None and bin(m).count("1") % 2 != parity:
            continue
        if rng.random() < 0.5:
            terms[m] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return alg.element(terms)


def test_odd_generators_anticommute(alg):
    t1, t2 = alg.generator(0), alg.generator(1)
    assert multiply(t1, t2) == -multiply(t2, t1)


def test_square_of_bivector_vanishes(alg):
    t1, t2 = alg.generator(0), alg.generator(1)
    one = alg.one()
    assert (one + t1 * t2) * (one - t1 * t2) == one


def test_square_of_odd_element_vanishes(alg):
    t1, t2 = alg.generator(0), alg.generator(1)
    assert (t1 + t2) * (t1 + t2) == alg.zero()


def test_body_examples(alg):
    t1, t2 = alg.generator(0), alg.generator(1)
    assert body(3 + t1 * t2) == 3
    assert body(t1) == 0


def test_body_is_multiplicative():
    rng = random.Random(1)
    alg = GrassmannAlgebra(5)
    for _ in range(50):
        a, b = _random_element(rng, alg), _random_element(rng, alg)
        assert body(a * b) == body(a) * body(b)


def test_graded_commutativity():
    rng = random.Random(2)
    alg = GrassmannAlgebra(5)
    for _ in range(50):
        pa, pb = rng.randint(0, 1), rng.randint(0, 1)
        a, b = _random_element(rng, alg, pa), _random_element(rng, alg, pb)
        sign = -1 if pa and pb else 1
        assert a * b == (b * a) * sign


def test_associativity():
    rng = random.Random(3)
    alg = GrassmannAlgebra(5, "C")
    for _ in range(30):
        a, b, c = (_random_element(rng, alg) for _ in range(3))
        assert (a * b) * c == a * (b * c)


def test_soul_is_nilpotent():
    rng = random.Random(4)
    alg = GrassmannAlgebra(5)
    for _ in range(20):
        s = _random_element(rng, alg).soul()
        assert s ** (alg.q + 1) == alg.zero()


def test_parity_parts(alg):
    t = alg.generators()
    a = 2 + t[0] + t[1] * t[2] + t[0] * t[1] * t[2]
    assert a.even() == 2 + t[1] * t[2]
    assert a.odd() == t[0] + t[0] * t[1] * t[2]
    assert a.even().is_even() and a.odd().is_odd()
    assert not a.is_even() and not a.is_odd()


def test_monomial_sign_follows_order(alg):
    assert alg.monomial([1, 0]) == -alg.monomial([0, 1])
    assert alg.monomial([2, 2]) == alg.zero()


def test_exp_examples(alg):
    t = alg.generators()
    assert exp_nilpotent_even(alg.zero()) == alg.one()
    b12 = t[0] * t[1]
    assert exp_nilpotent_even(b12) == 1 + b12
    b34 = t[2] * t[3]
    assert exp_nilpotent_even(b12 + b34) == 1 + b12 + b34 + b12 * b34


def test_exp_matches_truncated_series():
    rng = random.Random(5)
    alg = GrassmannAlgebra(6)
    for _ in range(10):
        a = _random_element(rng, alg, 0).soul()
        series, term = alg.one(), alg.one()
        for k in range(1, alg.q + 1):
            term = term * a * QQ(1, k)
            series = series + term
        assert exp_nilpotent_even(a) == series
        assert body(exp_nilpotent_even(a)) == 1


def test_exp_rejects_bad_input(alg):
    with pytest.raises(GrassmannError):
        exp_nilpotent_even(alg.generator(0))
    with pytest.raises(GrassmannError):
        exp_nilpotent_even(alg.scalar(1))


def test_algebra_mismatch():
    a = GrassmannAlgebra(2).generator(0)
    b = GrassmannAlgebra(3).generator(0)
    with pytest.raises(GrassmannError):
        multiply(a, b)


def test_generator_cap():
    GrassmannAlgebra(16)
    with pytest.raises(GrassmannError):
        GrassmannAlgebra(17)


def test_complex_coefficients():
    alg = GrassmannAlgebra(2, "C")
    i = alg.scalar(QQ_I(0, 1))
    assert i * i == alg.scalar(-1)
    assert alg.is_complex and alg.field == "C"


def test_json_round_trip():
    rng = random.Random(6)
    for field in ("R", "C"):
        alg = GrassmannAlgebra(4, field)
        a = _random_element(rng, alg) + (alg.scalar(QQ_I(1, 2)) if field == "C" else 0)
        data = json.loads(json.dumps(a.to_json()))
        assert data["q"] == 4 and data["field"] == field
        assert GrassmannElement.from_json(data) == a


def test_hom_is_multiplicative():
    rng = random.Random(7)
    src, tgt = GrassmannAlgebra(3), GrassmannAlgebra(4)
    f = GrassmannHom(src, tgt, [_random_element(rng, tgt, 1) for _ in range(3)])
    for _ in range(10):
        a, b = _random_element(rng, src), _random_element(rng, src)
        assert f(a * b) == f(a) * f(b)


def test_circle_addition_wraps():
    alg = GrassmannAlgebra(2)
    s = alg.generator(0) * alg.generator(1)
    x = CircleValue(QQ(3, 4), s)
    y = CircleValue(QQ(1, 2), s)
    z = x + y
    assert z.body == QQ(1, 4)
    assert z.soul == 2 * s
    assert x + y == y + x
    assert CircleValue(QQ(5, 4), alg.zero()) == CircleValue(QQ(1, 4), alg.zero())


def test_circle_associative():
    rng = random.Random(8)
    alg = GrassmannAlgebra(4)
    vals = [CircleValue(QQ(rng.randint(0, 20), 7), _random_element(rng, alg, 0).soul()) for _ in range(9)]
    for a, b, c in combinations(vals, 3):
        assert (a + b) + c == a + (b + c)
        assert ((a + b) + c).body == (a.body + b.body + c.body) % 1


def test_circle_rejects_odd_soul():
    alg = GrassmannAlgebra(2)
    with pytest.raises(GrassmannError):
        CircleValue(QQ(0), alg.generator(0))
