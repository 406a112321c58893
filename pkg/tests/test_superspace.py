import json
import random
from fractions import Fraction

import pytest
from sympy import QQ

from superko import superspace as ss
from superko._exact import QQ_I
from superko.grassmann import CircleValue, GrassmannAlgebra
from superko.superspace import GenericMap, SuperMap, SuperspaceError
from superko.suites import random_composable_pair, rand_circle, rand_even, rand_odd, rand_soul


@pytest.fixture
def alg():
    return GrassmannAlgebra(4)


@pytest.fixture
def calg():
    return GrassmannAlgebra(4, "C")


def test_tau_zero_is_identity(alg):
    t = alg.generators()
    p = (3 + t[0] * t[1], t[2])
    assert ss.apply(ss.tau(alg.zero(), alg.zero(), alg), p) == p
    assert ss.tau(alg.zero(), alg.zero(), alg).is_identity()


def test_eps_flips_odd_coordinate(alg):
    t = alg.generators()
    p = (2 + t[0] * t[1], t[2] + t[3])
    assert ss.apply(ss.eps11(alg), p) == (p[0], -p[1])


def test_gamma_formula(alg):
    t = alg.generators()
    z, theta, eta = 1 + t[0] * t[1], t[2], t[3]
    assert ss.apply(ss.gamma(z, theta, alg), (eta,)) == (z - theta * eta, theta + eta)


def test_tau_formula(alg):
    t = alg.generators()
    z, theta = 5 + t[0] * t[1], t[0]
    w, eta = 2 + t[2] * t[3], t[3]
    assert ss.apply(ss.tau(z, theta, alg), (w, eta)) == (w + z - theta * eta, theta + eta)


def test_nu_formula(calg):
    t = calg.generators()
    x = CircleValue(QQ(1, 3), t[0] * t[1])
    y, theta = 2 + t[2] * t[3], t[1]
    w, eta = CircleValue(QQ(1, 2), calg.zero()), t[3]
    half = calg.scalar(QQ(1, 2))
    ihalf = calg.scalar(QQ_I(0, QQ(1, 2)))
    out = ss.apply(ss.nu(x, y, theta, calg), (w, eta))
    assert out[0] == w + x + (-(theta * eta * half))
    assert out[1] == y - ihalf * theta * eta
    assert out[2] == theta + eta


def test_tau_composition_law(alg):
    rng = random.Random(1)
    for _ in range(20):
        z1, t1, z2, t2 = rand_even(rng, alg), rand_odd(rng, alg), rand_even(rng, alg), rand_odd(rng, alg)
        got = ss.compose(ss.tau(z2, t2, alg), ss.tau(z1, t1, alg))
        assert got == ss.tau(z1 + z2 - t2 * t1, t1 + t2, alg)


def test_tau_gamma_law(alg):
    rng = random.Random(2)
    z, t, z2, t2 = rand_even(rng, alg), rand_odd(rng, alg), rand_even(rng, alg), rand_odd(rng, alg)
    assert ss.compose(ss.tau(z, t, alg), ss.gamma(z2, t2, alg)) == ss.gamma(z + z2 - t * t2, t + t2, alg)


def test_eps_squared(alg):
    e = ss.eps11(alg)
    assert ss.compose(e, e).is_identity()
    e0 = ss.eps00(alg)
    assert ss.compose(e0, e0).is_identity()


def test_eps_conjugation(alg):
    rng = random.Random(3)
    z, t = rand_even(rng, alg), rand_odd(rng, alg)
    e = ss.eps11(alg)
    assert ss.compose(e, ss.compose(ss.tau(z, t, alg), e)) == ss.tau(z, -t, alg)


def test_compose_agrees_pointwise():
    rng = random.Random(4)
    for i in range(60):
        m1, m2 = random_composable_pair(rng)
        comp = ss.compose(m2, m1)
        alg = m1.algebra
        for _ in range(2):
            dom = m1.domain
            eta = rand_odd(rng, alg)
            if dom == "R01":
                p = (eta,)
            elif dom == "R11":
                p = (rand_even(rng, alg, positive=False), eta)
            elif dom == "S":
                p = (rand_circle(rng, alg), eta)
            else:
                p = (rand_circle(rng, alg), rand_even(rng, alg), eta)
            assert ss.apply(comp, p) == ss.apply(m2, ss.apply(m1, p)), (i, m1.kind, m2.kind)


def test_kappa_after_nu_is_nu(calg):
    rng = random.Random(5)
    n = ss.nu(rand_circle(rng, calg), rand_even(rng, calg), rand_odd(rng, calg), calg)
    k = ss.kappa(rand_circle(rng, calg), rand_even(rng, calg), rand_odd(rng, calg), calg)
    assert ss.compose(k, n).kind == "Nu"


def test_non_composable(alg):
    with pytest.raises(SuperspaceError):
        ss.compose(ss.gamma(alg.one(), alg.zero(), alg), ss.tau(alg.one(), alg.zero(), alg))


def test_parity_checked(alg):
    with pytest.raises(SuperspaceError):
        ss.tau(alg.generator(0), alg.zero(), alg)
    with pytest.raises(SuperspaceError):
        ss.apply(ss.tau(alg.one(), alg.zero(), alg), (alg.one(), alg.one()))


def test_pullback_catalogued_families(alg, calg):
    rng = random.Random(6)
    assert ss.pullback_check(ss.tau(rand_even(rng, alg), rand_odd(rng, alg), alg))
    assert ss.pullback_check(ss.tau(rand_even(rng, alg), rand_odd(rng, alg), alg, twist=True))
    assert ss.pullback_check(ss.gamma(rand_even(rng, alg), rand_odd(rng, alg), alg))
    assert ss.pullback_check(ss.eps00(alg))
    assert ss.pullback_check(ss.tau_s(rand_circle(rng, calg), calg))
    assert ss.pullback_check(ss.nu(rand_circle(rng, calg), rand_even(rng, calg), rand_odd(rng, calg), calg))
    assert ss.pullback_check(ss.kappa(rand_circle(rng, calg), rand_even(rng, calg), rand_odd(rng, calg), calg))


def test_pullback_rejects_perturbed_map(alg):
    t = alg.generators()
    z, theta = 1 + t[0] * t[1], t[2]
    one = alg.one()
    bad = GenericMap((z, one), (), (theta,), (one,), alg)
    assert not ss.pullback_check(bad)
    with pytest.raises(SuperspaceError):
        bad.classify()


def test_generic_map_normalizes_into_family(alg):
    t = alg.generators()
    z, theta = 1 + t[0] * t[1], t[2]
    one = alg.one()
    good = GenericMap((z, one), (-theta,), (theta,), (one,), alg)
    assert ss.pullback_check(good)
    assert good.classify() == ss.tau(z, theta, alg)
    twisted = GenericMap((z, one), (theta,), (theta,), (-one,), alg)
    assert twisted.classify() == ss.tau(z, theta, alg, twist=True)


def test_generic_map_nonlinear_rejected(alg):
    one = alg.one()
    quad = GenericMap((alg.zero(), one, one), (), (alg.zero(),), (one,), alg)
    assert not ss.pullback_check(quad)
    with pytest.raises(SuperspaceError):
        quad.classify()


def test_reduce_gamma_is_point_map(alg):
    t = alg.generators()
    r = ss.reduce(ss.gamma(QQ(7, 2) + t[0] * t[1], t[2], alg))
    assert (r.domain, r.codomain) == ("pt", "R")
    assert r(()) == (Fraction(7, 2),)


def test_reduce_eps_is_identity(alg):
    r = ss.reduce(ss.eps11(alg))
    assert r((Fraction(3),)) == (Fraction(3),)


def test_reduce_and_lift_functorial():
    rng = random.Random(7)
    for _ in range(100):
        m1, m2 = random_composable_pair(rng)
        comp = ss.compose(m2, m1)
        assert ss.reduce(comp) == ss.reduce(m2).compose(ss.reduce(m1))
        assert ss.lift(comp) == ss.compose(ss.lift(m2), ss.lift(m1))


def test_lift_examples(alg):
    t = alg.generators()
    z, theta = 3 + t[0] * t[1], t[2]
    assert ss.lift(ss.tau(z, theta, alg)) == ss.tau(alg.scalar(3), alg.zero(), alg)
    assert ss.lift(ss.tau(z, theta, alg, twist=True)) == ss.tau(alg.scalar(3), alg.zero(), alg, twist=True)


def test_lift_nu(calg):
    rng = random.Random(8)
    x = CircleValue(QQ(2, 5), rand_soul(rng, calg))
    y = 4 + rand_soul(rng, calg)
    got = ss.lift(ss.nu(x, y, rand_odd(rng, calg), calg))
    assert got == ss.nu(CircleValue(QQ(2, 5), calg.zero()), calg.scalar(4), calg.zero(), calg)


def test_lift_is_left_inverse_on_body_maps(alg):
    m = ss.tau(alg.scalar(QQ(5, 3)), alg.zero(), alg)
    assert ss.lift(m) == m


def test_associativity():
    rng = random.Random(9)
    alg = GrassmannAlgebra(3, "C")
    for _ in range(20):
        a, b, c = (ss.kappa(rand_circle(rng, alg), rand_even(rng, alg), rand_odd(rng, alg), alg, twist=rng.random() < 0.5) for _ in range(3))
        assert ss.compose(ss.compose(a, b), c) == ss.compose(a, ss.compose(b, c))


def test_json_round_trip(calg):
    rng = random.Random(10)
    m = ss.nu(rand_circle(rng, calg), rand_even(rng, calg), rand_odd(rng, calg), calg, twist=True)
    data = json.loads(m.dumps())
    assert SuperMap.from_json(data) == m
