import json
import random

import numpy as np
import pytest
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from superko._exact import QQ_I
from superko.bordism import seb_compose, sab_compose
from superko.clifford import GradedCliffordModule, irreducible_graded_modules
from superko.fieldtheory import (
    AftGenerator,
    FieldTheoryError,
    SeftGenerator,
    aft_evolution,
    recover_generator,
    random_aft_generator,
    random_seft_generator,
    represent_sab,
    represent_seb,
    seft_evolution,
    verify_aft_relations,
    verify_xy_relations,
)
from superko.grassmann import CircleValue, GrassmannAlgebra
from superko.suites import _rand_sab, _rand_seb, rand_circle, rand_even, rand_odd


def _m(rows, dom=QQ):
    return DomainMatrix([[dom(v) for v in r] for r in rows], (len(rows), len(rows[0])), dom)


def _plain(even, odd, field="R"):
    return GradedCliffordModule(0, even, odd, [], field)


def _swap_generator():
    amb = _plain(1, 1)
    return SeftGenerator(amb, _m([[1, 0], [0, 1]]), _m([[0, 1], [1, 0]]))


def test_zero_generator_gives_identity():
    amb = _plain(2, 1)
    g = SeftGenerator(amb, _m(np.eye(3, dtype=int).tolist()), _m(np.zeros((3, 3), dtype=int).tolist()))
    alg = GrassmannAlgebra(2)
    e = seft_evolution(g, alg.scalar(QQ(3, 2)), alg.generator(0))
    assert np.allclose(e.body_matrix(), np.eye(3))
    assert e.nil == e.nil.identity(alg, g.grading_vector)


def test_heat_semigroup():
    g = _swap_generator()
    for t, s in ((0.3, 0.7), (1.0, 2.5)):
        assert np.allclose(g.body(t) @ g.body(s), g.body(t + s), atol=1e-12)


def test_swap_generator_product_law():
    g = _swap_generator()
    alg = GrassmannAlgebra(2)
    t = alg.generators()
    z1 = QQ(1, 2) + t[0] * t[1]
    z2 = alg.scalar(2)
    samples = [(z1, t[0], z2, t[1]), (alg.scalar(1), t[1], z1, t[0])]
    rep = verify_xy_relations(g, samples)
    assert rep.passed, rep.failures
    assert rep.max_body_error < 1e-10


def test_theta_zero_reduces_to_semigroup():
    g = _swap_generator()
    alg = GrassmannAlgebra(2)
    a, b = alg.scalar(QQ(1, 3)), alg.scalar(QQ(2, 3))
    prod = seft_evolution(g, a, alg.zero()).compose(seft_evolution(g, b, alg.zero()))
    ok, dist = prod.same_as(seft_evolution(g, a + b, alg.zero()))
    assert ok and dist < 1e-12


def test_random_generators_satisfy_relations():
    rng = random.Random(1)
    alg = GrassmannAlgebra(4)
    for n in range(-3, 4):
        g = random_seft_generator(rng, n)
        assert not g.violations()
        samples = [(rand_even(rng, alg), rand_odd(rng, alg), rand_even(rng, alg), rand_odd(rng, alg)) for _ in range(2)]
        rep = verify_xy_relations(g, samples)
        assert rep.passed, (n, rep.failures)
        assert rep.max_body_error < 1e-10


def test_non_linear_generator_flagged():
    (m,) = irreducible_graded_modules(1)
    g = SeftGenerator(m, _m([[1, 0], [0, 1]]), _m([[0, 1], [1, 0]]), check=False)
    assert any("commute" in v for v in g.violations())
    with pytest.raises(FieldTheoryError):
        g.validate()


def test_grading_conjugation():
    rng = random.Random(2)
    alg = GrassmannAlgebra(3)
    g = random_seft_generator(rng, 1, max_dim=8)
    z, th = rand_even(rng, alg), rand_odd(rng, alg)
    assert seft_evolution(g, z, th).nil.flipped() == seft_evolution(g, z, -th).nil


def test_seft_rejects_nonpositive_body():
    g = _swap_generator()
    alg = GrassmannAlgebra(1)
    with pytest.raises(FieldTheoryError):
        seft_evolution(g, alg.scalar(0), alg.zero())


def test_aft_pure_level():
    k = 2
    amb = _plain(1, 1, "C")
    eye = _m([[1, 0], [0, 1]], QQ_I)
    g = AftGenerator(amb, [k, k], eye * QQ_I(k, 0), _m([[0, 0], [0, 0]], QQ_I))
    calg = GrassmannAlgebra(2, "C")
    x, y = QQ(1, 8), QQ(1, 5)
    e = aft_evolution(g, CircleValue(x, calg.zero()), calg.scalar(y), calg.zero())
    q = np.exp(2j * np.pi * (1 / 8 + 1j / 5))
    assert np.allclose(e.body_matrix(), q**k * np.eye(2), atol=1e-12)


def test_aft_composition_and_adjoint():
    rng = random.Random(3)
    calg = GrassmannAlgebra(3, "C")
    for n in (-1, 0, 2):
        g = random_aft_generator(rng, n, max_dim=8)
        samples = [(rand_circle(rng, calg), rand_even(rng, calg), rand_odd(rng, calg), rand_circle(rng, calg), rand_even(rng, calg), rand_odd(rng, calg))]
        rep = verify_aft_relations(g, samples)
        assert rep.passed, rep.failures
        assert rep.max_body_error < 1e-10


def test_aft_reconstruction_identity():
    rng = random.Random(4)
    g = random_aft_generator(rng, 0, max_dim=8)
    G2 = g.G * g.G
    H = g.L + G2
    P = G2 - g.L
    assert G2 + G2 == H + P
    assert not g.violations()


def test_aft_needs_complex_module():
    with pytest.raises(FieldTheoryError):
        AftGenerator(_plain(1, 0), [0], _m([[0]]), _m([[0]]))


def test_representations_respect_composition():
    rng = random.Random(5)
    alg = GrassmannAlgebra(3)
    calg = GrassmannAlgebra(3, "C")
    for n in (-1, 0, 1):
        g = random_seft_generator(rng, n, max_dim=8)
        a, b = _rand_seb(rng, n, alg), _rand_seb(rng, n, alg)
        ok, dist = represent_seb(g, a, alg).compose(represent_seb(g, b, alg)).same_as(represent_seb(g, seb_compose(a, b), alg))
        assert ok and dist < 1e-10
        ga = random_aft_generator(rng, n, max_dim=8)
        a, b = _rand_sab(rng, n, calg), _rand_sab(rng, n, calg)
        ok, dist = represent_sab(ga, a, calg).compose(represent_sab(ga, b, calg)).same_as(represent_sab(ga, sab_compose(a, b), calg))
        assert ok and dist < 1e-10


def _samples_from(Q, P, times):
    w, v = np.linalg.eigh(Q @ Q)
    out = []
    for t in times:
        X = (v * np.exp(-t * w)) @ v.T @ P
        out.append((t, X, Q @ X))
    return out


def test_recover_known_generator():
    Q = np.array([[0.0, 2.0, 0.0], [2.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    P = np.diag([1.0, 1.0, 0.0])
    rec = recover_generator(_samples_from(Q, P, [0.5, 1.0, 1.7]))
    assert np.allclose(rec.projector, P, atol=1e-9)
    assert np.allclose(rec.Q @ rec.Q, Q @ Q, atol=1e-8)
    assert np.allclose(rec.Q, Q, atol=1e-8)
    assert [m for _, m in rec.eigenvalues] == [2]
    alg = GrassmannAlgebra(2)
    ev = seft_evolution(rec, alg.scalar(1), alg.zero())
    assert np.allclose(ev.body_matrix(), _samples_from(Q, P, [1.0])[0][1], atol=1e-8)


def test_recover_zero_operators():
    z = np.zeros((2, 2))
    rec = recover_generator([(1.0, z, z), (2.0, z, z)])
    assert np.allclose(rec.projector, 0)


def test_recover_rejects_broken_semigroup():
    Q = np.array([[0.0, 1.0], [1.0, 0.0]])
    samples = _samples_from(Q, np.eye(2), [0.5, 1.0])
    t, X, Y = samples[1]
    samples[1] = (t, X * 0.9, Y * 0.9)
    with pytest.raises(FieldTheoryError):
        recover_generator(samples)


def test_generator_json_round_trip():
    rng = random.Random(6)
    g = random_seft_generator(rng, 1, max_dim=8)
    back = SeftGenerator.from_json(json.loads(json.dumps(g.to_json())))
    assert back.Q == g.Q and back.projector == g.projector
    ga = random_aft_generator(rng, 0, max_dim=8)
    back = AftGenerator.from_json(json.loads(json.dumps(ga.to_json())))
    assert back.L == ga.L and back.G == ga.G and back.levels == ga.levels
