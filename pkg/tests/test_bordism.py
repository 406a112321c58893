import random

import pytest
from sympy import QQ

from superko._exact import QQ_I
from superko.bordism import (
    BordismError,
    CliffordWord,
    DecoratedEndo,
    FockVacuumModule,
    Interval,
    SabEndo,
    fock_act,
    interval_compose,
    rewrite_word,
    sab_compose,
    seb_compose,
    word_to_endo,
)
from superko.grassmann import CircleValue, GrassmannAlgebra, GrassmannHom
from superko.suites import bordism_laws, rand_circle, rand_even, rand_odd, rand_word


@pytest.fixture
def alg():
    return GrassmannAlgebra(4)


def test_interval_law(alg):
    rng = random.Random(1)
    z1, t1, z2, t2 = rand_even(rng, alg), rand_odd(rng, alg), rand_even(rng, alg), rand_odd(rng, alg)
    got = seb_compose(DecoratedEndo.bordism(z1, t1, 2), DecoratedEndo.bordism(z2, t2, 2))
    assert got == DecoratedEndo.bordism(z1 + z2 + t1 * t2, t1 + t2, 2)


def test_eps_squared():
    for n in (-2, 0, 3):
        e = DecoratedEndo.eps(n)
        assert seb_compose(e, e) == DecoratedEndo.identity(n)


def test_clifford_passes_eps():
    rng = random.Random(2)
    c = rand_word(rng, 3)
    e = DecoratedEndo.eps(3)
    lhs = seb_compose(DecoratedEndo.cl(c), e)
    rhs = seb_compose(e, DecoratedEndo.cl(c.grading()))
    assert lhs == rhs


def test_clifford_commutes_with_interval(alg):
    rng = random.Random(3)
    c = rand_word(rng, -2)
    b = DecoratedEndo.bordism(rand_even(rng, alg), rand_odd(rng, alg), -2)
    assert seb_compose(DecoratedEndo.cl(c), b) == seb_compose(b, DecoratedEndo.cl(c))


def test_eps_conjugates_interval(alg):
    rng = random.Random(4)
    z, t = rand_even(rng, alg), rand_odd(rng, alg)
    e = DecoratedEndo.eps(1)
    got = seb_compose(e, seb_compose(DecoratedEndo.bordism(z, t, 1), e))
    assert got == DecoratedEndo.bordism(z, -t, 1)


def test_twisted_product_matches_rewriting(alg):
    rng = random.Random(5)
    for _ in range(20):
        i1 = Interval(rand_even(rng, alg), rand_odd(rng, alg))
        i2 = Interval(rand_even(rng, alg), rand_odd(rng, alg))
        word = [("eps",), ("I", i1), ("eps",), ("I", i2)]
        a = seb_compose(DecoratedEndo.eps(0), DecoratedEndo(False, CliffordWord.one(0), i1))
        b = seb_compose(DecoratedEndo.eps(0), DecoratedEndo(False, CliffordWord.one(0), i2))
        assert seb_compose(a, b) == word_to_endo(rewrite_word(word, rng), 0)
        # eps I eps I = I_{z1, -t1} I_{z2, t2}
        assert seb_compose(a, b).interval == interval_compose(i1.flipped(), i2)


def test_rewriting_is_confluent(alg):
    rng = random.Random(6)
    for _ in range(30):
        n = rng.randint(-2, 2)
        word = []
        for _ in range(rng.randint(2, 8)):
            kind = rng.choice(("eps", "cl", "I"))
            if kind == "eps":
                word.append(("eps",))
            elif kind == "cl":
                word.append(("cl", rand_word(rng, n)))
            else:
                word.append(("I", Interval(rand_even(rng, alg), rand_odd(rng, alg))))
        forms = {repr(word_to_endo(rewrite_word(word, random.Random(s)), n)) for s in range(4)}
        assert len(forms) == 1
        assert word_to_endo(rewrite_word(word, rng), n) == word_to_endo(word, n)


def test_interval_requires_positive_body(alg):
    with pytest.raises(BordismError):
        Interval(alg.scalar(-1), alg.zero())
    with pytest.raises(BordismError):
        Interval(alg.generator(0), alg.zero())


def test_annulus_law():
    calg = GrassmannAlgebra(4, "C")
    rng = random.Random(7)
    x1, y1, t1 = rand_circle(rng, calg), rand_even(rng, calg), rand_odd(rng, calg)
    x2, y2, t2 = rand_circle(rng, calg), rand_even(rng, calg), rand_odd(rng, calg)
    got = sab_compose(SabEndo.annular(x2, y2, t2), SabEndo.annular(x1, y1, t1))
    tt = t1 * t2
    half = calg.scalar(QQ(1, 2))
    ihalf = calg.scalar(QQ_I(0, QQ(1, 2)))
    assert got == SabEndo.annular(x1 + x2 + (-(tt * half)), y1 + y2 - tt * ihalf, t1 + t2)


def test_rotation_shifts_annulus():
    calg = GrassmannAlgebra(3, "C")
    rng = random.Random(8)
    r, x, y, t = rand_circle(rng, calg), rand_circle(rng, calg), rand_even(rng, calg), rand_odd(rng, calg)
    got = sab_compose(SabEndo.rot(r), SabEndo.annular(x, y, t))
    assert got == SabEndo.annular(x - r, y, t)


def test_rotations_compose():
    calg = GrassmannAlgebra(2, "C")
    a = CircleValue(QQ(3, 4), calg.zero())
    b = CircleValue(QQ(1, 4), calg.zero())
    assert sab_compose(SabEndo.rot(a), SabEndo.rot(b)) == SabEndo.identity(0)


def test_sab_eps_squared():
    e = SabEndo.eps(2)
    assert sab_compose(e, e) == SabEndo.identity(2)


def test_laws_on_seeded_triples():
    checks = bordism_laws(random.Random(9), 60, q_max=6)
    for c in checks:
        assert c.passed, (c.name, c.notes)


def test_base_change_commutes_with_composition():
    rng = random.Random(10)
    src, tgt = GrassmannAlgebra(3), GrassmannAlgebra(4)
    f = GrassmannHom(src, tgt, [rand_odd(rng, tgt, 2) for _ in range(3)])
    for _ in range(10):
        a = DecoratedEndo(rng.random() < 0.5, rand_word(rng, 1), Interval(rand_even(rng, src), rand_odd(rng, src)))
        b = DecoratedEndo(rng.random() < 0.5, rand_word(rng, 1), Interval(rand_even(rng, src), rand_odd(rng, src)))
        assert seb_compose(a, b).base_change(f) == seb_compose(a.base_change(f), b.base_change(f))


def test_clifford_relations():
    for n in (-3, 2):
        gens = [CliffordWord.generator(n, i) for i in range(abs(n))]
        sq = CliffordWord.one(n) * (1 if n > 0 else -1)
        for i, a in enumerate(gens):
            assert a * a == sq
            for b in gens[i + 1 :]:
                assert a * b == -(b * a)


def test_grading_is_a_homomorphism():
    rng = random.Random(11)
    for _ in range(10):
        a, b = rand_word(rng, -3), rand_word(rng, -3)
        assert (a * b).grading() == a.grading() * b.grading()


def test_fock_vacuum():
    fm = FockVacuumModule(-1)
    lam = CliffordWord.generator(-1, 0)
    one = CliffordWord.one(-1)
    omega = fm.vacuum
    assert fm.left(lam, omega) == fm.right(omega, lam)
    assert fock_act(one, omega, one) == omega
    assert fm.glue(omega, omega) == omega


def test_fock_bimodule_axioms():
    rng = random.Random(12)
    fm = FockVacuumModule(2)
    for _ in range(10):
        a, b, c, d = (rand_word(rng, 2) for _ in range(4))
        psi = fm.element(rand_word(rng, 2))
        assert fm.left(a, fm.left(b, psi)) == fm.left(a * b, psi)
        assert fm.right(fm.right(psi, c), d) == fm.right(psi, c * d)
        assert fock_act(a, psi, c) == fm.left(a, fm.right(psi, c))


def test_fock_matrix_model_eps_conjugation():
    fm = FockVacuumModule(1)
    left, right, eps = fm.matrix_model()

    def mul(x, y):
        return [[sum(x[i][k] * y[k][j] for k in range(2)) for j in range(2)] for i in range(2)]

    neg = [[-v for v in row] for row in left]
    # eps conjugates the odd generator to its negative
    assert mul(mul(eps, left), eps) == neg
    assert left == right


def test_fock_degree_mismatch():
    fm = FockVacuumModule(1)
    with pytest.raises(BordismError):
        fock_act(CliffordWord.one(2), fm.vacuum, CliffordWord.one(1))
