import json
import random
from fractions import Fraction

import pytest

from superko import categories as cat
from superko.categories import (
    CategoryError,
    DeformationMorphism,
    SpectralData,
    StabilityError,
    Subspace,
    TateError,
    Universe,
)
from superko.clifford import abs_quotient, direct_sum, irreducible_graded_modules

HALF = Fraction(1, 2)


@pytest.fixture(scope="module")
def u0():
    return Universe(0, "R", plain=2, ext=2)


@pytest.fixture(scope="module")
def u1():
    return Universe(1, "R", plain=2, ext=2)


def _merge_example(u):
    """+-lambda eigenspaces of one extension block flow into V_0 (A = 0)."""
    plain = next(b for b in u.blocks if b.kind == "plain")
    ext = next(b for b in u.blocks if b.kind == "ext")
    eps = u.eps()
    a = u.positive_part(ext)
    src = SpectralData(u.ambient, {Fraction(0): Subspace(plain.projector), HALF: Subspace(a), -HALF: Subspace(eps * a * eps)})
    tgt = SpectralData(u.ambient, {Fraction(0): Subspace(plain.projector + ext.projector)})
    alpha = {Fraction(0): Fraction(0), HALF: Fraction(0), -HALF: Fraction(0)}
    zero = Subspace.zero(u.ambient.dim, u.domain)
    return DeformationMorphism(src, tgt, alpha, src.total(), zero), plain, a


def test_ind_merge_example(u0):
    m, plain, a = _merge_example(u0)
    m.validate()
    v = cat.ind(m)
    v.validate()
    assert v.F == Subspace(plain.projector).projector
    assert v.A == Subspace(a)
    assert v.source == Subspace(plain.projector)


def test_identity_laws(u0):
    rng = random.Random(1)
    st = cat.random_spectral_data(rng, u0)
    m = cat.random_deformation(rng, st)
    assert cat.compose_deformation(cat.identity_deformation(m.target), m) == m
    assert cat.compose_deformation(m, cat.identity_deformation(m.source)) == m


def test_ind_of_identity(u0):
    rng = random.Random(2)
    st = cat.random_spectral_data(rng, u0)
    e = st.data
    v = cat.ind(cat.identity_deformation(e))
    assert v == cat.VnMorphism.identity(u0.ambient, cat.ind(e))


def test_random_morphisms_valid_and_associative(u1):
    rng = random.Random(3)
    for _ in range(10):
        st = cat.random_spectral_data(rng, u1)
        m1 = cat.random_deformation(rng, st)
        m2 = cat.random_deformation(rng, st)
        m3 = cat.random_deformation(rng, st)
        for m in (m1, m2, m3):
            assert m.is_valid(), m.violations()
        a = cat.compose_deformation(m3, cat.compose_deformation(m2, m1))
        b = cat.compose_deformation(cat.compose_deformation(m3, m2), m1)
        assert a == b


def test_factorization(u0):
    rng = random.Random(4)
    for _ in range(10):
        st = cat.random_spectral_data(rng, u0)
        m = cat.random_deformation(rng, st)
        inc, iso, r = cat.factor_deformation(m)
        for piece in (inc, iso, r):
            assert piece.is_valid()
        assert cat.compose_deformation(inc, cat.compose_deformation(iso, r)) == m


def test_ind_functorial_and_natural(u0, u1):
    rng = random.Random(5)
    for u in (u0, u1):
        for _ in range(8):
            st = cat.random_spectral_data(rng, u)
            m1 = cat.random_deformation(rng, st)
            m2 = cat.random_deformation(rng, st)
            assert cat.ind(cat.compose_deformation(m2, m1)) == cat.ind(m2).compose(cat.ind(m1))
            assert cat.naturality_holds(m1)


def test_ind_embed_round_trip(u0):
    rng = random.Random(6)
    for _ in range(8):
        st = cat.random_spectral_data(rng, u0)
        v = cat.ind(cat.random_deformation(rng, st))
        assert cat.ind(cat.embed(v)) == v
        assert cat.ind(cat.embed(v.source, u0.ambient)) == v.source


def test_embed_zero_module(u0):
    zero = Subspace.zero(u0.ambient.dim, u0.domain)
    e = cat.embed(zero, u0.ambient)
    assert e.spaces == {}
    with pytest.raises(CategoryError):
        cat.embed(zero)


def test_zero_spectrum_object_is_fixed(u0):
    plain = next(b for b in u0.blocks if b.kind == "plain")
    e = SpectralData(u0.ambient, {Fraction(0): Subspace(plain.projector)})
    assert cat.embed(cat.ind(e), u0.ambient) == e
    assert cat.natural_N(e) == cat.identity_deformation(e)


def test_invalid_morphism_detected(u0):
    m, _, a = _merge_example(u0)
    broken = DeformationMorphism(m.source, m.target, m.alpha, m.F, Subspace(a))
    assert not broken.is_valid()
    with pytest.raises(CategoryError):
        broken.validate()


def test_non_composable(u0):
    m, _, _ = _merge_example(u0)
    with pytest.raises(CategoryError):
        cat.compose_deformation(m, m)


def test_spectral_data_symmetry_enforced(u0):
    ext = next(b for b in u0.blocks if b.kind == "ext")
    a = u0.positive_part(ext)
    lonely = SpectralData(u0.ambient, {HALF: Subspace(a)})
    assert any("eps" in v for v in lonely.violations())


def test_json_round_trips(u0):
    rng = random.Random(7)
    st = cat.random_spectral_data(rng, u0)
    m = cat.random_deformation(rng, st)
    back = DeformationMorphism.from_json(json.loads(json.dumps(m.to_json())))
    assert back == m
    assert SpectralData.from_json(json.dumps(st.data.to_json())) == st.data


def test_circle_round_trip_and_naturality():
    u = Universe(0, "C", plain=2, ext=2)
    rng = random.Random(8)
    for _ in range(4):
        st = cat.random_spectral_data(rng, u, circle=True)
        m = cat.random_deformation(rng, st)
        assert m.is_valid()
        assert cat.naturality_holds(m)
        seq = cat.ind_circle(st.data)
        assert cat.ind_circle(cat.embed_circle(seq, u.ambient, st.data.k0)) == seq


def test_embed_circle_enforces_bound():
    u = Universe(0, "C", plain=1, ext=1)
    plain = next(b for b in u.blocks if b.kind == "plain")
    with pytest.raises(TateError):
        cat.embed_circle({-5: Subspace(plain.projector)}, u.ambient, k0=-2)


def test_quillen_v0_round_trips():
    u = Universe(0, "R", plain=3, ext=2)
    rng = random.Random(9)
    for _ in range(5):
        st = cat.random_spectral_data(rng, u)
        m = cat.ind(cat.random_deformation(rng, st))
        F = cat.quillen_iso_v0("F", m, u.ambient)
        assert not F.violations()
        assert cat.quillen_iso_v0("G", F, u.ambient) == m
        d = cat.random_virvect_morphism(rng, u.ambient)
        assert cat.quillen_iso_v0("F", cat.quillen_iso_v0("G", d, u.ambient), u.ambient) == d


def test_quillen_v0_empty_phi():
    u = Universe(0, "R", plain=2, ext=1)
    plain = next(b for b in u.blocks if b.kind == "plain")
    v = Subspace(plain.projector)
    F = cat.quillen_iso_v0("F", cat.VnMorphism.identity(u.ambient, v), u.ambient)
    assert F.phi.is_zero_matrix


def test_quillen_v1_round_trips():
    u = Universe(-1, "R", plain=3, ext=2)
    rng = random.Random(10)
    for _ in range(5):
        st = cat.random_spectral_data(rng, u)
        m = cat.ind(cat.random_deformation(rng, st))
        assert cat.quillen_iso_v1("G", cat.quillen_iso_v1("F", m.source, u.ambient), u.ambient) == m.source
        F = cat.quillen_iso_v1("F", m, u.ambient)
        assert not F.violations()
        assert cat.quillen_iso_v1("G", F, u.ambient) == m
        q = cat.random_qvect_morphism(rng, u.ambient)
        assert cat.quillen_iso_v1("F", cat.quillen_iso_v1("G", q, u.ambient), u.ambient) == q


def test_quillen_wrong_ambient(u1):
    with pytest.raises(CategoryError):
        cat.quillen_iso_v0("F", Subspace.zero(u1.ambient.dim, u1.domain), u1.ambient)


@pytest.mark.parametrize("n, comps", [(-2, 1), (-1, 1), (0, 17), (1, 2), (2, 2)])
def test_pi0_components(n, comps):
    res = cat.pi0(n, 8)
    assert res.passed
    assert res.components == comps
    assert res.group.is_isomorphic(abs_quotient(n))


def test_pi0_degree_zero_label_is_euler_characteristic():
    res = cat.pi0(0, 6)
    assert len(set(res.labels.values())) == res.components == 13


def test_pi0_complex():
    for n, g in ((0, "Z"), (1, "0")):
        assert cat.pi0(n, 6, "C").group.presentation() == g


def test_pi0_stability_from_module():
    irr = irreducible_graded_modules(1)
    small, _ = direct_sum(irr)
    with pytest.raises(StabilityError):
        cat.pi0(small, 8)
    big, _ = direct_sum(irr * 4)
    assert cat.pi0(big, 8).passed


def test_tate_coefficients():
    assert [g.presentation() for g in cat.tate_coefficients(0, (-3, 3))] == ["Z"] * 7
    assert [g.presentation() for g in cat.tate_coefficients(1, (-3, 3))] == ["0"] * 7
    assert cat.tate_coefficients(2, (0, 1), dim_cap=4)[0].presentation() == "Z"


def test_tate_restricted_product():
    cat.tate_coefficients(0, (-3, 3), objects={-3: 1, 2: 4}, k0=-3)
    with pytest.raises(TateError):
        cat.tate_coefficients(0, (-3, 3), objects={-4: 1}, k0=-3)
    with pytest.raises(TateError):
        cat.tate_coefficients(0, (3, -3))
