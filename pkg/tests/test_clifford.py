import json
import random

import pytest
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from superko.clifford import (
    CliffordError,
    GradedCliffordModule,
    abs_quotient,
    abs_quotient_complex,
    brute_force_quotient,
    decompose,
    direct_sum,
    double,
    extension_image,
    irreducible_dims,
    irreducible_graded_modules,
    restrict,
)

KO = ("Z", "Z/2", "Z/2", "0", "Z", "0", "0", "0")


def _signed_permutation(rng, size):
    perm = list(range(size))
    rng.shuffle(perm)
    rows = [[QQ(0)] * size for _ in range(size)]
    for i, j in enumerate(perm):
        rows[i][j] = QQ(rng.choice((1, -1)))
    return rows


def _even_isometry(rng, even, odd):
    """Block-diagonal signed permutation: even, orthogonal, generally not Clifford-linear."""
    a, b = _signed_permutation(rng, even), _signed_permutation(rng, odd)
    n = even + odd
    rows = [[QQ(0)] * n for _ in range(n)]
    for i in range(even):
        for j in range(even):
            rows[i][j] = a[i][j]
    for i in range(odd):
        for j in range(odd):
            rows[even + i][even + j] = b[i][j]
    return DomainMatrix(rows, (n, n), QQ)


@pytest.mark.parametrize("n", list(range(-10, 11)))
def test_irreducibles_satisfy_relations(n):
    for m in irreducible_graded_modules(n):
        m.validate()
        assert m.degree == n


def test_degree_zero_classes():
    dims = [(m.even_dim, m.odd_dim) for m in irreducible_graded_modules(0)]
    assert sorted(dims) == [(0, 1), (1, 0)]


def test_degree_minus_one_is_swap():
    (m,) = irreducible_graded_modules(-1)
    assert (m.even_dim, m.odd_dim) == (1, 1)
    (e,) = m.generators
    assert e.to_list() == [[0, 1], [1, 0]]
    assert (e * e).to_list() == [[1, 0], [0, 1]]


def test_period_eight_class_count():
    for n in range(-8, 9):
        assert len(irreducible_graded_modules(n)) == len(irreducible_graded_modules(n + 8))
    assert abs_quotient(8).is_isomorphic(abs_quotient(0))


def test_large_degree_uses_tensor_with_eight():
    for m in irreducible_graded_modules(20):
        assert m.degree == 20
    assert irreducible_dims(20)[0][0] * 2 == irreducible_graded_modules(20)[0].dim


def test_decompose_irreducible_is_unit():
    for n in (-3, 0, 3, 4):
        irr = irreducible_graded_modules(n)
        for i, m in enumerate(irr):
            mult = decompose(m).multiplicities
            assert mult == tuple(1 if j == i else 0 for j in range(len(irr)))


def test_decompose_two_distinct():
    irr = irreducible_graded_modules(4)
    assert len(irr) == 2
    s, _ = direct_sum(irr)
    assert decompose(s).multiplicities == (1, 1)


@pytest.mark.parametrize("n", [-2, 0, 1, 3, 4])
def test_decompose_after_random_change_of_basis(n):
    rng = random.Random(n)
    irr = irreducible_graded_modules(n)
    picks = [rng.randrange(len(irr)) for _ in range(3)]
    s, _ = direct_sum([irr[p] for p in picks])
    g = _even_isometry(rng, s.even_dim, s.odd_dim)
    t = s.conjugated(g)
    expected = tuple(picks.count(j) for j in range(len(irr)))
    assert decompose(t).multiplicities == expected


def test_decompose_witness_intertwines():
    irr = irreducible_graded_modules(1)
    s, _ = direct_sum([irr[0], irr[0]])
    cls = decompose(s)
    std, _ = direct_sum([irr[0]] * cls.multiplicities[0])
    w = cls.witness
    assert w * std.grading == s.grading * w
    for a, b in zip(std.generators, s.generators):
        assert w * a == b * w


def test_decompose_is_additive():
    irr = irreducible_graded_modules(2)
    a, _ = direct_sum([irr[0], irr[0]])
    b, _ = direct_sum([irr[0]])
    ab, _ = direct_sum([a, b])
    assert decompose(ab).multiplicities == (decompose(a) + decompose(b)).multiplicities


def test_restrict_degree_one():
    (m,) = [x for x in irreducible_graded_modules(1) if x.dim == 2][:1]
    r = restrict(m)
    assert r.degree == 0 and (r.even_dim, r.odd_dim) == (1, 1)


def test_restrict_degree_two_multiplicities():
    (m,) = irreducible_graded_modules(2)
    r = restrict(m)
    # Cl_2 irreducible (2|2) restricts to two copies of the Cl_1 irreducible
    assert r.degree == 1
    assert sum(decompose(r).multiplicities) == m.dim // irreducible_graded_modules(1)[0].dim


def test_restrict_additive():
    irr = irreducible_graded_modules(4)
    s, _ = direct_sum(irr)
    parts = decompose(restrict(irr[0])) + decompose(restrict(irr[1]))
    assert decompose(restrict(s)).multiplicities == parts.multiplicities


def test_restrict_needs_positive_degree():
    with pytest.raises(CliffordError):
        restrict(irreducible_graded_modules(0)[0])


def test_double_basic():
    r = [m for m in irreducible_graded_modules(0) if m.even_dim == 1][0]
    d = double(r, r)
    assert d.degree == -1 and d.dim == 2
    (e,) = d.generators
    assert e.to_list() == [[0, 1], [1, 0]]
    assert decompose(d).multiplicities == (1,)


def test_double_generators_anticommute():
    (m,) = irreducible_graded_modules(-2)
    d = double(m, m)
    gens = d.generators
    one = d.identity()
    for i, a in enumerate(gens):
        assert a * a == one
        for b in gens[i + 1 :]:
            assert a * b == -(b * a)


def test_double_class_independent_of_gamma():
    (m,) = irreducible_graded_modules(-1)
    s, _ = direct_sum([m, m])
    base = decompose(double(s, s)).multiplicities
    rng = random.Random(11)
    for _ in range(5):
        # gamma runs over the Clifford-linear even isometries of s
        cls = decompose(s.conjugated(_even_isometry(rng, s.even_dim, s.odd_dim)))
        gamma = cls.witness
        # witness maps s (standard) onto the conjugated module, which is Cl-linear by construction
        other = GradedCliffordModule(s.degree, s.even_dim, s.odd_dim, [gamma * e * gamma.inv() for e in s.generators])
        assert decompose(double(s, other, gamma)).multiplicities == base


def test_double_rejects_non_linear_gamma():
    (m,) = irreducible_graded_modules(-1)
    s, _ = direct_sum([m, m])
    rng = random.Random(3)
    for _ in range(20):
        g = _even_isometry(rng, s.even_dim, s.odd_dim)
        if all(g * e == e * g for e in s.generators):
            continue
        with pytest.raises(CliffordError):
            double(s, s, g)
        return
    pytest.fail("no non-linear isometry sampled")


def test_ko_table():
    for n in range(8):
        assert abs_quotient(n).presentation() == KO[n]


def test_ko_table_two_ways():
    for n in range(8):
        g = abs_quotient(n)
        bf = brute_force_quotient(n, "R", 4)
        assert bf["rank"] == g.rank
        assert sorted(bf["torsion"]) == sorted(g.torsion)


def test_zero_generator_and_inverse():
    g = abs_quotient(0)
    irr = irreducible_graded_modules(0)
    i_even = next(i for i, m in enumerate(irr) if m.even_dim == 1)
    v = [0, 0]
    v[i_even] = 1
    w = [1 - x for x in v]
    assert g.add(g.coords(v), g.coords(w)) == g.zero()
    assert g.coords(v) != g.zero()


def test_periodicity_real_and_complex():
    for n in range(-12, 5):
        assert abs_quotient(n).is_isomorphic(abs_quotient(n + 8))
    for n in range(-6, 7):
        assert abs_quotient_complex(n).is_isomorphic(abs_quotient_complex(n + 2))
        assert abs_quotient_complex(n).presentation() == ("Z" if n % 2 == 0 else "0")


def test_complex_brute_force():
    for n in range(4):
        g = abs_quotient_complex(n)
        bf = brute_force_quotient(n, "C", 4)
        assert bf["rank"] == g.rank and sorted(bf["torsion"]) == sorted(g.torsion)


def test_extension_image_degrees():
    for n in (-3, -1, 0, 2):
        t = irreducible_graded_modules(n + 1)[0]
        assert extension_image(t).degree == n


def test_module_json_round_trip():
    for n in (-2, 0, 3):
        for field in ("R", "C"):
            m = irreducible_graded_modules(n, field)[0]
            data = json.loads(json.dumps(m.to_json()))
            back = GradedCliffordModule.from_json(data)
            assert back.degree == n and back.dim == m.dim
            assert list(back.generators) == list(m.generators)


def test_invalid_module_rejected():
    bad = DomainMatrix([[QQ(1), QQ(0)], [QQ(0), QQ(1)]], (2, 2), QQ)
    with pytest.raises(CliffordError):
        GradedCliffordModule(1, 1, 1, [bad])
