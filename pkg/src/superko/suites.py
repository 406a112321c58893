"""Seeded verification suites shared by the command line and the test suite.

Every suite returns a :class:`SuiteReport` whose JSON form is a pure function
of the seed (no timings, no object addresses).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from sympy import QQ

from . import categories as cat
from . import fredholm as fr
from ._exact import QQ_I
from .bordism import (
    Annulus,
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
from .clifford import abs_quotient, abs_quotient_complex, brute_force_quotient
from .fieldtheory import (
    random_aft_generator,
    random_seft_generator,
    represent_sab,
    represent_seb,
    verify_aft_relations,
    verify_xy_relations,
)
from .grassmann import CircleValue, GrassmannAlgebra, GrassmannHom, exp_nilpotent_even
from . import superspace as ss

__all__ = ["Check", "SuiteReport", "SUITE_NAMES", "run_suite", "suite_rng", "KO_EXPECTED"]

SUITE_NAMES = ("grassmann", "superspace", "bordism", "fieldtheory", "categories", "fredholm")

KO_EXPECTED = ("Z", "Z/2", "Z/2", "0", "Z", "0", "0", "0")


@dataclass
class Check:
    name: str
    total: int = 0
    failed: int = 0
    notes: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failed == 0 and self.total > 0

    def record(self, ok: bool, note: str | None = None):
        self.total += 1
        if not ok:
            self.failed += 1
            if note and len(self.notes) < 5:
                self.notes.append(note)

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "total": self.total, "failed": self.failed}
        if self.notes:
            out["notes"] = list(self.notes)
        out.update(self.extra)
        return out


@dataclass
class SuiteReport:
    name: str
    seed: int
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def to_json(self) -> dict:
        return {"suite": self.name, "seed": self.seed, "passed": self.passed, "checks": [c.to_json() for c in self.checks]}


def suite_rng(seed: int, name: str) -> random.Random:
    return random.Random(f"superko:{seed}:{name}")


# ------------------------------------------------------------------ random Grassmann data


def _coeff(rng: random.Random, dom, lo: int = -3, hi: int = 3):
    re = Fraction(rng.randint(lo, hi), rng.randint(1, 3))
    if dom == QQ_I:
        im = Fraction(rng.randint(lo, hi), rng.randint(1, 3))
        return QQ_I(QQ(re.numerator, re.denominator), QQ(im.numerator, im.denominator))
    return QQ(re.numerator, re.denominator)


def _masks(alg: GrassmannAlgebra, parity: int, with_body: bool):
    return [m for m in range(1 << alg.q) if bin(m).count("1") % 2 == parity and (m or with_body)]


def rand_even(rng: random.Random, alg: GrassmannAlgebra, positive: bool = True, terms: int = 3):
    masks = _masks(alg, 0, False)
    out = {m: _coeff(rng, alg.domain) for m in rng.sample(masks, min(terms, len(masks)))}
    b = Fraction(rng.randint(1, 6), rng.randint(1, 3))
    out[0] = b if positive else Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return alg.element(out)


def rand_soul(rng: random.Random, alg: GrassmannAlgebra, terms: int = 2):
    masks = _masks(alg, 0, False)
    return alg.element({m: _coeff(rng, alg.domain) for m in rng.sample(masks, min(terms, len(masks)))})


def rand_odd(rng: random.Random, alg: GrassmannAlgebra, terms: int = 3):
    masks = _masks(alg, 1, False)
    return alg.element({m: _coeff(rng, alg.domain) for m in rng.sample(masks, min(terms, len(masks)))})


def rand_any(rng: random.Random, alg: GrassmannAlgebra, terms: int = 4):
    masks = list(range(1 << alg.q))
    return alg.element({m: _coeff(rng, alg.domain) for m in rng.sample(masks, min(terms, len(masks)))})


def rand_circle(rng: random.Random, alg: GrassmannAlgebra) -> CircleValue:
    return CircleValue(QQ(rng.randint(0, 13), 7), rand_soul(rng, alg))


def rand_word(rng: random.Random, n: int, dom=QQ) -> CliffordWord:
    k = abs(n)
    masks = rng.sample(range(1 << k), min(3, 1 << k))
    return CliffordWord(n, {m: _coeff(rng, dom) for m in masks}, dom)


def rand_hom(rng: random.Random, src: GrassmannAlgebra, tgt: GrassmannAlgebra) -> GrassmannHom:
    return GrassmannHom(src, tgt, [rand_odd(rng, tgt, 2) for _ in range(src.q)])


# ------------------------------------------------------------------ grassmann


def suite_grassmann(seed: int, count: int = 200) -> SuiteReport:
    rng = suite_rng(seed, "grassmann")
    assoc = Check("associativity")
    comm = Check("graded commutativity")
    body = Check("body is multiplicative")
    expo = Check("exp(a + b) = exp(a) exp(b) on nilpotent even elements")
    hom = Check("base change is an algebra map")
    for i in range(count):
        alg = GrassmannAlgebra(rng.randint(1, 6), rng.choice(["R", "C"]))
        a, b, c = (rand_any(rng, alg) for _ in range(3))
        assoc.record((a * b) * c == a * (b * c), f"sample {i}")
        x, y, z = rand_odd(rng, alg), rand_even(rng, alg, positive=False), rand_odd(rng, alg)
        comm.record(x * y == y * x and x * z == -(z * x), f"sample {i}")
        body.record((a * b).body() == a.body() * b.body(), f"sample {i}")
        s, t = rand_soul(rng, alg), rand_soul(rng, alg)
        expo.record(exp_nilpotent_even(s + t) == exp_nilpotent_even(s) * exp_nilpotent_even(t), f"sample {i}")
        tgt = GrassmannAlgebra(rng.randint(1, 5), alg.field)
        f = rand_hom(rng, alg, tgt)
        hom.record(f(a * b) == f(a) * f(b) and f(a + b) == f(a) + f(b), f"sample {i}")
    return SuiteReport("grassmann", seed, [assoc, comm, body, expo, hom])


# ------------------------------------------------------------------ superspace

_CHAINS = [
    ("Eps00", "Eps00"),
    ("Eps00", "Gamma"),
    ("Gamma", "Tau"),
    ("Tau", "Tau"),
    ("TauS", "TauS"),
    ("TauS", "Nu"),
    ("Nu", "Kappa"),
    ("Kappa", "Kappa"),
]


def _rand_map(rng: random.Random, kind: str, alg: GrassmannAlgebra) -> ss.SuperMap:
    twist = rng.random() < 0.5
    if kind == "Eps00":
        return ss.SuperMap("Eps00", (), twist, alg)
    if kind in ("Gamma", "Tau"):
        return ss.SuperMap(kind, (rand_even(rng, alg), rand_odd(rng, alg)), twist, alg)
    if kind == "TauS":
        return ss.SuperMap(kind, (rand_circle(rng, alg),), twist, alg)
    return ss.SuperMap(kind, (rand_circle(rng, alg), rand_even(rng, alg), rand_odd(rng, alg)), twist, alg)


def random_composable_pair(rng: random.Random):
    first, second = rng.choice(_CHAINS)
    field = "C" if first in ("TauS", "Nu", "Kappa") or second in ("Nu", "Kappa") else "R"
    alg = GrassmannAlgebra(rng.randint(1, 5), field)
    return _rand_map(rng, first, alg), _rand_map(rng, second, alg)


def check_lift_reduce(rng: random.Random, count: int) -> tuple[Check, Check, Check]:
    lift_c = Check("lift is functorial")
    red_c = Check("reduce is functorial")
    pb = Check("maps preserve the distinguished forms")
    for i in range(count):
        m1, m2 = random_composable_pair(rng)
        comp = ss.compose(m2, m1)
        lift_c.record(ss.lift(comp) == ss.compose(ss.lift(m2), ss.lift(m1)), f"pair {i}: {m1.kind}->{m2.kind}")
        red_c.record(ss.reduce(comp) == ss.reduce(m2).compose(ss.reduce(m1)), f"pair {i}: {m1.kind}->{m2.kind}")
        if i % 10 == 0:
            pb.record(ss.pullback_check(comp), f"pair {i}")
    return lift_c, red_c, pb


def suite_superspace(seed: int, count: int = 500) -> SuiteReport:
    rng = suite_rng(seed, "superspace")
    lift_c, red_c, pb = check_lift_reduce(rng, count)
    assoc = Check("composition is associative")
    for i in range(count // 5):
        first, second = rng.choice([c for c in _CHAINS if c[0] == c[1]])
        field = "C" if first in ("TauS", "Kappa") else "R"
        alg = GrassmannAlgebra(rng.randint(1, 4), field)
        a, b, c = (_rand_map(rng, first, alg) for _ in range(3))
        assoc.record(ss.compose(ss.compose(a, b), c) == ss.compose(a, ss.compose(b, c)), f"triple {i}")
    return SuiteReport("superspace", seed, [lift_c, red_c, pb, assoc])


# ------------------------------------------------------------------ bordism


def _rand_interval(rng, alg) -> Interval:
    return Interval(rand_even(rng, alg), rand_odd(rng, alg))


def _rand_annulus(rng, alg) -> Annulus:
    return Annulus(rand_circle(rng, alg), rand_even(rng, alg), rand_odd(rng, alg))


def _rand_seb(rng, n, alg) -> DecoratedEndo:
    k = rng.randrange(4)
    if k == 0:
        return DecoratedEndo.eps(n)
    if k == 1:
        return DecoratedEndo.cl(rand_word(rng, n))
    out = DecoratedEndo.bordism(rand_even(rng, alg), rand_odd(rng, alg), n)
    if k == 3:
        out = seb_compose(DecoratedEndo(rng.random() < 0.5, rand_word(rng, n)), out)
    return out


def _rand_sab(rng, n, alg) -> SabEndo:
    k = rng.randrange(5)
    if k == 0:
        return SabEndo.eps(n)
    if k == 1:
        return SabEndo(False, rand_word(rng, n, QQ_I))
    if k == 2:
        return SabEndo.rot(rand_circle(rng, alg), n)
    a = _rand_annulus(rng, alg)
    out = SabEndo.annular(a.x, a.y, a.theta, n)
    if k == 4:
        out = sab_compose(SabEndo(rng.random() < 0.5, rand_word(rng, n, QQ_I), None, rand_circle(rng, alg)), out)
    return out


def bordism_laws(rng: random.Random, count: int, q_max: int = 6) -> list[Check]:
    semi = Check("interval composition law")
    semi_assoc = Check("interval semigroup associativity")
    seb_law = Check("decorated interval composition law")
    seb_assoc = Check("SEB associativity")
    sab_law = Check("annulus composition law")
    sab_assoc = Check("SAB associativity")
    half = QQ(1, 2)
    ihalf = QQ_I(0, QQ(1, 2))
    for i in range(count):
        q = rng.randint(1, q_max)
        alg = GrassmannAlgebra(q)
        calg = GrassmannAlgebra(q, "C")
        n = rng.randint(-3, 3)
        i1, i2, i3 = (_rand_interval(rng, alg) for _ in range(3))
        law = interval_compose(i1, i2) == Interval(i1.z + i2.z + i1.theta * i2.theta, i1.theta + i2.theta)
        semi.record(law, f"triple {i}")
        semi_assoc.record(interval_compose(interval_compose(i1, i2), i3) == interval_compose(i1, interval_compose(i2, i3)), f"triple {i}")
        b1 = DecoratedEndo.bordism(i1.z, i1.theta, n)
        b2 = DecoratedEndo.bordism(i2.z, i2.theta, n)
        expect = DecoratedEndo.bordism(i1.z + i2.z + i1.theta * i2.theta, i1.theta + i2.theta, n)
        seb_law.record(seb_compose(b1, b2) == expect, f"triple {i}")
        a, b, c = (_rand_seb(rng, n, alg) for _ in range(3))
        seb_assoc.record(seb_compose(seb_compose(a, b), c) == seb_compose(a, seb_compose(b, c)), f"triple {i}")
        a1, a2 = _rand_annulus(rng, calg), _rand_annulus(rng, calg)
        tt = a1.theta * a2.theta
        expect_a = SabEndo.annular(a1.x + a2.x + (-(tt * half)), a1.y + a2.y - tt * ihalf, a1.theta + a2.theta, n)
        got = sab_compose(SabEndo.annular(a2.x, a2.y, a2.theta, n), SabEndo.annular(a1.x, a1.y, a1.theta, n))
        sab_law.record(got == expect_a, f"triple {i}")
        a, b, c = (_rand_sab(rng, n, calg) for _ in range(3))
        sab_assoc.record(sab_compose(sab_compose(a, b), c) == sab_compose(a, sab_compose(b, c)), f"triple {i}")
    return [semi, semi_assoc, seb_law, seb_assoc, sab_law, sab_assoc]


def suite_bordism(seed: int, count: int = 1000) -> SuiteReport:
    rng = suite_rng(seed, "bordism")
    checks = bordism_laws(rng, count)
    conf = Check("rewriting is confluent")
    for i in range(max(20, count // 20)):
        n = rng.randint(-3, 3)
        alg = GrassmannAlgebra(rng.randint(1, 4))
        word = []
        for _ in range(rng.randint(1, 8)):
            k = rng.randrange(3)
            word.append(("eps",) if k == 0 else ("cl", rand_word(rng, n)) if k == 1 else ("I", _rand_interval(rng, alg)))
        r1 = rewrite_word(word, random.Random(rng.random()))
        r2 = rewrite_word(word, random.Random(rng.random()))
        conf.record(word_to_endo(r1, n) == word_to_endo(r2, n) == word_to_endo(word, n), f"word {i}")
    base = Check("base change commutes with composition")
    for i in range(max(20, count // 20)):
        n = rng.randint(-2, 2)
        src, tgt = GrassmannAlgebra(rng.randint(1, 4)), GrassmannAlgebra(rng.randint(1, 4))
        f = rand_hom(rng, src, tgt)
        a, b = _rand_seb(rng, n, src), _rand_seb(rng, n, src)
        base.record(seb_compose(a, b).base_change(f) == seb_compose(a.base_change(f), b.base_change(f)), f"pair {i}")
        csrc, ctgt = GrassmannAlgebra(src.q, "C"), GrassmannAlgebra(tgt.q, "C")
        g = rand_hom(rng, csrc, ctgt)
        a, b = _rand_sab(rng, n, csrc), _rand_sab(rng, n, csrc)
        base.record(sab_compose(a, b).base_change(g) == sab_compose(a.base_change(g), b.base_change(g)), f"pair {i}")
    eps = Check("eps o eps = identity")
    fock = Check("Fock vacuum: lambda Omega = Omega lambda")
    for n in (-3, -2, -1, 1, 2, 3):
        eps.record(seb_compose(DecoratedEndo.eps(n), DecoratedEndo.eps(n)) == DecoratedEndo.identity(n))
        eps.record(sab_compose(SabEndo.eps(n), SabEndo.eps(n)) == SabEndo.identity(n))
    for n in (-1, 1):
        fm = FockVacuumModule(n)
        lam = CliffordWord.generator(n, 0)
        one = CliffordWord.one(n)
        vac = fm.vacuum
        fock.record(fm.left(lam, vac) == fm.right(vac, lam))
        fock.record(fock_act(one, vac, one) == vac)
    return SuiteReport("bordism", seed, checks + [conf, base, eps, fock])


# ------------------------------------------------------------------ field theories


def seft_representation_checks(rng: random.Random, count: int, samples: int = 2) -> Check:
    chk = Check("SEFT interval product relations", extra={})
    worst = 0.0
    alg = GrassmannAlgebra(4)
    for i in range(count):
        n = -3 + i % 7
        g = random_seft_generator(rng, n)
        smp = [(rand_even(rng, alg), rand_odd(rng, alg), rand_even(rng, alg), rand_odd(rng, alg)) for _ in range(samples)]
        rep = verify_xy_relations(g, smp)
        worst = max(worst, rep.max_body_error)
        chk.record(rep.passed and rep.max_body_error < 1e-10, f"generator {i} (n={n}): {rep.failures[:1]}")
    chk.extra["max_body_error_below_1e-10"] = worst < 1e-10
    return chk


def aft_representation_checks(rng: random.Random, count: int, samples: int = 2) -> Check:
    chk = Check("AFT composition and adjoint identity")
    worst = 0.0
    calg = GrassmannAlgebra(4, "C")
    for i in range(count):
        n = -3 + i % 7
        g = random_aft_generator(rng, n)
        smp = []
        for _ in range(samples):
            smp.append((rand_circle(rng, calg), rand_even(rng, calg), rand_odd(rng, calg), rand_circle(rng, calg), rand_even(rng, calg), rand_odd(rng, calg)))
        rep = verify_aft_relations(g, smp)
        worst = max(worst, rep.max_body_error)
        chk.record(rep.passed and rep.max_body_error < 1e-10, f"generator {i} (n={n}): {rep.failures[:1]}")
    chk.extra["max_body_error_below_1e-10"] = worst < 1e-10
    return chk


def suite_fieldtheory(seed: int, count: int = 100) -> SuiteReport:
    rng = suite_rng(seed, "fieldtheory")
    seft = seft_representation_checks(rng, count)
    aft = aft_representation_checks(rng, max(7, count // 3))
    hom = Check("SEB and SAB act by representations")
    alg = GrassmannAlgebra(3)
    calg = GrassmannAlgebra(3, "C")
    for i in range(max(7, count // 5)):
        n = -3 + i % 7
        g = random_seft_generator(rng, n, max_dim=8)
        a, b = _rand_seb(rng, n, alg), _rand_seb(rng, n, alg)
        lhs = represent_seb(g, a, alg).compose(represent_seb(g, b, alg))
        rhs = represent_seb(g, seb_compose(a, b), alg)
        ok, dist = lhs.same_as(rhs)
        hom.record(ok and dist < 1e-10, f"SEB pair {i}")
        ga = random_aft_generator(rng, n, max_dim=8)
        a, b = _rand_sab(rng, n, calg), _rand_sab(rng, n, calg)
        lhs = represent_sab(ga, a, calg).compose(represent_sab(ga, b, calg))
        rhs = represent_sab(ga, sab_compose(a, b), calg)
        ok, dist = lhs.same_as(rhs)
        hom.record(ok and dist < 1e-10, f"SAB pair {i}")
    return SuiteReport("fieldtheory", seed, [seft, aft, hom])


# ------------------------------------------------------------------ categories

_SEFT_UNIVERSES = [(0, "R"), (1, "R"), (-1, "R"), (2, "R"), (-2, "R"), (1, "C"), (0, "C")]


def _universe(cache: dict, degree: int, field: str) -> cat.Universe:
    key = (degree, field)
    if key not in cache:
        cache[key] = cat.Universe(degree, field, plain=2, ext=2)
    return cache[key]


def naturality_checks(rng: random.Random, seft_count: int, aft_count: int) -> list[Check]:
    unis: dict = {}
    valid = Check("sampled morphisms are valid")
    nat = Check("naturality of N (SEFT)")
    nat_aft = Check("naturality of N (AFT)")
    functor = Check("ind preserves composition")
    assoc = Check("composition is associative")
    fact = Check("factorization (incl, incl, A) o (id, f, 0) o (alpha, id, 0)")
    round_trip = Check("ind o embed = identity")
    for i in range(seft_count):
        u = _universe(unis, *_SEFT_UNIVERSES[i % len(_SEFT_UNIVERSES)])
        st = cat.random_spectral_data(rng, u)
        m1 = cat.random_deformation(rng, st)
        m2 = cat.random_deformation(rng, st)
        m3 = cat.random_deformation(rng, st)
        valid.record(m1.is_valid() and m2.is_valid(), f"morphism {i}")
        nat.record(cat.naturality_holds(m1), f"morphism {i}")
        c12 = cat.compose_deformation(m2, m1)
        functor.record(cat.ind(c12) == cat.ind(m2).compose(cat.ind(m1)), f"pair {i}")
        lhs = cat.compose_deformation(m3, c12)
        rhs = cat.compose_deformation(cat.compose_deformation(m3, m2), m1)
        assoc.record(lhs == rhs, f"triple {i}")
        inc, iso, r = cat.factor_deformation(m1)
        fact.record(cat.compose_deformation(inc, cat.compose_deformation(iso, r)) == m1, f"morphism {i}")
        v = cat.ind(m1)
        round_trip.record(cat.ind(cat.embed(v)) == v and cat.ind(cat.embed(v.source, u.ambient)) == v.source, f"morphism {i}")
    aft_unis = [(0, "C"), (1, "C"), (-1, "C"), (2, "C")]
    for i in range(aft_count):
        u = _universe(unis, *aft_unis[i % len(aft_unis)])
        st = cat.random_spectral_data(rng, u, circle=True)
        m1 = cat.random_deformation(rng, st)
        m2 = cat.random_deformation(rng, st)
        valid.record(m1.is_valid(), f"AFT morphism {i}")
        nat_aft.record(cat.naturality_holds(m1), f"AFT morphism {i}")
        c12 = cat.compose_deformation(m2, m1)
        ok = all(cat.ind_level(c12, k) == cat.ind_level(m2, k).compose(cat.ind_level(m1, k)) for k in (0, 1, 2))
        functor.record(ok, f"AFT pair {i}")
        seq = cat.ind_circle(st.data)
        round_trip.record(cat.ind_circle(cat.embed_circle(seq, u.ambient, st.data.k0)) == seq, f"AFT object {i}")
    return [valid, nat, nat_aft, functor, assoc, fact, round_trip]


def quillen_checks(rng: random.Random, count: int) -> list[Check]:
    v0 = Check("V_0 ~ virVect: GF = id and FG = id")
    v1 = Check("V_1 ~ QVect: GF = id and FG = id")
    f_funct = Check("F preserves composition")
    u0 = cat.Universe(0, "R", plain=3, ext=2)
    u1 = cat.Universe(-1, "R", plain=3, ext=2)
    for u, chk, iso, rand in ((u0, v0, cat.quillen_iso_v0, cat.random_virvect_morphism), (u1, v1, cat.quillen_iso_v1, cat.random_qvect_morphism)):
        amb = u.ambient
        for i in range(count):
            st = cat.random_spectral_data(rng, u)
            m1 = cat.ind(cat.random_deformation(rng, st))
            m2 = cat.ind(cat.random_deformation(rng, st))
            F1 = iso("F", m1, amb)
            ok = not F1.violations() and iso("G", F1, amb) == m1
            ok = ok and iso("F", m1.source, amb) is not None and iso("G", iso("F", m1.source, amb), amb) == m1.source
            d = rand(rng, amb)
            G = iso("G", d, amb)
            ok = ok and not G.violations() and iso("F", G, amb) == d
            chk.record(ok, f"sample {i}")
            f_funct.record(iso("F", m2.compose(m1), amb) == iso("F", m2, amb).compose(F1), f"sample {i}")
    return [v0, v1, f_funct]


def pi0_checks(degrees=(-2, -1, 0, 1, 2), dim_cap: int = 8) -> Check:
    chk = Check("pi_0 components biject with the quotient group")
    comps = {}
    for n in degrees:
        res = cat.pi0(n, dim_cap)
        comps[str(n)] = {"components": res.components, "group": res.group.presentation()}
        chk.record(res.passed and res.group.is_isomorphic(abs_quotient(n)), f"n={n}")
    chk.extra["components"] = comps
    return chk


def tate_checks() -> Check:
    chk = Check("Tate coefficients")
    zs = cat.tate_coefficients(0, (-3, 3), dim_cap=4)
    chk.record(len(zs) == 7 and all(g.presentation() == "Z" for g in zs), "n=0")
    ts = cat.tate_coefficients(1, (-3, 3), dim_cap=4)
    chk.record(len(ts) == 7 and all(g.presentation() == "0" for g in ts), "n=1")
    try:
        cat.tate_coefficients(0, (-3, 3), objects={-6: 2, 0: 1}, k0=-3)
        chk.record(False, "restricted-product violation accepted")
    except cat.TateError:
        chk.record(True)
    return chk


def suite_categories(seed: int, count: int = 200) -> SuiteReport:
    rng = suite_rng(seed, "categories")
    checks = naturality_checks(rng, count, max(1, count // 2))
    checks += quillen_checks(rng, count)
    checks.append(pi0_checks())
    checks.append(tate_checks())
    return SuiteReport("categories", seed, checks)


# ------------------------------------------------------------------ fredholm


def _base_operator(rng: np.random.Generator, mod: fr.NumericModule) -> np.ndarray:
    """Admissible F0 with a kernel and a spectral gap."""
    X = fr.random_admissible(rng, mod)
    ev, V = np.linalg.eigh(X)
    a = np.sort(np.abs(ev))
    n = len(a)
    lo, hi = n // 3, max(n // 3 + 1, 2 * n // 3)
    j = lo + int(np.argmax(np.diff(a)[lo:hi]))
    thr = (a[j] + a[j + 1]) / 2
    f = np.where(np.abs(ev) < thr, 0.0, np.sign(ev) * (0.5 + np.abs(ev)))
    return (V * f) @ V.T


_FRED_DEGREES = (0, 1, -1, 2, -2)


def continuity_checks(rng: np.random.Generator, pairs: int = 500, paths: int = 50) -> list[Check]:
    cont = Check("||p_F - p_F1|| <= eps whenever ||F - F1|| < c eps")
    adv = Check("adversarial pairs near the window edges")
    rank = Check("rank of p_F is constant along paths")
    mods = {n: fr.standard_module(n, 20) for n in _FRED_DEGREES}
    i = 0
    while cont.total < pairs:
        mod = mods[_FRED_DEGREES[i % len(_FRED_DEGREES)]]
        i += 1
        F0 = _base_operator(rng, mod)
        w = fr.SpectralWindow(F0, mod)
        c = w.c
        E = fr.random_admissible(rng, mod)
        F = F0 + E * (rng.uniform(0, 0.9) * c / fr.opnorm(E))
        eps = float(rng.uniform(0.02, 0.98))
        D = fr.random_admissible(rng, mod)
        F1 = F + D * (rng.uniform(0, 0.999) * c * eps / fr.opnorm(D))
        if not (w.contains(F1) and fr.opnorm(F - F1) < c * eps):
            continue
        cont.record(fr.projection_continuity_check(w, F1, F, eps), f"pair {cont.total}")
    for j in range(pairs // 10):
        mod = mods[_FRED_DEGREES[j % len(_FRED_DEGREES)]]
        F0 = _base_operator(rng, mod)
        w = fr.SpectralWindow(F0, mod)
        c = w.c
        ev, V = np.linalg.eigh(F0)
        # push kernel eigenvalues towards +-c and the gap eigenvalues towards +-3c
        eta = 10.0 ** rng.uniform(-6, -2)
        shift = np.zeros_like(ev)
        small = np.abs(ev) < 1e-9
        big = np.abs(np.abs(ev) - 4 * c) < 1e-9
        shift[big] = -np.sign(ev[big]) * c * (1 - eta)
        Fa = F0 + (V * shift) @ V.T
        # kernel vectors: an odd admissible perturbation supported on the kernel
        P0 = V[:, small] @ V[:, small].T
        K = P0 @ fr.random_admissible(rng, mod) @ P0
        if fr.opnorm(K) > 0:
            Fa = Fa + K * (c * (1 - eta) / fr.opnorm(K))
        eps = float(rng.uniform(0.05, 0.95))
        D = fr.random_admissible(rng, mod)
        F1 = Fa + D * (eta * 0.5 * c * eps / fr.opnorm(D))
        if not (w.contains(Fa) and w.contains(F1)):
            continue
        try:
            adv.record(fr.projection_continuity_check(w, F1, Fa, eps), f"adversarial {j}")
        except fr.FredholmError:
            continue
    for j in range(paths):
        mod = mods[_FRED_DEGREES[j % len(_FRED_DEGREES)]]
        F0 = _base_operator(rng, mod)
        w = fr.SpectralWindow(F0, mod)
        A = fr.random_admissible(rng, mod)
        B = fr.random_admissible(rng, mod)
        A *= 0.95 * w.c / fr.opnorm(A)
        B *= 0.95 * w.c / fr.opnorm(B)
        ts = np.linspace(0, 1, 25)
        path = [F0 + (1 - t) * A + t * B for t in ts]
        rank.record(fr.rank_constant_along_path(w, path), f"path {j}")
    return [cont, adv, rank]


def retract_checks(rng: np.random.Generator, count: int = 50) -> Check:
    chk = Check("retract matches the subspace-sum oracle and is idempotent")
    for j in range(count):
        n = _FRED_DEGREES[j % len(_FRED_DEGREES)]
        mod = fr.standard_module(n, 20)
        F0 = _base_operator(rng, mod)
        w = fr.SpectralWindow(F0, mod)
        E = fr.random_admissible(rng, mod)
        F = F0 + E * (0.5 * w.c / fr.opnorm(E))
        ev, V = np.linalg.eigh(F)
        # an F-invariant graded submodule: a union of +-lambda eigenspace pairs
        mags = np.unique(np.round(np.abs(ev), 6))
        keep = mags[rng.random(len(mags)) < 0.4]
        sel = np.isin(np.round(np.abs(ev), 6), keep)
        p = V[:, sel] @ V[:, sel].T
        r = fr.retract(p, F, w)
        oracle = fr.subspace_sum(p, fr.spectral_projection(w, F))
        ok = fr.opnorm(r - oracle) < 1e-8 and fr.opnorm(fr.retract(r, F, w) - r) < 1e-8
        chk.record(ok, f"sample {j}")
    return chk


def membership_checks(rng: np.random.Generator, count: int = 20) -> list[Check]:
    mem = Check("Fred_n membership examples")
    btx = Check("block map is Clifford-linear and preserves membership")
    mem.record(fr.fredn_membership(fr.random_admissible(rng, fr.standard_module(0, 8)), 0))
    e = np.array([[0.0, 1.0], [1.0, 0.0]])
    m1 = fr.NumericModule(-1, [e], np.diag([1.0, -1.0]))
    mem.record(not fr.fredn_membership(2 * e, 1, m1))
    m1x2 = fr.NumericModule(-1, [np.kron(np.eye(2), e)], np.kron(np.eye(2), m1.grading))
    mem.record(fr.fredn_membership(np.kron(np.diag([1.0, -1.0]), 2 * e), 1, m1x2))
    m5 = fr.standard_module(5, 16)
    F = fr.random_admissible(rng, m5)
    both = fr.NumericModule(m5.degree, [np.kron(np.eye(2), g) for g in m5.generators], np.kron(np.eye(2), m5.grading))
    mem.record(fr.fredn_membership(np.kron(np.diag([1.0, -1.0]), F), 5, both))
    for j in range(count):
        n = (1, 2, 3, 4, 5)[j % 5]
        dim = {1: 8, 2: 8, 3: 8, 4: 16, 5: 16}[n]
        mod = fr.standard_module(n, dim)
        F = fr.random_admissible(rng, mod)
        if j % 2:
            # F + (-F) on two copies has mixed signs
            twice = fr.NumericModule(mod.degree, [np.kron(np.eye(2), g) for g in mod.generators], np.kron(np.eye(2), mod.grading))
            mod, F = twice, np.kron(np.diag([1.0, -1.0]), F)
        Fp, out = fr.btx_map(F, n, mod)
        ok = not fr.admissibility_violations(Fp, out)
        ok = ok and all(np.allclose(g @ g, -np.eye(out.dim)) for g in out.generators)
        ok = ok and fr.fredn_membership(F, n, mod) == fr.fredn_membership(Fp, -out.degree, out)
        btx.record(ok, f"n={n} sample {j}")
    return [mem, btx]


def suite_fredholm(seed: int, count: int = 500) -> SuiteReport:
    rng = np.random.default_rng(suite_rng(seed, "fredholm").getrandbits(64))
    checks = continuity_checks(rng, count, max(10, count // 10))
    checks.append(retract_checks(rng, max(10, count // 10)))
    checks += membership_checks(rng)
    return SuiteReport("fredholm", seed, checks)


# ------------------------------------------------------------------ KO table


def ko_table_checks(box: int = 4) -> list[Check]:
    table = Check("abs_quotient(0..7) is the KO coefficient sequence")
    twoways = Check("Smith normal form agrees with the brute-force monoid quotient")
    for n in range(8):
        g = abs_quotient(n)
        table.record(g.presentation() == KO_EXPECTED[n], f"n={n}: {g.presentation()}")
        bf = brute_force_quotient(n, "R", box)
        twoways.record(bf["rank"] == g.rank and sorted(bf["torsion"]) == sorted(g.torsion), f"n={n}")
    return [table, twoways]


def periodicity_checks() -> Check:
    chk = Check("Bott periodicity of the quotient groups")
    for n in range(-12, 5):
        chk.record(abs_quotient(n).is_isomorphic(abs_quotient(n + 8)), f"real n={n}")
    for n in range(-6, 7):
        chk.record(abs_quotient_complex(n).is_isomorphic(abs_quotient_complex(n + 2)), f"complex n={n}")
    return chk


_SUITES = {
    "grassmann": suite_grassmann,
    "superspace": suite_superspace,
    "bordism": suite_bordism,
    "fieldtheory": suite_fieldtheory,
    "categories": suite_categories,
    "fredholm": suite_fredholm,
}


def run_suite(name: str, seed: int, count: int | None = None) -> SuiteReport:
    if name not in _SUITES:
        raise KeyError(name)
    fn = _SUITES[name]
    return fn(seed) if count is None else fn(seed, count)
