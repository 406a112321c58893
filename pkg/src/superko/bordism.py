"""Normal-form engines for decorated super Euclidean and annular bordisms.

SEB endomorphisms of the rank-one interval object are kept in the normal form
``eps**t . (1, c) . I_{z, theta}`` (interval optional); SAB endomorphisms of
the super circle in the form ``eps**t . tau_r . (1, c) . A_{x, y, theta}``
where a rotation next to an annulus is absorbed into ``x``.

The Clifford decoration ``c`` lives in C(Z)^{(x) -n}.  Its generators square
to ``sgn(n)``: for n < 0 this is the graded tensor power of Cl_1, and for
n > 0 the Koszul-opposite algebra, which makes the whole thing Cl_{-n}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from sympy import QQ

from ._exact import QQ_I, scalar
from .grassmann import CircleValue, GrassmannAlgebra, GrassmannElement, GrassmannHom

__all__ = [
    "BordismError",
    "CliffordWord",
    "Interval",
    "Annulus",
    "DecoratedEndo",
    "SabEndo",
    "FockVacuumModule",
    "FockElement",
    "seb_compose",
    "sab_compose",
    "fock_act",
    "interval_compose",
    "annulus_compose",
    "rewrite_word",
    "word_to_endo",
]


class BordismError(ValueError):
    pass


def _popcount(m: int) -> int:
    return bin(m).count("1")


class CliffordWord:
    """Element of the algebra generated by |n| odd elements squaring to sgn(n)."""

    __slots__ = ("degree", "domain", "terms")

    def __init__(self, degree: int, terms: dict | None = None, domain=QQ):
        self.degree = int(degree)
        self.domain = domain
        full = (1 << abs(self.degree)) - 1
        clean = {}
        for m, c in (terms or {}).items():
            if m & ~full:
                raise BordismError("word uses generators beyond |n|")
            c = scalar(domain, c)
            if c:
                clean[m] = c
        self.terms = clean

    @property
    def square(self) -> int:
        return 1 if self.degree > 0 else -1

    @classmethod
    def one(cls, degree: int, domain=QQ) -> "CliffordWord":
        return cls(degree, {0: 1}, domain)

    @classmethod
    def generator(cls, degree: int, i: int, domain=QQ) -> "CliffordWord":
        if not 0 <= i < abs(degree):
            raise BordismError("generator index out of range")
        return cls(degree, {1 << i: 1}, domain)

    @classmethod
    def monomial(cls, degree: int, subset: Sequence[int], coeff=1, domain=QQ) -> "CliffordWord":
        out = cls(degree, {0: coeff}, domain)
        for i in subset:
            out = out * cls.generator(degree, i, domain)
        return out

    def _check(self, other: "CliffordWord"):
        if self.degree != other.degree or self.domain != other.domain:
            raise BordismError("Clifford words of different degree")

    def __add__(self, other: "CliffordWord") -> "CliffordWord":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, self.domain.zero) + c
        return CliffordWord(self.degree, out, self.domain)

    def __neg__(self):
        return CliffordWord(self.degree, {m: -c for m, c in self.terms.items()}, self.domain)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, CliffordWord):
            c = scalar(self.domain, other)
            return CliffordWord(self.degree, {m: v * c for m, v in self.terms.items()}, self.domain)
        self._check(other)
        s = self.square
        out: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                v = ca * cb
                sign = _overlap_sign(ma, mb)
                if s < 0 and _popcount(ma & mb) & 1:
                    sign = -sign
                if sign < 0:
                    v = -v
                m = ma ^ mb
                out[m] = out.get(m, self.domain.zero) + v
        return CliffordWord(self.degree, out, self.domain)

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        return (
            isinstance(other, CliffordWord)
            and self.degree == other.degree
            and self.domain == other.domain
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.degree, frozenset((m, str(c)) for m, c in self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            gens = "".join(f"l{i}" for i in range(abs(self.degree)) if m >> i & 1)
            parts.append(f"({self.terms[m]}){gens or '1'}")
        return " + ".join(parts)

    def grading(self) -> "CliffordWord":
        """eps^*: multiply e_I by (-1)^|I|."""
        return CliffordWord(self.degree, {m: (-c if _popcount(m) & 1 else c) for m, c in self.terms.items()}, self.domain)

    def is_homogeneous(self) -> bool:
        return len({_popcount(m) & 1 for m in self.terms}) <= 1

    def parity(self):
        ps = {_popcount(m) & 1 for m in self.terms}
        return ps.pop() if len(ps) == 1 else (0 if not ps else None)

    def to_json(self) -> dict:
        from ._exact import scalar_to_str

        terms = []
        for m in sorted(self.terms):
            re, im = scalar_to_str(self.domain, self.terms[m])
            terms.append({"subset": [i for i in range(abs(self.degree)) if m >> i & 1], "re": re, "im": im})
        return {"n": self.degree, "terms": terms}


def _overlap_sign(a: int, b: int) -> int:
    """Reordering sign of e_a e_b before contracting repeated generators."""
    swaps = 0
    j = 0
    bb = b
    while bb:
        if bb & 1:
            swaps += _popcount(a >> (j + 1))
        bb >>= 1
        j += 1
    return -1 if swaps & 1 else 1


# ----------------------------------------------------------------- intervals


@dataclass(frozen=True, eq=False)
class Interval:
    """I_{z, theta}: z even with positive body, theta odd."""

    z: GrassmannElement
    theta: GrassmannElement

    def __post_init__(self):
        if self.z.algebra != self.theta.algebra:
            raise BordismError("interval parameters live in different algebras")
        if not self.z.is_even() or not self.theta.is_odd():
            raise BordismError("interval needs z even and theta odd")
        b = self.z.body()
        if self.z.algebra.domain == QQ_I:
            if b.y or b.x <= 0:
                raise BordismError("interval length must have positive real body")
        elif self.z.algebra.domain == QQ and b <= 0:
            raise BordismError("interval length must have positive body")

    @property
    def algebra(self) -> GrassmannAlgebra:
        return self.z.algebra

    def __eq__(self, other):
        return isinstance(other, Interval) and self.z == other.z and self.theta == other.theta

    def __hash__(self):
        return hash((self.z, self.theta))

    def flipped(self) -> "Interval":
        return Interval(self.z, -self.theta)

    def base_change(self, f: GrassmannHom) -> "Interval":
        return Interval(f(self.z), f(self.theta))


def interval_compose(i1: Interval, i2: Interval) -> Interval:
    """I_{z1,t1} o I_{z2,t2} = I_{z1+z2+t1 t2, t1+t2}."""
    return Interval(i1.z + i2.z + i1.theta * i2.theta, i1.theta + i2.theta)


@dataclass(frozen=True, eq=False)
class Annulus:
    """A_{x, y, theta}: x on the circle, y even with positive body, theta odd."""

    x: CircleValue
    y: GrassmannElement
    theta: GrassmannElement

    def __post_init__(self):
        if not (self.x.algebra == self.y.algebra == self.theta.algebra):
            raise BordismError("annulus parameters live in different algebras")
        if not self.y.is_even() or not self.theta.is_odd():
            raise BordismError("annulus needs y even and theta odd")
        b = self.y.body()
        if self.y.algebra.domain == QQ_I:
            if b.y or b.x <= 0:
                raise BordismError("annulus modulus must have positive real body")
        elif b <= 0:
            raise BordismError("annulus modulus must have positive body")

    @property
    def algebra(self) -> GrassmannAlgebra:
        return self.y.algebra

    def __eq__(self, other):
        return isinstance(other, Annulus) and self.x == other.x and self.y == other.y and self.theta == other.theta

    def __hash__(self):
        return hash((self.x, self.y, self.theta))

    def rotated(self, r: CircleValue) -> "Annulus":
        """tau_r composed with the annulus (either side): x -> x - r."""
        return Annulus(self.x - r, self.y, self.theta)

    def flipped(self) -> "Annulus":
        return Annulus(self.x, self.y, -self.theta)

    def base_change(self, f: GrassmannHom) -> "Annulus":
        return Annulus(CircleValue(self.x.body, f(self.x.soul)), f(self.y), f(self.theta))


def annulus_compose(a2: Annulus, a1: Annulus) -> Annulus:
    """A2 o A1 per the annulus gluing law."""
    alg = a1.algebra
    if alg.domain != QQ_I:
        raise BordismError("annulus composition needs a complex algebra")
    tt = a1.theta * a2.theta
    half = QQ_I(QQ(1, 2), 0)
    ihalf = QQ_I(0, QQ(1, 2))
    return Annulus(a1.x + a2.x + (-(tt * half)), a1.y + a2.y - tt * ihalf, a1.theta + a2.theta)


# --------------------------------------------------------- decorated endos


@dataclass(frozen=True, eq=False)
class DecoratedEndo:
    """eps**twist . (1, clifford) . interval, the interval being optional."""

    twist: bool
    clifford: CliffordWord
    interval: Interval | None = None

    @property
    def degree(self) -> int:
        return self.clifford.degree

    @classmethod
    def identity(cls, degree: int, domain=QQ) -> "DecoratedEndo":
        return cls(False, CliffordWord.one(degree, domain))

    @classmethod
    def eps(cls, degree: int, domain=QQ) -> "DecoratedEndo":
        return cls(True, CliffordWord.one(degree, domain))

    @classmethod
    def cl(cls, c: CliffordWord) -> "DecoratedEndo":
        return cls(False, c)

    @classmethod
    def bordism(cls, z, theta, degree: int = 0) -> "DecoratedEndo":
        dom = z.algebra.domain
        return cls(False, CliffordWord.one(degree, dom), Interval(z, theta))

    def __eq__(self, other):
        return (
            isinstance(other, DecoratedEndo)
            and self.twist == other.twist
            and self.clifford == other.clifford
            and self.interval == other.interval
        )

    def __hash__(self):
        return hash((self.twist, self.clifford, self.interval))

    def __repr__(self):
        parts = []
        if self.twist:
            parts.append("(eps,1)")
        parts.append(f"(1,{self.clifford!r})")
        if self.interval is not None:
            parts.append(f"I[{self.interval.z!r}, {self.interval.theta!r}]")
        return " o ".join(parts)

    def base_change(self, f: GrassmannHom) -> "DecoratedEndo":
        return DecoratedEndo(self.twist, self.clifford, None if self.interval is None else self.interval.base_change(f))


def seb_compose(a: DecoratedEndo, b: DecoratedEndo) -> DecoratedEndo:
    """a o b in normal form."""
    if a.degree != b.degree:
        raise BordismError("decorated endomorphisms of different degree")
    ca = a.clifford.grading() if b.twist else a.clifford
    ia = a.interval
    if ia is not None and b.twist:
        ia = ia.flipped()
    if ia is None:
        interval = b.interval
    elif b.interval is None:
        interval = ia
    else:
        interval = interval_compose(ia, b.interval)
    return DecoratedEndo(a.twist != b.twist, ca * b.clifford, interval)


@dataclass(frozen=True, eq=False)
class SabEndo:
    """eps**twist . tau_rotation . (1, clifford) . annulus (rotation absorbed if annulus)."""

    twist: bool
    clifford: CliffordWord
    annulus: Annulus | None = None
    rotation: CircleValue | None = None

    def __post_init__(self):
        if self.annulus is not None and self.rotation is not None:
            object.__setattr__(self, "annulus", self.annulus.rotated(self.rotation))
            object.__setattr__(self, "rotation", None)
        if self.rotation is not None and not self.rotation.body and not self.rotation.soul:
            object.__setattr__(self, "rotation", None)

    @property
    def degree(self) -> int:
        return self.clifford.degree

    @classmethod
    def identity(cls, degree: int) -> "SabEndo":
        return cls(False, CliffordWord.one(degree, QQ_I))

    @classmethod
    def eps(cls, degree: int) -> "SabEndo":
        return cls(True, CliffordWord.one(degree, QQ_I))

    @classmethod
    def rot(cls, r: CircleValue, degree: int = 0) -> "SabEndo":
        return cls(False, CliffordWord.one(degree, QQ_I), None, r)

    @classmethod
    def annular(cls, x, y, theta, degree: int = 0) -> "SabEndo":
        return cls(False, CliffordWord.one(degree, QQ_I), Annulus(x, y, theta))

    def __eq__(self, other):
        return (
            isinstance(other, SabEndo)
            and self.twist == other.twist
            and self.clifford == other.clifford
            and self.annulus == other.annulus
            and self.rotation == other.rotation
        )

    def __hash__(self):
        return hash((self.twist, self.clifford, self.annulus))

    def base_change(self, f: GrassmannHom) -> "SabEndo":
        rot = None if self.rotation is None else CircleValue(self.rotation.body, f(self.rotation.soul))
        ann = None if self.annulus is None else self.annulus.base_change(f)
        return SabEndo(self.twist, self.clifford, ann, rot)


def sab_compose(a: SabEndo, b: SabEndo) -> SabEndo:
    if a.degree != b.degree:
        raise BordismError("decorated endomorphisms of different degree")
    ca = a.clifford.grading() if b.twist else a.clifford
    aa = a.annulus
    if aa is not None and b.twist:
        aa = aa.flipped()
    rot = None
    for r in (a.rotation, b.rotation):
        if r is not None:
            rot = r if rot is None else rot + r
    if aa is None:
        ann = b.annulus
    elif b.annulus is None:
        ann = aa
    else:
        ann = annulus_compose(aa, b.annulus)
    return SabEndo(a.twist != b.twist, ca * b.clifford, ann, rot)


# ------------------------------------------------------------ Fock module


@dataclass(frozen=True, eq=False)
class FockElement:
    """w . Omega for a Clifford word w."""

    word: CliffordWord

    def __eq__(self, other):
        return isinstance(other, FockElement) and self.word == other.word

    def __hash__(self):
        return hash(self.word)

    def __add__(self, other: "FockElement") -> "FockElement":
        return FockElement(self.word + other.word)


class FockVacuumModule:
    """The rank-one vacuum bimodule: Cl_{-n} acting on both sides of Omega.

    Omega commutes with every generator, so the bimodule is the regular one
    and gluing multiplies words.
    """

    def __init__(self, degree: int, domain=QQ):
        self.degree = degree
        self.domain = domain

    @property
    def vacuum(self) -> FockElement:
        return FockElement(CliffordWord.one(self.degree, self.domain))

    def element(self, word: CliffordWord) -> FockElement:
        return FockElement(word)

    def left(self, c: CliffordWord, psi: FockElement) -> FockElement:
        return FockElement(c * psi.word)

    def right(self, psi: FockElement, c: CliffordWord) -> FockElement:
        return FockElement(psi.word * c)

    def grading(self, psi: FockElement) -> FockElement:
        return FockElement(psi.word.grading())

    def glue(self, psi1: FockElement, psi2: FockElement) -> FockElement:
        """Omega (x) Omega -> Omega, extended as a bimodule map."""
        return FockElement(psi1.word * psi2.word)

    def basis(self) -> list[FockElement]:
        k = abs(self.degree)
        return [FockElement(CliffordWord(self.degree, {m: 1}, self.domain)) for m in range(1 << k)]

    def matrix_model(self):
        """2x2 matrices (left, right, eps) on the basis (Omega, lambda Omega) for |n| = 1."""
        if abs(self.degree) != 1:
            raise BordismError("the matrix model is for |n| = 1")
        lam = CliffordWord.generator(self.degree, 0, self.domain)
        basis = self.basis()

        def coords(psi):
            return [psi.word.terms.get(0, self.domain.zero), psi.word.terms.get(1, self.domain.zero)]

        left = [[None, None], [None, None]]
        right = [[None, None], [None, None]]
        eps = [[None, None], [None, None]]
        for j, b in enumerate(basis):
            for i, v in enumerate(coords(self.left(lam, b))):
                left[i][j] = v
            for i, v in enumerate(coords(self.right(b, lam))):
                right[i][j] = v
            for i, v in enumerate(coords(self.grading(b))):
                eps[i][j] = v
        return left, right, eps


def fock_act(c_left: CliffordWord, psi: FockElement, c_right: CliffordWord) -> FockElement:
    if c_left.degree != psi.word.degree or c_right.degree != psi.word.degree:
        raise BordismError("degree mismatch in the Fock action")
    return FockElement(c_left * psi.word * c_right)


# ---------------------------------------------------------- word rewriting


def _merge(x, y):
    kx, ky = x[0], y[0]
    if kx == "eps" and ky == "eps":
        return []
    if kx == "cl" and ky == "cl":
        return [("cl", x[1] * y[1])]
    if kx == "cl" and ky == "eps":
        return [y, ("cl", x[1].grading())]
    if kx == "I" and ky == "cl":
        return [y, x]
    if kx == "I" and ky == "eps":
        return [y, ("I", x[1].flipped())]
    if kx == "I" and ky == "I":
        return [("I", interval_compose(x[1], y[1]))]
    return None


def rewrite_word(word: Sequence[tuple], rng: random.Random | None = None) -> list[tuple]:
    """Rewrite a free SEB word to normal form, choosing redexes at random.

    Letters are ("eps",), ("cl", CliffordWord) and ("I", Interval); the word
    [a, b] means a o b.
    """
    word = list(word)
    rng = rng or random.Random(0)
    while True:
        redexes = [i for i in range(len(word) - 1) if _merge(word[i], word[i + 1]) is not None]
        if not redexes:
            return word
        i = rng.choice(redexes)
        word[i : i + 2] = _merge(word[i], word[i + 1])


def word_to_endo(word: Sequence[tuple], degree: int, domain=QQ) -> DecoratedEndo:
    """Fold a word by seb_compose (letters to elementary endos)."""
    out = DecoratedEndo.identity(degree, domain)
    for letter in word:
        if letter[0] == "eps":
            e = DecoratedEndo.eps(degree, domain)
        elif letter[0] == "cl":
            e = DecoratedEndo.cl(letter[1])
        else:
            e = DecoratedEndo(False, CliffordWord.one(degree, domain), letter[1])
        out = seb_compose(out, e)
    return out
