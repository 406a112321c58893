"""Finite-dimensional representations of the super Euclidean semigroups.

An operator in the image of a field theory is kept in factored form

    eps**twist . rho(c) . B . N

where ``rho(c)`` is the Clifford action (exact), ``B`` is the body factor
(e^{-t Q^2} P_{H'} for intervals, q^K e^{-4 pi y G^2} for annuli; floats),
and ``N`` is the nilpotent correction, an exact element of Lambda (x) End(H).
The body and nilpotent factors are functions of the generators, so they
commute with the Clifford action and the two sectors can be compared
separately: exactly in the nilpotent sector, numerically in the body sector.

Clifford actions and the grading act on the matrix factor only.  With that
convention the generator Q commutes with every e_i, which is what the
Clifford-linearity of the bordism relations requires.

For annuli, sqrt(2 pi i) is a formal even unit ``s`` with s**2 = 2 pi i and
conjugate -i s.  Exact coefficients then live in Q(i)[pi].
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from sympy import QQ, Symbol
from sympy.polys.matrices import DomainMatrix

from ._exact import QQ_I, adjoint, conj, eye, scalar_to_complex, to_numpy, zeros
from .bordism import CliffordWord, DecoratedEndo, SabEndo
from .clifford import (
    GradedCliffordModule,
    direct_sum,
    extension_image,
    irreducible_graded_modules,
)
from .grassmann import CircleValue, GrassmannAlgebra, GrassmannElement, _sign, mask_to_subset

__all__ = [
    "FieldTheoryError",
    "PI_DOMAIN",
    "SuperOperator",
    "SeftGenerator",
    "AftGenerator",
    "RecoveredGenerator",
    "Evolution",
    "XYReport",
    "seft_evolution",
    "aft_evolution",
    "rotation_evolution",
    "clifford_action",
    "represent_seb",
    "represent_sab",
    "verify_xy_relations",
    "verify_aft_relations",
    "recover_generator",
    "extension_involution",
    "random_seft_generator",
    "random_aft_generator",
]


class FieldTheoryError(ValueError):
    pass


# Q(i)[pi] with conjugation and evaluation hooks
PI_DOMAIN = QQ_I[Symbol("pi")]
_PI = PI_DOMAIN.gens[0]


def _pi_conj(x):
    return PI_DOMAIN.ring.from_dict({m: QQ_I(c.x, -c.y) for m, c in x.items()})


def _pi_float(x) -> complex:
    return sum(complex(float(c.x), float(c.y)) * math.pi ** m[0] for m, c in x.items())


PI_DOMAIN._superko_conj = _pi_conj
PI_DOMAIN._superko_float = _pi_float

S_NUMERIC = cmath.sqrt(2j * math.pi)
BODY_TOL = 1e-10


def _popcount(m: int) -> int:
    return bin(m).count("1")


# ------------------------------------------------------------ matrix helpers


def _is_num(a) -> bool:
    return isinstance(a, np.ndarray)


def _sparse(a: DomainMatrix) -> DomainMatrix:
    return a.to_sparse()


def _split(a, grading: tuple[int, ...]):
    """(even part, odd part) of a matrix with respect to the grading."""
    if _is_num(a):
        g = np.array(grading)
        same = np.equal.outer(g, g)
        return np.where(same, a, 0), np.where(same, 0, a)
    even, odd = {}, {}
    for i, row in a.to_sparse().rep.items():
        for j, v in row.items():
            (even if grading[i] == grading[j] else odd).setdefault(i, {})[j] = v
    shape, dom = a.shape, a.domain
    return DomainMatrix(even, shape, dom), DomainMatrix(odd, shape, dom)


def _mat_zero(a) -> bool:
    if _is_num(a):
        return not np.any(a)
    return a.is_zero_matrix


def _scale(a, c):
    if _is_num(a):
        return a * c
    dom = a.domain
    return DomainMatrix({i: {j: v * c for j, v in row.items()} for i, row in a.to_sparse().rep.items()}, a.shape, dom)


def _conj_t(a):
    if _is_num(a):
        return a.conj().T
    dom = a.domain
    out: dict = {}
    for i, row in a.to_sparse().rep.items():
        for j, v in row.items():
            out.setdefault(j, {})[i] = conj(dom, v)
    return DomainMatrix(out, a.shape[::-1], dom)


def _convert(a: DomainMatrix, dom) -> DomainMatrix:
    if a.domain == dom:
        return a.to_sparse()
    return a.to_sparse().convert_to(dom)


def _num(a) -> np.ndarray:
    if _is_num(a):
        return a
    dom = a.domain
    out = np.zeros(a.shape, dtype=complex)
    for i, row in a.to_sparse().rep.items():
        for j, v in row.items():
            out[i, j] = scalar_to_complex(dom, v)
    return out


# ------------------------------------------------------------ super operators


class SuperOperator:
    """An element of Lambda (x) End(H), graded tensor product.

    Terms are keyed by (mask, s_power, matrix_parity); exact operators hold
    sparse ``DomainMatrix`` values, numeric ones complex numpy arrays (with
    the unit s already evaluated).
    """

    __slots__ = ("algebra", "grading", "terms", "numeric")

    def __init__(self, algebra: GrassmannAlgebra, grading: Sequence[int], terms: dict, numeric: bool = False):
        self.algebra = algebra
        self.grading = tuple(grading)
        self.numeric = numeric
        self.terms = {k: v for k, v in terms.items() if not _mat_zero(v)}

    @property
    def dim(self) -> int:
        return len(self.grading)

    @property
    def domain(self):
        return self.algebra.domain

    # constructors
    @classmethod
    def zero(cls, algebra, grading, numeric: bool = False) -> "SuperOperator":
        return cls(algebra, grading, {}, numeric)

    @classmethod
    def from_matrix(cls, algebra, grading, a, coeff: GrassmannElement | None = None, spow: int = 0) -> "SuperOperator":
        """coeff (x) a, with the matrix split into homogeneous parts."""
        numeric = _is_num(a)
        if not numeric:
            a = _convert(a, algebra.domain)
        coeff = coeff if coeff is not None else algebra.one()
        terms: dict = {}
        parts = _split(a, grading)
        for m, c in coeff.terms.items():
            cc = scalar_to_complex(algebra.domain, c) if numeric else c
            for par, part in enumerate(parts):
                if _mat_zero(part):
                    continue
                key = (m, 0 if numeric else spow, par)
                v = _scale(part, cc * (S_NUMERIC**spow if numeric else 1))
                terms[key] = v if key not in terms else terms[key] + v
        return cls(algebra, grading, terms, numeric)

    @classmethod
    def identity(cls, algebra, grading, numeric: bool = False) -> "SuperOperator":
        n = len(grading)
        a = np.eye(n, dtype=complex) if numeric else eye(n, algebra.domain).to_sparse()
        return cls.from_matrix(algebra, grading, a)

    def _like(self, terms) -> "SuperOperator":
        return SuperOperator(self.algebra, self.grading, terms, self.numeric)

    def _check(self, other: "SuperOperator"):
        if self.algebra != other.algebra or self.grading != other.grading or self.numeric != other.numeric:
            raise FieldTheoryError("super operators on different spaces or backends")

    # arithmetic
    def __add__(self, other: "SuperOperator") -> "SuperOperator":
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return self._like(out)

    def __neg__(self):
        return self._like({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, c) -> "SuperOperator":
        return self._like({k: _scale(v, c) for k, v in self.terms.items()})

    def __mul__(self, other: "SuperOperator") -> "SuperOperator":
        self._check(other)
        dom = self.domain
        out: dict = {}
        for (ma, sa, pa), a in self.terms.items():
            for (mb, sb, pb), b in other.terms.items():
                if ma & mb:
                    continue
                sign = _sign(ma, mb)
                if pa and _popcount(mb) & 1:
                    sign = -sign
                prod = a @ b if self.numeric else a * b
                sp = sa + sb
                if sp >= 2:
                    prod = _scale(prod, dom.convert_from(QQ_I(0, 2), QQ_I) * _PI)
                    sp -= 2
                if sign < 0:
                    prod = -prod
                key = (ma | mb, sp, pa ^ pb)
                out[key] = out[key] + prod if key in out else prod
        return self._like(out)

    def left_matrix(self, p) -> "SuperOperator":
        """Ungraded action of a pure operator on the matrix factor: p . N."""
        if not self.numeric and not _is_num(p):
            p = _convert(p, self.domain)
        out: dict = {}
        for (m, s, _), a in self.terms.items():
            prod = p @ a if self.numeric else p * a
            for par, part in enumerate(_split(prod, self.grading)):
                key = (m, s, par)
                out[key] = out[key] + part if key in out else part
        return self._like(out)

    def right_matrix(self, p) -> "SuperOperator":
        if not self.numeric and not _is_num(p):
            p = _convert(p, self.domain)
        out: dict = {}
        for (m, s, _), a in self.terms.items():
            prod = a @ p if self.numeric else a * p
            for par, part in enumerate(_split(prod, self.grading)):
                key = (m, s, par)
                out[key] = out[key] + part if key in out else part
        return self._like(out)

    def __eq__(self, other):
        if not isinstance(other, SuperOperator):
            return NotImplemented
        self._check(other)
        if self.numeric:
            return self.distance(other) < BODY_TOL
        return not (self - other).terms

    __hash__ = None

    def distance(self, other: "SuperOperator", relative: bool = False) -> float:
        """Largest entry of the difference over all terms (optionally relative to the larger size)."""
        a, b = self.to_numeric(), other.to_numeric()
        diff = (a - b).terms
        out = max((float(np.max(np.abs(v))) for v in diff.values()), default=0.0)
        if relative:
            size = max((float(np.max(np.abs(v))) for v in list(a.terms.values()) + list(b.terms.values())), default=0.0)
            out /= max(1.0, size)
        return out

    # structure
    def flipped(self) -> "SuperOperator":
        """Conjugation by eps: odd matrix parts change sign."""
        return self._like({k: (-v if k[2] else v) for k, v in self.terms.items()})

    def theta_flipped(self) -> "SuperOperator":
        """The Grassmann automorphism theta -> -theta on every generator."""
        return self._like({k: (-v if _popcount(k[0]) & 1 else v) for k, v in self.terms.items()})

    def matrix_parity_part(self, par: int) -> "SuperOperator":
        return self._like({k: v for k, v in self.terms.items() if k[2] == par})

    def body_part(self) -> "SuperOperator":
        return self._like({k: v for k, v in self.terms.items() if k[0] == 0})

    def is_nilpotent(self) -> bool:
        return all(k[0] for k in self.terms)

    def dagger(self) -> "SuperOperator":
        """Termwise adjoint: conjugate coefficients, transpose matrices, s -> -i s.

        Grassmann generators are real.  This is the graded anti-involution
        with [(a T)(b T')]^dag = -(b T')^dag (a T)^dag for odd a, b, T, T'.
        """
        out = {}
        minus_i = None if self.numeric else self.domain.convert_from(QQ_I(0, -1), QQ_I)
        for (m, s, p), a in self.terms.items():
            b = _conj_t(a)
            if s:
                b = _scale(b, minus_i)
            out[(m, s, p)] = b
        return self._like(out)

    def exp_nilpotent(self) -> "SuperOperator":
        """exp(N) for an even nilpotent N (every term has a nonempty mask)."""
        for (m, s, p) in self.terms:
            if not m:
                raise FieldTheoryError("exp_nilpotent needs zero body")
            if (_popcount(m) + p) & 1:
                raise FieldTheoryError("exp_nilpotent needs an even element")
        out = SuperOperator.identity(self.algebra, self.grading, self.numeric)
        term = out
        k = 0
        while True:
            k += 1
            term = term * self
            if not term.terms:
                return out
            term = term.scaled(1.0 / k if self.numeric else self.domain.convert_from(QQ(1, k), QQ))
            out = out + term

    def to_numeric(self) -> "SuperOperator":
        if self.numeric:
            return self
        out: dict = {}
        for (m, s, p), a in self.terms.items():
            v = _num(a) * (S_NUMERIC**s)
            key = (m, 0, p)
            out[key] = out[key] + v if key in out else v
        return SuperOperator(self.algebra, self.grading, out, True)

    def coefficient(self, mask: int):
        """Matrix coefficient of a Grassmann monomial (numeric)."""
        total = np.zeros((self.dim, self.dim), dtype=complex)
        for (m, s, p), a in self.to_numeric().terms.items():
            if m == mask:
                total = total + a
        return total


# ------------------------------------------------------------ generators


def _rel(a, b) -> float:
    """Max-entry distance relative to max(1, size of the operands)."""
    size = max(1.0, float(np.max(np.abs(a), initial=0.0)), float(np.max(np.abs(b), initial=0.0)))
    return float(np.max(np.abs(a - b), initial=0.0)) / size


def _np_close(a, b, tol=BODY_TOL) -> bool:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0)) <= tol


def _cl_matrix(module: GradedCliffordModule, word: CliffordWord) -> DomainMatrix:
    dom = module.domain
    gens = module.generators
    if abs(word.degree) != module.k or (word.degree and word.degree != -module.degree):
        raise FieldTheoryError("Clifford word degree does not match the module")
    total = zeros(module.dim, module.dim, dom)
    for m, c in word.terms.items():
        w = eye(module.dim, dom)
        for i in mask_to_subset(m):
            w = w * gens[i]
        total = total + w * dom.convert_from(c, word.domain) if word.domain != dom else total + w * c
    return total


def clifford_action(module: GradedCliffordModule, word: CliffordWord) -> DomainMatrix:
    """rho(c) = sum c_I e_I on a module of degree -n."""
    return _cl_matrix(module, word)


class SeftGenerator:
    """(H, P_{H'}, Q): ambient graded Cl_{-n}-module, domain projector, generator."""

    def __init__(self, ambient: GradedCliffordModule, projector: DomainMatrix, Q: DomainMatrix, check: bool = True):
        self.ambient = ambient
        self.projector = projector.to_dense()
        self.Q = Q.to_dense()
        if check:
            self.validate()

    @property
    def degree(self) -> int:
        """The field theory degree n (the ambient is a Cl_{-n}-module)."""
        return -self.ambient.degree

    @property
    def grading_vector(self) -> tuple[int, ...]:
        a = self.ambient
        return (1,) * a.even_dim + (-1,) * a.odd_dim

    def violations(self) -> list[str]:
        a = self.ambient
        eps = a.grading
        Q, P = self.Q, self.projector
        out = []
        if eps * Q != -(Q * eps):
            out.append("Q is not odd")
        if adjoint(Q) != Q:
            out.append("Q is not symmetric")
        for i, e in enumerate(a.generators):
            if e * Q != Q * e:
                out.append(f"Q does not commute with e_{i + 1}")
            if e * P != P * e:
                out.append(f"projector does not commute with e_{i + 1}")
        if P * P != P or adjoint(P) != P:
            out.append("domain projector is not an orthogonal projector")
        if P * eps != eps * P:
            out.append("domain projector is not even")
        if P * Q * P != Q:
            out.append("Q is not supported on H'")
        return out

    def validate(self):
        bad = self.violations()
        if bad:
            raise FieldTheoryError("; ".join(bad))

    def body(self, t: float) -> np.ndarray:
        """e^{-t Q^2} P_{H'} in floats."""
        q = to_numpy(self.Q).astype(complex)
        p = to_numpy(self.projector).astype(complex)
        w, v = np.linalg.eigh(q @ q)
        return (v * np.exp(-t * w)) @ v.conj().T @ p

    def to_json(self) -> dict:
        return {
            "kind": "seft",
            "ambient": self.ambient.to_json(),
            "projector": _mat_json(self.projector),
            "Q": _mat_json(self.Q),
        }

    @classmethod
    def from_json(cls, data) -> "SeftGenerator":
        amb = GradedCliffordModule.from_json(data["ambient"])
        return cls(amb, _mat_from_json(data["projector"], amb.domain), _mat_from_json(data["Q"], amb.domain))


def _mat_json(m: DomainMatrix):
    from ._exact import scalar_to_str

    dom = m.domain
    out = []
    for row in m.to_list():
        r = []
        for v in row:
            re, im = scalar_to_str(dom, v)
            r.append(re if dom == QQ else [re, im])
        out.append(r)
    return out


def _mat_from_json(rows, dom) -> DomainMatrix:
    from ._exact import scalar_from_str

    vals = [[scalar_from_str(dom, *(v if isinstance(v, list) else [v, "0"])) for v in r] for r in rows]
    return DomainMatrix(vals, (len(vals), len(vals[0]) if vals else 0), dom)


class AftGenerator:
    """(H, K-grading, L, G): annular generators on a complex graded Cl_{-n}-module.

    ``levels[j]`` is the integer k of basis vector j, i.e. the eigenvalue of
    L - G^2 there.
    """

    def __init__(self, ambient: GradedCliffordModule, levels: Sequence[int], L: DomainMatrix, G: DomainMatrix, check: bool = True):
        if ambient.field != "C":
            raise FieldTheoryError("annular generators need a complex module")
        self.ambient = ambient
        self.levels = tuple(int(k) for k in levels)
        self.L = L.to_dense()
        self.G = G.to_dense()
        if check:
            self.validate()

    @property
    def degree(self) -> int:
        return -self.ambient.degree

    @property
    def K(self) -> DomainMatrix:
        """L - G^2, diagonal with integer entries."""
        return self.L - self.G * self.G

    @property
    def grading_vector(self) -> tuple[int, ...]:
        a = self.ambient
        return (1,) * a.even_dim + (-1,) * a.odd_dim

    def violations(self) -> list[str]:
        a = self.ambient
        eps = a.grading
        L, G = self.L, self.G
        out = []
        if eps * L != L * eps:
            out.append("L is not even")
        if eps * G != -(G * eps):
            out.append("G is not odd")
        if adjoint(L) != L or adjoint(G) != G:
            out.append("L or G is not self-adjoint")
        if L * G != G * L:
            out.append("L and G do not commute")
        for i, e in enumerate(a.generators):
            if e * L != L * e or e * G != G * e:
                out.append(f"generators do not commute with e_{i + 1}")
        dom = a.domain
        diag = DomainMatrix([[dom(k) if i == j else dom.zero for j in range(a.dim)] for i, k in enumerate(self.levels)], (a.dim, a.dim), dom)
        if len(self.levels) != a.dim or self.K != diag:
            out.append("L - G^2 is not the level operator")
        return out

    def validate(self):
        bad = self.violations()
        if bad:
            raise FieldTheoryError("; ".join(bad))

    def body(self, x: float, y: float | None) -> np.ndarray:
        """q^K e^{-4 pi y G^2}; for y None the rotation e^{2 pi i x K}."""
        k = np.array(self.levels, dtype=float)
        rot = np.diag(np.exp(2j * math.pi * x * k))
        if y is None:
            return rot
        g = to_numpy(self.G)
        w, v = np.linalg.eigh(g @ g)
        damp = (v * np.exp(-4 * math.pi * y * w)) @ v.conj().T
        return rot @ np.diag(np.exp(-2 * math.pi * y * k)) @ damp

    def to_json(self) -> dict:
        return {
            "kind": "aft",
            "ambient": self.ambient.to_json(),
            "levels": list(self.levels),
            "L": _mat_json(self.L),
            "G": _mat_json(self.G),
        }

    @classmethod
    def from_json(cls, data) -> "AftGenerator":
        amb = GradedCliffordModule.from_json(data["ambient"])
        return cls(amb, data["levels"], _mat_from_json(data["L"], amb.domain), _mat_from_json(data["G"], amb.domain))


# ------------------------------------------------------------ evolutions


@dataclass
class Evolution:
    """eps**twist . rho(c) . B(body) . N with exact rho(c) and N."""

    generator: object
    twist: bool
    cl: DomainMatrix | None
    body: object
    nil: SuperOperator

    @property
    def grading(self):
        return self.nil.grading

    def body_matrix(self) -> np.ndarray:
        g = self.generator
        n = self.nil.dim
        if self.body is None:
            return np.eye(n, dtype=complex)
        if isinstance(g, AftGenerator):
            x, y = self.body
            return g.body(float(x), None if y is None else float(y))
        return g.body(float(self.body))

    def pure_matrix(self) -> np.ndarray:
        n = self.nil.dim
        p = np.eye(n, dtype=complex) if self.cl is None else _num(self.cl)
        if self.twist:
            p = np.diag(np.array(self.grading, dtype=complex)) @ p
        return p

    def operator(self) -> SuperOperator:
        """The full operator in floats."""
        num = self.nil.to_numeric()
        return num.left_matrix(self.pure_matrix() @ self.body_matrix())

    def compose(self, other: "Evolution") -> "Evolution":
        """self o other."""
        if self.generator is not other.generator:
            raise FieldTheoryError("evolutions of different generators")
        nil_a = self.nil
        cl_a = self.cl
        if other.twist:
            nil_a = nil_a.flipped()
            if cl_a is not None:
                cl_a = _eps_conj(cl_a, self.grading)
        if other.cl is not None:
            c = _convert(other.cl, nil_a.domain)
            for a in nil_a.terms.values():
                if c * a != a * c:
                    raise FieldTheoryError("Clifford action does not commute with the generator")
        if cl_a is None:
            cl = other.cl
        elif other.cl is None:
            cl = cl_a
        else:
            cl = cl_a * other.cl
        return Evolution(self.generator, self.twist != other.twist, cl, _body_add(self.body, other.body), nil_a * other.nil)

    def same_as(self, other: "Evolution") -> tuple[bool, float]:
        """(exact agreement of the factors, body-sector float distance)."""
        n = self.nil.dim
        dom = self.nil.domain
        ca = eye(n, dom) if self.cl is None else _convert(self.cl, dom).to_dense()
        cb = eye(n, dom) if other.cl is None else _convert(other.cl, dom).to_dense()
        exact = self.twist == other.twist and ca == cb and self.nil == other.nil
        return exact, _rel(self.body_matrix(), other.body_matrix())


def _eps_conj(c: DomainMatrix, grading) -> DomainMatrix:
    even, odd = _split(c, grading)
    return (even - odd).to_dense()


def _body_add(a, b):
    if a is None:
        return b
    if b is None:
        return a
    if isinstance(a, tuple):
        x = (Fraction(a[0]) + Fraction(b[0])) % 1
        if a[1] is None:
            y = b[1]
        elif b[1] is None:
            y = a[1]
        else:
            y = Fraction(a[1]) + Fraction(b[1])
        return (x, y)
    return Fraction(a) + Fraction(b)


def _real_body(z: GrassmannElement) -> Fraction:
    b = z.body()
    dom = z.algebra.domain
    if dom == QQ_I:
        if b.y:
            raise FieldTheoryError("body must be real")
        b = b.x
    return Fraction(int(b.numerator), int(b.denominator))


def seft_evolution(g, z: GrassmannElement, theta: GrassmannElement) -> Evolution:
    """E(I_{z, theta}) = e^{-z Q^2} + theta Q e^{-z Q^2} on H', zero on its complement."""
    if not z.is_even() or not theta.is_odd():
        raise FieldTheoryError("need z even and theta odd")
    t = _real_body(z)
    if t <= 0:
        raise FieldTheoryError("body(z) must be positive")
    if isinstance(g, RecoveredGenerator):
        return g.evolution(z, theta)
    alg = z.algebra
    grading = g.grading_vector
    Q = _convert(g.Q, alg.domain)
    Q2 = Q * Q
    soul = z.soul()
    n1 = SuperOperator.from_matrix(alg, grading, Q2, -soul).exp_nilpotent() if soul else SuperOperator.identity(alg, grading)
    n2 = SuperOperator.identity(alg, grading) + SuperOperator.from_matrix(alg, grading, Q, theta)
    return Evolution(g, False, None, t, n1 * n2)


def _pi_algebra(alg: GrassmannAlgebra) -> GrassmannAlgebra:
    return GrassmannAlgebra(alg.q, domain=PI_DOMAIN)


def _to_pi(x: GrassmannElement, alg: GrassmannAlgebra) -> GrassmannElement:
    return x.embed(alg)


def aft_evolution(g: AftGenerator, x: CircleValue, y: GrassmannElement, theta: GrassmannElement) -> Evolution:
    """E(A_{x,y,theta}) = q^L qbar^{G^2} (1 + s theta G), s^2 = 2 pi i."""
    if not y.is_even() or not theta.is_odd():
        raise FieldTheoryError("need y even and theta odd")
    if y.algebra.domain != QQ_I:
        raise FieldTheoryError("annular parameters need a complex Grassmann algebra")
    yb = _real_body(y)
    if yb <= 0:
        raise FieldTheoryError("body(y) must be positive")
    alg = _pi_algebra(y.algebra)
    grading = g.grading_vector
    K = _convert(g.K, PI_DOMAIN)
    G = _convert(g.G, PI_DOMAIN)
    G2 = G * G
    two_pi_i = PI_DOMAIN.convert_from(QQ_I(0, 2), QQ_I) * _PI
    i_unit = PI_DOMAIN.convert_from(QQ_I(0, 1), QQ_I)
    sx = _to_pi(x.soul, alg)
    sy = _to_pi(y.soul(), alg)
    one = SuperOperator.identity(alg, grading)
    a = SuperOperator.from_matrix(alg, grading, K, (sx + sy * i_unit) * two_pi_i)
    b = SuperOperator.from_matrix(alg, grading, G2, sy * (PI_DOMAIN(-4) * _PI))
    c = one + SuperOperator.from_matrix(alg, grading, G, _to_pi(theta, alg), spow=1)
    nil = _exp_or_one(a) * _exp_or_one(b) * c
    body_x = Fraction(int(x.body.numerator), int(x.body.denominator))
    return Evolution(g, False, None, (body_x, yb), nil)


def rotation_evolution(g: AftGenerator, r: CircleValue) -> Evolution:
    """E(tau_r) = e^{-2 pi i r K}."""
    alg = _pi_algebra(r.algebra)
    grading = g.grading_vector
    K = _convert(g.K, PI_DOMAIN)
    coeff = _to_pi(r.soul, alg) * (PI_DOMAIN.convert_from(QQ_I(0, -2), QQ_I) * _PI)
    nil = _exp_or_one(SuperOperator.from_matrix(alg, grading, K, coeff))
    rb = Fraction(int(r.body.numerator), int(r.body.denominator))
    return Evolution(g, False, None, ((-rb) % 1, None), nil)


def _exp_or_one(a: SuperOperator) -> SuperOperator:
    if not a.terms:
        return SuperOperator.identity(a.algebra, a.grading, a.numeric)
    return a.exp_nilpotent()


def _pure(g, alg, twist: bool, word: CliffordWord | None) -> Evolution:
    grading = g.grading_vector
    cl = None
    if word is not None and word != CliffordWord.one(word.degree, word.domain):
        cl = _convert(clifford_action(g.ambient, word), alg.domain).to_dense()
    return Evolution(g, twist, cl, None, SuperOperator.identity(alg, grading))


def represent_seb(g: SeftGenerator, endo: DecoratedEndo, algebra: GrassmannAlgebra) -> Evolution:
    """E of a decorated SEB endomorphism in normal form."""
    e = _pure(g, algebra, endo.twist, endo.clifford)
    if endo.interval is None:
        return e
    return e.compose(seft_evolution(g, endo.interval.z, endo.interval.theta))


def represent_sab(g: AftGenerator, endo: SabEndo, algebra: GrassmannAlgebra) -> Evolution:
    alg = _pi_algebra(algebra)
    e = _pure(g, alg, endo.twist, endo.clifford)
    if endo.rotation is not None:
        e = e.compose(rotation_evolution(g, endo.rotation))
    if endo.annulus is not None:
        a = endo.annulus
        e = e.compose(aft_evolution(g, a.x, a.y, a.theta))
    return e


# ------------------------------------------------------------ verification


@dataclass
class XYReport:
    passed: bool
    checked: int = 0
    max_body_error: float = 0.0
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checked": self.checked,
            "max_body_error": float(f"{self.max_body_error:.3e}"),
            "failures": [str(f) for f in self.failures],
        }


def verify_xy_relations(g: SeftGenerator, samples: Sequence[tuple]) -> XYReport:
    """Check the interval product law and Clifford/grading compatibility on samples.

    Each sample is (z, theta, z', theta').  The product E(z,theta) E(z',theta')
    is compared with E(z + z' + theta theta', theta + theta'), separately on
    the even-matrix and odd-matrix parts.
    """
    report = XYReport(True)
    amb = g.ambient
    for idx, (z1, t1, z2, t2) in enumerate(samples):
        report.checked += 1
        e1 = seft_evolution(g, z1, t1)
        e2 = seft_evolution(g, z2, t2)
        e12 = seft_evolution(g, z1 + z2 + t1 * t2, t1 + t2)
        prod = e1.compose(e2)
        for par, name in ((0, "even-matrix part"), (1, "odd-matrix part")):
            if prod.nil.matrix_parity_part(par) != e12.nil.matrix_parity_part(par):
                report.failures.append(f"sample {idx}: {name} fails in the nilpotent sector")
        # body sector
        err = _rel(prod.body_matrix(), e12.body_matrix())
        full = prod.operator().distance(e12.operator(), relative=True)
        report.max_body_error = max(report.max_body_error, err, full)
        if err >= BODY_TOL or full >= BODY_TOL:
            report.failures.append(f"sample {idx}: body-sector error {max(err, full):.3e}")
        # Clifford linearity and the grading symmetry
        for i, e in enumerate(amb.generators):
            ee = _convert(e, z1.algebra.domain)
            if e1.nil.left_matrix(ee) != e1.nil.right_matrix(ee):
                report.failures.append(f"sample {idx}: e_{i + 1} does not commute with E")
                break
            bd = e1.body_matrix()
            en = to_numpy(e).astype(complex)
            if not _np_close(en @ bd, bd @ en):
                report.failures.append(f"sample {idx}: e_{i + 1} does not commute with the body")
                break
        flipped = seft_evolution(g, z1, -t1)
        if e1.nil.flipped() != flipped.nil:
            report.failures.append(f"sample {idx}: eps E(z,theta) eps != E(z,-theta)")
    report.passed = not report.failures
    return report


def verify_aft_relations(g: AftGenerator, samples: Sequence[tuple]) -> XYReport:
    """Composition law and adjoint identity on samples (x1,y1,t1,x2,y2,t2)."""
    report = XYReport(True)
    i_unit = QQ_I(0, 1)
    half = QQ_I(QQ(1, 2), 0)
    ihalf = QQ_I(0, QQ(1, 2))
    for idx, (x1, y1, t1, x2, y2, t2) in enumerate(samples):
        report.checked += 1
        e1 = aft_evolution(g, x1, y1, t1)
        e2 = aft_evolution(g, x2, y2, t2)
        tt = t1 * t2
        x = x1 + x2 + (-(tt * half))
        e21 = aft_evolution(g, x, y1 + y2 - tt * ihalf, t1 + t2)
        prod = e2.compose(e1)
        ok, dist = prod.same_as(e21)
        full = prod.operator().distance(e21.operator(), relative=True)
        report.max_body_error = max(report.max_body_error, dist, full)
        if not ok:
            report.failures.append(f"sample {idx}: composition fails in the nilpotent sector")
        if dist >= BODY_TOL or full >= BODY_TOL:
            report.failures.append(f"sample {idx}: composition body error {max(dist, full):.3e}")
        # adjoint; parameters are conjugated, which is vacuous for real ones
        xc = CircleValue(x1.body, x1.soul.conjugate())
        adj = aft_evolution(g, -xc, y1.conjugate(), t1.conjugate() * (-i_unit))
        if e1.nil.dagger() != adj.nil:
            report.failures.append(f"sample {idx}: adjoint identity fails in the nilpotent sector")
        bd = e1.body_matrix().conj().T
        derr = _rel(bd, adj.body_matrix())
        fop = e1.operator().dagger().distance(adj.operator(), relative=True)
        report.max_body_error = max(report.max_body_error, derr, fop)
        if derr >= BODY_TOL or fop >= BODY_TOL:
            report.failures.append(f"sample {idx}: adjoint body error {max(derr, fop):.3e}")
        for i, e in enumerate(g.ambient.generators):
            ee = _convert(e, PI_DOMAIN)
            if e1.nil.left_matrix(ee) != e1.nil.right_matrix(ee):
                report.failures.append(f"sample {idx}: e_{i + 1} does not commute with E")
                break
    report.passed = not report.failures
    return report


# ------------------------------------------------------------ recovery


class RecoveredGenerator:
    """A numerically reconstructed (H', Q) pair."""

    def __init__(self, projector: np.ndarray, Q: np.ndarray, H: np.ndarray, eigenvalues: list[tuple[float, int]], grading=None):
        self.projector = projector
        self.Q = Q
        self.H = H
        self.eigenvalues = eigenvalues
        self.grading_vector = tuple(grading) if grading is not None else (1,) * Q.shape[0]

    def X(self, t: float) -> np.ndarray:
        w, v = np.linalg.eigh(self.H)
        return (v * np.exp(-t * w)) @ v.conj().T @ self.projector

    def Y(self, t: float) -> np.ndarray:
        return self.Q @ self.X(t)

    def body(self, t: float) -> np.ndarray:
        return self.X(t)

    def evolution(self, z: GrassmannElement, theta: GrassmannElement) -> Evolution:
        alg = z.algebra
        grading = self.grading_vector
        soul = z.soul()
        Q = self.Q.astype(complex)
        one = SuperOperator.identity(alg, grading, True)
        n1 = SuperOperator.from_matrix(alg, grading, Q @ Q, -soul).exp_nilpotent() if soul else one
        n2 = one + SuperOperator.from_matrix(alg, grading, Q, theta)
        return Evolution(self, False, None, _real_body(z), n1 * n2)


def recover_generator(samples: Sequence[tuple], grading=None, tol: float = 1e-6) -> RecoveredGenerator:
    """Reconstruct (H', Q) from samples (t, X(t), Y(t)), with Q = Y(t) e^{tH} and H = Q^2."""
    if not samples:
        raise FieldTheoryError("no samples")
    times = [float(t) for t, _, _ in samples]
    if len(set(times)) != len(times) or min(times) <= 0:
        raise FieldTheoryError("sample times must be distinct and positive")
    projs, hs, qs = [], [], []
    for t, X, Y in samples:
        X = np.asarray(X, dtype=complex)
        Y = np.asarray(Y, dtype=complex)
        if not _np_close(X, X.conj().T, 1e-9):
            raise FieldTheoryError("X(t) is not self-adjoint")
        w, v = np.linalg.eigh(X)
        if np.any(w < -1e-9):
            raise FieldTheoryError("X(t) is not positive semi-definite")
        keep = w > 1e-12
        vk = v[:, keep]
        P = vk @ vk.conj().T
        H = (vk * (-np.log(w[keep]) / t)) @ vk.conj().T
        Xinv = (vk / w[keep]) @ vk.conj().T
        projs.append(P)
        hs.append(H)
        qs.append(Y @ Xinv)
    scale = max(1.0, max(float(np.max(np.abs(h), initial=0.0)) for h in hs))
    for P, H, Q in zip(projs[1:], hs[1:], qs[1:]):
        if not _np_close(P, projs[0], 1e-8):
            raise FieldTheoryError("samples disagree on the support H'")
        if not _np_close(H, hs[0], tol * scale):
            raise FieldTheoryError("samples violate X(t)X(t') = X(t+t')")
        if not _np_close(Q, qs[0], tol * scale):
            raise FieldTheoryError("samples disagree on Q")
    P, H, Q = projs[0], hs[0], qs[0]
    if not _np_close(Q @ Q, H, tol * scale):
        raise FieldTheoryError("recovered Q does not square to H")
    if not _np_close(Q @ H, H @ Q, tol * scale):
        raise FieldTheoryError("Q and H have no common eigenbasis")
    # eigenvalues of H on H', merged within the tolerance
    wp, vp = np.linalg.eigh(P)
    basis = vp[:, wp > 0.5]
    w = np.sort(np.linalg.eigvalsh(basis.conj().T @ H @ basis)) if basis.shape[1] else np.array([])
    merged: list[list[float]] = []
    for val in w:
        if merged and abs(val - merged[-1][0]) <= tol * max(1.0, abs(val)):
            merged[-1][1] += 1
        else:
            merged.append([float(val), 1])
    return RecoveredGenerator(P, Q, H, [(v, int(m)) for v, m in merged], grading)


# ------------------------------------------------------------ random generators


def extension_involution(t: GradedCliffordModule) -> tuple[GradedCliffordModule, DomainMatrix]:
    """i(t) together with an odd, self-adjoint, Clifford-linear involution K on it.

    For degree(t) >= 1, K = eps e_last; otherwise K = [[0, -T^*], [-T, 0]]
    with T = eps_t on the doubled module.
    """
    m = extension_image(t)
    dom = m.domain
    if t.degree >= 1:
        K = m.grading * t.generators[-1]
    else:
        d = t.dim
        T = t.grading
        rows = [[dom.zero] * (2 * d) for _ in range(2 * d)]
        Th = adjoint(T).to_list()
        for i, r in enumerate(T.to_list()):
            for j, v in enumerate(r):
                rows[d + i][j] = -v
        for i, r in enumerate(Th):
            for j, v in enumerate(r):
                rows[i][d + j] = -v
        K = DomainMatrix(rows, (2 * d, 2 * d), dom)
    if K * K != m.identity() or adjoint(K) != K or m.grading * K != -(K * m.grading):
        raise FieldTheoryError("extension involution construction failed")
    if any(e * K != K * e for e in m.generators):
        raise FieldTheoryError("extension involution is not Clifford-linear")
    return m, K


def _rand_q(rng: random.Random) -> Fraction:
    v = Fraction(rng.randint(1, 6), rng.randint(1, 3))
    return v if rng.random() < 0.5 else -v


def _ambient_blocks(degree: int, field: str, rng: random.Random, max_dim: int):
    """Random plain irreducibles and extension blocks (with involutions) of total dim <= max_dim."""
    irr = irreducible_graded_modules(degree, field)
    ups = irreducible_graded_modules(degree + 1, field)
    blocks = []
    used = 0
    for _ in range(4):
        t = rng.choice(ups)
        m, K = extension_involution(t)
        if used + m.dim > max_dim:
            break
        blocks.append((m, K))
        used += m.dim
        if rng.random() < 0.5:
            break
    for _ in range(3):
        p = rng.choice(irr)
        if used + p.dim > max_dim or rng.random() < 0.3:
            break
        blocks.append((p, None))
        used += p.dim
    rng.shuffle(blocks)
    amb, incs = direct_sum([b for b, _ in blocks])
    return amb, [(inc, K) for inc, (_, K) in zip(incs, blocks)]


def random_seft_generator(rng: random.Random, n: int, max_dim: int = 16) -> SeftGenerator:
    """A random generator for a degree-n theory on a Cl_{-n}-module of dim <= max_dim."""
    amb, blocks = _ambient_blocks(-n, "R", rng, max_dim)
    dom = amb.domain
    Q = zeros(amb.dim, amb.dim, dom)
    P = zeros(amb.dim, amb.dim, dom)
    for inc, K in blocks:
        incT = adjoint(inc)
        if K is not None:
            lam = _rand_q(rng)
            Q = Q + inc * K * incT * QQ(lam.numerator, lam.denominator)
            P = P + inc * incT
        elif rng.random() < 0.5:
            P = P + inc * incT
    return SeftGenerator(amb, P, Q)


def random_aft_generator(rng: random.Random, n: int, max_dim: int = 16, k_range=(0, 3)) -> AftGenerator:
    amb, blocks = _ambient_blocks(-n, "C", rng, max_dim)
    dom = amb.domain
    G = zeros(amb.dim, amb.dim, dom)
    levels = [0] * amb.dim
    for inc, K in blocks:
        incT = adjoint(inc)
        k = rng.randint(*k_range)
        for row, r in enumerate(inc.to_list()):
            if any(r):
                levels[row] = k
        if K is not None:
            lam = _rand_q(rng)
            G = G + inc * K.convert_to(dom) * incT * QQ_I(QQ(lam.numerator, lam.denominator), 0)
    Kd = DomainMatrix([[dom(levels[i]) if i == j else dom.zero for j in range(amb.dim)] for i in range(amb.dim)], (amb.dim, amb.dim), dom)
    L = Kd + G * G
    return AftGenerator(amb, levels, L, G)
