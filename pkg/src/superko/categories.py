"""Finite models of the categories V_n, SEFT_n and AFT_n.

Everything lives inside one fixed ambient graded Clifford module H.  A
subspace is stored by its orthogonal projector, which makes equality exact
and canonical.  Eigenvalue labels are rationals (SEFT) or pairs
(rational, level) (AFT).

Objects of SEFT_n are :class:`SpectralData`; morphisms are
:class:`DeformationMorphism` triples (alpha, F, A) where F is an ambient
matrix with F^* F = P_D (an isometry on the source total space D, zero on its
complement) and A is the newly created positive part.  Objects of V_n are
graded submodules, morphisms are :class:`VnMorphism` pairs (F, A).
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from ._exact import QQ_I, adjoint, column_basis, eye, hstack, projector, scalar_from_str, scalar_to_str
from .clifford import (
    GradedCliffordModule,
    QuotientGroup,
    abs_quotient,
    abs_quotient_complex,
    decompose,
    direct_sum,
    irreducible_graded_modules,
)

__all__ = [
    "CategoryError",
    "StabilityError",
    "TateError",
    "Subspace",
    "SpectralData",
    "DeformationMorphism",
    "VnMorphism",
    "VirVectObject",
    "VirVectMorphism",
    "QVectMorphism",
    "Universe",
    "compose_deformation",
    "identity_deformation",
    "factor_deformation",
    "ind",
    "ind_level",
    "ind_circle",
    "embed",
    "embed_circle",
    "natural_N",
    "naturality_holds",
    "quillen_iso_v0",
    "quillen_iso_v1",
    "pi0",
    "Pi0Result",
    "tate_coefficients",
    "random_virvect_morphism",
    "random_qvect_morphism",
    "random_spectral_data",
    "random_deformation",
]


class CategoryError(ValueError):
    pass


class StabilityError(CategoryError):
    pass


class TateError(CategoryError):
    pass


def _s(m: DomainMatrix) -> DomainMatrix:
    return m.to_sparse()


def _adj(m: DomainMatrix) -> DomainMatrix:
    return _s(adjoint(m))


def _zero(n: int, dom) -> DomainMatrix:
    return DomainMatrix({}, (n, n), dom)


def _eye(n: int, dom) -> DomainMatrix:
    return _s(eye(n, dom))


def _grading(amb: GradedCliffordModule) -> DomainMatrix:
    return _s(amb.grading)


def _gens(amb: GradedCliffordModule) -> list[DomainMatrix]:
    return [_s(g) for g in amb.generators]


# ------------------------------------------------------------------ subspaces


class Subspace:
    """A subspace of the ambient, stored as its orthogonal projector."""

    __slots__ = ("projector",)

    def __init__(self, proj: DomainMatrix):
        self.projector = _s(proj)

    @classmethod
    def zero(cls, n: int, dom) -> "Subspace":
        return cls(_zero(n, dom))

    @classmethod
    def span(cls, basis: DomainMatrix) -> "Subspace":
        return cls(projector(basis.to_dense()))

    @property
    def size(self) -> int:
        return self.projector.shape[0]

    @property
    def domain(self):
        return self.projector.domain

    @property
    def dim(self) -> int:
        t = self.projector.trace()
        if self.domain == QQ_I:
            t = t.x
        return int(t)

    def __bool__(self):
        return not self.projector.is_zero_matrix

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.projector == other.projector

    __hash__ = None

    def __repr__(self):
        return f"Subspace(dim={self.dim})"

    def orthogonal_sum(self, other: "Subspace") -> "Subspace":
        if not (self.projector * other.projector).is_zero_matrix:
            raise CategoryError("summands are not orthogonal")
        return Subspace(self.projector + other.projector)

    def __add__(self, other: "Subspace") -> "Subspace":
        if (self.projector * other.projector).is_zero_matrix:
            return Subspace(self.projector + other.projector)
        b = hstack([column_basis(self.projector.to_dense()), column_basis(other.projector.to_dense())], self.size, self.domain)
        return Subspace.span(b)

    def is_orthogonal(self, other: "Subspace") -> bool:
        return (self.projector * other.projector).is_zero_matrix

    def contains(self, other: "Subspace") -> bool:
        return self.projector * other.projector == other.projector

    def conjugated(self, u: DomainMatrix) -> "Subspace":
        """Image under an isometry u defined on this subspace."""
        u = _s(u)
        return Subspace(u * self.projector * _adj(u))

    def basis(self) -> DomainMatrix:
        return column_basis(self.projector.to_dense())


def _mat_json(m: DomainMatrix):
    dom = m.domain
    out = []
    for row in m.to_dense().to_list():
        r = []
        for v in row:
            re, im = scalar_to_str(dom, v)
            r.append(re if dom == QQ else [re, im])
        out.append(r)
    return out


def _mat_from_json(rows, dom) -> DomainMatrix:
    vals = [[scalar_from_str(dom, *(v if isinstance(v, list) else [v, "0"])) for v in r] for r in rows]
    n = len(vals)
    return _s(DomainMatrix(vals, (n, len(vals[0]) if n else 0), dom))


# ------------------------------------------------------------------ labels


def _lam(label) -> Fraction:
    return label[0] if isinstance(label, tuple) else label


def _level(label):
    return label[1] if isinstance(label, tuple) else None


def _neg(label):
    if isinstance(label, tuple):
        return (-label[0], label[1])
    return -label


def _label_json(label):
    if isinstance(label, tuple):
        return [str(label[0]), label[1]]
    return str(label)


def _label_from_json(v):
    if isinstance(v, list):
        return (Fraction(v[0]), int(v[1]))
    return Fraction(v)


def _label_key(label):
    return (_level(label) if _level(label) is not None else 0, _lam(label))


# ------------------------------------------------------------------ spectral data


@dataclass(eq=False)
class SpectralData:
    """A finite map label -> subspace, symmetric under lambda -> -lambda via eps."""

    ambient: GradedCliffordModule
    spaces: dict
    k0: int | None = None

    def __post_init__(self):
        self.spaces = {lab: sp for lab, sp in self.spaces.items() if sp}

    @property
    def domain(self):
        return self.ambient.domain

    @property
    def labels(self) -> list:
        return sorted(self.spaces, key=_label_key)

    @property
    def is_circle(self) -> bool:
        return any(isinstance(lab, tuple) for lab in self.spaces)

    def space(self, label) -> Subspace:
        return self.spaces.get(label) or Subspace.zero(self.ambient.dim, self.domain)

    def total(self) -> DomainMatrix:
        out = _zero(self.ambient.dim, self.domain)
        for sp in self.spaces.values():
            out = out + sp.projector
        return out

    def part(self, pred) -> DomainMatrix:
        out = _zero(self.ambient.dim, self.domain)
        for lab, sp in self.spaces.items():
            if pred(lab):
                out = out + sp.projector
        return out

    def __eq__(self, other):
        if not isinstance(other, SpectralData) or set(self.spaces) != set(other.spaces):
            return False
        return all(self.spaces[k] == other.spaces[k] for k in self.spaces)

    __hash__ = None

    def violations(self) -> list[str]:
        eps = _grading(self.ambient)
        gens = _gens(self.ambient)
        out = []
        labs = self.labels
        for i, a in enumerate(labs):
            pa = self.spaces[a].projector
            for b in labs[:i]:
                if not (pa * self.spaces[b].projector).is_zero_matrix:
                    out.append(f"summands {a} and {b} are not orthogonal")
            if eps * pa * eps != self.space(_neg(a)).projector:
                out.append(f"eps does not map V_{a} onto V_{_neg(a)}")
            if any(e * pa != pa * e for e in gens):
                out.append(f"V_{a} is not a Clifford submodule")
            if _lam(a) == 0 and eps * pa != pa * eps:
                out.append(f"V_{a} is not graded")
            if self.k0 is not None and _level(a) is not None and _lam(a) == 0 and _level(a) < self.k0:
                out.append(f"V_{a} is nonzero below the level bound {self.k0}")
        return out

    def validate(self):
        bad = self.violations()
        if bad:
            raise CategoryError("; ".join(bad))
        return self

    def transported(self, u: DomainMatrix) -> "SpectralData":
        return SpectralData(self.ambient, {k: v.conjugated(u) for k, v in self.spaces.items()}, self.k0)

    def to_json(self) -> dict:
        out = {
            "ambient": self.ambient.to_json(),
            "spaces": [{"label": _label_json(k), "projector": _mat_json(self.spaces[k].projector)} for k in self.labels],
        }
        if self.k0 is not None:
            out["k0"] = self.k0
        return out

    @classmethod
    def from_json(cls, data, ambient: GradedCliffordModule | None = None) -> "SpectralData":
        if isinstance(data, str):
            data = json.loads(data)
        amb = ambient or GradedCliffordModule.from_json(data["ambient"])
        spaces = {_label_from_json(s["label"]): Subspace(_mat_from_json(s["projector"], amb.domain)) for s in data["spaces"]}
        return cls(amb, spaces, data.get("k0"))


# ------------------------------------------------------------------ deformations


@dataclass(eq=False)
class DeformationMorphism:
    """(alpha, F, A): source -> target."""

    source: SpectralData
    target: SpectralData
    alpha: dict
    F: DomainMatrix
    A: Subspace

    def __post_init__(self):
        self.F = _s(self.F)
        self.alpha = {k: v for k, v in self.alpha.items() if k in self.source.spaces}

    def __eq__(self, other):
        return (
            isinstance(other, DeformationMorphism)
            and self.source == other.source
            and self.target == other.target
            and self.alpha == other.alpha
            and self.F == other.F
            and self.A == other.A
        )

    __hash__ = None

    def violations(self) -> list[str]:
        src, tgt = self.source, self.target
        amb = src.ambient
        eps = _grading(amb)
        gens = _gens(amb)
        F, PA = self.F, self.A.projector
        out = []
        out += [f"source: {v}" for v in src.violations()]
        out += [f"target: {v}" for v in tgt.violations()]
        a = self.alpha
        if set(a) != set(src.spaces):
            out.append("alpha is not defined on every source label")
        for lab, img in a.items():
            if img not in tgt.spaces:
                out.append(f"alpha({lab}) = {img} is not a target label")
            if _neg(lab) in a and a[_neg(lab)] != _neg(img):
                out.append("alpha is not odd")
            if _level(lab) != _level(img):
                out.append("alpha changes the level")
        labs = list(a)
        for x in labs:
            for y in labs:
                if _level(x) == _level(y) and _lam(x) < _lam(y) and _lam(a[x]) > _lam(a[y]):
                    out.append("alpha is not order-preserving")
        # "proper" is automatic for finite label sets
        if eps * F != F * eps:
            out.append("F is not even")
        if any(e * F != F * e for e in gens):
            out.append("F is not Clifford-linear")
        if _adj(F) * F != src.total():
            out.append("F is not an isometry on the source")
        for lab, sp in src.spaces.items():
            if lab in a and lab in tgt.spaces:
                fp = F * sp.projector
                if tgt.spaces[a[lab]].projector * fp != fp:
                    out.append(f"F does not map V_{lab} into V'_{a[lab]}")
        if any(e * PA != PA * e for e in gens):
            out.append("A is not a Clifford submodule")
        for lab, sp in tgt.spaces.items():
            p = sp.projector
            if p * PA != PA * p:
                out.append("A does not split along the target spectrum")
            elif _lam(lab) < 0 and not (p * PA).is_zero_matrix:
                out.append("A meets a negative eigenspace")
        if not (PA * eps * PA).is_zero_matrix:
            out.append("A is not orthogonal to eps A")
        if F * _adj(F) + PA + eps * PA * eps != tgt.total():
            out.append("target is not f(D) + A + eps A")
        return out

    def is_valid(self) -> bool:
        return not self.violations()

    def validate(self):
        bad = self.violations()
        if bad:
            raise CategoryError("; ".join(bad))
        return self

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "alpha": [[_label_json(k), _label_json(self.alpha[k])] for k in sorted(self.alpha, key=_label_key)],
            "F": _mat_json(self.F),
            "A": _mat_json(self.A.projector),
        }

    @classmethod
    def from_json(cls, data) -> "DeformationMorphism":
        if isinstance(data, str):
            data = json.loads(data)
        src = SpectralData.from_json(data["source"])
        tgt = SpectralData.from_json(data["target"], src.ambient)
        dom = src.domain
        alpha = {_label_from_json(a): _label_from_json(b) for a, b in data["alpha"]}
        return cls(src, tgt, alpha, _mat_from_json(data["F"], dom), Subspace(_mat_from_json(data["A"], dom)))


def identity_deformation(e: SpectralData) -> DeformationMorphism:
    return DeformationMorphism(e, e, {k: k for k in e.spaces}, e.total(), Subspace.zero(e.ambient.dim, e.domain))


def compose_deformation(m2: DeformationMorphism, m1: DeformationMorphism, check: bool = True) -> DeformationMorphism:
    """(alpha', f', A') o (alpha, f, A) = (alpha' alpha, f' f, f'(A) + A')."""
    if not (m1.target == m2.source):
        raise CategoryError("morphisms are not composable")
    alpha = {k: m2.alpha[v] for k, v in m1.alpha.items()}
    F = m2.F * m1.F
    A = Subspace(m2.F * m1.A.projector * _adj(m2.F) + m2.A.projector)
    out = DeformationMorphism(m1.source, m2.target, alpha, F, A)
    if check:
        out.validate()
    return out


def relabeled(e: SpectralData, alpha: dict) -> SpectralData:
    spaces: dict = {}
    for lab, sp in e.spaces.items():
        img = alpha[lab]
        spaces[img] = Subspace(spaces[img].projector + sp.projector) if img in spaces else sp
    return SpectralData(e.ambient, spaces, e.k0)


def factor_deformation(m: DeformationMorphism) -> tuple[DeformationMorphism, DeformationMorphism, DeformationMorphism]:
    """(alpha, f, A) = (incl, incl, A) o (id, f, 0) o (alpha, id, 0)."""
    e = m.source
    n, dom = e.ambient.dim, e.domain
    zero = Subspace.zero(n, dom)
    e1 = relabeled(e, m.alpha)
    r = DeformationMorphism(e, e1, dict(m.alpha), e.total(), zero)
    e2 = e1.transported(m.F)
    iso = DeformationMorphism(e1, e2, {k: k for k in e1.spaces}, m.F, zero)
    inc = DeformationMorphism(e2, m.target, {k: k for k in e2.spaces}, e2.total(), m.A)
    return inc, iso, r


# ------------------------------------------------------------------ V_n


@dataclass(eq=False)
class VnMorphism:
    """(f, A): V -> V' with A orthogonal to eps A and f(V), V' = f(V) + A + eps A."""

    ambient: GradedCliffordModule
    source: Subspace
    target: Subspace
    F: DomainMatrix
    A: Subspace

    def __post_init__(self):
        self.F = _s(self.F)

    def __eq__(self, other):
        return (
            isinstance(other, VnMorphism)
            and self.source == other.source
            and self.target == other.target
            and self.F == other.F
            and self.A == other.A
        )

    __hash__ = None

    def violations(self) -> list[str]:
        amb = self.ambient
        eps = _grading(amb)
        gens = _gens(amb)
        out = []
        for name, v in (("source", self.source), ("target", self.target)):
            p = v.projector
            if eps * p != p * eps or any(e * p != p * e for e in gens):
                out.append(f"{name} is not a graded Clifford submodule")
        F, PA = self.F, self.A.projector
        if eps * F != F * eps or any(e * F != F * e for e in gens):
            out.append("f is not even and Clifford-linear")
        if _adj(F) * F != self.source.projector:
            out.append("f is not an isometry on V")
        if any(e * PA != PA * e for e in gens):
            out.append("A is not a Clifford submodule")
        if not (PA * eps * PA).is_zero_matrix:
            out.append("A is not orthogonal to eps A")
        if not (PA * F).is_zero_matrix:
            out.append("A is not orthogonal to f(V)")
        if F * _adj(F) + PA + eps * PA * eps != self.target.projector:
            out.append("V' is not f(V) + A + eps A")
        return out

    def validate(self):
        bad = self.violations()
        if bad:
            raise CategoryError("; ".join(bad))
        return self

    def compose(self, first: "VnMorphism") -> "VnMorphism":
        """self o first."""
        if not (first.target == self.source):
            raise CategoryError("morphisms are not composable")
        A = Subspace(self.F * first.A.projector * _adj(self.F) + self.A.projector)
        return VnMorphism(self.ambient, first.source, self.target, self.F * first.F, A)

    @classmethod
    def identity(cls, ambient, v: Subspace) -> "VnMorphism":
        return cls(ambient, v, v, v.projector, Subspace.zero(ambient.dim, ambient.domain))

    def to_json(self) -> dict:
        return {
            "source": _mat_json(self.source.projector),
            "target": _mat_json(self.target.projector),
            "F": _mat_json(self.F),
            "A": _mat_json(self.A.projector),
        }


# ------------------------------------------------------------------ functors


def _zero_label(e: SpectralData, level=None):
    return (Fraction(0), level) if level is not None else Fraction(0)


def ind(x):
    """ind_n on objects (V_0) and on morphisms."""
    if isinstance(x, SpectralData):
        return Subspace(x.part(lambda lab: _lam(lab) == 0))
    m = x
    src, tgt = m.source, m.target
    p0 = src.part(lambda lab: _lam(lab) == 0)
    p0t = tgt.part(lambda lab: _lam(lab) == 0)
    merged = src.part(lambda lab: _lam(lab) > 0 and _lam(m.alpha[lab]) == 0)
    A = Subspace(m.F * merged * _adj(m.F) + m.A.projector * p0t)
    return VnMorphism(src.ambient, Subspace(p0), Subspace(p0t), m.F * p0, A)


def ind_level(x, k: int):
    """ind_{n,k}: restrict to the level-k zero eigenspace."""
    if isinstance(x, SpectralData):
        return Subspace(x.part(lambda lab: _lam(lab) == 0 and _level(lab) == k))
    m = x
    src, tgt = m.source, m.target
    p0 = src.part(lambda lab: _lam(lab) == 0 and _level(lab) == k)
    p0t = tgt.part(lambda lab: _lam(lab) == 0 and _level(lab) == k)
    merged = src.part(lambda lab: _level(lab) == k and _lam(lab) > 0 and _lam(m.alpha[lab]) == 0)
    A = Subspace(m.F * merged * _adj(m.F) + m.A.projector * p0t)
    return VnMorphism(src.ambient, Subspace(p0), Subspace(p0t), m.F * p0, A)


def _levels(*datas) -> list[int]:
    out = set()
    for d in datas:
        out |= {_level(lab) for lab in d.spaces}
    return sorted(k for k in out if k is not None)


def ind_circle(x) -> dict:
    """ind_n^{S^1}: the sequence of level-wise zero eigenspaces (or morphisms)."""
    if isinstance(x, SpectralData):
        return {k: ind_level(x, k) for k in _levels(x) if ind_level(x, k)}
    return {k: ind_level(x, k) for k in _levels(x.source, x.target)}


def embed(x, ambient: GradedCliffordModule | None = None):
    """E_n: V -> {0: V}; (f, A) -> (alpha_{V,V'}, f, A)."""
    if isinstance(x, Subspace):
        if ambient is None:
            raise CategoryError("embedding an object needs the ambient module")
        return SpectralData(ambient, {Fraction(0): x})
    m = x
    src = SpectralData(m.ambient, {Fraction(0): m.source})
    tgt = SpectralData(m.ambient, {Fraction(0): m.target})
    alpha = {Fraction(0): Fraction(0)} if m.source else {}
    return DeformationMorphism(src, tgt, alpha, m.F, m.A)


def embed_circle(x: dict, ambient: GradedCliffordModule, k0: int | None = None):
    """E_n for annular theories, on a level-indexed family of objects or morphisms."""
    vals = list(x.values())
    if vals and isinstance(vals[0], VnMorphism):
        src = SpectralData(ambient, {(Fraction(0), k): m.source for k, m in x.items()}, k0)
        tgt = SpectralData(ambient, {(Fraction(0), k): m.target for k, m in x.items()}, k0)
        F = _zero(ambient.dim, ambient.domain)
        A = _zero(ambient.dim, ambient.domain)
        for m in x.values():
            F = F + m.F
            A = A + m.A.projector
        alpha = {lab: lab for lab in src.spaces}
        return DeformationMorphism(src, tgt, alpha, F, Subspace(A))
    if k0 is not None and any(k < k0 and v for k, v in x.items()):
        raise TateError("object is nonzero below the level bound")
    return SpectralData(ambient, {(Fraction(0), k): v for k, v in x.items()}, k0)


def natural_N(e: SpectralData) -> DeformationMorphism:
    """N(E) = (alpha_E, i_E, sum_{lambda > 0} V_lambda): E_n(ind E) -> E."""
    amb = e.ambient
    zero_labs = [lab for lab in e.spaces if _lam(lab) == 0]
    src = SpectralData(amb, {lab: e.spaces[lab] for lab in zero_labs}, e.k0)
    alpha = {lab: lab for lab in zero_labs}
    p0 = src.total()
    A = Subspace(e.part(lambda lab: _lam(lab) > 0))
    return DeformationMorphism(src, e, alpha, p0, A)


def naturality_holds(m: DeformationMorphism) -> bool:
    """N(E') o E(ind m) == m o N(E)."""
    if m.source.is_circle or m.target.is_circle:
        lhs_mid = embed_circle(ind_circle(m), m.source.ambient, m.source.k0)
        lhs_mid = _align_circle(lhs_mid, m)
    else:
        lhs_mid = embed(ind(m))
    lhs = compose_deformation(natural_N(m.target), lhs_mid, check=False)
    rhs = compose_deformation(m, natural_N(m.source), check=False)
    return lhs == rhs and lhs.is_valid()


def _align_circle(mid: DeformationMorphism, m: DeformationMorphism) -> DeformationMorphism:
    """Drop empty levels so that sources and targets match N exactly."""
    src = SpectralData(mid.source.ambient, mid.source.spaces, m.source.k0)
    tgt = SpectralData(mid.target.ambient, mid.target.spaces, m.target.k0)
    return DeformationMorphism(src, tgt, mid.alpha, mid.F, mid.A)


# ------------------------------------------------------------------ Quillen isomorphisms


@dataclass(eq=False)
class VirVectObject:
    even: Subspace
    odd: Subspace

    def __eq__(self, other):
        return isinstance(other, VirVectObject) and self.even == other.even and self.odd == other.odd

    __hash__ = None


@dataclass(eq=False)
class VirVectMorphism:
    """(f0, f1; phi) with phi an isometry from W^0 onto W^1, W^i the complements of f(V^i)."""

    source: VirVectObject
    target: VirVectObject
    f0: DomainMatrix
    f1: DomainMatrix
    phi: DomainMatrix

    def __post_init__(self):
        self.f0, self.f1, self.phi = _s(self.f0), _s(self.f1), _s(self.phi)

    def __eq__(self, other):
        return (
            isinstance(other, VirVectMorphism)
            and self.source == other.source
            and self.target == other.target
            and self.f0 == other.f0
            and self.f1 == other.f1
            and self.phi == other.phi
        )

    __hash__ = None

    def complements(self):
        w0 = self.target.even.projector - self.f0 * _adj(self.f0)
        w1 = self.target.odd.projector - self.f1 * _adj(self.f1)
        return w0, w1

    def violations(self) -> list[str]:
        out = []
        if _adj(self.f0) * self.f0 != self.source.even.projector:
            out.append("f0 is not an isometry on V^0")
        if _adj(self.f1) * self.f1 != self.source.odd.projector:
            out.append("f1 is not an isometry on V^1")
        if not self.target.even.contains(Subspace(self.f0 * _adj(self.f0))):
            out.append("f0 does not land in V'^0")
        if not self.target.odd.contains(Subspace(self.f1 * _adj(self.f1))):
            out.append("f1 does not land in V'^1")
        w0, w1 = self.complements()
        if _adj(self.phi) * self.phi != w0 or self.phi * _adj(self.phi) != w1:
            out.append("phi is not an isometry W^0 -> W^1")
        return out

    def validate(self):
        bad = self.violations()
        if bad:
            raise CategoryError("; ".join(bad))
        return self

    def compose(self, first: "VirVectMorphism") -> "VirVectMorphism":
        phi = self.f1 * first.phi * _adj(self.f0) + self.phi
        return VirVectMorphism(first.source, self.target, self.f0 * first.f0, self.f1 * first.f1, phi)


@dataclass(eq=False)
class QVectMorphism:
    """(g; W1, W2): U -> U' with U' = g(U) + W1 + W2 orthogonally."""

    source: Subspace
    target: Subspace
    g: DomainMatrix
    W1: Subspace
    W2: Subspace

    def __post_init__(self):
        self.g = _s(self.g)

    def __eq__(self, other):
        return (
            isinstance(other, QVectMorphism)
            and self.source == other.source
            and self.target == other.target
            and self.g == other.g
            and self.W1 == other.W1
            and self.W2 == other.W2
        )

    __hash__ = None

    def violations(self) -> list[str]:
        out = []
        if _adj(self.g) * self.g != self.source.projector:
            out.append("g is not an isometry on U")
        if self.g * _adj(self.g) + self.W1.projector + self.W2.projector != self.target.projector:
            out.append("U' is not g(U) + W1 + W2")
        if not self.W1.is_orthogonal(self.W2):
            out.append("W1 and W2 are not orthogonal")
        return out

    def validate(self):
        bad = self.violations()
        if bad:
            raise CategoryError("; ".join(bad))
        return self

    def compose(self, first: "QVectMorphism") -> "QVectMorphism":
        g = self.g
        w1 = Subspace(g * first.W1.projector * _adj(g) + self.W1.projector)
        w2 = Subspace(g * first.W2.projector * _adj(g) + self.W2.projector)
        return QVectMorphism(first.source, self.target, g * first.g, w1, w2)


def _half(dom):
    return dom.convert_from(QQ(1, 2), QQ)


def quillen_iso_v0(direction: str, datum, ambient: GradedCliffordModule):
    """F: V_0 -> virVect and G: virVect -> V_0 on objects and morphisms.

    F(f, A) = (f^0, f^1; phi_A) with phi_A(a + eps a) = a - eps a, i.e.
    phi_A = (1 - eps) P_A on W^0.  G(f^0, f^1; phi) = (f^0 + f^1, A_phi) with
    A_phi = {u + phi(u) : u in W^0}.
    """
    if ambient.degree != 0:
        raise CategoryError("the virtual vector space model needs a degree-0 ambient")
    dom = ambient.domain
    n = ambient.dim
    eps = _grading(ambient)
    one = _eye(n, dom)
    half = _half(dom)
    pe = (one + eps) * half
    po = (one - eps) * half
    if direction == "F":
        if isinstance(datum, Subspace):
            return VirVectObject(Subspace(datum.projector * pe), Subspace(datum.projector * po))
        m: VnMorphism = datum
        src = quillen_iso_v0("F", m.source, ambient)
        tgt = quillen_iso_v0("F", m.target, ambient)
        PA = m.A.projector
        w0 = (PA + eps * PA * eps) * pe
        phi = (one - eps) * PA * w0
        return VirVectMorphism(src, tgt, m.F * src.even.projector, m.F * src.odd.projector, phi)
    if direction == "G":
        if isinstance(datum, VirVectObject):
            return Subspace(datum.even.projector + datum.odd.projector)
        v: VirVectMorphism = datum
        w0, _ = v.complements()
        phi = v.phi
        pa = (w0 + phi + _adj(phi) + phi * _adj(phi)) * half
        src = quillen_iso_v0("G", v.source, ambient)
        tgt = quillen_iso_v0("G", v.target, ambient)
        return VnMorphism(ambient, src, tgt, v.f0 + v.f1, Subspace(pa))
    raise CategoryError(f"unknown direction {direction!r}")


def quillen_iso_v1(direction: str, datum, ambient: GradedCliffordModule):
    """F: V_1 -> QVect and G back, using p = (1 + e_1)/2 (so eps p = (1 - p) eps).

    F(V) = pV, F(f, A) = (f|pV; pA, p eps A); G(U) = U + eps U and
    G(g; W1, W2) = (g + eps g eps, W1 + eps W2).
    """
    if ambient.degree != -1:
        raise CategoryError("the QVect model needs a degree -1 ambient (a Cl_{-1}-module)")
    dom = ambient.domain
    n = ambient.dim
    eps = _grading(ambient)
    e1 = _gens(ambient)[0]
    p = (_eye(n, dom) + e1) * _half(dom)
    if direction == "F":
        if isinstance(datum, Subspace):
            return Subspace(p * datum.projector)
        m: VnMorphism = datum
        pu = p * m.source.projector
        PA = m.A.projector
        return QVectMorphism(Subspace(pu), Subspace(p * m.target.projector), m.F * pu, Subspace(p * PA), Subspace(p * eps * PA * eps))
    if direction == "G":
        if isinstance(datum, Subspace):
            return Subspace(datum.projector + eps * datum.projector * eps)
        q: QVectMorphism = datum
        src = quillen_iso_v1("G", q.source, ambient)
        tgt = quillen_iso_v1("G", q.target, ambient)
        pu = q.source.projector
        F = q.g * pu + eps * q.g * pu * eps
        A = Subspace(q.W1.projector + eps * q.W2.projector * eps)
        return VnMorphism(ambient, src, tgt, F, A)
    raise CategoryError(f"unknown direction {direction!r}")


# ------------------------------------------------------------------ ambient universes


@dataclass
class Block:
    """A copy of a module inside the ambient: isometric inclusion, kind, involution."""

    inc: DomainMatrix
    kind: str
    type_id: tuple
    K: DomainMatrix | None = None
    level: int = 0

    @property
    def projector(self) -> DomainMatrix:
        return self.inc * _adj(self.inc)

    def moved(self, u: DomainMatrix) -> "Block":
        inc = u * self.inc
        K = None if self.K is None else u * self.K * _adj(u)
        return Block(inc, self.kind, self.type_id, K, self.level)


class Universe:
    """An ambient module assembled from plain irreducibles and extension blocks.

    Extension blocks i(T) carry an odd self-adjoint Clifford-linear
    involution K; its +1 eigenspace A satisfies A + eps A = i(T).
    """

    def __init__(self, degree: int, field: str = "R", plain: int = 2, ext: int = 2):
        from .fieldtheory import extension_involution

        irr = irreducible_graded_modules(degree, field)
        ups = irreducible_graded_modules(degree + 1, field)
        mods, meta = [], []
        for c, m in enumerate(irr):
            for _ in range(plain):
                mods.append(m)
                meta.append(("plain", ("plain", c), None))
        for c, t in enumerate(ups):
            m, K = extension_involution(t)
            for _ in range(ext):
                mods.append(m)
                meta.append(("ext", ("ext", c), K))
        self.degree = degree
        self.field = field
        self.irreducibles = irr
        self.ext_types = ups
        self.plain_multiplicity = plain
        self.ext_multiplicity = ext
        self.ambient, incs = direct_sum(mods)
        self.blocks = []
        for inc, (kind, tid, K) in zip(incs, meta):
            inc = _s(inc)
            Kamb = None if K is None else inc * _s(K) * _adj(inc)
            self.blocks.append(Block(inc, kind, tid, Kamb))

    @property
    def domain(self):
        return self.ambient.domain

    def eps(self) -> DomainMatrix:
        return _grading(self.ambient)

    def positive_part(self, b: Block) -> DomainMatrix:
        """Projector onto the +1 eigenspace of K (an A with A + eps A = block)."""
        return (b.projector + b.K) * _half(self.domain)


# ------------------------------------------------------------------ random generation


@dataclass
class _State:
    universe: Universe
    data: SpectralData
    blocks: list
    used: list


_LAMBDAS = [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)]
_ROTATIONS = [(Fraction(3, 5), Fraction(4, 5)), (Fraction(5, 13), Fraction(12, 13)), (Fraction(0), Fraction(1)), (Fraction(8, 17), Fraction(15, 17))]


def _q(dom, f: Fraction):
    return dom.convert_from(QQ(f.numerator, f.denominator), QQ)


def _add_space(spaces: dict, label, p: DomainMatrix):
    spaces[label] = Subspace(spaces[label].projector + p) if label in spaces else Subspace(p)


def random_spectral_data(rng: random.Random, universe: Universe, circle: bool = False, levels=(0, 1, 2)) -> _State:
    """Random spectral data using part of the universe; the rest stays free."""
    eps = universe.eps()
    spaces: dict = {}
    blocks = [Block(b.inc, b.kind, b.type_id, b.K, rng.choice(levels) if circle else 0) for b in universe.blocks]
    used = [False] * len(blocks)

    def lab(lam, b):
        return (lam, b.level) if circle else lam

    for i, b in enumerate(blocks):
        r = rng.random()
        if b.kind == "plain" and r < 0.5:
            _add_space(spaces, lab(Fraction(0), b), b.projector)
            used[i] = True
        elif b.kind == "ext" and r < 0.5:
            used[i] = True
            if rng.random() < 0.3:
                _add_space(spaces, lab(Fraction(0), b), b.projector)
            else:
                lam = rng.choice(_LAMBDAS)
                a = universe.positive_part(b)
                _add_space(spaces, lab(lam, b), a)
                _add_space(spaces, lab(-lam, b), eps * a * eps)
    k0 = min(levels) if circle else None
    data = SpectralData(universe.ambient, spaces, k0).validate()
    return _State(universe, data, blocks, used)


def _move_relabel(rng, st: _State) -> DeformationMorphism:
    e = st.data
    by_level: dict = {}
    for lab in e.spaces:
        if _lam(lab) > 0:
            by_level.setdefault(_level(lab), []).append(_lam(lab))
    alpha = {}
    for lvl, lams in by_level.items():
        lams = sorted(set(lams))
        cur = rng.choice([Fraction(0), Fraction(0), Fraction(1, 2)])
        for lam in lams:
            cur = cur + rng.choice([Fraction(0), Fraction(1, 2), Fraction(1)])
            for sign in (1, -1):
                src = (sign * lam, lvl) if lvl is not None else sign * lam
                dst = (sign * cur, lvl) if lvl is not None else sign * cur
                alpha[src] = dst
    for lab in e.spaces:
        if _lam(lab) == 0:
            alpha[lab] = lab
    tgt = relabeled(e, alpha)
    m = DeformationMorphism(e, tgt, alpha, e.total(), Subspace.zero(e.ambient.dim, e.domain))
    st.data = tgt
    return m


def _move_iso(rng, st: _State) -> DeformationMorphism | None:
    by_type: dict = {}
    for i, b in enumerate(st.blocks):
        by_type.setdefault((b.type_id, b.level), []).append(i)
    pairs = [v for v in by_type.values() if len(v) >= 2]
    e = st.data
    dom = e.domain
    if not pairs:
        return None
    i, j = rng.sample(rng.choice(pairs), 2)
    bi, bj = st.blocks[i], st.blocks[j]
    c, s = rng.choice(_ROTATIONS)
    c, s = _q(dom, c), _q(dom, s)
    n = e.ambient.dim
    pi_, pj = bi.projector, bj.projector
    u = _eye(n, dom) - pi_ - pj + (pi_ + pj) * c + (bj.inc * _adj(bi.inc) - bi.inc * _adj(bj.inc)) * s
    tgt = e.transported(u)
    m = DeformationMorphism(e, tgt, {k: k for k in e.spaces}, u * e.total(), Subspace.zero(n, dom))
    st.data = tgt
    st.blocks = [b.moved(u) for b in st.blocks]
    return m


def _move_add(rng, st: _State) -> DeformationMorphism | None:
    free = [i for i, b in enumerate(st.blocks) if b.kind == "ext" and not st.used[i]]
    if not free:
        return None
    i = rng.choice(free)
    b = st.blocks[i]
    e = st.data
    eps = st.universe.eps()
    circle = e.is_circle or e.k0 is not None
    a = st.universe.positive_part(b)
    existing = sorted({_lam(lab) for lab in e.spaces if _lam(lab) > 0 and (not circle or _level(lab) == b.level)})
    lam = rng.choice(existing + [Fraction(0), rng.choice(_LAMBDAS)])
    spaces = dict(e.spaces)

    def lab(x):
        return (x, b.level) if circle else x

    if lam == 0:
        _add_space(spaces, lab(Fraction(0)), b.projector)
    else:
        _add_space(spaces, lab(lam), a)
        _add_space(spaces, lab(-lam), eps * a * eps)
    tgt = SpectralData(e.ambient, spaces, e.k0)
    m = DeformationMorphism(e, tgt, {k: k for k in e.spaces}, e.total(), Subspace(a))
    st.data = tgt
    st.used[i] = True
    return m


def random_deformation(rng: random.Random, st: _State, moves: int | None = None) -> DeformationMorphism:
    """A random morphism out of st.data (a composite of basic moves); st advances to its target."""
    moves = moves if moves is not None else rng.randint(1, 3)
    m = identity_deformation(st.data)
    for _ in range(moves):
        kind = rng.choice(["relabel", "iso", "add"])
        step = {"relabel": _move_relabel, "iso": _move_iso, "add": _move_add}[kind](rng, st)
        if step is not None:
            m = compose_deformation(step, m, check=False)
    return m


# ------------------------------------------------------------------ direct random Quillen data


class _Frames:
    """Orthonormal frames u_j whose outer products u_a u_b^* are exact matrices."""

    def __init__(self, outer, count: int, size: int, dom):
        self._outer = outer
        self.count = count
        self.size = size
        self.dom = dom

    def outer(self, a: int, b: int) -> DomainMatrix:
        return self._outer(a, b)

    def map(self, pairs) -> DomainMatrix:
        out = _zero(self.size, self.dom)
        for a, b in pairs:
            out = out + self.outer(a, b)
        return out

    def span(self, idx) -> Subspace:
        return Subspace(self.map((j, j) for j in idx))

    def rotation(self, rng: random.Random, steps: int = 3) -> DomainMatrix:
        """A random exact rotation of the frame span (identity off it)."""
        full = self.map((j, j) for j in range(self.count))
        r = _eye(self.size, self.dom)
        if self.count < 2:
            return r
        for _ in range(steps):
            i, j = rng.sample(range(self.count), 2)
            c, s = (_q(self.dom, v) for v in rng.choice(_ROTATIONS))
            pij = self.outer(i, i) + self.outer(j, j)
            g = _eye(self.size, self.dom) - pij + pij * c + (self.outer(j, i) - self.outer(i, j)) * s
            r = g * r
        return r * full + (_eye(self.size, self.dom) - full)


def _coordinate_frames(amb: GradedCliffordModule, idx: Sequence[int]) -> _Frames:
    n, dom = amb.dim, amb.domain

    def outer(a, b):
        return DomainMatrix({idx[a]: {idx[b]: dom.one}}, (n, n), dom)

    fr = _Frames(outer, len(idx), n, dom)
    fr.idx = list(idx)
    return fr


def random_virvect_morphism(rng: random.Random, ambient: GradedCliffordModule) -> VirVectMorphism:
    """A random (f0, f1; phi) inside the even and odd parts of a degree-0 ambient."""
    ev = _coordinate_frames(ambient, list(range(ambient.even_dim)))
    od = _coordinate_frames(ambient, list(range(ambient.even_dim, ambient.dim)))
    parts = []
    for fr in (ev, od):
        order = list(range(fr.count))
        rng.shuffle(order)
        a = rng.randint(0, fr.count // 2)
        parts.append((fr, order[:a], order[a:]))
    w = rng.randint(0, min(len(parts[0][2]), len(parts[1][2])))
    maps, srcs, tgts, ws = [], [], [], []
    for fr, src_idx, rest in parts:
        img = rest[: len(src_idx)] if len(rest) >= len(src_idx) + w else None
        if img is None:
            img = rest[: len(rest) - w]
            src_idx = src_idx[: len(img)]
        wi = rest[len(img) : len(img) + w]
        q, r = fr.rotation(rng), fr.rotation(rng)
        f = r * fr.map(zip(img, src_idx)) * _adj(q)
        srcs.append(fr.span(src_idx).conjugated(q))
        tgts.append(fr.span(list(img) + list(wi)).conjugated(r))
        maps.append(f)
        ws.append((wi, r))
    (w0, r0), (w1, r1) = ws
    phi = r1 * _raw_cross(ev, od, list(zip(w1, w0))) * _adj(r0)
    m = VirVectMorphism(VirVectObject(*srcs), VirVectObject(*tgts), maps[0], maps[1], phi)
    return m.validate()


def _raw_cross(ev: _Frames, od: _Frames, pairs) -> DomainMatrix:
    """sum of u^odd_a (u^even_b)^* for coordinate frames."""
    rows: dict = {}
    for a, b in pairs:
        rows.setdefault(od.idx[a], {})[ev.idx[b]] = ev.dom.one
    return DomainMatrix(rows, (ev.size, ev.size), ev.dom)


def _p_frames(amb: GradedCliffordModule) -> _Frames:
    """Frames u_j = sqrt(2) p b_j for the even basis vectors b_j of a degree -1 ambient."""
    dom = amb.domain
    n = amb.dim
    e1 = _gens(amb)[0]
    p = (_eye(n, dom) + e1) * _half(dom)
    two = dom.convert_from(QQ(2), QQ)

    def outer(a, b):
        ea = DomainMatrix({a: {b: two}}, (n, n), dom)
        return p * ea * p

    return _Frames(outer, amb.even_dim, n, dom)


def random_qvect_morphism(rng: random.Random, ambient: GradedCliffordModule) -> QVectMorphism:
    """A random (g; W1, W2) inside pH for a degree -1 ambient."""
    fr = _p_frames(ambient)
    order = list(range(fr.count))
    rng.shuffle(order)
    a = rng.randint(0, fr.count // 2)
    src_idx, rest = order[:a], order[a:]
    img = rest[:a]
    extra = rest[a:]
    k1 = rng.randint(0, len(extra))
    k2 = rng.randint(0, len(extra) - k1)
    t1, t2 = extra[:k1], extra[k1 : k1 + k2]
    q, r = fr.rotation(rng), fr.rotation(rng)
    g = r * fr.map(zip(img, src_idx)) * _adj(q)
    m = QVectMorphism(
        fr.span(src_idx).conjugated(q),
        fr.span(list(img) + t1 + t2).conjugated(r),
        g,
        fr.span(t1).conjugated(r),
        fr.span(t2).conjugated(r),
    )
    return m.validate()


# ------------------------------------------------------------------ pi_0


@dataclass
class Pi0Result:
    degree: int
    field: str
    dim_cap: int
    group: QuotientGroup
    components: int
    labels: dict
    nodes: int
    edges: int
    bijective: bool
    addition_ok: bool

    @property
    def passed(self) -> bool:
        return self.bijective and self.addition_ok

    def to_json(self) -> dict:
        return {
            "n": self.degree,
            "field": self.field,
            "dim_cap": self.dim_cap,
            "group": self.group.presentation(),
            "components": self.components,
            "nodes": self.nodes,
            "edges": self.edges,
            "component_labels": [list(v) for v in sorted(set(self.labels.values()))],
            "bijective": self.bijective,
            "addition_matches": self.addition_ok,
        }


def _module_on(amb: GradedCliffordModule, blocks: Sequence[Block]) -> GradedCliffordModule:
    """The submodule spanned by blocks, in an orthonormal basis (evens first)."""
    dom = amb.domain
    eps_list = [1] * amb.even_dim + [-1] * amb.odd_dim
    cols_e, cols_o = [], []
    for b in blocks:
        inc = b.inc.to_dense().to_list()
        for j in range(b.inc.shape[1]):
            col = [inc[i][j] for i in range(amb.dim)]
            row = next(i for i, v in enumerate(col) if v)
            (cols_e if eps_list[row] > 0 else cols_o).append(col)
    cols = cols_e + cols_o
    basis = DomainMatrix([[c[i] for c in cols] for i in range(amb.dim)], (amb.dim, len(cols)), dom)
    bt = adjoint(basis)
    gens = [bt * g * basis for g in amb.generators]
    return GradedCliffordModule(amb.degree, len(cols_e), len(cols_o), gens, amb.field, check=False)


def stable_universe(n: int, dim_cap: int, field: str = "R") -> Universe:
    irr = irreducible_graded_modules(n, field)
    d = min(m.dim for m in irr)
    return Universe(n, field, plain=max(1, math.ceil(dim_cap / d)), ext=1)


def pi0(ambient, dim_cap: int, field: str = "R") -> Pi0Result:
    """Connected components of the bounded-dimension object set of V_{-n}.

    ``ambient`` is a :class:`Universe` (or a degree n, in which case a stable
    one is built).  Objects up to isomorphism are multiplicity vectors; the
    generating morphisms are (inc, A): V -> V + (A + eps A) for extension
    blocks A + eps A = i(T).  Each edge is realized and validated in the
    ambient.  Components are labelled by their class in M_n / i M_{n+1}.
    """
    if isinstance(ambient, int):
        uni = stable_universe(ambient, dim_cap, field)
    elif isinstance(ambient, GradedCliffordModule):
        # a stable module is isomorphic to the standard stable universe
        mult = decompose(ambient, witness=False).multiplicities
        dims = [m.dim for m in irreducible_graded_modules(ambient.degree, ambient.field)]
        if any(k < math.ceil(dim_cap / d) for k, d in zip(mult, dims)):
            raise StabilityError("ambient is not stable up to the dimension cap")
        uni = stable_universe(ambient.degree, dim_cap, ambient.field)
    else:
        uni = ambient
    n = uni.degree
    irr = uni.irreducibles
    dims = [m.dim for m in irr]
    need = [math.ceil(dim_cap / d) for d in dims]
    plain_by_class = [[b for b in uni.blocks if b.type_id == ("plain", c)] for c in range(len(irr))]
    ext_by_type = [[b for b in uni.blocks if b.type_id == ("ext", c)] for c in range(len(uni.ext_types))]
    if any(len(p) < k for p, k in zip(plain_by_class, need)) or any(not e for e in ext_by_type):
        raise StabilityError("ambient is not stable up to the dimension cap")
    group = abs_quotient(n) if uni.field == "R" else abs_quotient_complex(n)
    ext_classes = [decompose(_module_on(uni.ambient, [blk[0]]), witness=False).multiplicities for blk in ext_by_type]
    # nodes
    nodes = []

    def rec(prefix, rem):
        if len(prefix) == len(dims):
            nodes.append(tuple(prefix))
            return
        d = dims[len(prefix)]
        for k in range(rem // d + 1):
            rec(prefix + [k], rem - k * d)

    rec([], dim_cap)
    index = {v: i for i, v in enumerate(nodes)}
    parent = list(range(len(nodes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    dom = uni.domain
    edges = 0
    for v in nodes:
        vblocks = [b for c, k in enumerate(v) for b in plain_by_class[c][:k]]
        pv = _zero(uni.ambient.dim, dom)
        for b in vblocks:
            pv = pv + b.projector
        for t, blk in enumerate(ext_by_type):
            w = tuple(a + b for a, b in zip(v, ext_classes[t]))
            if w not in index:
                continue
            wb = blk[0]
            target_blocks = vblocks + [wb]
            # realize and validate the morphism (inc, A)
            A = uni.positive_part(wb)
            mor = VnMorphism(uni.ambient, Subspace(pv), Subspace(pv + wb.projector), pv, Subspace(A))
            mor.validate()
            cls = decompose(_module_on(uni.ambient, target_blocks), witness=False).multiplicities
            if cls != w:
                raise CategoryError("invariants of V + W disagree with the multiplicity count")
            edges += 1
            a, b = find(index[v]), find(index[w])
            if a != b:
                parent[a] = b
    comps: dict = {}
    for v in nodes:
        comps.setdefault(find(index[v]), []).append(v)
    labels = {}
    bijective = True
    for root, members in comps.items():
        labs = {group.coords(m) for m in members}
        if len(labs) != 1:
            bijective = False
        labels[root] = labs.pop()
    if len(set(labels.values())) != len(labels):
        bijective = False
    addition_ok = True
    reps = {root: min(members, key=sum) for root, members in comps.items()}
    for r1, v1 in reps.items():
        for r2, v2 in reps.items():
            s = tuple(a + b for a, b in zip(v1, v2))
            if s in index:
                if labels[find(index[s])] != group.add(labels[r1], labels[r2]):
                    addition_ok = False
    return Pi0Result(n, uni.field, dim_cap, group, len(comps), labels, len(nodes), edges, bijective, addition_ok)


# ------------------------------------------------------------------ Tate coefficients


def tate_coefficients(n: int, k_window: Sequence[int], dim_cap: int | None = None, objects: dict | None = None, k0: int | None = None) -> list[QuotientGroup]:
    """Per-level component groups of the restricted product of V_n(H_k).

    Each level contributes the complex quotient group.  When ``objects`` (a
    map level -> object or dimension) is supplied, the restricted-product
    condition (zero below ``k0``) is enforced.  With ``dim_cap`` the complex
    group is certified once by a pi_0 computation.
    """
    k_min, k_max = int(k_window[0]), int(k_window[1])
    if k_min > k_max:
        raise TateError("empty level window")
    if objects is not None:
        bound = k0 if k0 is not None else k_min
        for k, v in objects.items():
            size = v.dim if isinstance(v, Subspace) else int(v)
            if k < bound and size:
                raise TateError(f"level {k} is below the bound {bound} but nonzero")
    group = abs_quotient_complex(n)
    if dim_cap is not None:
        res = pi0(n, dim_cap, "C")
        if not res.passed or not res.group.is_isomorphic(group):
            raise TateError("pi_0 certification of the complex quotient failed")
    return [group for _ in range(k_min, k_max + 1)]
