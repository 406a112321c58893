"""Maps between B-points of R^{0|1}, R^{1|1}, the super circle S and A.

A :class:`SuperMap` is stored in normal form ``base o eps**twist``: the grading
map ``eps`` is applied first, then the base map of the given kind.  Points
are tuples of Grassmann data:

* ``R01``: ``(eta,)``
* ``R11``: ``(w, eta)`` with ``w`` even
* ``S``:   ``(x, eta)`` with ``x`` a :class:`CircleValue`
* ``A``:   ``(x, w2, eta)`` with ``x`` a circle value and ``w2`` even

The circle coordinate on ``A`` is real in the body; the second coordinate is
complex in general, so maps into ``A`` want a complex algebra.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sympy import QQ

from ._exact import QQ_I, scalar
from .grassmann import CircleValue, GrassmannAlgebra, GrassmannElement, GrassmannHom

__all__ = [
    "SuperspaceError",
    "KINDS",
    "SuperMap",
    "TangentVector",
    "ReducedMap",
    "GenericMap",
    "apply",
    "compose",
    "pullback_check",
    "tangent_map",
    "reduce",
    "lift",
    "eps00",
    "eps11",
    "gamma",
    "tau",
    "eps_s",
    "eps_a",
    "tau_s",
    "nu",
    "kappa",
    "identity",
]


class SuperspaceError(ValueError):
    pass


# kind -> (domain, codomain, parameter names)
KINDS = {
    "Eps00": ("R01", "R01", ()),
    "Gamma": ("R01", "R11", ("z", "theta")),
    "Tau": ("R11", "R11", ("z", "theta")),
    "TauS": ("S", "S", ("x",)),
    "Nu": ("S", "A", ("x", "y", "theta")),
    "Kappa": ("A", "A", ("x", "y", "theta")),
}

# the remaining named kinds are aliases for twisted identity-like maps
_ALIASES = {"Eps11": "Tau", "EpsS": "TauS", "EpsA": "Kappa"}

_PARITY = {"z": 0, "y": 0, "theta": 1}


@dataclass(frozen=True, eq=False)
class SuperMap:
    kind: str
    params: tuple
    twist: bool
    algebra: GrassmannAlgebra

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SuperspaceError(f"unknown map kind {self.kind!r}")
        names = KINDS[self.kind][2]
        if len(self.params) != len(names):
            raise SuperspaceError(f"{self.kind} takes parameters {names}")
        for name, p in zip(names, self.params):
            if name == "x":
                if not isinstance(p, CircleValue):
                    raise SuperspaceError("x must be a CircleValue")
                if p.algebra != self.algebra:
                    raise SuperspaceError("parameter lives in another algebra")
                continue
            if not isinstance(p, GrassmannElement) or p.algebra != self.algebra:
                raise SuperspaceError(f"parameter {name} must be an element of {self.algebra}")
            if _PARITY[name] == 0 and not p.is_even():
                raise SuperspaceError(f"parameter {name} must be even")
            if _PARITY[name] == 1 and not p.is_odd():
                raise SuperspaceError(f"parameter {name} must be odd")

    @property
    def domain(self) -> str:
        return KINDS[self.kind][0]

    @property
    def codomain(self) -> str:
        return KINDS[self.kind][1]

    def param(self, name: str):
        return self.params[KINDS[self.kind][2].index(name)]

    def __eq__(self, other):
        return (
            isinstance(other, SuperMap)
            and self.kind == other.kind
            and self.twist == other.twist
            and self.algebra == other.algebra
            and all(a == b for a, b in zip(self.params, other.params))
        )

    def __hash__(self):
        return hash((self.kind, self.twist, self.params))

    def __repr__(self):
        ps = ", ".join(repr(p) for p in self.params)
        return f"{self.kind}({ps}){' o eps' if self.twist else ''}"

    def is_identity(self) -> bool:
        if self.kind == "Eps00":
            return self.twist
        if self.twist:
            return False
        return all((not p.body and not p.soul) if isinstance(p, CircleValue) else not p for p in self.params)

    def embed(self, algebra: GrassmannAlgebra) -> "SuperMap":
        return SuperMap(self.kind, tuple(p.embed(algebra) for p in self.params), self.twist, algebra)

    def base_change(self, f: GrassmannHom) -> "SuperMap":
        """Apply a Grassmann homomorphism to all parameters."""
        out = []
        for p in self.params:
            if isinstance(p, CircleValue):
                out.append(CircleValue(p.body, f(p.soul)))
            else:
                out.append(f(p))
        return SuperMap(self.kind, tuple(out), self.twist, f.target)

    # serialization
    def to_json(self) -> dict:
        params = {}
        for name, p in zip(KINDS[self.kind][2], self.params):
            if isinstance(p, CircleValue):
                params[name] = {"body": str(Fraction(int(p.body.numerator), int(p.body.denominator))), "soul": p.soul.to_json()}
            else:
                params[name] = p.to_json()
        return {
            "kind": self.kind,
            "twist": self.twist,
            "q": self.algebra.q,
            "field": self.algebra.field,
            "params": params,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data) -> "SuperMap":
        if isinstance(data, str):
            data = json.loads(data)
        alg = GrassmannAlgebra(int(data["q"]), data.get("field", "R"))
        kind = _ALIASES.get(data["kind"], data["kind"])
        params = []
        for name in KINDS[kind][2]:
            raw = data["params"][name]
            if name == "x":
                f = Fraction(raw["body"])
                params.append(CircleValue(QQ(f.numerator, f.denominator), GrassmannElement.from_json(raw["soul"])))
            else:
                params.append(GrassmannElement.from_json(raw))
        return cls(kind, tuple(params), bool(data["twist"]), alg)


# ------------------------------------------------------------ constructors


def _zero_params(kind: str, algebra: GrassmannAlgebra) -> tuple:
    out = []
    for name in KINDS[kind][2]:
        out.append(CircleValue.zero(algebra) if name == "x" else algebra.zero())
    return tuple(out)


def _circle(x, algebra) -> CircleValue:
    if isinstance(x, CircleValue):
        return x
    if isinstance(x, GrassmannElement):
        return CircleValue.make(x)
    return CircleValue.make(algebra.scalar(x))


def _el(v, algebra) -> GrassmannElement:
    return v if isinstance(v, GrassmannElement) else algebra.scalar(v)


def eps00(algebra: GrassmannAlgebra) -> SuperMap:
    return SuperMap("Eps00", (), False, algebra)


def eps11(algebra: GrassmannAlgebra) -> SuperMap:
    return SuperMap("Tau", _zero_params("Tau", algebra), True, algebra)


def eps_s(algebra: GrassmannAlgebra) -> SuperMap:
    return SuperMap("TauS", _zero_params("TauS", algebra), True, algebra)


def eps_a(algebra: GrassmannAlgebra) -> SuperMap:
    return SuperMap("Kappa", _zero_params("Kappa", algebra), True, algebra)


def gamma(z, theta, algebra: GrassmannAlgebra | None = None, twist: bool = False) -> SuperMap:
    algebra = algebra or z.algebra
    return SuperMap("Gamma", (_el(z, algebra), _el(theta, algebra)), twist, algebra)


def tau(z, theta, algebra: GrassmannAlgebra | None = None, twist: bool = False) -> SuperMap:
    algebra = algebra or z.algebra
    return SuperMap("Tau", (_el(z, algebra), _el(theta, algebra)), twist, algebra)


def tau_s(x, algebra: GrassmannAlgebra | None = None, twist: bool = False) -> SuperMap:
    algebra = algebra or x.algebra
    return SuperMap("TauS", (_circle(x, algebra),), twist, algebra)


def nu(x, y, theta, algebra: GrassmannAlgebra | None = None, twist: bool = False) -> SuperMap:
    algebra = algebra or y.algebra
    return SuperMap("Nu", (_circle(x, algebra), _el(y, algebra), _el(theta, algebra)), twist, algebra)


def kappa(x, y, theta, algebra: GrassmannAlgebra | None = None, twist: bool = False) -> SuperMap:
    algebra = algebra or y.algebra
    return SuperMap("Kappa", (_circle(x, algebra), _el(y, algebra), _el(theta, algebra)), twist, algebra)


def identity(space: str, algebra: GrassmannAlgebra) -> SuperMap:
    if space == "R01":
        return SuperMap("Eps00", (), True, algebra)
    kind = {"R11": "Tau", "S": "TauS", "A": "Kappa"}[space]
    return SuperMap(kind, _zero_params(kind, algebra), False, algebra)


# ------------------------------------------------------------------ apply


def _half(algebra):
    return scalar(algebra.domain, Fraction(1, 2))


def _i_half(algebra):
    if algebra.domain != QQ_I:
        raise SuperspaceError("maps into A need a complex Grassmann algebra")
    return QQ_I(0, QQ(1, 2))


def _check_point(space: str, p: Sequence, algebra: GrassmannAlgebra):
    sizes = {"R01": 1, "R11": 2, "S": 2, "A": 3}
    if len(p) != sizes[space]:
        raise SuperspaceError(f"a point of {space} has {sizes[space]} coordinates")
    eta = p[-1]
    if not isinstance(eta, GrassmannElement) or eta.algebra != algebra or not eta.is_odd():
        raise SuperspaceError("odd coordinate has the wrong parity or algebra")
    if space in ("R11",):
        if not isinstance(p[0], GrassmannElement) or not p[0].is_even():
            raise SuperspaceError("even coordinate has the wrong parity")
    if space in ("S", "A"):
        if not isinstance(p[0], CircleValue):
            raise SuperspaceError("circle coordinate must be a CircleValue")
    if space == "A" and (not isinstance(p[1], GrassmannElement) or not p[1].is_even()):
        raise SuperspaceError("even coordinate has the wrong parity")


def _eps_point(p: tuple) -> tuple:
    return tuple(p[:-1]) + (-p[-1],)


def apply(m: SuperMap, p: Sequence) -> tuple:
    """Evaluate the map on a B-point."""
    if isinstance(m, GenericMap):
        return m.evaluate(p)
    alg = m.algebra
    _check_point(m.domain, p, alg)
    p = tuple(p)
    if m.twist:
        p = _eps_point(p)
    k = m.kind
    if k == "Eps00":
        return (-p[0],)
    if k == "Gamma":
        z, th = m.params
        (eta,) = p
        return (z - th * eta, th + eta)
    if k == "Tau":
        z, th = m.params
        w, eta = p
        return (w + z - th * eta, th + eta)
    if k == "TauS":
        (x,) = m.params
        w, eta = p
        return (w + x, eta)
    h = _half(alg)
    ih = _i_half(alg)
    x, y, th = m.params
    if k == "Nu":
        w, eta = p
        te = th * eta
        return (w + x + (-(te * h)), y - te * ih, th + eta)
    w, w2, eta = p
    te = th * eta
    return (w + x + (-(te * h)), w2 + y - te * ih, th + eta)


# ---------------------------------------------------------------- compose


def _conj_eps(m: SuperMap) -> SuperMap:
    """eps o base o eps for the base map (theta changes sign)."""
    names = KINDS[m.kind][2]
    params = tuple(-p if n == "theta" else p for n, p in zip(names, m.params))
    return SuperMap(m.kind, params, m.twist, m.algebra)


def compose(m2: SuperMap, m1: SuperMap) -> SuperMap:
    """m2 o m1 in normal form."""
    if m1.codomain != m2.domain:
        raise SuperspaceError(f"cannot compose {m2.kind} after {m1.kind}: {m1.codomain} != {m2.domain}")
    if m1.algebra != m2.algebra:
        raise SuperspaceError("maps live over different Grassmann algebras")
    alg = m1.algebra
    # m2 = b2 e^t2, m1 = b1 e^t1  =>  m2 m1 = b2 (e^t2 b1 e^t2) e^(t1+t2)
    if m1.kind == "Eps00":
        # b1 = eps, so m1 = eps^(1+t1)
        twist = (m2.twist + 1 + m1.twist) % 2 == 1
        if m2.kind == "Eps00":
            return SuperMap("Eps00", (), twist, alg)
        return SuperMap(m2.kind, m2.params, twist, alg)
    b1 = _conj_eps(m1) if m2.twist else m1
    twist = m1.twist != m2.twist
    k2, k1 = m2.kind, m1.kind
    if k2 == "Tau" and k1 in ("Tau", "Gamma"):
        z2, t2 = m2.params
        z1, t1 = b1.params
        return SuperMap(k1, (z1 + z2 - t2 * t1, t1 + t2), twist, alg)
    if k2 in ("TauS", "Nu", "Kappa") and k1 == "TauS":
        (x1,) = b1.params
        p2 = list(m2.params)
        p2[0] = p2[0] + x1
        return SuperMap(k2, tuple(p2), twist, alg)
    if k2 == "Kappa" and k1 in ("Nu", "Kappa"):
        x2, y2, t2 = m2.params
        x1, y1, t1 = b1.params
        tt = t2 * t1
        h = _half(alg)
        ih = _i_half(alg)
        return SuperMap(k1, (x1 + x2 + (-(tt * h)), y1 + y2 - tt * ih, t1 + t2), twist, alg)
    raise SuperspaceError(f"no composition rule for {k2} o {k1}")


# --------------------------------------------------------------- tangents


@dataclass(frozen=True)
class TangentVector:
    base: tuple
    disp: tuple


_FORMS = {
    # name: (space, evaluator)
    "lambda_dlambda": "R01",
    "ds+lambda_dlambda": "R11",
    "S:ds": "S",
    "S:omega": "S",
    "A:omega1": "A",
    "A:omega2": "A",
}

# default form pairs (target form, source form) per kind
_FORM_PAIRS = {
    "Eps00": [("lambda_dlambda", "lambda_dlambda")],
    "Gamma": [("ds+lambda_dlambda", "lambda_dlambda")],
    "Tau": [("ds+lambda_dlambda", "ds+lambda_dlambda")],
    "TauS": [("S:ds", "S:ds"), ("S:omega", "S:omega")],
    "Nu": [("A:omega1", "S:ds"), ("A:omega2", "S:omega")],
    "Kappa": [("A:omega1", "A:omega1"), ("A:omega2", "A:omega2")],
}


def default_forms(m) -> list[tuple[str, str]]:
    return list(_FORM_PAIRS["Tau" if isinstance(m, GenericMap) else m.kind])


def _eval_form(name: str, tv: TangentVector, algebra: GrassmannAlgebra) -> GrassmannElement:
    b, d = tv.base, tv.disp
    if name == "lambda_dlambda":
        return b[0] * d[0]
    if name in ("ds+lambda_dlambda", "S:omega"):
        return d[0] + b[1] * d[1]
    if name == "S:ds":
        return d[0]
    i = algebra.scalar(QQ_I(0, 1)) if algebra.domain == QQ_I else None
    if i is None:
        raise SuperspaceError("forms on A need a complex algebra")
    if name == "A:omega1":
        return d[0] + i * d[1]
    if name == "A:omega2":
        return d[0] - i * d[1] + b[2] * d[2]
    raise SuperspaceError(f"unknown form {name!r}")


def _ab_part(x: GrassmannElement, small: GrassmannAlgebra) -> GrassmannElement:
    """Coefficient of t = a b, with a, b the two top generators."""
    q = x.algebra.q
    ab = (1 << (q - 1)) | (1 << (q - 2))
    terms = {}
    for m, c in x.terms.items():
        if m & ab == ab:
            terms[m & ~ab] = c
    return GrassmannElement(small, terms)


def _no_ab(x: GrassmannElement, small: GrassmannAlgebra) -> GrassmannElement:
    q = x.algebra.q
    ab = (1 << (q - 1)) | (1 << (q - 2))
    return GrassmannElement(small, {m: c for m, c in x.terms.items() if not m & ab})


def _coord_value(c):
    return c.representative() if isinstance(c, CircleValue) else c


def tangent_map(m, tv: TangentVector) -> TangentVector:
    """Push a tangent vector forward along m (exact linearisation)."""
    small = tv.base[-1].algebra
    big = small.extended(2)
    a, b = big.generator(small.q), big.generator(small.q + 1)
    t = a * b
    moved = []
    for c, dc in zip(tv.base, tv.disp):
        if isinstance(c, CircleValue):
            moved.append(c.embed(big) + t * dc.embed(big))
        else:
            moved.append(c.embed(big) + t * dc.embed(big))
    mb = m.embed(big)
    img = apply(mb, tuple(moved))
    base = []
    disp = []
    for c in img:
        v = _coord_value(c)
        disp.append(_ab_part(v, small))
        if isinstance(c, CircleValue):
            base.append(CircleValue(c.body, _no_ab(c.soul, small)))
        else:
            base.append(_no_ab(v, small))
    return TangentVector(tuple(base), tuple(disp))


def _probe_points(space: str, alg: GrassmannAlgebra, samples: Sequence):
    """Symbolic tangent vectors: eta and d-eta are fresh odd generators."""
    eta = alg.generator(alg.q - 2)
    deta = alg.generator(alg.q - 1)
    zero = alg.zero()
    one = alg.one()
    out = []
    for s in samples:
        if space == "R01":
            out.append(TangentVector((eta,), (deta,)))
            continue
        w = alg.scalar(s)
        if space == "R11":
            bases = [(w, eta)]
            evens = [(one, zero)]
        elif space == "S":
            bases = [(CircleValue.make(w), eta)]
            evens = [(one, zero)]
        else:
            bases = [(CircleValue.make(w), alg.scalar(Fraction(1, 3)) + w, eta)]
            evens = [(one, zero, zero), (zero, one, zero)]
        for base in bases:
            for ev in evens:
                out.append(TangentVector(base, ev))
            zeros_even = tuple(zero for _ in range(len(base) - 1))
            out.append(TangentVector(base, zeros_even + (deta,)))
    return out


def pullback_check(m, form_pairs: Sequence[tuple[str, str]] | None = None, samples: Sequence | None = None) -> bool:
    """Whether m pulls each target form back to the paired source form.

    The check runs on symbolic tangent vectors: the odd coordinate and the
    odd displacement are fresh generators, the even displacement runs over a
    basis, and the even coordinate runs over enough rational samples to pin
    down a polynomial identity.
    """
    form_pairs = list(form_pairs or default_forms(m))
    deg = m.degree() if isinstance(m, GenericMap) else 1
    samples = list(samples or [Fraction(j, 1) for j in range(deg + 2)])
    alg = m.algebra
    big = alg.extended(2)
    mb = m.embed(big)
    for tv in _probe_points(m.domain, big, samples):
        pushed = tangent_map(mb, tv)
        for target, source in form_pairs:
            if _FORMS[target] != m.codomain or _FORMS[source] != m.domain:
                raise SuperspaceError(f"form pair ({target}, {source}) does not fit {m.domain}->{m.codomain}")
            if _eval_form(target, pushed, big) != _eval_form(source, tv, big):
                return False
    return True


# ------------------------------------------------------------- reductions


@dataclass(frozen=True)
class ReducedMap:
    """Map of reduced manifolds: pad the input coordinates, then shift.

    Spaces: ``pt`` (R^0), ``R``, ``S1`` (R/Z) and ``A`` (R/Z x R).  The first
    coordinate of ``S1`` and ``A`` is taken mod 1.
    """

    domain: str
    codomain: str
    shift: tuple

    def __post_init__(self):
        if self.codomain in ("S1", "A"):
            vals = list(self.shift)
            vals[0] = _frac_mod1(vals[0])
            object.__setattr__(self, "shift", tuple(vals))

    def __call__(self, point: tuple) -> tuple:
        padded = tuple(point) + (0,) * (len(self.shift) - len(point))
        out = tuple(a + b for a, b in zip(padded, self.shift))
        if self.codomain in ("S1", "A"):
            out = (_frac_mod1(out[0]),) + out[1:]
        return out

    def compose(self, first: "ReducedMap") -> "ReducedMap":
        if first.codomain != self.domain:
            raise SuperspaceError("reduced maps are not composable")
        padded = tuple(first.shift) + (0,) * (len(self.shift) - len(first.shift))
        return ReducedMap(first.domain, self.codomain, tuple(a + b for a, b in zip(padded, self.shift)))


def _frac_mod1(v):
    if isinstance(v, Fraction):
        return v - (v.numerator // v.denominator)
    return v


_RED_SPACE = {"R01": "pt", "R11": "R", "S": "S1", "A": "A"}


class _C(tuple):
    """Exact complex rational (re, im) with componentwise addition."""

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return _C((self[0] + other, self[1]))
        return _C((self[0] + other[0], self[1] + other[1]))

    __radd__ = __add__


def _body_value(p):
    if isinstance(p, CircleValue):
        return Fraction(int(p.body.numerator), int(p.body.denominator))
    b = p.body()
    if p.algebra.domain == QQ_I:
        return _C((Fraction(int(b.x.numerator), int(b.x.denominator)), Fraction(int(b.y.numerator), int(b.y.denominator))))
    return Fraction(int(b.numerator), int(b.denominator))


def reduce(m) -> ReducedMap:
    """The underlying map of reduced manifolds (body data only)."""
    if isinstance(m, GenericMap):
        m = m.classify()
    dom, cod = _RED_SPACE[m.domain], _RED_SPACE[m.codomain]
    k = m.kind
    if k == "Eps00":
        return ReducedMap(dom, cod, ())
    if k in ("Gamma", "Tau", "TauS"):
        return ReducedMap(dom, cod, (_body_value(m.params[0]),))
    x, y, _ = m.params
    return ReducedMap(dom, cod, (_body_value(x), _body_value(y)))


def lift(m: SuperMap) -> SuperMap:
    """The body-parameter map l(m): souls and odd parameters dropped."""
    alg = m.algebra
    out = []
    for name, p in zip(KINDS[m.kind][2], m.params):
        if isinstance(p, CircleValue):
            out.append(p.lifted())
        elif name == "theta":
            out.append(alg.zero())
        else:
            out.append(alg.scalar(p.body()))
    return SuperMap(m.kind, tuple(out), m.twist, alg)


# ----------------------------------------------------------- generic maps


@dataclass(frozen=True, eq=False)
class GenericMap:
    """(w, eta) -> (a(w) + b(w) eta, c(w) + d(w) eta) on R^{1|1}.

    Each of a, b, c, d is a list of coefficients of a polynomial in w.
    """

    a: tuple
    b: tuple
    c: tuple
    d: tuple
    algebra: GrassmannAlgebra

    domain = "R11"
    codomain = "R11"

    def degree(self) -> int:
        return max(len(self.a), len(self.b), len(self.c), len(self.d)) - 1

    def _poly(self, coeffs, w):
        out = self.algebra.zero() if not coeffs else coeffs[0].algebra.zero()
        power = None
        for j, cf in enumerate(coeffs):
            power = w.algebra.one() if j == 0 else power * w
            out = out + cf * power
        return out

    def embed(self, algebra: GrassmannAlgebra) -> "GenericMap":
        return GenericMap(*(tuple(x.embed(algebra) for x in part) for part in (self.a, self.b, self.c, self.d)), algebra)

    def evaluate(self, p: Sequence) -> tuple:
        w, eta = p
        return (self._poly(self.a, w) + self._poly(self.b, w) * eta, self._poly(self.c, w) + self._poly(self.d, w) * eta)

    def classify(self) -> SuperMap:
        """Match against tau_{z,theta} and tau_{z,theta} eps or raise."""
        alg = self.algebra
        zero = alg.zero()

        def coeff(seq, j):
            return seq[j] if j < len(seq) else zero

        deg = self.degree()
        for j in range(2, deg + 1):
            if coeff(self.a, j):
                raise SuperspaceError("even component is not affine in w")
        for seq in (self.b, self.c, self.d):
            for j in range(1, deg + 1):
                if coeff(seq, j):
                    raise SuperspaceError("odd data depends on w; no normal form")
        if coeff(self.a, 1) != alg.one():
            raise SuperspaceError("w coefficient must be 1")
        z, b0, th, d0 = coeff(self.a, 0), coeff(self.b, 0), coeff(self.c, 0), coeff(self.d, 0)
        if d0 == alg.one():
            twist = False
        elif d0 == -alg.one():
            twist = True
        else:
            raise SuperspaceError("eta coefficient must be +1 or -1")
        if not (z.is_even() and th.is_odd() and b0.is_odd()):
            raise SuperspaceError("parameters have the wrong parity")
        if b0 != (th if twist else -th):
            raise SuperspaceError("odd coupling does not match the tau family")
        return SuperMap("Tau", (z, th), twist, alg)
