"""Finitely generated Grassmann algebras with exact coefficients.

An element of the exterior algebra on ``q`` odd generators is stored as a
sparse map from generator subsets (encoded as bitmasks) to coefficients in a
sympy domain.  The default domains are ``QQ`` (real) and ``QQ_I`` (complex);
any commutative sympy domain works, which the field-theory module uses to
carry a formal transcendental.

The monomial for a mask is the product of its generators in increasing index
order, so ``theta_0 * theta_1`` has mask ``0b11`` and coefficient ``+1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from sympy import QQ

from ._exact import QQ_I, domain_field, field_domain, scalar, conj, scalar_to_str, scalar_from_str

__all__ = [
    "MAX_GENERATORS",
    "GrassmannError",
    "GrassmannAlgebra",
    "GrassmannElement",
    "GrassmannHom",
    "CircleValue",
    "multiply",
    "body",
    "exp_nilpotent_even",
    "mask_to_subset",
    "subset_to_mask",
]

MAX_GENERATORS = 16


class GrassmannError(ValueError):
    pass


def mask_to_subset(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def subset_to_mask(subset: Iterable[int]) -> int:
    mask = 0
    for i in subset:
        bit = 1 << int(i)
        if mask & bit:
            raise GrassmannError(f"repeated generator {i} in subset")
        mask |= bit
    return mask


@lru_cache(maxsize=1 << 16)
def _sign(a: int, b: int) -> int:
    """Sign of e_a e_b reordered into increasing order (a, b disjoint)."""
    swaps = 0
    j = 0
    bb = b
    while bb:
        if bb & 1:
            swaps += bin(a >> (j + 1)).count("1")
        bb >>= 1
        j += 1
    return -1 if swaps & 1 else 1


class GrassmannAlgebra:
    """The exterior algebra on ``q`` generators over a sympy domain."""

    __slots__ = ("q", "domain")

    def __init__(self, q: int, field: str = "R", domain=None):
        if q < 0:
            raise GrassmannError("generator count must be non-negative")
        if q > MAX_GENERATORS:
            raise GrassmannError(f"generator count {q} exceeds the cap {MAX_GENERATORS}")
        self.q = q
        self.domain = domain if domain is not None else field_domain(field)

    @property
    def field(self) -> str:
        return domain_field(self.domain)

    @property
    def is_complex(self) -> bool:
        return self.domain != QQ

    def __eq__(self, other):
        return isinstance(other, GrassmannAlgebra) and self.q == other.q and self.domain == other.domain

    def __hash__(self):
        return hash((self.q, str(self.domain)))

    def __repr__(self):
        return f"GrassmannAlgebra(q={self.q}, domain={self.domain})"

    # constructors
    def element(self, terms: Mapping[int, object]) -> "GrassmannElement":
        dom = self.domain
        full = (1 << self.q) - 1
        clean = {}
        for m, c in terms.items():
            if m & ~full:
                raise GrassmannError(f"mask {m:b} uses generators beyond q={self.q}")
            c = scalar(dom, c)
            if c:
                clean[m] = c
        return GrassmannElement(self, clean)

    def zero(self) -> "GrassmannElement":
        return GrassmannElement(self, {})

    def one(self) -> "GrassmannElement":
        return self.scalar(1)

    def scalar(self, c) -> "GrassmannElement":
        return self.element({0: c})

    def generator(self, i: int) -> "GrassmannElement":
        if not 0 <= i < self.q:
            raise GrassmannError(f"generator index {i} out of range for q={self.q}")
        return GrassmannElement(self, {1 << i: self.domain.one})

    def generators(self) -> list["GrassmannElement"]:
        return [self.generator(i) for i in range(self.q)]

    def monomial(self, subset: Iterable[int], coeff=1) -> "GrassmannElement":
        """Coefficient times the ordered product of the listed generators."""
        subset = list(subset)
        c = scalar(self.domain, coeff)
        sign = 1
        mask = 0
        for i in subset:
            bit = 1 << i
            if mask & bit:
                return self.zero()
            sign *= _sign(mask, bit)
            mask |= bit
        return self.element({mask: c if sign > 0 else -c})

    def extended(self, extra: int) -> "GrassmannAlgebra":
        return GrassmannAlgebra(self.q + extra, domain=self.domain)

    def with_domain(self, domain) -> "GrassmannAlgebra":
        return GrassmannAlgebra(self.q, domain=domain)


class GrassmannElement:
    """Immutable element of a :class:`GrassmannAlgebra`."""

    __slots__ = ("algebra", "terms", "_hash")

    def __init__(self, algebra: GrassmannAlgebra, terms: dict):
        self.algebra = algebra
        self.terms = terms
        self._hash = None

    # coercion
    def _coerce(self, other) -> "GrassmannElement":
        if isinstance(other, GrassmannElement):
            if other.algebra != self.algebra:
                raise GrassmannError(f"algebra mismatch: {self.algebra} vs {other.algebra}")
            return other
        return self.algebra.scalar(other)

    # arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            v = c if v is None else v + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return GrassmannElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannElement(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, GrassmannElement):
            c = scalar(self.algebra.domain, other)
            if not c:
                return self.algebra.zero()
            return GrassmannElement(self.algebra, {m: v * c for m, v in self.terms.items()})
        return multiply(self, other)

    def __rmul__(self, other):
        # scalars commute with everything
        return self.__mul__(other)

    def __pow__(self, k: int):
        if k < 0:
            raise GrassmannError("negative powers are not supported")
        out = self.algebra.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, GrassmannElement):
            return self.algebra == other.algebra and self.terms == other.terms
        try:
            return self == self.algebra.scalar(other)
        except (TypeError, ValueError, GrassmannError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.algebra, frozenset((m, str(c)) for m, c in self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda k: (bin(k).count("1"), k)):
            c = self.terms[m]
            mono = "*".join(f"t{i}" for i in mask_to_subset(m))
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # structure
    def coefficient(self, subset: Iterable[int] | int):
        mask = subset if isinstance(subset, int) else subset_to_mask(subset)
        return self.terms.get(mask, self.algebra.domain.zero)

    def body(self):
        return self.terms.get(0, self.algebra.domain.zero)

    def soul(self) -> "GrassmannElement":
        return GrassmannElement(self.algebra, {m: c for m, c in self.terms.items() if m})

    def even(self) -> "GrassmannElement":
        return GrassmannElement(self.algebra, {m: c for m, c in self.terms.items() if not bin(m).count("1") & 1})

    def odd(self) -> "GrassmannElement":
        return GrassmannElement(self.algebra, {m: c for m, c in self.terms.items() if bin(m).count("1") & 1})

    def is_even(self) -> bool:
        return all(not bin(m).count("1") & 1 for m in self.terms)

    def is_odd(self) -> bool:
        return all(bin(m).count("1") & 1 for m in self.terms)

    def parity(self):
        """0 for even, 1 for odd, None when inhomogeneous (zero counts as even)."""
        if self.is_even():
            return 0
        if self.is_odd():
            return 1
        return None

    def is_scalar(self) -> bool:
        return all(m == 0 for m in self.terms)

    def grade_part(self, k: int) -> "GrassmannElement":
        return GrassmannElement(self.algebra, {m: c for m, c in self.terms.items() if bin(m).count("1") == k})

    def parity_flip(self) -> "GrassmannElement":
        """The grading automorphism: odd parts change sign."""
        return self.even() - self.odd()

    def conjugate(self) -> "GrassmannElement":
        """Conjugate every coefficient; monomials are left as they are."""
        dom = self.algebra.domain
        return GrassmannElement(self.algebra, {m: conj(dom, c) for m, c in self.terms.items()})

    def map_coefficients(self, fn, algebra: GrassmannAlgebra | None = None) -> "GrassmannElement":
        alg = algebra or self.algebra
        return alg.element({m: fn(c) for m, c in self.terms.items()})

    def embed(self, algebra: GrassmannAlgebra) -> "GrassmannElement":
        """Same element viewed in a larger algebra (first generators shared)."""
        if algebra.q < self.algebra.q:
            raise GrassmannError("target algebra has fewer generators")
        dom = algebra.domain
        src = self.algebra.domain
        if dom == src:
            return GrassmannElement(algebra, dict(self.terms))
        return GrassmannElement(algebra, {m: dom.convert_from(c, src) for m, c in self.terms.items()})

    # serialization
    def to_json(self) -> dict:
        dom = self.algebra.domain
        terms = []
        for m in sorted(self.terms):
            re, im = scalar_to_str(dom, self.terms[m])
            terms.append({"subset": list(mask_to_subset(m)), "re": re, "im": im})
        return {"q": self.algebra.q, "field": self.algebra.field, "terms": terms}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data) -> "GrassmannElement":
        if isinstance(data, str):
            data = json.loads(data)
        alg = GrassmannAlgebra(int(data["q"]), data.get("field", "R"))
        out = alg.zero()
        for t in data["terms"]:
            c = scalar_from_str(alg.domain, str(t.get("re", "0")), str(t.get("im", "0")))
            out = out + alg.monomial(t["subset"], c)
        return out


def multiply(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    if a.algebra != b.algebra:
        raise GrassmannError(f"algebra mismatch: {a.algebra} vs {b.algebra}")
    out: dict = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            if ma & mb:
                continue
            v = ca * cb
            if _sign(ma, mb) < 0:
                v = -v
            m = ma | mb
            prev = out.get(m)
            out[m] = v if prev is None else prev + v
    return GrassmannElement(a.algebra, {m: c for m, c in out.items() if c})


def body(a: GrassmannElement):
    return a.body()


def exp_nilpotent_even(a: GrassmannElement) -> GrassmannElement:
    """exp(a) for an even element with vanishing body (a finite sum)."""
    if not a.is_even():
        raise GrassmannError("exp_nilpotent_even needs an even element")
    if a.body():
        raise GrassmannError("exp_nilpotent_even needs zero body (element is not nilpotent)")
    alg = a.algebra
    out = alg.one()
    term = alg.one()
    k = 0
    while True:
        k += 1
        term = term * a
        if not term:
            return out
        term = term * QQ(1, k)
        out = out + term


class GrassmannHom:
    """Algebra homomorphism fixed by images of generators (each image odd).

    Models the base change ``f*`` along a map of super points.
    """

    def __init__(self, source: GrassmannAlgebra, target: GrassmannAlgebra, images: list[GrassmannElement]):
        if len(images) != source.q:
            raise GrassmannError("need one image per source generator")
        for im in images:
            if im.algebra != target:
                raise GrassmannError("image lives in the wrong algebra")
            if not im.is_odd():
                raise GrassmannError("generator images must be odd")
        if source.domain != target.domain:
            raise GrassmannError("domains differ")
        self.source = source
        self.target = target
        self.images = list(images)

    def __call__(self, a: GrassmannElement) -> GrassmannElement:
        if a.algebra != self.source:
            raise GrassmannError("argument not in the source algebra")
        out = self.target.zero()
        for m, c in a.terms.items():
            mono = self.target.one()
            for i in mask_to_subset(m):
                mono = mono * self.images[i]
            out = out + mono * c
        return out


def _mod1(v):
    """Fractional part of a rational, as a QQ element in [0, 1)."""
    f = Fraction(int(v.numerator), int(v.denominator))
    f = f - (f.numerator // f.denominator)
    return QQ(f.numerator, f.denominator)


@dataclass(frozen=True, eq=False)
class CircleValue:
    """x in Lambda^even / Z: rational body mod 1 plus a nilpotent even soul."""

    body: object
    soul: GrassmannElement

    def __post_init__(self):
        s = self.soul
        if s.body():
            raise GrassmannError("circle soul must have zero body")
        if not s.is_even():
            raise GrassmannError("circle soul must be even")
        b = self.body
        if not QQ.of_type(b):
            b = scalar(QQ, b)
        object.__setattr__(self, "body", _mod1(b))

    @classmethod
    def make(cls, value: GrassmannElement) -> "CircleValue":
        """Reduce an even element with real rational body modulo Z."""
        b = value.body()
        dom = value.algebra.domain
        if dom == QQ_I:
            if b.y:
                raise GrassmannError("circle body must be real")
            b = b.x
        elif dom != QQ:
            b = scalar(QQ, dom.to_sympy(b))
        return cls(b, value.soul())

    @classmethod
    def zero(cls, algebra: GrassmannAlgebra) -> "CircleValue":
        return cls(QQ(0), algebra.zero())

    @property
    def algebra(self) -> GrassmannAlgebra:
        return self.soul.algebra

    def representative(self) -> GrassmannElement:
        """The lift with body in [0, 1)."""
        alg = self.algebra
        return self.soul + alg.scalar(self.body)

    def __add__(self, other):
        if isinstance(other, CircleValue):
            return CircleValue(self.body + other.body, self.soul + other.soul)
        other = self.soul._coerce(other)
        return CircleValue.make(self.representative() + other)

    __radd__ = __add__

    def __neg__(self):
        return CircleValue(-self.body, -self.soul)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, CircleValue) and self.body == other.body and self.soul == other.soul

    def __hash__(self):
        return hash((str(self.body), self.soul))

    def __repr__(self):
        return f"CircleValue({self.body} mod 1, soul={self.soul!r})"

    def embed(self, algebra: GrassmannAlgebra) -> "CircleValue":
        return CircleValue(self.body, self.soul.embed(algebra))

    def lifted(self) -> "CircleValue":
        return CircleValue(self.body, self.algebra.zero())
