"""Exact linear algebra helpers over sympy domains (QQ, QQ_I and friends).

Everything here works on dense ``DomainMatrix`` values.  The helpers are thin
wrappers so the rest of the package can stay agnostic about whether the
scalars are rationals or Gaussian rationals.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from sympy import QQ, QQ_I, Rational, sympify
from sympy.polys.matrices import DomainMatrix

__all__ = [
    "QQ",
    "QQ_I",
    "field_domain",
    "domain_field",
    "scalar",
    "conj",
    "mat",
    "eye",
    "zeros",
    "adjoint",
    "block_diag",
    "hstack",
    "vstack",
    "is_zero",
    "column_basis",
    "projector",
    "to_numpy",
    "scalar_to_complex",
    "scalar_to_str",
    "scalar_from_str",
    "kron",
    "trace",
    "rank",
]


def field_domain(field: str):
    if field in ("R", "real", "Real"):
        return QQ
    if field in ("C", "complex", "Complex"):
        return QQ_I
    raise ValueError(f"unknown scalar field {field!r}")


def domain_field(dom) -> str:
    if dom == QQ:
        return "R"
    if dom == QQ_I:
        return "C"
    raise ValueError(f"domain {dom} has no field tag")


def scalar(dom, x):
    """Coerce ``x`` (int, Fraction, str, sympy number, domain element) into ``dom``."""
    if isinstance(x, bool):
        x = int(x)
    try:
        if dom.of_type(x):
            return x
    except TypeError:
        pass
    if isinstance(x, int):
        return dom(x)
    if isinstance(x, Fraction):
        return dom.convert_from(QQ(x.numerator, x.denominator), QQ)
    if isinstance(x, str):
        return scalar_from_str(dom, x)
    if isinstance(x, complex):
        raise TypeError("floating complex values are not exact scalars")
    if isinstance(x, float):
        raise TypeError("floats are not exact scalars")
    if QQ.of_type(x):
        return dom.convert_from(x, QQ)
    if QQ_I.of_type(x):
        return dom.convert_from(x, QQ_I)
    return dom.from_sympy(sympify(x))


def conj(dom, x):
    """Complex conjugate of a scalar of ``dom``."""
    if dom == QQ_I:
        return QQ_I(x.x, -x.y)
    if dom == QQ:
        return x
    conj_hook = getattr(dom, "_superko_conj", None)
    if conj_hook is not None:
        return conj_hook(x)
    raise TypeError(f"no conjugation on domain {dom}")


def mat(rows: Sequence[Sequence], dom) -> DomainMatrix:
    rows = [list(r) for r in rows]
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    return DomainMatrix([[scalar(dom, v) for v in r] for r in rows], (nr, nc), dom)


def eye(n: int, dom) -> DomainMatrix:
    return DomainMatrix.eye(n, dom).to_dense()


def zeros(r: int, c: int, dom) -> DomainMatrix:
    return DomainMatrix.zeros((r, c), dom).to_dense()


def adjoint(m: DomainMatrix) -> DomainMatrix:
    """Conjugate transpose."""
    dom = m.domain
    t = m.transpose()
    if dom == QQ:
        return t
    return t.applyfunc(lambda v: conj(dom, v), dom)


def block_diag(blocks: Iterable[DomainMatrix], dom) -> DomainMatrix:
    blocks = list(blocks)
    n = sum(b.shape[0] for b in blocks)
    m = sum(b.shape[1] for b in blocks)
    rows = [[dom.zero] * m for _ in range(n)]
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.to_list()):
            for j, v in enumerate(row):
                rows[r0 + i][c0 + j] = v
        r0 += b.shape[0]
        c0 += b.shape[1]
    return DomainMatrix(rows, (n, m), dom)


def hstack(mats: Sequence[DomainMatrix], nrows: int, dom) -> DomainMatrix:
    mats = [x for x in mats if x.shape[1]]
    if not mats:
        return zeros(nrows, 0, dom)
    rows = [[] for _ in range(nrows)]
    for x in mats:
        for i, r in enumerate(x.to_list()):
            rows[i].extend(r)
    return DomainMatrix(rows, (nrows, sum(x.shape[1] for x in mats)), dom)


def vstack(mats: Sequence[DomainMatrix], ncols: int, dom) -> DomainMatrix:
    rows = []
    for x in mats:
        rows.extend(x.to_list())
    return DomainMatrix(rows, (len(rows), ncols), dom) if rows else zeros(0, ncols, dom)


def is_zero(m: DomainMatrix) -> bool:
    return m.is_zero_matrix


def column_basis(m: DomainMatrix) -> DomainMatrix:
    """Independent columns of ``m`` spanning its column space."""
    n, c = m.shape
    if c == 0 or m.is_zero_matrix:
        return zeros(n, 0, m.domain)
    _, pivots = m.rref()
    if not pivots:
        return zeros(n, 0, m.domain)
    cols = m.to_list()
    return DomainMatrix([[row[j] for j in pivots] for row in cols], (n, len(pivots)), m.domain)


def projector(basis: DomainMatrix) -> DomainMatrix:
    """Orthogonal projector onto the column space of ``basis``."""
    n = basis.shape[0]
    dom = basis.domain
    b = column_basis(basis)
    if b.shape[1] == 0:
        return zeros(n, n, dom)
    bh = adjoint(b)
    gram = bh * b
    return b * gram.inv() * bh


def kron(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
    dom = a.domain
    ar, ac = a.shape
    br, bc = b.shape
    al, bl = a.to_list(), b.to_list()
    rows = [[al[i // br][j // bc] * bl[i % br][j % bc] for j in range(ac * bc)] for i in range(ar * br)]
    return DomainMatrix(rows, (ar * br, ac * bc), dom)


def trace(m: DomainMatrix):
    dom = m.domain
    total = dom.zero
    for i, row in enumerate(m.to_list()):
        total += row[i]
    return total


def rank(m: DomainMatrix) -> int:
    if m.shape[0] == 0 or m.shape[1] == 0:
        return 0
    return m.rank()


def scalar_to_complex(dom, x) -> complex:
    if dom == QQ:
        return complex(float(x), 0.0)
    if dom == QQ_I:
        return complex(float(x.x), float(x.y))
    hook = getattr(dom, "_superko_float", None)
    if hook is not None:
        return hook(x)
    return complex(dom.to_sympy(x).evalf())


def to_numpy(m: DomainMatrix) -> np.ndarray:
    dom = m.domain
    out = np.array([[scalar_to_complex(dom, v) for v in row] for row in m.to_list()], dtype=complex)
    out = out.reshape(m.shape)
    if dom == QQ:
        return out.real.copy()
    return out


def _q_str(v) -> str:
    return str(Rational(int(v.numerator), int(v.denominator)))


def scalar_to_str(dom, x) -> tuple[str, str]:
    """(real, imaginary) parts as exact ``p/q`` strings."""
    if dom == QQ:
        return _q_str(x), "0"
    if dom == QQ_I:
        return _q_str(x.x), _q_str(x.y)
    raise TypeError(f"domain {dom} is not serializable")


def scalar_from_str(dom, re: str, im: str = "0"):
    r = Fraction(re)
    i = Fraction(im)
    if dom == QQ:
        if i:
            raise ValueError("imaginary part given for a real field")
        return QQ(r.numerator, r.denominator)
    if dom == QQ_I:
        return QQ_I(QQ(r.numerator, r.denominator), QQ(i.numerator, i.denominator))
    raise TypeError(f"domain {dom} is not serializable")
