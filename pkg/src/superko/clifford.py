"""Graded Clifford modules, their classification and the ABS quotient.

Conventions.  A graded module of degree ``n`` carries odd orthogonal (unitary
over C) generators with ``e_i**2 = -sgn(n)`` and grading ``eps = diag(1, -1)``
with the even coordinates first.  Irreducible modules are built explicitly by
a tensor recursion whose output consists of monomial matrices (one nonzero
entry per column, a power of ``i``), so even large degrees stay cheap.

Classes are distinguished by the trace of ``omega = e_1...e_k eps`` (times
``i**(k/2)`` over C), which acts as +1 or -1 on the irreducibles whenever
there are two of them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import product
from typing import Sequence

import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_decomp
from sympy.polys.matrices import DomainMatrix

from ._exact import (
    QQ_I,
    adjoint,
    field_domain,
    scalar,
    scalar_from_str,
    scalar_to_str,
    trace,
    zeros,
    eye,
)

__all__ = [
    "CliffordError",
    "MonomialMatrix",
    "GradedCliffordModule",
    "ModuleClass",
    "QuotientGroup",
    "irreducible_graded_modules",
    "irreducible_dims",
    "decompose",
    "restrict",
    "double",
    "extension_image",
    "abs_quotient",
    "abs_quotient_complex",
    "brute_force_quotient",
    "hom_space",
    "graded_tensor",
    "direct_sum",
]

EXPLICIT_DEGREE_CAP = 16
DEGREE_CAP = 24


class CliffordError(ValueError):
    pass


# ---------------------------------------------------------------- monomials


class MonomialMatrix:
    """Square matrix with exactly one nonzero entry ``i**phase[j]`` per column.

    Column ``j`` is sent to row ``perm[j]``.
    """

    __slots__ = ("perm", "phase")

    def __init__(self, perm, phase):
        self.perm = np.asarray(perm, dtype=np.int64)
        self.phase = np.asarray(phase, dtype=np.int64) % 4

    @property
    def n(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, n: int) -> "MonomialMatrix":
        return cls(np.arange(n), np.zeros(n))

    @classmethod
    def from_dense(cls, rows) -> "MonomialMatrix":
        a = np.asarray(rows, dtype=complex)
        n = a.shape[0]
        perm = np.zeros(n, dtype=np.int64)
        phase = np.zeros(n, dtype=np.int64)
        units = {1: 0, 1j: 1, -1: 2, -1j: 3}
        for j in range(n):
            nz = np.nonzero(a[:, j])[0]
            if len(nz) != 1:
                raise CliffordError("not a monomial matrix")
            perm[j] = nz[0]
            phase[j] = units[complex(a[nz[0], j])]
        if len(set(perm.tolist())) != n:
            raise CliffordError("not a monomial matrix")
        return cls(perm, phase)

    def __matmul__(self, other: "MonomialMatrix") -> "MonomialMatrix":
        return MonomialMatrix(self.perm[other.perm], self.phase[other.perm] + other.phase)

    def __neg__(self):
        return MonomialMatrix(self.perm, self.phase + 2)

    def times_i(self, power: int = 1) -> "MonomialMatrix":
        return MonomialMatrix(self.perm, self.phase + power)

    def __eq__(self, other):
        return (
            isinstance(other, MonomialMatrix)
            and np.array_equal(self.perm, other.perm)
            and np.array_equal(self.phase, other.phase)
        )

    def __hash__(self):
        return hash((self.perm.tobytes(), self.phase.tobytes()))

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.perm, np.arange(self.n)) and not self.phase.any())

    def is_scalar(self, phase: int) -> bool:
        return bool(np.array_equal(self.perm, np.arange(self.n)) and np.all(self.phase == phase % 4))

    def kron(self, other: "MonomialMatrix") -> "MonomialMatrix":
        nb = other.n
        perm = (self.perm[:, None] * nb + other.perm[None, :]).reshape(-1)
        phase = (self.phase[:, None] + other.phase[None, :]).reshape(-1)
        return MonomialMatrix(perm, phase)

    def inverse(self) -> "MonomialMatrix":
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(self.n)
        return MonomialMatrix(inv, -self.phase[inv])

    def is_real(self) -> bool:
        return bool(np.all(self.phase % 2 == 0))

    def trace(self) -> complex:
        fixed = self.perm == np.arange(self.n)
        ph = self.phase[fixed]
        re = int(np.sum(ph == 0)) - int(np.sum(ph == 2))
        im = int(np.sum(ph == 1)) - int(np.sum(ph == 3))
        return complex(re, im)

    def apply_basis(self, j: int) -> tuple[int, int]:
        """Image of basis vector j as (row index, phase)."""
        return int(self.perm[j]), int(self.phase[j])

    def conjugate_permutation(self, order: Sequence[int]) -> "MonomialMatrix":
        """Matrix in the basis ``new_k = old_{order[k]}``."""
        order = np.asarray(order, dtype=np.int64)
        pos = np.empty_like(order)
        pos[order] = np.arange(len(order))
        return MonomialMatrix(pos[self.perm[order]], self.phase[order])

    def to_domain(self, dom) -> DomainMatrix:
        units = {
            0: dom.one,
            2: -dom.one,
        }
        if dom == QQ_I:
            units[1] = QQ_I(0, 1)
            units[3] = QQ_I(0, -1)
        n = self.n
        sdm: dict = {}
        for j in range(n):
            ph = int(self.phase[j])
            if ph not in units:
                raise CliffordError("imaginary entries in a real module")
            sdm.setdefault(int(self.perm[j]), {})[j] = units[ph]
        return DomainMatrix(sdm, (n, n), dom).to_dense()

    def to_numpy(self) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=complex)
        out[self.perm, np.arange(self.n)] = 1j ** self.phase
        return out


def _block_offdiag(upper: MonomialMatrix, lower: MonomialMatrix) -> MonomialMatrix:
    """[[0, upper], [lower, 0]] for equal-size square blocks."""
    d = upper.n
    perm = np.concatenate([lower.perm + d, upper.perm])
    phase = np.concatenate([lower.phase, upper.phase])
    return MonomialMatrix(perm, phase)


def _block_diag_mono(a: MonomialMatrix, b: MonomialMatrix) -> MonomialMatrix:
    return MonomialMatrix(np.concatenate([a.perm, b.perm + a.n]), np.concatenate([a.phase, b.phase]))


def _grading_mono(even: int, odd: int) -> MonomialMatrix:
    return MonomialMatrix(np.arange(even + odd), np.array([0] * even + [2] * odd))


# -------------------------------------------------- ungraded irreducibles

_X = MonomialMatrix.from_dense([[0, 1], [1, 0]])
_Z = MonomialMatrix.from_dense([[1, 0], [0, -1]])
_J = MonomialMatrix.from_dense([[0, -1], [1, 0]])
_Y = MonomialMatrix.from_dense([[0, -1j], [1j, 0]])
_LI = MonomialMatrix.from_dense([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
_LJ = MonomialMatrix.from_dense([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]])
_LK = MonomialMatrix.from_dense([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]])


@lru_cache(maxsize=None)
def _real_ungraded(squares: tuple[int, ...]) -> tuple[int, tuple[MonomialMatrix, ...]]:
    """An irreducible real ungraded module for generators with the given squares."""
    k = len(squares)
    if k == 0:
        return 1, ()
    if all(s == -1 for s in squares) and k <= 3:
        if k == 1:
            return 2, (_J,)
        return 4, (_LI, _LJ, _LK)[:k]
    if squares == (1,):
        return 1, (MonomialMatrix.identity(1),)
    if 1 in squares and -1 in squares:
        p = squares.index(1)
        m = squares.index(-1)
        rest_idx = [i for i in range(k) if i not in (p, m)]
        d, rest = _real_ungraded(tuple(squares[i] for i in rest_idx))
        eye_d = MonomialMatrix.identity(d)
        gens: list = [None] * k
        for i, h in zip(rest_idx, rest):
            gens[i] = h.kron(_Z)
        gens[p] = eye_d.kron(_X)
        gens[m] = eye_d.kron(_J)
        return 2 * d, tuple(gens)
    if all(s == 1 for s in squares):
        d, h = _real_ungraded((1,) + (-1,) * (k - 1))
        return d, (h[0],) + tuple(h[0] @ hi for hi in h[1:])
    # all -1 with k >= 4: trade four of them for +1 generators
    d, h = _real_ungraded((1, 1, 1, 1) + (-1,) * (k - 4))
    omega = h[0] @ h[1] @ h[2] @ h[3]
    return d, tuple(h[i] @ omega for i in range(4)) + tuple(h[4:])


@lru_cache(maxsize=None)
def _complex_ungraded(k: int) -> tuple[int, tuple[MonomialMatrix, ...]]:
    """Irreducible complex module with k anticommuting generators squaring to -1."""
    r = k // 2
    d = 2**r
    gens = []
    for j in range(r):
        for mid in (_X, _Y):
            g = MonomialMatrix.identity(1)
            for _ in range(j):
                g = g.kron(_Z)
            g = g.kron(mid)
            for _ in range(r - j - 1):
                g = g.kron(MonomialMatrix.identity(2))
            gens.append(g)
    if k % 2:
        g = MonomialMatrix.identity(1)
        for _ in range(r):
            g = g.kron(_Z)
        gens.append(g)
    return d, tuple(g.times_i() for g in gens)


def _two_classes(k: int, complex_: bool) -> bool:
    return k % 2 == 0 if complex_ else k % 4 == 0


@lru_cache(maxsize=None)
def _graded_irreducibles(n: int, complex_: bool) -> tuple:
    """Tuple of (even_dim, odd_dim, generators) ordered so that class 0 has omega = +1."""
    k = abs(n)
    if k == 0:
        return ((1, 0, ()), (0, 1, ()))
    s = -1 if n > 0 else 1
    if complex_:
        d, us = _complex_ungraded(k - 1)
    else:
        d, us = _real_ungraded((-1,) * (k - 1))
    variants = [list(us)]
    if _two_classes(k, complex_):
        variants.append(list(us[:-1]) + [-us[-1]])
    eye_d = MonomialMatrix.identity(d)
    s_eye = eye_d if s == 1 else -eye_d
    out = []
    for us_v in variants:
        gens = [_block_offdiag(s_eye, eye_d)]
        for u in us_v:
            su = u if s == 1 else -u
            gens.append(_block_offdiag(-u, su))
        out.append((d, d, tuple(gens)))
    if len(out) == 2:
        tr = _omega_mono(out[0][0], out[0][1], out[0][2], n, complex_).trace()
        if tr.real < 0:
            out.reverse()
    return tuple(out)


def _omega_mono(even, odd, gens, n, complex_) -> MonomialMatrix:
    w = MonomialMatrix.identity(even + odd)
    for g in gens:
        w = w @ g
    w = w @ _grading_mono(even, odd)
    if complex_ and len(gens) % 2 == 0:
        w = w.times_i(len(gens) // 2)
    return w


def irreducible_dims(n: int, field: str = "R") -> list[tuple[int, int]]:
    n_red = _reduce_degree(n)
    return [(e, o) for e, o, _ in _graded_irreducibles(n_red, field == "C")]


def _reduce_degree(n: int) -> int:
    if abs(n) > DEGREE_CAP:
        raise CliffordError(f"degree {n} outside the supported range |n| <= {DEGREE_CAP}")
    return n


# ----------------------------------------------------------------- modules


class GradedCliffordModule:
    """A graded Cl_n-module with explicit generator matrices.

    ``generators`` may be given as ``DomainMatrix`` values or as
    :class:`MonomialMatrix` values; the exact matrices are produced lazily.
    """

    def __init__(self, degree: int, even_dim: int, odd_dim: int, generators, field: str = "R", check: bool = True):
        self.degree = int(degree)
        self.even_dim = int(even_dim)
        self.odd_dim = int(odd_dim)
        self.field = field
        self.domain = field_domain(field)
        gens = list(generators)
        if len(gens) != abs(self.degree):
            raise CliffordError(f"degree {degree} needs {abs(degree)} generators, got {len(gens)}")
        if gens and all(isinstance(g, MonomialMatrix) for g in gens):
            self._mono = tuple(gens)
            self._gens = None
        else:
            self._mono = None
            self._gens = tuple(g if isinstance(g, DomainMatrix) else g.to_domain(self.domain) for g in gens)
        if check:
            self.validate()

    # basic data
    @property
    def dim(self) -> int:
        return self.even_dim + self.odd_dim

    @property
    def k(self) -> int:
        return abs(self.degree)

    @property
    def square(self) -> int:
        """The common value of e_i**2."""
        return -1 if self.degree > 0 else 1

    @property
    def is_complex(self) -> bool:
        return self.field == "C"

    @property
    def generators(self) -> tuple[DomainMatrix, ...]:
        if self._gens is None:
            self._gens = tuple(g.to_domain(self.domain) for g in self._mono)
        return self._gens

    @property
    def monomial_generators(self):
        return self._mono

    @property
    def grading(self) -> DomainMatrix:
        dom = self.domain
        rows = [[dom.zero] * self.dim for _ in range(self.dim)]
        for i in range(self.dim):
            rows[i][i] = dom.one if i < self.even_dim else -dom.one
        return DomainMatrix(rows, (self.dim, self.dim), dom)

    def identity(self) -> DomainMatrix:
        return eye(self.dim, self.domain)

    def __repr__(self):
        return f"GradedCliffordModule(n={self.degree}, dims=({self.even_dim}|{self.odd_dim}), field={self.field})"

    def __eq__(self, other):
        if not isinstance(other, GradedCliffordModule):
            return NotImplemented
        if (self.degree, self.even_dim, self.odd_dim, self.field) != (
            other.degree,
            other.even_dim,
            other.odd_dim,
            other.field,
        ):
            return False
        if self._mono is not None and other._mono is not None:
            return all(a == b for a, b in zip(self._mono, other._mono))
        return all(a == b for a, b in zip(self.generators, other.generators))

    __hash__ = None

    # checks
    def validate(self) -> None:
        s = self.square
        if self._mono is not None:
            eps = _grading_mono(self.even_dim, self.odd_dim)
            for i, g in enumerate(self._mono):
                if g.n != self.dim:
                    raise CliffordError("generator has the wrong size")
                if not self.is_complex and not g.is_real():
                    raise CliffordError("imaginary entries in a real module")
                if not (g @ g).is_scalar(0 if s == 1 else 2):
                    raise CliffordError(f"e_{i + 1}^2 != {s}")
                if not (g @ eps) == -(eps @ g):
                    raise CliffordError(f"e_{i + 1} is not odd")
                for j in range(i):
                    h = self._mono[j]
                    if not (g @ h) == -(h @ g):
                        raise CliffordError(f"e_{i + 1} and e_{j + 1} do not anticommute")
            return
        dom = self.domain
        n = self.dim
        eye_n = eye(n, dom)
        eps = self.grading
        target = eye_n if s == 1 else -eye_n
        for i, g in enumerate(self.generators):
            if g.shape != (n, n):
                raise CliffordError("generator has the wrong size")
            if g * g != target:
                raise CliffordError(f"e_{i + 1}^2 != {s}")
            if g * eps != -(eps * g):
                raise CliffordError(f"e_{i + 1} is not odd")
            if adjoint(g) * g != eye_n:
                raise CliffordError(f"e_{i + 1} is not orthogonal")
            for j in range(i):
                h = self.generators[j]
                if g * h != -(h * g):
                    raise CliffordError(f"e_{i + 1} and e_{j + 1} do not anticommute")

    def is_clifford_linear(self, f: DomainMatrix, other: "GradedCliffordModule | None" = None) -> bool:
        """Whether f (self -> other) commutes with generators and grading."""
        other = other or self
        if other.grading * f != f * self.grading:
            return False
        return all(b * f == f * a for a, b in zip(self.generators, other.generators))

    # invariants
    def omega_trace(self):
        """Exact trace of omega; zero when it carries no class information."""
        cpx = self.is_complex
        if self._mono is not None:
            t = _omega_mono(self.even_dim, self.odd_dim, self._mono, self.degree, cpx).trace()
            return complex(t)
        w = self.identity()
        for g in self.generators:
            w = w * g
        w = w * self.grading
        t = trace(w)
        if cpx:
            val = complex(float(t.x), float(t.y))
            val *= 1j ** (self.k // 2) if self.k % 2 == 0 else 1
            return val
        return complex(float(t), 0.0)

    # constructions
    def restrict(self) -> "GradedCliffordModule":
        if self.degree < 1:
            raise CliffordError("restriction needs degree >= 1")
        gens = self._mono[:-1] if self._mono is not None else self.generators[:-1]
        if not gens:
            gens = ()
        return GradedCliffordModule(self.degree - 1, self.even_dim, self.odd_dim, gens, self.field, check=False)

    def parity_reversed(self) -> "GradedCliffordModule":
        order = list(range(self.even_dim, self.dim)) + list(range(self.even_dim))
        if self._mono is not None:
            gens = [g.conjugate_permutation(order) for g in self._mono]
        else:
            gens = [_reorder(g, order) for g in self.generators]
        return GradedCliffordModule(self.degree, self.odd_dim, self.even_dim, gens, self.field, check=False)

    def conjugated(self, g: DomainMatrix) -> "GradedCliffordModule":
        """Transport the structure along an even isometry g (new basis = g(old basis))."""
        gi = adjoint(g)
        if gi * g != self.identity():
            raise CliffordError("conjugating map is not orthogonal")
        if g * self.grading != self.grading * g:
            raise CliffordError("conjugating map is not even")
        gens = [g * e * gi for e in self.generators]
        return GradedCliffordModule(self.degree, self.even_dim, self.odd_dim, gens, self.field)

    # serialization
    def to_json(self) -> dict:
        dom = self.domain
        gens = []
        for g in self.generators:
            row = []
            for r in g.to_list():
                for v in r:
                    re, im = scalar_to_str(dom, v)
                    row.append(re if self.field == "R" else [re, im])
            gens.append(row)
        out = {"n": self.degree, "even_dim": self.even_dim, "odd_dim": self.odd_dim, "generators": gens}
        if self.field == "C":
            out["field"] = "C"
        return out

    @classmethod
    def from_json(cls, data) -> "GradedCliffordModule":
        if isinstance(data, str):
            data = json.loads(data)
        field = data.get("field", "R")
        dom = field_domain(field)
        dim = int(data["even_dim"]) + int(data["odd_dim"])
        gens = []
        for flat in data["generators"]:
            if len(flat) != dim * dim:
                raise CliffordError("generator has the wrong number of entries")
            vals = []
            for v in flat:
                if isinstance(v, (list, tuple)):
                    vals.append(scalar_from_str(dom, str(v[0]), str(v[1])))
                else:
                    vals.append(scalar(dom, str(v)))
            gens.append(DomainMatrix([vals[i * dim : (i + 1) * dim] for i in range(dim)], (dim, dim), dom))
        return cls(int(data["n"]), int(data["even_dim"]), int(data["odd_dim"]), gens, field)


def _reorder(m: DomainMatrix, order: Sequence[int]) -> DomainMatrix:
    rows = m.to_list()
    return DomainMatrix([[rows[i][j] for j in order] for i in order], (len(order), len(order)), m.domain)


def direct_sum(mods: Sequence[GradedCliffordModule]) -> tuple[GradedCliffordModule, list[DomainMatrix]]:
    """Direct sum (evens first) together with the inclusion matrices."""
    mods = list(mods)
    if not mods:
        raise CliffordError("empty direct sum")
    n = mods[0].degree
    field = mods[0].field
    for m in mods:
        if m.degree != n or m.field != field:
            raise CliffordError("direct sum of modules of different type")
    dom = field_domain(field)
    offsets = []
    off = 0
    for m in mods:
        offsets.append(off)
        off += m.dim
    order = []
    for m, o in zip(mods, offsets):
        order.extend(range(o, o + m.even_dim))
    for m, o in zip(mods, offsets):
        order.extend(range(o + m.even_dim, o + m.dim))
    total = off
    even = sum(m.even_dim for m in mods)
    pos = {old: new for new, old in enumerate(order)}
    if all(m.monomial_generators is not None for m in mods) and n != 0:
        gens = []
        for i in range(abs(n)):
            acc = None
            for m in mods:
                g = m.monomial_generators[i]
                acc = g if acc is None else _block_diag_mono(acc, g)
            gens.append(acc.conjugate_permutation(order))
    else:
        gens = []
        for i in range(abs(n)):
            rows = [[dom.zero] * total for _ in range(total)]
            for m, o in zip(mods, offsets):
                for r, row in enumerate(m.generators[i].to_list()):
                    for c, v in enumerate(row):
                        if v:
                            rows[pos[o + r]][pos[o + c]] = v
            gens.append(DomainMatrix(rows, (total, total), dom))
    out = GradedCliffordModule(n, even, total - even, gens, field, check=False)
    incs = []
    for m, o in zip(mods, offsets):
        sdm = {pos[o + j]: {j: dom.one} for j in range(m.dim)}
        incs.append(DomainMatrix(sdm, (total, m.dim), dom).to_dense())
    return out, incs


def irreducible_graded_modules(n: int, field: str = "R") -> list[GradedCliffordModule]:
    """One irreducible graded Cl_n-module per isomorphism class (class 0 first)."""
    n = _reduce_degree(n)
    cpx = field == "C"
    if abs(n) <= EXPLICIT_DEGREE_CAP:
        return [
            GradedCliffordModule(n, e, o, gens, field, check=False) for e, o, gens in _graded_irreducibles(n, cpx)
        ]
    # beyond the explicit range, tensor with the 16-dimensional Cl_{+-8} module
    step = 8 if n > 0 else -8
    base = irreducible_graded_modules(n - step, field)
    eight = irreducible_graded_modules(step, field)[0]
    out = [graded_tensor(b, eight) for b in base]
    return sorted(out, key=lambda m: -m.omega_trace().real)


def graded_tensor(a: GradedCliffordModule, b: GradedCliffordModule) -> GradedCliffordModule:
    """Graded tensor product of a degree-p and a degree-q module (same sign)."""
    if a.degree * b.degree < 0:
        raise CliffordError("graded tensor product needs degrees of equal sign")
    if a.monomial_generators is None and a.degree or b.monomial_generators is None and b.degree:
        raise CliffordError("graded_tensor works on monomial modules")
    eps_a = _grading_mono(a.even_dim, a.odd_dim)
    eps_b = _grading_mono(b.even_dim, b.odd_dim)
    id_b = MonomialMatrix.identity(b.dim)
    gens = [g.kron(id_b) for g in (a.monomial_generators or ())]
    gens += [eps_a.kron(h) for h in (b.monomial_generators or ())]
    eps = eps_a.kron(eps_b)
    even_idx = [i for i in range(a.dim * b.dim) if eps.phase[i] == 0]
    odd_idx = [i for i in range(a.dim * b.dim) if eps.phase[i] == 2]
    order = even_idx + odd_idx
    gens = [g.conjugate_permutation(order) for g in gens]
    sign = 1 if a.degree >= 0 and b.degree >= 0 else -1
    deg = sign * (a.k + b.k)
    return GradedCliffordModule(deg, len(even_idx), len(odd_idx), gens, a.field, check=True)


def restrict(m: GradedCliffordModule) -> GradedCliffordModule:
    return m.restrict()


def double(ve: GradedCliffordModule, vo: GradedCliffordModule, gamma: DomainMatrix | None = None) -> GradedCliffordModule:
    """Degree -(k+1) module on ve (even) + vo (odd) built from an isomorphism gamma.

    ve and vo are graded Cl_{-k}-modules; gamma must be even, Clifford-linear
    and orthogonal.  With V^e first, the new generators are
    e'_i = [[0, -eps e_i gamma^-1], [eps e_i gamma, 0]] and
    e'_{k+1} = [[0, gamma^-1], [gamma, 0]].
    """
    if ve.degree > 0 or ve.degree != vo.degree or ve.field != vo.field:
        raise CliffordError("double needs two Cl_{-k}-modules of the same type")
    if ve.dim != vo.dim:
        raise CliffordError("gamma cannot be an isomorphism: dimensions differ")
    k = ve.k
    field = ve.field
    if gamma is None:
        if ve.even_dim != vo.even_dim or not (ve == vo):
            raise CliffordError("identity gamma needs equal modules")
        if ve.monomial_generators is not None or k == 0:
            d = ve.dim
            eye_d = MonomialMatrix.identity(d)
            eps = _grading_mono(ve.even_dim, ve.odd_dim)
            gens = []
            for g in ve.monomial_generators or ():
                eg = eps @ g
                gens.append(_block_offdiag(-eg, eg))
            gens.append(_block_offdiag(eye_d, eye_d))
            return GradedCliffordModule(-(k + 1), d, d, gens, field, check=True)
        gamma = ve.identity()
    dom = ve.domain
    gi = adjoint(gamma)
    if gamma.shape != (vo.dim, ve.dim) or gi * gamma != ve.identity():
        raise CliffordError("gamma is not an orthogonal isomorphism")
    if gamma * ve.grading != vo.grading * gamma:
        raise CliffordError("gamma is not even")
    if not all(b * gamma == gamma * a for a, b in zip(ve.generators, vo.generators)):
        raise CliffordError("gamma is not Clifford-linear")
    d = ve.dim
    eps_e, eps_o = ve.grading, vo.grading
    gens = []
    for a, b in zip(ve.generators, vo.generators):
        upper = -(eps_e * a * gi)
        lower = eps_o * b * gamma
        gens.append(_offdiag_dense(upper, lower, d, dom))
    gens.append(_offdiag_dense(gi, gamma, d, dom))
    return GradedCliffordModule(-(k + 1), d, d, gens, field, check=True)


def _offdiag_dense(upper: DomainMatrix, lower: DomainMatrix, d: int, dom) -> DomainMatrix:
    rows = [[dom.zero] * (2 * d) for _ in range(2 * d)]
    for i, r in enumerate(upper.to_list()):
        for j, v in enumerate(r):
            rows[i][d + j] = v
    for i, r in enumerate(lower.to_list()):
        for j, v in enumerate(r):
            rows[d + i][j] = v
    return DomainMatrix(rows, (2 * d, 2 * d), dom)


def extension_image(t: GradedCliffordModule) -> GradedCliffordModule:
    """The map i_{n+1}: a degree n+1 module to a degree n module."""
    if t.degree >= 1:
        return t.restrict()
    return double(t, t)


# ------------------------------------------------------------ decomposition


@dataclass
class ModuleClass:
    """Multiplicity vector over the irreducible classes of a fixed degree."""

    degree: int
    field: str
    multiplicities: tuple[int, ...]
    witness: DomainMatrix | None = dc_field(default=None, compare=False, repr=False)

    def __add__(self, other: "ModuleClass") -> "ModuleClass":
        if (self.degree, self.field) != (other.degree, other.field):
            raise CliffordError("adding classes of different degree")
        return ModuleClass(self.degree, self.field, tuple(a + b for a, b in zip(self.multiplicities, other.multiplicities)))

    def to_json(self) -> dict:
        return {"n": self.degree, "field": self.field, "multiplicities": list(self.multiplicities)}


def decompose(m: GradedCliffordModule, witness: bool = True) -> ModuleClass:
    """Multiplicities of the irreducibles in m, plus an isomorphism witness.

    The witness W maps the standard direct sum (class 0 copies first, then
    class 1) onto m; it is even, Clifford-linear and invertible.
    """
    if m.monomial_generators is None:
        m.validate()
    irr = irreducible_graded_modules(m.degree, m.field)
    d = irr[0].dim
    if m.degree == 0:
        mult = (m.even_dim, m.odd_dim)
    else:
        if m.even_dim != m.odd_dim or m.dim % d:
            raise CliffordError("dimensions are incompatible with any graded module")
        if len(irr) == 1:
            mult = (m.dim // d,)
        else:
            tr = m.omega_trace()
            t = round(tr.real)
            if abs(tr.imag) > 1e-9 or abs(tr.real - t) > 1e-9 or (m.dim + t) % (2 * d):
                raise CliffordError("volume-element trace is inconsistent")
            a = (m.dim + t) // (2 * d)
            mult = (a, m.dim // d - a)
            if min(mult) < 0:
                raise CliffordError("volume-element trace is inconsistent")
    out = ModuleClass(m.degree, m.field, tuple(int(x) for x in mult))
    if witness:
        out.witness = _witness(m, irr, out.multiplicities)
    return out


def _words(s: GradedCliffordModule):
    """All words e_I eps^a as (mask, a) pairs."""
    return [(mask, a) for mask in range(1 << s.k) for a in (0, 1)]


def _word_matrix(mod: GradedCliffordModule, mask: int, a: int, cache: dict) -> DomainMatrix:
    key = (mask, a)
    if key in cache:
        return cache[key]
    if mod.monomial_generators is not None:
        w = _word_mono(mod, mask, a).to_domain(mod.domain)
        cache[key] = w
        return w
    if mask == 0:
        w = mod.identity()
    else:
        top = mask.bit_length() - 1
        w = _word_matrix(mod, mask & ~(1 << top), 0, cache) * mod.generators[top]
    if a:
        w = w * mod.grading
    cache[key] = w
    return w


def _word_mono(s: GradedCliffordModule, mask: int, a: int) -> MonomialMatrix:
    w = MonomialMatrix.identity(s.dim)
    for i in range(s.k):
        if mask >> i & 1:
            w = w @ s.monomial_generators[i]
    if a:
        w = w @ _grading_mono(s.even_dim, s.odd_dim)
    return w


def hom_space(s: GradedCliffordModule, m: GradedCliffordModule) -> list[DomainMatrix]:
    """Basis of even Clifford-linear maps from an irreducible s into m.

    Each map is determined by the image x of the first basis vector of s,
    subject to rho_m(g) x = sigma x for every word g with g b0 = sigma b0.
    """
    if s.monomial_generators is None and s.degree:
        raise CliffordError("hom_space needs a monomial source module")
    dom = m.domain
    words = _words(s)
    cache: dict = {}
    # orbit of b0 and stabiliser conditions
    reach: dict[int, tuple[int, int]] = {}
    constraints = []
    for mask, a in words:
        w = _word_mono(s, mask, a) if s.degree else (MonomialMatrix.identity(s.dim) if not a else _grading_mono(s.even_dim, s.odd_dim))
        row, ph = w.apply_basis(0)
        if row == 0:
            constraints.append((mask, a, ph))
        elif row not in reach:
            reach[row] = (mask, a, ph)
    reach[0] = (0, 0, 0)
    if len(reach) != s.dim:
        raise CliffordError("first basis vector does not generate the module")
    unit = {0: dom.one, 2: -dom.one}
    if dom == QQ_I:
        unit[1] = QQ_I(0, 1)
        unit[3] = QQ_I(0, -1)
    blocks = []
    n = m.dim
    for mask, a, ph in constraints:
        blocks.append(_word_matrix(m, mask, a, cache) - _scaled_eye(n, unit[ph], dom))
    if blocks:
        rows = []
        for b in blocks:
            rows.extend(b.to_list())
        big = DomainMatrix(rows, (len(rows), n), dom)
        null = big.nullspace().to_list() if big.rank() < n else []
    else:
        null = m.identity().to_list()
    maps = []
    for vec in null:
        x = DomainMatrix([[v] for v in vec], (n, 1), dom)
        cols = [None] * s.dim
        for row, (mask, a, ph) in reach.items():
            # g b0 = i^ph b_row, so phi(b_row) = i^-ph rho(g) x
            img = _word_matrix(m, mask, a, cache) * x
            c = unit[(-ph) % 4]
            cols[row] = [r[0] * c for r in img.to_list()]
        phi = DomainMatrix([[cols[j][i] for j in range(s.dim)] for i in range(n)], (n, s.dim), dom)
        maps.append(phi)
    return maps


def _scaled_eye(n: int, c, dom) -> DomainMatrix:
    rows = [[c if i == j else dom.zero for j in range(n)] for i in range(n)]
    return DomainMatrix(rows, (n, n), dom)


def _witness(m: GradedCliffordModule, irr, mult) -> DomainMatrix:
    dom = m.domain
    chosen_cols: list = []
    blocks = []
    for cls, count in enumerate(mult):
        if count == 0:
            continue
        homs = hom_space(irr[cls], m)
        taken = 0
        for phi in homs:
            if taken == count:
                break
            trial = chosen_cols + [phi]
            stacked = _hcat(trial, m.dim, dom)
            if stacked.rank() == stacked.shape[1]:
                chosen_cols = trial
                blocks.append((cls, phi))
                taken += 1
        if taken != count:
            raise CliffordError("could not assemble an isomorphism witness")
    summands = [irr[cls] for cls, _ in blocks]
    if not summands:
        return zeros(m.dim, 0, dom)
    _, incs = direct_sum(summands)
    w = None
    for (cls, phi), inc in zip(blocks, incs):
        term = phi * adjoint(inc)
        w = term if w is None else w + term
    return w


def _hcat(mats, nrows, dom):
    rows = [[] for _ in range(nrows)]
    for x in mats:
        for i, r in enumerate(x.to_list()):
            rows[i].extend(r)
    return DomainMatrix(rows, (nrows, sum(x.shape[1] for x in mats)), dom)


# --------------------------------------------------------------- quotients


@dataclass(frozen=True)
class QuotientGroup:
    """Z^c modulo the lattice spanned by the relation columns."""

    degree: int
    field: str
    relations: tuple[tuple[int, ...], ...]
    classes: int
    invariants: tuple[int, ...]
    _u: tuple[tuple[int, ...], ...] = dc_field(repr=False, compare=False)
    inverse_witnesses: tuple[tuple[int, ...], ...] = dc_field(default=(), compare=False)

    @property
    def rank(self) -> int:
        return self.classes - sum(1 for d in self.invariants if d)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariants if d > 1)

    def presentation(self) -> str:
        parts = ["Z"] * self.rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def __str__(self):
        return self.presentation()

    def is_isomorphic(self, other: "QuotientGroup") -> bool:
        return self.rank == other.rank and sorted(self.torsion) == sorted(other.torsion)

    def coords(self, v: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates of the class of a multiplicity vector."""
        w = [sum(self._u[i][j] * int(v[j]) for j in range(self.classes)) for i in range(self.classes)]
        out = []
        for i in range(self.classes):
            d = self.invariants[i] if i < len(self.invariants) else 0
            if d == 1:
                continue
            out.append(w[i] % d if d else w[i])
        return tuple(out)

    def add(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        mods = self._moduli()
        return tuple((a + b) % d if d else a + b for a, b, d in zip(x, y, mods))

    def neg(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple((-a) % d if d else -a for a, d in zip(x, self._moduli()))

    def zero(self) -> tuple[int, ...]:
        return tuple(0 for _ in self._moduli())

    def _moduli(self):
        out = []
        for i in range(self.classes):
            d = self.invariants[i] if i < len(self.invariants) else 0
            if d != 1:
                out.append(d)
        return out

    def generators(self) -> list[tuple[int, ...]]:
        """Images of the irreducible classes."""
        return [self.coords([int(i == c) for i in range(self.classes)]) for c in range(self.classes)]

    def to_json(self) -> dict:
        return {
            "n": self.degree,
            "field": self.field,
            "group": self.presentation(),
            "rank": self.rank,
            "torsion": list(self.torsion),
            "classes": self.classes,
            "relations": [list(r) for r in self.relations],
            "generator_coords": [list(g) for g in self.generators()],
            "inverse_witnesses": [list(w) for w in self.inverse_witnesses],
        }


def _smith(classes: int, relations: Sequence[Sequence[int]]):
    """Invariant factors and left transform U with U R V = diag."""
    if not relations:
        return tuple(0 for _ in range(classes)), tuple(tuple(int(i == j) for j in range(classes)) for i in range(classes))
    r = Matrix([[rel[i] for rel in relations] for i in range(classes)])
    s, u, _ = smith_normal_decomp(r, domain=ZZ)
    diag = [abs(int(s[i, i])) if i < s.shape[1] else 0 for i in range(classes)]
    u_rows = [[int(u[i, j]) for j in range(classes)] for i in range(classes)]
    # normalise signs so that coordinates are canonical
    for i in range(min(classes, s.shape[1])):
        if int(s[i, i]) < 0:
            u_rows[i] = [-x for x in u_rows[i]]
    return tuple(diag), tuple(tuple(r) for r in u_rows)


@lru_cache(maxsize=None)
def _quotient(n: int, field: str) -> QuotientGroup:
    n = _reduce_degree(n)
    if abs(n) > EXPLICIT_DEGREE_CAP or abs(n + 1) > EXPLICIT_DEGREE_CAP:
        # period 8 (real) or 2 (complex) reduction
        step = 8 if field == "R" else 2
        shift = step * ((abs(n) - EXPLICIT_DEGREE_CAP + step) // step)
        base = _quotient(n - shift if n > 0 else n + shift, field)
        return QuotientGroup(n, field, base.relations, base.classes, base.invariants, base._u, base.inverse_witnesses)
    irr = irreducible_graded_modules(n, field)
    ups = irreducible_graded_modules(n + 1, field)
    rels = tuple(decompose(extension_image(t), witness=False).multiplicities for t in ups)
    inv, u = _smith(len(irr), rels)
    q = QuotientGroup(n, field, rels, len(irr), inv, u)
    witnesses = tuple(decompose(s.parity_reversed(), witness=False).multiplicities for s in irr)
    for c, w in enumerate(witnesses):
        e = [int(i == c) for i in range(len(irr))]
        if q.add(q.coords(e), q.coords(w)) != q.zero():
            raise CliffordError(f"parity reversal fails to invert class {c} in degree {n}")
    return QuotientGroup(n, field, rels, len(irr), inv, u, witnesses)


def abs_quotient(n: int) -> QuotientGroup:
    """M_n / i_{n+1} M_{n+1} for real graded Clifford modules."""
    return _quotient(n, "R")


def abs_quotient_complex(n: int) -> QuotientGroup:
    return _quotient(n, "C")


# -------------------------------------------------------- brute-force oracle


def _frobenius_multiplicities(m: GradedCliffordModule) -> tuple[int, ...]:
    """Multiplicities via dim Hom(S, m) / dim End(S), independent of omega."""
    irr = irreducible_graded_modules(m.degree, m.field)
    out = []
    for s in irr:
        h = len(hom_space(s, m))
        e = len(hom_space(s, s))
        if h % e:
            raise CliffordError("Hom dimension is not a multiple of End dimension")
        out.append(h // e)
    return tuple(out)


def _abelian_invariants(elements, add, zero, order_cap: int) -> tuple[int, ...]:
    """Invariant factors of a finite abelian group given by its elements."""
    size = len(elements)
    if size == 1:
        return ()
    primes = [p for p in range(2, size + 1) if size % p == 0 and all(p % q for q in range(2, p))]
    factors: list[int] = []
    for p in primes:
        counts = []
        j = 0
        while True:
            j += 1
            killed = 0
            for x in elements:
                y = zero
                for _ in range(p**j):
                    y = add(y, x)
                if y == zero:
                    killed += 1
            counts.append(killed)
            if killed == size or j > order_cap:
                break
        logs = [0] + [round(np.log(c) / np.log(p)) for c in counts]
        # number of cyclic factors of order >= p^j is logs[j] - logs[j-1]
        parts = []
        for j in range(1, len(logs)):
            parts.append(logs[j] - logs[j - 1])
        for j in range(len(parts)):
            ge = parts[j]
            gt = parts[j + 1] if j + 1 < len(parts) else 0
            factors.extend([p ** (j + 1)] * (ge - gt))
    # combine prime powers into invariant factors
    by_prime: dict[int, list[int]] = {}
    for f in factors:
        p = min(q for q in range(2, f + 1) if f % q == 0)
        by_prime.setdefault(p, []).append(f)
    for v in by_prime.values():
        v.sort(reverse=True)
    length = max((len(v) for v in by_prime.values()), default=0)
    inv = []
    for i in range(length):
        d = 1
        for v in by_prime.values():
            if i < len(v):
                d *= v[i]
        inv.append(d)
    return tuple(sorted(inv))


def brute_force_quotient(n: int, field: str = "R", box: int = 4) -> dict:
    """Monoid quotient over multiplicity vectors <= box by union-find.

    Relations come from Hom-dimension decompositions of i_{n+1}(T); two
    vectors are identified when they differ by a sum of relations.
    """
    irr = irreducible_graded_modules(n, field)
    c = len(irr)
    rels = [_frobenius_multiplicities(extension_image(t)) for t in irreducible_graded_modules(n + 1, field)]
    big = 2 * box + max((max(r) for r in rels), default=0)
    pts = list(product(range(big + 1), repeat=c))
    index = {p: i for i, p in enumerate(pts)}
    parent = list(range(len(pts)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for p in pts:
        for r in rels:
            q = tuple(a + b for a, b in zip(p, r))
            if q in index:
                a, b = find(index[p]), find(index[q])
                if a != b:
                    parent[a] = b
    small = [p for p in pts if max(p, default=0) <= box]
    comp = {}
    for p in small:
        comp.setdefault(find(index[p]), []).append(p)
    reps = sorted(min(v) for v in comp.values())
    # free rank from the lattice of differences of identified vectors
    diffs = []
    for members in comp.values():
        base = members[0]
        for other in members[1:]:
            diffs.append([a - b for a, b in zip(other, base)])
    rank_rel = Matrix(diffs).rank() if diffs else 0
    free_rank = c - rank_rel

    def cls(p):
        return find(index[p])

    zero_cls = cls(tuple([0] * c))
    # torsion classes: representatives v with k v ~ 0 for some k
    torsion = []
    for rep in reps:
        for k in range(1, box + 1):
            kv = tuple(k * a for a in rep)
            if kv in index and cls(kv) == zero_cls:
                torsion.append(rep)
                break

    def add(x, y):
        s = tuple(a + b for a, b in zip(x, y))
        target = cls(s)
        for r in reps:
            if cls(r) == target:
                return r
        raise CliffordError("box too small for the brute-force oracle")

    tors_inv = _abelian_invariants(torsion, add, tuple([0] * c), box)
    return {
        "n": n,
        "field": field,
        "rank": free_rank,
        "torsion": tors_inv,
        "components": len(reps),
        "relations": [list(r) for r in rels],
    }
