"""Finite-matrix versions of the Fredholm-side constructions.

Operators are real or complex numpy arrays acting on a graded Clifford module
with the even basis vectors first.  An operator F is admissible when it is
odd, symmetric and commutes with every Clifford generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._exact import to_numpy
from .clifford import GradedCliffordModule, irreducible_graded_modules

__all__ = [
    "FredholmError",
    "NumericModule",
    "SpectralWindow",
    "spectral_projection",
    "projection_continuity_check",
    "rank_constant_along_path",
    "retract",
    "subspace_sum",
    "fredn_membership",
    "btx_map",
    "clifford_average",
    "random_admissible",
    "opnorm",
    "standard_module",
]

EDGE_TOL = 1e-9
CHECK_TOL = 1e-9


class FredholmError(ValueError):
    pass


def opnorm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, 2)) if a.size else 0.0


@dataclass
class NumericModule:
    """Generators and grading of a graded Clifford module as numpy arrays."""

    degree: int
    generators: list
    grading: np.ndarray

    @classmethod
    def from_module(cls, m: GradedCliffordModule) -> "NumericModule":
        return cls(m.degree, [to_numpy(g) for g in m.generators], to_numpy(m.grading).real)

    @classmethod
    def plain(cls, even: int, odd: int) -> "NumericModule":
        return cls(0, [], np.diag([1.0] * even + [-1.0] * odd))

    @property
    def dim(self) -> int:
        return self.grading.shape[0]

    @property
    def even_dim(self) -> int:
        return int(np.sum(np.diag(self.grading) > 0))

    def direct_sum(self, copies: int) -> "NumericModule":
        """copies of self, re-sorted so that the even vectors come first."""
        n = self.dim
        eye = np.eye(copies)
        gens = [np.kron(eye, g) for g in self.generators]
        eps = np.kron(eye, self.grading)
        order = np.argsort(-np.diag(eps), kind="stable")
        perm = np.eye(n * copies)[order]
        return NumericModule(self.degree, [perm @ g @ perm.T for g in gens], perm @ eps @ perm.T)


def _as_numeric(module) -> NumericModule | None:
    if module is None or isinstance(module, NumericModule):
        return module
    return NumericModule.from_module(module)


def admissibility_violations(F: np.ndarray, module: NumericModule | None, tol: float = CHECK_TOL) -> list[str]:
    out = []
    scale = max(1.0, opnorm(F))
    if opnorm(F - F.conj().T) > tol * scale:
        out.append("F is not self-adjoint")
    if module is not None:
        eps = module.grading
        if opnorm(eps @ F + F @ eps) > tol * scale:
            out.append("F is not odd")
        for i, e in enumerate(module.generators):
            if opnorm(e @ F - F @ e) > tol * scale:
                out.append(f"F does not commute with e_{i + 1}")
    return out


class SpectralWindow:
    """The window (-c, c) attached to a base operator F0, with 4c = min positive eigenvalue."""

    def __init__(self, F0: np.ndarray, module=None):
        self.F0 = np.asarray(F0)
        self.module = _as_numeric(module)
        ev = np.linalg.eigvalsh(self.F0)
        pos = ev[ev > EDGE_TOL]
        if pos.size == 0:
            raise FredholmError("the base operator has no positive eigenvalue")
        self.c = float(pos.min()) / 4.0

    def contains(self, F: np.ndarray) -> bool:
        return opnorm(F - self.F0) < self.c


def spectral_projection(w: SpectralWindow, F: np.ndarray, check: bool = True) -> np.ndarray:
    """p_F = e_F((-c, c)) for F in the ball of radius c about F0."""
    F = np.asarray(F)
    if check:
        if not w.contains(F):
            raise FredholmError("F is outside the ball of validity")
        bad = admissibility_violations(F, w.module)
        if bad:
            raise FredholmError("; ".join(bad))
    ev, vec = np.linalg.eigh(F)
    if np.any(np.abs(np.abs(ev) - w.c) < EDGE_TOL):
        raise FredholmError("an eigenvalue lies on the window edge")
    sel = vec[:, np.abs(ev) < w.c]
    return sel @ sel.conj().T


def projection_continuity_check(w: SpectralWindow, F1: np.ndarray, F: np.ndarray, eps: float) -> bool:
    """Does ||p_F - p_F1|| <= eps hold?"""
    diff = spectral_projection(w, F) - spectral_projection(w, F1)
    return opnorm(diff) <= eps + 1e-12


def rank_constant_along_path(w: SpectralWindow, path: Sequence[np.ndarray]) -> bool:
    ranks = {int(round(np.trace(spectral_projection(w, F)).real)) for F in path}
    return len(ranks) == 1


def subspace_sum(*projectors: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Projector onto the sum of the images (orthonormalization oracle)."""
    cols = np.hstack(projectors)
    u, s, _ = np.linalg.svd(cols)
    r = int(np.sum(s > tol * max(1.0, s.max(initial=0.0))))
    b = u[:, :r]
    return b @ b.conj().T


def retract(p: np.ndarray, F: np.ndarray, w: SpectralWindow, tol: float = 1e-8) -> np.ndarray:
    """Projector of V + V_F, via p + p_F - p p_F; V must be F-invariant."""
    p = np.asarray(p)
    if opnorm(p @ p - p) > tol or opnorm(p - p.conj().T) > tol:
        raise FredholmError("V is not given by an orthogonal projector")
    if opnorm((np.eye(p.shape[0]) - p) @ F @ p) > tol * max(1.0, opnorm(F)):
        raise FredholmError("V is not F-invariant")
    if w.module is not None:
        for e in w.module.generators + [w.module.grading]:
            if opnorm(e @ p - p @ e) > tol:
                raise FredholmError("V is not a graded Clifford submodule")
    pf = spectral_projection(w, F)
    return p + pf - p @ pf


def _clifford_product(gens: Sequence[np.ndarray], n: int) -> np.ndarray:
    out = np.eye(n)
    for g in gens:
        out = out @ g
    return out


def fredn_membership(F: np.ndarray, n: int, module=None, tol: float = 1e-9) -> bool:
    """Finite-dimensional proxy for membership in Fred_n.

    For n = 1 mod 4 the even restriction of e_1...e_|n| F must have spectrum
    of both signs (no finite operator is "essentially" definite, so this is a
    stand-in, not the real condition).  Otherwise every admissible F belongs.
    """
    if n % 4 != 1:
        return True
    mod = _as_numeric(module)
    if mod is None:
        raise FredholmError("the n = 1 mod 4 condition needs the Clifford module")
    if len(mod.generators) != abs(n):
        raise FredholmError(f"module carries {len(mod.generators)} generators, expected {abs(n)}")
    F = np.asarray(F)
    T = _clifford_product(mod.generators, mod.dim) @ F
    ev_idx = np.diag(mod.grading) > 0
    Te = T[np.ix_(ev_idx, ev_idx)]
    if opnorm(Te - Te.conj().T) > tol * max(1.0, opnorm(Te)):
        raise FredholmError("e_1...e_|n| F is not self-adjoint on the even part")
    ev = np.linalg.eigvalsh(Te)
    scale = max(1.0, float(np.abs(ev).max(initial=0.0)))
    return bool(ev.max(initial=0.0) > tol * scale and ev.min(initial=0.0) < -tol * scale)


# ------------------------------------------------------------------ block map


def _cl_ll(ell: int) -> NumericModule:
    """Irreducible graded Cl_{l,l}-module: l generators squaring to +1, then l to -1."""
    fp = np.array([[0.0, 1.0], [1.0, 0.0]])
    fm = np.array([[0.0, -1.0], [1.0, 0.0]])
    z = np.diag([1.0, -1.0])
    if ell == 0:
        return NumericModule(0, [], np.eye(1))
    gens_p, gens_m = [], []
    for j in range(ell):
        left = [z] * j
        right = [np.eye(2)] * (ell - j - 1)
        for f, bucket in ((fp, gens_p), (fm, gens_m)):
            m = np.eye(1)
            for piece in left + [f] + right:
                m = np.kron(m, piece)
            bucket.append(m)
    eps = np.eye(1)
    for _ in range(ell):
        eps = np.kron(eps, z)
    return NumericModule(0, gens_p + gens_m, eps)


def btx_map(F: np.ndarray, n: int, module) -> tuple[np.ndarray, NumericModule]:
    """The block map from Fred_n(H) to Fred_{-4k-l}(H (x) V), n = 4k - l > 0.

    Returns F' = F (x) eps_V (the displayed block formula) together with the
    Cl_{4k+l} action on H (x) V, produced from Cl_{0,n} (x) Cl_{l,l} by
    trading four +1 generators a_i for a_i a_1 a_2 a_3 a_4 at a time.
    """
    if n <= 0:
        raise FredholmError("the block map is defined for n > 0")
    mod = _as_numeric(module)
    k = math.ceil(n / 4)
    ell = 4 * k - n
    v = _cl_ll(ell)
    h_eps = mod.grading
    dv = v.dim
    pos = [np.kron(e, np.eye(dv)) for e in mod.generators]
    pos += [np.kron(h_eps, f) for f in v.generators[:ell]]
    neg = [np.kron(h_eps, f) for f in v.generators[ell:]]
    flipped = []
    for b in range(k):
        block = pos[4 * b : 4 * b + 4]
        omega = block[0] @ block[1] @ block[2] @ block[3]
        flipped += [a @ omega for a in block]
    eps = np.kron(h_eps, v.grading)
    # even vectors first
    order = np.argsort(-np.diag(eps), kind="stable")
    perm = np.eye(eps.shape[0])[order]
    gens = [perm @ g @ perm.T for g in flipped + neg]
    out = NumericModule(4 * k + ell, gens, perm @ eps @ perm.T)
    Fp = perm @ np.kron(F, v.grading) @ perm.T
    return Fp, out


# ------------------------------------------------------------------ random operators


def clifford_average(X: np.ndarray, module: NumericModule) -> np.ndarray:
    """Projection onto the commutant: average of e_I X e_I^{-1} over all monomials."""
    gens = module.generators
    out = np.zeros_like(X)
    for mask in range(1 << len(gens)):
        m = np.eye(X.shape[0])
        for i, g in enumerate(gens):
            if mask >> i & 1:
                m = m @ g
        out = out + m @ X @ np.linalg.inv(m)
    return out / (1 << len(gens))


def random_admissible(rng: np.random.Generator, module: NumericModule, scale: float = 1.0) -> np.ndarray:
    """A random odd, symmetric, Clifford-linear operator."""
    n = module.dim
    X = rng.standard_normal((n, n))
    X = (X + X.T) / 2
    eps = module.grading
    X = (X - eps @ X @ eps) / 2
    X = clifford_average(X, module)
    X = (X + X.T) / 2
    return scale * X


def standard_module(n: int, dim: int) -> NumericModule:
    """A graded Cl_{-n}-module of the given dimension, cycling through the irreducible classes."""
    irr = [NumericModule.from_module(m) for m in irreducible_graded_modules(-n, "R")]
    irr = [NumericModule(m.degree, [g.real for g in m.generators], m.grading) for m in irr]
    d = irr[0].dim
    if dim % d:
        raise FredholmError(f"dimension {dim} is not a multiple of {d}")
    pieces = [irr[i % len(irr)] for i in range(dim // d)]
    gens = [np.zeros((dim, dim)) for _ in irr[0].generators]
    eps = np.zeros((dim, dim))
    for j, m in enumerate(pieces):
        sl = slice(j * d, (j + 1) * d)
        for g, h in zip(gens, m.generators):
            g[sl, sl] = h
        eps[sl, sl] = m.grading
    order = np.argsort(-np.diag(eps), kind="stable")
    perm = np.eye(dim)[order]
    return NumericModule(-n, [perm @ g @ perm.T for g in gens], perm @ eps @ perm.T)
