"""Graded Chevalley-Eilenberg cochains, differential, cohomology and brackets.

A cochain in ``C^q(L, M)(m)`` sends basis inputs of degrees ``g_1..g_q`` to
``M(g_1 + ... + g_q - m)``.  Coordinates are taken on the basis of pairs
``(I, k)``: ``I`` a strictly increasing ``q``-tuple of ``L`` basis indices
(lexicographic), ``k`` a basis index of ``M`` of the forced degree.

The differential is the standard one::

    (d g)(x_1..x_{q+1}) = sum_u (-1)^(u+1) x_u . g(..^x_u..)
                        + sum_{s<t} (-1)^(s+t) g([x_s, x_t], ..^x_s..^x_t..)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Sequence

import numpy as np

from .coeff import Mat, Subquotient, homology
from .graded_lie import GradedLieAlgebra, LieError, LieModule, adjoint_module, bracket_eval


def sort_with_sign(idx: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Sorted tuple and permutation sign; sign 0 when an index repeats."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return tuple(sorted(idx)), 0
    sign = 1
    arr = idx[:]
    for i in range(len(arr)):
        for j in range(len(arr) - 1 - i):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                sign = -sign
    return tuple(arr), sign


@dataclass(frozen=True, eq=False)
class CochainBasis:
    L: GradedLieAlgebra
    M: LieModule
    arity: int
    grade: int
    elements: tuple[tuple[tuple[int, ...], int], ...]
    index: dict

    @property
    def dim(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


def _tuples_by_degree(L: GradedLieAlgebra, q: int) -> Iterator[tuple[tuple[int, ...], int]]:
    for I in itertools.combinations(range(L.dim), q):
        yield I, sum(L.degrees[i] for i in I)


_MODULE_CACHE: dict[int, LieModule] = {}


def _module(L: GradedLieAlgebra, M: LieModule | None) -> LieModule:
    if M is not None:
        if M.algebra is not L and M.algebra != L:
            raise LieError("module is over a different Lie algebra")
        return M
    key = id(L)
    cached = _MODULE_CACHE.get(key)
    if cached is None or cached.algebra is not L:
        cached = adjoint_module(L)
        _MODULE_CACHE[key] = cached
    return cached


@lru_cache(maxsize=4096)
def _basis(L: GradedLieAlgebra, M: LieModule, q: int, m: int) -> CochainBasis:
    by_deg: dict[int, tuple[int, ...]] = {}
    for k, dg in enumerate(M.degrees):
        by_deg.setdefault(dg, ())
        by_deg[dg] += (k,)
    elems = []
    for I, dg in _tuples_by_degree(L, q):
        for k in by_deg.get(dg - m, ()):
            elems.append((I, k))
    elems = tuple(elems)
    return CochainBasis(L, M, q, m, elems, {e: n for n, e in enumerate(elems)})


def cochain_basis(L: GradedLieAlgebra, M: LieModule | None = None, q: int = 0, m: int = 0) -> CochainBasis:
    """Ordered basis of ``C^q(L, M)(m)`` (``M`` defaults to the adjoint module)."""
    if q < 0:
        raise LieError("arity must be non-negative")
    return _basis(L, _module(L, M), q, m)


@dataclass(frozen=True, eq=False)
class Cochain:
    basis: CochainBasis
    coords: tuple[int, ...]

    @property
    def arity(self) -> int:
        return self.basis.arity

    @property
    def grade(self) -> int:
        return self.basis.grade

    @property
    def L(self) -> GradedLieAlgebra:
        return self.basis.L

    @property
    def M(self) -> LieModule:
        return self.basis.M

    @classmethod
    def zero(cls, basis: CochainBasis) -> "Cochain":
        return cls(basis, (0,) * basis.dim)

    @classmethod
    def from_function(cls, basis: CochainBasis, f: Callable[[tuple[int, ...]], Sequence[int]]) -> "Cochain":
        """Build from values ``f(I)`` (a dense ``M`` vector) on increasing tuples ``I``."""
        q = basis.L.ring.modulus
        coords = []
        cache: dict[tuple[int, ...], Sequence[int]] = {}
        for I, k in basis.elements:
            if I not in cache:
                cache[I] = f(I)
            coords.append(int(cache[I][k]) % q)
        return cls(basis, tuple(coords))

    def value(self, idx: Sequence[int]) -> tuple[int, ...]:
        """Value on basis inputs ``idx`` (any order) as a dense ``M`` vector."""
        q = self.L.ring.modulus
        I, sign = sort_with_sign(idx)
        out = [0] * self.M.dim
        if sign == 0:
            return tuple(out)
        for k in range(self.M.dim):
            n = self.basis.index.get((I, k))
            if n is not None and self.coords[n]:
                out[k] = (sign * self.coords[n]) % q
        return tuple(out)

    def value_on(self, vectors: Sequence[Sequence[int]]) -> tuple[int, ...]:
        """Multilinear evaluation on arbitrary elements of ``L``."""
        q = self.L.ring.modulus
        out = [0] * self.M.dim
        supports = [[(i, a) for i, a in enumerate(v) if a % q] for v in vectors]
        for combo in itertools.product(*supports):
            coef = 1
            for _, a in combo:
                coef *= a
            val = self.value([i for i, _ in combo])
            for k, x in enumerate(val):
                if x:
                    out[k] = (out[k] + coef * x) % q
        return tuple(out)

    def __add__(self, other: "Cochain") -> "Cochain":
        if other.basis is not self.basis:
            raise LieError("cochains live in different spaces")
        q = self.L.ring.modulus
        return Cochain(self.basis, tuple((a + b) % q for a, b in zip(self.coords, other.coords)))

    def scale(self, c: int) -> "Cochain":
        q = self.L.ring.modulus
        return Cochain(self.basis, tuple((c * a) % q for a in self.coords))

    def __neg__(self) -> "Cochain":
        return self.scale(-1)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-other)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.basis is other.basis and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((id(self.basis), self.coords))


@lru_cache(maxsize=1024)
def _delta(L: GradedLieAlgebra, M: LieModule, q: int, m: int) -> Mat:
    src = _basis(L, M, q, m)
    dst = _basis(L, M, q + 1, m)
    mod = L.ring.modulus
    out = np.zeros((src.dim, dst.dim), dtype=np.int64)
    if src.dim == 0 or dst.dim == 0:
        return Mat(L.ring, out, ncols=dst.dim)
    src_ks: dict[tuple[int, ...], list[int]] = {}
    for I, k in src.elements:
        src_ks.setdefault(I, []).append(k)
    for col, (J, kout) in enumerate(dst.elements):
        # contraction terms: x_{j_u} . g(J minus j_u)
        for u, ju in enumerate(J):
            sign = 1 if u % 2 == 0 else -1
            I = J[:u] + J[u + 1 :]
            for k in src_ks.get(I, ()):
                for kk, c in M.action.get((ju, k), ()):
                    if kk == kout:
                        out[src.index[(I, k)], col] += sign * c
        # bracket terms: g([x_s, x_t], rest)
        for s, t in itertools.combinations(range(len(J)), 2):
            sign = 1 if (s + t) % 2 == 0 else -1
            rest = J[:s] + J[s + 1 : t] + J[t + 1 :]
            for p, c in L.table.get((J[s], J[t]), ()):
                I, sg = sort_with_sign((p,) + rest)
                if sg == 0:
                    continue
                row = src.index.get((I, kout))
                if row is not None:
                    out[row, col] += sign * sg * c
    return Mat(L.ring, out % mod, ncols=dst.dim)


def delta_matrix(L: GradedLieAlgebra, M: LieModule | None = None, q: int = 0, m: int = 0) -> Mat:
    """Matrix of ``d: C^q(L,M)(m) -> C^{q+1}(L,M)(m)`` acting on row vectors."""
    if q < 0:
        raise LieError("arity must be non-negative")
    return _delta(L, _module(L, M), q, m)


def delta(c: Cochain) -> Cochain:
    mat = _delta(c.L, c.M, c.arity, c.grade)
    dst = _basis(c.L, c.M, c.arity + 1, c.grade)
    if c.basis.dim == 0:
        return Cochain.zero(dst)
    row = Mat(c.L.ring, [list(c.coords)], ncols=c.basis.dim) @ mat
    return Cochain(dst, row.row(0))


@dataclass(frozen=True, eq=False)
class CohomologySpace:
    """``H^q(L, M)(m)`` with deterministic representative cocycles."""

    basis: CochainBasis
    space: Subquotient

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def representatives(self) -> list[Cochain]:
        return [Cochain(self.basis, r) for r in (self.space.representatives.row(i) for i in range(self.space.representatives.nrows))]

    def is_cocycle(self, c: Cochain) -> bool:
        return delta(c).is_zero()

    def class_of(self, c: Cochain) -> tuple[int, ...]:
        if c.basis is not self.basis:
            raise LieError("cochain lives in a different space")
        if not self.is_cocycle(c):
            raise LieError("cochain is not closed")
        if self.basis.dim == 0:
            return ()
        return self.space.coordinates(c.coords)

    def cocycle(self, coords: Sequence[int]) -> Cochain:
        if self.basis.dim == 0:
            return Cochain.zero(self.basis)
        return Cochain(self.basis, self.space.lift(coords))


def cohomology_space(L: GradedLieAlgebra, M: LieModule | None = None, q: int = 0, m: int = 0) -> CohomologySpace:
    M = _module(L, M)
    basis = _basis(L, M, q, m)
    prev = _basis(L, M, q - 1, m) if q > 0 else None
    d_in = _delta(L, M, q - 1, m) if q > 0 else Mat.zeros(L.ring, 0, basis.dim)
    d_out = _delta(L, M, q, m)
    if prev is not None and prev.dim == 0:
        d_in = Mat.zeros(L.ring, 0, basis.dim)
    return CohomologySpace(basis, homology(d_in, d_out))


def nonempty_grades(L: GradedLieAlgebra, M: LieModule | None = None, q: int = 0) -> list[int]:
    M = _module(L, M)
    tdegs = {dg for _, dg in _tuples_by_degree(L, q)}
    return sorted({t - dm for t in tdegs for dm in set(M.degrees)})


# ------------------------------------------------------------------ brackets


def _unshuffles(n: int, a: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], int]]:
    """Splits of positions ``0..n-1`` into increasing blocks of sizes ``a`` and ``n - a``, with sign."""
    for first in itertools.combinations(range(n), a):
        rest = tuple(i for i in range(n) if i not in first)
        _, sign = sort_with_sign(first + rest)
        yield first, rest, sign


def _compose(phi: Cochain, psi: Cochain, out_basis: CochainBasis) -> list[int]:
    """Coordinates of ``phi o psi``: ``psi`` fills the last slot of ``phi``.

    With this placement ``[mu_L, g] = d g`` holds in every arity.
    """
    L = phi.L
    q = L.ring.modulus
    p = phi.arity
    coords = [0] * out_basis.dim
    tuples = {}
    for n, (J, k) in enumerate(out_basis.elements):
        if J not in tuples:
            acc = [0] * L.dim
            for rest, last, sign in _unshuffles(len(J), p - 1):
                inner = psi.value([J[i] for i in last])
                if not any(inner):
                    continue
                outer = phi.value_on([L.basis_vector(J[i]) for i in rest] + [inner])
                for kk, x in enumerate(outer):
                    if x:
                        acc[kk] = (acc[kk] + sign * x) % q
            tuples[J] = acc
        coords[n] = tuples[J][k]
    return coords


def nr_bracket(phi: Cochain, psi: Cochain) -> Cochain:
    """Graded cochain bracket ``[phi, psi] = phi o psi - (-1)^{(p-1)(q-1)} psi o phi``.

    Both cochains must take values in the adjoint module.  The result lies in
    ``C^{p+q-1}(L, L)(m_phi + m_psi)``.
    """
    if phi.arity < 1 or psi.arity < 1:
        raise LieError("nr_bracket needs cochains of arity >= 1")
    L = phi.L
    if psi.L is not L and psi.L != L:
        raise LieError("cochains on different Lie algebras")
    if tuple(phi.M.degrees) != tuple(L.degrees) or tuple(psi.M.degrees) != tuple(L.degrees):
        raise LieError("nr_bracket needs adjoint-type coefficients")
    out = _basis(L, phi.M, phi.arity + psi.arity - 1, phi.grade + psi.grade)
    q = L.ring.modulus
    a = _compose(phi, psi, out)
    b = _compose(psi, phi, out)
    sign = -1 if ((phi.arity - 1) * (psi.arity - 1)) % 2 == 0 else 1
    return Cochain(out, tuple((x + sign * y) % q for x, y in zip(a, b)))


def bracket_cochain(L: GradedLieAlgebra) -> Cochain:
    """The structure constants of ``L`` as an element of ``C^2(L, L)(0)``."""
    basis = cochain_basis(L, None, 2, 0)
    return Cochain.from_function(basis, lambda I: bracket_eval(L, L.basis_vector(I[0]), L.basis_vector(I[1])))


def cup_bracket(c1: Cochain, c2: Cochain, target: GradedLieAlgebra) -> Cochain:
    """``(c1 u c2)(x..) = sum_unshuffles sign [c1(..), c2(..)]`` with values bracketed in ``target``.

    ``c1`` and ``c2`` take values in a module whose underlying space is
    ``target`` (e.g. ``Ad o rho``); the result has arity ``p + q``.
    """
    G = c1.L
    if c1.M is not c2.M:
        raise LieError("cochains must share the coefficient module")
    if tuple(c1.M.degrees) != tuple(target.degrees):
        raise LieError("coefficient module does not match the target algebra")
    p, r = c1.arity, c2.arity
    out = _basis(G, c1.M, p + r, c1.grade + c2.grade)
    q = G.ring.modulus
    coords = [0] * out.dim
    cache = {}
    for n, (J, k) in enumerate(out.elements):
        if J not in cache:
            acc = [0] * target.dim
            for first, rest, sign in _unshuffles(len(J), p):
                a = c1.value([J[i] for i in first])
                b = c2.value([J[i] for i in rest])
                if any(a) and any(b):
                    br = bracket_eval(target, a, b)
                    acc = [(x + sign * y) % q for x, y in zip(acc, br)]
            cache[J] = acc
        coords[n] = cache[J][k]
    return Cochain(out, tuple(coords))
