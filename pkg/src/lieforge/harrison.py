"""Low-degree Harrison cohomology of Artin local algebras with residue-field modules.

Cochains are computed relative to the ring of definition, so for an algebra
over Z/l^N with coefficients in an F_l-module only ``A / lA`` matters.  The
complex is

    Hom(A, M) --d1--> Hom(S^2 A, M) --d2--> Hom(A^{(x)3}, M)

with ``H^1 = ker d1`` (derivations) and ``H^2 = ker d2 / im d1``
(infinitesimal extensions).  Symmetric pairs are ordered ``a <= b``
lexicographically; triples run over all ordered triples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .artin import AlgebraMorphism, AlgExtension, ArtinLocalAlgebra
from .coeff import CoeffRing, Mat, Subquotient, homology


class HarrisonError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ResidueModule:
    """An F_l-module over ``A``: ``action[a]`` is the matrix of ``e_a`` acting on row vectors."""

    algebra: ArtinLocalAlgebra
    dim: int
    action: np.ndarray

    def __post_init__(self) -> None:
        l = self.algebra.ring.l
        act = np.mod(np.asarray(self.action, dtype=np.int64), l)
        if act.shape != (self.algebra.rank, self.dim, self.dim):
            raise HarrisonError(f"action must have shape {(self.algebra.rank, self.dim, self.dim)}")
        act.setflags(write=False)
        object.__setattr__(self, "action", act)

    @classmethod
    def trivial(cls, A: ArtinLocalAlgebra, dim: int = 1) -> "ResidueModule":
        """``k^dim`` with the maximal ideal acting by zero."""
        act = np.zeros((A.rank, dim, dim), dtype=np.int64)
        for a in range(A.rank):
            act[a] = A.residue(A.basis_vector(a)) * np.eye(dim, dtype=np.int64)
        return cls(A, dim, act)

    @property
    def field(self) -> CoeffRing:
        return self.algebra.ring.residue_field

    def problems(self) -> list[str]:
        A = self.algebra
        l = A.ring.l
        out = []
        if not (self.action[A.unit] == np.eye(self.dim, dtype=np.int64)).all():
            out.append("unit does not act as the identity")
        tab = A.table % l
        for a, b in itertools.product(range(A.rank), repeat=2):
            lhs = np.einsum("c,cij->ij", tab[a, b], self.action) % l
            rhs = (self.action[a] @ self.action[b]) % l
            if not (lhs == rhs).all():
                out.append(f"action is not multiplicative at ({A.labels[a]}, {A.labels[b]})")
                return out
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ResidueModule):
            return NotImplemented
        return self.algebra == other.algebra and self.dim == other.dim and bool((self.action == other.action).all())

    def __hash__(self) -> int:
        return hash((self.algebra, self.dim, self.action.tobytes()))

    def is_killed_by_maximal(self) -> bool:
        return not any(self.action[a].any() for a in self.algebra.maximal)


def _checked(A: ArtinLocalAlgebra, M: ResidueModule | None) -> ResidueModule:
    if M is None:
        return ResidueModule.trivial(A)
    if M.algebra != A:
        raise HarrisonError("module is over a different algebra")
    problems = M.problems()
    if problems:
        raise HarrisonError("not a module: " + "; ".join(problems))
    return M


def symmetric_pairs(r: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(r) for b in range(a, r)]


@lru_cache(maxsize=64)
def _differentials(A: ArtinLocalAlgebra, M: ResidueModule) -> tuple[Mat, Mat]:
    k = M.field
    l = k.l
    r, n = A.rank, M.dim
    tab = A.table % l
    act = M.action
    pairs = symmetric_pairs(r)
    pair_index = {p: i for i, p in enumerate(pairs)}
    triples = list(itertools.product(range(r), repeat=3))

    def pidx(a, b):
        return pair_index[(a, b) if a <= b else (b, a)]

    # d1: row (x, j) is psi with psi(e_x) = f_j
    d1 = np.zeros((r * n, len(pairs) * n), dtype=np.int64)
    for x in range(r):
        for j in range(n):
            row = d1[x * n + j]
            for p, (a, b) in enumerate(pairs):
                val = np.zeros(n, dtype=np.int64)
                e = np.zeros(n, dtype=np.int64)
                e[j] = 1
                if b == x:
                    val += e @ act[a]
                if a == x:
                    val += e @ act[b]
                val -= tab[a, b, x] * e
                row[p * n : (p + 1) * n] += val
    d2 = np.zeros((len(pairs) * n, len(triples) * n), dtype=np.int64)
    for t, (a, b, c) in enumerate(triples):
        # a.phi(b,c) - phi(ab,c) + phi(a,bc) - c.phi(a,b)
        for j in range(n):
            e = np.zeros(n, dtype=np.int64)
            e[j] = 1
            d2[pidx(b, c) * n + j, t * n : (t + 1) * n] += e @ act[a]
            d2[pidx(a, b) * n + j, t * n : (t + 1) * n] -= e @ act[c]
        for x in range(r):
            if tab[a, b, x]:
                for j in range(n):
                    d2[pidx(x, c) * n + j, t * n + j] -= tab[a, b, x]
            if tab[b, c, x]:
                for j in range(n):
                    d2[pidx(a, x) * n + j, t * n + j] += tab[b, c, x]
    return Mat(k, d1, ncols=len(pairs) * n), Mat(k, d2, ncols=len(triples) * n)


def harrison_differentials(A: ArtinLocalAlgebra, M: ResidueModule | None = None) -> tuple[Mat, Mat]:
    """Matrices of ``d1`` and ``d2`` acting on row vectors of cochain coordinates."""
    return _differentials(A, _checked(A, M))


def harrison_cohomology(A: ArtinLocalAlgebra, M: ResidueModule | None = None, i: int = 1) -> Subquotient:
    if i not in (1, 2):
        raise HarrisonError(f"only H^1 and H^2 are available, not H^{i}")
    d1, d2 = harrison_differentials(A, M)
    if i == 1:
        return homology(Mat.zeros(d1.ring, 0, d1.nrows), d1)
    return homology(d1, d2)


def ext_inf(A: ArtinLocalAlgebra, M: ResidueModule | None = None) -> Subquotient:
    """Infinitesimal extensions of ``A`` by ``M``, as ``H^2``."""
    return harrison_cohomology(A, M, 2)


def cocycle_value(A: ArtinLocalAlgebra, coords, a: int, b: int, dim: int = 1) -> tuple[int, ...]:
    """Value ``f(e_a, e_b)`` of a symmetric 2-cochain given by coordinates."""
    if a > b:
        a, b = b, a
    p = symmetric_pairs(A.rank).index((a, b))
    return tuple(int(x) for x in coords[p * dim : (p + 1) * dim])


def normalized_cocycles(A: ArtinLocalAlgebra) -> list[tuple[int, ...]]:
    """Representatives of an F_l-basis of ``H^2(A, k)`` with ``f(1, -) = 0``."""
    H = harrison_cohomology(A, None, 2)
    l = A.ring.l
    pairs = symmetric_pairs(A.rank)
    unit_pair = pairs.index((A.unit, A.unit))
    # d1 of the residue functional has value 1 at (1, 1)
    d1, _ = harrison_differentials(A)
    shift = d1.data[A.unit]
    out = []
    for z in H.representatives.data:
        c = int(z[unit_pair]) % l
        out.append(tuple(int(v) for v in (z - c * shift) % l))
    return out


def universal_extension(A: ArtinLocalAlgebra) -> AlgExtension:
    """``0 -> Ext(A, k)' -> C -> A -> 0`` through which every extension by a k-module factors.

    Only algebras over F_l are supported.
    """
    if not A.is_over_field:
        raise HarrisonError("universal extension is only built for algebras over F_l")
    cocycles = normalized_cocycles(A)
    h = len(cocycles)
    r = A.rank
    l = A.ring.l
    C_rank = r + h
    t = np.zeros((C_rank, C_rank, C_rank), dtype=np.int64)
    t[:r, :r, :r] = A.table
    for a in range(r):
        for b in range(r):
            for i, f in enumerate(cocycles):
                t[a, b, r + i] = cocycle_value(A, f, a, b)[0]
        for i in range(h):
            res = A.residue(A.basis_vector(a))
            t[a, r + i, r + i] = res
            t[r + i, a, r + i] = res
    labels = A.labels + tuple(_fresh_labels(A.labels, h))
    C = ArtinLocalAlgebra(A.ring, labels, A.unit, t % l)
    proj = np.zeros((C_rank, r), dtype=np.int64)
    proj[:r, :r] = np.eye(r, dtype=np.int64)
    ker = Mat(A.ring, np.eye(C_rank, dtype=np.int64)[r:], ncols=C_rank)
    return AlgExtension(C, AlgebraMorphism(C, A, proj), ker)


def _fresh_labels(taken, h: int) -> list[str]:
    names = []
    i = 1
    while len(names) < h:
        name = f"u{i}"
        if name not in taken:
            names.append(name)
        i += 1
    return names


def extension_cocycle(ext: AlgExtension) -> list[tuple[int, ...]]:
    """Symmetric 2-cocycles (one per kernel basis vector) classifying ``ext``.

    Uses the canonical section ``e_a -> lift(e_a)`` of the projection.
    """
    from .artin import canonical_lift

    B, A = ext.total, ext.base
    if not A.is_over_field:
        raise HarrisonError("extension cocycles are only computed over F_l")
    lifts = [canonical_lift(ext.projection, A.basis_vector(a)) for a in range(A.rank)]
    pairs = symmetric_pairs(A.rank)
    k = ext.kernel_dim
    vals = np.zeros((k, len(pairs)), dtype=np.int64)
    for p, (a, b) in enumerate(pairs):
        prod = B.mul(lifts[a], lifts[b])
        back = canonical_lift(ext.projection, A.mul(A.basis_vector(a), A.basis_vector(b)))
        diff = tuple((x - y) % B.ring.modulus for x, y in zip(prod, back))
        coords = ext.kernel_coordinates(diff)
        vals[:, p] = coords
    return [tuple(int(v) for v in row) for row in vals]


def classifying_map(ext: AlgExtension, universal: AlgExtension | None = None) -> np.ndarray:
    """The unique kernel map ``Ext(A, k)' -> M`` pushing the universal extension onto ``ext``.

    Returned as a ``(dim H^2) x (dim M)`` matrix over F_l.
    """
    A = ext.base
    H = harrison_cohomology(A, None, 2)
    fs = extension_cocycle(ext)
    # class of the extension in H^2 (x) M, coordinate-wise on the kernel basis
    coords = [H.coordinates(f) for f in fs]
    return np.array(coords, dtype=np.int64).reshape(len(fs), H.dim).T % A.ring.l
