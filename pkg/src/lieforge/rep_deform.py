"""Deformations of graded representations ``rho_bar: G -> Lbar`` with fixed reduction.

``G`` and the target ``T`` are defined over a common ring Z/l^N; ``rho_bar``
is a morphism of their reductions mod l.  A lift over an Artin algebra ``A``
(an algebra over that ring) is an ``A``-linear bracket-preserving map
``G (x) A -> T (x) A`` stored as ``images[i, k]`` in ``A``:
``rho(e_i) = sum_k e_k (x) images[i, k]``.

Equivalence of lifts is conjugation by degree-0 inner automorphisms of
``T (x) A``.  Targets here are positively graded, so that gauge group is
trivial and lifts are their own classes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .artin import (
    AlgebraMorphism,
    AlgExtension,
    ArtinLocalAlgebra,
    canonical_lift,
    extension_from_surjection,
    square_zero_algebra,
)
from .ce_cohomology import Cochain, CohomologySpace, cochain_basis, cohomology_space, cup_bracket, delta_matrix
from .coeff import RowSolver
from .deformation import _amul_tensor
from .graded_lie import (
    GradedLieAlgebra,
    GradedMorphism,
    LieModule,
    adjoint_module,
    pullback_module,
    reduce_mod_l,
    validate_module,
    validate_morphism,
)


class RepError(ValueError):
    pass


class SearchSpaceTooLarge(RepError):
    def __init__(self, size: int, bound: int):
        super().__init__(f"search space has {size} candidates, above the bound {bound}")
        self.size = size
        self.bound = bound


@dataclass(frozen=True, eq=False)
class GradedRep:
    source: GradedLieAlgebra
    target: GradedLieAlgebra
    rho_bar: GradedMorphism
    module: LieModule = field(init=False, repr=False)

    def __post_init__(self) -> None:
        G, T = self.source, self.target
        if G.ring != T.ring:
            raise RepError("source and target must be defined over the same ring")
        if G.truncation != T.truncation:
            raise RepError("source and target must have equal truncation")
        if self.rho_bar.source != reduce_mod_l(G) or self.rho_bar.target != reduce_mod_l(T):
            raise RepError("rho_bar must map the reduction of the source to the reduction of the target")
        issues = validate_morphism(self.rho_bar)
        if not issues.ok:
            raise RepError("rho_bar is not a Lie morphism: " + "; ".join(i.describe() for i in issues))
        M = pullback_module(self.rho_bar, adjoint_module(self.rho_bar.target))
        if not validate_module(M).ok:
            raise RepError("Ad o rho_bar is not a module")
        object.__setattr__(self, "module", M)

    @classmethod
    def from_images(cls, source: GradedLieAlgebra, target: GradedLieAlgebra, images: Sequence[Sequence[int]]) -> "GradedRep":
        Gb, Tb = reduce_mod_l(source), reduce_mod_l(target)
        return cls(source, target, GradedMorphism.from_images(Gb, Tb, images))

    @classmethod
    def identity(cls, L: GradedLieAlgebra) -> "GradedRep":
        return cls(L, L, GradedMorphism.identity(reduce_mod_l(L)))

    @classmethod
    def zero(cls, source: GradedLieAlgebra, target: GradedLieAlgebra) -> "GradedRep":
        return cls(source, target, GradedMorphism.zero(reduce_mod_l(source), reduce_mod_l(target)))

    @property
    def reduced_source(self) -> GradedLieAlgebra:
        return self.rho_bar.source

    @property
    def reduced_target(self) -> GradedLieAlgebra:
        return self.rho_bar.target

    @property
    def l(self) -> int:
        return self.source.ring.l

    def accepts(self, A: ArtinLocalAlgebra) -> bool:
        return A.ring.l == self.l and A.ring.N <= self.source.ring.N

    def cohomology(self, q: int) -> CohomologySpace:
        return cohomology_space(self.reduced_source, self.module, q, 0)


def _lifted_consts(L: GradedLieAlgebra, A: ArtinLocalAlgebra) -> np.ndarray:
    c = np.zeros((L.dim, L.dim, L.dim, A.rank), dtype=np.int64)
    c[..., A.unit] = L.structure_tensor() % A.ring.modulus
    return c


@dataclass(frozen=True, eq=False)
class RepDeformation:
    rep: GradedRep
    base: ArtinLocalAlgebra
    images: np.ndarray

    def __post_init__(self) -> None:
        if not self.rep.accepts(self.base):
            raise RepError(f"{self.base.ring} is not an algebra over {self.rep.source.ring}")
        G, T, A = self.rep.source, self.rep.target, self.base
        im = np.mod(np.asarray(self.images, dtype=np.int64), A.ring.modulus)
        if im.shape != (G.dim, T.dim, A.rank):
            raise RepError(f"images must have shape {(G.dim, T.dim, A.rank)}")
        im.setflags(write=False)
        object.__setattr__(self, "images", im)

    @classmethod
    def trivial(cls, rep: GradedRep, A: ArtinLocalAlgebra) -> "RepDeformation":
        G, T = rep.source, rep.target
        im = np.zeros((G.dim, T.dim, A.rank), dtype=np.int64)
        im[..., A.unit] = rep.rho_bar.matrix.data
        return cls(rep, A, im)

    def bracket_defect(self) -> np.ndarray:
        """``rho([e_i, e_j]) - [rho e_i, rho e_j]`` for all ``i, j``: shape ``(nG, nG, nT, r)``."""
        G, T, A = self.rep.source, self.rep.target, self.base
        q = A.ring.modulus
        cG = G.structure_tensor() % q
        left = np.einsum("ijm,mka->ijka", cG, self.images) % q
        X = self.images
        XY = _amul_tensor(A.table, X[:, None, :, None, :], X[None, :, None, :, :], q)
        cT = _lifted_consts(T, A)
        right = _amul_tensor(A.table, XY[:, :, :, :, None, :], cT[None, None, :, :, :, :], q).sum(axis=(2, 3)) % q
        return (left - right) % q

    def problems(self) -> list[str]:
        G, T, A = self.rep.source, self.rep.target, self.base
        out = []
        for i, k in zip(*np.nonzero(self.images.any(axis=2))):
            if G.degrees[i] != T.degrees[k]:
                out.append(f"image of {G.labels[i]} has a component in the wrong degree")
                break
        res = np.zeros((G.dim, T.dim), dtype=np.int64)
        for a in range(A.rank):
            r = A.residue(A.basis_vector(a))
            if r:
                res = (res + r * self.images[..., a]) % self.rep.l
        if not (res == self.rep.rho_bar.matrix.data % self.rep.l).all():
            out.append("reduction modulo the maximal ideal differs from rho_bar")
        if self.bracket_defect().any():
            out.append("brackets are not preserved")
        return out

    def is_valid(self) -> bool:
        return not self.problems()

    def push_forward(self, f: AlgebraMorphism) -> "RepDeformation":
        if f.source != self.base:
            raise RepError("morphism does not start at the lift's base")
        q = f.target.ring.modulus
        return RepDeformation(self.rep, f.target, np.einsum("ika,ab->ikb", self.images, f.matrix) % q)

    def key(self) -> bytes:
        return self.images.tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RepDeformation):
            return NotImplemented
        return self.rep is other.rep and self.base == other.base and bool((self.images == other.images).all())

    def __hash__(self) -> int:
        return hash((id(self.rep), self.base, self.key()))


# --------------------------------------------------------------- tangent


@dataclass(frozen=True, eq=False)
class TangentSpace:
    rep: GradedRep
    space: CohomologySpace

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def representatives(self) -> list[Cochain]:
        return self.space.representatives

    def first_order_lift(self, coords: Sequence[int]) -> RepDeformation:
        """``rho_bar + eps c`` over ``k[eps]/eps^2`` for the class with the given coordinates."""
        c = self.space.cocycle(coords)
        A = square_zero_algebra(self.rep.reduced_source.ring, ["eps"])
        return add_cochain(RepDeformation.trivial(self.rep, _over_rep_ring(self.rep, A)), c, A.basis_vector(1))

    def first_order_lifts(self) -> list[RepDeformation]:
        return [self.first_order_lift(tuple(1 if b == a else 0 for b in range(self.dim))) for a in range(self.dim)]


def _over_rep_ring(rep: GradedRep, A: ArtinLocalAlgebra) -> ArtinLocalAlgebra:
    if not rep.accepts(A):
        raise RepError(f"{A.ring} is not an algebra over {rep.source.ring}")
    return A


def add_cochain(rho: RepDeformation, c: Cochain, u: Sequence[int]) -> RepDeformation:
    """``rho + c (x) u`` for a grade-0 1-cochain ``c`` with values in ``Ad o rho_bar``."""
    G = rho.rep.source
    q = rho.base.ring.modulus
    im = rho.images.copy()
    uu = np.asarray(u, dtype=np.int64)
    for i in range(G.dim):
        v = c.value((i,))
        for k, x in enumerate(v):
            if x:
                im[i, k] = (im[i, k] + x * uu) % q
    return RepDeformation(rho.rep, rho.base, im)


def tangent_space(rep: GradedRep) -> TangentSpace:
    return TangentSpace(rep, rep.cohomology(1))


# ------------------------------------------------------------- obstruction


@dataclass(frozen=True)
class ObstructionCertificate:
    """Class in ``H^2(G, Ad o rho_bar)(0) (x) I``: one coordinate tuple per kernel basis vector."""

    coords: tuple[tuple[int, ...], ...]
    witnesses: tuple[Cochain, ...] = field(compare=False, repr=False)

    @property
    def is_zero(self) -> bool:
        return not any(any(c) for c in self.coords)


def _as_extension(surj: AlgebraMorphism | AlgExtension) -> AlgExtension:
    if isinstance(surj, AlgExtension):
        problems = surj.problems()
        if problems:
            raise RepError("; ".join(problems))
        return surj
    try:
        return extension_from_surjection(surj)
    except ValueError as exc:
        raise RepError(f"not a small surjection: {exc}") from exc


def canonical_rep_lift(rho0: RepDeformation, ext: AlgExtension) -> RepDeformation:
    if ext.base != rho0.base:
        raise RepError("surjection does not end at the lift's base")
    B = ext.total
    G, T = rho0.rep.source, rho0.rep.target
    im = np.zeros((G.dim, T.dim, B.rank), dtype=np.int64)
    cache: dict[tuple[int, ...], tuple[int, ...]] = {}
    for i, k in zip(*np.nonzero(rho0.images.any(axis=2))):
        key = tuple(int(x) for x in rho0.images[i, k])
        if key not in cache:
            cache[key] = canonical_lift(ext.projection, key)
        im[i, k] = cache[key]
    return RepDeformation(rho0.rep, _over_rep_ring(rho0.rep, B), im)


def _defect_cochains(lifted: RepDeformation, ext: AlgExtension) -> list[Cochain]:
    rep = lifted.rep
    D = lifted.bracket_defect()
    nG, nT = rep.source.dim, rep.target.dim
    s = ext.kernel_dim
    parts = np.zeros((s, nG, nG, nT), dtype=np.int64)
    for i, j, k in zip(*np.nonzero(D.any(axis=3))):
        parts[:, i, j, k] = ext.kernel_coordinates(D[i, j, k])
    basis = cochain_basis(rep.reduced_source, rep.module, 2, 0)
    return [Cochain.from_function(basis, lambda I, t=t: parts[t][I]) for t in range(s)]


def rep_obstruction(rho0: RepDeformation, surj: AlgebraMorphism | AlgExtension) -> ObstructionCertificate:
    ext = _as_extension(surj)
    lifted = canonical_rep_lift(rho0, ext)
    witnesses = _defect_cochains(lifted, ext)
    H2 = rho0.rep.cohomology(2)
    coords = tuple(H2.class_of(w) if H2.basis.dim else () for w in witnesses)
    return ObstructionCertificate(coords, tuple(witnesses))


def lift_representation(rho0: RepDeformation, surj: AlgebraMorphism | AlgExtension) -> RepDeformation | ObstructionCertificate:
    ext = _as_extension(surj)
    cert = rep_obstruction(rho0, ext)
    if not cert.is_zero:
        return cert
    rho = canonical_rep_lift(rho0, ext)
    rep = rho0.rep
    b1 = cochain_basis(rep.reduced_source, rep.module, 1, 0)
    dmat = delta_matrix(rep.reduced_source, rep.module, 1, 0)
    for t, w in enumerate(cert.witnesses):
        if w.is_zero():
            continue
        x = RowSolver(dmat).solve(w.coords)
        if x is None:
            raise RepError("internal: zero class but defect is not exact")
        rho = add_cochain(rho, Cochain(b1, x), ext.kernel.row(t))
    if rho.bracket_defect().any():
        raise RepError("internal: corrected lift does not preserve brackets")
    return rho


# -------------------------------------------------------------- enumeration


def search_space_size(rep: GradedRep, A: ArtinLocalAlgebra) -> int:
    m_size = A.cardinality // A.ring.l
    total = 1
    for i in range(rep.source.dim):
        total *= m_size ** rep.target.rank(rep.source.degrees[i])
    return total


@dataclass(frozen=True)
class LiftEnumeration:
    lifts: tuple[RepDeformation, ...]
    classes: tuple[tuple[RepDeformation, ...], ...]
    gauge: str = "degree-0 inner automorphisms (trivial for positively graded targets)"

    def __len__(self) -> int:
        return len(self.lifts)


def enumerate_lifts(rep: GradedRep, A: ArtinLocalAlgebra, bound: int = 1 << 16) -> LiftEnumeration:
    """Every bracket-preserving lift of ``rho_bar`` over ``A``, by degree with pruning."""
    A = _over_rep_ring(rep, A)
    size = search_space_size(rep, A)
    if size > bound:
        raise SearchSpaceTooLarge(size, bound)
    G, T = rep.source, rep.target
    q = A.ring.modulus
    m_elems = [np.array(a, dtype=np.int64) for a in A.maximal_elements()]
    base = RepDeformation.trivial(rep, A).images
    found: list[RepDeformation] = []

    # each pair is checked once every image it involves has been chosen
    present = sorted(set(G.degrees))
    due: dict[int, list[tuple[int, int]]] = {}
    for i, j in itertools.combinations(range(G.dim), 2):
        s = G.degrees[i] + G.degrees[j]
        if s > G.truncation:
            continue
        ready = max([G.degrees[j]] + [dg for dg in present if dg <= s])
        due.setdefault(ready, []).append((i, j))

    def check(images, n) -> bool:
        pairs = due.get(n)
        if not pairs:
            return True
        rho = RepDeformation.__new__(RepDeformation)
        object.__setattr__(rho, "rep", rep)
        object.__setattr__(rho, "base", A)
        object.__setattr__(rho, "images", images)
        D = rho.bracket_defect()
        return not any(D[i, j].any() for i, j in pairs)

    order = list(range(G.dim))

    def rec(pos: int, images: np.ndarray):
        if pos == len(order):
            found.append(RepDeformation(rep, A, images.copy()))
            return
        i = order[pos]
        cols = list(T.piece(G.degrees[i]))
        for choice in itertools.product(range(len(m_elems)), repeat=len(cols)):
            im = images.copy()
            for k, c in zip(cols, choice):
                im[i, k] = (base[i, k] + m_elems[c]) % q
            done_degree = pos + 1 == len(order) or G.degrees[order[pos + 1]] != G.degrees[i]
            if done_degree and not check(im, G.degrees[i]):
                continue
            rec(pos + 1, im)

    rec(0, base.copy())
    return LiftEnumeration(tuple(found), tuple((r,) for r in found))


# ----------------------------------------------------------------- quadratic


@dataclass(frozen=True)
class QuadraticPresentation:
    """Order-2 presentation: ``h1`` parameters and one quadratic relation per ``H^2(0)`` coordinate.

    ``pairing[a][b]`` holds the ``H^2`` coordinates of the pairing of tangent
    basis vectors ``a`` and ``b`` (halved for odd ``l``).
    """

    l: int
    h1: int
    h2: int
    pairing: tuple[tuple[tuple[int, ...], ...], ...]
    halved: bool

    def relations(self) -> list[dict[tuple[int, int], int]]:
        """Relation ``k`` as ``{(a, b): coeff}`` over ``a <= b``.

        For ``l = 2`` the pairing is not halved, so off-diagonal entries are
        the coefficients themselves and squares are not determined.
        """
        out = []
        for k in range(self.h2):
            rel = {}
            for a in range(self.h1):
                for b in range(a, self.h1):
                    if not self.halved:
                        c = self.pairing[a][b][k] if a != b else 0
                    else:
                        c = self.pairing[a][b][k] if a == b else (self.pairing[a][b][k] + self.pairing[b][a][k])
                    if c % self.l:
                        rel[(a, b)] = c % self.l
            out.append(rel)
        return out

    def value(self, x: Sequence[int]) -> tuple[int, ...]:
        out = [0] * self.h2
        for a, b in itertools.product(range(self.h1), repeat=2):
            if x[a] and x[b]:
                for k, v in enumerate(self.pairing[a][b]):
                    out[k] = (out[k] + x[a] * x[b] * v) % self.l
        return tuple(out)

    def is_symmetric(self) -> bool:
        return all(self.pairing[a][b] == self.pairing[b][a] for a in range(self.h1) for b in range(self.h1))


def quadratic_relations(rep: GradedRep) -> QuadraticPresentation:
    T1 = tangent_space(rep)
    H2 = rep.cohomology(2)
    l = rep.l
    halve = l != 2
    inv2 = pow(2, -1, l) if halve else 1
    reps = T1.representatives
    rows = []
    for a in range(T1.dim):
        row = []
        for b in range(T1.dim):
            c = cup_bracket(reps[a], reps[b], rep.reduced_target).scale(inv2)
            row.append(H2.class_of(c) if H2.basis.dim else ())
        rows.append(tuple(row))
    return QuadraticPresentation(l, T1.dim, H2.dim, tuple(rows), halve)
