"""Graded deformations of a Lie algebra over Artin local bases.

A deformation of ``Lbar`` over ``A`` is stored as a dense constant tensor
``consts[i, j, k]`` of elements of ``A`` (coordinate vectors on ``A``'s
basis), so ``[e_i, e_j] = sum_k e_k (x) consts[i, j, k]`` on ``Lbar (x) A``.
Everything here runs over the residue field F_l unless stated otherwise.

Sign conventions follow :mod:`lieforge.ce_cohomology`: if ``u`` spans a
square-zero kernel and the bracket is ``[-,-] + u phi``, its Jacobiator is
``J_0 - u d(phi)``, so extensions solve ``d(psi) = J_0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .artin import (
    AlgebraMorphism,
    AlgExtension,
    ArtinError,
    ArtinLocalAlgebra,
    _ideal_products,
    canonical_lift,
    square_zero_algebra,
    truncated_polynomial_order,
)
from .ce_cohomology import (
    Cochain,
    CohomologySpace,
    cochain_basis,
    cohomology_space,
    delta,
    delta_matrix,
    nr_bracket,
)
from .coeff import Mat, RowSolver, howell_form
from .graded_lie import GradedLieAlgebra
from .harrison import universal_extension


class DeformationError(ValueError):
    pass


class InternalInconsistency(RuntimeError):
    """Raised when a construction that cannot fail mathematically does fail."""


def _amul_tensor(T: np.ndarray, X: np.ndarray, Y: np.ndarray, q: int) -> np.ndarray:
    """Pointwise products in ``A`` of coefficient arrays ``X[..., r]``, ``Y[..., r]``."""
    out = np.zeros(np.broadcast_shapes(X.shape, Y.shape), dtype=np.int64)
    r = T.shape[0]
    for a in range(r):
        xa = X[..., a]
        if not xa.any():
            continue
        for b in range(r):
            if not T[a, b].any():
                continue
            yb = Y[..., b]
            if not yb.any():
                continue
            out = (out + ((xa * yb) % q)[..., None] * T[a, b]) % q
    return out


def _contract(T: np.ndarray, C: np.ndarray, D: np.ndarray, q: int) -> np.ndarray:
    """``E[i, j, k, p] = sum_m C[i, j, m] * D[m, k, p]`` with products in ``A``."""
    n = C.shape[0]
    r = T.shape[0]
    out = np.zeros((n, n, D.shape[1], D.shape[2], r), dtype=np.int64)
    obj = q >= 1 << 20
    for a in range(r):
        Ca = C[..., a]
        if not Ca.any():
            continue
        for b in range(r):
            if not T[a, b].any():
                continue
            Db = D[..., b]
            if not Db.any():
                continue
            if obj:
                P = np.einsum("ijm,mkp->ijkp", Ca.astype(object), Db.astype(object)) % q
                P = P.astype(np.int64)
            else:
                P = np.einsum("ijm,mkp->ijkp", Ca, Db) % q
            out = (out + P[..., None] * T[a, b]) % q
    return out


# ------------------------------------------------------------------ types


@dataclass(frozen=True, eq=False)
class LieDeformation:
    """Lie bracket on ``Lbar (x) A`` reducing to ``Lbar`` modulo ``m_A``."""

    reduction: GradedLieAlgebra
    base: ArtinLocalAlgebra
    consts: np.ndarray

    def __post_init__(self) -> None:
        L, A = self.reduction, self.base
        if L.ring != A.ring.residue_field:
            raise DeformationError(f"reduction is over {L.ring}, base has residue field {A.ring.residue_field}")
        c = np.mod(np.asarray(self.consts, dtype=np.int64), A.ring.modulus)
        n = L.dim
        if c.shape != (n, n, n, A.rank):
            raise DeformationError(f"constant tensor must have shape {(n, n, n, A.rank)}, got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "consts", c)

    @classmethod
    def trivial(cls, L: GradedLieAlgebra, A: ArtinLocalAlgebra) -> "LieDeformation":
        n = L.dim
        c = np.zeros((n, n, n, A.rank), dtype=np.int64)
        c[..., A.unit] = L.structure_tensor()
        return cls(L, A, c)

    @classmethod
    def from_cochains(cls, L: GradedLieAlgebra, A: ArtinLocalAlgebra, terms: Sequence[tuple[Sequence[int], Cochain]]) -> "LieDeformation":
        """``[-,-]_L + sum a (x) phi`` for pairs ``(a, phi)`` of base elements and 2-cochains."""
        d = cls.trivial(L, A)
        c = d.consts.copy()
        q = A.ring.modulus
        for a, phi in terms:
            c = (c + _cochain_tensor(phi)[..., None] * np.asarray(a, dtype=np.int64)) % q
        return cls(L, A, c)

    @property
    def dim(self) -> int:
        return self.reduction.dim

    def constant(self, i: int, j: int, k: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.consts[i, j, k])

    def bracket(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Bracket of elements of ``Lbar (x) A`` given as ``(n, r)`` coefficient arrays."""
        A = self.base
        q = A.ring.modulus
        XY = _amul_tensor(A.table, np.asarray(X)[:, None, :], np.asarray(Y)[None, :, :], q)
        prod = _amul_tensor(A.table, self.consts, XY[:, :, None, :], q)
        return prod.sum(axis=(0, 1)) % q

    def jacobiator(self) -> np.ndarray:
        """``Jac[i, j, k]`` for all basis triples, as ``(n, n, n, n, r)``."""
        A = self.base
        q = A.ring.modulus
        E = _contract(A.table, self.consts, self.consts, q)
        return (E + E.transpose(1, 2, 0, 3, 4) + E.transpose(2, 0, 1, 3, 4)) % q

    def problems(self) -> list[str]:
        L, A = self.reduction, self.base
        c = self.consts
        out = []
        degs = L.degrees
        for i, j, k in zip(*np.nonzero(c.any(axis=3))):
            if degs[k] != degs[i] + degs[j]:
                out.append(f"constant ({L.labels[i]}, {L.labels[j]}) -> {L.labels[k]} breaks the grading")
                break
        q = A.ring.modulus
        if ((c + c.transpose(1, 0, 2, 3)) % q).any():
            out.append("bracket is not antisymmetric")
        if c[np.arange(L.dim), np.arange(L.dim)].any():
            out.append("bracket is not alternating")
        residue = np.zeros(c.shape[:3], dtype=np.int64)
        for a in range(A.rank):
            res = A.residue(A.basis_vector(a))
            if res:
                residue = (residue + res * c[..., a]) % L.ring.l
        if not (residue == L.structure_tensor() % L.ring.l).all():
            out.append("reduction modulo the maximal ideal differs from the reference algebra")
        if self.jacobiator().any():
            out.append("Jacobi identity fails")
        return out

    def validate(self) -> "LieDeformation":
        problems = self.problems()
        if problems:
            raise DeformationError("; ".join(problems))
        return self

    def push_forward(self, f: AlgebraMorphism) -> "LieDeformation":
        return push_forward(self, f)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieDeformation):
            return NotImplemented
        return self.reduction == other.reduction and self.base == other.base and bool((self.consts == other.consts).all())

    def __hash__(self) -> int:
        return hash((self.reduction, self.base, self.consts.tobytes()))

    def describe(self) -> list[str]:
        """Human-readable nonzero brackets ``[x, y] = sum coeff * z``."""
        L, A = self.reduction, self.base
        lines = []
        for i, j in itertools.combinations(range(L.dim), 2):
            terms = []
            for k in range(L.dim):
                v = self.consts[i, j, k]
                if v.any():
                    terms.append(f"({_format_element(A, v)})*{L.labels[k]}")
            if terms:
                lines.append(f"[{L.labels[i]},{L.labels[j]}] = " + " + ".join(terms))
        return lines


def _format_element(A: ArtinLocalAlgebra, v) -> str:
    parts = []
    for a, c in enumerate(v):
        if c:
            lab = A.labels[a]
            parts.append(str(int(c)) if a == A.unit else (lab if c == 1 else f"{int(c)}*{lab}"))
    return " + ".join(parts) or "0"


def _cochain_tensor(phi: Cochain) -> np.ndarray:
    """Dense ``t[i, j, k]`` of a 2-cochain with adjoint values."""
    L = phi.L
    n = L.dim
    t = np.zeros((n, n, n), dtype=np.int64)
    q = L.ring.modulus
    for (I, k), c in zip(phi.basis.elements, phi.coords):
        if c:
            i, j = I
            t[i, j, k] = c
            t[j, i, k] = (-c) % q
    return t


def _tensor_cochain(L: GradedLieAlgebra, t: np.ndarray, arity: int) -> Cochain:
    """Grade-0 adjoint cochain with values ``t[I][k]`` on increasing tuples ``I``."""
    basis = cochain_basis(L, None, arity, 0)
    return Cochain.from_function(basis, lambda I: t[I])


@dataclass(frozen=True, eq=False)
class CocycleSection:
    """Chosen closed 2-cochains ``mu(alpha)`` representing a basis of ``H^2(Lbar, Lbar)(0)``."""

    space: CohomologySpace
    cocycles: tuple[Cochain, ...]

    @classmethod
    def default(cls, L: GradedLieAlgebra) -> "CocycleSection":
        H = cohomology_space(L, None, 2, 0)
        return cls(H, tuple(H.representatives))

    @property
    def algebra(self) -> GradedLieAlgebra:
        return self.space.basis.L

    @property
    def dim(self) -> int:
        return self.space.dim

    def problems(self) -> list[str]:
        out = []
        if len(self.cocycles) != self.space.dim:
            return [f"section has {len(self.cocycles)} cocycles but H^2(0) has dimension {self.space.dim}"]
        for a, c in enumerate(self.cocycles):
            if c.basis is not self.space.basis:
                out.append(f"mu({a}) is not a grade-0 2-cochain of the algebra")
                continue
            if not delta(c).is_zero():
                out.append(f"mu({a}) is not closed")
                continue
            want = tuple(1 if b == a else 0 for b in range(self.space.dim))
            if self.space.class_of(c) != want:
                out.append(f"mu({a}) does not represent basis class {a}")
        return out

    def shifted(self, nus: Sequence[Cochain]) -> "CocycleSection":
        """The section ``mu + d(nu)`` for grade-0 1-cochains ``nu``."""
        return CocycleSection(self.space, tuple(m + delta(v) for m, v in zip(self.cocycles, nus)))


# --------------------------------------------------------------- operations


def _direction_names(h: int) -> list[str]:
    return ["t"] if h == 1 else [f"t{i + 1}" for i in range(h)]


def eta_zero(L: GradedLieAlgebra, section: CocycleSection | None = None) -> LieDeformation:
    """The universal infinitesimal deformation over ``k + H^2(Lbar, Lbar)(0)'``."""
    if not L.ring.is_field:
        raise DeformationError("deformations are computed over the residue field; reduce the algebra first")
    mu = section or CocycleSection.default(L)
    if mu.algebra != L:
        raise DeformationError("section belongs to another algebra")
    problems = mu.problems()
    if problems:
        raise DeformationError("invalid cocycle section: " + "; ".join(problems))
    D1 = square_zero_algebra(L.ring, _direction_names(mu.dim))
    terms = [(D1.basis_vector(1 + a), c) for a, c in enumerate(mu.cocycles)]
    return LieDeformation.from_cochains(L, D1, terms)


def push_forward(eta: LieDeformation, f: AlgebraMorphism) -> LieDeformation:
    if f.source != eta.base:
        raise DeformationError("morphism does not start at the deformation's base")
    problems = f.problems()
    if problems:
        raise DeformationError("not a local algebra morphism: " + "; ".join(problems))
    B = f.target
    q = B.ring.modulus
    c = np.einsum("ijka,ab->ijkb", eta.consts, f.matrix.astype(object) if q >= 1 << 20 else f.matrix) % q
    return LieDeformation(eta.reduction if B.ring.residue_field == eta.reduction.ring else eta.reduction, B, c.astype(np.int64))


def _first_order_parts(d: LieDeformation) -> list[tuple[int, np.ndarray]]:
    """``(a, t_a)`` for each maximal-ideal basis element with ``t_a`` its constant tensor."""
    A = d.base
    return [(a, d.consts[..., a]) for a in A.maximal]


def classify_square_zero(d: LieDeformation, section: CocycleSection | None = None) -> AlgebraMorphism:
    """The unique morphism ``D_1 -> A`` along which ``eta_zero`` pushes to ``d`` up to equivalence."""
    A, L = d.base, d.reduction
    if not A.is_over_field:
        raise DeformationError("classification is computed over F_l")
    if not A.square_zero():
        raise DeformationError("base algebra has m^2 != 0")
    problems = d.problems()
    if problems:
        raise DeformationError("; ".join(problems))
    mu = section or CocycleSection.default(L)
    D1 = square_zero_algebra(L.ring, _direction_names(mu.dim))
    H = mu.space
    mat = np.zeros((D1.rank, A.rank), dtype=np.int64)
    mat[D1.unit, A.unit] = 1
    for a, t in _first_order_parts(d):
        phi = _tensor_cochain(L, t, 2)
        coords = H.class_of(phi) if H.basis.dim else ()
        for alpha, c in enumerate(coords):
            mat[1 + alpha, a] = c
    f = AlgebraMorphism(D1, A, mat)
    pushed = push_forward(eta_zero(L, mu), f)
    if find_equivalence(pushed, d) is None:
        raise InternalInconsistency("classifying morphism does not reproduce the deformation")
    return f


# ------------------------------------------------------------- equivalence


def _apply_gauge(A: ArtinLocalAlgebra, G: np.ndarray, X: np.ndarray) -> np.ndarray:
    """``g(X)`` for a gauge ``G[i, j]`` (``g(e_i) = sum_j e_j (x) G[i, j]``) and ``X`` of shape ``(n, r)``."""
    q = A.ring.modulus
    return _amul_tensor(A.table, X[:, None, :], G, q).sum(axis=0) % q


def gauge_defect(d1: LieDeformation, d2: LieDeformation, G: np.ndarray) -> np.ndarray:
    """``g([e_i, e_j]_1) - [g e_i, g e_j]_2`` for all ``i, j``, shape ``(n, n, n, r)``."""
    A = d1.base
    q = A.ring.modulus
    T = A.table
    left = _amul_tensor(T, d1.consts[..., None, :], G[None, None, :, :, :], q).sum(axis=2) % q
    # [g e_i, g e_j] = sum_{a,b} G[i,a] G[j,b] c2[a,b]
    GG = _amul_tensor(T, G[:, None, :, None, :], G[None, :, None, :, :], q)
    right = _amul_tensor(T, GG[:, :, :, :, None, :], d2.consts[None, None, :, :, :, :], q).sum(axis=(2, 3)) % q
    return (left - right) % q


def is_equivalence(d1: LieDeformation, d2: LieDeformation, G: np.ndarray) -> bool:
    A = d1.base
    n = d1.dim
    res = np.zeros((n, n), dtype=np.int64)
    for a in range(A.rank):
        res = (res + A.residue(A.basis_vector(a)) * G[..., a]) % A.ring.l
    if not (res == np.eye(n, dtype=np.int64)).all():
        return False
    degs = d1.reduction.degrees
    for i, j in zip(*np.nonzero(G.any(axis=2))):
        if degs[i] != degs[j]:
            return False
    return not gauge_defect(d1, d2, G).any()


def _filtration(A: ArtinLocalAlgebra) -> list[list[tuple[int, ...]]]:
    """Field bases of ``m^s`` complements: element ``s-1`` spans ``m^s`` modulo ``m^{s+1}``."""
    m = [A.basis_vector(i) for i in A.maximal]
    layers = []
    power = m
    while power:
        nxt = _ideal_products(A, power, m)
        # greedy complement of m^{s+1} inside m^s
        span = list(nxt)
        comp = []
        for v in power:
            trial = Mat.from_rows(A.ring, span + [v], A.rank)
            if howell_form(trial).nrows > len(span) and (not span or not RowSolver(Mat.from_rows(A.ring, span, A.rank)).contains(v)):
                comp.append(v)
                span.append(v)
        layers.append(comp)
        power = nxt
    return layers


def find_equivalence(d1: LieDeformation, d2: LieDeformation, budget: int = 1 << 12) -> np.ndarray | None:
    """A graded gauge ``g = id mod m`` with ``g [,]_1 = [g, g]_2``, or ``None`` if there is none.

    Lifts ``g`` one ``m``-adic layer at a time by solving ``d(h) = defect``;
    the affine solution sets are searched exhaustively (derivation
    freedom), so the answer is exact.  ``budget`` bounds the search.
    """
    if d1.reduction != d2.reduction or d1.base != d2.base:
        raise DeformationError("deformations of different algebras or over different bases")
    A, L = d1.base, d1.reduction
    if not A.is_over_field:
        raise DeformationError("equivalence is decided over F_l")
    n, r = L.dim, A.rank
    l = A.ring.l
    layers = _filtration(A)
    dmat = delta_matrix(L, None, 1, 0)
    b1 = cochain_basis(L, None, 1, 0)
    b2 = cochain_basis(L, None, 2, 0)
    solver = RowSolver(dmat) if b1.dim else None
    derivations = solver.kernel if solver is not None else Mat.zeros(L.ring, 0, 0)
    k_der = derivations.nrows
    calls = [0]

    def h_tensor(coords) -> np.ndarray:
        t = np.zeros((n, n), dtype=np.int64)
        for ((i,), k), c in zip(b1.elements, coords):
            t[i, k] = c
        return t

    def layer_coords(v, layer, rest):
        # coordinates of an m^s element on the layer basis modulo m^{s+1}
        rows = list(layer) + list(rest)
        x = RowSolver(Mat.from_rows(A.ring, rows, r)).solve(v)
        if x is None:
            raise InternalInconsistency("defect left the expected filtration layer")
        return x[: len(layer)]

    lower = [[]]
    for s in range(len(layers)):
        acc = []
        for layer in layers[s + 1 :]:
            acc += layer
        lower.append(acc)

    def search(s: int, G: np.ndarray) -> np.ndarray | None:
        calls[0] += 1
        if calls[0] > budget:
            raise DeformationError("equivalence search exceeded its budget")
        D = gauge_defect(d1, d2, G)
        if s == len(layers):
            return G if not D.any() else None
        layer = layers[s]
        rest = lower[s + 1]
        # each layer basis element b gets h_b with d(h_b) = defect component
        particular = []
        comps = np.zeros((len(layer), n, n, n), dtype=np.int64)
        for i, j, k in zip(*np.nonzero(D.any(axis=3))):
            x = layer_coords(D[i, j, k], layer, rest)
            comps[:, i, j, k] = x
        for bi in range(len(layer)):
            target = _tensor_cochain(L, comps[bi], 2)
            if b2.dim == 0:
                particular.append(np.zeros(b1.dim, dtype=np.int64))
                continue
            if solver is None:
                if any(target.coords):
                    return None
                particular.append(np.zeros(0, dtype=np.int64))
                continue
            x = solver.solve(target.coords)
            if x is None:
                return None
            particular.append(np.array(x, dtype=np.int64))
        choices = itertools.product(range(l), repeat=k_der * len(layer)) if k_der else [()]
        for choice in choices:
            Gn = G.copy()
            for bi, b in enumerate(layer):
                coords = particular[bi].copy() if len(particular[bi]) else np.zeros(b1.dim, dtype=np.int64)
                for t in range(k_der):
                    coords = (coords + choice[bi * k_der + t] * derivations.data[t]) % l
                Gn = (Gn + h_tensor(coords)[..., None] * np.asarray(b, dtype=np.int64)) % l
            found = search(s + 1, Gn)
            if found is not None:
                return found
        return None

    G0 = np.zeros((n, n, r), dtype=np.int64)
    G0[np.arange(n), np.arange(n), A.unit] = 1
    return search(0, G0)


# --------------------------------------------------------------- obstructions


def lift_constants(d: LieDeformation, ext: AlgExtension) -> np.ndarray:
    """Deterministic antisymmetric lift of the constants of ``d`` to ``ext.total``."""
    if ext.base != d.base:
        raise DeformationError("extension is not an extension of the deformation's base")
    B = ext.total
    n = d.dim
    out = np.zeros((n, n, n, B.rank), dtype=np.int64)
    cache: dict[tuple[int, ...], tuple[int, ...]] = {}
    q = B.ring.modulus
    for i, j, k in zip(*np.nonzero(d.consts.any(axis=3))):
        if i >= j:
            continue
        key = tuple(int(x) for x in d.consts[i, j, k])
        if key not in cache:
            cache[key] = canonical_lift(ext.projection, key)
        v = np.asarray(cache[key], dtype=np.int64)
        out[i, j, k] = v
        out[j, i, k] = (-v) % q
    return out


@dataclass(frozen=True)
class ObstructionClass:
    """Class in ``H^3(Lbar, Lbar)(0) (x) K`` for an extension with kernel basis ``u_1..u_s``.

    ``coords[s]`` are the class coordinates of the component along ``u_s``;
    ``cocycles[s]`` the Jacobi-defect 3-cocycle itself.
    """

    coords: tuple[tuple[int, ...], ...]
    cocycles: tuple[Cochain, ...] = field(compare=False, repr=False)

    @property
    def is_zero(self) -> bool:
        return not any(any(c) for c in self.coords)


def _defect_cocycles(d: LieDeformation, ext: AlgExtension, lifted: np.ndarray) -> list[Cochain]:
    B = ext.total
    L = d.reduction
    n = L.dim
    trial = LieDeformation.__new__(LieDeformation)
    object.__setattr__(trial, "reduction", L)
    object.__setattr__(trial, "base", B)
    object.__setattr__(trial, "consts", lifted)
    J = trial.jacobiator()
    s = ext.kernel_dim
    parts = np.zeros((s, n, n, n, n), dtype=np.int64)
    for i, j, k, p in zip(*np.nonzero(J.any(axis=4))):
        parts[:, i, j, k, p] = ext.kernel_coordinates(J[i, j, k, p])
    basis = cochain_basis(L, None, 3, 0)
    out = []
    for t in range(s):
        out.append(Cochain.from_function(basis, lambda I, t=t: parts[t][I]))
    return out


def obstruction_class(d: LieDeformation, ext: AlgExtension, lifted: np.ndarray | None = None) -> ObstructionClass:
    """Obstruction to extending ``d`` along ``ext``; ``lifted`` overrides the deterministic lift."""
    if lifted is None:
        lifted = lift_constants(d, ext)
    cocycles = _defect_cocycles(d, ext, np.asarray(lifted, dtype=np.int64) % ext.total.ring.modulus)
    H3 = cohomology_space(d.reduction, None, 3, 0)
    coords = tuple(H3.class_of(c) if H3.basis.dim else () for c in cocycles)
    return ObstructionClass(coords, tuple(cocycles))


@dataclass(frozen=True)
class ObstructionWitness:
    """Certificate that no extension exists: the nonzero obstruction class."""

    obstruction: ObstructionClass
    extension: AlgExtension = field(repr=False)


def extend_deformation(d: LieDeformation, ext: AlgExtension) -> LieDeformation | ObstructionWitness:
    """A deformation over ``ext.total`` reducing to ``d``, or the obstruction certificate."""
    lifted = lift_constants(d, ext)
    obs = obstruction_class(d, ext, lifted)
    if not obs.is_zero:
        return ObstructionWitness(obs, ext)
    L = d.reduction
    B = ext.total
    q = B.ring.modulus
    dmat = delta_matrix(L, None, 2, 0)
    c = lifted.copy()
    for t, J in enumerate(obs.cocycles):
        if J.is_zero():
            continue
        x = RowSolver(dmat).solve(J.coords)
        if x is None:
            raise InternalInconsistency("zero obstruction class but the Jacobi defect is not exact")
        psi = Cochain(cochain_basis(L, None, 2, 0), x)
        u = np.asarray(ext.kernel.row(t), dtype=np.int64)
        c = (c + _cochain_tensor(psi)[..., None] * u) % q
    out = LieDeformation(L, B, c)
    if out.jacobiator().any():
        raise InternalInconsistency("extended bracket fails the Jacobi identity")
    return out


# -------------------------------------------------------------------- tower


@dataclass(frozen=True, eq=False)
class DeformationBase:
    """Stage ``k`` of the miniversal tower: ``D_k``, ``eta_k`` and the link to stage ``k - 1``."""

    stage: int
    algebra: ArtinLocalAlgebra
    deformation: LieDeformation
    extension: AlgExtension | None = None
    obstruction_map: np.ndarray | None = None

    @property
    def kernel_rank(self) -> int:
        return 0 if self.extension is None else self.extension.kernel_dim

    def truncated_polynomial_order(self) -> int | None:
        return truncated_polynomial_order(self.algebra)


def first_stage(L: GradedLieAlgebra, section: CocycleSection | None = None) -> DeformationBase:
    eta = eta_zero(L, section)
    return DeformationBase(1, eta.base, eta)


def quotient_algebra(C: ArtinLocalAlgebra, ideal: Sequence[Sequence[int]]) -> tuple[ArtinLocalAlgebra, AlgebraMorphism]:
    """``C / W`` for an ideal ``W`` spanned by ``ideal`` (F_l only), on the non-pivot basis."""
    if not C.is_over_field:
        raise ArtinError("quotients are only built over F_l")
    l = C.ring.l
    rows = [r for r in ideal if any(x % l for x in r)]
    h = howell_form(Mat.from_rows(C.ring, rows, C.rank)) if rows else Mat.zeros(C.ring, 0, C.rank)
    pivots = {}
    for row in h.data:
        p = int(np.flatnonzero(row)[0])
        pivots[p] = row
    keep = [i for i in range(C.rank) if i not in pivots]
    if C.unit not in keep:
        raise ArtinError("ideal contains the unit")
    pos = {i: k for k, i in enumerate(keep)}
    proj = np.zeros((C.rank, len(keep)), dtype=np.int64)
    for i in range(C.rank):
        if i in pos:
            proj[i, pos[i]] = 1
        else:
            row = pivots[i]
            for j in keep:
                proj[i, pos[j]] = (-row[j]) % l
    t = np.zeros((len(keep),) * 3, dtype=np.int64)
    for a, b in itertools.product(keep, repeat=2):
        t[pos[a], pos[b]] = (C.table[a, b] @ proj) % l
    Q = ArtinLocalAlgebra(C.ring, tuple(C.labels[i] for i in keep), pos[C.unit], t)
    return Q, AlgebraMorphism(C, Q, proj)


def miniversal_step(stage: DeformationBase) -> DeformationBase:
    """Build ``D_{k+1}`` as the universal extension of ``D_k`` modulo the image of the obstruction map."""
    D = stage.algebra
    eta = stage.deformation
    U = universal_extension(D)
    obs = obstruction_class(eta, U)
    H3dim = cohomology_space(eta.reduction, None, 3, 0).dim
    h = U.kernel_dim
    phi = np.array([list(c) for c in obs.coords], dtype=np.int64).reshape(h, H3dim)
    r = D.rank
    # w_j = sum_i phi[i, j] u_i
    W = []
    for j in range(H3dim):
        w = np.zeros(U.total.rank, dtype=np.int64)
        w[r:] = phi[:, j]
        W.append(tuple(int(x) for x in w))
    Dn, q = quotient_algebra(U.total, W)
    proj = np.zeros((Dn.rank, r), dtype=np.int64)
    back = U.projection.matrix
    # Dn's basis is a subset of C's basis; the projection to D drops kernel elements
    kept = [U.total.labels.index(lab) for lab in Dn.labels]
    for k, i in enumerate(kept):
        proj[k] = back[i]
    kernel_rows = [Dn.basis_vector(k) for k, i in enumerate(kept) if i >= r]
    ext = AlgExtension(Dn, AlgebraMorphism(Dn, D, proj), Mat.from_rows(Dn.ring, kernel_rows, Dn.rank))
    result = extend_deformation(eta, ext)
    if isinstance(result, ObstructionWitness):
        raise InternalInconsistency("obstruction does not vanish on the quotient of the universal extension")
    return DeformationBase(stage.stage + 1, Dn, result, ext, phi)


def miniversal_tower(L: GradedLieAlgebra, stages: int, section: CocycleSection | None = None) -> list[DeformationBase]:
    """Stages ``D_1 .. D_stages``."""
    if stages < 1:
        raise DeformationError("need at least one stage")
    tower = [first_stage(L, section)]
    while len(tower) < stages:
        tower.append(miniversal_step(tower[-1]))
    return tower


# --------------------------------------------------------------- quadratic


def _compose_class(H3: CohomologySpace, c: Cochain) -> tuple[int, ...]:
    if H3.basis.dim == 0:
        return ()
    return H3.class_of(c)


@dataclass(frozen=True)
class QuadraticMap:
    """``B[a][b]``: class coordinates in ``H^3(0)`` of the pairing of directions ``a`` and ``b``.

    For odd ``l`` this is ``1/2 [mu_a, mu_b]``; for ``l = 2`` the unhalved
    bracket (whose diagonal vanishes).
    """

    l: int
    source_dim: int
    target_dim: int
    pairing: tuple[tuple[tuple[int, ...], ...], ...]
    halved: bool

    def is_zero(self) -> bool:
        return not any(any(v) for row in self.pairing for v in row)

    def relations(self) -> list[dict[tuple[int, int], int]]:
        """Component ``k`` as ``{(a, b): coeff}`` over ``a <= b`` (no squares when ``l = 2``)."""
        out = []
        for k in range(self.target_dim):
            rel = {}
            for a in range(self.source_dim):
                for b in range(a, self.source_dim):
                    if not self.halved:
                        c = self.pairing[a][b][k] if a != b else 0
                    else:
                        c = self.pairing[a][b][k] if a == b else self.pairing[a][b][k] + self.pairing[b][a][k]
                    if c % self.l:
                        rel[(a, b)] = c % self.l
            out.append(rel)
        return out

    def value(self, x: Sequence[int]) -> tuple[int, ...]:
        """``sum_{a,b} x_a x_b B(a, b)``."""
        out = [0] * self.target_dim
        for a, b in itertools.product(range(self.source_dim), repeat=2):
            if x[a] and x[b]:
                for k, v in enumerate(self.pairing[a][b]):
                    out[k] = (out[k] + x[a] * x[b] * v) % self.l
        return tuple(out)


def quadratic_map(L: GradedLieAlgebra, section: CocycleSection | None = None) -> QuadraticMap:
    if not L.ring.is_field:
        raise DeformationError("the quadratic map is computed over F_l")
    mu = section or CocycleSection.default(L)
    H3 = cohomology_space(L, None, 3, 0)
    l = L.ring.l
    h = mu.dim
    halve = l != 2
    inv2 = pow(2, -1, l) if halve else 1
    rows = []
    for a in range(h):
        row = []
        for b in range(h):
            c = nr_bracket(mu.cocycles[a], mu.cocycles[b])
            c = c.scale(inv2)
            row.append(_compose_class(H3, c))
        rows.append(tuple(row))
    return QuadraticMap(l, h, H3.dim, tuple(rows), halve)


def order_two_obstruction(L: GradedLieAlgebra, x: Sequence[int], section: CocycleSection | None = None) -> tuple[int, ...]:
    """Class of the obstruction to lifting the direction ``x`` from ``k[t]/t^2`` to ``k[t]/t^3``."""
    from .artin import truncation_map, extension_from_surjection

    mu = section or CocycleSection.default(L)
    basis = mu.space.basis
    phi = Cochain.zero(basis)
    for c, m in zip(x, mu.cocycles):
        phi = phi + m.scale(c)
    ext = extension_from_surjection(truncation_map(L.ring, 3, 2))
    d = LieDeformation.from_cochains(L, ext.base, [(ext.base.basis_vector(1), phi)])
    return obstruction_class(d, ext).coords[0]


def mu_change_isomorphism(section: CocycleSection, nus: Sequence[Cochain]) -> tuple[LieDeformation, LieDeformation, np.ndarray]:
    """``eta`` for ``mu + d(nu)`` and for ``mu`` together with the gauge ``(l, phi) -> (l, phi + nu(l))`` between them."""
    L = section.algebra
    eta = eta_zero(L, section)
    shifted = eta_zero(L, section.shifted(nus))
    n = L.dim
    D1 = eta.base
    G = np.zeros((n, n, D1.rank), dtype=np.int64)
    G[np.arange(n), np.arange(n), D1.unit] = 1
    for a, nu in enumerate(nus):
        for ((i,), k), c in zip(nu.basis.elements, nu.coords):
            G[i, k, 1 + a] = (G[i, k, 1 + a] + c) % L.ring.l
    return shifted, eta, G
