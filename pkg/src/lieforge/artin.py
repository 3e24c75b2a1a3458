"""Finite local commutative algebras given by multiplication tables.

An :class:`ArtinLocalAlgebra` is free over its ring of definition Z/l^N with
a distinguished unit basis element; the remaining basis elements span an
ideal ``n`` and the maximal ideal is ``m = l A + n``, so the residue field is
always F_l.  Elements are coordinate tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .coeff import CoeffRing, Mat, RowSolver, howell_form, kernel_basis


class ArtinError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ArtinLocalAlgebra:
    ring: CoeffRing
    labels: tuple[str, ...]
    unit: int
    table: np.ndarray  # table[a, b, c]: coefficient of e_c in e_a e_b

    def __post_init__(self) -> None:
        t = np.mod(np.asarray(self.table, dtype=np.int64), self.ring.modulus)
        r = len(self.labels)
        if t.shape != (r, r, r):
            raise ArtinError(f"multiplication table must have shape {(r, r, r)}, got {t.shape}")
        if not 0 <= self.unit < r:
            raise ArtinError("unit index out of range")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def maximal(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.rank) if i != self.unit)

    @property
    def is_over_field(self) -> bool:
        return self.ring.is_field

    def one(self) -> tuple[int, ...]:
        return self.basis_vector(self.unit)

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def basis_vector(self, i: int) -> tuple[int, ...]:
        v = [0] * self.rank
        v[i] = 1
        return tuple(v)

    def mul(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        q = self.ring.modulus
        out = np.zeros(self.rank, dtype=np.int64)
        for i, x in enumerate(a):
            if x % q:
                for j, y in enumerate(b):
                    if y % q:
                        out = (out + (x * y % q) * self.table[i, j]) % q
        return tuple(int(v) for v in out)

    def add(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        q = self.ring.modulus
        return tuple((x + y) % q for x, y in zip(a, b))

    def scale(self, c: int, a: Sequence[int]) -> tuple[int, ...]:
        q = self.ring.modulus
        return tuple((c * x) % q for x in a)

    def residue(self, a: Sequence[int]) -> int:
        """Image in the residue field F_l."""
        return int(a[self.unit]) % self.ring.l

    def in_maximal_ideal(self, a: Sequence[int]) -> bool:
        return self.residue(a) == 0

    def elements(self):
        return itertools.product(range(self.ring.modulus), repeat=self.rank)

    def maximal_elements(self):
        for a in self.elements():
            if self.in_maximal_ideal(a):
                yield a

    @property
    def cardinality(self) -> int:
        return self.ring.modulus**self.rank

    def square_zero(self) -> bool:
        """Whether ``m^2 = 0``."""
        gens = [self.basis_vector(i) for i in self.maximal]
        if not self.ring.is_field:
            gens.append(self.scale(self.ring.l, self.one()))
        return all(not any(self.mul(a, b)) for a in gens for b in gens)

    def cotangent_dim(self) -> int:
        """``dim_k m / (m^2 + l A)``."""
        span = _ideal_span(self, [self.basis_vector(i) for i in self.maximal])
        sq = _ideal_products(self, span, span)
        if not self.ring.is_field:
            sq = sq + [self.scale(self.ring.l, self.basis_vector(i)) for i in range(self.rank)]
        big = span + [self.scale(self.ring.l, self.basis_vector(i)) for i in range(self.rank)] if not self.ring.is_field else span
        big_F = _field_dim(self, big)
        sq_F = _field_dim(self, sq)
        return big_F - sq_F

    def __repr__(self) -> str:
        return f"ArtinLocalAlgebra({self.ring}, basis={list(self.labels)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ArtinLocalAlgebra):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.labels == other.labels
            and self.unit == other.unit
            and bool((self.table == other.table).all())
        )

    def __hash__(self) -> int:
        return hash((self.ring, self.labels, self.unit, self.table.tobytes()))


def _field_dim(A: ArtinLocalAlgebra, vecs: list) -> int:
    """log_l of the size of the additive span."""
    if not vecs:
        return 0
    from .coeff import span_cardinality

    size = span_cardinality(Mat.from_rows(A.ring, vecs, A.rank))
    d = 0
    while size > 1:
        size //= A.ring.l
        d += 1
    return d


def _ideal_span(A: ArtinLocalAlgebra, gens: list) -> list:
    vecs = list(gens)
    for g in gens:
        for i in range(A.rank):
            vecs.append(A.mul(A.basis_vector(i), g))
    h = howell_form(Mat.from_rows(A.ring, vecs, A.rank))
    return [h.row(i) for i in range(h.nrows)]


def _ideal_products(A: ArtinLocalAlgebra, I: list, J: list) -> list:
    prods = [A.mul(a, b) for a in I for b in J]
    if not prods:
        return []
    h = howell_form(Mat.from_rows(A.ring, prods, A.rank))
    return [h.row(i) for i in range(h.nrows)]


def validate_artin(A: ArtinLocalAlgebra) -> list[str]:
    """Problems with ``A`` as a commutative associative unital local algebra (empty if none)."""
    problems = []
    t = A.table
    r = A.rank
    e = np.eye(r, dtype=np.int64)
    if not (t[A.unit] == e).all() or not (t[:, A.unit] == e).all():
        problems.append("unit basis element does not act as the identity")
    if not (t == t.transpose(1, 0, 2)).all():
        problems.append("multiplication is not commutative")
    for a, b, c in itertools.product(range(r), repeat=3):
        left = A.mul(t[a, b], A.basis_vector(c))
        right = A.mul(A.basis_vector(a), t[b, c])
        if left != right:
            problems.append(f"associativity fails at ({A.labels[a]}, {A.labels[b]}, {A.labels[c]})")
            break
    for a in A.maximal:
        for b in range(r):
            if t[a, b, A.unit] % A.ring.l:
                problems.append(f"non-unit span is not an ideal: {A.labels[a]}*{A.labels[b]} has unit part")
    if not problems:
        power = [A.basis_vector(i) for i in A.maximal]
        for _ in range(r + 1):
            if not power:
                break
            power = _ideal_products(A, power, [A.basis_vector(i) for i in A.maximal])
        if power:
            problems.append("non-unit span is not nilpotent")
    return problems


def check_artin(A: ArtinLocalAlgebra) -> ArtinLocalAlgebra:
    problems = validate_artin(A)
    if problems:
        raise ArtinError("; ".join(problems))
    return A


# ------------------------------------------------------------ constructors


def monomial_algebra(ring: CoeffRing, variables: Sequence[str], monomials: Sequence[Sequence[int]]) -> ArtinLocalAlgebra:
    """``R[x_1..x_n] / (monomials not listed)``; the listed exponent vectors must be closed under division."""
    mons = [tuple(m) for m in monomials]
    if tuple([0] * len(variables)) not in mons:
        raise ArtinError("the constant monomial must be present")
    mons.sort(key=lambda m: (sum(m), [-x for x in m]))
    pos = {m: i for i, m in enumerate(mons)}
    for m in mons:
        for i, x in enumerate(m):
            if x:
                lower = list(m)
                lower[i] -= 1
                if tuple(lower) not in pos:
                    raise ArtinError(f"monomial set not closed under division at {m}")
    r = len(mons)
    t = np.zeros((r, r, r), dtype=np.int64)
    for a, b in itertools.product(range(r), repeat=2):
        prod = tuple(x + y for x, y in zip(mons[a], mons[b]))
        if prod in pos:
            t[a, b, pos[prod]] = 1

    def label(m):
        if not any(m):
            return "1"
        return "*".join(v if x == 1 else f"{v}^{x}" for v, x in zip(variables, m) if x)

    return ArtinLocalAlgebra(ring, tuple(label(m) for m in mons), 0, t)


def residue_field(ring: CoeffRing) -> ArtinLocalAlgebra:
    return monomial_algebra(ring, [], [()])


def truncated_polynomial(ring: CoeffRing, n: int, var: str = "t") -> ArtinLocalAlgebra:
    """``R[t] / t^n``."""
    if n < 1:
        raise ArtinError("n must be positive")
    return monomial_algebra(ring, [var], [(i,) for i in range(n)])


def dual_numbers(ring: CoeffRing, var: str = "eps") -> ArtinLocalAlgebra:
    return truncated_polynomial(ring, 2, var)


def square_zero_algebra(ring: CoeffRing, names: Sequence[str]) -> ArtinLocalAlgebra:
    """``R + V`` with ``V`` free on ``names`` and ``V^2 = 0``."""
    n = len(names)
    mons = [tuple([0] * n)] + [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    return monomial_algebra(ring, list(names), mons)


def power_quotient(ring: CoeffRing, variables: Sequence[str], n: int) -> ArtinLocalAlgebra:
    """``R[x_1..x_k] / (x_1..x_k)^n``."""
    mons = [m for m in itertools.product(range(n), repeat=len(variables)) if sum(m) < n]
    return monomial_algebra(ring, list(variables), mons)


def integers_mod(l: int, N: int) -> ArtinLocalAlgebra:
    """Z/l^N as a rank-one algebra over itself."""
    return residue_field(CoeffRing(l, N))


# --------------------------------------------------------------- morphisms


@dataclass(frozen=True, eq=False)
class AlgebraMorphism:
    """Unital ring map ``source -> target``; row ``a`` is the image of ``e_a``.

    The target may be defined over a lower precision than the source (the
    reduction Z/l^N -> Z/l^M, M <= N, is applied to coefficients).
    """

    source: ArtinLocalAlgebra
    target: ArtinLocalAlgebra
    matrix: np.ndarray

    def __post_init__(self) -> None:
        s, t = self.source, self.target
        if s.ring.l != t.ring.l or t.ring.N > s.ring.N:
            raise ArtinError(f"no ring map {s.ring} -> {t.ring}")
        m = np.mod(np.asarray(self.matrix, dtype=np.int64).reshape(s.rank, t.rank), t.ring.modulus)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def apply(self, a: Sequence[int]) -> tuple[int, ...]:
        q = self.target.ring.modulus
        out = np.zeros(self.target.rank, dtype=np.int64)
        for i, x in enumerate(a):
            if x % q:
                out = (out + (int(x) % q) * self.matrix[i]) % q
        return tuple(int(v) for v in out)

    def then(self, other: "AlgebraMorphism") -> "AlgebraMorphism":
        if other.source != self.target:
            raise ArtinError("morphisms are not composable")
        rows = [other.apply(self.matrix[i]) for i in range(self.source.rank)]
        return AlgebraMorphism(self.source, other.target, np.array(rows, dtype=np.int64).reshape(self.source.rank, other.target.rank))

    def problems(self) -> list[str]:
        s, t = self.source, self.target
        out = []
        if self.apply(s.one()) != t.one():
            out.append("not unital")
        for a, b in itertools.combinations_with_replacement(range(s.rank), 2):
            lhs = self.apply(s.table[a, b])
            rhs = t.mul(self.matrix[a], self.matrix[b])
            if lhs != rhs:
                out.append(f"not multiplicative at ({s.labels[a]}, {s.labels[b]})")
                break
        for a in s.maximal:
            if not t.in_maximal_ideal(self.matrix[a]):
                out.append(f"not local: image of {s.labels[a]} is a unit")
        return out

    def is_surjective(self) -> bool:
        t = self.target
        m = Mat(t.ring, self.matrix, ncols=t.rank)
        solver = RowSolver(m)
        return all(solver.contains(t.basis_vector(i)) for i in range(t.rank))

    def kernel(self) -> Mat:
        """Howell generators of the kernel, as elements of the source."""
        s, t = self.source, self.target
        if s.ring == t.ring:
            return kernel_basis(Mat(s.ring, self.matrix, ncols=t.rank))
        # the kernel also contains l^M times everything when the precision drops
        lifted = np.vstack([self.matrix, np.eye(t.rank, dtype=np.int64) * t.ring.modulus]) if t.rank else self.matrix
        big = Mat(s.ring, lifted, ncols=t.rank)
        kb = kernel_basis(big)
        return howell_form(Mat(s.ring, kb.data[:, : s.rank], ncols=s.rank))

    def __repr__(self) -> str:
        return f"AlgebraMorphism({self.source.labels} -> {self.target.labels}, {self.matrix.tolist()})"


def morphism(source: ArtinLocalAlgebra, target: ArtinLocalAlgebra, images: Sequence[Sequence[int]]) -> AlgebraMorphism:
    f = AlgebraMorphism(source, target, np.array(images, dtype=np.int64).reshape(source.rank, target.rank))
    problems = f.problems()
    if problems:
        raise ArtinError("; ".join(problems))
    return f


def identity_morphism(A: ArtinLocalAlgebra) -> AlgebraMorphism:
    return AlgebraMorphism(A, A, np.eye(A.rank, dtype=np.int64))


def residue_map(A: ArtinLocalAlgebra) -> AlgebraMorphism:
    k = residue_field(A.ring.residue_field)
    return AlgebraMorphism(A, k, np.array([[A.residue(A.basis_vector(i))] for i in range(A.rank)], dtype=np.int64))


def truncation_map(ring: CoeffRing, n_from: int, n_to: int, var: str = "t") -> AlgebraMorphism:
    """``R[t]/t^n_from ->> R[t]/t^n_to``."""
    if n_to > n_from:
        raise ArtinError("cannot truncate to a larger algebra")
    src = truncated_polynomial(ring, n_from, var)
    dst = truncated_polynomial(ring, n_to, var)
    rows = [dst.basis_vector(i) if i < n_to else dst.zero() for i in range(n_from)]
    return AlgebraMorphism(src, dst, np.array(rows, dtype=np.int64).reshape(n_from, n_to))


def precision_map(l: int, n_from: int, n_to: int) -> AlgebraMorphism:
    """``Z/l^n_from ->> Z/l^n_to``."""
    return AlgebraMorphism(integers_mod(l, n_from), integers_mod(l, n_to), np.array([[1]], dtype=np.int64))


def local_morphisms(source: ArtinLocalAlgebra, target: ArtinLocalAlgebra):
    """All local unital morphisms between square-zero F_l-algebras (exhaustive)."""
    if not (source.is_over_field and target.is_over_field and source.square_zero() and target.square_zero()):
        raise ArtinError("enumeration only implemented for square-zero algebras over F_l")
    q = target.ring.modulus
    m_t = list(target.maximal)
    choices = list(itertools.product(range(q), repeat=len(m_t)))
    for imgs in itertools.product(choices, repeat=len(source.maximal)):
        mat = np.zeros((source.rank, target.rank), dtype=np.int64)
        mat[source.unit, target.unit] = 1
        for a, img in zip(source.maximal, imgs):
            for j, c in zip(m_t, img):
                mat[a, j] = c
        yield AlgebraMorphism(source, target, mat)


# -------------------------------------------------------------- extensions


@dataclass(frozen=True, eq=False)
class AlgExtension:
    """``0 -> M -> B -> A -> 0`` with ``m_B . M = 0``; ``kernel`` rows are an F_l-basis of ``M`` inside ``B``."""

    total: ArtinLocalAlgebra
    projection: AlgebraMorphism
    kernel: Mat

    @property
    def base(self) -> ArtinLocalAlgebra:
        return self.projection.target

    @property
    def kernel_dim(self) -> int:
        return self.kernel.nrows

    def problems(self) -> list[str]:
        out = list(self.projection.problems())
        if not self.projection.is_surjective():
            out.append("projection is not surjective")
        B = self.total
        ker = self.projection.kernel()
        mine = howell_form(self.kernel) if self.kernel.nrows else self.kernel
        if mine != ker and not (mine.nrows == 0 and ker.nrows == 0):
            out.append("kernel rows do not span the kernel of the projection")
        gens = [B.basis_vector(i) for i in B.maximal]
        if not B.ring.is_field:
            gens.append(B.scale(B.ring.l, B.one()))
        for i in range(self.kernel.nrows):
            u = self.kernel.row(i)
            for g in gens:
                if any(B.mul(g, u)):
                    out.append("kernel is not annihilated by the maximal ideal")
                    return out
        return out

    def kernel_coordinates(self, b: Sequence[int]) -> tuple[int, ...]:
        """F_l-coordinates of an element of the kernel on the kernel rows."""
        x = RowSolver(self.kernel).solve(b)
        if x is None:
            raise ArtinError("element is not in the kernel")
        return tuple(v % self.total.ring.l for v in x)


def extension_from_surjection(f: AlgebraMorphism) -> AlgExtension:
    """Wrap a small surjection ``B ->> A`` (kernel killed by ``m_B``) as an extension."""
    B = f.source
    ker = f.kernel()
    ext = AlgExtension(B, f, _field_basis(B, ker))
    problems = ext.problems()
    if problems:
        raise ArtinError("; ".join(problems))
    return ext


def _field_basis(B: ArtinLocalAlgebra, ker: Mat) -> Mat:
    """An F_l-basis of an l-torsion submodule given by Howell generators."""
    # Howell rows of an exponent-l subgroup are independent over F_l
    return ker


def canonical_lift(f: AlgebraMorphism, a: Sequence[int]) -> tuple[int, ...]:
    """Deterministic preimage of ``a`` under a surjection."""
    s, t = f.source, f.target
    m = f.matrix
    if s.ring != t.ring:
        # coefficients are lifted to canonical representatives first
        m = np.vstack([m, np.eye(t.rank, dtype=np.int64) * t.ring.modulus])
        x = RowSolver(Mat(s.ring, m, ncols=t.rank)).solve(a)
        if x is None:
            raise ArtinError("element has no preimage")
        return tuple(x[: s.rank])
    x = RowSolver(Mat(s.ring, m, ncols=t.rank)).solve(a)
    if x is None:
        raise ArtinError("element has no preimage")
    return x


def truncated_polynomial_order(A: ArtinLocalAlgebra) -> int | None:
    """``n`` if ``A`` is isomorphic to ``k[t]/t^n`` over F_l, else ``None``."""
    if not A.is_over_field:
        return None
    if A.rank == 1:
        return 1
    if A.cotangent_dim() != 1:
        return None
    return A.rank
