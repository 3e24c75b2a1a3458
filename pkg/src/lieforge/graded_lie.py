"""Positively graded Lie algebras truncated at a degree bound.

Basis elements are indexed globally in degree order; ``L.degrees[i]`` is the
degree of basis element ``i``.  Elements are plain coordinate tuples over the
coefficient ring.  Brackets whose degree exceeds the truncation are zero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .coeff import CoeffRing, Mat, RowSolver, howell_form

Element = tuple[int, ...]
Vec = tuple[tuple[int, int], ...]  # sparse (index, coefficient) pairs


class LieError(ValueError):
    pass


def _sparse(values: Mapping[int, int] | Iterable[tuple[int, int]], q: int) -> Vec:
    items = values.items() if isinstance(values, Mapping) else values
    acc: dict[int, int] = {}
    for k, c in items:
        acc[k] = (acc.get(k, 0) + int(c)) % q
    return tuple(sorted((k, c) for k, c in acc.items() if c))


@dataclass(frozen=True)
class Issue:
    kind: str  # "antisymmetry" | "alternating" | "grading" | "jacobi" | "morphism" | "action"
    indices: tuple[int, ...]
    residual: tuple[int, ...]

    def describe(self, labels: Sequence[str] | None = None) -> str:
        names = [labels[i] if labels else str(i) for i in self.indices]
        return f"{self.kind} violated at ({', '.join(names)}): residual {list(self.residual)}"


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[Issue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.issues

    def __bool__(self) -> bool:
        return self.ok

    def __iter__(self):
        return iter(self.issues)

    def __len__(self) -> int:
        return len(self.issues)


@dataclass(frozen=True, eq=False)
class GradedLieAlgebra:
    """Graded Lie algebra ``L(1) + ... + L(d)`` given by structure constants.

    ``table`` maps ordered basis pairs ``(i, j)`` to the sparse vector
    ``[e_i, e_j]``; absent pairs bracket to zero.  Most constructors store both
    orders, but the table is taken literally so corrupted data can be
    represented and reported by :func:`validate`.
    """

    ring: CoeffRing
    truncation: int
    ranks: tuple[int, ...]
    labels: tuple[str, ...]
    table: Mapping[tuple[int, int], Vec]
    lyndon_words: tuple[tuple[int, ...], ...] | None = None
    generators: tuple[tuple[str, int], ...] | None = None
    degrees: tuple[int, ...] = field(init=False)
    offsets: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        if self.truncation < 0:
            raise LieError("truncation degree must be non-negative")
        if len(self.ranks) != self.truncation:
            raise LieError(f"expected {self.truncation} piece ranks, got {len(self.ranks)}")
        degrees = tuple(d + 1 for d, n in enumerate(self.ranks) for _ in range(n))
        if len(self.labels) != len(degrees):
            raise LieError(f"expected {len(degrees)} labels, got {len(self.labels)}")
        offsets = [0]
        for n in self.ranks:
            offsets.append(offsets[-1] + n)
        object.__setattr__(self, "degrees", degrees)
        object.__setattr__(self, "offsets", tuple(offsets))
        q = self.ring.modulus
        clean = {}
        for (i, j), vec in self.table.items():
            v = _sparse(vec, q)
            if v:
                clean[(i, j)] = v
        object.__setattr__(self, "table", clean)

    @classmethod
    def from_brackets(
        cls,
        ring: CoeffRing,
        ranks: Sequence[int],
        brackets: Mapping[tuple[int, int], Mapping[int, int] | Iterable[tuple[int, int]]],
        labels: Sequence[str] | None = None,
        **extra,
    ) -> "GradedLieAlgebra":
        """Build from brackets given on one order of each pair; the other order is filled in by antisymmetry."""
        q = ring.modulus
        n = sum(ranks)
        if labels is None:
            labels = [f"e{i}" for i in range(n)]
        table: dict[tuple[int, int], Vec] = {}
        for (i, j), vec in brackets.items():
            if i == j:
                raise LieError(f"bracket [e{i}, e{i}] must be zero")
            if (j, i) in brackets:
                raise LieError(f"bracket ({i}, {j}) given in both orders")
            v = _sparse(vec, q)
            table[(i, j)] = v
            table[(j, i)] = tuple((k, (-c) % q) for k, c in v)
        return cls(ring, len(ranks), tuple(ranks), tuple(labels), table, **extra)

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def piece(self, deg: int) -> range:
        """Global indices of the basis of ``L(deg)`` (empty outside ``1..d``)."""
        if deg < 1 or deg > self.truncation:
            return range(0)
        return range(self.offsets[deg - 1], self.offsets[deg])

    def rank(self, deg: int) -> int:
        return len(self.piece(deg))

    def bracket_basis(self, i: int, j: int) -> Vec:
        return self.table.get((i, j), ())

    def basis_vector(self, i: int) -> Element:
        v = [0] * self.dim
        v[i] = 1
        return tuple(v)

    def zero(self) -> Element:
        return (0,) * self.dim

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def same_shape(self, other: "GradedLieAlgebra") -> bool:
        return self.ring == other.ring and self.ranks == other.ranks

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedLieAlgebra):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.truncation == other.truncation
            and self.ranks == other.ranks
            and self.labels == other.labels
            and dict(self.table) == dict(other.table)
        )

    def __hash__(self) -> int:
        return hash((self.ring, self.truncation, self.ranks, self.labels, tuple(sorted(self.table.items()))))

    def __repr__(self) -> str:
        return f"GradedLieAlgebra({self.ring}, d={self.truncation}, ranks={self.ranks})"

    def structure_tensor(self) -> np.ndarray:
        """Dense ``c[i, j, k]`` with ``[e_i, e_j] = sum_k c[i, j, k] e_k``."""
        n = self.dim
        c = np.zeros((n, n, n), dtype=np.int64)
        for (i, j), vec in self.table.items():
            for k, v in vec:
                c[i, j, k] = v
        return c


def bracket_eval(L: GradedLieAlgebra, u: Sequence[int], v: Sequence[int]) -> Element:
    """Bilinear extension of the structure constants."""
    n = L.dim
    if len(u) != n or len(v) != n:
        raise LieError(f"element length mismatch: expected {n}")
    q = L.ring.modulus
    out = [0] * n
    nz_u = [(i, a) for i, a in enumerate(u) if a % q]
    nz_v = [(j, b) for j, b in enumerate(v) if b % q]
    for i, a in nz_u:
        for j, b in nz_v:
            for k, c in L.table.get((i, j), ()):
                out[k] = (out[k] + a * b * c) % q
    return tuple(out)


def _add(q: int, *vecs: Sequence[int]) -> Element:
    out = [0] * len(vecs[0])
    for v in vecs:
        for i, x in enumerate(v):
            out[i] = (out[i] + x) % q
    return tuple(out)


def _dense(vec: Vec, n: int) -> Element:
    out = [0] * n
    for k, c in vec:
        out[k] = c
    return tuple(out)


def validate(L: GradedLieAlgebra) -> ValidationReport:
    """Every grading, antisymmetry, alternating and Jacobi violation of ``L``."""
    issues: list[Issue] = []
    q = L.ring.modulus
    n = L.dim
    for (i, j), vec in sorted(L.table.items()):
        if not (0 <= i < n and 0 <= j < n) or any(not 0 <= k < n for k, _ in vec):
            issues.append(Issue("grading", (i, j), tuple(c for _, c in vec)))
            continue
        target = L.degrees[i] + L.degrees[j]
        if any(L.degrees[k] != target for k, _ in vec):
            issues.append(Issue("grading", (i, j), _dense(vec, n)))
    if any(i.kind == "grading" and any(not 0 <= x < n for x in i.indices) for i in issues):
        return ValidationReport(tuple(issues))
    for i in range(n):
        if L.table.get((i, i)):
            issues.append(Issue("alternating", (i, i), _dense(L.table[(i, i)], n)))
    for i, j in itertools.combinations(range(n), 2):
        a = _dense(L.table.get((i, j), ()), n)
        b = _dense(L.table.get((j, i), ()), n)
        s = _add(q, a, b)
        if any(s):
            issues.append(Issue("antisymmetry", (i, j), s))
    basis = [L.basis_vector(i) for i in range(n)]
    for i, j, k in itertools.combinations(range(n), 3):
        if L.degrees[i] + L.degrees[j] + L.degrees[k] > L.truncation:
            continue
        x, y, z = basis[i], basis[j], basis[k]
        jac = _add(
            q,
            bracket_eval(L, bracket_eval(L, x, y), z),
            bracket_eval(L, bracket_eval(L, y, z), x),
            bracket_eval(L, bracket_eval(L, z, x), y),
        )
        if any(jac):
            issues.append(Issue("jacobi", (i, j, k), jac))
    return ValidationReport(tuple(issues))


# ---------------------------------------------------------------- morphisms


@dataclass(frozen=True, eq=False)
class GradedMorphism:
    """Degree-preserving linear map; ``matrix`` row ``i`` is the image of source basis ``i``.

    The target may be truncated lower than the source (e.g. projections onto
    central quotients); source pieces above the target truncation map to zero.
    """

    source: GradedLieAlgebra
    target: GradedLieAlgebra
    matrix: Mat

    def __post_init__(self) -> None:
        if self.source.ring != self.target.ring:
            raise LieError("morphism between algebras over different rings")
        if self.target.truncation > self.source.truncation:
            raise LieError("target truncation exceeds source truncation")
        if self.matrix.shape != (self.source.dim, self.target.dim):
            raise LieError(f"matrix shape {self.matrix.shape} != {(self.source.dim, self.target.dim)}")
        for (i, k), v in np.ndenumerate(self.matrix.data):
            if v and self.source.degrees[i] != self.target.degrees[k]:
                raise LieError(f"morphism entry ({i}, {k}) is not degree preserving")

    @classmethod
    def from_images(cls, source: GradedLieAlgebra, target: GradedLieAlgebra, images: Sequence[Sequence[int]]) -> "GradedMorphism":
        return cls(source, target, Mat(source.ring, [list(r) for r in images], ncols=target.dim))

    @classmethod
    def identity(cls, L: GradedLieAlgebra) -> "GradedMorphism":
        return cls(L, L, Mat.identity(L.ring, L.dim))

    @classmethod
    def zero(cls, source: GradedLieAlgebra, target: GradedLieAlgebra) -> "GradedMorphism":
        return cls(source, target, Mat.zeros(source.ring, source.dim, target.dim))

    def image(self, v: Sequence[int]) -> Element:
        vec = Mat(self.source.ring, [list(v)], ncols=self.source.dim) @ self.matrix
        return vec.row(0)

    def then(self, other: "GradedMorphism") -> "GradedMorphism":
        """``other o self``."""
        if self.target != other.source:
            raise LieError("morphisms are not composable")
        return GradedMorphism(self.source, other.target, self.matrix @ other.matrix)

    def block(self, deg: int) -> Mat:
        rows = self.source.piece(deg)
        cols = self.target.piece(deg)
        return Mat(self.source.ring, self.matrix.data[rows.start : rows.stop, cols.start : cols.stop], ncols=len(cols))

    def is_surjective(self) -> bool:
        return all(howell_form(self.block(d)).nrows == self.target.rank(d) for d in range(1, self.target.truncation + 1))

    def kernel(self) -> list[Element]:
        """Basis (Howell rows) of the kernel, as source elements."""
        from .coeff import kernel_basis

        out = []
        for d in range(1, self.source.truncation + 1):
            rows = self.source.piece(d)
            if not rows:
                continue
            block = self.block(d) if d <= self.target.truncation else Mat.zeros(self.source.ring, len(rows), 0)
            kb = kernel_basis(block) if block.ncols else Mat.identity(self.source.ring, len(rows))
            for r in kb.data:
                v = [0] * self.source.dim
                v[rows.start : rows.stop] = [int(x) for x in r]
                out.append(tuple(v))
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedMorphism):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)


def validate_morphism(f: GradedMorphism) -> ValidationReport:
    S, T = f.source, f.target
    issues = []
    q = S.ring.modulus
    images = [f.matrix.row(i) for i in range(S.dim)]
    for i, j in itertools.combinations(range(S.dim), 2):
        if S.degrees[i] + S.degrees[j] > T.truncation:
            continue
        lhs = f.image(bracket_eval(S, S.basis_vector(i), S.basis_vector(j)))
        rhs = bracket_eval(T, images[i], images[j])
        diff = tuple((a - b) % q for a, b in zip(lhs, rhs))
        if any(diff):
            issues.append(Issue("morphism", (i, j), diff))
    return ValidationReport(tuple(issues))


# ----------------------------------------------------------------- modules


@dataclass(frozen=True, eq=False)
class LieModule:
    """A graded ``L``-module; ``action[(i, k)]`` is ``e_i . m_k`` as a sparse vector."""

    algebra: GradedLieAlgebra
    degrees: tuple[int, ...]
    action: Mapping[tuple[int, int], Vec]
    labels: tuple[str, ...] | None = None

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def act(self, i: int, k: int) -> Vec:
        return self.action.get((i, k), ())

    def indices_of_degree(self, deg: int) -> tuple[int, ...]:
        return tuple(k for k, d in enumerate(self.degrees) if d == deg)

    def act_vec(self, x: Sequence[int], m: Sequence[int]) -> Element:
        q = self.algebra.ring.modulus
        out = [0] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            for k, b in enumerate(m):
                if not b:
                    continue
                for kk, c in self.action.get((i, k), ()):
                    out[kk] = (out[kk] + a * b * c) % q
        return tuple(out)


def validate_module(M: LieModule) -> ValidationReport:
    L = M.algebra
    q = L.ring.modulus
    issues = []
    for (i, k), vec in sorted(M.action.items()):
        if any(M.degrees[kk] != L.degrees[i] + M.degrees[k] for kk, _ in vec):
            issues.append(Issue("grading", (i, k), _dense(vec, M.dim)))
    for i, j in itertools.combinations(range(L.dim), 2):
        xy = bracket_eval(L, L.basis_vector(i), L.basis_vector(j))
        for k in range(M.dim):
            m = tuple(1 if t == k else 0 for t in range(M.dim))
            lhs = M.act_vec(xy, m)
            a = M.act_vec(L.basis_vector(i), M.act_vec(L.basis_vector(j), m))
            b = M.act_vec(L.basis_vector(j), M.act_vec(L.basis_vector(i), m))
            diff = tuple((x - y + z) % q for x, y, z in zip(lhs, a, b))
            if any(diff):
                issues.append(Issue("action", (i, j, k), diff))
    return ValidationReport(tuple(issues))


def adjoint_module(L: GradedLieAlgebra) -> LieModule:
    """``L`` acting on itself by ``x . m = [x, m]``."""
    return LieModule(L, L.degrees, dict(L.table), L.labels)


def pullback_module(f: GradedMorphism, M: LieModule) -> LieModule:
    """The ``f.source``-module obtained by restricting ``M`` along ``f``."""
    S = f.source
    q = S.ring.modulus
    action: dict[tuple[int, int], Vec] = {}
    for i in range(S.dim):
        img = f.matrix.row(i)
        for k in range(M.dim):
            acc: dict[int, int] = {}
            for a, coef in enumerate(img):
                if coef:
                    for kk, c in M.action.get((a, k), ()):
                        acc[kk] = acc.get(kk, 0) + coef * c
            v = _sparse(acc, q)
            if v:
                action[(i, k)] = v
    return LieModule(S, M.degrees, action, M.labels)


# ------------------------------------------------------------ constructors


def abelian(ring: CoeffRing, ranks: Sequence[int], labels: Sequence[str] | None = None) -> GradedLieAlgebra:
    n = sum(ranks)
    return GradedLieAlgebra(ring, len(ranks), tuple(ranks), tuple(labels or [f"e{i}" for i in range(n)]), {})


def zero_algebra(ring: CoeffRing, truncation: int) -> GradedLieAlgebra:
    return GradedLieAlgebra(ring, truncation, (0,) * truncation, (), {})


def _lyndon_words(alphabet_size: int, max_len: int) -> list[tuple[int, ...]]:
    """All Lyndon words of length <= max_len (Duval's generation order)."""
    out = []
    if alphabet_size == 0:
        return out
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == alphabet_size - 1:
            w.pop()
    return out


def standard_factorization(w: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``w = u v`` with ``v`` the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        v = w[i:]
        if _is_lyndon(v):
            return w[:i], v
    raise LieError(f"{w} has no standard factorization")


def _is_lyndon(w: tuple[int, ...]) -> bool:
    return all(w < w[i:] + w[:i] for i in range(1, len(w))) if len(w) > 1 else len(w) == 1


def _poly_bracket(p: dict, r: dict) -> dict:
    out: dict[tuple[int, ...], int] = {}
    for a, x in p.items():
        for b, y in r.items():
            out[a + b] = out.get(a + b, 0) + x * y
            out[b + a] = out.get(b + a, 0) - x * y
    return {k: v for k, v in out.items() if v}


def free_lie_truncated(
    generators: Sequence[tuple[str, int]], d: int, ring: CoeffRing | None = None
) -> GradedLieAlgebra:
    """Free Lie algebra on weighted generators modulo everything of degree > d.

    The basis is the standard bracketing of Lyndon words, ordered by degree
    then lexicographically; brackets are rewritten into it through the
    triangularity of Lyndon polynomials.
    """
    ring = ring or CoeffRing(5)
    gens = list(generators)
    if any(deg < 1 for _, deg in gens):
        raise LieError("generator degrees must be positive")
    if d < 1 or (gens and d < max(deg for _, deg in gens)):
        raise LieError(f"truncation {d} below a generator degree")
    if len({name for name, _ in gens}) != len(gens):
        raise LieError("generator labels must be distinct")
    weights = [deg for _, deg in gens]
    min_w = min(weights) if weights else 1
    words = [w for w in _lyndon_words(len(gens), d // min_w) if sum(weights[a] for a in w) <= d]
    words.sort(key=lambda w: (sum(weights[a] for a in w), w))
    index = {w: i for i, w in enumerate(words)}
    degrees = [sum(weights[a] for a in w) for w in words]

    polys: dict[tuple[int, ...], dict] = {}
    trees: dict[tuple[int, ...], object] = {}

    def poly(w):
        if w not in polys:
            if len(w) == 1:
                polys[w] = {w: 1}
                trees[w] = w[0]
            else:
                u, v = standard_factorization(w)
                polys[w] = _poly_bracket(poly(u), poly(v))
                trees[w] = (tree(u), tree(v))
        return polys[w]

    def tree(w):
        poly(w)
        return trees[w]

    for w in words:
        poly(w)

    def to_basis(p: dict) -> dict[int, int]:
        p = dict(p)
        out: dict[int, int] = {}
        while p:
            w = min(p)
            c = p[w]
            if w not in index:
                raise LieError(f"rewriting failed at word {w}")
            out[index[w]] = c
            for x, y in polys[w].items():
                p[x] = p.get(x, 0) - c * y
                if p[x] == 0:
                    del p[x]
        return out

    q = ring.modulus
    table: dict[tuple[int, int], Vec] = {}
    for a, b in itertools.combinations(range(len(words)), 2):
        if degrees[a] + degrees[b] > d:
            continue
        v = _sparse(to_basis(_poly_bracket(polys[words[a]], polys[words[b]])), q)
        if v:
            table[(a, b)] = v
            table[(b, a)] = tuple((k, (-c) % q) for k, c in v)

    names = [name for name, _ in gens]

    def label(t) -> str:
        if isinstance(t, int):
            return names[t]
        return f"[{label(t[0])},{label(t[1])}]"

    ranks = [0] * d
    for deg in degrees:
        ranks[deg - 1] += 1
    return GradedLieAlgebra(
        ring, d, tuple(ranks), tuple(label(trees[w]) for w in words), table, tuple(words), tuple(gens)
    )


def bracket_tree(L: GradedLieAlgebra, i: int):
    """Standard-bracketing tree (nested pairs of generator indices) of a free-algebra basis element."""
    if L.lyndon_words is None:
        raise LieError("algebra was not built by free_lie_truncated")
    w = L.lyndon_words[i]
    if len(w) == 1:
        return w[0]
    u, v = standard_factorization(w)
    words = L.lyndon_words
    return (bracket_tree(L, words.index(u)), bracket_tree(L, words.index(v)))


def free_lie_hom(G: GradedLieAlgebra, target: GradedLieAlgebra, generator_images: Sequence[Sequence[int]]) -> GradedMorphism:
    """The morphism out of a free-at-level-d algebra fixed by generator images."""
    if G.generators is None:
        raise LieError("source is not a free Lie algebra")
    if len(generator_images) != len(G.generators):
        raise LieError("one image per generator required")
    for (name, deg), img in zip(G.generators, generator_images):
        if any(c % target.ring.modulus and target.degrees[k] != deg for k, c in enumerate(img)):
            raise LieError(f"image of generator {name} is not homogeneous of degree {deg}")

    def evaluate(t):
        if isinstance(t, int):
            return tuple(generator_images[t])
        return bracket_eval(target, evaluate(t[0]), evaluate(t[1]))

    rows = []
    for i in range(G.dim):
        rows.append(evaluate(bracket_tree(G, i)) if G.degrees[i] <= target.truncation else target.zero())
    return GradedMorphism.from_images(G, target, rows)


def central_quotient(L: GradedLieAlgebra, n: int) -> tuple[GradedLieAlgebra, GradedMorphism]:
    """``L / L_{>=n}`` retruncated at ``n - 1``, with its projection."""
    if not 1 <= n <= L.truncation + 1:
        raise LieError(f"n={n} outside 1..{L.truncation + 1}")
    keep = L.offsets[n - 1]
    table = {
        (i, j): vec
        for (i, j), vec in L.table.items()
        if i < keep and j < keep and L.degrees[i] + L.degrees[j] <= n - 1
    }
    Q = GradedLieAlgebra(
        L.ring, n - 1, L.ranks[: n - 1], L.labels[:keep], table,
        L.lyndon_words[:keep] if L.lyndon_words else None,
        tuple(g for g in L.generators if g[1] <= n - 1) if L.generators else None,
    )
    proj = np.zeros((L.dim, keep), dtype=np.int64)
    for i in range(keep):
        proj[i, i] = 1
    return Q, GradedMorphism(L, Q, Mat(L.ring, proj, ncols=keep))


def change_ring(L: GradedLieAlgebra, ring: CoeffRing) -> GradedLieAlgebra:
    """Reinterpret the canonical integer constants of ``L`` over another Z/l^N."""
    if ring.l != L.ring.l:
        raise LieError("characteristic mismatch")
    return GradedLieAlgebra(ring, L.truncation, L.ranks, L.labels, L.table, L.lyndon_words, L.generators)


def reduce_mod_l(L: GradedLieAlgebra) -> GradedLieAlgebra:
    return change_ring(L, L.ring.residue_field)


def reduce_morphism(f: GradedMorphism, ring: CoeffRing) -> GradedMorphism:
    return GradedMorphism(change_ring(f.source, ring), change_ring(f.target, ring), f.matrix.reduce_to(ring))


def base_change_artin(L: GradedLieAlgebra, A):
    """The trivial deformation ``L (x) A`` (see :mod:`lieforge.deformation`)."""
    from .deformation import LieDeformation

    return LieDeformation.trivial(L, A)


def direct_sum(A: GradedLieAlgebra, B: GradedLieAlgebra) -> GradedLieAlgebra:
    """``A + B`` with basis ordered by degree, A's elements first within each degree."""
    if A.ring != B.ring or A.truncation != B.truncation:
        raise LieError("direct sum needs equal rings and truncations")
    order = []
    for d in range(1, A.truncation + 1):
        order += [("A", i) for i in A.piece(d)] + [("B", i) for i in B.piece(d)]
    pos = {key: p for p, key in enumerate(order)}
    table = {}
    for (i, j), vec in A.table.items():
        table[(pos[("A", i)], pos[("A", j)])] = tuple((pos[("A", k)], c) for k, c in vec)
    for (i, j), vec in B.table.items():
        table[(pos[("B", i)], pos[("B", j)])] = tuple((pos[("B", k)], c) for k, c in vec)
    labels = [f"{A.labels[i]}" if s == "A" else f"{B.labels[i]}'" for s, i in order]
    ranks = tuple(a + b for a, b in zip(A.ranks, B.ranks))
    return GradedLieAlgebra(A.ring, A.truncation, ranks, tuple(labels), table)


def subalgebra(L: GradedLieAlgebra, basis: Sequence[Sequence[int]], labels: Sequence[str] | None = None) -> tuple[GradedLieAlgebra, GradedMorphism]:
    """Lie subalgebra spanned by homogeneous field-basis vectors (closed under bracket), with its inclusion."""
    if not L.ring.is_field:
        raise LieError("subalgebras are only supported over F_l")
    vecs = sorted((tuple(int(x) % L.ring.modulus for x in v) for v in basis), key=lambda v: _vec_degree(L, v))
    vecs = [v for v in vecs if any(v)]
    degs = [_vec_degree(L, v) for v in vecs]
    ranks = [0] * L.truncation
    for dg in degs:
        ranks[dg - 1] += 1
    basis_mat = Mat.from_rows(L.ring, vecs, L.dim)
    solver = RowSolver(basis_mat)
    table = {}
    for a, b in itertools.permutations(range(len(vecs)), 2):
        br = bracket_eval(L, vecs[a], vecs[b])
        if not any(br):
            continue
        x = solver.solve(br)
        if x is None:
            raise LieError("span is not closed under the bracket")
        table[(a, b)] = _sparse(enumerate(x), L.ring.modulus)
    S = GradedLieAlgebra(L.ring, L.truncation, tuple(ranks), tuple(labels or [f"s{i}" for i in range(len(vecs))]), table)
    return S, GradedMorphism(S, L, basis_mat)


def _vec_degree(L: GradedLieAlgebra, v: Sequence[int]) -> int:
    degs = {L.degrees[i] for i, x in enumerate(v) if x}
    if len(degs) != 1:
        raise LieError("vector is not homogeneous")
    return degs.pop()


def ideal_closure(L: GradedLieAlgebra, generators: Iterable[Sequence[int]]) -> list[list[Element]]:
    """Per-degree RREF bases of the ideal generated by homogeneous elements (field case)."""
    if not L.ring.is_field:
        raise LieError("ideal closure is only supported over F_l")
    pieces: list[list[Element]] = [[] for _ in range(L.truncation + 1)]
    todo = [tuple(int(x) % L.ring.modulus for x in g) for g in generators]
    while todo:
        v = todo.pop()
        if not any(v):
            continue
        dg = _vec_degree(L, v)
        current = pieces[dg]
        if current and RowSolver(Mat.from_rows(L.ring, current, L.dim)).contains(v):
            continue
        current.append(v)
        pieces[dg] = [tuple(int(x) for x in r) for r in howell_form(Mat.from_rows(L.ring, current, L.dim)).data]
        for i in range(L.dim):
            if L.degrees[i] + dg <= L.truncation:
                w = bracket_eval(L, L.basis_vector(i), v)
                if any(w):
                    todo.append(w)
    return pieces


def quotient(L: GradedLieAlgebra, generators: Iterable[Sequence[int]]) -> tuple[GradedLieAlgebra, GradedMorphism]:
    """``L / I`` for the ideal generated by homogeneous elements, with its projection (field case).

    The quotient basis is the set of non-pivot coordinates of each degree.
    """
    pieces = ideal_closure(L, generators)
    q = L.ring.modulus
    keep: list[int] = []
    reducer: dict[int, tuple[int, Element]] = {}
    for dg in range(1, L.truncation + 1):
        pivots = {}
        for row in pieces[dg]:
            c = next(i for i, x in enumerate(row) if x)
            pivots[c] = row
        for i in L.piece(dg):
            if i in pivots:
                reducer[i] = pivots[i]
            else:
                keep.append(i)
    pos = {i: p for p, i in enumerate(keep)}

    def project(v: Sequence[int]) -> Element:
        v = list(v)
        for c, row in reducer.items():
            if v[c]:
                f = v[c]
                v = [(a - f * b) % q for a, b in zip(v, row)]
        return tuple(v[i] for i in keep)

    table = {}
    for a, b in itertools.permutations(keep, 2):
        if L.degrees[a] + L.degrees[b] > L.truncation:
            continue
        img = project(bracket_eval(L, L.basis_vector(a), L.basis_vector(b)))
        v = _sparse(enumerate(img), q)
        if v:
            table[(pos[a], pos[b])] = v
    ranks = [0] * L.truncation
    for i in keep:
        ranks[L.degrees[i] - 1] += 1
    Q = GradedLieAlgebra(L.ring, L.truncation, tuple(ranks), tuple(L.labels[i] for i in keep), table)
    proj = Mat.from_rows(L.ring, [project(L.basis_vector(i)) for i in range(L.dim)], len(keep))
    return Q, GradedMorphism(L, Q, proj)
