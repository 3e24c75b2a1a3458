"""Schlessinger-type criteria for set-valued functors on nilpotent graded Lie algebras.

Objects are truncated graded Lie algebras over F_l; functors are given as
oracles that evaluate on any object (including constructed fiber products)
and act on any morphism.  Everything is decided by exhaustive enumeration,
so only desk-scale categories are meaningful.

The epsilon object ``L(eps)`` is the one-dimensional abelian algebra in
degree 1.  The identity counts as a degenerate small section and is left out
of the H1 and H4 quantifiers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Sequence

import numpy as np

from .coeff import Mat, howell_form, kernel_basis
from .graded_lie import (
    GradedLieAlgebra,
    GradedMorphism,
    abelian,
    bracket_eval,
    central_quotient,
    direct_sum,
    ideal_closure,
    subalgebra,
    validate,
    validate_morphism,
    zero_algebra,
)


class SchlessingerError(ValueError):
    pass


def epsilon_object(l_ring, truncation: int) -> GradedLieAlgebra:
    return abelian(l_ring, (1,) + (0,) * (truncation - 1), ("eps",))


# -------------------------------------------------------------------- Hom


@lru_cache(maxsize=512)
def hom_set(source: GradedLieAlgebra, target: GradedLieAlgebra) -> tuple[GradedMorphism, ...]:
    """All graded Lie morphisms ``source -> target``, in a deterministic order."""
    if source.ring != target.ring or not source.ring.is_field:
        raise SchlessingerError("Hom sets are enumerated over a common field")
    if target.truncation > source.truncation:
        raise SchlessingerError("target truncation exceeds source truncation")
    q = source.ring.modulus
    S, T = source, target
    present = sorted(set(S.degrees))
    due: dict[int, list[tuple[int, int]]] = {}
    for i, j in itertools.combinations(range(S.dim), 2):
        s = S.degrees[i] + S.degrees[j]
        if s > T.truncation:
            continue
        ready = max([S.degrees[j]] + [dg for dg in present if dg <= s])
        due.setdefault(ready, []).append((i, j))
    images: list[tuple[int, ...]] = [()] * S.dim
    out = []

    def ok(deg: int) -> bool:
        for i, j in due.get(deg, ()):
            br = bracket_eval(S, S.basis_vector(i), S.basis_vector(j))
            lhs = [0] * T.dim
            for k, c in enumerate(br):
                if c:
                    lhs = [(a + c * b) % q for a, b in zip(lhs, images[k])]
            rhs = bracket_eval(T, images[i], images[j])
            if tuple(lhs) != rhs:
                return False
        return True

    def rec(pos: int):
        if pos == S.dim:
            out.append(GradedMorphism.from_images(S, T, images))
            return
        deg = S.degrees[pos]
        cols = list(T.piece(deg))
        for choice in itertools.product(range(q), repeat=len(cols)):
            v = [0] * T.dim
            for k, c in zip(cols, choice):
                v[k] = c
            images[pos] = tuple(v)
            last = pos + 1 == S.dim or S.degrees[pos + 1] != deg
            if last and not ok(deg):
                continue
            rec(pos + 1)

    rec(0)
    return tuple(out)


def zero_morphism(source: GradedLieAlgebra, target: GradedLieAlgebra) -> GradedMorphism:
    return GradedMorphism.zero(source, target)


# ------------------------------------------------------------ fiber product


@dataclass(frozen=True, eq=False)
class FiberProduct:
    algebra: GradedLieAlgebra
    first: GradedMorphism
    second: GradedMorphism
    f: GradedMorphism
    g: GradedMorphism


def fiber_product(f: GradedMorphism, g: GradedMorphism) -> FiberProduct:
    """``{(a, b) : f(a) = g(b)}`` inside ``N' + N''`` with its two projections."""
    if f.target != g.target:
        raise SchlessingerError("the two morphisms have different targets")
    N1, N2 = f.source, g.source
    if N1.truncation != N2.truncation:
        raise SchlessingerError("fiber products need equal truncation")
    ring = N1.ring
    if not ring.is_field:
        raise SchlessingerError("fiber products are computed over F_l")
    S = direct_sum(N1, N2)
    # coordinates of the direct sum: per degree, N1's basis then N2's
    pos1, pos2 = {}, {}
    p = 0
    for d in range(1, S.truncation + 1):
        for i in N1.piece(d):
            pos1[i] = p
            p += 1
        for i in N2.piece(d):
            pos2[i] = p
            p += 1
    q = ring.modulus
    vectors = []
    for d in range(1, S.truncation + 1):
        r1, r2 = list(N1.piece(d)), list(N2.piece(d))
        if not r1 and not r2:
            continue
        rows = [list(f.block(d).row(a)) for a in range(len(r1))] if d <= f.target.truncation else [[] for _ in r1]
        rows += [[(-x) % q for x in g.block(d).row(b)] for b in range(len(r2))] if d <= g.target.truncation else [[] for _ in r2]
        width = f.target.rank(d) if d <= f.target.truncation else 0
        if width == 0:
            kb = Mat.identity(ring, len(r1) + len(r2))
        else:
            kb = kernel_basis(Mat(ring, rows, ncols=width))
        for row in kb.data:
            v = [0] * S.dim
            for a, i in enumerate(r1):
                v[pos1[i]] = int(row[a])
            for b, i in enumerate(r2):
                v[pos2[i]] = int(row[len(r1) + b])
            vectors.append(v)
    P, incl = subalgebra(S, vectors, [f"p{i}" for i in range(len(vectors))])
    m1 = np.zeros((S.dim, N1.dim), dtype=np.int64)
    m2 = np.zeros((S.dim, N2.dim), dtype=np.int64)
    for i, c in pos1.items():
        m1[c, i] = 1
    for i, c in pos2.items():
        m2[c, i] = 1
    pr1 = GradedMorphism(P, N1, incl.matrix @ Mat(ring, m1, ncols=N1.dim))
    pr2 = GradedMorphism(P, N2, incl.matrix @ Mat(ring, m2, ncols=N2.dim))
    return FiberProduct(P, pr1, pr2, f, g)


def check_universal_property(fp: FiberProduct, objects: Sequence[GradedLieAlgebra]) -> list[str]:
    """Every cone from a listed object factors uniquely through the fiber product (exhaustive)."""
    failures = []
    for X in objects:
        if X.truncation != fp.algebra.truncation or X.ring != fp.algebra.ring:
            continue
        homs_P = hom_set(X, fp.algebra)
        factor: dict[tuple, int] = {}
        for w in homs_P:
            key = (w.then(fp.first).matrix, w.then(fp.second).matrix)
            factor[key] = factor.get(key, 0) + 1
        for u in hom_set(X, fp.f.source):
            uf = u.then(fp.f).matrix
            for v in hom_set(X, fp.g.source):
                if v.then(fp.g).matrix != uf:
                    continue
                n = factor.get((u.matrix, v.matrix), 0)
                if n != 1:
                    failures.append(f"cone from {X!r} factors {n} times")
    return failures


# ------------------------------------------------------------ small sections


@dataclass(frozen=True)
class SmallSectionDecision:
    surjective: bool
    central: bool
    principal: bool
    degenerate: bool
    generator: tuple[int, ...] | None

    @property
    def small(self) -> bool:
        return self.surjective and self.central and self.principal and not self.degenerate


def is_small_section(p: GradedMorphism) -> SmallSectionDecision:
    """Surjective with kernel a central ideal generated by one element."""
    if not validate_morphism(p).ok:
        raise SchlessingerError("not a Lie morphism")
    N = p.source
    surjective = p.is_surjective()
    kernel = p.kernel()
    central = all(not any(bracket_eval(N, N.basis_vector(i), t)) for t in kernel for i in range(N.dim))
    if not kernel:
        return SmallSectionDecision(surjective, True, True, True, None)
    # a central ideal is spanned by its generators, so principal means rank one
    principal = central and len(kernel) == 1
    gen = kernel[0] if principal else None
    if not central:
        for t in kernel:
            pieces = ideal_closure(N, [t])
            if sum(len(x) for x in pieces) == len(kernel):
                principal, gen = True, t
                break
    return SmallSectionDecision(surjective, central, principal, False, gen)


# ------------------------------------------------------------------ oracles


class FunctorOracle:
    """A set-valued functor given by evaluation on objects and action on morphisms."""

    name = "functor"

    def evaluate(self, N: GradedLieAlgebra) -> tuple[Hashable, ...]:
        raise NotImplementedError

    def act(self, f: GradedMorphism, x: Hashable) -> Hashable:
        raise NotImplementedError


class Representable(FunctorOracle):
    """``N -> Hom(L, N)``."""

    def __init__(self, L: GradedLieAlgebra, name: str | None = None):
        self.L = L
        self.name = name or f"h_{L!r}"

    def evaluate(self, N):
        if N.truncation > self.L.truncation:
            return ()
        return tuple(h.matrix for h in hom_set(self.L, N))

    def act(self, f, x):
        return x @ f.matrix


class RankBounded(FunctorOracle):
    """Morphisms ``L -> N`` of rank at most ``bound``: a subfunctor of ``h_L`` that breaks H1."""

    def __init__(self, L: GradedLieAlgebra, bound: int = 1):
        self.L = L
        self.bound = bound
        self.name = f"rank<={bound} maps from {L!r}"

    def evaluate(self, N):
        return tuple(h.matrix for h in hom_set(self.L, N) if howell_form(h.matrix).nrows <= self.bound)

    def act(self, f, x):
        return x @ f.matrix


class ConstantFunctor(FunctorOracle):
    def __init__(self, points: Sequence[Hashable]):
        self.points = tuple(points)
        self.name = f"constant {len(self.points)}-point functor"

    def evaluate(self, N):
        return self.points

    def act(self, f, x):
        return x


class DeformationTransport(FunctorOracle):
    """Lifts of ``rho_bar: G -> T`` to ``G -> T + N`` that reduce to ``rho_bar``.

    Such a lift is ``rho_bar + phi`` with ``phi: G -> N`` a Lie morphism, so
    the functor is represented by ``G``.
    """

    def __init__(self, rep):
        self.rep = rep
        self.name = "deformation transport"

    def evaluate(self, N):
        G = self.rep.reduced_source
        if N.truncation != G.truncation:
            return ()
        return tuple(h.matrix for h in hom_set(G, N))

    def act(self, f, x):
        return x @ f.matrix


# -------------------------------------------------------------- categories


@dataclass(frozen=True, eq=False)
class TestCategory:
    objects: tuple[GradedLieAlgebra, ...]
    morphisms: tuple[GradedMorphism, ...]
    zero: GradedLieAlgebra
    epsilon: GradedLieAlgebra
    names: dict = field(default_factory=dict)

    __test__ = False  # not a pytest class

    def problems(self) -> list[str]:
        out = []
        if not any(o == self.zero for o in self.objects) or self.zero.dim != 0:
            out.append("category lacks the zero object")
        if not any(o == self.epsilon for o in self.objects):
            out.append("category lacks the epsilon object")
        for o in self.objects:
            if not validate(o).ok:
                out.append(f"object {self.name_of(o)} is not a Lie algebra")
        for f in self.morphisms:
            if not validate_morphism(f).ok:
                out.append(f"morphism {self.name_of(f.source)} -> {self.name_of(f.target)} is not a Lie morphism")
        return out

    def name_of(self, obj: GradedLieAlgebra) -> str:
        for k, v in self.names.items():
            if v == obj:
                return k
        return repr(obj)

    def small_sections(self) -> list[GradedMorphism]:
        return [g for g in self.morphisms if is_small_section(g).small]


def standard_category(ring, truncation: int = 2) -> TestCategory:
    """``0``, ``L(eps)``, ``L(eps)^2``, Heisenberg and its abelianization, with the evident maps.

    Includes the small sections ``L(eps) -> 0``, ``L(eps)^2 -> L(eps)`` and
    ``Heis -> Heis^ab``.
    """
    if truncation < 2:
        raise SchlessingerError("the standard category needs truncation >= 2")
    pad = (0,) * (truncation - 2)
    zero = zero_algebra(ring, truncation)
    eps = epsilon_object(ring, truncation)
    eps2 = abelian(ring, (2, 0) + pad, ("e1", "e2"))
    heis = GradedLieAlgebra.from_brackets(ring, (2, 1) + pad, {(0, 1): {2: 1}}, ("x", "y", "z"))
    heis_ab = abelian(ring, (2, 0) + pad, ("x", "y"))
    objects = (zero, eps, eps2, heis_ab, heis)
    mor = [
        GradedMorphism.zero(eps, zero),
        GradedMorphism.zero(eps2, zero),
        GradedMorphism.zero(heis_ab, zero),
        GradedMorphism.zero(heis, zero),
        GradedMorphism.from_images(eps2, eps, [[1], [0]]),
        GradedMorphism.from_images(eps2, eps, [[0], [1]]),
        GradedMorphism.from_images(heis_ab, eps, [[1], [0]]),
        GradedMorphism.from_images(heis, heis_ab, [[1, 0], [0, 1], [0, 0]]),
        GradedMorphism.from_images(heis, eps, [[1], [0], [0]]),
    ]
    names = {"0": zero, "L(eps)": eps, "L(eps)^2": eps2, "Heis^ab": heis_ab, "Heis": heis}
    return TestCategory(objects, tuple(mor), zero, eps, names)


# ---------------------------------------------------------------- checker


@dataclass
class CriterionResult:
    name: str
    passed: bool
    checked: int
    failures: list[str] = field(default_factory=list)


@dataclass
class SchlessingerReport:
    functor: str
    results: dict[str, CriterionResult]
    tangent_size: int
    tangent_dim: int | None

    @property
    def has_hull(self) -> bool:
        return all(self.results[k].passed for k in ("H1", "H2", "H3"))

    @property
    def pro_representable(self) -> bool:
        return self.has_hull and self.results["H4"].passed

    def lines(self) -> list[str]:
        out = [f"functor: {self.functor}"]
        for key in ("H1", "H2", "H3", "H4"):
            r = self.results[key]
            status = "pass" if r.passed else "FAIL"
            out.append(f"{key}: {status} ({r.checked} instances)")
            out.extend(f"  {f}" for f in r.failures[:5])
        dim = "not a power of l" if self.tangent_dim is None else str(self.tangent_dim)
        out.append(f"|t_F| = {self.tangent_size}, dim t_F = {dim}")
        out.append(f"has hull: {'yes' if self.has_hull else 'no'}")
        out.append(f"pro-representable: {'yes' if self.pro_representable else 'no'}")
        return out


def _as_set(F: FunctorOracle, N: GradedLieAlgebra) -> list:
    vals = F.evaluate(N)
    seen, out = set(), []
    for v in vals:
        k = _key(v)
        if k not in seen:
            seen.add(k)
            out.append(v)
    return out


def _key(v) -> Hashable:
    return v if not isinstance(v, np.ndarray) else v.tobytes()


def validate_oracle(F: FunctorOracle, cat: TestCategory) -> list[str]:
    """The zero-object axiom and functoriality on composable listed morphisms."""
    out = []
    if len(_as_set(F, cat.zero)) != 1:
        out.append(f"F(0) has {len(_as_set(F, cat.zero))} points, expected 1")
    for N in cat.objects:
        ident = GradedMorphism.identity(N)
        for x in _as_set(F, N):
            if _key(F.act(ident, x)) != _key(x):
                out.append(f"identity of {cat.name_of(N)} acts nontrivially")
                break
    for a in cat.morphisms:
        vals_b = {_key(x) for x in _as_set(F, a.target)}
        for x in _as_set(F, a.source):
            if _key(F.act(a, x)) not in vals_b:
                out.append(f"action of a morphism leaves F({cat.name_of(a.target)})")
                break
        for b in cat.morphisms:
            if a.target != b.source:
                continue
            ab = a.then(b)
            for x in _as_set(F, a.source):
                if _key(F.act(ab, x)) != _key(F.act(b, F.act(a, x))):
                    out.append(f"functoriality fails on {cat.name_of(a.source)} -> {cat.name_of(a.target)} -> {cat.name_of(b.target)}")
                    break
    return out


def _comparison(F: FunctorOracle, f: GradedMorphism, g: GradedMorphism) -> tuple[int, int, int]:
    """Sizes of ``F(N' x_N N'')``, of the fiber set, and of the image of the comparison map."""
    fp = fiber_product(f, g)
    left = _as_set(F, fp.algebra)
    image = {(_key(F.act(fp.first, x)), _key(F.act(fp.second, x))) for x in left}
    fiber = set()
    for a in _as_set(F, f.source):
        fa = _key(F.act(f, a))
        for b in _as_set(F, g.source):
            if _key(F.act(g, b)) == fa:
                fiber.add((_key(a), _key(b)))
    if not image <= fiber:
        raise SchlessingerError("comparison map leaves the fiber set (oracle is not functorial)")
    return len(left), len(fiber), len(image)


def check_criteria(F: FunctorOracle, cat: TestCategory) -> SchlessingerReport:
    problems = cat.problems()
    if problems:
        raise SchlessingerError("invalid test category: " + "; ".join(problems))
    problems = validate_oracle(F, cat)
    if problems:
        raise SchlessingerError("invalid functor oracle: " + "; ".join(problems))
    smalls = cat.small_sections()
    h1 = CriterionResult("H1", True, 0)
    h4 = CriterionResult("H4", True, 0)
    for g in smalls:
        for f in cat.morphisms:
            if f.target != g.target or f.source.truncation != g.source.truncation:
                continue
            n_left, n_fiber, n_image = _comparison(F, f, g)
            h1.checked += 1
            h4.checked += 1
            label = f"{cat.name_of(f.source)} -> {cat.name_of(f.target)} <- {cat.name_of(g.source)}"
            if n_image != n_fiber:
                h1.passed = False
                h1.failures.append(f"not surjective on {label}: {n_image} of {n_fiber}")
            if n_image != n_fiber or n_left != n_image:
                h4.passed = False
                h4.failures.append(f"not bijective on {label}: |F(P)| = {n_left}, fiber = {n_fiber}")
    h2 = CriterionResult("H2", True, 0)
    eps_to_zero = GradedMorphism.zero(cat.epsilon, cat.zero)
    for N in cat.objects:
        if N.truncation != cat.epsilon.truncation:
            continue
        f = GradedMorphism.zero(N, cat.zero)
        n_left, n_fiber, n_image = _comparison(F, f, eps_to_zero)
        h2.checked += 1
        if not (n_left == n_fiber == n_image):
            h2.passed = False
            h2.failures.append(f"not bijective for N' = {cat.name_of(N)}: |F(P)| = {n_left}, fiber = {n_fiber}, image = {n_image}")
    size = len(_as_set(F, cat.epsilon))
    l = cat.epsilon.ring.l
    dim = round(math.log(size, l)) if size else None
    if dim is not None and l**dim != size:
        dim = None
    h3 = CriterionResult("H3", dim is not None, 1, [] if dim is not None else [f"|t_F| = {size} is not a power of {l}"])
    return SchlessingerReport(F.name, {"H1": h1, "H2": h2, "H3": h3, "H4": h4}, size, dim)


def completion_tower(F: FunctorOracle, L: GradedLieAlgebra) -> list[tuple[int, int, bool]]:
    """``(n, |F(L / L_{>=n})|, transition well defined)`` for ``n = 2 .. d + 1``.

    The transition checked at ``n`` is the map induced by
    ``L/L_{>=n} -> L/L_{>=n-1}``.
    """
    out = []
    for n in range(2, L.truncation + 2):
        Q, _ = central_quotient(L, n)
        vals = _as_set(F, Q)
        ok = True
        if n > 2:
            smaller, step = central_quotient(Q, n - 1)
            targets = {_key(v) for v in _as_set(F, smaller)}
            ok = all(_key(F.act(step, x)) in targets for x in vals)
        out.append((n, len(vals), ok))
    return out
