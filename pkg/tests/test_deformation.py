import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from instances import random_small_lie
from lieforge.artin import (
    AlgebraMorphism,
    extension_from_surjection,
    square_zero_algebra,
    truncated_polynomial,
    truncation_map,
)
from lieforge.ce_cohomology import Cochain, cochain_basis, cohomology_space, delta
from lieforge.coeff import CoeffRing
from lieforge.deformation import (
    CocycleSection,
    DeformationError,
    LieDeformation,
    ObstructionWitness,
    classify_square_zero,
    eta_zero,
    extend_deformation,
    find_equivalence,
    is_equivalence,
    lift_constants,
    miniversal_tower,
    mu_change_isomorphism,
    obstruction_class,
    order_two_obstruction,
    push_forward,
    quadratic_map,
    quotient_algebra,
)
from lieforge.graded_lie import abelian
from lieforge.suites import abelian_21, heisenberg
from oracles import extension_exists

F2, F3, F5 = CoeffRing(2), CoeffRing(3), CoeffRing(5)


def ab2111(ring):
    return abelian(ring, (2, 1, 1, 1), ("x", "y", "z", "w", "v"))


def random_local_map(rng, D1, A):
    mat = np.zeros((D1.rank, A.rank), dtype=np.int64)
    mat[D1.unit, A.unit] = 1
    for a in D1.maximal:
        for b in A.maximal:
            mat[a, b] = rng.randrange(A.ring.l)
    return AlgebraMorphism(D1, A, mat)


def test_eta_zero_is_a_deformation_over_the_tangent_algebra():
    L = abelian_21(F5)
    eta = eta_zero(L)
    assert eta.problems() == []
    assert eta.base.rank == 1 + cohomology_space(L, q=2, m=0).dim == 2
    assert eta.describe() == ["[x,y] = (t)*z"]


def test_eta_zero_rejects_bad_sections():
    L = abelian_21(F5)
    H = cohomology_space(L, q=2, m=0)
    with pytest.raises(DeformationError):
        eta_zero(L, CocycleSection(H, ()))
    with pytest.raises(DeformationError):
        eta_zero(L, CocycleSection(H, (H.representatives[0].scale(2),)))


def test_problems_detect_broken_brackets():
    L = heisenberg(F5)
    A = truncated_polynomial(F5, 2)
    d = LieDeformation.trivial(L, A)
    c = d.consts.copy()
    c[0, 1, 2, 0] = 2
    c[1, 0, 2, 0] = 3
    assert any("reduction" in p for p in LieDeformation(L, A, c).problems())
    c = d.consts.copy()
    c[0, 1, 0, 1] = 1
    assert any("grading" in p for p in LieDeformation(L, A, c).problems())


@given(st.integers(0, 10**6))
@settings(max_examples=25)
def test_push_forward_and_classification_round_trip(seed):
    rng = random.Random(seed)
    ring = rng.choice([F2, F3])
    L = random_small_lie(rng, ring, max_dim=5)
    eta = eta_zero(L)
    A = square_zero_algebra(ring, [f"e{i}" for i in range(rng.randint(1, 2))])
    f = random_local_map(rng, eta.base, A)
    d = push_forward(eta, f)
    assert d.problems() == []
    assert (classify_square_zero(d).matrix == f.matrix).all()


@given(st.integers(0, 10**6))
@settings(max_examples=25)
def test_coboundary_deformations_are_trivial(seed):
    rng = random.Random(seed)
    ring = rng.choice([F2, F3, F5])
    L = random_small_lie(rng, ring, max_dim=5)
    B1 = cochain_basis(L, q=1, m=0)
    if not B1.dim:
        return
    nu = Cochain(B1, tuple(rng.randrange(ring.l) for _ in range(B1.dim)))
    A = truncated_polynomial(ring, 2)
    d = LieDeformation.from_cochains(L, A, [(A.basis_vector(1), delta(nu))])
    assert d.problems() == []
    G = find_equivalence(LieDeformation.trivial(L, A), d)
    assert G is not None and is_equivalence(LieDeformation.trivial(L, A), d, G)


def test_nontrivial_class_is_not_equivalent_to_trivial():
    L = abelian_21(F5)
    eta = eta_zero(L)
    assert find_equivalence(LieDeformation.trivial(L, eta.base), eta) is None


@given(st.integers(0, 10**6))
@settings(max_examples=20)
def test_changing_representatives_gives_isomorphic_eta(seed):
    rng = random.Random(seed)
    ring = rng.choice([F3, F5])
    L = random_small_lie(rng, ring, max_dim=5)
    mu = CocycleSection.default(L)
    B1 = cochain_basis(L, q=1, m=0)
    nus = [Cochain(B1, tuple(rng.randrange(ring.l) for _ in range(B1.dim))) for _ in range(mu.dim)]
    shifted, eta, G = mu_change_isomorphism(mu, nus)
    assert shifted.problems() == []
    assert is_equivalence(shifted, eta, G) or is_equivalence(eta, shifted, G)


def test_extend_along_small_extension():
    L = abelian_21(F5)
    eta = eta_zero(L)
    ext = extension_from_surjection(truncation_map(F5, 3, 2))
    lifted = extend_deformation(eta, ext)
    assert isinstance(lifted, LieDeformation)
    assert lifted.problems() == []
    assert push_forward(lifted, ext.projection) == eta


def engineered_obstructed(ring):
    """``[x,w] = t v``, ``[y,z] = t w`` on the abelian (2,1,1,1) algebra."""
    L = ab2111(ring)
    A = truncated_polynomial(ring, 2)
    c = np.zeros((5, 5, 5, 2), dtype=np.int64)
    for i, j, k in ((0, 3, 4), (1, 2, 3)):
        c[i, j, k, 1] = 1
        c[j, i, k, 1] = -1
    return LieDeformation(L, A, c % ring.modulus)


@pytest.mark.parametrize("ring", [F2, F3])
def test_engineered_instance_is_obstructed(ring):
    d = engineered_obstructed(ring)
    assert d.problems() == []
    ext = extension_from_surjection(truncation_map(ring, 3, 2))
    result = extend_deformation(d, ext)
    assert isinstance(result, ObstructionWitness)
    assert not result.obstruction.is_zero
    lifted = lift_constants(d, ext)
    kernel_rows = [ext.kernel.row(i) for i in range(ext.kernel_dim)]
    assert not extension_exists(lifted, kernel_rows, d.reduction, ext.total)


def test_obstruction_is_independent_of_the_lift():
    d = engineered_obstructed(F3)
    ext = extension_from_surjection(truncation_map(F3, 3, 2))
    base = lift_constants(d, ext)
    rng = random.Random(3)
    ref = obstruction_class(d, ext, base).coords
    for _ in range(5):
        shift = np.zeros_like(base)
        for i, j in itertools.combinations(range(5), 2):
            for k in range(5):
                if d.reduction.degrees[k] == d.reduction.degrees[i] + d.reduction.degrees[j]:
                    v = rng.randrange(3)
                    shift[i, j, k, 2] = v
                    shift[j, i, k, 2] = -v
        assert obstruction_class(d, ext, (base + shift) % 3).coords == ref


@given(st.integers(0, 10**6))
@settings(max_examples=25)
def test_order_two_obstruction_is_minus_the_quadratic_map(seed):
    rng = random.Random(seed)
    ring = rng.choice([F3, F5])
    L = random_small_lie(rng, ring, max_dim=5)
    Q = quadratic_map(L)
    x = [rng.randrange(ring.l) for _ in range(Q.source_dim)]
    assert order_two_obstruction(L, x) == tuple((-v) % ring.l for v in Q.value(x))


def test_quadratic_relations():
    Q = quadratic_map(ab2111(F5))
    assert Q.source_dim == 5 and Q.target_dim == 1
    # directions: cocycles on the slots of [x,z], [x,w], [y,z], [y,w], [z,w]
    rels = Q.relations()
    assert len(rels) == 1 and set(rels[0]) == {(1, 4), (2, 3)}
    Q2 = quadratic_map(ab2111(F2))
    assert all(a != b for rel in Q2.relations() for a, b in rel)
    assert set(Q2.relations()[0]) == {(1, 4), (2, 3)}


def test_tower_for_one_dimensional_tangent():
    tower = miniversal_tower(abelian_21(F5), 4)
    assert [s.truncated_polynomial_order() for s in tower] == [2, 3, 4, 5]
    assert [s.kernel_rank for s in tower] == [0, 1, 1, 1]
    for s in tower:
        assert s.deformation.problems() == []
    for lower, upper in zip(tower, tower[1:]):
        assert push_forward(upper.deformation, upper.extension.projection) == lower.deformation


def test_tower_for_heisenberg_has_no_directions():
    tower = miniversal_tower(heisenberg(F5), 3)
    assert [s.algebra.rank for s in tower] == [1, 1, 1]


def test_tower_cuts_obstructed_directions():
    tower = miniversal_tower(ab2111(F5), 2)
    D1, D2 = tower[0].algebra, tower[1].algebra
    # the universal extension adds one generator per quadric; the obstruction kills one
    assert D2.rank == D1.rank + 15 - 1
    assert tower[1].deformation.problems() == []


def test_quotient_algebra():
    C = truncated_polynomial(F3, 4)
    Q, p = quotient_algebra(C, [C.basis_vector(3)])
    assert Q.rank == 3 and p.problems() == []
    assert Q.table.tolist() == truncated_polynomial(F3, 3).table.tolist()
