import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from instances import filiform3, random_free_rep, small_non_free_reps
from lieforge.artin import square_zero_algebra, truncated_polynomial, truncation_map
from lieforge.coeff import CoeffRing
from lieforge.ce_cohomology import Cochain
from lieforge.graded_lie import LieError, abelian, free_lie_truncated
from lieforge.rep_deform import (
    GradedRep,
    ObstructionCertificate,
    RepDeformation,
    RepError,
    SearchSpaceTooLarge,
    enumerate_lifts,
    lift_representation,
    quadratic_relations,
    rep_obstruction,
    search_space_size,
    tangent_space,
)
from lieforge.suites import heisenberg

F2, F3, F5 = CoeffRing(2), CoeffRing(3), CoeffRing(5)


def brute_lift_count(rep, A):
    """Count lifts by trying every image assignment, without pruning."""
    G, T = rep.source, rep.target
    base = RepDeformation.trivial(rep, A).images
    slots = [(i, k) for i in range(G.dim) for k in T.piece(G.degrees[i])]
    m_elems = [np.array(a) for a in A.maximal_elements()]
    count = 0
    for choice in itertools.product(range(len(m_elems)), repeat=len(slots)):
        im = base.copy()
        for (i, k), c in zip(slots, choice):
            im[i, k] = (im[i, k] + m_elems[c]) % A.ring.modulus
        count += RepDeformation(rep, A, im).is_valid()
    return count


def test_rep_checks():
    H = heisenberg(F3)
    with pytest.raises(RepError):
        GradedRep.from_images(H, H, [[1, 0, 0], [1, 0, 0], [0, 0, 1]])  # z -> z but [x,y] -> 0
    with pytest.raises((RepError, LieError)):
        GradedRep.zero(H, free_lie_truncated([("x", 1)], 3, F3))
    rep = GradedRep.identity(H)
    with pytest.raises(RepError):
        RepDeformation.trivial(rep, truncated_polynomial(F5, 2))


def test_trivial_lift_is_valid_and_broken_lift_is_not():
    rep = GradedRep.identity(heisenberg(F3))
    A = truncated_polynomial(F3, 2)
    rho = RepDeformation.trivial(rep, A)
    assert rho.problems() == []
    im = rho.images.copy()
    im[0, 0, 1] = 1  # x -> (1 + t) x but z stays z
    assert "brackets are not preserved" in RepDeformation(rep, A, im).problems()
    im = rho.images.copy()
    im[0, 2, 1] = 1
    assert any("wrong degree" in p for p in RepDeformation(rep, A, im).problems())


@given(st.integers(0, 10**6))
@settings(max_examples=30)
def test_free_sources_lift_along_truncations(seed):
    rng = random.Random(seed)
    ring = rng.choice([F2, F3, F5])
    rep = random_free_rep(rng, ring)
    T1 = tangent_space(rep)
    assert rep.cohomology(2).dim == 0
    coords = [rng.randrange(ring.l) for _ in range(T1.dim)]
    rho = T1.first_order_lift(coords) if T1.dim else RepDeformation.trivial(rep, truncated_polynomial(ring, 2, "eps"))
    assert rho.is_valid()
    for n in (3, 4):
        prev = rho
        rho = lift_representation(prev, truncation_map(ring, n, n - 1, "eps"))
        assert isinstance(rho, RepDeformation) and rho.is_valid()
        assert rho.push_forward(truncation_map(ring, n, n - 1, "eps")) == prev


@given(st.integers(0, 10**6))
@settings(max_examples=20)
def test_tangent_count_matches_enumeration(seed):
    rng = random.Random(seed)
    ring = rng.choice([F2, F3])
    rep = random_free_rep(rng, ring, max_target_dim=4)
    A = square_zero_algebra(ring, ["eps"])
    if search_space_size(rep, A) > 1 << 12:
        return
    assert len(enumerate_lifts(rep, A, bound=1 << 12)) == ring.l ** tangent_space(rep).dim


@pytest.mark.parametrize("rep", small_non_free_reps(F2) + small_non_free_reps(F3), ids=lambda r: f"{r.source.labels}->{r.target.labels}")
def test_pruned_enumeration_matches_brute_force(rep):
    A = truncated_polynomial(rep.source.ring, 2)
    if search_space_size(rep, A) > 1 << 12:
        pytest.skip("brute force too large")
    assert len(enumerate_lifts(rep, A)) == brute_lift_count(rep, A)


def test_enumeration_respects_its_bound():
    rep = small_non_free_reps(F3)[3]
    A = truncated_polynomial(F3, 3)
    with pytest.raises(SearchSpaceTooLarge) as err:
        enumerate_lifts(rep, A, bound=10)
    assert err.value.size == search_space_size(rep, A) == 9**3


def liftable_first_order(rep):
    """Classes (as tangent coordinates) of first-order lifts that extend over k[t]/t^3."""
    ring = rep.source.ring
    T1 = tangent_space(rep)
    down = truncation_map(ring, 3, 2)
    out = set()
    for rho in enumerate_lifts(rep, truncated_polynomial(ring, 3), bound=10**6).lifts:
        first = rho.push_forward(down)
        c = first.images[..., 1]
        vals = Cochain.from_function(T1.space.basis, lambda I: c[I[0]])
        out.add(T1.space.class_of(vals))
    return out


@pytest.mark.parametrize("rep", small_non_free_reps(F3), ids=lambda r: f"{r.source.labels}->{r.target.labels}")
def test_obstruction_detects_exactly_the_non_liftable_directions(rep):
    ring = rep.source.ring
    T1 = tangent_space(rep)
    Q = quadratic_relations(rep)
    assert Q.is_symmetric()
    liftable = liftable_first_order(rep)
    for x in itertools.product(range(ring.l), repeat=T1.dim):
        rho = T1.first_order_lift(x)
        rho_t = RepDeformation(rep, truncated_polynomial(ring, 2), rho.images)
        result = lift_representation(rho_t, truncation_map(ring, 3, 2))
        ok = isinstance(result, RepDeformation)
        assert ok == (tuple(x) in liftable)
        assert ok == (not any(Q.value(x)))
        if not ok:
            assert isinstance(result, ObstructionCertificate) and not result.is_zero


def test_zero_rep_into_free_algebra_has_a_commutator_relation():
    G = abelian(F3, (2, 0), ("a", "b"))
    T = free_lie_truncated([("x", 1), ("y", 1)], 2, F3)
    rep = GradedRep.zero(G, T)
    Q = quadratic_relations(rep)
    assert (Q.h1, Q.h2) == (4, 1)
    rel = Q.relations()[0]
    # rho(a) = s x + u y, rho(b) = v x + w y must commute: s w - u v = 0
    assert set(rel) == {(0, 3), (1, 2)}
    assert (rel[(0, 3)] + rel[(1, 2)]) % 3 == 0


def test_obstruction_certificate_for_a_commutator():
    G = abelian(F3, (2, 0), ("a", "b"))
    T = free_lie_truncated([("x", 1), ("y", 1)], 2, F3)
    rep = GradedRep.zero(G, T)
    T1 = tangent_space(rep)
    rho = RepDeformation(rep, truncated_polynomial(F3, 2), T1.first_order_lift((1, 0, 0, 1)).images)
    cert = rep_obstruction(rho, truncation_map(F3, 3, 2))
    assert not cert.is_zero


def test_quadratic_over_f2_has_no_squares():
    rep = small_non_free_reps(F2)[0]
    Q = quadratic_relations(rep)
    assert not Q.halved
    assert all(a != b for rel in Q.relations() for a, b in rel)


def test_filiform_target():
    fil = filiform3(F5)
    assert fil.labels == ("u", "v", "w") and fil.ranks == (1, 1, 1)
