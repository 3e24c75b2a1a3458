import itertools
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from instances import random_small_lie
from lieforge.coeff import CoeffRing, Mat
from lieforge.graded_lie import (
    GradedLieAlgebra,
    GradedMorphism,
    LieError,
    abelian,
    adjoint_module,
    bracket_eval,
    central_quotient,
    direct_sum,
    free_lie_hom,
    free_lie_truncated,
    ideal_closure,
    pullback_module,
    quotient,
    reduce_mod_l,
    subalgebra,
    validate,
    validate_module,
    validate_morphism,
)
from lieforge.suites import heisenberg, random_lie
from oracles import necklace_count, structure

F2, F3, F5 = CoeffRing(2), CoeffRing(3), CoeffRing(5)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_free_ranks_match_necklace_counts(k):
    d = 6 if k <= 2 else 5
    L = free_lie_truncated([(chr(ord("a") + i), 1) for i in range(k)], d, F3)
    assert L.ranks == tuple(necklace_count(k, n) for n in range(1, d + 1))


def test_weighted_free_ranks():
    # generators of degree 1 and 2: ranks count Lyndon words by weight
    L = free_lie_truncated([("x", 1), ("y", 2)], 5, F5)
    words = {}
    for n in range(1, 6):
        for w in itertools.product((0, 1), repeat=n):
            if all(w < w[i:] + w[:i] for i in range(1, n)):
                wt = sum(1 if a == 0 else 2 for a in w)
                if wt <= 5:
                    words[wt] = words.get(wt, 0) + 1
    assert L.ranks == tuple(words.get(n, 0) for n in range(1, 6))


def test_free_labels_are_standard_bracketings():
    L = free_lie_truncated([("x", 1), ("y", 1)], 3, F5)
    assert L.labels == ("x", "y", "[x,y]", "[x,[x,y]]", "[[x,y],y]")


@given(
    st.lists(st.integers(1, 2), min_size=1, max_size=3),
    st.integers(2, 4),
    st.sampled_from([F2, F3, F5, CoeffRing(2, 2), CoeffRing(3, 2)]),
)
def test_free_algebras_satisfy_jacobi(weights, d, ring):
    gens = [(f"g{i}", w) for i, w in enumerate(weights)]
    L = free_lie_truncated(gens, d, ring)
    if L.dim > 16:
        return
    assert validate(L).ok


@given(st.integers(0, 10**6))
def test_free_universal_property(seed):
    rng = random.Random(seed)
    ring = rng.choice([F2, F3, F5])
    d = rng.randint(2, 3)
    G = free_lie_truncated([("x", 1), ("y", 1)], d, ring)
    T = random_lie(ring, d, rng)
    images = []
    for deg in (1, 1):
        v = [0] * T.dim
        for k in T.piece(deg):
            v[k] = rng.randrange(ring.modulus)
        images.append(v)
    f = free_lie_hom(G, T, images)
    assert validate_morphism(f).ok
    assert f.image(G.basis_vector(0)) == tuple(images[0])


def test_validate_names_the_jacobi_triple():
    # [x,y] = [y,z] = u and [x,u] = w: the Jacobi sum on (x, y, z) is [x,u] + [z,u] = w
    table = {(0, 1): {3: 1}, (1, 2): {3: 1}, (0, 3): {4: 1}}
    L = GradedLieAlgebra.from_brackets(F5, (3, 1, 1), table, ("x", "y", "z", "u", "w"))
    report = validate(L)
    assert not report.ok
    kinds = {i.kind for i in report}
    assert "jacobi" in kinds
    issue = next(i for i in report if i.kind == "jacobi")
    assert sorted(L.labels[k] for k in issue.indices) == ["x", "y", "z"]
    assert issue.describe(L.labels).startswith("jacobi violated at (x, y, z)")


def test_validate_reports_grading_and_antisymmetry():
    table = {(0, 1): ((0, 1),), (1, 0): ((0, 1),)}
    L = GradedLieAlgebra(F5, 2, (2, 1), ("x", "y", "z"), table)
    kinds = {i.kind for i in validate(L)}
    assert "grading" in kinds and "antisymmetry" in kinds


def test_from_brackets_rejects_both_orders():
    with pytest.raises(LieError):
        GradedLieAlgebra.from_brackets(F5, (2, 1), {(0, 1): {2: 1}, (1, 0): {2: 1}})


def test_equality_and_hash_by_value():
    assert heisenberg() == heisenberg()
    assert hash(heisenberg()) == hash(heisenberg())
    assert heisenberg() != abelian(F5, (2, 1), ("x", "y", "z"))


@given(st.integers(0, 10**6))
def test_random_quotients_are_lie_algebras(seed):
    rng = random.Random(seed)
    L = random_small_lie(rng, rng.choice([F2, F3, F5]))
    assert validate(L).ok
    assert 0 < L.dim <= 6


@given(st.integers(0, 10**6))
def test_quotient_projection_is_a_surjective_morphism(seed):
    rng = random.Random(seed)
    ring = rng.choice([F2, F3, F5])
    F = free_lie_truncated([("x", 1), ("y", 1)], 3, ring)
    deg = rng.randint(1, 3)
    v = [0] * F.dim
    for i in F.piece(deg):
        v[i] = rng.randrange(ring.modulus)
    Q, p = quotient(F, [v])
    assert validate(Q).ok
    assert validate_morphism(p).ok
    assert p.is_surjective()
    # the kernel is the ideal
    ideal_dim = sum(len(piece) for piece in ideal_closure(F, [v]))
    assert F.dim - Q.dim == ideal_dim


def test_central_quotient_and_morphism_kernel():
    L = free_lie_truncated([("x", 1), ("y", 1)], 3, F5)
    Q, p = central_quotient(L, 3)
    assert Q.ranks == (2, 1) and Q.truncation == 2
    assert validate_morphism(p).ok
    ker = p.kernel()
    assert len(ker) == 2
    assert all(all(v == 0 for v in p.image(k)) for k in ker)


def test_direct_sum_and_subalgebra():
    H = heisenberg(F3)
    S = direct_sum(H, H)
    assert S.ranks == (4, 2) and validate(S).ok
    # the diagonal x + x', y + y', z + z'
    x = [1, 0, 1, 0, 0, 0]
    y = [0, 1, 0, 1, 0, 0]
    z = [0, 0, 0, 0, 1, 1]
    sub, incl = subalgebra(S, [x, y, z], ["x", "y", "z"])
    assert validate(sub).ok and validate_morphism(incl).ok
    assert bracket_eval(sub, sub.basis_vector(0), sub.basis_vector(1)) == (0, 0, 1)


def test_subalgebra_rejects_non_closed_span():
    H = heisenberg(F3)
    with pytest.raises(LieError):
        subalgebra(H, [[1, 0, 0], [0, 1, 0]])


def test_morphism_checks():
    H = heisenberg(F5)
    ab = abelian(F5, (2, 1), ("x", "y", "z"))
    bad = GradedMorphism.identity(ab)
    assert validate_morphism(bad).ok
    f = GradedMorphism(H, ab, Mat.identity(F5, 3))
    assert not validate_morphism(f).ok
    with pytest.raises(LieError):
        GradedMorphism(H, ab, Mat(F5, [[0, 0, 1], [0, 1, 0], [1, 0, 0]], ncols=3))
    g = GradedMorphism.identity(H).then(GradedMorphism.identity(H))
    assert g == GradedMorphism.identity(H)


def test_modules():
    H = heisenberg(F5)
    assert validate_module(adjoint_module(H)).ok
    f = GradedMorphism.identity(H)
    assert validate_module(pullback_module(f, adjoint_module(H))).ok


def test_reduction_mod_l():
    L = free_lie_truncated([("x", 1), ("y", 1)], 2, CoeffRing(5, 2))
    assert reduce_mod_l(L).ring == F5
    assert validate(reduce_mod_l(L)).ok


def test_structure_tensor_is_antisymmetric():
    L = free_lie_truncated([("x", 1), ("y", 1), ("z", 1)], 3, F3)
    c = L.structure_tensor()
    assert not ((c + c.transpose(1, 0, 2)) % 3).any()
    assert np.array_equal(c % 3, structure(L) % 3)
