"""The twelve acceptance criteria, each reported as a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they
happen, or ``python3 tests/test_acceptance.py``; the pytest summary repeats
them in any case.
"""

import itertools
import json
import os
import random
import subprocess
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from acceptance_log import criterion  # noqa: E402
from instances import all_small_lie, filiform3, random_free_rep, small_non_free_reps  # noqa: E402
from lieforge.artin import (  # noqa: E402
    AlgebraMorphism,
    extension_from_surjection,
    power_quotient,
    residue_field,
    square_zero_algebra,
    truncated_polynomial,
    truncation_map,
)
from lieforge.ce_cohomology import Cochain, cohomology_space, delta_matrix, nonempty_grades  # noqa: E402
from lieforge.coeff import CoeffRing  # noqa: E402
from lieforge.deformation import (  # noqa: E402
    LieDeformation,
    ObstructionWitness,
    classify_square_zero,
    eta_zero,
    extend_deformation,
    lift_constants,
    miniversal_tower,
    obstruction_class,
    push_forward,
)
from lieforge.graded_lie import abelian, free_lie_truncated, validate  # noqa: E402
from lieforge.harrison import harrison_cohomology  # noqa: E402
from lieforge.rep_deform import (  # noqa: E402
    RepDeformation,
    enumerate_lifts,
    lift_representation,
    quadratic_relations,
    rep_obstruction,
    search_space_size,
    tangent_space,
)
from lieforge.schlessinger import (  # noqa: E402
    RankBounded,
    Representable,
    check_criteria,
    check_universal_property,
    fiber_product,
    standard_category,
)
from lieforge.suites import abelian_21, artin_suite, heisenberg, random_lie  # noqa: E402
from oracles import (  # noqa: E402
    algebra_morphisms,
    all_graded_cochains,
    dense_cohomology_dim,
    extension_exists,
    gauge_orbit_shifts,
    grade_zero_pairs,
    jacobi_ok,
    necklace_count,
    structure,
)

F2, F3, F5 = CoeffRing(2), CoeffRing(3), CoeffRing(5)
CORPUS = os.path.abspath(os.path.join(os.path.dirname(__file__), os.pardir, "corpus"))


def ab2111(ring):
    return abelian(ring, (2, 1, 1, 1), ("x", "y", "z", "w", "v"))


def engineered_obstructed(ring):
    """``[x,w] = t v`` and ``[y,z] = t w`` on the abelian (2,1,1,1) algebra over k[t]/t^2."""
    c = np.zeros((5, 5, 5, 2), dtype=np.int64)
    for i, j, k in ((0, 3, 4), (1, 2, 3)):
        c[i, j, k, 1] = 1
        c[j, i, k, 1] = -1
    return LieDeformation(ab2111(ring), truncated_polynomial(ring, 2), c % ring.modulus)


# ------------------------------------------------------------------ 1


def random_algebras(rng, count):
    """Validated random algebras of dimension 3..6 and truncation 2..4 over F_2, F_3, F_5."""
    out = []
    while len(out) < count:
        L = random_lie(rng.choice([F2, F3, F5]), rng.randint(2, 4), rng, max_generators=3, max_relations=2)
        if 3 <= L.dim <= 6 and validate(L).ok:
            out.append(L)
    return out


def test_criterion_01_differential_squares_to_zero():
    with criterion(1, "d^2 = 0 on 120 random algebras over F_2, F_3, F_5, all grades, q <= 3"):
        rng = random.Random(101)
        checked = nontrivial = 0
        for L in random_algebras(rng, 120):
            p = L.ring.modulus
            for q in range(4):
                for m in nonempty_grades(L, None, q):
                    D1 = delta_matrix(L, None, q, m)
                    D2 = delta_matrix(L, None, q + 1, m)
                    if D1.nrows and D2.ncols:
                        assert not ((D1.data @ D2.data) % p).any(), (L, q, m)
                        nontrivial += bool(D1.data.any() and D2.data.any())
                    checked += 1
        assert checked > 1000 and nontrivial > 200


# ------------------------------------------------------------------ 2


def test_criterion_02_engine_matches_dense_oracle():
    with criterion(2, "cohomology dims equal the dense oracle on every algebra of dim <= 4 over F_2, F_3"):
        total = 0
        for ring in (F2, F3):
            for L in all_small_lie(ring, 4, 4, need_degree_one=False):
                for q in range(L.dim + 1):
                    for m in nonempty_grades(L, None, q):
                        assert cohomology_space(L, None, q, m).dim == dense_cohomology_dim(L, q, m), (L, q, m)
                total += 1
        assert total > 200


# ------------------------------------------------------------------ 3


def cotangent_oracle(A) -> int:
    """dim m - dim m^2, from products of the maximal basis vectors."""
    from oracles import rank_mod_p

    prods = [A.mul(A.basis_vector(a), A.basis_vector(b)) for a in A.maximal for b in A.maximal]
    return len(A.maximal) - (rank_mod_p(prods, A.ring.modulus) if prods else 0)


def test_criterion_03_harrison_h1_is_the_cotangent_space():
    with criterion(3, "H^1_Harr(A, k) = dim m/m^2 on Artin algebras including t^2, t^3, (x,y)^2"):
        algebras = artin_suite(F2, 4) + artin_suite(F3, 4)
        for ring in (F2, F3, F5):
            algebras += [truncated_polynomial(ring, 2), truncated_polynomial(ring, 3), power_quotient(ring, ["x", "y"], 2)]
        assert len(algebras) >= 10
        for A in algebras:
            assert harrison_cohomology(A, None, 1).dim == cotangent_oracle(A), A


# ------------------------------------------------------------------ 4


def deformation_classes(L, A):
    """Exhaustive deformations of ``L`` over square-zero ``A``, grouped into gauge classes."""
    p = A.ring.modulus
    base = structure(L)
    cochains = list(all_graded_cochains(L, p))
    shifts = [np.frombuffer(s, dtype=np.int64).reshape(L.dim, L.dim, L.dim, A.rank) for s in gauge_orbit_shifts(L, A)]
    valid = {}
    for psis in itertools.product(cochains, repeat=len(A.maximal)):
        c = np.zeros((L.dim,) * 3 + (A.rank,), dtype=np.int64)
        c[..., A.unit] = base
        for a, psi in zip(A.maximal, psis):
            c[..., a] = psi
        if jacobi_ok(c, A.table, p):
            valid[c.tobytes()] = c
    classes, seen = [], set()
    for key, c in valid.items():
        if key in seen:
            continue
        orbit = {((c + s) % p).tobytes() for s in shifts}
        assert orbit <= valid.keys(), "gauge moved a deformation out of the deformation set"
        seen |= orbit
        classes.append((c, orbit))
    return valid, classes


def test_criterion_04_universal_first_order_deformation():
    with criterion(4, "eta_0 is a deformation, ab21 gives [x,y] = t z, classification is a bijection onto Hom(D_1, A)"):
        suite = [heisenberg(r) for r in (F2, F3, F5)] + [abelian_21(r) for r in (F2, F3, F5)]
        suite += random_algebras(random.Random(4), 40) + list(all_small_lie(F2, 4, 4))
        for L in suite:
            eta = eta_zero(L)
            assert eta.problems() == [] and jacobi_ok(eta.consts, eta.base.table, L.ring.modulus), L
        assert eta_zero(abelian_21(F5)).describe() == ["[x,y] = (t)*z"]

        rng = random.Random(44)
        checked = 0
        for ring in (F2, F3):
            algs = [heisenberg(ring), abelian_21(ring), filiform3(ring), abelian(ring, (2, 1, 1), ("x", "y", "z", "w"))]
            algs.append(free_lie_truncated([("x", 1), ("y", 1)], 3, ring))
            for L in algs:
                eta = eta_zero(L)
                for A in (residue_field(ring), square_zero_algebra(ring, ["e"]), square_zero_algebra(ring, ["e", "f"])):
                    if ring.l ** (len(grade_zero_pairs(L)) * len(A.maximal)) > 5000:
                        continue
                    valid, classes = deformation_classes(L, A)
                    morphs = algebra_morphisms(eta.base, A)
                    assert len(classes) == len(morphs), (L, A)
                    label = {}
                    for c, orbit in classes:
                        f = classify_square_zero(LieDeformation(L, A, c)).matrix.tobytes()
                        assert f not in label.values(), "two classes share a classifying map"
                        for key in orbit:
                            label[key] = f
                    members = list(valid.values())
                    for c in rng.sample(members, min(len(members), 30)):
                        assert classify_square_zero(LieDeformation(L, A, c)).matrix.tobytes() == label[c.tobytes()]
                    for mat in morphs:
                        d = push_forward(eta, AlgebraMorphism(eta.base, A, mat))
                        assert label[d.consts.tobytes()] == np.asarray(mat, dtype=np.int64).tobytes()
                    checked += 1
        assert checked >= 20


# ------------------------------------------------------------------ 5


def first_order(rng, L):
    """A random deformation of ``L`` over k[t]/t^2 pushed forward from eta_0."""
    eta = eta_zero(L)
    A = truncated_polynomial(L.ring, 2)
    mat = np.zeros((eta.base.rank, 2), dtype=np.int64)
    mat[eta.base.unit, 0] = 1
    for a in eta.base.maximal:
        mat[a, 1] = rng.randrange(L.ring.l)
    return push_forward(eta, AlgebraMorphism(eta.base, A, mat))


def test_criterion_05_extension_iff_obstruction_vanishes():
    with criterion(5, "extend succeeds <=> obstruction = 0 <=> brute-force extension exists (search <= 2^16)"):
        rng = random.Random(5)
        instances = [engineered_obstructed(F2), engineered_obstructed(F3)]
        for ring in (F2, F3, F5):
            instances += [first_order(rng, ab2111(ring)) for _ in range(6)]
            instances += [first_order(rng, abelian_21(ring)), first_order(rng, heisenberg(ring))]
        for L in random_algebras(random.Random(55), 40):
            instances.append(first_order(rng, L))
        outcomes = {True: 0, False: 0}
        for d in instances:
            L = d.reduction
            n = d.base.rank
            ext = extension_from_surjection(truncation_map(L.ring, n + 1, n))
            while True:
                if L.ring.l ** (len(grade_zero_pairs(L)) * ext.kernel_dim) > 1 << 16:
                    break
                result = extend_deformation(d, ext)
                ok = not isinstance(result, ObstructionWitness)
                assert ok == obstruction_class(d, ext).is_zero
                kernel_rows = [ext.kernel.row(i) for i in range(ext.kernel_dim)]
                assert ok == extension_exists(lift_constants(d, ext), kernel_rows, L, ext.total), (L, d.describe())
                outcomes[ok] += 1
                if not ok or ext.total.rank >= 4:
                    break
                assert result.problems() == [] and push_forward(result, ext.projection) == d
                d, n = result, n + 1
                ext = extension_from_surjection(truncation_map(L.ring, n + 1, n))
        print(f"  extension outcomes: {outcomes[True]} extendable, {outcomes[False]} obstructed")
        assert outcomes[True] >= 20 and outcomes[False] >= 4, outcomes


# ------------------------------------------------------------------ 6


def is_truncated_polynomial_in_t(A, order: int) -> bool:
    """Do 1, t, ..., t^(order-1) form a basis of ``A`` with t^order = 0?"""
    from oracles import rank_mod_p

    t = A.basis_vector(A.labels.index("t"))
    powers = [A.one()]
    for _ in range(order):
        powers.append(A.mul(powers[-1], t))
    return A.rank == order and rank_mod_p(powers[:order], A.ring.modulus) == order and not any(powers[order])


def test_criterion_06_miniversal_tower():
    with criterion(6, "tower: ab21 over F_5 gives D_k = F_5[t]/t^(k+1) with [x,y] = t z; Heisenberg stays F_5"):
        tower = miniversal_tower(abelian_21(F5), 4)
        for k, stage in enumerate(tower, start=1):
            assert is_truncated_polynomial_in_t(stage.algebra, k + 1)
            assert stage.deformation.problems() == []
            assert stage.deformation.describe() == ["[x,y] = (t)*z"]
        for stage in miniversal_tower(heisenberg(F5), 4):
            assert stage.algebra.rank == 1 and stage.deformation == LieDeformation.trivial(heisenberg(F5), stage.algebra)


# ------------------------------------------------------------------ 7


def test_criterion_07_free_sources_are_unobstructed():
    with criterion(7, "100 random free-source reps lift along k <- k[t]/t^2 <- k[t]/t^3 with zero obstruction"):
        rng = random.Random(7)
        for _ in range(100):
            ring = rng.choice([F2, F3, F5])
            rep = random_free_rep(rng, ring)
            rho = RepDeformation.trivial(rep, truncated_polynomial(ring, 1))
            step = truncation_map(ring, 2, 1)
            assert rep_obstruction(rho, step).is_zero
            first = lift_representation(rho, step)
            assert isinstance(first, RepDeformation) and first.is_valid()
            T1 = tangent_space(rep)
            if T1.dim:
                coords = [rng.randrange(ring.l) for _ in range(T1.dim)]
                first = RepDeformation(rep, truncated_polynomial(ring, 2), T1.first_order_lift(coords).images)
            step = truncation_map(ring, 3, 2)
            assert rep_obstruction(first, step).is_zero
            second = lift_representation(first, step)
            assert isinstance(second, RepDeformation) and second.is_valid()
            assert second.push_forward(step) == first


# ------------------------------------------------------------------ 8


def test_criterion_08_first_order_lifts_count():
    with criterion(8, "number of first-order lifts = l^h1 on every instance within the enumeration bound"):
        bound = 1 << 14
        reps = small_non_free_reps(F2) + small_non_free_reps(F3) + small_non_free_reps(F5)
        rng = random.Random(8)
        reps += [random_free_rep(rng, rng.choice([F2, F3]), max_target_dim=5) for _ in range(40)]
        counted = 0
        for rep in reps:
            A = square_zero_algebra(rep.source.ring, ["eps"])
            if search_space_size(rep, A) > bound:
                continue
            assert len(enumerate_lifts(rep, A, bound=bound)) == rep.source.ring.l ** tangent_space(rep).dim
            counted += 1
        assert counted >= 30


# ------------------------------------------------------------------ 9


def liftable_first_order(rep):
    """Tangent classes of first-order lifts that extend over k[t]/t^3, by enumeration."""
    ring = rep.source.ring
    T1 = tangent_space(rep)
    down = truncation_map(ring, 3, 2)
    out = set()
    for rho in enumerate_lifts(rep, truncated_polynomial(ring, 3), bound=10**6).lifts:
        c = rho.push_forward(down).images[..., 1]
        out.add(T1.space.class_of(Cochain.from_function(T1.space.basis, lambda I: c[I[0]])))
    return out


def test_criterion_09_cup_pairing_cuts_out_the_liftable_directions():
    with criterion(9, "for l = 3, 5 the cup pairing is symmetric and its zero set is the t^3-liftable tangent classes"):
        reps = small_non_free_reps(F3) + small_non_free_reps(F5)
        assert len(reps) >= 5
        obstructed = 0
        for rep in reps:
            ring = rep.source.ring
            Q = quadratic_relations(rep)
            assert Q.is_symmetric()
            liftable = liftable_first_order(rep)
            zeros = {x for x in itertools.product(range(ring.l), repeat=Q.h1) if not any(Q.value(x))}
            assert zeros == liftable, rep
            obstructed += len(zeros) < ring.l**Q.h1
        assert obstructed >= 3


# ------------------------------------------------------------------ 10


def test_criterion_10_schlessinger_criteria():
    with criterion(10, "representables pass H1-H4, a rank-bounded functor fails H1, fiber products are universal"):
        for ring, names in ((F2, None), (F3, ("Heis", "Heis^ab"))):
            cat = standard_category(ring)
            for name in names or sorted(cat.names):
                report = check_criteria(Representable(cat.names[name], name=f"h_{name}"), cat)
                assert all(report.results[h].passed for h in ("H1", "H2", "H3", "H4")), report.lines()
        cat = standard_category(F2)
        bad = check_criteria(RankBounded(cat.names["Heis^ab"], 1), cat)
        assert not bad.results["H1"].passed and bad.results["H1"].failures
        pairs = 0
        for f, g in itertools.product(cat.morphisms, repeat=2):
            if f.target == g.target:
                assert check_universal_property(fiber_product(f, g), cat.objects) == []
                pairs += 1
        assert pairs >= 12


# ------------------------------------------------------------------ 11


def test_criterion_11_free_lie_ranks():
    with criterion(11, "free Lie algebra on two degree-1 generators has ranks 2, 1, 2, 3, 6, 9"):
        L = free_lie_truncated([("x", 1), ("y", 1)], 6, F2)
        assert L.ranks == (2, 1, 2, 3, 6, 9)
        assert list(L.ranks) == [necklace_count(2, n) for n in range(1, 7)]


# ------------------------------------------------------------------ 12


def test_criterion_12_cli_is_deterministic(tmp_path):
    with criterion(12, "every corpus CLI command gives byte-identical output over 3 runs"):
        with open(os.path.join(CORPUS, "cases.json"), encoding="utf-8") as fh:
            cases = json.load(fh)
        env = dict(os.environ, PYTHONHASHSEED="random")
        for case in cases:
            runs = [subprocess.run([sys.executable, "-m", "lieforge", *case["args"]], cwd=CORPUS, capture_output=True, env=env) for _ in range(3)]
            assert len({(r.returncode, r.stdout, r.stderr) for r in runs}) == 1, case["name"]
            assert runs[0].returncode == case["exit"]
            with open(os.path.join(CORPUS, "expected", case["name"] + ".out"), "rb") as fh:
                assert runs[0].stdout == fh.read(), case["name"]
        written = []
        for i in range(3):
            out = tmp_path / f"free{i}.json"
            subprocess.run([sys.executable, "-m", "lieforge", "free", "--gens", "a:1,b:1", "--degree", "4", "--l", "3", "-o", str(out)], check=True, capture_output=True, env=env)
            written.append(out.read_bytes())
        assert len(set(written)) == 1


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
