"""Named example algebras and seeded random generators used by tests and the CLI."""

from __future__ import annotations

import random
from typing import Iterator, Sequence

from .artin import (
    ArtinLocalAlgebra,
    power_quotient,
    residue_field,
    square_zero_algebra,
    truncated_polynomial,
)
from .coeff import CoeffRing
from .graded_lie import GradedLieAlgebra, abelian, free_lie_truncated, quotient


def heisenberg(ring: CoeffRing = CoeffRing(5)) -> GradedLieAlgebra:
    """``x, y`` in degree 1, ``z`` in degree 2, ``[x, y] = z``."""
    return GradedLieAlgebra.from_brackets(ring, (2, 1), {(0, 1): {2: 1}}, ("x", "y", "z"))


def abelian_21(ring: CoeffRing = CoeffRing(5)) -> GradedLieAlgebra:
    """Abelian on ``x, y`` (degree 1) and ``z`` (degree 2)."""
    return abelian(ring, (2, 1), ("x", "y", "z"))


NAMED = {
    "heis": heisenberg,
    "ab21": abelian_21,
}


def random_lie(
    ring: CoeffRing,
    truncation: int,
    rng: random.Random,
    max_generators: int = 2,
    max_relations: int = 2,
) -> GradedLieAlgebra:
    """Quotient of a random truncated free Lie algebra by random homogeneous relations.

    Always a valid graded Lie algebra; generators may sit in any degree
    ``1..truncation``.
    """
    while True:
        gens = []
        for i in range(rng.randint(1, max_generators)):
            gens.append((f"g{i}", rng.randint(1, max(1, truncation - 1)) if i else 1))
        F = free_lie_truncated(gens, truncation, ring)
        if F.dim:
            break
    rels = []
    q = ring.modulus
    for _ in range(rng.randint(0, max_relations)):
        deg = rng.randint(1, truncation)
        piece = F.piece(deg)
        if not piece:
            continue
        v = [0] * F.dim
        for i in piece:
            v[i] = rng.randrange(q)
        if any(v):
            rels.append(tuple(v))
    Q, _ = quotient(F, rels) if rels else (F, None)
    return Q


def random_lie_suite(ring: CoeffRing, count: int, seed: int = 0, truncations: Sequence[int] = (2, 3, 4)) -> Iterator[GradedLieAlgebra]:
    rng = random.Random(seed)
    for _ in range(count):
        yield random_lie(ring, rng.choice(list(truncations)), rng)


def artin_suite(ring: CoeffRing, max_rank: int = 4) -> list[ArtinLocalAlgebra]:
    """Small local algebras over ``ring``: truncated polynomials, square-zero and power quotients."""
    out = [residue_field(ring)]
    for n in range(2, max_rank + 1):
        out.append(truncated_polynomial(ring, n))
    for k in range(2, max_rank):
        out.append(square_zero_algebra(ring, [f"e{i + 1}" for i in range(k)]))
    if max_rank >= 6:
        out.append(power_quotient(ring, ["x", "y"], 3))
    return [A for A in out if A.rank <= max_rank]
