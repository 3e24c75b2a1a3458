"""Deformation theory of truncated graded Lie algebras over Z/l^N.

The subpackages build on each other: exact linear algebra over chain rings
(:mod:`coeff`), graded Lie algebras (:mod:`graded_lie`), their cohomology
(:mod:`ce_cohomology`), local coefficient algebras (:mod:`artin`,
:mod:`harrison`), deformations of algebras and representations
(:mod:`deformation`, :mod:`rep_deform`) and a finite checker for
Schlessinger-type criteria (:mod:`schlessinger`).
"""

__version__ = "0.1.0"

from .coeff import CoeffRing, Mat, homology, howell_form
from .graded_lie import GradedLieAlgebra, GradedMorphism, free_lie_truncated, validate
from .ce_cohomology import cohomology_space, delta, delta_matrix
from .artin import ArtinLocalAlgebra, square_zero_algebra, truncated_polynomial
from .harrison import harrison_cohomology, universal_extension
from .deformation import LieDeformation, eta_zero, extend_deformation, miniversal_tower, obstruction_class
from .rep_deform import GradedRep, enumerate_lifts, lift_representation, rep_obstruction, tangent_space

__all__ = [
    "ArtinLocalAlgebra",
    "CoeffRing",
    "GradedLieAlgebra",
    "GradedMorphism",
    "GradedRep",
    "LieDeformation",
    "Mat",
    "cohomology_space",
    "delta",
    "delta_matrix",
    "enumerate_lifts",
    "eta_zero",
    "extend_deformation",
    "free_lie_truncated",
    "harrison_cohomology",
    "homology",
    "howell_form",
    "lift_representation",
    "miniversal_tower",
    "obstruction_class",
    "rep_obstruction",
    "square_zero_algebra",
    "tangent_space",
    "truncated_polynomial",
    "universal_extension",
    "validate",
]
