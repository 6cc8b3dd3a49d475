"""Bending representations of punctured-surface groups in PU(2,1).

Subpackages by layer:

* ``hermitian``: the signature-(2,1) form, point coordinates, lifts.
* ``isometries``: the isometry group, elementary isometries, trace
  classification.
* ``triangles``: real ideal triangles, the Cartan invariant and the
  complex gluing invariant of adjacent pairs.
* ``surfaces``: ideal triangulations of punctured surfaces, the modified
  dual graph, bipartite colorings, generators of the fundamental group.
* ``holonomy``: bending decorations and the induced representations.
* ``realization``: equivariant development of a bent family of real
  ideal triangles, with audits.
* ``certificate``: the numerical discreteness certificate for regular
  decorations.
* ``cli``: command-line front end (``chbend``).
"""

from .hermitian import (
    INFINITY,
    BoundaryPoint,
    GeometryError,
    HoroPoint,
    J,
    distance,
    herm,
    lift,
    project_point,
    project_to_standard_real_plane,
)
from .isometries import (
    Isometry,
    IsometryClass,
    classify,
    compose,
    elementary_E,
    elementary_sigma,
    loxodromic_D,
    projective_equal,
    translation_T,
)
# from .triangles import (
#     IdealTriangle,
#     cartan,
#     extend_by_z,
#     pair_symmetry,
#     triangle_to_standard,
#     z_invariant,
# )
# from .surfaces import Triangulation, generate_base, generate_surface
# from .holonomy import BendingDecoration, Representation, make_regular
# from .realization import BentRealization, develop
# from .certificate import (
#     certificate_trace,
#     certify,
#     leaf_symmetry_2,
#     leaf_symmetry_3,
#     position_of_real_symmetries,
# )

__version__ = "0.1.0"
