"""Closed-form probabilities, densities and characteristic functions.

Characteristic functions return Python ``complex``; quantities that are real
by symmetry carry an exact zero imaginary part.
"""

from .boundary import prob_boundary, prob_side_interior, side_charfn, side_density, side_vertex_mass
from .diagonal import (
    diag_charfn,
    diag_density,
    prob_diag_interior,
    prob_diagonals,
    vertical_side_charfn,
    vertical_side_density,
)
from .hydro import HydroCoeff, JointHydroLimit, hydro_coeff, joint_hydro_limit, limiting_variance_y
from .interior import interior_charfn_noref
from .occupation import (
    oblique_atoms_noref,
    oblique_charfn_noref,
    oblique_charfn_pq,
    oblique_density_noref,
    oblique_prob_noref,
    oblique_prob_pq,
    t_charfn,
    t_density,
    t_endpoint_mass,
)

ComplexValue = complex

__all__ = [
    "ComplexValue", "HydroCoeff", "JointHydroLimit",
    "prob_boundary", "prob_side_interior", "side_density", "side_charfn", "side_vertex_mass",
    "prob_diagonals", "prob_diag_interior", "diag_density", "diag_charfn",
    "vertical_side_density", "vertical_side_charfn",
    "interior_charfn_noref", "hydro_coeff", "joint_hydro_limit", "limiting_variance_y",
    "t_endpoint_mass", "t_density", "t_charfn",
    "oblique_prob_noref", "oblique_atoms_noref", "oblique_density_noref", "oblique_charfn_noref",
    "oblique_charfn_pq", "oblique_prob_pq",
]
