"""Exact feasibility checks for Kcsc gluing on toric orbifolds.

Classifies isolated toric quotient singularities, computes moment
polytopes, decides the balancing conditions for gluing in Ricci-flat or
scalar-flat ALE models, and evaluates the closed-form gluing constants and
the mode-wise Dirichlet-to-Neumann matching data -- all in exact rational
arithmetic.
"""

__version__ = "0.1.0"

from .exact_linalg import (
    RationalMatrix,
    SnfResult,
    nullspace_basis,
    positive_kernel_witness,
    rank,
    smith_normal_form,
)
from .toric_lattice import (
    Cone,
    Fan,
    QuotientData,
    classify,
    classify_fan,
    cone_index,
    is_gorenstein,
    is_isolated,
    quotient_action,
    validate_fan,
)
from .polytope import (
    LatticePolytope,
    anticanonical_polytope,
    faces,
    moment_assignment,
    polytope_barycenter,
    subset_barycenter,
    vertex_for_cone,
)
from .balancing import (
    BalancingReport,
    EpsPower,
    PiRational,
    SingularPointRecord,
    build_theta,
    build_xi,
    check_nondegeneracy,
    gluing_scales,
    leading_coefficients,
    model_constants,
    solve_ricci_flat_balancing,
    solve_scalar_flat_balancing,
    sphere_volume,
)
from .spectral import (
    GroupPresentation,
    eigenvalue,
    first_invariant_index,
    harmonic_dimension,
    indicial_roots,
    invariant_harmonic_dimension,
    is_admissible_weight,
)
from .biharmonic import (
    ModeMatrix,
    RadialTerm,
    dtn_inverse,
    dtn_mode_matrix,
    evaluate,
    inner_extension,
    outer_extension,
    radial_bilaplacian,
)
from .formats import FanFile, OrbifoldFile, ParseError, parse_fan, parse_orbifold
from .examples import EmbeddedExample, embedded_examples
