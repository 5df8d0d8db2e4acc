"""jetcalc: canonical formalism for higher-order Lagrangian field theories.

Symbolic momenta, currents, Euler-Lagrange cascades, Legendre transforms and
Poincare-Cartan forms on jet bundles, with exact-arithmetic theorem checks.
"""

from .coords import Base, Jet, Momentum, Multiplier, Parameter
from .divergence import (DivergenceData, DivergenceError,
                         divergence_lagrangian, momentum_shift,
                         trivial_momenta, verify_divergence_trivial)
from .expr import (Expr, ExprError, OpaqueCall, divide, normalize,
                   partial_derivative, substitute, to_dsl, total_derivative,
                   total_derivative_multi)
from .forms import (ExteriorForm, FormsError, SectionData, VectorField,
                    exterior_derivative, holonomic_section, interior_product,
                    pullback_section, wedge)
from .legendre import (LegendreData, LegendreError, SingularLegendreError,
                       energy_legendre, field_hamiltonian_first_order,
                       hamilton_equations, legendre_top)
from .multiindex import (MultiIndex, all_multiindices, multiindex_factor,
                         multiindices_up_to)
from .parser import ParseError, ProblemFile, parse_expr, parse_problem
from .poincare import (GalileiReport, PCForm, galilei_transform_check,
                       multisymplectic_residuals, pc_form)
from .printing import form_to_latex, form_to_str, to_latex
from .problem import LagrangianProblem, ProblemError
from .prolongation import (HomogeneousPoly, ProlongationError, VerticalField,
                           gram_matrix, polarize, prolong_vertical_field,
                           resymmetrize)
from .variational import (CurrentTable, Equation, EquationSet,
                          MomentumAssignment, VariationalError,
                          apply_momentum_gauge, canonical_momenta,
                          cascade_equations, cascade_euler_residual,
                          constrained_generating_family, currents,
                          euler_lagrange, evaluate_on_momenta, gauge_part,
                          holonomy_residual, psi_reduction,
                          symmetrize_momenta)

__all__ = [
    "Base", "Jet", "Momentum", "Multiplier", "Parameter",
    "Expr", "ExprError", "OpaqueCall", "divide", "normalize",
    "partial_derivative", "substitute", "to_dsl", "total_derivative",
    "total_derivative_multi",
    "MultiIndex", "all_multiindices", "multiindex_factor", "multiindices_up_to",
    "ParseError", "ProblemFile", "parse_expr", "parse_problem",
    "LagrangianProblem", "ProblemError",
    "ExteriorForm", "FormsError", "SectionData", "VectorField",
    "exterior_derivative", "holonomic_section", "interior_product",
    "pullback_section", "wedge",
    "CurrentTable", "Equation", "EquationSet", "MomentumAssignment",
    "VariationalError", "apply_momentum_gauge", "canonical_momenta",
    "cascade_equations", "cascade_euler_residual",
    "constrained_generating_family", "currents", "euler_lagrange",
    "evaluate_on_momenta", "gauge_part", "holonomy_residual", "psi_reduction",
    "symmetrize_momenta",
    "LegendreData", "LegendreError", "SingularLegendreError",
    "energy_legendre", "field_hamiltonian_first_order", "hamilton_equations",
    "legendre_top",
    "GalileiReport", "PCForm", "galilei_transform_check",
    "multisymplectic_residuals", "pc_form",
    "DivergenceData", "DivergenceError", "divergence_lagrangian",
    "momentum_shift", "trivial_momenta", "verify_divergence_trivial",
    "HomogeneousPoly", "ProlongationError", "VerticalField", "gram_matrix",
    "polarize", "prolong_vertical_field", "resymmetrize",
    "form_to_latex", "form_to_str", "to_latex",
]
