"""Exact symbolic star-products on coordinate charts.

The package builds associative deformations of the pointwise product of
functions from chart-level data: a fiberwise Moyal (or first-order)
product on jets, a flat reference connection, its deformation, the
recursive flattening of the curvature, and the induced quantization map.
All arithmetic is exact over the rationals so every structural identity
is checked by literal equality.
"""

from .errors import InputError, StarquantError, VerificationError
from .series import INF, Series, SeriesMatrix, SeriesRing
from .forms import EForm, graded_commutator, wedge
from .products import (
    ConstantBivector,
    FormalBivector,
    kontsevich_first_order,
    moyal_product,
    poisson_bracket,
    star_commutator_over_2eps,
)
from .jets import (
    ChartJetFamily,
    SymplecticData,
    chart_from_christoffel,
    darboux_check,
    delta_inv,
    delta_op,
    delta_star_op,
    hamiltonian_lift,
    identity_chart,
    pullback_two_form,
    symplectic_from_chart,
)
from .fedosov import (
    FedosovConnection,
    FedosovSolution,
    QuantizedSection,
    build_solution,
    first_order_star,
    solve_d0,
    solve_gamma,
)
from .problem import ProblemSpec, load_problem, parse_problem

__version__ = "0.1.0"

__all__ = [
    "INF",
    "ChartJetFamily",
    "ConstantBivector",
    "EForm",
    "FedosovConnection",
    "FedosovSolution",
    "FormalBivector",
    "InputError",
    "ProblemSpec",
    "QuantizedSection",
    "Series",
    "SeriesMatrix",
    "SeriesRing",
    "StarquantError",
    "SymplecticData",
    "VerificationError",
    "build_solution",
    "chart_from_christoffel",
    "darboux_check",
    "delta_inv",
    "delta_op",
    "delta_star_op",
    "first_order_star",
    "graded_commutator",
    "hamiltonian_lift",
    "identity_chart",
    "kontsevich_first_order",
    "load_problem",
    "moyal_product",
    "parse_problem",
    "poisson_bracket",
    "pullback_two_form",
    "solve_d0",
    "solve_gamma",
    "star_commutator_over_2eps",
    "symplectic_from_chart",
    "wedge",
]
