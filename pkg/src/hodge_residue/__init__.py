"""Exact verification engine for spectral form/torsion functionals.

The package computes residue densities of perturbed Hodge operators in exact
rational/Gaussian-rational arithmetic (interior functionals, trace identities,
boundary terms) and checks the results against tabulated closed forms and an
independent floating-point oracle.
"""

from .boundary import (
    BoundaryArgs,
    RationalXnOp,
    ScalarRational,
    boundary_density,
    closed_form_boundary_coefficient,
    line_integral,
    normal_derivative_symbol,
    pi_minus,
    pi_plus,
    resolvent_symbol_channels,
    verify_boundary,
)
from .exterior import (
    LinearOp,
    Multivector,
    clifford,
    clifford_generator,
    clifford_word,
    commutator,
    contract_lower,
    generator_word,
    trace_product,
    wedge_raise,
)
from .forms import (
    AntiSymForm,
    form_contract,
    form_from_json,
    form_to_json,
    lift_four_chat,
    lift_four_mixed,
    lift_three_c,
    lift_three_mixed,
    lift_torsion_assembly,
    lift_two_chat,
    random_form,
    random_vector,
    vectors_from_json,
)
from .oracle import (
    float_density,
    float_sandwich_integral,
    float_trace,
    line_quadrature,
    moment_float,
    sphere_quadrature,
)
from .residue import (
    FUNCTIONALS,
    LEMMA_CHECKS,
    CheckReport,
    closed_form_coefficient,
    density_decomposition,
    lemma_check,
    lemma_ids,
    spectral_density,
    verify_theorem,
)
from .scalars import (
    I,
    PI,
    GaussianRational,
    Rational,
    SymbolicScalar,
    sphere_volume,
    sphere_volume_float,
)
from .symbols import (
    PolyForm,
    XiPolynomialOp,
    check_flat_commutators,
    codifferential,
    coordinate_multiply,
    exterior_derivative,
    interior_integrand,
    sphere_moment,
    trace_integrate,
)

__version__ = "0.1.0"

__all__ = [
    "AntiSymForm",
    "BoundaryArgs",
    "CheckReport",
    "FUNCTIONALS",
    "GaussianRational",
    "I",
    "LEMMA_CHECKS",
    "LinearOp",
    "Multivector",
    "PI",
    "PolyForm",
    "Rational",
    "RationalXnOp",
    "ScalarRational",
    "SymbolicScalar",
    "XiPolynomialOp",
    "boundary_density",
    "check_flat_commutators",
    "clifford",
    "clifford_generator",
    "clifford_word",
    "closed_form_boundary_coefficient",
    "closed_form_coefficient",
    "codifferential",
    "commutator",
    "contract_lower",
    "coordinate_multiply",
    "density_decomposition",
    "exterior_derivative",
    "float_density",
    "float_sandwich_integral",
    "float_trace",
    "form_contract",
    "form_from_json",
    "form_to_json",
    "generator_word",
    "interior_integrand",
    "lemma_check",
    "lemma_ids",
    "lift_four_chat",
    "lift_four_mixed",
    "lift_three_c",
    "lift_three_mixed",
    "lift_torsion_assembly",
    "lift_two_chat",
    "line_integral",
    "line_quadrature",
    "moment_float",
    "normal_derivative_symbol",
    "pi_minus",
    "pi_plus",
    "random_form",
    "random_vector",
    "resolvent_symbol_channels",
    "sphere_moment",
    "sphere_quadrature",
    "sphere_volume",
    "sphere_volume_float",
    "spectral_density",
    "trace_integrate",
    "trace_product",
    "verify_boundary",
    "verify_theorem",
]
