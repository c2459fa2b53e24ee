"""Exact exterior differential systems and Cartan characters for gauge theories."""

__version__ = "0.1.0"

from .exterior import Chart, EvaluatedForm, Form, Metric, Poly, evaluate, exterior_derivative, hodge_dual_2form, hodge_star, interior_product, wedge
from .eds import EDSystem, ClosureCertificate, cauchy_space_dim, closure_check_certificate, closure_check_pointwise, ideal_at_point
from .cartan import CharacterTable, compute_characters, compute_characters_multi, format_table
from .models import ModelSpec, build, build_contact_example, build_maxwell, build_su2_yang_mills, cartan_poincare, essential_identities
from .dsl import ParseError, parse, print_eds

__all__ = [
    "Chart", "EvaluatedForm", "Form", "Metric", "Poly",
    "evaluate", "exterior_derivative", "hodge_dual_2form", "hodge_star", "interior_product", "wedge",
    "EDSystem", "ClosureCertificate", "cauchy_space_dim", "closure_check_certificate",
    "closure_check_pointwise", "ideal_at_point",
    "CharacterTable", "compute_characters", "compute_characters_multi", "format_table",
    "ModelSpec", "build", "build_contact_example", "build_maxwell", "build_su2_yang_mills",
    "cartan_poincare", "essential_identities",
    "ParseError", "parse", "print_eds",
]
