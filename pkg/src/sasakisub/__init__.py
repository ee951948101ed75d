"""Numerical verification of anti-invariant Riemannian submersions from Sasakian manifolds."""

from .expr import Expression, ExpressionError, EvaluationError, Jet2, evaluate_jet, parse_expression
from .geometry import (
    Chart,
    ChartMismatchError,
    MetricField,
    ModelError,
    VectorField,
    christoffel_at,
    covariant_derivative_at,
    inverse_metric_at,
    lie_bracket_at,
    metric_at,
    ricci_at,
    riemann_at,
)
from .contact import (
    AlmostContactStructure,
    StructuredManifold,
    check_almost_contact,
    check_contact_form,
    check_sasakian,
    check_sasakian_curvature,
)
from .report import Check, CheckReport, SuiteResult
from .submersion import (
    AntiInvarianceReport,
    Guard,
    SplitFrame,
    SubmersionSpec,
    bc_decompose_at,
    check_submersion_axioms,
    classify_anti_invariance,
    differential_at,
    project,
    split_frame_at,
)

__version__ = "0.1.0"
