"""Fractional BT-theta and BN-theta convolution quadratures.

Second-order generating-function discretisations of the Riemann-Liouville
operator ``I^alpha`` (integration for ``alpha > 0``, differentiation for
``alpha < 0``), starting-weight correction, model-problem solvers and
stability-region tools.

>>> from fractheta import make_scheme, weights_by_recurrence
>>> w = weights_by_recurrence(make_scheme("BT", 1.0, 0.0), 2).omega
>>> [round(float(x), 12) for x in w]
[0.666666666667, 0.888888888889, 0.962962962963]
"""

__version__ = "0.1.0"

from .correction import (
    CorrectionSet,
    ExponentSet,
    exponent_set,
    moment_residual,
    solve_starting_weights,
)
from .errors import (
    ConstraintViolation,
    DegenerateWeight,
    FracThetaError,
    InvalidBeta,
    LengthMismatch,
    MalformedRange,
    NumericalFailure,
    PoleEvaluation,
    SingularSystem,
    StepSingular,
)
from .quadrature import (
    QuadratureResult,
    UniformGrid,
    apply,
    convolution_error,
    exact_riemann_liouville_monomial,
)
from .scheme import Family, StabilityAdvisory, ThetaScheme, gen_fn_eval, make_scheme
from .solvers import (
    ProblemKind,
    ProblemSpec,
    SolveReport,
    abel_problem,
    bagley_torvik_problem,
    caputo_problem,
    convergence_table,
    solve_abel,
    solve_bagley_torvik,
    solve_caputo_linear,
)
from .stability import BoundaryCurve, a_theta_check, boundary_curve, real_intercept
from .weights import (
    RecurrenceCoeffs,
    WeightTable,
    bn_weight_direct,
    bt_weight_direct,
    recurrence_coeffs,
    series_oracle,
    weights_by_recurrence,
)
