"""Information-criterion order and support selection for AR models."""

from .ar1d import (
    ArModel1D,
    Autocovariance,
    autocovariance,
    fit_order,
    fit_support,
    ic_term_1d,
    simulate,
    stability_check,
)
from .ar2d import (
    Acov2D,
    ArModel2D,
    Support2D,
    acov2d,
    fit_support_2d,
    ic_2d,
    load_pgm,
    qp_support,
    select_classical_2d,
    select_nishii_2d,
    simulate_2d,
)
from .criteria import Criterion, beta_bounds, beta_equivalent, ic_value, penalty
from .metrics import fitted_variance, kullback, pev
from .selection import (
    IcEvaluator,
    SelectionResult,
    select_classical,
    select_exhaustive,
    select_nishii,
)

__version__ = "0.1.0"
