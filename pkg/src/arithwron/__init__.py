"""Exact arithmetic functions under Dirichlet convolution, their derivations,
fractions, and generalized-Wronskian dependence tests."""

from .arithfn import (
    AllZeroUpTo,
    ArithFn,
    Known,
    PowerSeriesPoly,
    af_add,
    af_basis,
    af_const,
    af_convolve,
    af_invert,
    af_norm,
    af_ord,
    af_zero,
    from_power_series,
    to_dirichlet_string,
    to_power_series,
)
from .derivations import (
    Basic,
    Composition,
    Log,
    Monomial,
    OmegaWeighted,
    apply,
    commutator_apply,
    parse_derivation,
    partial_sum_log,
)
from .errors import ArithWronError
from .fraction import FracElem, frac_derive, kernel_probe, kernel_probe_log
from .scalar import LogPoly, Scalar, parse_scalar, scalar_log, symbol
from .wronskian import (
    AdmissibleTuple,
    DependenceConfig,
    DependentUpToPrecision,
    Inconclusive,
    Independent,
    check_all_to_log,
    enumerate_admissible,
    enumerate_divisor_closed,
    gaussian_null_vector,
    generalized_wronskian,
    log_wronskian,
    test_dependence,
)

__version__ = "0.1.0"
