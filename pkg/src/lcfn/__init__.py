"""Appell polynomials built from C- and P-numbers, generalised powers and LC-functions."""

from __future__ import annotations

from .appell import (
    AppellSystem,
    Polynomial,
    SmoothFunctionBundle,
    c_from_p,
    c_poly,
    euler_maclaurin,
    faulhaber,
    multiplication_check,
    numeric_system,
    p_from_c,
    p_poly,
    poly_eval,
    system,
)
from .errors import (
    CoefficientFileError,
    DomainError,
    FieldMismatchError,
    LcfnError,
    PoleError,
    QuadratureError,
    ToleranceError,
    TruncationError,
    UnknownFunctionError,
    ValidationError,
)
from .genpower import DomainInfo, PowerConfig, binom_complex, domain_info, estimate_radius, gen_power, gen_power_mellin
from .lcfun import (
    ContourSpec,
    LcEvaluation,
    fc_function,
    hankel_I,
    hankel_J,
    lc_continued,
    lc_formula_check,
    lc_mellin,
    lc_series,
    lc_special_value,
    residue_at_one,
)
from .numerics import QuadratureResult, QuadratureSpec, complex_gamma
from .series import EgfSeries, GenFunction, bernoulli_numbers, builtin, f_alpha, underline

__version__ = "0.1.0"
