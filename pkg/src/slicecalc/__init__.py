"""Clifford-operator S-spectrum, S-resolvents and the S-functional calculus."""

from .calculus import (
    ContourQuadrature,
    IntrinsicFunction,
    PowerSeries,
    SliceFunction,
    eval_slice_function,
    functional_calculus,
    intrinsic,
    op_star_series,
    register_intrinsic,
    representation_formula,
    resolvent_derivative_residual,
    scalar_star_product,
    slice_derivative,
    taylor_formula,
)
from .clifford import Multivector, Paravector, blade_table
from .config import RunConfig, load_config
from .contour import Contour
from .errors import (
    DimensionError,
    DomainError,
    HypothesisError,
    InvariantError,
    InvertibilityError,
    SchemaError,
    SingularError,
    SliceCalcError,
    SpectrumError,
    UnsupportedError,
)
from .operators import CliffordOperator, op_inverse, op_norm
from .resolvent import ResolventSide, s_resolvent, s_resolvent_power, star_power_pair
from .series import TruncationReport, main_series_residual, resolvent_taylor, sigma_series
from .spectrum import ScanConfig, SpectralScan, scan_spectrum

__version__ = "0.1.0"

__all__ = [
    "ContourQuadrature",
    "IntrinsicFunction",
    "PowerSeries",
    "SliceFunction",
    "eval_slice_function",
    "functional_calculus",
    "intrinsic",
    "op_star_series",
    "register_intrinsic",
    "representation_formula",
    "resolvent_derivative_residual",
    "scalar_star_product",
    "slice_derivative",
    "taylor_formula",
    "Multivector",
    "Paravector",
    "blade_table",
    "RunConfig",
    "load_config",
    "Contour",
    "DimensionError",
    "DomainError",
    "HypothesisError",
    "InvariantError",
    "InvertibilityError",
    "SchemaError",
    "SingularError",
    "SliceCalcError",
    "SpectrumError",
    "UnsupportedError",
    "CliffordOperator",
    "op_inverse",
    "op_norm",
    "ResolventSide",
    "s_resolvent",
    "s_resolvent_power",
    "star_power_pair",
    "TruncationReport",
    "main_series_residual",
    "resolvent_taylor",
    "sigma_series",
    "ScanConfig",
    "SpectralScan",
    "scan_spectrum",
]
