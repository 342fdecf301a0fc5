"""Torus-knot solutions of vacuum Maxwell: closed forms, spectral propagation,
helicity bookkeeping and field-line topology."""

from .errors import (
    CurvesTooClose,
    EmknotError,
    GridMismatch,
    NoClosure,
    NotTransversal,
    OpenCurve,
    QuadratureNotConverged,
    RealityViolated,
    SingularPoint,
    StagnationPoint,
    ZeroWavevector,
)
from .fieldlines import Curve, TraceConfig, gauss_linking, linking_matrix, trace_line
from .helicity import em_helicity, helicity_at, helicity_frame, helicity_report, photon_numbers, photon_numbers_closed
from .knotfields import KnotParams, base_integrals, base_integrals_oracle, eval_eb, eval_initial
from .spectral import CauchyState, GridSpec, RealVectorFieldGrid, SpectralField, dft_forward, dft_inverse, knot_state, propagate
from .units import INTERNAL, Units

__version__ = "0.1.0"

__all__ = [
    "CauchyState",
    "Curve",
    "CurvesTooClose",
    "EmknotError",
    "GridMismatch",
    "GridSpec",
    "INTERNAL",
    "KnotParams",
    "NoClosure",
    "NotTransversal",
    "OpenCurve",
    "QuadratureNotConverged",
    "RealVectorFieldGrid",
    "RealityViolated",
    "SingularPoint",
    "SpectralField",
    "StagnationPoint",
    "TraceConfig",
    "Units",
    "ZeroWavevector",
    "base_integrals",
    "base_integrals_oracle",
    "dft_forward",
    "dft_inverse",
    "em_helicity",
    "eval_eb",
    "eval_initial",
    "gauss_linking",
    "helicity_at",
    "helicity_frame",
    "helicity_report",
    "knot_state",
    "linking_matrix",
    "photon_numbers",
    "photon_numbers_closed",
    "propagate",
    "trace_line",
]
