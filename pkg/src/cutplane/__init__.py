"""Cutting plane toolkit: feasibility, convex optimization, submodular
minimization, matroid intersection and dual SDP, all driven by separation
or optimization oracles."""

from .core import (
    CpmParams,
    CpmState,
    Found,
    ThinCertificate,
    certificate,
    run_feasibility,
)
from .convopt import OptimizeSpec, OptimizeResult, minimize
from .oracles import Halfspace, Inside, NearOptimal, SetOracle, FunctionOracle

__all__ = [
    "CpmParams", "CpmState", "Found", "ThinCertificate", "certificate",
    "run_feasibility", "OptimizeSpec", "OptimizeResult", "minimize",
    "Halfspace", "Inside", "NearOptimal", "SetOracle", "FunctionOracle",
]

__version__ = "0.1.0"
