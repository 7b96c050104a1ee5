"""Shape-invariant superpotentials and semiclassical exactness checks."""

from . import catalog, errors, extended, oracle, quadrature, quantization, transforms
from .catalog import Phase, PhaseReport, SuperpotentialSpec, ExtendedSpec, get, names

__all__ = [
    "catalog",
    "errors",
    "quadrature",
    "quantization",
    "oracle",
    "extended",
    "transforms",
    "Phase",
    "PhaseReport",
    "SuperpotentialSpec",
    "ExtendedSpec",
    "get",
    "names",
]

__version__ = "0.1.0"
