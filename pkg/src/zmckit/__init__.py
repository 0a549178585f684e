"""Exact and numeric toolkit for algebraic zero-mean-curvature hypersurfaces
in pseudo-spheres <B_s x, x> = eps of R^{N+1}."""

from .families import FamilySpec, make_poly, parse_family
from .parser import ParseError, parse_poly
from .poly import Poly, divide
from .scalars import QuadExtScalar
from .zmc import AmbientSig, ZmcReport, conjecture_check, zmc_residual

__version__ = "0.1.0"

__all__ = [
    "AmbientSig",
    "FamilySpec",
    "ParseError",
    "Poly",
    "QuadExtScalar",
    "ZmcReport",
    "conjecture_check",
    "divide",
    "make_poly",
    "parse_family",
    "parse_poly",
    "zmc_residual",
]
