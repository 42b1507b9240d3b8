"""Rigorous enclosures for the renormalization fixed point of Lorenz maps.

Layers, bottom up: :mod:`.scalar` (outward-rounded intervals), :mod:`.poly`
(interval polynomials), :mod:`.funcball` (function balls on the unit disk),
:mod:`.ilinalg` (interval Gaussian elimination), :mod:`.cinterval` (complex
rectangles, unit-circle arcs), :mod:`.renorm` (the operator and its Newton
operator) and :mod:`.certify` (driver and command line).
"""

__version__ = "0.1.0"

from .funcball import Config, FunctionBall, LorenzPair  # noqa: E402
from .scalar import CertificationError, Scalar  # noqa: E402

__all__ = ["CertificationError", "Config", "FunctionBall", "LorenzPair", "Scalar", "__version__"]
