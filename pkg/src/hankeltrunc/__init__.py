"""Numerical laboratory for truncated (multi)linear Hankel operators.

Hankel operators and their truncations on analytic trigonometric
polynomials, periodic bilinear Hilbert transforms, H^q atoms and
Lipschitz-class norms, plus a seeded experiment harness.
"""

__version__ = "0.1.0"

from .trigpoly import TrigPoly  # noqa: E402
from .hankel import TruncationMask  # noqa: E402

__all__ = ["TrigPoly", "TruncationMask", "__version__"]
