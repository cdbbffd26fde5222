"""anosovlab: hyperbolic flows, their quantization, and numerical hyperbolicity checks.

Subpackages
-----------
catmap
    Arnold-cat dynamics on the torus: exact iteration, eigensystem,
    horocycle shifts, hyperbolicity defects, Birkhoff averages.
halfplane
    Geodesic/horocycle flows on the Poincare half-plane via SL(2,R).
weyl
    The twisted torus algebra of the quantized cat map, its tracial
    state and GNS norm, automorphisms, state functionals, and the
    clock-and-shift matrix cross-check.
obstruction
    GNS spectra of finite-spectrum systems, the Sylvester-type
    obstruction to hyperbolic generators, a direct defect search, and
    the continuous-spectrum positive control.
cli / experiments
    The `anosovlab` experiment driver emitting CSV/JSON defect tables.

All operations are pure functions of their inputs (random searches take
explicit seeds), so concurrent evaluation is safe.
"""

from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
