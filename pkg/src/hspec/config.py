"""Tolerance and precision defaults.

The algebraic tolerance can be overridden through the HSPEC_TOL environment
variable; quadrature tolerance is a separate knob because contour integrals
carry discretization error on top of roundoff.
"""

import os

DEFAULT_ALGEBRAIC_TOL = 1e-9
DEFAULT_QUAD_TOL = 1e-7

# reciprocal-condition threshold below which a matrix is declared singular
RCOND_SINGULAR = 1e-12
# every quadrature node must be at least this well conditioned
RCOND_NODE = 1e-10
# relative margin by which spectrum points must clear the contour radius
CONTOUR_MARGIN = 0.05
# Gram-Schmidt drop threshold, relative to the largest input norm
GS_DROP_REL = 1e-10
# relative gap used when clustering eigenvalues of the complex image
EIG_CLUSTER_REL = 1e-8
# default/ceiling node counts for adaptive contour quadrature
QUAD_NODES_DEFAULT = 1024
QUAD_NODES_CAP = 2 ** 16
# central-difference step for generator recovery
STONE_STEP = 1e-5


def algebraic_tol(override=None):
    """Resolve the algebraic tolerance: explicit override, then HSPEC_TOL,
    then the built-in default."""
    if override is not None:
        return float(override)
    env = os.environ.get("HSPEC_TOL")
    if env is not None:
        return float(env)
    return DEFAULT_ALGEBRAIC_TOL


def quad_tol(override=None):
    if override is not None:
        return float(override)
    return DEFAULT_QUAD_TOL
