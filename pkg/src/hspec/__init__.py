"""hspec: quaternionic linear operators and their spectral machinery.

Right-linear operators on H^n are represented as quaternion matrices acting
from the left, with scalars acting on vectors from the right.  The package
covers resolvents and spectra, a Cauchy-integral functional calculus along
slice-plane contours, Laurent/pole analysis, spectral decompositions of
normal operators, polar decompositions, one-parameter unitary groups, and a
slow independent oracle used to cross-check every inversion path.
"""

from .quaternion import (  # noqa: F401
    BASIS,
    I,
    J,
    K,
    ONE,
    GradingSignature,
    ImaginaryUnit,
    KAPPA,
    Quaternion,
    conj,
    exp_q,
    inv,
    log_q,
    mul,
    slice_decompose,
    to_complex2,
    to_real4,
)
from .hspace import (  # noqa: F401
    HMatrix,
    HVector,
    classify,
    complex_adjoint,
    from_complex_adjoint,
    from_real_adjoint,
    graded_decompose,
    gram_schmidt,
    inner,
    left_apply,
    op_norm,
    real_adjoint,
    span_equal,
)
from .spectra import (  # noqa: F401
    ProbeGrid,
    SpectrumDescriptor,
    SpectrumItem,
    in_resolvent,
    neumann_resolvent,
    resolvent,
    resolvent_sample,
    spectral_radius,
    spectrum,
    symmetric_resolvent_bound,
)
from .funcalc import (  # noqa: F401
    ContourPath,
    HoloFunction,
    LaurentCoefficients,
    build_contour,
    cauchy_funcalc,
    default_contour,
    extended_funcalc,
    laurent_coeffs,
    pole_order,
    poly_eval_noncomm,
    slice_unit_of,
)
from .spectral import (  # noqa: F401
    SpectralDecomposition,
    UnitaryGroup,
    borel_funcalc,
    classify_by_spectrum,
    eigendecompose,
    polar_decompose,
    sqrt_positive,
    stone_generator,
    unitary_group,
)
from .oracle import CorpusSpec, generate, oracle_invert  # noqa: F401
from .suites import SuiteReport, run_suite  # noqa: F401

__version__ = "0.1.0"
