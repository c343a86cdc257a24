"""Clifford-algebra kernels, polynomial families and S-spectrum functional calculi for R_n, n odd,
checked against a jet-based differentiation oracle."""
from .algebra import (
    Algebra,
    AlgebraMismatchError,
    AlgebraSignature,
    Multivector,
    Paravector,
    SlicePoint,
    algebra,
    mv_mul,
    pv_conj,
    pv_pow,
    same_sphere,
)
from .jets import Jet, apply_dirac, apply_laplacian_power
from .kernels import KernelId, eval_kernel, verify_differential_identity
from .operators import (
    CliffordMatrix,
    CommutingParavectorOp,
    ContourSpec,
    HypothesisError,
    SlicePolynomial,
    contour_calculus,
    resolvent,
    s_spectrum,
)
from .polynomials import eval_appell, eval_harmonic, identity_suite

__version__ = "0.1.0"
