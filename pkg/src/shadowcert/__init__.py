"""Certified shadowing for expansive systems with finitely many defects.

Two exactly-representable expansive systems — the full shift on m
symbols and the hyperbolic automorphism [[2,1],[1,1]] of the 2-torus
over Q(sqrt5) — together with a certified constant chain
(alpha, delta, N, rho), an inductive gluing construction that shadows
any rho-pseudo-orbit with finitely many jumps, per-system direct
oracles for cross-validation, and a falsifier that hunts for
counterexamples to the semi-expansivity step.
"""

from .constants import (
    CertifiedConstants,
    FalsifyOutcome,
    FalsifyWitness,
    alpha_certify_shift,
    alpha_certify_toral,
    delta_semiexp,
    derive_constants,
    exact_str,
    rho_for,
    semiexp_falsify,
    sharpen_check,
    uniform_n,
)
from .orbit import (
    PseudoOrbit,
    Window,
    distance_profile,
    from_boundaries,
    pure_orbit,
    replace_segment_with_orbit,
    splice,
    sup_distance,
)
from .quadratic import LAMBDA, PHI, SQRT5, QuadraticNumber
from .shadowing import (
    ConstantsViolation,
    CrossReport,
    GlueStep,
    JumpSizeError,
    ShadowCertificate,
    ShadowingError,
    VerifyResult,
    cross_validate,
    direct_shadow,
    direct_shadow_shift,
    direct_shadow_toral,
    inductive_shadow,
    verify_certificate,
)
from .shiftspace import ShiftPoint, ShiftSystem
from .systems import TailEvidence, certify_tail_equal_orbit, get_system
from .torus import ToralPoint, ToralSystem

__version__ = "0.1.0"

__all__ = [
    "CertifiedConstants",
    "ConstantsViolation",
    "CrossReport",
    "FalsifyOutcome",
    "FalsifyWitness",
    "GlueStep",
    "JumpSizeError",
    "LAMBDA",
    "PHI",
    "PseudoOrbit",
    "QuadraticNumber",
    "SQRT5",
    "ShadowCertificate",
    "ShadowingError",
    "ShiftPoint",
    "ShiftSystem",
    "TailEvidence",
    "ToralPoint",
    "ToralSystem",
    "VerifyResult",
    "Window",
    "alpha_certify_shift",
    "alpha_certify_toral",
    "certify_tail_equal_orbit",
    "cross_validate",
    "delta_semiexp",
    "derive_constants",
    "direct_shadow",
    "direct_shadow_shift",
    "direct_shadow_toral",
    "distance_profile",
    "exact_str",
    "from_boundaries",
    "get_system",
    "inductive_shadow",
    "pure_orbit",
    "replace_segment_with_orbit",
    "rho_for",
    "semiexp_falsify",
    "sharpen_check",
    "splice",
    "sup_distance",
    "uniform_n",
    "verify_certificate",
]
