"""Exact computer algebra for Noetherian operator modules of non-reduced
structures on coordinate subspaces: construction from residue data, ideal
membership by duality with a brute-force cofactor validator, and intrinsic
pointwise norms with explicit equivalence certificates.

Everything is computed over the rationals; floating point appears only in
optional display helpers.
"""

from .polys import (
    NEG_INF,
    DenominatorVanishes,
    MultiIndex,
    NotDivisible,
    Poly,
    PolyParseError,
    RatFunc,
    ball,
    ball_count,
    box,
    parse_poly,
    poly_gcd,
    poly_to_str,
)
from .ideals import CertificationFailure, IdealSpec, cofactor_member
from .ops import (
    DiffOp,
    ModuleCombination,
    NoetherianCheck,
    TiltMatrix,
    module_membership,
    op_to_str,
    parse_op,
    power_compose,
    tilt_derivative,
    verify_noetherian,
    verify_noetherian_check,
)
from .noether import (
    InsufficientTilts,
    NoetherianGens,
    Provenance,
    ResidueDatum,
    SingularMatrix,
    TiltExpansion,
    VerificationFailure,
    double_hypersurface_generators,
    double_hypersurface_member,
    express_mixed_partial,
    generators_from_residue_data,
    generators_from_tilts,
    tilt_point_set,
    vandermonde_solve,
)
from .member import (
    Extension,
    MembershipVerdict,
    NormEquivalence,
    NormValue,
    NotEquivalent,
    PuncturedFunction,
    extend_across_origin,
    extension_round_trip,
    ideal_member,
    norm_equiv,
    norm_eval,
    sqrt_str,
)
from .cm import (
    DominationReport,
    MonomialBasis,
    coefficient_norm_sq,
    coefficients_in_basis,
    domination_report,
    extraction_operators,
    monomial_basis,
    reconstruction_certified,
)

__version__ = "0.1.0"
