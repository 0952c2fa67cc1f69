"""Dwork's p-adic hypergeometric function and its t <-> 1/t transformation."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DenominatorNotUnit,
    DworkHGError,
    EmptyAdmissibleLocus,
    HypothesisViolated,
    NonUnit,
    NotInDomain,
    PrecisionMismatch,
    ReducibleModulus,
    ZeroInput,
)
from .padic import (  # noqa: E402
    FqSpec,
    ResidueInt,
    WittElement,
    WittRing,
    build_witt_ring,
    embed_rational,
    residue_arith,
    teichmuller,
    teichmuller_lift,
    witt_unit_inverse,
)
from .series import (  # noqa: E402
    DworkOrbit,
    HGParameter,
    TruncatedPoly,
    dwork_eval,
    dwork_eval_f,
    dwork_orbit,
    dwork_prime,
    exponent_l,
    h_polynomial,
    pochhammer,
    truncated_hg,
)
