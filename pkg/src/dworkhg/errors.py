"""Exception types raised across the package."""


class DworkHGError(Exception):
    """Base class for all errors raised by dworkhg."""


class DenominatorNotUnit(DworkHGError, ValueError):
    """A rational was embedded at a prime dividing its denominator."""


class NonUnit(DworkHGError, ArithmeticError):
    """Inversion of an element that is not a unit."""


class PrecisionMismatch(DworkHGError, ValueError):
    """Operands live in different rings (different p, n or modulus)."""


class ReducibleModulus(DworkHGError, ValueError):
    """The polynomial chosen to define F_q is not irreducible."""


class ZeroInput(DworkHGError, ValueError):
    """Teichmueller lift of zero requested."""


class NotInDomain(DworkHGError, ArithmeticError):
    """Evaluation point lies on the zero locus of h(t) mod p."""


class HypothesisViolated(DworkHGError, ValueError):
    """Parameters do not satisfy the hypotheses of the identity being checked."""


class EmptyAdmissibleLocus(DworkHGError):
    """No point of F_q^* avoids the zero loci on both sides of an identity."""
