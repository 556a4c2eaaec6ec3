"""Exception hierarchy shared by all bezmf modules."""


class BezmfError(ValueError):
    """Base class for all domain errors raised by this package."""


class ParseError(BezmfError):
    """Malformed potential, element or matrix input."""


class BackendMismatch(BezmfError):
    """Symbolic and integer primes mixed in one computation."""


class DuplicatePrime(BezmfError):
    """The same prime appears twice in a potential."""


class OrderBelowTwo(BezmfError):
    """A critical prime was given multiplicity below two."""


class NonPrimeInteger(BezmfError):
    """An integer prime id failed the primality check."""


class ZeroElement(BezmfError):
    """Zero passed where a non-zero ring element is required."""


class BoundExceeded(BezmfError):
    """Input is beyond the configured desk-scale bound."""


class NotADivisor(BezmfError):
    """Exact division requested between non-divisible elements."""


class PotentialMismatch(BezmfError):
    """Operands live over different potentials."""


class NotAFactorization(BezmfError):
    """Matrix pair does not satisfy u*v = v*u = W*I."""


class ShapeMismatch(BezmfError):
    """Matrix block shapes are incompatible."""


class NotIntegerBackend(BezmfError):
    """Operation needs integer residue arithmetic but got symbolic primes."""


class CompositionMismatch(BezmfError):
    """Morphisms composed with target != source."""


class NonDivisorCoefficient(BezmfError):
    """A symbolic morphism coefficient left the divisor lattice."""


class InconsistentTriple(BezmfError):
    """(x, y, z) does not arise from any elementary factorization."""


class NotMaximal(BezmfError):
    """Poset element is not maximal where maximality is required."""
