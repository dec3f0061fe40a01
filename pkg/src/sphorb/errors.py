"""Exception types shared across the package."""


class SphorbError(Exception):
    """Base class for all errors raised by this package."""


class NonFiniteType(SphorbError):
    """Cartan data is not of finite type (symmetrized matrix not positive definite)."""


class RankMismatch(SphorbError):
    """Ambient rank too small, or root/coroot data of inconsistent shape."""


class DimensionMismatch(SphorbError):
    """Vector or lattice dimensions do not match the ambient rank."""


class GroupTooLarge(SphorbError):
    """Weyl group enumeration exceeded the configured cap."""


class WildCaseUnsupported(SphorbError):
    """Residue characteristic divides a component-group order; no closed formula."""


class NotRational(SphorbError):
    """Operation requires an orbit with a rational point."""


class NotMaximalRank(SphorbError):
    """Operation requires an orbit of maximal rank."""


class InvalidGraph(SphorbError):
    """Operation requires a graph that passes validation."""


class StabilizerNotSemidirect(SphorbError):
    """The open-orbit stabilizer does not factor as required; the graph is not a
    valid model of a spherical variety."""


class LemmaViolation(SphorbError):
    """Bad-divisor containments disagree with the type-G root set."""


class InductionInconsistent(SphorbError):
    """A parabolically induced graph failed validation or the induced invariants
    disagree with the inner ones."""


class Cor1Violation(SphorbError):
    """Nonvanishing or fixed set of the composition calculus disagrees with the
    coset-representative prediction."""


class NotReflectionGroup(SphorbError):
    """Molien series does not factor into fundamental degrees."""


class GraphParseError(SphorbError):
    """A graph document is structurally malformed."""
