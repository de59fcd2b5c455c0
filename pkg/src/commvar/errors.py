"""Domain error hierarchy.

Every failure mode that a caller can reasonably branch on gets its own
class.  The class name doubles as the stable machine-readable code used
by the CLI (``{"error": "NotRegular"}`` with exit status 2).
"""


class CommvarError(Exception):
    """Base class for all domain errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class DescriptorMismatch(CommvarError):
    """Operands live in different groups."""


class UnsupportedDescriptor(CommvarError):
    """The descriptor is outside the supported catalog for this operation."""


class BranchCut(CommvarError):
    """An eigenvalue sits too close to -1 for a principal logarithm."""


class UnrealizableFingerprint(CommvarError):
    """Requested fingerprint has rank > 2 as an alternating form."""


class ZeroFingerprint(CommvarError):
    """Exotic sampler called with the zero fingerprint."""


class NotSimultaneouslyDiagonalizable(CommvarError):
    """Residual after eigenspace refinement exceeds tolerance."""


class IllConditioned(CommvarError):
    """Eigenvalue clusters are ambiguous at the clustering threshold."""


class NotRegular(CommvarError):
    """The torus tuple has a nontrivial Weyl stabilizer."""


class NotAlmostCommuting(CommvarError):
    """Some commutator is farther than tolerance from every element of K."""


class AmbiguousMatch(CommvarError):
    """Two elements of K are equidistant from a commutator within tolerance."""


class UnsupportedPrime(CommvarError):
    """Prime outside the desk-scale range of the finite-group builders."""


class TooLarge(CommvarError):
    """Enumeration would exceed the configured size cap."""


class NotCentral(CommvarError):
    """The given subgroup is not central."""


class BadArguments(CommvarError):
    """Arguments outside the stated regime of a formula or construction."""


class NontrivialWinding(CommvarError):
    """A torus winding number obstructs the requested contraction."""


class StalledContraction(CommvarError):
    """Curve shortening failed to decrease the loop diameter."""


class NotInIdentityComponent(CommvarError):
    """The tuple lies in an exotic component."""


class AmbiguousWinding(CommvarError):
    """A polyline step is too large to read off winding unambiguously."""


class UnsupportedExotic(CommvarError):
    """No exotic fundamental-group value is known for this group."""


class NotExact(CommvarError):
    """A three-term sequence fails exactness; .stage names the failing check."""

    def __init__(self, stage: str, detail: str = ""):
        self.stage = stage
        msg = stage if not detail else f"{stage}: {detail}"
        super().__init__(msg)


class MalformedInput(ValueError):
    """Unparseable or schema-violating input (CLI exit status 1)."""
