"""Central covers G~ -> G~/K: lifting tuples, commutator fingerprints,
component classification, and the K^k deck action.

A tuple commuting in the quotient lifts to a K-almost-commuting tuple
upstairs; the central exponents of its commutators form the fingerprint,
which does not depend on the choice of lift (changing lifts multiplies
coordinates by central elements, which cancel in commutators).  The zero
fingerprint characterizes the identity component: the lift then commutes,
hence lies in a maximal torus, and conversely.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import matgroup
from .errors import AmbiguousMatch, NotAlmostCommuting, UnsupportedDescriptor
from .fingerprint import Fingerprint, pair_index
from .finmodel import is_prime
from .matgroup import (
    GroupDescriptor,
    GroupElement,
    central_element,
    central_phases,
    distance,
    identity_element,
    inverse,
    multiply,
)
from .variety import TAU_COMM, CommutingTuple, make_tuple


@dataclass(frozen=True)
class ComponentClass:
    """IdentityComponent (fingerprint None) or Exotic(nonzero fingerprint)."""

    fingerprint: Fingerprint | None = None

    def __post_init__(self):
        if self.fingerprint is not None and self.fingerprint.is_zero:
            raise ValueError("a zero fingerprint is the identity component")

    @classmethod
    def identity(cls) -> "ComponentClass":
        return cls(None)

    @classmethod
    def exotic(cls, fp: Fingerprint) -> "ComponentClass":
        return cls(fp)

    @property
    def is_identity(self) -> bool:
        return self.fingerprint is None

    def __str__(self):
        return "IdentityComponent" if self.is_identity else f"Exotic({self.fingerprint})"


@dataclass(eq=False)
class LiftedTuple:
    """A choice of lifts in G~ for a tuple of G~/K.

    Not a CommutingTuple: lifts of exotic tuples do not commute, they are
    only K-almost-commuting.
    """

    descriptor: GroupDescriptor  # the covering product group, K trivial
    elements: tuple
    source: GroupDescriptor  # the quotient descriptor the tuple came from

    @property
    def k(self) -> int:
        return len(self.elements)


def _commutator(x: GroupElement, y: GroupElement) -> GroupElement:
    return multiply(multiply(x, y), inverse(multiply(y, x)))


def lift_tuple(t: CommutingTuple, tol: float = TAU_COMM) -> LiftedTuple:
    """Return the stored lifts, checking they are K-almost-commuting.

    Every pairwise commutator must lie within ``tol`` of some element of K;
    otherwise NotAlmostCommuting.
    """
    lift_desc = t.descriptor.lift()
    elements = tuple(
        GroupElement(lift_desc, x.torus_part.copy(), tuple(f.copy() for f in x.factor_parts))
        for x in t.elements
    )
    kappas = [central_element(lift_desc, ph) for ph in central_phases(t.descriptor)]
    for i in range(len(elements)):
        for j in range(i + 1, len(elements)):
            c = _commutator(elements[i], elements[j])
            if min(distance(c, kap) for kap in kappas) > tol:
                raise NotAlmostCommuting(f"commutator of coordinates {i}, {j} is not near K")
    return LiftedTuple(lift_desc, elements, t.descriptor)


def _k_generator_phases(source: GroupDescriptor):
    """(p, phase vector of the distinguished generator zeta of K).

    Requires K cyclic of prime order p; the stored first generator is used
    when nontrivial, so the exponent convention is descriptor-defined.
    """
    phases = central_phases(source)
    p = len(phases)
    if p == 1 or not is_prime(p):
        raise UnsupportedDescriptor(f"fingerprints need |K| prime, got |K|={p}")
    for gen in source.central_generators:
        if any(q != 0 for q in gen.phases):
            return p, gen.phases
    return p, phases[1]


def fingerprint(lift: LiftedTuple, tol: float = TAU_COMM) -> Fingerprint:
    """mu_ij = the exponent e with [x_i, x_j] nearest to zeta^e.

    Raises NotAlmostCommuting when no element of K is within ``tol`` and
    AmbiguousMatch when the two best matches are within ``tol`` of each other
    (cannot happen for the supported descriptors, where K is spaced by
    |1 - zeta_p| >> tol).
    """
    if lift.k == 1:
        p, _ = _k_generator_phases(lift.source)
        return Fingerprint.zero(p, 1)
    p, gen = _k_generator_phases(lift.source)
    powers = []
    acc = tuple(q * 0 for q in gen)
    for _ in range(p):
        powers.append(central_element(lift.descriptor, acc))
        acc = tuple((a + b) % 1 for a, b in zip(acc, gen))
    k = lift.k
    entries = [0] * (k * (k - 1) // 2)
    for i in range(k):
        for j in range(i + 1, k):
            c = _commutator(lift.elements[i], lift.elements[j])
            dists = sorted((distance(c, powers[e]), e) for e in range(p))
            if dists[0][0] > tol:
                raise NotAlmostCommuting(f"commutator of coordinates {i}, {j} is not near K")
            if p > 1 and len(dists) > 1 and dists[1][0] - dists[0][0] < tol:
                raise AmbiguousMatch(f"coordinates {i}, {j}: two K elements equidistant")
            entries[pair_index(i, j, k)] = dists[0][1]
    return Fingerprint(p, k, tuple(entries))


def classify_component(t: CommutingTuple, tol: float = TAU_COMM) -> ComponentClass:
    """IdentityComponent iff the lift commutes (zero fingerprint)."""
    lift = lift_tuple(t, tol)
    if not t.descriptor.has_quotient:
        return ComponentClass.identity()  # lift_tuple already checked commutation
    fp = fingerprint(lift, tol)
    return ComponentClass.identity() if fp.is_zero else ComponentClass.exotic(fp)


def deck_action(kappa, lifted: LiftedTuple) -> LiftedTuple:
    """Left coordinatewise multiplication by an element of K^k.

    ``kappa`` is a length-k sequence of indices into central_phases(source)
    or of phase vectors.  Commutators, and hence the fingerprint, are
    unchanged; the projection to the quotient is the same tuple.
    """
    phases = central_phases(lifted.source)
    if len(kappa) != lifted.k:
        raise ValueError(f"kappa must have length k={lifted.k}")
    new = []
    for kap, x in zip(kappa, lifted.elements):
        ph = phases[kap] if isinstance(kap, int) else tuple(kap)
        new.append(multiply(central_element(lifted.descriptor, ph), x))
    return LiftedTuple(lifted.descriptor, tuple(new), lifted.source)


def project_lift(lifted: LiftedTuple) -> CommutingTuple:
    """Reinterpret the lifts as a tuple of the quotient group."""
    elements = tuple(
        GroupElement(lifted.source, x.torus_part.copy(), tuple(f.copy() for f in x.factor_parts))
        for x in lifted.elements
    )
    return make_tuple(lifted.source, elements)
