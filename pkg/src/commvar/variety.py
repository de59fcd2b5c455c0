"""The commuting variety: ordered k-tuples of pairwise commuting elements.

Tuples in a quotient G~/K are stored by lifts; the commutation residual of a
pair compares x_i x_j against kappa * x_j x_i over the finite K, since a pair
commutes downstairs exactly when each lifted commutator is central.
Samplers cover the identity component (conjugated torus tuples) and, for the
central products G_{m,p}, the exotic components built from clock and shift
matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import matgroup
from .errors import (
    BadArguments,
    DescriptorMismatch,
    UnsupportedDescriptor,
    ZeroFingerprint,
)
from .fingerprint import Fingerprint
from .finmodel import decompose_rank_two, is_prime
from .matgroup import (
    TWO_PI,
    GroupDescriptor,
    GroupElement,
    central_phases,
    conjugate,
    distance,
    haar_sample,
    identity_element,
    wrap_angle,
)

TAU_COMM = 1e-9


@dataclass(eq=False)
class CommutingTuple:
    """A representation Z^k -> G as an ordered tuple of group elements.

    ``residual`` is the largest pairwise commutation defect, measured modulo
    K for quotient groups.
    """

    descriptor: GroupDescriptor
    elements: tuple
    residual: float

    @property
    def k(self) -> int:
        return len(self.elements)


@dataclass
class ValidationReport:
    residual: float
    worst_pair: tuple | None
    tol: float
    passed: bool


def _pair_defect(descriptor, x: GroupElement, y: GroupElement) -> float:
    """min over kappa in K of ||x y - kappa y x|| in the product metric.

    Computed on the products directly (not on the commutator element) so that
    a pair with an identity coordinate has defect exactly 0.0.
    """
    r = descriptor.torus_rank
    xy_t = wrap_angle(x.torus_part + y.torus_part)
    yx_t = wrap_angle(y.torus_part + x.torus_part)
    xy_f = [a @ b for a, b in zip(x.factor_parts, y.factor_parts)]
    yx_f = [b @ a for a, b in zip(x.factor_parts, y.factor_parts)]
    best = math.inf
    for phases in central_phases(descriptor):
        d = 0.0
        if r:
            shift = np.array([TWO_PI * float(q) for q in phases[:r]])
            d += float(np.linalg.norm(2.0 * np.sin(0.5 * (xy_t - yx_t - shift))))
        for i, (ab, ba) in enumerate(zip(xy_f, yx_f)):
            q = phases[r + i]
            if q == 0:
                d += float(np.linalg.norm(ab - ba))
            else:
                d += float(np.linalg.norm(ab - np.exp(2j * math.pi * float(q)) * ba))
        best = min(best, d)
    return best


def commutation_residual(descriptor, elements) -> tuple:
    """(max pairwise defect, worst pair indices)."""
    worst, pair = 0.0, None
    for i in range(len(elements)):
        for j in range(i + 1, len(elements)):
            d = _pair_defect(descriptor, elements[i], elements[j])
            if d > worst:
                worst, pair = d, (i, j)
    return worst, pair


def make_tuple(descriptor, elements) -> CommutingTuple:
    elements = tuple(elements)
    if len(elements) < 1:
        raise BadArguments("a tuple needs k >= 1 coordinates")
    for x in elements:
        if x.descriptor != descriptor:
            raise DescriptorMismatch("tuple coordinates live in different groups")
    residual, _ = commutation_residual(descriptor, elements)
    return CommutingTuple(descriptor, elements, residual)


def trivial_tuple(descriptor, k: int) -> CommutingTuple:
    return CommutingTuple(descriptor, tuple(identity_element(descriptor) for _ in range(k)), 0.0)


def validate_tuple(t: CommutingTuple, tol: float = TAU_COMM) -> ValidationReport:
    """Recompute the residual and report whether the tuple commutes at tol."""
    for x in t.elements:
        if x.descriptor != t.descriptor:
            raise DescriptorMismatch("tuple coordinates live in different groups")
    residual, pair = commutation_residual(t.descriptor, t.elements)
    return ValidationReport(residual, pair, tol, residual <= tol)


def conjugate_tuple(t: CommutingTuple, g: GroupElement) -> CommutingTuple:
    if g.descriptor != t.descriptor:
        raise DescriptorMismatch("conjugator lives in a different group")
    return make_tuple(t.descriptor, tuple(conjugate(g, x) for x in t.elements))


def tuple_distance(a: CommutingTuple, b: CommutingTuple) -> float:
    if a.descriptor != b.descriptor or a.k != b.k:
        raise DescriptorMismatch("tuples are not comparable")
    return max(distance(x, y) for x, y in zip(a.elements, b.elements))


# ---------------------------------------------------------------------------
# samplers


def random_torus_angles(rng, p: int) -> np.ndarray:
    """Uniform point of the diagonal maximal torus of SU(p): p phases summing
    to 0 mod 2*pi."""
    phi = rng.uniform(0.0, TWO_PI, p)
    phi[-1] = -np.sum(phi[:-1])
    return wrap_angle(phi)


def sample_identity_component(descriptor: GroupDescriptor, k: int, seed) -> CommutingTuple:
    """A random point of the identity component: a common conjugate of a
    random torus tuple, so the coordinates commute by construction."""
    rng = np.random.default_rng(seed)
    g = haar_sample(descriptor, rng)
    elements = []
    for _ in range(k):
        torus = rng.uniform(0.0, TWO_PI, descriptor.torus_rank)
        factors = []
        for p, v in zip(descriptor.su_factors, g.factor_parts):
            d = np.exp(1j * random_torus_angles(rng, p))
            factors.append((v * d) @ v.conj().T)
        elements.append(GroupElement(descriptor, torus, tuple(factors)))
    return make_tuple(descriptor, elements)


def su_clock_shift(p: int) -> tuple:
    """Determinant-one clock and shift matrices in SU(p) with
    [C, S] = C S C^-1 S^-1 = zeta * I, zeta = exp(2*pi*i/p).

    For odd p the plain clock diag(1, zeta, ..., zeta^{p-1}) and the cyclic
    shift already have determinant one (the scaling root of unity is zeta^0).
    For p = 2 both have determinant -1 and are repaired explicitly:
    C = diag(i, -i), S = [[0, 1], [-1, 0]].
    """
    if p == 2:
        clock = np.diag([1j, -1j]).astype(complex)
        shift = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)
        return clock, shift
    zeta = np.exp(2j * math.pi / p)
    clock = np.diag(zeta ** np.arange(p))
    shift = np.zeros((p, p), dtype=complex)
    for j in range(p):
        shift[(j + 1) % p, j] = 1.0
    return clock, shift


def is_central_product(descriptor: GroupDescriptor) -> tuple | None:
    """(m, p) when the descriptor is G_{m,p} = SU(p)^m / diagonal Z/p."""
    if descriptor.torus_rank != 0 or not descriptor.su_factors:
        return None
    p = descriptor.su_factors[0]
    if any(q != p for q in descriptor.su_factors) or not is_prime(p):
        return None
    m = len(descriptor.su_factors)
    diag = {tuple(Fraction(j, p) for _ in range(m)) for j in range(p)}
    if set(central_phases(descriptor)) != diag:
        return None
    return m, p


def sample_exotic(descriptor: GroupDescriptor, k: int, target: Fingerprint, seed) -> CommutingTuple:
    """A tuple of G_{m,p} whose lift has commutator fingerprint ``target``.

    Writes target = u ^ v (possible exactly when the alternating rank is at
    most 2), places C^{u_i} S^{v_i} identically in every SU(p) factor so the
    commutators land in the diagonal Z/p, then conjugates by a random element.
    """
    shape = is_central_product(descriptor)
    if shape is None:
        raise UnsupportedDescriptor("exotic sampling needs a G_{m,p} descriptor")
    m, p = shape
    if target.p != p or target.k != k:
        raise BadArguments(f"fingerprint is over p={target.p}, k={target.k}; need p={p}, k={k}")
    if target.is_zero:
        raise ZeroFingerprint("use sample_identity_component for the zero fingerprint")
    u, v = decompose_rank_two(target)  # raises UnrealizableFingerprint past rank 2
    clock, shift = su_clock_shift(p)
    rng = np.random.default_rng(seed)
    g = haar_sample(descriptor, rng)
    elements = []
    for i in range(k):
        w = np.linalg.matrix_power(clock, u[i]) @ np.linalg.matrix_power(shift, v[i])
        x = GroupElement(descriptor, np.zeros(0), tuple(w.copy() for _ in range(m)))
        elements.append(conjugate(g, x))
    out = make_tuple(descriptor, elements)
    assert out.residual <= 1e-10, "exotic construction must commute in the quotient"
    return out
