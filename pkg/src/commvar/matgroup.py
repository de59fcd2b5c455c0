"""Matrix substrate for compact connected groups ((S^1)^r x SU(p_1) x ... x SU(p_s)) / K.

A group is described by its torus rank, the sizes of its special-unitary
factors, and generators of a finite central subgroup K.  Elements are stored
concretely: a vector of torus angles plus one unitary matrix per factor.
Elements of a quotient G~/K are stored by lifts in G~ = (S^1)^r x prod SU(p_i),
and all comparisons go through the finite K, so no canonical coset form is
ever needed.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.linalg import schur

from .errors import BranchCut, DescriptorMismatch, UnsupportedDescriptor

TWO_PI = 2.0 * math.pi

TAU_UNIT = 1e-9          # validation tolerance: unitarity, det, angle sums
TAU_EIG = 1e-8           # exclusion radius around the log branch point -1
CONSTRUCTION_TOL = 1e-12  # target residual for freshly built elements

_MAX_CENTRAL_ORDER = 4096

SPIN7 = "Spin(7)"  # catalog name recognized by the pi1 module only


def wrap_angle(theta):
    """Reduce angles to [0, 2*pi)."""
    return np.mod(theta, TWO_PI)


def wrap_signed(theta):
    """Reduce angles to (-pi, pi]."""
    t = np.mod(np.asarray(theta, dtype=float) + math.pi, TWO_PI) - math.pi
    # np.mod sends pi to -pi; fold the open endpoint back.
    if np.ndim(t) == 0:
        return math.pi if t == -math.pi else float(t)
    t[t == -math.pi] = math.pi
    return t


def is_unitary(m, tol=TAU_UNIT) -> bool:
    m = np.asarray(m)
    n = m.shape[0]
    return bool(np.linalg.norm(m.conj().T @ m - np.eye(n)) <= tol)


def is_special_unitary(m, tol=TAU_UNIT) -> bool:
    return is_unitary(m, tol) and abs(np.linalg.det(np.asarray(m)) - 1.0) <= tol


# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class CentralGenerator:
    """A central element of (S^1)^r x prod SU(p_i), stored exactly.

    Each entry is the fraction q with angle 2*pi*q; for an SU(p) factor the
    element is the scalar matrix exp(2*pi*i*q) * I, which needs p*q integral
    to have determinant one.
    """

    torus: tuple
    factors: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "torus", tuple(Fraction(q) % 1 for q in self.torus)
        )
        object.__setattr__(
            self, "factors", tuple(Fraction(q) % 1 for q in self.factors)
        )

    @property
    def phases(self) -> tuple:
        return self.torus + self.factors


@dataclass(frozen=True)
class GroupDescriptor:
    """G = ((S^1)^torus_rank x SU(p_1) x ... x SU(p_s)) / K.

    K is the (finite) central subgroup generated by ``central_generators``.
    With no generators the group is the product itself and elements compare
    directly; otherwise elements are K-cosets stored by lifts.
    """

    torus_rank: int = 0
    su_factors: tuple = ()
    central_generators: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "su_factors", tuple(int(p) for p in self.su_factors))
        gens = tuple(
            g if isinstance(g, CentralGenerator) else CentralGenerator(*g)
            for g in self.central_generators
        )
        object.__setattr__(self, "central_generators", gens)
        if self.torus_rank < 0:
            raise UnsupportedDescriptor("torus rank must be non-negative")
        if any(p < 2 for p in self.su_factors):
            raise UnsupportedDescriptor("SU factor sizes must be at least 2")
        for g in gens:
            if len(g.torus) != self.torus_rank or len(g.factors) != len(self.su_factors):
                raise UnsupportedDescriptor("central generator shape mismatch")
            for p, q in zip(self.su_factors, g.factors):
                if (q * p).denominator != 1:
                    raise UnsupportedDescriptor(
                        f"phase {q} is not a {p}-th root of unity in SU({p})"
                    )
        central_phases(self)  # closure is finite and small; fails loudly if not

    @property
    def n_factors(self) -> int:
        return len(self.su_factors)

    @property
    def has_quotient(self) -> bool:
        return len(central_phases(self)) > 1

    def lift(self) -> "GroupDescriptor":
        """The covering product group G~, i.e. the same factors with K trivial."""
        return replace(self, central_generators=())

    def label(self) -> str:
        parts = []
        if self.torus_rank:
            parts.append(f"T^{self.torus_rank}")
        parts.extend(f"SU({p})" for p in self.su_factors)
        name = " x ".join(parts) if parts else "1"
        if self.has_quotient:
            name += f" / K(order {len(central_phases(self))})"
        return name


@lru_cache(maxsize=None)
def central_phases(descriptor: GroupDescriptor) -> tuple:
    """All elements of K as exact phase vectors (torus fractions then factor
    fractions, each mod 1), identity first, then sorted."""
    dim = descriptor.torus_rank + descriptor.n_factors
    zero = tuple(Fraction(0) for _ in range(dim))
    elems = {zero}
    frontier = [zero]
    gens = [g.phases for g in descriptor.central_generators]
    while frontier:
        base = frontier.pop()
        for g in gens:
            new = tuple((a + b) % 1 for a, b in zip(base, g))
            if new not in elems:
                elems.add(new)
                frontier.append(new)
                if len(elems) > _MAX_CENTRAL_ORDER:
                    raise UnsupportedDescriptor("central subgroup too large")
    return (zero,) + tuple(sorted(elems - {zero}))


# ---------------------------------------------------------------------------
# elements


@dataclass(eq=False)
class GroupElement:
    """One element: r torus angles in [0, 2*pi) plus one SU matrix per factor.

    Treated as an immutable value; operations return fresh elements.
    """

    descriptor: GroupDescriptor
    torus_part: np.ndarray
    factor_parts: tuple

    @property
    def coset_flag(self) -> bool:
        """Whether this element denotes a K-coset rather than a point of G~."""
        return self.descriptor.has_quotient


def make_element(descriptor, torus_part, factor_parts, check=True) -> GroupElement:
    torus = wrap_angle(np.asarray(torus_part, dtype=float).reshape(descriptor.torus_rank))
    factors = tuple(np.asarray(f, dtype=complex) for f in factor_parts)
    if len(factors) != descriptor.n_factors:
        raise DescriptorMismatch("wrong number of factor matrices")
    if check:
        for p, f in zip(descriptor.su_factors, factors):
            if f.shape != (p, p) or not is_special_unitary(f, TAU_UNIT):
                raise DescriptorMismatch(f"factor is not special unitary of size {p}")
    return GroupElement(descriptor, torus, factors)


def identity_element(descriptor: GroupDescriptor) -> GroupElement:
    return GroupElement(
        descriptor,
        np.zeros(descriptor.torus_rank),
        tuple(np.eye(p, dtype=complex) for p in descriptor.su_factors),
    )


def central_element(descriptor: GroupDescriptor, phases) -> GroupElement:
    """Materialize a K element from its phase vector."""
    r = descriptor.torus_rank
    torus = np.array([TWO_PI * float(q) for q in phases[:r]])
    factors = tuple(
        np.exp(2j * math.pi * float(q)) * np.eye(p, dtype=complex)
        for p, q in zip(descriptor.su_factors, phases[r:])
    )
    return GroupElement(descriptor, wrap_angle(torus), factors)


def central_elements(descriptor: GroupDescriptor) -> list:
    return [central_element(descriptor, ph) for ph in central_phases(descriptor)]


def _same_descriptor(x: GroupElement, y: GroupElement):
    if x.descriptor != y.descriptor:
        raise DescriptorMismatch(
            f"{x.descriptor.label()} vs {y.descriptor.label()}"
        )


def multiply(x: GroupElement, y: GroupElement) -> GroupElement:
    _same_descriptor(x, y)
    return GroupElement(
        x.descriptor,
        wrap_angle(x.torus_part + y.torus_part),
        tuple(a @ b for a, b in zip(x.factor_parts, y.factor_parts)),
    )


def inverse(x: GroupElement) -> GroupElement:
    return GroupElement(
        x.descriptor,
        wrap_angle(-x.torus_part),
        tuple(f.conj().T for f in x.factor_parts),
    )


def conjugate(g: GroupElement, x: GroupElement) -> GroupElement:
    """g x g^{-1}.  Torus coordinates are central and unaffected."""
    _same_descriptor(g, x)
    return GroupElement(
        x.descriptor,
        x.torus_part.copy(),
        tuple(a @ b @ a.conj().T for a, b in zip(g.factor_parts, x.factor_parts)),
    )


def _raw_distance(x: GroupElement, y: GroupElement, shift=None) -> float:
    """Sum of per-factor Frobenius norms plus the chordal torus distance.

    ``shift`` optionally left-multiplies x by a K phase vector.
    """
    r = x.descriptor.torus_rank
    d = 0.0
    if r:
        dth = x.torus_part - y.torus_part
        if shift is not None:
            dth = dth + np.array([TWO_PI * float(q) for q in shift[:r]])
        d += float(np.linalg.norm(2.0 * np.sin(0.5 * dth)))
    for i, (a, b) in enumerate(zip(x.factor_parts, y.factor_parts)):
        if shift is not None:
            a = np.exp(2j * math.pi * float(shift[r + i])) * a
        d += float(np.linalg.norm(a - b))
    return d


def distance(x: GroupElement, y: GroupElement) -> float:
    """Bi-invariant distance; for quotient groups the minimum over K-shifts."""
    _same_descriptor(x, y)
    if not x.descriptor.has_quotient:
        return _raw_distance(x, y)
    return min(_raw_distance(x, y, shift=ph) for ph in central_phases(x.descriptor))


# ---------------------------------------------------------------------------
# Haar sampling


def random_special_unitary(n: int, rng) -> np.ndarray:
    """Haar-distributed SU(n) matrix.

    QR of a complex Ginibre matrix with the R-diagonal phases normalized gives
    Haar U(n); dividing by a principal n-th root of the determinant lands in
    SU(n) without disturbing the distribution (the correction is central).
    """
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    q = q * ph
    alpha = np.angle(np.linalg.det(q))
    return q * np.exp(-1j * alpha / n)


def haar_sample(descriptor: GroupDescriptor, seed) -> GroupElement:
    """Random element: Haar on each SU factor, uniform torus angles.

    ``seed`` may be an integer or a numpy Generator; integer seeds are
    deterministic.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    torus = rng.uniform(0.0, TWO_PI, descriptor.torus_rank)
    factors = tuple(random_special_unitary(p, rng) for p in descriptor.su_factors)
    return GroupElement(descriptor, torus, factors)


# ---------------------------------------------------------------------------
# exponential / logarithm


@dataclass(eq=False)
class LieAlgebraElement:
    """Skew-Hermitian matrix per factor plus a torus angle vector.

    Built from a principal logarithm the factor traces are exact multiples of
    2*pi*i (zero when the eigenvalue phases balance); exp is insensitive to
    that multiple.
    """

    descriptor: GroupDescriptor
    torus: np.ndarray
    factors: tuple


def unitary_eigensystem(u: np.ndarray):
    """Eigenphases in (-pi, pi] and an orthonormal eigenbasis of a unitary matrix.

    Uses the complex Schur form, whose basis stays orthonormal even for
    clustered eigenvalues.
    """
    t, z = schur(np.asarray(u, dtype=complex), output="complex")
    return np.angle(np.diag(t)), z


def group_log(x: GroupElement, tau_eig=TAU_EIG) -> LieAlgebraElement:
    """Principal logarithm; raises BranchCut near an eigenvalue of -1."""
    logs = []
    for u in x.factor_parts:
        phases, z = unitary_eigensystem(u)
        if np.min(np.abs(np.exp(1j * phases) + 1.0)) < tau_eig:
            raise BranchCut("eigenvalue within tau_eig of -1")
        a = (z * (1j * phases)) @ z.conj().T
        logs.append(0.5 * (a - a.conj().T))  # exact skew projection
    theta = wrap_signed(x.torus_part)
    if x.descriptor.torus_rank and np.min(np.abs(np.exp(1j * theta) + 1.0)) < tau_eig:
        raise BranchCut("torus angle within tau_eig of pi")
    return LieAlgebraElement(x.descriptor, np.atleast_1d(theta), tuple(logs))


def group_exp(a: LieAlgebraElement) -> GroupElement:
    """Exponential; exactly unitary output via a Hermitian eigendecomposition."""
    factors = []
    for m in a.factors:
        h = -1j * 0.5 * (m - m.conj().T)
        lam, v = np.linalg.eigh(h)
        factors.append((v * np.exp(1j * lam)) @ v.conj().T)
    return GroupElement(a.descriptor, wrap_angle(a.torus), tuple(factors))


def scale_algebra(a: LieAlgebraElement, s: float) -> LieAlgebraElement:
    return LieAlgebraElement(a.descriptor, s * a.torus, tuple(s * m for m in a.factors))


# ---------------------------------------------------------------------------
# catalog


def su(n: int) -> GroupDescriptor:
    return GroupDescriptor(0, (n,), ())


def torus_group(r: int) -> GroupDescriptor:
    return GroupDescriptor(r, (), ())


def central_product_su(m: int, p: int) -> GroupDescriptor:
    """G_{m,p} = SU(p)^m / diagonal Z/p."""
    gen = CentralGenerator((), (Fraction(1, p),) * m)
    return GroupDescriptor(0, (p,) * m, (gen,))


_NAME_PATTERNS = (
    (re.compile(r"^SU\((\d+)\)$"), lambda m: su(int(m.group(1)))),
    (re.compile(r"^T\^?(\d+)$"), lambda m: torus_group(int(m.group(1)))),
    (re.compile(r"^\(S\^?1\)\^?(\d+)$"), lambda m: torus_group(int(m.group(1)))),
    (
        re.compile(r"^G[_\(]\{?(\d+)[,;](\d+)\}?\)?$"),
        lambda m: central_product_su(int(m.group(1)), int(m.group(2))),
    ),
)


def descriptor_from_name(name: str) -> GroupDescriptor:
    """Parse catalog names: SU(n), T^r, (S^1)^r, G_{m,p}.

    Spin(7) is a name the pi1 module recognizes separately; it has no matrix
    substrate here.
    """
    text = name.strip().replace(" ", "")
    for pattern, build in _NAME_PATTERNS:
        m = pattern.match(text)
        if m:
            return build(m)
    raise UnsupportedDescriptor(f"unknown group name {name!r}")
