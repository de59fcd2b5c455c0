"""Maximal torus machinery: the conjugation map sigma_k, its constructive
inverse by joint diagonalization, Weyl regularity, and the section.

For SU(n) the maximal torus is the diagonal subgroup and the Weyl group is
S_n permuting diagonal entries; a preimage [(g, t_1, ..., t_k)] is stored in
Weyl normal form by sorting the joint eigenvalue columns lexicographically
and pinning eigenvector phases, which fixes a canonical representative of
the N(T)-orbit.  Joint diagonalization proceeds by recursive eigenspace
refinement (deterministic; a failure localizes the obstructing matrix)
rather than a one-shot random linear combination.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur

from .errors import (
    IllConditioned,
    NotRegular,
    NotSimultaneouslyDiagonalizable,
    TooLarge,
)
from .matgroup import (
    TAU_UNIT,
    TWO_PI,
    GroupDescriptor,
    GroupElement,
    distance,
    random_special_unitary,
    wrap_angle,
    wrap_signed,
)
from .variety import CommutingTuple, make_tuple, validate_tuple

TAU_CLUST = 1e-7  # eigenvalue clustering threshold on the unit circle

_STABILIZER_CAP = 10**6


@dataclass(eq=False)
class TorusTuple:
    """k points of the maximal torus: per SU(p) factor a (k, p) array of
    angles with rows summing to 0 mod 2*pi, plus a (k, r) array of torus
    coordinates."""

    descriptor: GroupDescriptor
    k: int
    factor_angles: tuple
    torus_angles: np.ndarray


def make_torus_tuple(descriptor, factor_angles, torus_angles, check=True, tol=1e-7) -> TorusTuple:
    fa = tuple(wrap_angle(np.asarray(a, dtype=float)) for a in factor_angles)
    k = fa[0].shape[0] if fa else np.asarray(torus_angles).shape[0]
    ta = wrap_angle(np.asarray(torus_angles, dtype=float).reshape(k, descriptor.torus_rank))
    if len(fa) != descriptor.n_factors:
        raise ValueError("one angle block per SU factor required")
    for p, block in zip(descriptor.su_factors, fa):
        if block.shape != (k, p):
            raise ValueError(f"angle block must be (k, {p})")
        if check and np.max(np.abs(wrap_signed(block.sum(axis=1)))) > tol:
            raise ValueError("per-factor angles must sum to 0 mod 2*pi (det 1)")
    return TorusTuple(descriptor, k, fa, ta)


def random_torus_tuple(descriptor, k: int, seed) -> TorusTuple:
    rng = np.random.default_rng(seed)
    fa = []
    for p in descriptor.su_factors:
        block = rng.uniform(0.0, TWO_PI, (k, p))
        block[:, -1] = -block[:, :-1].sum(axis=1)
        fa.append(wrap_angle(block))
    ta = rng.uniform(0.0, TWO_PI, (k, descriptor.torus_rank))
    return TorusTuple(descriptor, k, tuple(fa), ta)


@dataclass(eq=False)
class SigmaPreimage:
    """A class [g, t_1, ..., t_k] in G x_{N(T)} T^k."""

    conjugator: GroupElement
    torus: TorusTuple


@dataclass
class RegularityReport:
    """Weyl stabilizer of a torus tuple; regular iff only the identity fixes
    every coordinate.  Stabilizer elements are tuples of per-factor
    permutations."""

    regular: bool
    stabilizer: list


# ---------------------------------------------------------------------------
# sigma_k and the section


def sigma_k(pre: SigmaPreimage) -> CommutingTuple:
    """[(g, t_1, ..., t_k)] -> (g t_1 g^-1, ..., g t_k g^-1)."""
    desc = pre.torus.descriptor
    vs = pre.conjugator.factor_parts
    elements = []
    for i in range(pre.torus.k):
        factors = tuple(
            (v * np.exp(1j * block[i])) @ v.conj().T
            for v, block in zip(vs, pre.torus.factor_angles)
        )
        elements.append(GroupElement(desc, pre.torus.torus_angles[i].copy(), factors))
    return make_tuple(desc, elements)


def section_s(g: GroupElement, k: int) -> SigmaPreimage:
    """[g] -> [g, (1_G, ..., 1_G)]; composing with sigma_k is constantly the
    trivial representation."""
    desc = g.descriptor
    fa = tuple(np.zeros((k, p)) for p in desc.su_factors)
    ta = np.zeros((k, desc.torus_rank))
    return SigmaPreimage(g, TorusTuple(desc, k, fa, ta))


# ---------------------------------------------------------------------------
# joint diagonalization


def _cluster_phases(phases: np.ndarray, threshold: float):
    """Split angles in [0, 2*pi) into circular clusters at gaps > threshold.

    Returns index arrays.  A chained cluster wider than 10x the threshold is
    ambiguous and raises IllConditioned.
    """
    n = len(phases)
    order = np.argsort(phases, kind="stable")
    sph = phases[order]
    gaps = np.append(np.diff(sph), sph[0] + TWO_PI - sph[-1])
    breaks = set(np.flatnonzero(gaps > threshold).tolist())
    if not breaks:
        # gaps sum to 2*pi, so for n <= a few dozen this cannot happen
        raise IllConditioned("no eigenvalue gap exceeds the clustering threshold")
    start = (max(breaks) + 1) % n
    clusters, current, span = [], [], 0.0
    for t in range(n):
        pos = (start + t) % n
        current.append(order[pos])
        if pos in breaks:
            if span > 10 * threshold:
                raise IllConditioned("chained eigenvalue cluster is ambiguous")
            clusters.append(np.array(current, dtype=int))
            current, span = [], 0.0
        else:
            span += gaps[pos]
    return clusters


def joint_diagonalize(
    t: CommutingTuple,
    tol: float = 1e-9,
    tau_clust: float = TAU_CLUST,
    mixing_seed=None,
) -> SigmaPreimage:
    """Common eigenbasis of the (lifted) coordinates of a commuting tuple.

    Refines eigenspaces recursively: diagonalize x_1, split by clustered
    eigenphases, refine each cluster by x_2, and so on.  The returned
    conjugator V satisfies x_i = V D_i V^-1 (equivalently
    ||V^-1 x_i V - D_i|| <= 10 tol), so sigma_k of the result reproduces the
    input.  A residual above 10*tol after refinement means the tuple has no
    commuting lift, e.g. a nonzero fingerprint.

    ``mixing_seed`` reruns the computation through a random unitary change of
    frame (undone at the end); independent seeds give numerically independent
    diagonalizations of the same tuple.
    """
    report = validate_tuple(t, tol)
    if not report.passed:
        raise NotSimultaneouslyDiagonalizable(
            f"tuple residual {report.residual:.3e} exceeds tol={tol:.3e}"
        )
    desc = t.descriptor
    k = t.k
    rng = None if mixing_seed is None else np.random.default_rng(mixing_seed)

    factor_vs = []
    factor_angles = []
    for f, p in enumerate(desc.su_factors):
        mats = [np.asarray(x.factor_parts[f]) for x in t.elements]
        if rng is not None:
            h = random_special_unitary(p, rng)
            work = [h @ u @ h.conj().T for u in mats]
        else:
            h = None
            work = mats
        blocks = [np.eye(p, dtype=complex)]
        for u in work:
            refined = []
            for basis in blocks:
                if basis.shape[1] == 1:
                    refined.append(basis)
                    continue
                m = basis.conj().T @ u @ basis
                tri, z = schur(m, output="complex")
                phases = wrap_angle(np.angle(np.diag(tri)))
                for idx in _cluster_phases(phases, tau_clust):
                    refined.append(basis @ z[:, idx])
            blocks = refined
        v = np.hstack(blocks)
        if h is not None:
            v = h.conj().T @ v

        angles = np.zeros((k, p))
        for l, u in enumerate(mats):
            d = v.conj().T @ u @ v
            off = d - np.diag(np.diag(d))
            resid = float(np.linalg.norm(off))
            if resid > 10 * tol:
                raise NotSimultaneouslyDiagonalizable(
                    f"factor {f}, coordinate {l}: off-diagonal residual {resid:.3e}"
                )
            angles[l] = wrap_angle(np.angle(np.diag(d)))

        perm = np.lexsort(angles[::-1])  # first coordinate is the primary key
        v = v[:, perm]
        angles = angles[:, perm]
        alpha = np.angle(np.linalg.det(v))
        v[:, -1] *= np.exp(-1j * alpha)
        factor_vs.append(v)
        factor_angles.append(angles)

    conj = GroupElement(desc, np.zeros(desc.torus_rank), tuple(factor_vs))
    ta = np.array([x.torus_part for x in t.elements]).reshape(k, desc.torus_rank)
    torus = TorusTuple(desc, k, tuple(factor_angles), wrap_angle(ta))
    return SigmaPreimage(conj, torus)


# ---------------------------------------------------------------------------
# regularity


def _column_blocks(block: np.ndarray, tol: float):
    """Group the p columns of a (k, p) angle array by circular equality."""
    p = block.shape[1]
    parent = list(range(p))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(p):
        for b in range(a + 1, p):
            delta = wrap_signed(block[:, a] - block[:, b])
            if np.max(np.abs(np.atleast_1d(delta))) <= tol:
                parent[find(a)] = find(b)
    groups = {}
    for j in range(p):
        groups.setdefault(find(j), []).append(j)
    return list(groups.values())


def is_regular(torus: TorusTuple, tol: float = TAU_CLUST) -> RegularityReport:
    """Exact Weyl stabilizer: a permutation fixes the tuple iff it permutes
    within groups of identical joint angle columns, so the stabilizer is the
    product of the symmetric groups of those blocks (per factor)."""
    per_factor = []
    total = 1
    for block in torus.factor_angles:
        blocks = _column_blocks(block, tol)
        size = 1
        for b in blocks:
            for i in range(2, len(b) + 1):
                size *= i
        total *= size
        per_factor.append(blocks)
        if total > _STABILIZER_CAP:
            raise TooLarge(f"stabilizer order exceeds {_STABILIZER_CAP}")
    factor_perms = []
    for blocks, p in zip(per_factor, torus.descriptor.su_factors):
        perms = []
        for assignment in itertools.product(
            *[itertools.permutations(b) for b in blocks]
        ):
            perm = [0] * p
            for block, target in zip(blocks, assignment):
                for src, dst in zip(block, target):
                    perm[src] = dst
            perms.append(tuple(perm))
        factor_perms.append(perms)
    stabilizer = [tuple(w) for w in itertools.product(*factor_perms)]
    return RegularityReport(regular=len(stabilizer) == 1, stabilizer=stabilizer)


def permutation_cycles(perm) -> str:
    """Cycle notation, fixed points included, e.g. (0 1)(2)."""
    seen, out = set(), []
    for start in range(len(perm)):
        if start in seen:
            continue
        cycle, x = [], start
        while x not in seen:
            seen.add(x)
            cycle.append(x)
            x = perm[x]
        out.append("(" + " ".join(str(c) for c in cycle) + ")")
    return "".join(out)


# ---------------------------------------------------------------------------
# normal form and the inverse on the regular part


def weyl_normal_form(pre: SigmaPreimage) -> SigmaPreimage:
    """Canonical representative of the N(T)-orbit of a preimage.

    Columns are sorted lexicographically by joint angle vector (ties by
    column index, via stable sort); the residual T-freedom is fixed by making
    the largest entry of each of the first p-1 eigenvector columns real
    positive and forcing det = 1 on the last.  Unique for regular tuples.
    """
    desc = pre.torus.descriptor
    vs = []
    fas = []
    for v, angles in zip(pre.conjugator.factor_parts, pre.torus.factor_angles):
        angles = wrap_angle(np.asarray(angles, dtype=float))
        v = np.array(v, dtype=complex)
        perm = np.lexsort(angles[::-1])
        v = v[:, perm]
        angles = angles[:, perm]
        p = v.shape[0]
        for j in range(p - 1):
            col = v[:, j]
            lead = col[int(np.argmax(np.abs(col)))]
            v[:, j] = col * (lead.conjugate() / abs(lead))
        alpha = np.angle(np.linalg.det(v))
        v[:, -1] *= np.exp(-1j * alpha)
        vs.append(v)
        fas.append(angles)
    conj = GroupElement(desc, np.zeros(desc.torus_rank), tuple(vs))
    torus = TorusTuple(desc, pre.torus.k, tuple(fas), wrap_angle(pre.torus.torus_angles))
    return SigmaPreimage(conj, torus)


def sigma_inverse_regular(t: CommutingTuple, tol: float = 1e-9, mixing_seed=None) -> SigmaPreimage:
    """The unique Weyl-normal-form preimage of a regular tuple.

    Raises NotRegular when the Weyl stabilizer of the diagonalized torus part
    is nontrivial; propagates joint_diagonalize failures.
    """
    pre = joint_diagonalize(t, tol=tol, mixing_seed=mixing_seed)
    report = is_regular(pre.torus)
    if not report.regular:
        raise NotRegular(f"stabilizer has order {len(report.stabilizer)}")
    return weyl_normal_form(pre)


def preimage_distance(a: SigmaPreimage, b: SigmaPreimage) -> float:
    """Conjugator distance plus chordal distance of all torus angles."""
    d = distance(a.conjugator, b.conjugator)
    for x, y in zip(a.torus.factor_angles, b.torus.factor_angles):
        d += float(np.linalg.norm(2.0 * np.sin(0.5 * (x - y))))
    d += float(np.linalg.norm(2.0 * np.sin(0.5 * (a.torus.torus_angles - b.torus.torus_angles))))
    return d
