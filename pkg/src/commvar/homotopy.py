"""Explicit paths and homotopies inside the commuting variety.

Loops are polylines of group elements.  Closed null-winding loops are
contracted by discrete curve shortening (alternating even/odd midpoint
sweeps with the base vertex pinned) until the loop fits in a small ball,
then coned to the base point along geodesics; every intermediate stage is a
genuine polyline loop.  The coordinate-loop grid realizes the contraction of
a one-coordinate tuple loop inside the variety: each grid point has a single
nontrivial coordinate, so it commutes exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .central import classify_component
from .errors import (
    AmbiguousWinding,
    BadArguments,
    BranchCut,
    NontrivialWinding,
    NotInIdentityComponent,
    StalledContraction,
)
from .matgroup import (
    TAU_EIG,
    TWO_PI,
    GroupDescriptor,
    GroupElement,
    LieAlgebraElement,
    distance,
    group_exp,
    group_log,
    identity_element,
    multiply,
    inverse,
    scale_algebra,
    wrap_angle,
    wrap_signed,
)
from .variety import TAU_COMM, CommutingTuple, make_tuple
from .weyl import joint_diagonalize

DELTA_STEP = 0.5   # polyline step bound, inside the injectivity radius
DELTA_BALL = 0.2   # ball radius at which coning to the base point is safe


@dataclass
class ContractionParams:
    delta_step: float = DELTA_STEP
    delta_ball: float = DELTA_BALL
    max_sweeps: int = 10_000
    stall_sweeps: int = 500
    tol_final: float = 1e-6
    cone_steps: int = 8


@dataclass(eq=False)
class GroupPath:
    """Polyline with vertices elements[0..M]; closed paths start and end at
    the identity."""

    descriptor: GroupDescriptor
    elements: tuple
    closed: bool

    def __len__(self):
        return len(self.elements)

    @property
    def segments(self) -> int:
        return len(self.elements) - 1


def make_path(descriptor, elements, closed, delta_step=DELTA_STEP, check=True) -> GroupPath:
    elements = tuple(elements)
    if len(elements) < 2:
        raise BadArguments("a path needs at least two vertices")
    if check:
        for u, v in zip(elements, elements[1:]):
            if distance(u, v) > delta_step + 1e-9:
                raise BadArguments(f"consecutive vertices farther than {delta_step}")
        if closed:
            ident = identity_element(descriptor)
            if distance(elements[0], ident) > 1e-6 or distance(elements[-1], ident) > 1e-6:
                raise BadArguments("closed loops must be anchored at the identity")
    return GroupPath(descriptor, elements, closed)


# ---------------------------------------------------------------------------
# stacked-array helpers (vertices as batched matrices)


def _stack(path_elements, descriptor):
    factors = [
        np.stack([np.asarray(v.factor_parts[f]) for v in path_elements])
        for f in range(descriptor.n_factors)
    ]
    torus = np.stack([v.torus_part for v in path_elements]).reshape(
        len(path_elements), descriptor.torus_rank
    )
    return factors, torus


def _unstack(descriptor, factors, torus, closed) -> GroupPath:
    n = torus.shape[0]
    elements = tuple(
        GroupElement(
            descriptor,
            wrap_angle(torus[i]),
            tuple(f[i].copy() for f in factors),
        )
        for i in range(n)
    )
    return GroupPath(descriptor, elements, closed)


def _principal_sqrt(stack: np.ndarray) -> np.ndarray:
    """Principal square roots of a stack of unitary matrices."""
    w, vec = np.linalg.eig(stack)
    if np.min(np.abs(w + 1.0)) < TAU_EIG:
        raise BranchCut("midpoint would cross the -1 branch cut")
    s = np.exp(0.5j * np.angle(w))
    return (vec * s[:, None, :]) @ np.linalg.inv(vec)


def _midpoints(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Geodesic midpoints x (x^-1 y)^{1/2} for stacks of unitaries."""
    return x @ _principal_sqrt(np.conjugate(np.transpose(x, (0, 2, 1))) @ y)


def _pairwise_diameter(factors, torus) -> float:
    """Max pairwise distance among the vertices, in the summed product metric."""
    n = torus.shape[0]
    total = np.zeros((n, n))
    for f in factors:
        flat = f.reshape(n, -1)
        sq = np.sum(np.abs(flat) ** 2, axis=1)
        gram = flat @ flat.conj().T
        d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * gram.real, 0.0)
        total += np.sqrt(d2)
    if torus.shape[1]:
        chord = 2.0 * np.sin(0.5 * (torus[:, None, :] - torus[None, :, :]))
        total += np.linalg.norm(chord, axis=2)
    return float(total.max())


def _max_displacement(factors_a, torus_a, factors_b, torus_b) -> float:
    n = torus_a.shape[0]
    per_vertex = np.zeros(n)
    for fa, fb in zip(factors_a, factors_b):
        per_vertex += np.linalg.norm((fa - fb).reshape(n, -1), axis=1)
    if torus_a.shape[1]:
        per_vertex += np.linalg.norm(
            2.0 * np.sin(0.5 * (torus_a - torus_b)), axis=1
        )
    return float(per_vertex.max())


# ---------------------------------------------------------------------------
# winding numbers


def winding_vector(loop: GroupPath) -> np.ndarray:
    """Net torus winding of a closed polyline, one integer per S^1 coordinate.

    Steps are read off as signed increments in (-pi, pi]; a step at pi is
    ambiguous, as is a total farther than 0.1 from an integer multiple of
    2*pi.
    """
    if not loop.closed:
        raise BadArguments("winding numbers need a closed loop")
    r = loop.descriptor.torus_rank
    if r == 0:
        return np.zeros(0, dtype=int)
    theta = np.stack([v.torus_part for v in loop.elements])
    inc = wrap_signed(np.diff(theta, axis=0))
    if np.any(np.abs(inc) > math.pi - 1e-7):
        raise AmbiguousWinding("a polyline step reaches half the circle")
    total = inc.sum(axis=0) / TWO_PI
    w = np.rint(total)
    if np.any(np.abs(total - w) > 0.1):
        raise AmbiguousWinding("accumulated winding is not integral")
    return w.astype(int)


# ---------------------------------------------------------------------------
# loop contraction


def contract_loop(loop: GroupPath, params: ContractionParams | None = None) -> list:
    """Contract a closed null-winding loop to the base point.

    Returns the list of stages, starting with the input loop and ending with
    the constant loop at the identity.  Raises NontrivialWinding up front
    when a torus winding obstructs, StalledContraction when the diameter
    stops decreasing.
    """
    params = params or ContractionParams()
    if not loop.closed:
        raise BadArguments("only closed loops can be contracted")
    if np.any(winding_vector(loop) != 0):
        raise NontrivialWinding("torus winding obstructs contraction")
    desc = loop.descriptor
    factors, torus = _stack(loop.elements, desc)
    m = torus.shape[0] - 1

    diameter = _pairwise_diameter(factors, torus)
    if diameter <= params.tol_final:
        return [loop]

    stages = [loop]
    interior = np.arange(1, m)
    odd = interior[interior % 2 == 1]
    even = interior[interior % 2 == 0]
    best = diameter
    stall = 0
    sweeps = 0
    while diameter > params.delta_ball:
        if sweeps >= params.max_sweeps:
            raise StalledContraction(f"no convergence within {params.max_sweeps} sweeps")
        for idx in (odd, even):
            if len(idx) == 0:
                continue
            for f in range(len(factors)):
                factors[f][idx] = _midpoints(factors[f][idx - 1], factors[f][idx + 1])
            if torus.shape[1]:
                left, right = torus[idx - 1], torus[idx + 1]
                torus[idx] = wrap_angle(left + 0.5 * wrap_signed(right - left))
        sweeps += 1
        diameter = _pairwise_diameter(factors, torus)
        stages.append(_unstack(desc, factors, torus, True))
        if diameter < best - 1e-12:
            best = diameter
            stall = 0
        else:
            stall += 1
            if stall > params.stall_sweeps:
                raise StalledContraction(
                    f"diameter stuck near {best:.3e} for {params.stall_sweeps} sweeps"
                )

    # cone to the base point: all vertices are within delta_ball of the
    # identity, so their principal logs exist and scale to zero
    logs = []
    for f in factors:
        w, vec = np.linalg.eig(f)
        if np.min(np.abs(w + 1.0)) < TAU_EIG:
            raise BranchCut("cone phase crossed the -1 branch cut")
        logs.append((np.angle(w), vec, np.linalg.inv(vec)))
    signed = wrap_signed(torus) if torus.shape[1] else torus
    for step in range(1, params.cone_steps):
        shrink = 1.0 - step / params.cone_steps
        new_factors = [
            (vec * np.exp(1j * shrink * ph)[:, None, :]) @ inv
            for ph, vec, inv in logs
        ]
        stages.append(_unstack(desc, new_factors, wrap_angle(shrink * signed), True))
    ident = identity_element(desc)
    stages.append(GroupPath(desc, tuple(ident for _ in range(m + 1)), True))
    return stages


def loop_diameter(path: GroupPath) -> float:
    factors, torus = _stack(path.elements, path.descriptor)
    return _pairwise_diameter(factors, torus)


def refine_loop(path: GroupPath) -> GroupPath:
    """Insert the geodesic midpoint of every segment (doubles the resolution;
    winding numbers are unchanged)."""
    desc = path.descriptor
    factors, torus = _stack(path.elements, desc)
    mid_f = [_midpoints(f[:-1], f[1:]) for f in factors]
    mid_t = wrap_angle(torus[:-1] + 0.5 * wrap_signed(torus[1:] - torus[:-1]))
    out = []
    n = torus.shape[0]
    for i in range(n - 1):
        out.append(path.elements[i])
        out.append(
            GroupElement(desc, mid_t[i], tuple(f[i].copy() for f in mid_f))
        )
    out.append(path.elements[-1])
    return GroupPath(desc, tuple(out), path.closed)


def random_loop(
    descriptor: GroupDescriptor,
    segments: int,
    seed,
    amplitude: float = 0.6,
    winding=None,
) -> GroupPath:
    """A random closed polyline based at the identity: the exponential of a
    Gaussian polygonal bridge in the Lie algebra, scaled so steps stay well
    inside delta_step.  Optional integer windings add torus ramps."""
    rng = np.random.default_rng(seed)
    m = int(segments)
    if m < 4:
        raise BadArguments("need at least 4 segments")
    frac = np.linspace(0.0, 1.0, m + 1)
    factor_stacks = []
    for p in descriptor.su_factors:
        steps = (
            rng.standard_normal((m, p, p)) + 1j * rng.standard_normal((m, p, p))
        ) / math.sqrt(2)
        steps = 0.5 * (steps - np.conjugate(np.transpose(steps, (0, 2, 1))))
        tr = np.trace(steps, axis1=1, axis2=2) / p
        steps -= tr[:, None, None] * np.eye(p)[None]
        bridge = np.concatenate([np.zeros((1, p, p), dtype=complex), np.cumsum(steps, axis=0)])
        bridge -= frac[:, None, None] * bridge[-1]
        norms = np.linalg.norm(bridge.reshape(m + 1, -1), axis=1)
        step_norms = np.linalg.norm((bridge[1:] - bridge[:-1]).reshape(m, -1), axis=1)
        scale = min(
            amplitude / max(norms.max(), 1e-12),
            0.22 / max(step_norms.max(), 1e-12),
        )
        bridge *= scale
        h = -1j * bridge
        lam, vec = np.linalg.eigh(h)
        stack = (vec * np.exp(1j * lam)[:, None, :]) @ np.conjugate(
            np.transpose(vec, (0, 2, 1))
        )
        factor_stacks.append(stack)
    r = descriptor.torus_rank
    torus = np.zeros((m + 1, r))
    if r:
        steps = rng.standard_normal((m, r))
        bridge = np.concatenate([np.zeros((1, r)), np.cumsum(steps, axis=0)])
        bridge -= frac[:, None] * bridge[-1]
        step_sizes = np.abs(np.diff(bridge, axis=0)).max() or 1.0
        bridge *= min(amplitude, 0.2 / step_sizes)
        torus = bridge
        if winding is not None:
            w = np.asarray(winding, dtype=float).reshape(r)
            if np.any(np.abs(w) * TWO_PI / m > 0.25):
                raise BadArguments("too few segments for the requested winding")
            torus = torus + frac[:, None] * (TWO_PI * w[None, :])
    ident = identity_element(descriptor)
    elements = [ident]
    for i in range(1, m):
        elements.append(
            GroupElement(
                descriptor,
                wrap_angle(torus[i]),
                tuple(f[i].copy() for f in factor_stacks),
            )
        )
    elements.append(ident)
    return make_path(descriptor, elements, closed=True)


# ---------------------------------------------------------------------------
# the coordinate-loop homotopy grid


@dataclass(eq=False)
class TupleHomotopy:
    """(S+1) x (M+1) grid of commuting tuples: row 0 is the initial tuple
    loop, row S is constant at the target."""

    descriptor: GroupDescriptor
    rows: tuple

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]))

    def max_residual(self) -> float:
        return max(t.residual for row in self.rows for t in row)


def coordinate_loop_homotopy(
    gamma: GroupPath,
    a: int,
    k: int,
    s_steps: int | None = None,
    params: ContractionParams | None = None,
) -> TupleHomotopy:
    """Contract the tuple loop whose a-th coordinate traces gamma and whose
    other coordinates sit at the identity.

    Every grid tuple has a single nontrivial coordinate, so its commutation
    residual is exactly zero.  Row 0 is the loop itself, row S the constant
    trivial tuple.
    """
    if not 0 <= a < k:
        raise BadArguments(f"coordinate index {a} outside 0..{k - 1}")
    stages = contract_loop(gamma, params)
    s = s_steps if s_steps is not None else gamma.segments
    picks = np.linspace(0, len(stages) - 1, s + 1).round().astype(int)
    desc = gamma.descriptor
    ident = identity_element(desc)
    rows = []
    for stage_idx in picks:
        stage = stages[stage_idx]
        row = []
        for v in stage.elements:
            elements = tuple(v if i == a else ident for i in range(k))
            row.append(make_tuple(desc, elements))
        rows.append(tuple(row))
    return TupleHomotopy(desc, tuple(rows))


# ---------------------------------------------------------------------------
# connecting a tuple to the trivial representation


def _conjugator_path(g: GroupElement, steps: int, attempts: int = 6):
    """Elements gamma(s_j) of a path from the identity to g, built from at
    most two exponential segments (the second kicks in when g has an
    eigenvalue pinned at -1)."""
    grid = np.linspace(0.0, 1.0, steps + 1)
    try:
        lg = group_log(g)
        return [group_exp(scale_algebra(lg, s)) for s in grid]
    except BranchCut:
        pass
    for attempt in range(1, attempts + 1):
        rng = np.random.default_rng(attempt)
        xi_factors = []
        for p in g.descriptor.su_factors:
            x = rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p))
            x = 0.25 * (x - x.conj().T)
            x -= (np.trace(x) / p) * np.eye(p)
            xi_factors.append(x)
        xi = LieAlgebraElement(
            g.descriptor, np.zeros(g.descriptor.torus_rank), tuple(xi_factors)
        )
        w = group_exp(xi)
        try:
            rest = group_log(multiply(inverse(w), g))
        except BranchCut:
            continue
        out = []
        for s in grid:
            if s <= 0.5:
                out.append(group_exp(scale_algebra(xi, 2.0 * s)))
            else:
                out.append(multiply(w, group_exp(scale_algebra(rest, 2.0 * s - 1.0))))
        return out
    raise BranchCut("could not split the conjugator into two log-safe segments")


def _balanced_signed(angles: np.ndarray) -> np.ndarray:
    """Signed representatives of a det-1 phase row that sum to exactly zero
    (shift whole turns between entries as needed)."""
    s = wrap_signed(np.asarray(angles, dtype=float))
    m = int(round(s.sum() / TWO_PI))
    order = np.argsort(s)
    if m > 0:
        for j in order[::-1][:m]:
            s[j] -= TWO_PI
    elif m < 0:
        for j in order[: -m]:
            s[j] += TWO_PI
    return s


def path_to_identity(t: CommutingTuple, tol: float = TAU_COMM, steps: int = 16) -> list:
    """A polyline of commuting tuples from t to the trivial representation.

    Stage 1 transports the common conjugator to the identity along its
    exponential path, keeping all coordinates simultaneously diagonalized up
    to the moving frame; stage 2 shrinks the torus angles linearly.  Each
    waypoint commutes by construction.
    """
    cls = classify_component(t, tol)
    if not cls.is_identity:
        raise NotInIdentityComponent(str(cls))
    pre = joint_diagonalize(t, tol=tol)
    desc = t.descriptor
    k = t.k
    balanced = [
        np.stack([_balanced_signed(block[i]) for i in range(k)])
        for block in pre.torus.factor_angles
    ]
    torus_signed = wrap_signed(pre.torus.torus_angles) if desc.torus_rank else pre.torus.torus_angles

    def diagonal_tuple(shrink: float, conj: GroupElement | None) -> CommutingTuple:
        elements = []
        for i in range(k):
            factors = []
            for f in range(desc.n_factors):
                d = np.diag(np.exp(1j * shrink * balanced[f][i])).astype(complex)
                if conj is not None:
                    v = conj.factor_parts[f]
                    d = v @ d @ v.conj().T
                factors.append(d)
            elements.append(
                GroupElement(desc, wrap_angle(shrink * torus_signed[i]), tuple(factors))
            )
        return make_tuple(desc, elements)

    conjugators = _conjugator_path(pre.conjugator, steps)
    waypoints = [t]
    for conj in conjugators[::-1][1:]:  # from g down to the identity
        waypoints.append(diagonal_tuple(1.0, conj))
    for step in range(1, steps + 1):
        waypoints.append(diagonal_tuple(1.0 - step / steps, None))
    return waypoints
