"""Fundamental-group bookkeeping.

pi1 of a supported group is computed from its covering data by integer
lattice arithmetic: paths from the identity to elements of K are tracked by
their torus displacement (a rational vector) and their central phase in each
simply connected factor (a rational mod 1), and pi1(G) is the quotient of the
lattice those vectors generate by the factor-phase identifications.  Smith
normal form over exact integers turns that quotient into invariant factors.

pi1 of the commuting variety itself: the identity component contributes
pi1(G)^k; the exotic components of G_{m,p} contribute the fixed finite group
(Z/p)^{m-1} x E_p independently of k, and the Spin(7) catalog entry
contributes (Z/2)^4 for triples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .central import ComponentClass
from .errors import BadArguments, NotExact, UnsupportedDescriptor, UnsupportedExotic
from .matgroup import SPIN7, GroupDescriptor, central_phases
from .variety import is_central_product


# ---------------------------------------------------------------------------
# exact integer lattice arithmetic (small matrices, python ints)


def _obj(m) -> np.ndarray:
    a = np.array(m, dtype=object)
    if a.ndim == 1:
        a = a.reshape(len(a), 1) if len(a) else a.reshape(0, 1)
    return a


def _eye(n) -> np.ndarray:
    a = np.zeros((n, n), dtype=object)
    for i in range(n):
        a[i, i] = 1
    return a


def smith_normal_form(m) -> tuple:
    """(D, U, V) with U m V = D diagonal, U and V unimodular, and the diagonal
    entries nonnegative with d_i | d_{i+1}."""
    d = _obj(m).copy() if np.size(m) else np.zeros(np.shape(m), dtype=object)
    rows, cols = d.shape if d.ndim == 2 else (len(d), 1)
    d = d.reshape(rows, cols)
    u = _eye(rows)
    v = _eye(cols)

    def pivot_at(t):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if d[i, j] != 0 and (best is None or abs(d[i, j]) < abs(d[best[0], best[1]])):
                    best = (i, j)
        return best

    t = 0
    while t < min(rows, cols):
        loc = pivot_at(t)
        if loc is None:
            break
        i, j = loc
        if i != t:
            d[[t, i]] = d[[i, t]]
            u[[t, i]] = u[[i, t]]
        if j != t:
            d[:, [t, j]] = d[:, [j, t]]
            v[:, [t, j]] = v[:, [j, t]]
        dirty = False
        for i in range(t + 1, rows):
            if d[i, t] != 0:
                q = d[i, t] // d[t, t]
                d[i] = d[i] - q * d[t]
                u[i] = u[i] - q * u[t]
                if d[i, t] != 0:
                    dirty = True
        for j in range(t + 1, cols):
            if d[t, j] != 0:
                q = d[t, j] // d[t, t]
                d[:, j] = d[:, j] - q * d[:, t]
                v[:, j] = v[:, j] - q * v[:, t]
                if d[t, j] != 0:
                    dirty = True
        if dirty:
            continue
        # divisibility sweep: fold in any entry the pivot misses
        bad = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if d[i, j] % d[t, t] != 0:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            d[t] = d[t] + d[bad]
            u[t] = u[t] + u[bad]
            continue
        if d[t, t] < 0:
            d[t] = -d[t]
            u[t] = -u[t]
        t += 1
    return d, u, v


def _row_hnf(m: np.ndarray) -> np.ndarray:
    """Unique row Hermite normal form of the lattice spanned by the rows."""
    a = _obj(m).copy()
    if a.size == 0:
        return a.reshape(0, a.shape[1] if a.ndim == 2 else 0)
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        piv = None
        while True:
            nz = [i for i in range(r, rows) if a[i, c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(a[i, c]))
            if i0 != r:
                a[[r, i0]] = a[[i0, r]]
            done = True
            for i in range(r + 1, rows):
                if a[i, c] != 0:
                    a[i] = a[i] - (a[i, c] // a[r, c]) * a[r]
                    done = False
            if done:
                piv = r
                break
        if piv is None:
            continue
        if a[r, c] < 0:
            a[r] = -a[r]
        for i in range(r):
            a[i] = a[i] - (a[i, c] // a[r, c]) * a[r]
        r += 1
    return a[:r]


def _column_hnf(m: np.ndarray) -> np.ndarray:
    return _row_hnf(_obj(m).T).T


def _lattice_equal(gens_a: np.ndarray, gens_b: np.ndarray) -> bool:
    """Do two column-generating sets span the same integer lattice?"""
    ha = _column_hnf(gens_a)
    hb = _column_hnf(gens_b)
    return ha.shape == hb.shape and bool(np.array_equal(ha, hb))


def _kernel_basis(m: np.ndarray) -> np.ndarray:
    """Columns spanning the integer kernel of m."""
    m = _obj(m)
    if m.shape[1] == 0:
        return np.zeros((0, 0), dtype=object)
    d, _, v = smith_normal_form(m)
    rank = sum(1 for i in range(min(d.shape)) if d[i, i] != 0)
    return v[:, rank:]


def _solve_integer(b: np.ndarray, target: np.ndarray) -> np.ndarray:
    """x with b x = target, exact; b must have full column rank and contain
    target in its column lattice."""
    d, u, v = smith_normal_form(b)
    rhs = u @ target
    n = b.shape[1]
    y = np.zeros((n, rhs.shape[1]), dtype=object)
    for i in range(n):
        if d[i, i] == 0:
            raise ValueError("matrix is column rank deficient")
        for j in range(rhs.shape[1]):
            q, r = divmod(rhs[i, j], d[i, i])
            if r != 0:
                raise ValueError("target outside the column lattice")
            y[i, j] = q
    for i in range(n, rhs.shape[0]):
        if any(rhs[i, j] != 0 for j in range(rhs.shape[1])):
            raise ValueError("target outside the column lattice")
    return v @ y


# ---------------------------------------------------------------------------
# finitely generated abelian groups


@dataclass(frozen=True)
class FgAbelianGroup:
    """Free rank plus invariant factors d_1 | d_2 | ... (each >= 2)."""

    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if any(d < 2 for d in self.torsion):
            raise ValueError("invariant factors must be >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError("invariant factors must form a divisibility chain")

    @classmethod
    def from_orders(cls, free_rank: int, orders) -> "FgAbelianGroup":
        """Normalize an arbitrary list of cyclic orders to invariant factors.

        The largest invariant factor takes the largest power of each prime,
        the next one the second largest, and so on.
        """
        exps = {}
        for d in orders:
            d = int(d)
            if d == 1:
                continue
            f = 2
            local = {}
            while f * f <= d:
                while d % f == 0:
                    local[f] = local.get(f, 0) + 1
                    d //= f
                f += 1
            if d > 1:
                local[d] = local.get(d, 0) + 1
            for p, e in local.items():
                exps.setdefault(p, []).append(e)
        depth = max((len(v) for v in exps.values()), default=0)
        chain = []
        for slot in range(depth):
            factor = 1
            for p, es in exps.items():
                es_sorted = sorted(es, reverse=True)
                if slot < len(es_sorted):
                    factor *= p ** es_sorted[slot]
            chain.append(factor)
        return cls(free_rank, tuple(sorted(chain)))

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def torsion_order(self) -> int:
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def order(self):
        """Group order, or None when infinite."""
        return None if self.free_rank else self.torsion_order()

    def power(self, k: int) -> "FgAbelianGroup":
        """The k-fold direct power; each invariant factor repeats k times."""
        return FgAbelianGroup(self.free_rank * k, tuple(sorted(self.torsion * k)))

    def label(self) -> str:
        if self.is_trivial:
            return "1"
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        i = 0
        while i < len(self.torsion):
            d = self.torsion[i]
            j = i
            while j < len(self.torsion) and self.torsion[j] == d:
                j += 1
            count = j - i
            parts.append(f"Z/{d}" if count == 1 else f"(Z/{d})^{count}")
            i = j
        return " x ".join(parts)


@dataclass(frozen=True)
class FiniteGroupTag:
    """An opaque finite (possibly nonabelian) group value: name, exact order,
    and a presentation-style hint.  The artifact reports these, it does not
    compute with them."""

    name: str
    order: int
    presentation: str = ""


def trivial_group() -> FgAbelianGroup:
    return FgAbelianGroup(0, ())


# ---------------------------------------------------------------------------
# pi1 of the group and of the commuting variety


def pi1_of_group(descriptor: GroupDescriptor) -> FgAbelianGroup:
    """pi1 of ((S^1)^r x prod SU(p_i)) / K via Smith normal form.

    Generators of the path lattice: integer torus displacements, the mod-1
    identifications of the factor phases, and one rational vector per K
    generator; pi1 is that lattice modulo the factor identifications.
    """
    r = descriptor.torus_rank
    s = descriptor.n_factors
    dim = r + s
    if dim == 0:
        return trivial_group()
    fracs = [g.phases for g in descriptor.central_generators]
    denom = 1
    for ph in fracs:
        for q in ph:
            denom = lcm(denom, q.denominator)
    cols = []
    for i in range(dim):
        e = [0] * dim
        e[i] = denom
        cols.append(e)
    for ph in fracs:
        cols.append([int(q * denom) for q in ph])
    gens = _obj(cols).T  # dim x (dim + #gens)
    basis = _column_hnf(gens)  # dim x dim, full rank (contains denom * I)
    relations = []
    for l in range(s):
        e = np.zeros((dim, 1), dtype=object)
        e[r + l, 0] = denom
        relations.append(_solve_integer(basis, e))
    if relations:
        rel = np.hstack(relations)
        d, _, _ = smith_normal_form(rel)
        diag = [int(d[i, i]) for i in range(min(d.shape)) if d[i, i] != 0]
        free = dim - len(diag)
        torsion = [x for x in diag if x > 1]
    else:
        free, torsion = dim, []
    return FgAbelianGroup.from_orders(free, torsion)


def _exotic_tag(m: int, p: int) -> FiniteGroupTag:
    ep_name = "Q8" if p == 2 else f"E_{p}"
    ep_pres = (
        "<i, j | i^4 = 1, i^2 = j^2, j i j^-1 = i^-1>"
        if p == 2
        else f"<c, s, z | c^{p} = s^{p} = z^{p} = 1, [c, s] = z central>"
    )
    if m == 1:
        return FiniteGroupTag(ep_name, p**3, ep_pres)
    prefix = f"Z/{p}" if m == 2 else f"(Z/{p})^{m - 1}"
    return FiniteGroupTag(
        f"{prefix} x {ep_name}",
        p ** (m + 2),
        f"{prefix} x {ep_pres}",
    )


SPIN7_EXOTIC = FiniteGroupTag("(Z/2)^4", 16, "elementary abelian of rank 4")


def pi1_of_hom(group, k: int, component: ComponentClass):
    """pi1 of the commuting variety of the given group, based at a point of
    the given component.

    Identity component: pi1(G)^k.  Exotic components: supported for G_{m,p}
    (any k >= 2, answer independent of k) and for the Spin(7) catalog entry
    (k = 3).
    """
    if k < 1:
        raise BadArguments("need k >= 1")
    if isinstance(group, str):
        if group != SPIN7:
            raise UnsupportedDescriptor(f"unknown catalog name {group!r}")
        if component.is_identity:
            return trivial_group()  # Spin(7) is simply connected
        if k != 3:
            raise UnsupportedExotic("the Spin(7) exotic component is a triple phenomenon")
        return SPIN7_EXOTIC
    if component.is_identity:
        return pi1_of_group(group).power(k)
    shape = is_central_product(group)
    if shape is None:
        raise UnsupportedExotic(f"no exotic components known for {group.label()}")
    if k < 2:
        raise UnsupportedExotic("exotic components need k >= 2")
    m, p = shape
    return _exotic_tag(m, p)


# ---------------------------------------------------------------------------
# exactness of 1 -> A -> B -> C -> 1


def _orders(g: FgAbelianGroup) -> list:
    return [0] * g.free_rank + list(g.torsion)


def _in_relation_lattice(vec, orders) -> bool:
    for x, d in zip(vec, orders):
        if d == 0:
            if x != 0:
                return False
        elif x % d:
            return False
    return True


def _relation_columns(orders) -> np.ndarray:
    n = len(orders)
    cols = [[d if i == j else 0 for i in range(n)] for j, d in enumerate(orders) if d != 0]
    if not cols:
        return np.zeros((n, 0), dtype=object)
    return _obj(cols).T


def _preimage_lattice(matrix: np.ndarray, orders_target) -> np.ndarray:
    """Columns spanning {x : matrix @ x lies in the relation lattice}."""
    rel = _relation_columns(orders_target)
    n = matrix.shape[1]
    if n == 0:
        return np.zeros((0, 0), dtype=object)
    aug = np.hstack([matrix, rel]) if rel.shape[1] else matrix
    ker = _kernel_basis(aug)
    return ker[:n, :] if ker.size else np.zeros((n, 0), dtype=object)


def check_exact_sequence(a: FgAbelianGroup, b: FgAbelianGroup, c: FgAbelianGroup, f, g) -> bool:
    """Verify 1 -> A --f--> B --g--> C -> 1 on generator matrices.

    ``f`` is an integer matrix with one column per generator of A (free
    generators first, then torsion generators), entries in the generators of
    B; ``g`` likewise from B to C.  Checks, in order: both maps are well
    defined, f is injective, image(f) = kernel(g), and g is surjective.
    Returns True when exact; raises NotExact naming the failing stage.
    """
    na, nb, nc = len(_orders(a)), len(_orders(b)), len(_orders(c))
    fm = _obj(f).reshape(nb, na) if na else np.zeros((nb, 0), dtype=object)
    gm = _obj(g).reshape(nc, nb) if nb else np.zeros((nc, 0), dtype=object)
    oa, ob, oc = _orders(a), _orders(b), _orders(c)

    for j, d in enumerate(oa):
        if d and not _in_relation_lattice([d * fm[i, j] for i in range(nb)], ob):
            raise NotExact("well-defined", f"f on torsion generator {j}")
    for j, d in enumerate(ob):
        if d and not _in_relation_lattice([d * gm[i, j] for i in range(nc)], oc):
            raise NotExact("well-defined", f"g on torsion generator {j}")

    ker_f = _preimage_lattice(fm, ob)
    for col in range(ker_f.shape[1]):
        if not _in_relation_lattice(list(ker_f[:, col]), oa):
            raise NotExact("injectivity", "f has a nontrivial kernel")

    rel_b = _relation_columns(ob)
    image = np.hstack([fm, rel_b]) if rel_b.shape[1] else fm
    ker_g = _preimage_lattice(gm, oc)
    kernel = np.hstack([ker_g, rel_b]) if rel_b.shape[1] else ker_g
    if not _lattice_equal(image, kernel):
        raise NotExact("image-equals-kernel", "im(f) differs from ker(g)")

    rel_c = _relation_columns(oc)
    span = np.hstack([gm, rel_c]) if rel_c.shape[1] else gm
    full = _eye(nc)
    if not _lattice_equal(span, full):
        raise NotExact("surjectivity", "g is not onto")
    return True
