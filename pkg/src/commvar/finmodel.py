"""Finite-group oracles backing the component story at desk scale.

Extraspecial groups E_p (Q8 for p = 2, the exponent-p Heisenberg group of
order p^3 for odd p), exhaustive censuses of commuting and almost-commuting
tuples, alternating-form rank over F_p, and the closed-form component count
N(k, m, p).  Censuses enumerate by an odometer over element indices with
outer-loop chunking, so counts are bit-identical for any thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import BadArguments, NotCentral, TooLarge, UnrealizableFingerprint, UnsupportedPrime
from .fingerprint import Fingerprint, pair_index

CENSUS_CAP = 10**7


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# groups as multiplication tables


@dataclass(eq=False)
class FinGroup:
    """A finite group as an order x order index table."""

    name: str
    table: np.ndarray
    identity: int

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    @cached_property
    def inverse(self) -> np.ndarray:
        return np.argmax(self.table == self.identity, axis=1)

    @cached_property
    def commutator(self) -> np.ndarray:
        """commutator[a, b] = a b a^-1 b^-1."""
        ab = self.table
        ba_inv = self.inverse[self.table.T]
        return self.table[ab, ba_inv]

    def center(self) -> list:
        return [g for g in range(self.order) if np.array_equal(self.table[g], self.table[:, g])]

    def centralizer(self, g: int) -> list:
        return list(np.flatnonzero(self.table[g] == self.table[:, g]))

    def commutator_subgroup(self) -> list:
        gens = set(int(c) for c in self.commutator.ravel())
        elems = set(gens) | {self.identity}
        frontier = list(elems)
        while frontier:
            a = frontier.pop()
            for b in list(elems):
                for c in (self.mul(a, b), self.mul(b, a)):
                    if c not in elems:
                        elems.add(c)
                        frontier.append(c)
        return sorted(elems)

    def element_order(self, g: int) -> int:
        n, x = 1, g
        while x != self.identity:
            x = self.mul(x, g)
            n += 1
        return n

    def exponent(self) -> int:
        exp = 1
        for g in range(self.order):
            exp = int(np.lcm(exp, self.element_order(g)))
        return exp

    def verify(self) -> None:
        """Check the table axioms exactly (identity, inverses, associativity)."""
        n = self.order
        e = self.identity
        assert np.array_equal(self.table[e], np.arange(n)), "identity fails on the left"
        assert np.array_equal(self.table[:, e], np.arange(n)), "identity fails on the right"
        for a in range(n):
            assert e in self.table[a], f"no right inverse for {a}"
        for a in range(n):
            left = self.table[self.table[a]]
            right = np.take(self.table[a], self.table)
            assert np.array_equal(left, right), f"associativity fails at {a}"


def cyclic_group(n: int) -> FinGroup:
    idx = np.arange(n)
    return FinGroup(f"Z/{n}", (idx[:, None] + idx[None, :]) % n, 0)


def extraspecial(p: int) -> FinGroup:
    """E_p: Q8 for p = 2, else the Heisenberg group over F_p (order p^3,
    exponent p, center = commutator subgroup of order p).

    Elements are triples (c, a, b) standing for zeta^c C^a S^b with C, S the
    determinant-one clock and shift matrices; the table matches their matrix
    products exactly.  For p = 2 the squares C^2 = S^2 = -1 contribute carry
    terms and the result is Q8.
    """
    if not is_prime(p) or p > 7:
        raise UnsupportedPrime(f"p={p}; supported primes are 2, 3, 5, 7")
    n = p**3

    def idx(c, a, b):
        return (c * p + a) * p + b

    table = np.zeros((n, n), dtype=np.int32)
    for c1 in range(p):
        for a1 in range(p):
            for b1 in range(p):
                i = idx(c1, a1, b1)
                for c2 in range(p):
                    for a2 in range(p):
                        for b2 in range(p):
                            carry = (a1 + a2) // p + (b1 + b2) // p if p == 2 else 0
                            c3 = (c1 + c2 - b1 * a2 + carry) % p
                            table[i, idx(c2, a2, b2)] = idx(c3, (a1 + a2) % p, (b1 + b2) % p)
    return FinGroup("Q8" if p == 2 else f"E_{p}", table, 0)


# ---------------------------------------------------------------------------
# censuses


def _suffix_coords(n: int, length: int):
    """Flat index arrays for all n^length tuples (odometer order)."""
    total = n**length
    base = np.arange(total)
    coords = []
    for pos in range(length):
        coords.append((base // n ** (length - 1 - pos)) % n)
    return coords


def _chunks(n: int, parts: int):
    parts = max(1, int(parts))
    bounds = np.linspace(0, n, parts + 1).astype(int)
    return [range(bounds[i], bounds[i + 1]) for i in range(parts) if bounds[i] < bounds[i + 1]]


def census_commuting(G: FinGroup, k: int, threads: int = 1) -> int:
    """Exact number of k-tuples with all pairs commuting."""
    n = G.order
    if n**k > CENSUS_CAP:
        raise TooLarge(f"{n}^{k} exceeds the {CENSUS_CAP} enumeration cap")
    if k == 1:
        return n
    commutes = G.table == G.table.T
    coords = _suffix_coords(n, k - 1)
    suffix_ok = np.ones(n ** (k - 1), dtype=bool)
    for a in range(k - 1):
        for b in range(a + 1, k - 1):
            suffix_ok &= commutes[coords[a], coords[b]]

    def count(rng) -> int:
        total = 0
        for x0 in rng:
            mask = suffix_ok
            for a in range(k - 1):
                mask = mask & commutes[x0, coords[a]]
            total += int(np.count_nonzero(mask))
        return total

    pieces = _chunks(n, threads)
    if len(pieces) == 1:
        return count(pieces[0])
    with ThreadPoolExecutor(max_workers=len(pieces)) as pool:
        return sum(pool.map(count, pieces))


def _cyclic_exponents(G: FinGroup, K) -> tuple:
    """(p, exponent array): exponent[g] = e with g = zeta^e, or -1 outside K.

    K must be a central subgroup, cyclic of prime order, so the exponent is
    well defined once a generator is fixed (the smallest non-identity index).
    """
    kset = sorted(set(int(x) for x in K))
    if G.identity not in kset:
        raise NotCentral("K must contain the identity")
    for x in kset:
        if not np.array_equal(G.table[x], G.table[:, x]):
            raise NotCentral(f"element {x} is not central")
        if int(G.inverse[x]) not in kset:
            raise NotCentral("K is not closed under inverses")
        for y in kset:
            if G.mul(x, y) not in kset:
                raise NotCentral("K is not closed under multiplication")
    p = len(kset)
    if p == 1 or not is_prime(p):
        raise BadArguments(f"fingerprints need K cyclic of prime order, got |K|={p}")
    gen = min(x for x in kset if x != G.identity)
    expo = np.full(G.order, -1, dtype=np.int64)
    x, e = G.identity, 0
    while True:
        expo[x] = e
        x = G.mul(x, gen)
        e += 1
        if x == G.identity:
            break
    if e != p:
        raise BadArguments("K is not cyclic")
    return p, expo


def census_fingerprints(G: FinGroup, K, k: int, threads: int = 1) -> dict:
    """Histogram Fingerprint -> count over all k-tuples whose pairwise
    commutators land in the central subgroup K; other tuples are excluded."""
    n = G.order
    if n**k > CENSUS_CAP:
        raise TooLarge(f"{n}^{k} exceeds the {CENSUS_CAP} enumeration cap")
    p, expo = _cyclic_exponents(G, K)
    if k == 1:
        return {Fingerprint.zero(p, 1): n}
    mu = expo[G.commutator]
    ok = mu >= 0
    npairs = k * (k - 1) // 2
    weights = [p ** pair_index(i, j, k) for i in range(k) for j in range(i + 1, k)]

    coords = _suffix_coords(n, k - 1)
    suffix_ok = np.ones(n ** (k - 1), dtype=bool)
    suffix_key = np.zeros(n ** (k - 1), dtype=np.int64)
    for a in range(k - 1):
        for b in range(a + 1, k - 1):
            suffix_ok &= ok[coords[a], coords[b]]
            # invalid positions may go negative; they are masked before binning
            suffix_key += mu[coords[a], coords[b]] * weights[pair_index(a + 1, b + 1, k)]

    def count(rng) -> np.ndarray:
        hist = np.zeros(p**npairs, dtype=np.int64)
        for x0 in rng:
            mask = suffix_ok
            key = suffix_key
            for a in range(k - 1):
                mask = mask & ok[x0, coords[a]]
                key = key + mu[x0, coords[a]] * weights[pair_index(0, a + 1, k)]
            hist += np.bincount(key[mask], minlength=p**npairs)
        return hist

    pieces = _chunks(n, threads)
    if len(pieces) == 1:
        hist = count(pieces[0])
    else:
        with ThreadPoolExecutor(max_workers=len(pieces)) as pool:
            hist = sum(pool.map(count, pieces))
    out = {}
    for packed, cnt in enumerate(hist):
        if cnt:
            entries = tuple((packed // p**m) % p for m in range(npairs))
            out[Fingerprint(p, k, entries)] = int(cnt)
    return out


# ---------------------------------------------------------------------------
# alternating forms over F_p


def rank_alternating(f: Fingerprint) -> int:
    """Rank over F_p of the k x k alternating matrix; always even."""
    m = f.as_matrix() % f.p
    p, k = f.p, f.k
    rank = 0
    row = 0
    m = m.copy()
    for col in range(k):
        piv = next((r for r in range(row, k) if m[r, col] % p), None)
        if piv is None:
            continue
        m[[row, piv]] = m[[piv, row]]
        inv = pow(int(m[row, col]), -1, p)
        m[row] = (m[row] * inv) % p
        for r in range(k):
            if r != row and m[r, col] % p:
                m[r] = (m[r] - m[r, col] * m[row]) % p
        row += 1
        rank += 1
    assert rank % 2 == 0, "alternating forms have even rank"
    return rank


def decompose_rank_two(f: Fingerprint) -> tuple:
    """Vectors u, v over F_p with mu_ij = u_i v_j - u_j v_i.

    Exists precisely when the form has rank <= 2; rank > 2 raises
    UnrealizableFingerprint.  The zero form decomposes as (0, 0).
    """
    p, k = f.p, f.k
    if f.is_zero:
        return (0,) * k, (0,) * k
    if rank_alternating(f) > 2:
        raise UnrealizableFingerprint(f"rank {rank_alternating(f)} > 2")
    m = f.as_matrix() % p
    i0, j0 = next((i, j) for i in range(k) for j in range(i + 1, k) if m[i, j])
    cinv = pow(int(m[i0, j0]), -1, p)
    u = tuple(int(m[i, j0]) * cinv % p for i in range(k))
    v = tuple(int(m[i0, i]) % p for i in range(k))
    for i in range(k):
        for j in range(k):
            assert (u[i] * v[j] - u[j] * v[i]) % p == m[i, j] % p
    return u, v


def count_components_formula(k: int, m: int, p: int) -> int:
    """N(k, m, p) = p^{(m-1)(k-2)} (p^k - 1)(p^{k-1} - 1) / (p^2 - 1) + 1,
    the number of path components of the commuting variety of G_{m,p}.

    The division is exact; k < 2 is outside the formula's regime and is an
    error rather than an extrapolation.
    """
    if k < 2:
        raise BadArguments(f"k={k}; the formula needs k >= 2")
    if m < 1:
        raise BadArguments(f"m={m}; need m >= 1")
    if not is_prime(p):
        raise BadArguments(f"p={p} is not prime")
    num = (p**k - 1) * (p ** (k - 1) - 1)
    q, r = divmod(num, p * p - 1)
    assert r == 0, "the component-count division is exact"
    return p ** ((m - 1) * (k - 2)) * q + 1
