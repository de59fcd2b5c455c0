"""Commutator fingerprints: alternating k x k forms over F_p.

A fingerprint records, for a lifted tuple, the central exponents
[x_i, x_j] = zeta^{mu_ij}.  It is stored as the strictly upper triangular
entries in (i, j) lexicographic order, which makes it a canonical, hashable
key for components.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def pair_index(i: int, j: int, k: int) -> int:
    """Position of the (i, j) entry, i < j, in the flattened upper triangle."""
    if not 0 <= i < j < k:
        raise ValueError(f"need 0 <= i < j < k, got ({i}, {j}) with k={k}")
    return i * (2 * k - i - 1) // 2 + (j - i - 1)


def pair_list(k: int):
    return [(i, j) for i in range(k) for j in range(i + 1, k)]


@dataclass(frozen=True)
class Fingerprint:
    """mu_ij in Z/p for 1 <= i < j <= k, read as an alternating bilinear form
    (mu_ji = -mu_ij, mu_ii = 0)."""

    p: int
    k: int
    entries: tuple

    def __post_init__(self):
        n = self.k * (self.k - 1) // 2
        ent = tuple(int(e) % self.p for e in self.entries)
        if len(ent) != n:
            raise ValueError(f"expected {n} entries for k={self.k}, got {len(ent)}")
        object.__setattr__(self, "entries", ent)

    @classmethod
    def zero(cls, p: int, k: int) -> "Fingerprint":
        return cls(p, k, (0,) * (k * (k - 1) // 2))

    @classmethod
    def from_pairs(cls, p: int, k: int, pairs) -> "Fingerprint":
        """Build from {(i, j): mu} or [(i, j, mu), ...]; omitted entries are 0."""
        ent = [0] * (k * (k - 1) // 2)
        items = pairs.items() if hasattr(pairs, "items") else [((i, j), m) for i, j, m in pairs]
        for (i, j), mu in items:
            ent[pair_index(i, j, k)] = int(mu) % p
        return cls(p, k, tuple(ent))

    def entry(self, i: int, j: int) -> int:
        if i == j:
            return 0
        if i < j:
            return self.entries[pair_index(i, j, self.k)]
        return (-self.entries[pair_index(j, i, self.k)]) % self.p

    def as_matrix(self) -> np.ndarray:
        m = np.zeros((self.k, self.k), dtype=int)
        for i, j in pair_list(self.k):
            m[i, j] = self.entry(i, j)
            m[j, i] = self.entry(j, i)
        return m

    @property
    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    def nonzero_pairs(self):
        return [
            (i, j, self.entries[pair_index(i, j, self.k)])
            for i, j in pair_list(self.k)
            if self.entries[pair_index(i, j, self.k)]
        ]

    def __str__(self):
        if self.is_zero:
            return f"0 (p={self.p}, k={self.k})"
        body = ", ".join(f"mu[{i},{j}]={m}" for i, j, m in self.nonzero_pairs())
        return f"{body} (p={self.p}, k={self.k})"
