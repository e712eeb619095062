"""Partitions of (M, 2M] whose classes keep same-residue elements far apart.

Primes go into at most ceil(B) classes with B = (q/phi(q)) * 2L/log L
(3 <= L <= M/q); arbitrary integers into at most ceil(L) classes
(2 <= L <= M/q). Construction is the cyclic one: enumerate the members of
each residue class mod q in increasing order and deal them round-robin
over the class slots. Within a class, distinct elements congruent mod q
are then separated by at least Lq (for integers this is immediate; for
primes it follows from Brun-Titchmarsh).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from .arith import ArithTables


@dataclass(frozen=True)
class Partition:
    """Disjoint classes covering the input set, with the separation
    guarantee: m = m' mod q, m != m' in one class implies |m - m'| >= Lq."""

    classes: List[List[int]]
    M: float
    q: int
    L: float

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def members(self) -> List[int]:
        out: List[int] = []
        for c in self.classes:
            out.extend(c)
        return sorted(out)

    def spacing_violations(self) -> List[tuple]:
        """Exhaustive pairwise check; empty list means the property holds."""
        bad = []
        min_gap = self.L * self.q
        for ci, cls in enumerate(self.classes):
            by_residue: Dict[int, List[int]] = {}
            for m in cls:
                by_residue.setdefault(m % self.q, []).append(m)
            for residue, ms in by_residue.items():
                arr = np.sort(np.asarray(ms, dtype=np.int64))
                if len(arr) <= 4000:
                    gaps = arr[:, None] - arr[None, :]  # all pairs at once
                    hits = np.argwhere((gaps > 0) & (gaps < min_gap))
                    for i, j in hits:
                        bad.append((ci, residue, int(arr[j]), int(arr[i])))
                else:
                    # Sorted, so the minimum pairwise gap is attained by a
                    # consecutive pair; equivalent to all-pairs, O(K) memory.
                    diffs = np.diff(arr)
                    for i in np.flatnonzero(diffs < min_gap):
                        bad.append((ci, residue, int(arr[i]), int(arr[i + 1])))
        return bad


def separation_bound(L: float, q: int, tables: ArithTables) -> float:
    """B(L, q) = (q/phi(q)) * 2L / log L, the prime-partition class budget."""
    phi_q = int(tables.totient[q])
    return q / phi_q * 2.0 * L / math.log(L)


def _cyclic_partition(groups: List[np.ndarray], n_classes: int,
                      M: float, q: int, L: float) -> Partition:
    classes: List[List[int]] = [[] for _ in range(n_classes)]
    for members in groups:
        for idx, m in enumerate(members):
            classes[idx % n_classes].append(int(m))
    return Partition(classes=[c for c in classes if c], M=M, q=q, L=L)


def partition_primes(M: float, q: int, L: float,
                     tables: ArithTables) -> Partition:
    """Partition the primes in (M, 2M] into at most ceil(B(L, q)) classes."""
    if not 3 <= L <= M / q:
        raise ValueError(f"need 3 <= L <= M/q, got L={L}, M/q={M / q}")
    tables.check_range(2 * M, "partition upper end")
    primes = tables.primes
    lo = np.searchsorted(primes, math.floor(M) + 1)
    hi = np.searchsorted(primes, math.floor(2 * M), side="right")
    window = primes[lo:hi]
    n_classes = math.ceil(separation_bound(L, q, tables))
    groups = [window[window % q == a] for a in range(q) if math.gcd(a, q) == 1]
    # Primes p | q in the window would fall outside the coprime residue
    # classes; they can only occur when q > M, excluded by L <= M/q.
    return _cyclic_partition(groups, n_classes, M, q, L)


def partition_integers(M: float, q: int, L: float,
                       tables: ArithTables) -> Partition:
    """Partition all integers in (M, 2M] into at most ceil(L) classes."""
    if not 2 <= L <= M / q:
        raise ValueError(f"need 2 <= L <= M/q, got L={L}, M/q={M / q}")
    members = np.arange(math.floor(M) + 1, math.floor(2 * M) + 1, dtype=np.int64)
    n_classes = math.ceil(L)
    groups = [members[members % q == a] for a in range(q)]
    return _cyclic_partition(groups, n_classes, M, q, L)
