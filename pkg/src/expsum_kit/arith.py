"""Sieved arithmetic-function tables and exact convolution plumbing.

Provides:
- ArithTables: smallest prime factor, Mobius mu, Euler totient and the
  "Mangoldt base" (p for prime powers p^k, else 0), all built in one
  vectorized sieve pass.
- ramanujan_sum: c_r(n) via the mu/phi closed form, exact integers.
- dirichlet_convolve: exact Dirichlet convolution over tables of
  Fraction (or int) values, LogVector values, or a mix of the two.
- LogVector: exact carrier for quantities of the form sum_p c_p * log p,
  so convolutions involving Lambda or log never round.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

# ~20 bytes/entry across the four tables; the cap keeps a typo from
# swallowing all RAM.
MAX_N_MAX = 100_000_000


class TableRangeError(ValueError):
    """Raised when a query exceeds the sieved range."""


@dataclass(frozen=True)
class ArithTables:
    """Immutable per-integer tables on [0, n_max].

    Index 0 is a filler in every array. Tables are safe for shared
    read access from worker processes; construction is single-threaded.
    """

    n_max: int
    spf: np.ndarray            # int32; spf[n] = smallest prime factor, 0 for n < 2
    mobius: np.ndarray         # int8
    totient: np.ndarray        # int64
    mangoldt_base: np.ndarray  # int32; p if n = p^k else 0
    primes: np.ndarray         # int64, sorted

    def check_range(self, n: float, what: str = "index") -> None:
        if n > self.n_max:
            raise TableRangeError(f"{what} {n} exceeds sieved range n_max={self.n_max}")

    def factorize(self, n: int) -> List[Tuple[int, int]]:
        """Prime factorization [(p, e), ...] from the spf chain."""
        if not 1 <= n <= self.n_max:
            self.check_range(n)
        out: List[Tuple[int, int]] = []
        while n > 1:
            p = int(self.spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out

    def divisors(self, n: int) -> List[int]:
        """All positive divisors of n (unsorted)."""
        divs = [1]
        for p, e in self.factorize(n):
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return divs

    def tau(self, n: int) -> int:
        """Divisor count, computed on demand from the factorization."""
        out = 1
        for _, e in self.factorize(n):
            out *= e + 1
        return out

    def is_squarefree(self, n: int) -> bool:
        return self.mobius[n] != 0

    def mangoldt_float(self) -> np.ndarray:
        """Lambda(n) as float64: log of the Mangoldt base where nonzero."""
        base = self.mangoldt_base.astype(np.float64)
        out = np.zeros_like(base)
        nz = base > 0
        out[nz] = np.log(base[nz])
        return out

    def mobius_float(self) -> np.ndarray:
        return self.mobius.astype(np.float64)


def build_tables(n_max: int, cap: int = MAX_N_MAX) -> ArithTables:
    """Sieve all four tables up to n_max. Deterministic.

    Vectorized whole-range sieve passes; fine for n_max <= 1e8, and a
    segmented variant is the natural extension point beyond that.
    Raises ValueError if n_max exceeds the allocation cap.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if n_max > cap:
        raise ValueError(f"n_max={n_max} exceeds allocation cap {cap}")

    idx = np.arange(n_max + 1, dtype=np.int64)

    spf = np.zeros(n_max + 1, dtype=np.int32)
    for i in range(2, math.isqrt(n_max) + 1):
        if spf[i] == 0:
            spf[i] = i
            block = spf[i * i :: i]
            block[block == 0] = i
    rest = (spf == 0) & (idx >= 2)
    spf[rest] = idx[rest].astype(np.int32)

    primes = idx[(idx >= 2) & (spf == idx)]

    mobius = np.ones(n_max + 1, dtype=np.int8)
    totient = idx.copy()
    mangoldt_base = np.zeros(n_max + 1, dtype=np.int32)
    for p in primes:
        p = int(p)
        mobius[p::p] *= -1
        if p * p <= n_max:
            mobius[p * p :: p * p] = 0
        totient[p::p] = totient[p::p] // p * (p - 1)
        pk = p
        while pk <= n_max:
            mangoldt_base[pk] = p
            pk *= p
    mobius[0] = 0
    if n_max >= 1:
        totient[0] = 0

    tables = ArithTables(
        n_max=n_max,
        spf=spf,
        mobius=mobius,
        totient=totient,
        mangoldt_base=mangoldt_base,
        primes=primes,
    )
    return tables


def ramanujan_sum(r: int, n: int, tables: ArithTables) -> int:
    """Ramanujan sum c_r(n) = mu(r/g) * phi(r) / phi(r/g), g = gcd(r, n).

    Exact integer; phi(r/g) divides phi(r) because r/g divides r.
    """
    if r < 1 or n < 1:
        raise ValueError("r and n must be positive")
    tables.check_range(r, "modulus r")
    g = math.gcd(r, n)
    rg = r // g
    mu = int(tables.mobius[rg])
    if mu == 0:
        return 0
    return mu * int(tables.totient[r]) // int(tables.totient[rg])


# ---------------------------------------------------------------------------
# Exact log-basis vectors


@dataclass
class LogVector:
    """Exact sum_p coeffs[p] * log p with zero coefficients absent.

    Coefficients may be int, Fraction, or mpmath mpf; arithmetic is
    whatever the coefficient type supports.
    """

    coeffs: Dict[int, object] = field(default_factory=dict)

    @staticmethod
    def log_of(n: int, tables: ArithTables) -> "LogVector":
        """log n = sum_p v_p(n) log p as an exact vector."""
        return LogVector({p: e for p, e in tables.factorize(n)}) if n > 1 else LogVector()

    @staticmethod
    def mangoldt(n: int, tables: ArithTables) -> "LogVector":
        """Lambda(n) as a vector: {p: 1} when n is a power of p."""
        base = int(tables.mangoldt_base[n])
        return LogVector({base: 1}) if base else LogVector()

    def _merge(self, other: "LogVector", sign: int) -> "LogVector":
        out = dict(self.coeffs)
        for p, c in other.coeffs.items():
            v = out.get(p, 0) + sign * c
            if v:
                out[p] = v
            else:
                out.pop(p, None)
        return LogVector(out)

    def __add__(self, other: "LogVector") -> "LogVector":
        return self._merge(other, 1)

    def __sub__(self, other: "LogVector") -> "LogVector":
        return self._merge(other, -1)

    def __neg__(self) -> "LogVector":
        return LogVector({p: -c for p, c in self.coeffs.items()})

    def scale(self, factor) -> "LogVector":
        if not factor:
            return LogVector()
        return LogVector({p: c * factor for p, c in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def max_abs_coeff(self) -> object:
        """Largest |coefficient|, 0 for the zero vector."""
        if not self.coeffs:
            return 0
        return max(abs(c) for c in self.coeffs.values())

    def to_float(self) -> float:
        return float(sum(float(c) * math.log(p) for p, c in self.coeffs.items()))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LogVector) and self.coeffs == other.coeffs


TableValue = Union[int, Fraction, LogVector]


def _scale(a: TableValue, b: TableValue) -> TableValue:
    """Product of two table values; at most one may be a LogVector."""
    if isinstance(a, LogVector):
        if isinstance(b, LogVector):
            raise TypeError("product of two LogVectors is outside the log basis")
        return a.scale(b)
    if isinstance(b, LogVector):
        return b.scale(a)
    return a * b


def dirichlet_convolve(
    f: Sequence[TableValue], g: Sequence[TableValue], n_max: int
) -> List[TableValue]:
    """(f*g)(n) = sum_{d|n} f(d) g(n/d), exact in the operand arithmetic.

    Tables are 1-indexed sequences of length >= n_max+1 (index 0 ignored).
    Mixing rational and LogVector tables yields a LogVector table.
    """
    if len(f) <= n_max or len(g) <= n_max:
        raise ValueError("operand tables must be defined on [1, n_max]")
    logvec = isinstance(f[1], LogVector) or isinstance(g[1], LogVector)
    zero = LogVector() if logvec else Fraction(0)
    out: List[TableValue] = [zero] * (n_max + 1)
    for d in range(1, n_max + 1):
        fd = f[d]
        if isinstance(fd, LogVector):
            if fd.is_zero():
                continue
        elif not fd:
            continue
        for n in range(d, n_max + 1, d):
            out[n] = out[n] + _scale(fd, g[n // d])
    return out


def unit_table(n_max: int) -> List[Fraction]:
    """The constant function 1 on [1, n_max]."""
    return [Fraction(0)] + [Fraction(1)] * n_max


def mobius_table(n_max: int, tables: ArithTables) -> List[Fraction]:
    tables.check_range(n_max)
    return [Fraction(0)] + [Fraction(int(tables.mobius[n])) for n in range(1, n_max + 1)]


def mangoldt_table(n_max: int, tables: ArithTables) -> List[LogVector]:
    tables.check_range(n_max)
    return [LogVector()] + [LogVector.mangoldt(n, tables) for n in range(1, n_max + 1)]
