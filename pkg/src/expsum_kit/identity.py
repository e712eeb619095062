"""Sieve-weighted Vaughan decompositions of Lambda and mu, certified per n.

The Lambda identity splits as

    Lambda = h*log - 1*h*Lambda_{<=V} + (1*theta)(1*lambda)*Lambda_{>V} + Lambda_{<=V}

and the mu identity as

    mu = h - 1*h*mu_{<=V} + (1*theta)(1*lambda)*mu_{>V} + mu_{<=V}.

Each of the four terms is evaluated by its own divisor-sum loop so the
residual check cross-validates rather than cancelling by construction.
Because the ramp weights are irrational, residuals are certified in
RAMP_DPS-digit mpmath arithmetic: per log-basis coefficient for Lambda,
as a scalar for mu. The true residual is identically zero for any
weights with lambda(1) = 1 and theta + theta' = mu.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, List, Tuple

from mpmath import mpf, workdps

from .arith import ArithTables, LogVector, TableRangeError
from .weights import RAMP_DPS, WeightSystem, classic_vaughan_mode

__all__ = [
    "MangoldtDecomposition",
    "MobiusDecomposition",
    "decompose_mangoldt",
    "decompose_mobius",
    "classic_vaughan_mode",
    "residual_report",
]


def _mp_tables(ws: WeightSystem, n_max: int):
    """(h, 1*h, (1*theta)(1*lambda)) at RAMP_DPS digits up to n_max.

    theta values come straight from the piecewise definition; lambda from
    the exact rational table.
    """
    tables = ws.tables
    cfg = ws.cfg
    h = ws.h_mp()
    one_h = [mpf(0)] * (n_max + 1)
    for d, v in h.items():
        if d > n_max:
            continue
        for k in range(d, n_max + 1, d):
            one_h[k] += v
    one_theta = [mpf(0)] * (n_max + 1)
    for d in range(1, n_max + 1):
        rv = ws.theta(d)
        if rv.kind == "zero":
            continue
        v = rv.as_mpf(cfg)
        for k in range(d, n_max + 1, d):
            one_theta[k] += v
    one_lambda = [mpf(0)] * (n_max + 1)
    for d, lam in ws.lambda_table.items():
        if d > n_max:
            continue
        v = mpf(lam.numerator) / mpf(lam.denominator)
        for k in range(d, n_max + 1, d):
            one_lambda[k] += v
    conv_tl = [one_theta[k] * one_lambda[k] for k in range(n_max + 1)]
    return h, one_h, conv_tl


def _prime_power_divisors(n: int, tables: ArithTables) -> List[Tuple[int, int]]:
    """(p^k, p) pairs over prime-power divisors of n."""
    out = []
    for p, e in tables.factorize(n):
        pk = 1
        for _ in range(e):
            pk *= p
            out.append((pk, p))
    return out


@dataclass
class MangoldtDecomposition:
    """Four component tables of the Lambda identity over [1, n_max]."""

    n_max: int
    V: float
    term1: List[LogVector]  # (h * log)(n)
    term2: List[LogVector]  # (1 * h * Lambda_{<=V})(n)
    term3: List[LogVector]  # ((1*theta)(1*lambda) * Lambda_{>V})(n)
    term4: List[LogVector]  # Lambda_{<=V}(n)

    def residual(self, n: int, tables: ArithTables) -> LogVector:
        expected = LogVector.mangoldt(n, tables)
        with workdps(RAMP_DPS):
            return (self.term1[n] - self.term2[n] + self.term3[n]
                    + self.term4[n] - expected)

    def max_residual(self, tables: ArithTables) -> Tuple[float, int]:
        """(max |residual coefficient|, argmax n)."""
        worst, arg = 0.0, 1
        with workdps(RAMP_DPS):
            for n in range(1, self.n_max + 1):
                r = float(self.residual(n, tables).max_abs_coeff())
                if r > worst:
                    worst, arg = r, n
        return worst, arg


@dataclass
class MobiusDecomposition:
    """Four scalar component tables of the mu identity over [1, n_max]."""

    n_max: int
    V: float
    term1: List[mpf]  # h(n)
    term2: List[mpf]  # (1 * h * mu_{<=V})(n)
    term3: List[mpf]  # ((1*theta)(1*lambda) * mu_{>V})(n)
    term4: List[mpf]  # mu_{<=V}(n)

    def residual(self, n: int, tables: ArithTables) -> mpf:
        mu = int(tables.mobius[n])
        with workdps(RAMP_DPS):
            return (self.term1[n] - self.term2[n] + self.term3[n]
                    + self.term4[n] - mu)

    def max_residual(self, tables: ArithTables) -> Tuple[float, int]:
        worst, arg = 0.0, 1
        with workdps(RAMP_DPS):
            for n in range(1, self.n_max + 1):
                r = abs(float(self.residual(n, tables)))
                if r > worst:
                    worst, arg = r, n
        return worst, arg


def _check_ranges(n_max: int, ws: WeightSystem) -> None:
    if n_max > ws.tables.n_max:
        raise TableRangeError(
            f"n_max={n_max} exceeds sieved range {ws.tables.n_max}")
    if ws.cfg.h_support_bound > ws.tables.n_max:
        raise TableRangeError("h support exceeds sieved range")


def decompose_mangoldt(n_max: int, ws: WeightSystem,
                       tables: ArithTables) -> MangoldtDecomposition:
    """Materialize the four Lambda-identity terms on [1, n_max].

    The cutoff Lambda_{<=V} compares prime powers to V as exact
    integer-vs-real (l <= V, i.e. l <= floor(V) for integral l).
    """
    _check_ranges(n_max, ws)
    V = ws.cfg.V
    with workdps(RAMP_DPS):
        h, one_h, conv_tl = _mp_tables(ws, n_max)
        zero = LogVector()
        term1 = [zero] + [LogVector() for _ in range(n_max)]
        term2 = [zero] + [LogVector() for _ in range(n_max)]
        term3 = [zero] + [LogVector() for _ in range(n_max)]
        term4 = [zero] + [LogVector() for _ in range(n_max)]
        for n in range(1, n_max + 1):
            for d in tables.divisors(n):
                hv = h.get(d)
                if hv is not None:
                    term1[n] = term1[n] + LogVector.log_of(n // d, tables).scale(hv)
            for pk, p in _prime_power_divisors(n, tables):
                if pk <= V:
                    term2[n] = term2[n] + LogVector({p: one_h[n // pk]})
                else:
                    term3[n] = term3[n] + LogVector({p: conv_tl[n // pk]})
            base = int(tables.mangoldt_base[n])
            if base and n <= V:
                term4[n] = LogVector({base: 1})
    return MangoldtDecomposition(n_max, V, term1, term2, term3, term4)


def decompose_mobius(n_max: int, ws: WeightSystem,
                     tables: ArithTables) -> MobiusDecomposition:
    """Materialize the four mu-identity terms on [1, n_max]."""
    _check_ranges(n_max, ws)
    V = ws.cfg.V
    with workdps(RAMP_DPS):
        h, one_h, conv_tl = _mp_tables(ws, n_max)
        zero = mpf(0)
        term1 = [zero] * (n_max + 1)
        term2 = [zero] * (n_max + 1)
        term3 = [zero] * (n_max + 1)
        term4 = [zero] * (n_max + 1)
        for n in range(1, n_max + 1):
            term1[n] = h.get(n, zero)
            t2 = mpf(0)
            t3 = mpf(0)
            for l in tables.divisors(n):
                mu = int(tables.mobius[l])
                if mu == 0:
                    continue
                if l <= V:
                    t2 += mu * one_h[n // l]
                else:
                    t3 += mu * conv_tl[n // l]
            term2[n] = t2
            term3[n] = t3
            if n <= V:
                term4[n] = mpf(int(tables.mobius[n]))
    return MobiusDecomposition(n_max, V, term1, term2, term3, term4)


def residual_report(decomposition, ws: WeightSystem,
                    tables: ArithTables) -> Dict[str, object]:
    """JSON-ready residual summary: {config, n_max, max_abs_residual, argmax_n}."""
    worst, arg = decomposition.max_residual(tables)
    cfg = ws.cfg
    return {
        "config": {"U": cfg.U, "U1": cfg.U1, "R": cfg.R, "V": cfg.V,
                   "q": cfg.q, "eta": cfg.eta},
        "n_max": decomposition.n_max,
        "max_abs_residual": worst,
        "argmax_n": arg,
    }


def residual_report_json(decomposition, ws: WeightSystem,
                         tables: ArithTables) -> str:
    return json.dumps(residual_report(decomposition, ws, tables),
                      indent=2, sort_keys=True)
