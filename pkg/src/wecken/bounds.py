"""Closed-form density bounds for Wecken endomorphisms of free groups.

All bounds come in two flavours: an exact :class:`fractions.Fraction`
evaluation (``exact=True``; practical up to n of a few hundred for the
double sum) and a float evaluation.  The double sum behind
:func:`dstar_lower` is evaluated in log space with numpy so that n in the
thousands stays fast and neither overflows nor underflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

__all__ = [
    "derangements",
    "c_lower",
    "v_upper",
    "d_lower",
    "dstar_lower",
    "w2_lower",
    "constants",
    "BoundRow",
    "bound_row",
    "bounds_table",
    "EXACT_MAX_N",
]

EXACT_MAX_N = 50


def derangements(n: int) -> int:
    """Number of fixed-point-free permutations of n objects (``!n``)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    a, b = 1, 0  # !0, !1
    if n == 0:
        return a
    for k in range(2, n + 1):
        a, b = b, (k - 1) * (a + b)
    return b


def _check(n: int) -> None:
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"rank must be an integer >= 2, got {n!r}")


def c_lower(n: int, exact: bool = False):
    _check(n)
    val = 2**n * derangements(n) ** 2 * Fraction(n - 1, n * (2 * n - 1) ** 2) ** n
    return val if exact else float(val)


def v_upper(n: int, exact: bool = False):
    """Upper bound on the density of maps with all Wagner tails different."""
    _check(n)
    base = 1 - Fraction(1, n) + Fraction(1, 2 * n * (2 * n - 1))
    if exact:
        return base**n
    return math.exp(n * math.log1p(-float(1 - base)))


def _d_factor_num(n: int, k):
    m = n - 1
    return 4 * m**4 - (8 * k - 6) * m**2 + 4 * k * k - 6 * k + 2


def _d_factors_exact(n: int) -> list[Fraction]:
    den = n * (n - 1) * (2 * n - 1) ** 2
    return [Fraction(_d_factor_num(n, k), den) for k in range(1, n + 1)]


def d_lower(n: int, exact: bool = False):
    _check(n)
    if exact:
        return math.prod(_d_factors_exact(n), start=Fraction(1))
    k = np.arange(1, n + 1, dtype=np.float64)
    num = _d_factor_num(n, k)
    den = float(n) * (n - 1) * (2 * n - 1) ** 2
    f = num / den
    if np.any(f <= 0):
        return float(np.prod(f))
    return float(np.exp(np.sum(np.log(f))))


def _dstar_exact(n: int) -> Fraction:
    den = n * (2 * n - 1) ** 2
    factors = _d_factors_exact(n)
    # suffix[j] = prod_{k=j+1}^{n} factor_k  (k is 1-based)
    suffix = [Fraction(1)] * (n + 1)
    for j in range(n - 1, -1, -1):
        suffix[j] = suffix[j + 1] * factors[j]
    type2 = Fraction(n - 1, den)
    total = Fraction(0)
    for c in range(n + 1):
        for b in range(n - c + 1):
            term = math.comb(n, c) * math.comb(n - c, b) * 2**b * type2**c * suffix[c + b]
            if term == 0:
                continue
            for j in range(1, b + 1):
                term *= Fraction(2 * (n - 1) ** 2 - (2 * c + b + j - 1), den)
            total += term
    return total


def _dstar_float(n: int) -> float:
    logden = math.log(n) + 2 * math.log(2 * n - 1)
    k = np.arange(1, n + 1, dtype=np.float64)
    m = float(n - 1)
    num = 4 * m**4 - (8 * k - 6) * m**2 + 4 * k * k - 6 * k + 2
    fac = num / (n * (n - 1) * (2.0 * n - 1) ** 2)
    # suffix products in log space with sign tracking
    log_abs = np.log(np.abs(fac), where=fac != 0, out=np.full(n, -np.inf))
    neg = (fac < 0).astype(np.int64)
    suf_log = np.concatenate([np.cumsum(log_abs[::-1])[::-1], [0.0]])
    suf_neg = np.concatenate([np.cumsum(neg[::-1])[::-1], [0]])

    big_a = 2.0 * (n - 1) ** 2
    log_type2 = math.log(n - 1) - logden
    terms_pos: list[np.ndarray] = []
    terms_neg: list[np.ndarray] = []
    for c in range(n + 1):
        b = np.arange(0, n - c + 1)
        logc = gammaln(n + 1) - gammaln(c + 1) - gammaln(n - c + 1)
        logb = gammaln(n - c + 1) - gammaln(b + 1) - gammaln(n - c - b + 1)
        # prod_{j=1}^{b} (A - 2c - b + 1 - j) = Gamma(A-2c-b+1) / Gamma(A-2c-2b+1)
        top = big_a - 2 * c - b + 1
        bottom = top - b
        if np.all(bottom > 0):
            log_tprod = gammaln(top) - gammaln(bottom)
            tneg = np.zeros_like(b)
        else:
            log_tprod = np.empty(len(b))
            tneg = np.zeros_like(b)
            for idx, bb in enumerate(b):
                vals = big_a - (2 * c + bb + np.arange(1, bb + 1) - 1)
                log_tprod[idx] = np.sum(np.log(np.abs(vals))) if np.all(vals != 0) else -np.inf
                tneg[idx] = int(np.sum(vals < 0))
        log_term = (
            logc + logb + b * math.log(2.0) + c * log_type2 + suf_log[c + b]
            + log_tprod - b * logden
        )
        sign_neg = (suf_neg[c + b] + tneg) % 2 == 1
        vals = np.exp(log_term)
        terms_pos.append(vals[~sign_neg])
        terms_neg.append(vals[sign_neg])
    pos = math.fsum(np.concatenate(terms_pos).tolist())
    negs = math.fsum(np.concatenate(terms_neg).tolist())
    return pos - negs


def dstar_lower(n: int, exact: bool = False):
    """Refined lower bound on the density of maps with all tails different.

    Negative for n = 2, where the bound is vacuous; returned as is.
    """
    _check(n)
    if exact:
        return _dstar_exact(n)
    if n <= EXACT_MAX_N:
        return float(_dstar_exact(n))
    return _dstar_float(n)


def w2_lower(exact: bool = False):
    """Sum of the lower bounds for the five rank-2 T-classes.

    T2a, T2b, T2b', T4, T4'; the primed classes are the a<->b mirror images
    of T2b and T4 and carry the same bounds.
    """
    parts = [Fraction(2, 27), Fraction(1, 24), Fraction(1, 24), Fraction(1, 36), Fraction(1, 36)]
    val = sum(parts, Fraction(0))
    return val if exact else float(val)


def constants() -> dict[str, float]:
    return {
        "e^-1": math.exp(-1),
        "e^-2": math.exp(-2),
        "e^-3": math.exp(-3),
        "w2_lower": w2_lower(),
    }


@dataclass(frozen=True)
class BoundRow:
    n: int
    c_lower: float
    d_lower: float
    dstar_lower: float
    v_upper: float
    w2_lower: float | None = None

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "c_lower": self.c_lower,
            "d_lower": self.d_lower,
            "dstar_lower": self.dstar_lower,
            "v_upper": self.v_upper,
            "w2_lower": self.w2_lower,
        }


def bound_row(n: int) -> BoundRow:
    return BoundRow(
        n=n,
        c_lower=c_lower(n),
        d_lower=d_lower(n),
        dstar_lower=dstar_lower(n),
        v_upper=v_upper(n),
        w2_lower=w2_lower() if n == 2 else None,
    )


def bounds_table(ns) -> list[BoundRow]:
    return [bound_row(n) for n in ns]
