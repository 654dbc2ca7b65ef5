"""The limiting constant sigma_{alpha,beta}.

sigma^2 = (1/8) * sum over all integers c, d of (rho_a(c) * rho_b(d))^2,
which factorizes as (1/8) * (sum_c rho_a(c)^2) * (sum_d rho_b(d)^2).
The series converges iff alpha < 3/4 and beta < 3/4. All terms are
non-negative, so a truncated sum is a lower bound and we attach a rigorous
upper bound on the omitted mass.

Tail bound: rho_g(c) is the second difference of x -> x^{2g}, so by the
mean-value form |rho_g(c)| <= 2g|2g-1| (|c|-1)^{2g-2} for |c| >= 2, giving

    sum_{c > N} rho_g(c)^2 <= (2g|2g-1|)^2 * (N-1)^{4g-3} / (3-4g),  N >= 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernel import HurstPair

_CUTOFF_CAP = 10**8


class RegimeError(ValueError):
    """Raised when (alpha, beta) is outside the series-convergence regime."""


@dataclass(frozen=True)
class SeriesResult:
    """Truncated series value with a rigorous bracket.

    value <= sigma^2 <= value + tail_bound.
    """

    value: float
    cutoff: int
    tail_bound: float


def _check_regime(h: HurstPair) -> None:
    if not h.series_convergent():
        raise RegimeError(
            f"series for sigma diverges unless alpha, beta < 3/4; "
            f"got alpha={h.alpha}, beta={h.beta}"
        )


def _rho_arr(gamma: float, c: np.ndarray) -> np.ndarray:
    # vectorized second difference with exact zeros at the |x|^{2g} cusp
    def p(x):
        a = np.abs(x).astype(float)
        out = np.zeros_like(a)
        nz = a > 0
        out[nz] = a[nz] ** (2.0 * gamma)
        return out

    return p(c + 1) + p(c - 1) - 2.0 * p(c)


def _axis_sum_sq(gamma: float, cutoff: int) -> float:
    """sum_{|c| <= cutoff} rho_gamma(c)^2 with compensated accumulation."""
    c = np.arange(1, cutoff + 1)
    terms = _rho_arr(gamma, c) ** 2
    # rho(0) = 2 always; one-sided terms counted twice by symmetry
    return 4.0 + 2.0 * math.fsum(terms.tolist())


def tail_constant(gamma: float) -> float:
    """The mean-value constant 2g|2g-1| bounding |rho_gamma| decay."""
    return 2.0 * gamma * abs(2.0 * gamma - 1.0)


def _axis_tail(gamma: float, cutoff: int) -> float:
    """Upper bound on sum_{|c| > cutoff} rho_gamma(c)^2 (two-sided)."""
    cg = tail_constant(gamma)
    if cg == 0.0:
        return 0.0  # gamma = 1/2: rho vanishes off zero
    base = max(cutoff, 2)
    extra = 0.0
    if base > cutoff:
        c = np.arange(cutoff + 1, base + 1)
        extra = 2.0 * math.fsum((_rho_arr(gamma, c) ** 2).tolist())
    # integral comparison of sum_{c > base} (c-1)^{4g-4}
    integral = (base - 1.0) ** (4.0 * gamma - 3.0) / (3.0 - 4.0 * gamma)
    return extra + 2.0 * cg * cg * integral


def sigma_squared_partial(h: HurstPair, cutoff: int) -> SeriesResult:
    """Truncated factorized double series for sigma^2 with tail bound."""
    _check_regime(h)
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    sa = _axis_sum_sq(h.alpha, cutoff)
    sb = _axis_sum_sq(h.beta, cutoff)
    ta = _axis_tail(h.alpha, cutoff)
    tb = _axis_tail(h.beta, cutoff)
    value = 0.125 * sa * sb
    tail = 0.125 * ((sa + ta) * (sb + tb) - sa * sb)
    return SeriesResult(value=value, cutoff=cutoff, tail_bound=tail)


def sigma(h: HurstPair, tol: float) -> float:
    """sigma_{alpha,beta} to relative series-truncation tolerance tol.

    Returns sqrt of a partial sum whose tail bound is at most tol * value.
    Deterministic for fixed inputs; sqrt(2) exactly at alpha = beta = 1/2.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    _check_regime(h)
    cutoff = 4
    while True:
        res = sigma_squared_partial(h, cutoff)
        if res.tail_bound <= tol * res.value:
            return math.sqrt(res.value)
        if cutoff >= _CUTOFF_CAP:
            raise RuntimeError(
                f"series did not reach tolerance {tol} within cutoff {_CUTOFF_CAP}"
            )
        cutoff = min(cutoff * 10, _CUTOFF_CAP)
