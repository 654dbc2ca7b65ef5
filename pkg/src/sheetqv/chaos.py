"""Hermite polynomials and second-chaos moments.

Normalization: probabilists' Hermite polynomials scaled so that
H_2(x) = (x^2 - 1)/2 and (n+1) H_{n+1}(x) = x H_n(x) - H_{n-1}(x).
Under this convention the centered squared standard normal x^2 - 1 equals
2 H_2(x) = I_2 of the squared indicator, which is why every chaos-moment
constant in this package depends on it. Do not swap in the physicists'
convention.
"""

from __future__ import annotations

HERMITE_ORDER_CAP = 64


def hermite(order: int, x: float) -> float:
    """H_order(x) via the three-term recurrence.

    H_0 = 1, H_1(x) = x, (n+1) H_{n+1}(x) = x H_n(x) - H_{n-1}(x).
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if order > HERMITE_ORDER_CAP:
        raise ValueError(
            f"order {order} exceeds stability cap {HERMITE_ORDER_CAP}"
        )
    if order == 0:
        return 1.0
    prev, cur = 1.0, float(x)
    for n in range(1, order):
        prev, cur = cur, (x * cur - prev) / (n + 1)
    return cur


def centered_square(x: float, scale: float) -> float:
    """scale * x^2 - 1, the centered renormalized squared increment."""
    if scale <= 0.0:
        raise ValueError("scale must be positive")
    return scale * x * x - 1.0


def i2_pair_moment(inner: float) -> float:
    """E[I_2(h o h) I_2(g o g)] = 2 <h,g>^2.

    For jointly Gaussian standard pairs with correlation rho this is
    E[(X^2-1)(Y^2-1)] = 2 rho^2; the degree-4 and degree-2 terms of the
    product formula have zero mean and drop out.
    """
    return 2.0 * inner * inner
