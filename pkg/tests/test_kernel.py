"""Kernel formulas against brute-force expansions and known special cases."""

import numpy as np
import pytest

from sheetqv.kernel import (
    HurstPair,
    Rect,
    cov_point,
    delta_incr_inner,
    incr_cov,
    k_gamma,
    point_rect_cov,
    rho,
)

H = HurstPair(0.35, 0.4)


# --- independent oracles -----------------------------------------------------


def incr_cov_bruteforce(h, n, i, j, k, l):
    """Expand both rectangular increments into 4 node values each: 16 terms."""
    total = 0.0
    for a1 in (0, 1):
        for b1 in (0, 1):
            for a2 in (0, 1):
                for b2 in (0, 1):
                    sign = (-1) ** (a1 + b1 + a2 + b2)
                    p1 = ((i - 1 + a1) / n, (j - 1 + b1) / n)
                    p2 = ((k - 1 + a2) / n, (l - 1 + b2) / n)
                    total += sign * cov_point(h, p1, p2)
    return total


def point_rect_bruteforce(h, pt, r):
    return (
        cov_point(h, pt, (r.t1, r.t2))
        - cov_point(h, pt, (r.s1, r.t2))
        - cov_point(h, pt, (r.t1, r.s2))
        + cov_point(h, pt, (r.s1, r.s2))
    )


def random_admissible(rng):
    while True:
        a, b = rng.uniform(0.05, 0.49, 2)
        if a + b > 0.5:
            return HurstPair(a, b)


# --- k_gamma ------------------------------------------------------------------


def test_k_gamma_brownian_is_min():
    assert k_gamma(0.5, 0.3, 0.7) == pytest.approx(0.3, abs=1e-15)


def test_k_gamma_diagonal():
    assert k_gamma(0.3, 1.0, 1.0) == 1.0
    assert k_gamma(0.35, 0.25, 0.5) == pytest.approx(
        0.5 * (0.25**0.7 + 0.5**0.7 - 0.25**0.7)
    )


def test_k_gamma_symmetric():
    rng = np.random.default_rng(0)
    for _ in range(100):
        g, a, b = rng.uniform(0.01, 0.99), rng.uniform(), rng.uniform()
        assert k_gamma(g, a, b) == k_gamma(g, b, a)


def test_k_gamma_domain():
    with pytest.raises(ValueError):
        k_gamma(0.0, 0.1, 0.2)
    with pytest.raises(ValueError):
        k_gamma(1.0, 0.1, 0.2)


# --- cov_point ------------------------------------------------------------------


def test_cov_point_vanishes_on_axes():
    assert cov_point(H, (0.0, 0.7), (0.3, 0.4)) == 0.0
    assert cov_point(H, (0.3, 0.4), (0.5, 0.0)) == 0.0


def test_cov_point_brownian_sheet():
    hb = HurstPair(0.5, 0.5)
    assert cov_point(hb, (0.3, 0.8), (0.6, 0.4)) == pytest.approx(0.3 * 0.4)


def test_cov_point_unit_corner_variance():
    assert cov_point(H, (1.0, 1.0), (1.0, 1.0)) == 1.0


def test_cov_point_symmetric():
    rng = np.random.default_rng(1)
    for _ in range(200):
        h = random_admissible(rng)
        p1, p2 = tuple(rng.uniform(size=2)), tuple(rng.uniform(size=2))
        assert cov_point(h, p1, p2) == cov_point(h, p2, p1)


def test_cov_point_gram_psd():
    rng = np.random.default_rng(2)
    for _ in range(20):
        h = random_admissible(rng)
        pts = [tuple(rng.uniform(size=2)) for _ in range(32)]
        gram = np.array([[cov_point(h, p, q) for q in pts] for p in pts])
        assert np.linalg.eigvalsh(gram).min() >= -1e-10


# --- rho ------------------------------------------------------------------------


def test_rho_at_zero():
    for g in (0.1, 0.35, 0.5, 0.7):
        assert rho(g, 0) == 2.0


def test_rho_brownian_telescopes():
    assert rho(0.5, 3) == 0.0
    assert rho(0.5, -7) == 0.0


def test_rho_even():
    for c in range(-6, 7):
        assert rho(0.3, c) == rho(0.3, -c)


def test_rho_explicit_value():
    expected = 6.0**0.6 + 4.0**0.6 - 2.0 * 5.0**0.6
    assert rho(0.3, 5) == pytest.approx(expected, rel=1e-15)
    # second difference of a concave power is negative off the origin
    assert rho(0.3, 5) < 0


# --- incr_cov -------------------------------------------------------------------


def test_incr_cov_variance():
    n = 8
    assert incr_cov(H, n, 3, 5, 3, 5) == pytest.approx(
        n ** (-2 * (H.alpha + H.beta)), rel=1e-14
    )


def test_incr_cov_brownian_independence():
    hb = HurstPair(0.5, 0.5)
    assert incr_cov(hb, 8, 1, 1, 3, 1) == 0.0


def test_incr_cov_matches_bruteforce():
    h = HurstPair(0.35, 0.35)
    got = incr_cov(h, 8, 1, 1, 3, 2)
    assert got == pytest.approx(incr_cov_bruteforce(h, 8, 1, 1, 3, 2), abs=1e-14)


def test_incr_cov_randomized_oracle():
    rng = np.random.default_rng(3)
    for _ in range(300):
        h = random_admissible(rng)
        n = int(rng.integers(2, 33))
        i, j, k, l = (int(v) for v in rng.integers(1, n + 1, size=4))
        assert incr_cov(h, n, i, j, k, l) == pytest.approx(
            incr_cov_bruteforce(h, n, i, j, k, l), abs=1e-10
        )


def test_incr_cov_stationary():
    rng = np.random.default_rng(4)
    for _ in range(100):
        h = random_admissible(rng)
        n = 32
        i, j = (int(v) for v in rng.integers(1, 17, size=2))
        k, l = (int(v) for v in rng.integers(1, 17, size=2))
        s, t = (int(v) for v in rng.integers(0, 16, size=2))
        assert incr_cov(h, n, i, j, k, l) == pytest.approx(
            incr_cov(h, n, i + s, j + t, k + s, l + t), rel=1e-12, abs=1e-300
        )


def test_incr_cov_index_range():
    with pytest.raises(IndexError):
        incr_cov(H, 8, 0, 1, 1, 1)
    with pytest.raises(IndexError):
        incr_cov(H, 8, 1, 1, 9, 1)


# --- point_rect_cov ---------------------------------------------------------------


def test_point_rect_cov_axis_point():
    r = Rect(0.25, 0.75, 0.25, 0.75)
    assert point_rect_cov(H, (0.0, 0.5), r) == 0.0


def test_point_rect_cov_degenerate_rect():
    r = Rect(0.4, 0.4, 0.2, 0.8)
    assert point_rect_cov(H, (0.5, 0.5), r) == 0.0


def test_point_rect_cov_matches_bruteforce():
    h = HurstPair(0.3, 0.4)
    r = Rect(0.25, 0.75, 0.25, 0.75)
    assert point_rect_cov(h, (0.5, 0.5), r) == pytest.approx(
        point_rect_bruteforce(h, (0.5, 0.5), r), abs=1e-14
    )


def test_point_rect_cov_bound_randomized():
    rng = np.random.default_rng(5)
    for _ in range(2000):
        h = random_admissible(rng)
        s1, t1 = np.sort(rng.uniform(size=2))
        s2, t2 = np.sort(rng.uniform(size=2))
        pt = tuple(rng.uniform(size=2))
        val = abs(point_rect_cov(h, pt, Rect(s1, t1, s2, t2)))
        bound = (t1 - s1) ** (2 * h.alpha) * (t2 - s2) ** (2 * h.beta)
        assert val <= bound + 1e-12


# --- delta_incr_inner ---------------------------------------------------------------


def test_delta_incr_inner_zero_corner():
    assert delta_incr_inner(H, 8, 1, 4, 2, 2) == 0.0
    assert delta_incr_inner(H, 8, 4, 1, 2, 2) == 0.0


def test_delta_incr_inner_brownian_disjoint():
    hb = HurstPair(0.5, 0.5)
    # corner rectangle [0,3/8]^2 does not touch cell (5,6)
    assert delta_incr_inner(hb, 8, 4, 4, 5, 6) == 0.0


def test_delta_incr_inner_matches_bruteforce():
    h = HurstPair(0.35, 0.4)
    n = 16
    got = delta_incr_inner(h, n, 5, 7, 5, 7)
    cell = Rect(4 / n, 5 / n, 6 / n, 7 / n)
    assert got == pytest.approx(point_rect_bruteforce(h, (4 / n, 6 / n), cell), abs=1e-14)


def test_delta_incr_inner_randomized_oracle_and_bound():
    rng = np.random.default_rng(6)
    for _ in range(300):
        h = random_admissible(rng)
        n = int(rng.integers(2, 33))
        k, l, i, j = (int(v) for v in rng.integers(1, n + 1, size=4))
        got = delta_incr_inner(h, n, k, l, i, j)
        cell = Rect((i - 1) / n, i / n, (j - 1) / n, j / n)
        want = point_rect_bruteforce(h, ((k - 1) / n, (l - 1) / n), cell)
        assert got == pytest.approx(want, abs=1e-10)
        assert abs(got) <= n ** (-2 * (h.alpha + h.beta)) + 1e-12


# --- HurstPair / Rect validation -----------------------------------------------------


def test_hurst_admissible_flags():
    assert HurstPair(0.35, 0.4).admissible()
    assert not HurstPair(0.2, 0.25).admissible()  # sum too small
    assert not HurstPair(0.6, 0.3).admissible()  # alpha too large
    assert HurstPair(0.5, 0.5).series_convergent()
    assert not HurstPair(0.8, 0.3).series_convergent()


def test_hurst_range_validation():
    with pytest.raises(ValueError):
        HurstPair(0.0, 0.5)
    with pytest.raises(ValueError):
        HurstPair(0.5, 1.0)


def test_rect_validation():
    with pytest.raises(ValueError):
        Rect(0.5, 0.4, 0.0, 1.0)
    with pytest.raises(ValueError):
        Rect(0.0, 1.2, 0.0, 1.0)
