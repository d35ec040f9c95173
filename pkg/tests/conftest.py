"""Shared fixtures and independent numerical oracles.

The oracles re-derive quantities from first principles (direct quantile
integration, trapezoid masses) without touching the transform pipeline, so
tests compare two genuinely different routes.
"""

import numpy as np
import pytest

from scdt import Reference, Signal


@pytest.fixture(scope="session")
def ref():
    """Default uniform reference on [0, 1] at 1000 points."""
    return Reference.uniform(0.0, 1.0, 1000)


@pytest.fixture(scope="session")
def small_ref():
    return Reference.uniform(0.0, 1.0, 400)


def bump_mixture(rng, grid, n_bumps=(2, 5)):
    """Random smooth signed signal: Gaussian bumps plus a sine, windowed to
    vanish linearly at the domain edges."""
    v = np.zeros_like(grid)
    for _ in range(rng.integers(*n_bumps)):
        c = rng.uniform(0.2, 0.8)
        w = rng.uniform(0.05, 0.15)
        v += rng.uniform(-1.5, 1.5) * np.exp(-((grid - c) ** 2) / (2 * w**2))
    v += 0.6 * np.sin(2 * np.pi * rng.integers(1, 4) * grid + rng.uniform(0, 2 * np.pi))
    return v * 4 * grid * (1 - grid)


def signed_suite(seed, count, n=1000, require_both_parts=True):
    """Deterministic suite of random smooth signed signals on [0, 1]."""
    rng = np.random.default_rng(seed)
    grid = np.linspace(0.0, 1.0, n)
    out = []
    while len(out) < count:
        v = bump_mixture(rng, grid)
        pos = np.trapezoid(np.maximum(v, 0), grid)
        neg = np.trapezoid(np.maximum(-v, 0), grid)
        if require_both_parts and min(pos, neg) < 0.05:
            continue
        out.append(Signal(grid, v))
    return out


def arch_signal(rng, grid):
    """One positive and one negative sine arch; no dead density zones."""
    l1 = rng.uniform(0.02, 0.15)
    r1 = rng.uniform(0.35, 0.55)
    l2 = rng.uniform(r1 + 0.02, 0.68)
    r2 = rng.uniform(0.8, 0.98)
    v = np.zeros_like(grid)
    in1 = (grid >= l1) & (grid <= r1)
    v[in1] = rng.uniform(0.5, 1.5) * np.sin(np.pi * (grid[in1] - l1) / (r1 - l1))
    in2 = (grid >= l2) & (grid <= r2)
    v[in2] = -rng.uniform(0.5, 1.5) * np.sin(np.pi * (grid[in2] - l2) / (r2 - l2))
    return Signal(grid, v)


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------

def oracle_cdf(grid, values):
    dx = np.diff(grid)
    cum = np.concatenate([[0.0], np.cumsum(dx * (values[1:] + values[:-1]) / 2)])
    return cum / cum[-1]


def oracle_quantiles(grid, values, u):
    """Quantiles by deduplicated linear inversion of the sampled CDF."""
    F = oracle_cdf(grid, values)
    keep = np.concatenate([[True], np.diff(F) > 0])
    return np.interp(u, F[keep], grid[keep])


def oracle_w2(s1: Signal, s2: Signal, resolution=100001):
    """Direct quantile integration of the squared transport cost."""
    u = np.linspace(0.0, 1.0, resolution)
    q1 = oracle_quantiles(s1.grid, s1.values, u)
    q2 = oracle_quantiles(s2.grid, s2.values, u)
    return float(np.sqrt(np.trapezoid((q1 - q2) ** 2, u)))


def oracle_signed_distance(s1: Signal, s2: Signal, resolution=100001):
    """Brute-force generalized distance; requires all four parts nonzero."""
    total = 0.0
    for sign in (1.0, -1.0):
        p1 = Signal(s1.grid, np.maximum(sign * s1.values, 0.0))
        p2 = Signal(s2.grid, np.maximum(sign * s2.values, 0.0))
        m1 = np.trapezoid(p1.values, p1.grid)
        m2 = np.trapezoid(p2.values, p2.grid)
        total += oracle_w2(p1, p2, resolution) ** 2 + (m1 - m2) ** 2
    return float(np.sqrt(total))
