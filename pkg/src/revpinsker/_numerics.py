"""Cancellation-free building blocks shared by the divergence and bound code.

Everything here is vectorized over numpy arrays and works in nats.
"""

from __future__ import annotations

import math

import numpy as np

NATS_TO_BITS = 1.0 / math.log(2.0)

_SERIES_TERMS = 60


def kl_kernel(u: np.ndarray) -> np.ndarray:
    """g(u) = (1+u) ln(1+u) - u, the per-atom KL term q*g(p/q - 1) / q.

    Small |u| goes through the alternating series sum_{k>=2} (-1)^k u^k/(k(k-1))
    so nearly identical distributions keep full relative precision.
    """
    u = np.asarray(u, dtype=np.float64)
    small = np.abs(u) < 0.1
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = (1.0 + u) * np.log1p(u) - u
    direct = np.where(u == -1.0, 1.0, direct)
    if not np.any(small):
        return direct
    us = u[small]
    acc = np.zeros_like(us)
    term = us * us
    for k in range(2, 24):
        acc += term / (k * (k - 1)) * (1 if k % 2 == 0 else -1)
        term = term * us
    direct[small] = acc
    return direct


def renyi_kernel(u: np.ndarray, alpha: float) -> np.ndarray:
    """h_alpha(u) = (1+u)^alpha - 1 - alpha*u for u >= -1, alpha > 0.

    Uses the binomial series when |u|(1+alpha) <= 1/2 (geometric convergence
    at rate 1/2) and otherwise (1+u) expm1((alpha-1) ln(1+u)) - (alpha-1) u,
    a rearrangement that keeps the (alpha-1) factor explicit so orders close to
    one lose no precision.
    """
    u = np.asarray(u, dtype=np.float64)
    a = float(alpha)
    small = np.abs(u) * (1.0 + abs(a)) <= 0.5
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        direct = (1.0 + u) * np.expm1((a - 1.0) * np.log1p(u)) - (a - 1.0) * u
    direct = np.where(u == -1.0, a - 1.0, direct)
    if not np.any(small):
        return direct
    us = u[small]
    # terms shrink at least geometrically with ratio r = max|u|(1+alpha) <= 1/2
    r = float(np.max(np.abs(us))) * (1.0 + abs(a))
    terms = _SERIES_TERMS if r <= 0 else min(_SERIES_TERMS, int(-37.0 / math.log(r)) + 3)
    coef = a * (a - 1.0) / 2.0
    term = us * us
    acc = coef * term
    for k in range(2, terms):
        coef = coef * (a - k) / (k + 1)
        term = term * us
        acc = acc + coef * term
    direct[small] = acc
    return direct


def log_ratio_coefficient(beta1):
    """ln(1/beta1) / (1 - beta1), with its limit 1 at beta1 = 1 and +inf at 0."""
    b = np.asarray(beta1, dtype=np.float64)
    x = 1.0 - b
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -np.log1p(-x) / x
    out = np.where(x == 0.0, 1.0, out)
    out = np.where(b == 0.0, np.inf, out)
    return out if out.ndim else float(out)


def phi(p):
    """ln((1-p)/p) / (4(1-2p)) on (0, 1/2], equal to 1/2 at p = 1/2.

    Written as atanh(x)/(2x) with x = 1-2p, which is smooth through x = 0.
    """
    p = np.asarray(p, dtype=np.float64)
    x = 1.0 - 2.0 * p
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.arctanh(x) / (2.0 * x)
    out = np.where(np.abs(x) < 1e-8, 0.5 + x * x / 6.0, out)
    return out if out.ndim else float(out)


def binary_kl(p, q):
    """d(p||q) in nats for arrays of p in [0,1], q in (0,1)."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    return q * kl_kernel((p - q) / q) + (1.0 - q) * kl_kernel((q - p) / (1.0 - q))
