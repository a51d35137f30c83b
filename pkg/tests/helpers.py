"""Independent reference implementations used as test oracles.

Everything here is written against mpmath or fractions, never against the
package's own kernels, so agreement is a genuine cross-check.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import mpmath as mp
import numpy as np

mp.mp.dps = 40

RUNNING_P = (0.5, 0.5)
RUNNING_Q = (0.25, 0.75)


def mpf_vec(x):
    return [mp.mpf(repr(float(v))) if not isinstance(v, (Fraction, str)) else mp.mpf(str(v)) for v in x]


def _normalized(x):
    v = mpf_vec(x)
    s = sum(v)
    return [a / s for a in v]


def mp_kl(p, q) -> float:
    total = mp.mpf(0)
    for a, b in zip(_normalized(p), _normalized(q)):
        if a == 0:
            continue
        if b == 0:
            return float("inf")
        total += a * mp.log(a / b)
    return float(total)


def mp_renyi(p, q, alpha) -> float:
    p, q = _normalized(p), _normalized(q)
    if alpha == 1:
        return mp_kl(p, q)
    if alpha == float("inf"):
        return float(mp.log(max(a / b for a, b in zip(p, q) if a > 0)))
    if alpha == 0:
        return float(-mp.log(sum(b for a, b in zip(p, q) if a > 0)))
    a = mp.mpf(repr(float(alpha)))
    s = sum(x**a * y ** (1 - a) for x, y in zip(p, q) if x > 0)
    return float(mp.log(s) / (a - 1))


def mp_binary_kl(p, q) -> float:
    return mp_kl([p, 1 - mp.mpf(repr(p))], [q, 1 - mp.mpf(repr(q))])


def mp_tv(p, q) -> float:
    return float(sum(abs(a - b) for a, b in zip(mpf_vec(p), mpf_vec(q))))


def mp_chi2(p, q) -> float:
    return float(sum((a - b) ** 2 / b for a, b in zip(mpf_vec(p), mpf_vec(q))))


def brute_balance(q) -> Fraction:
    """max over subsets A of min{Q(A), 1 - Q(A)} in exact rationals."""
    fq = [Fraction(repr(float(x))) for x in q]
    total = sum(fq)
    best = Fraction(0)
    for mask in itertools.product((0, 1), repeat=len(fq)):
        s = sum(x for x, b in zip(fq, mask) if b)
        best = max(best, min(s, total - s))
    return best


def random_simplex(rng: np.random.Generator, n: int, size: int) -> np.ndarray:
    x = rng.exponential(size=(size, n))
    return x / x.sum(axis=1, keepdims=True)
