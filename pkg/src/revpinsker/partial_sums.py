"""Partial sums of independent non-identical Bernoulli variables.

The law of U_n = X_1 + ... + X_n is Poisson-binomial; comparing two such laws
through the Renyi divergence exercises data processing (the sum is a function
of the vector), additivity over independent coordinates, and the finite-set
reverse bound applied coordinate-wise.
"""

from __future__ import annotations

import itertools
import math
from typing import NamedTuple

import numpy as np

from .divergence import renyi_array
from .errors import (
    EmptyVectorError,
    LengthMismatchError,
    ParamOutOfRangeError,
    QTooLargeError,
)
from .measure import DiscreteDistribution, build_distribution

MAX_TERMS = 1000
MAX_PRODUCT_TERMS = 16
CHAIN_SLACK = 1e-10


def bernoulli_vector(params, q_side: bool = False) -> np.ndarray:
    """Validate success probabilities in (0, 1); the Q side must stay <= 1/2."""
    v = np.atleast_1d(np.asarray(params, dtype=np.float64))
    if v.ndim != 1 or v.size == 0:
        raise EmptyVectorError("need at least one Bernoulli parameter")
    if v.size > MAX_TERMS:
        raise ParamOutOfRangeError(f"at most {MAX_TERMS} terms are supported, got {v.size}")
    if not np.all((v > 0) & (v < 1)):
        raise ParamOutOfRangeError("Bernoulli parameters must lie in (0, 1)")
    if q_side and np.any(v > 0.5):
        raise QTooLargeError("reference parameters q_i must not exceed 1/2")
    return v


def _pmf(v: np.ndarray) -> np.ndarray:
    pmf = np.zeros(v.size + 1)
    pmf[0] = 1.0
    for k, x in enumerate(np.sort(v), start=1):
        pmf[1:k + 1] = pmf[1:k + 1] * (1.0 - x) + pmf[:k] * x
        pmf[0] *= 1.0 - x
    return pmf


def partial_sum_pmf(params) -> DiscreteDistribution:
    """Distribution of the number of successes on {0, ..., n}, by convolution."""
    v = bernoulli_vector(params)
    pmf = _pmf(v)
    return build_distribution([str(k) for k in range(v.size + 1)], pmf, renormalize=True)


def _pair(p, q) -> tuple[np.ndarray, np.ndarray]:
    pv = bernoulli_vector(p)
    qv = bernoulli_vector(q)
    if pv.size != qv.size:
        raise LengthMismatchError(f"p has {pv.size} entries but q has {qv.size}")
    if np.any(qv > 0.5):
        raise QTooLargeError("reference parameters q_i must not exceed 1/2")
    return pv, qv


def binary_renyi_terms(p: np.ndarray, q: np.ndarray, alpha: float) -> np.ndarray:
    """d_alpha(p_i || q_i) for each coordinate."""
    pp = np.stack([p, 1.0 - p], axis=-1)
    qq = np.stack([q, 1.0 - q], axis=-1)
    return renyi_array(pp, qq, alpha)


class ChainCheck(NamedTuple):
    lhs: float
    additivity_sum: float
    bound_sum: float
    holds: bool


def chain_bound_terms(p: np.ndarray, q: np.ndarray, alpha: float) -> np.ndarray:
    r = p / q - 1.0
    if alpha > 2.0:
        return np.log1p(2.0 * np.abs(r))
    return np.log1p(2.0 * q * r * r)


def renyi_chain_check(p, q, alpha: float) -> ChainCheck:
    """D_alpha(sum X || sum Y) <= sum_i d_alpha(p_i||q_i) <= per-coordinate bound sum."""
    pv, qv = _pair(p, q)
    alpha = float(alpha)
    lhs = float(renyi_array(_pmf(pv), _pmf(qv), alpha))
    add = float(np.sum(binary_renyi_terms(pv, qv, alpha)))
    bnd = float(np.sum(chain_bound_terms(pv, qv, alpha)))
    holds = lhs <= add + CHAIN_SLACK and add <= bnd + CHAIN_SLACK
    return ChainCheck(lhs, add, bnd, holds)


class SummabilityCaps(NamedTuple):
    k1: float
    k2: float
    eps: np.ndarray


def summability_caps(p, q) -> SummabilityCaps:
    """eps_i = |p_i/q_i - 1|, K1 = sum ln(1 + eps_i^2), K2 = sum ln(1 + 2 eps_i)."""
    pv, qv = _pair(p, q)
    eps = np.abs(pv / qv - 1.0)
    return SummabilityCaps(float(np.sum(np.log1p(eps * eps))), float(np.sum(np.log1p(2.0 * eps))), eps)


def product_distribution(params) -> np.ndarray:
    """Joint pmf of n independent Bernoulli variables over {0,1}^n (n <= 16),
    indexed lexicographically."""
    v = bernoulli_vector(params)
    if v.size > MAX_PRODUCT_TERMS:
        raise ParamOutOfRangeError(f"product space limited to {MAX_PRODUCT_TERMS} factors")
    out = np.ones(1)
    for x in v:
        out = np.outer(out, [1.0 - x, x]).ravel()
    return out


def partial_sum_pmf_bruteforce(params) -> np.ndarray:
    """Enumerate all 2^n outcomes; for cross-checking the convolution."""
    v = bernoulli_vector(params)
    pmf = np.zeros(v.size + 1)
    for bits in itertools.product((0, 1), repeat=v.size):
        pr = math.prod(x if b else 1.0 - x for b, x in zip(bits, v))
        pmf[sum(bits)] += pr
    return pmf
