"""Exact divergences between two distributions on a finite alphabet.

Public functions take a :class:`~revpinsker.measure.MeasurePair` and return a
:class:`DivergenceValue`; the ``*_array`` variants operate on raw probability
arrays along the last axis, which is what the sweeps use.  Infinite values are
returned, never raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ._numerics import kl_kernel, renyi_kernel
from .errors import NegativeOrderError, OutOfRangeProbabilityError, ZeroQAtomError
from .measure import MeasurePair

IDENTITY_TOLERANCE = 1e-12


@dataclass(frozen=True)
class DivergenceValue:
    value: float
    finite: bool
    order: float | None = None
    details: Mapping[str, float] = field(default_factory=dict)

    def __float__(self) -> float:
        return self.value


def _wrap(value, order=None, **details) -> DivergenceValue:
    v = float(value)
    return DivergenceValue(v, math.isfinite(v), order, details)


def _check_order(alpha) -> float:
    a = float(alpha)
    if math.isnan(a) or a < 0:
        raise NegativeOrderError(f"Renyi order must lie in [0, inf], got {alpha!r}")
    return a


# --------------------------------------------------------------------------
# array-level kernels (last axis = alphabet)


def kl_array(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    qpos = q > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.where(qpos, (p - q) / np.where(qpos, q, 1.0), 0.0)
    s = np.sum(np.where(qpos, q * kl_kernel(u), 0.0), axis=-1)
    escaped = np.any((p > 0) & ~qpos, axis=-1)
    return np.where(escaped, np.inf, np.maximum(s, 0.0))


def tv_array(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    return np.sum(np.abs(np.asarray(p) - np.asarray(q)), axis=-1)


def chi2_array(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    return np.sum((p - q) ** 2 / q, axis=-1)


def l2_array(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    d = np.asarray(p, dtype=np.float64) - np.asarray(q, dtype=np.float64)
    return np.sqrt(np.sum(d * d, axis=-1))


def renyi_array(p: np.ndarray, q: np.ndarray, alpha: float) -> np.ndarray:
    """D_alpha along the last axis for alpha in [0, inf]."""
    a = _check_order(alpha)
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    ppos = p > 0
    qpos = q > 0
    escaped_mass = np.sum(np.where(qpos, 0.0, p), axis=-1)
    if a == 1.0:
        return kl_array(p, q)
    if a == 0.0:
        q_supp = np.sum(np.where(ppos, q, 0.0), axis=-1)
        with np.errstate(divide="ignore"):
            return np.maximum(-np.log(q_supp), 0.0)
    if math.isinf(a):
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(ppos, p / np.where(qpos, q, 1.0), -np.inf)
        ratio = np.where(ppos & ~qpos, np.inf, ratio)
        return np.maximum(np.log(np.max(ratio, axis=-1)), 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.where(qpos, (p - q) / np.where(qpos, q, 1.0), 0.0)
    # sum_a p^a q^(1-a) - 1 = sum_{q>0} q h_a(u) - a * P(q = 0)
    t = np.sum(np.where(qpos, q * renyi_kernel(u, a), 0.0), axis=-1) - a * escaped_mass
    with np.errstate(divide="ignore", invalid="ignore"):
        d = np.log1p(np.maximum(t, -1.0)) / (a - 1.0)
    if a > 1.0:
        d = np.where(escaped_mass > 0, np.inf, d)
    return np.maximum(d, 0.0)


def bhattacharyya_array(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    return np.sum(np.sqrt(np.asarray(p) * np.asarray(q)), axis=-1)


# --------------------------------------------------------------------------
# pair-level API


def kl(pair: MeasurePair) -> DivergenceValue:
    """Relative entropy D(P||Q) in nats."""
    return _wrap(kl_array(pair.p, pair.q))


def total_variation(pair: MeasurePair) -> DivergenceValue:
    """L1 distance sum |P - Q| in [0, 2].

    For mutually absolutely continuous pairs the two relative-information
    forms E_Q|1 - exp(i)| and E_P|1 - exp(-i)| are evaluated as well; their
    deviations are recorded in ``details`` and must stay below 1e-12.
    """
    p, q = pair.p, pair.q
    tv = float(tv_array(p, q))
    details = {}
    if pair.strictly_positive:
        ri = pair.rel_info
        under_q = float(np.sum(q * np.abs(np.expm1(ri))))
        under_p = float(np.sum(p * np.abs(np.expm1(-ri))))
        details = {"residual_under_q": abs(under_q - tv), "residual_under_p": abs(under_p - tv)}
        worst = max(details.values())
        if worst > IDENTITY_TOLERANCE:
            raise AssertionError(f"relative-information TV identity off by {worst:.3e}")
    return _wrap(min(tv, 2.0), **details)


def chi_square(pair: MeasurePair) -> DivergenceValue:
    if np.any(pair.q <= 0):
        raise ZeroQAtomError("chi-square needs Q strictly positive")
    return _wrap(chi2_array(pair.p, pair.q))


def renyi(pair: MeasurePair, alpha: float) -> DivergenceValue:
    """Renyi divergence of order alpha in [0, inf]; alpha = 1 is exactly KL."""
    a = _check_order(alpha)
    return _wrap(renyi_array(pair.p, pair.q, a), order=a)


@dataclass(frozen=True)
class BhattacharyyaValue:
    coefficient: float
    d_half: float

    @property
    def value(self) -> float:
        return self.coefficient

    @property
    def finite(self) -> bool:
        return math.isfinite(self.d_half)


def bhattacharyya(pair: MeasurePair) -> BhattacharyyaValue:
    """Coefficient Z = sum sqrt(PQ) and D_{1/2} = -2 ln Z."""
    z = min(float(bhattacharyya_array(pair.p, pair.q)), 1.0)
    d_half = math.inf if z == 0.0 else float(renyi_array(pair.p, pair.q, 0.5))
    return BhattacharyyaValue(z, d_half)


def euclidean_l2(pair: MeasurePair) -> DivergenceValue:
    return _wrap(l2_array(pair.p, pair.q))


def binary_divergence(p: float, q: float, alpha: float = 1.0) -> DivergenceValue:
    """d_alpha(p||q) between Bernoulli(p) and Bernoulli(q)."""
    if not 0.0 <= p <= 1.0:
        raise OutOfRangeProbabilityError(f"p must lie in [0, 1], got {p!r}")
    if not 0.0 < q < 1.0:
        raise OutOfRangeProbabilityError(f"q must lie in (0, 1), got {q!r}")
    a = _check_order(alpha)
    pv = np.array([p, 1.0 - p])
    qv = np.array([q, 1.0 - q])
    return _wrap(renyi_array(pv, qv, a), order=a)
