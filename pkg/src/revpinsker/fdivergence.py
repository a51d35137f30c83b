"""Generic f-divergences, the Jensen gap and its refined two-sided sandwiches."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .divergence import chi2_array, kl_array
from .errors import (
    GNotConvexError,
    NonPositiveEntryError,
    NotConvexError,
    NotStrictlyPositiveError,
    RevPinskerError,
    UndefinedLimitError,
)
from .measure import DiscreteDistribution, MeasurePair

ArrayFn = Callable[[np.ndarray], np.ndarray]

CONVEXITY_TRIALS = 1000
_CONVEXITY_SEED = 20160218


@dataclass(frozen=True, eq=False)
class ConvexGenerator:
    """Convex f on (0, inf) with f(1) = 0 plus the endpoint limits D_f needs.

    ``f_at_zero`` is lim_{t->0+} f(t) and ``slope_at_infinity`` is
    lim_{u->inf} f(u)/u; either may be ``None`` when unknown or infinite in a
    way the caller does not want to commit to, in which case a zero atom that
    needs it raises :class:`UndefinedLimitError`.  Build instances through
    :func:`register_generator`, which runs the convexity spot-checks.
    """

    name: str
    f: ArrayFn
    f_at_zero: float | None
    slope_at_infinity: float | None
    g_convex: bool = False

    def g(self, t):
        """Companion g(t) = -t f(t)."""
        t = np.asarray(t, dtype=np.float64)
        return -t * self.f(t)

    def __call__(self, t):
        return self.f(np.asarray(t, dtype=np.float64))


def _midpoint_violations(fn: ArrayFn, rng: np.random.Generator, trials: int) -> int:
    x = np.exp(rng.uniform(math.log(1e-3), math.log(1e3), trials))
    y = np.exp(rng.uniform(math.log(1e-3), math.log(1e3), trials))
    lam = rng.uniform(0.0, 1.0, trials)
    lhs = fn(lam * x + (1 - lam) * y)
    rhs = lam * fn(x) + (1 - lam) * fn(y)
    slack = 1e-9 * (1.0 + np.abs(rhs))
    return int(np.count_nonzero(lhs > rhs + slack))


def register_generator(
    name: str,
    f: ArrayFn,
    f_at_zero: float | None,
    slope_at_infinity: float | None,
    g_convex: bool = False,
) -> ConvexGenerator:
    """Validate f(1) = 0 and spot-check convexity (and g's, if claimed)."""
    f1 = float(f(np.array([1.0]))[0])
    if abs(f1) > 1e-12:
        raise RevPinskerError(f"generator {name!r} has f(1) = {f1!r}, expected 0")
    gen = ConvexGenerator(name, f, f_at_zero, slope_at_infinity, g_convex)
    rng = np.random.default_rng(_CONVEXITY_SEED)
    if _midpoint_violations(f, rng, CONVEXITY_TRIALS):
        raise NotConvexError(f"generator {name!r} failed the convexity spot-check")
    if g_convex and _midpoint_violations(gen.g, rng, CONVEXITY_TRIALS):
        raise GNotConvexError(f"companion g of {name!r} failed the convexity spot-check")
    return gen


def _xlogx(t):
    t = np.asarray(t, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(t > 0, t * np.log(np.where(t > 0, t, 1.0)), 0.0)


def _neg_log(t):
    with np.errstate(divide="ignore"):
        return -np.log(np.asarray(t, dtype=np.float64))


KL = register_generator("kl", _xlogx, 0.0, math.inf)
DUAL_KL = register_generator("dual_kl", _neg_log, math.inf, 0.0, g_convex=True)
CHI2 = register_generator("chi2", lambda t: (np.asarray(t) - 1.0) ** 2, 1.0, math.inf)
HELLINGER = register_generator("hellinger", lambda t: 1.0 - np.sqrt(t), 1.0, 0.0, g_convex=True)
TV = register_generator("tv", lambda t: np.abs(np.asarray(t) - 1.0), 1.0, 1.0)

CATALOG = {g.name: g for g in (KL, DUAL_KL, CHI2, HELLINGER, TV)}


def _inf_times(mass: float, limit: float | None, what: str, name: str) -> float:
    if limit is None:
        raise UndefinedLimitError(f"generator {name!r} has no {what} limit but a zero atom needs it")
    if mass == 0.0:
        return 0.0
    return mass * limit


def f_divergence(gen: ConvexGenerator, pair: MeasurePair) -> float:
    """D_f(P||Q) = sum Q f(P/Q) with the zero-atom conventions.

    0 f(0/0) = 0 (such atoms never reach here), Q f(0/Q) = Q f(0+), and
    0 f(P/0) = P lim f(u)/u.
    """
    p, q = pair.p, pair.q
    both = (p > 0) & (q > 0)
    total = float(np.sum(q[both] * gen.f(p[both] / q[both])))
    p_only = float(np.sum(p[(p > 0) & (q == 0)]))
    q_only = float(np.sum(q[(q > 0) & (p == 0)]))
    if q_only > 0:
        total += _inf_times(q_only, gen.f_at_zero, "f(0+)", gen.name)
    if p_only > 0:
        total += _inf_times(p_only, gen.slope_at_infinity, "slope at infinity", gen.name)
    return total


def _positive_vector(u, n: int) -> np.ndarray:
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (n,):
        raise NonPositiveEntryError(f"u must have length {n}, got shape {u.shape}")
    if not np.all(u > 0):
        raise NonPositiveEntryError("u must be strictly positive")
    return u


def jensen_functional(gen: ConvexGenerator, u, mu: DiscreteDistribution) -> float:
    """J(f, u, mu) = sum mu f(u) - f(sum mu u), non-negative for convex f."""
    w = mu.probs
    u = _positive_vector(u, w.size)
    return float(np.dot(w, gen.f(u)) - gen.f(np.array([np.dot(w, u)]))[0])


class Sandwich(NamedTuple):
    low: float
    mid: float
    high: float

    @property
    def holds(self) -> bool:
        return self.holds_within(1e-12)

    def holds_within(self, slack: float) -> bool:
        return self.low <= self.mid + slack and self.mid <= self.high + slack


def _require_positive(pair: MeasurePair, exc=NotStrictlyPositiveError) -> None:
    if not pair.strictly_positive:
        raise exc("P and Q must be strictly positive")


def dragomir_sandwich(gen: ConvexGenerator, u, pair: MeasurePair) -> Sandwich:
    """min(P/Q) J(f,u,Q) <= J(f,u,P) <= max(P/Q) J(f,u,Q)."""
    _require_positive(pair, NonPositiveEntryError)
    r = pair.p / pair.q
    jq = jensen_functional(gen, u, pair.Q)
    jp = jensen_functional(gen, u, pair.P)
    return Sandwich(float(r.min()) * jq, jp, float(r.max()) * jq)


def proposition_sandwich(gen: ConvexGenerator, pair: MeasurePair) -> Sandwich:
    """min(P/Q) D_f <= -D_g - f(1 + chi^2) <= max(P/Q) D_f, with g(t) = -t f(t).

    Requires strictly positive P and Q, except for the -ln t generator where a
    null P-atom is allowed (its contribution vanishes under 0 ln 0 = 0).
    """
    if not gen.g_convex:
        raise GNotConvexError(f"generator {gen.name!r} does not declare a convex companion g")
    if np.any(pair.q <= 0):
        raise NotStrictlyPositiveError("Q must be strictly positive")
    if gen is DUAL_KL:
        return _dual_kl_sandwich(pair)
    _require_positive(pair)
    r = pair.p / pair.q
    d_f = float(np.sum(pair.q * gen.f(r)))
    d_g = float(np.sum(pair.q * gen.g(r)))
    chi2 = float(chi2_array(pair.p, pair.q))
    mid = -d_g - float(gen.f(np.array([1.0 + chi2]))[0])
    return Sandwich(float(r.min()) * d_f, mid, float(r.max()) * d_f)


def _dual_kl_sandwich(pair: MeasurePair) -> Sandwich:
    # D_f = D(Q||P) and D_g = D(P||Q); the mid term is ln(1 + chi^2) - D(P||Q).
    p, q = pair.p, pair.q
    d_qp = float(kl_array(q, p))
    d_pq = float(kl_array(p, q))
    mid = math.log1p(float(chi2_array(p, q))) - d_pq
    r = p / q
    low = 0.0 if r.min() == 0.0 else float(r.min()) * d_qp
    return Sandwich(low, mid, float(r.max()) * d_qp)
