"""Forward and reverse Pinsker-type bounds.

Each public evaluator takes the raw statistics it needs (tv, beta1, beta2,
q_min, ...) so conservative stand-ins can be substituted for the exact pair
statistics.  The private ``_*`` formula kernels are plain numpy expressions
shared by the scalar API, :func:`bound_table` (batched, used by the sweeps)
and :func:`bound_report`.

All values are in nats.  Targets: ``KL`` = D(P||Q), ``KL_QP`` = D(Q||P),
``D_alpha`` = Renyi divergence of the stated order, ``D2``, ``TV``, ``chi2``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ._numerics import NATS_TO_BITS, log_ratio_coefficient, phi
from .divergence import (
    chi2_array,
    kl_array,
    l2_array,
    renyi_array,
    tv_array,
)
from .errors import (
    BadBalanceError,
    BadBetaError,
    InapplicableError,
    NonPositiveEtaError,
    NotMutuallyACError,
    OrderOutOfRangeError,
    RevPinskerError,
    TVOutOfRangeError,
    ZeroMinError,
    ZeroQMinError,
)
from .measure import (
    MeasurePair,
    balance_coefficient,
    balance_is_exact,
    build_distribution,
    make_pair,
)

UPPER = "upper"
LOWER = "lower"
LOG_TARGETS = frozenset({"KL", "KL_QP", "D_alpha", "D2"})
CHECK_RTOL = 1e-9
REPORT_RENYI_ORDERS = (0.5, 2.0, math.inf)
_EDGE = 1e-12


@dataclass(frozen=True)
class BoundValue:
    name: str
    value: float
    direction: str
    target: str
    applicable: bool = True
    reason: str = ""
    order: float | None = None


def alpha_key(alpha: float) -> str:
    return "inf" if math.isinf(alpha) else format(float(alpha), "g")


# --------------------------------------------------------------------------
# argument validation


def _check_tv(tv: float, allow_two: bool = True) -> float:
    tv = float(tv)
    if math.isnan(tv) or tv < -_EDGE or tv > 2.0 + _EDGE:
        raise TVOutOfRangeError(f"total variation must lie in [0, 2], got {tv!r}")
    tv = min(max(tv, 0.0), 2.0)
    if not allow_two and tv >= 2.0:
        raise TVOutOfRangeError("total variation must be below 2 for this bound")
    return tv


def _check_beta(name: str, beta: float) -> float:
    beta = float(beta)
    if math.isnan(beta) or beta < 0.0 or beta > 1.0 + _EDGE:
        raise RevPinskerError(f"{name} must lie in [0, 1], got {beta!r}")
    return min(beta, 1.0)


def _check_beta1(beta1: float) -> float:
    beta1 = _check_beta("beta1", beta1)
    if beta1 == 0.0:
        raise InapplicableError("beta1 = 0: the relative information is unbounded above")
    return beta1


def _check_q_min(q_min: float) -> float:
    q_min = float(q_min)
    if not q_min > 0.0:
        raise ZeroQMinError(f"q_min must be positive, got {q_min!r}")
    return q_min


# --------------------------------------------------------------------------
# formula kernels (numpy-broadcastable)


def _pinsker(tv):
    return 0.5 * tv * tv


def _ow(tv, pi_q):
    return phi(pi_q) * tv * tv


def _gilardoni(tv):
    h = 0.5 * tv
    return -np.log1p(-h) - (1.0 - h) * np.log1p(h)


def _renyi_pinsker(tv, alpha):
    return 0.5 * alpha * tv * tv


def _verdu(tv, beta1):
    return log_ratio_coefficient(beta1) * 0.5 * tv


def _thm1(tv, beta1, beta2):
    return (log_ratio_coefficient(beta1) - beta2) * 0.5 * tv


def _csiszar_talata(tv, q_min):
    return tv * tv / q_min


def _thm3(tv, q_min, beta2):
    return np.log1p(tv * tv / (2.0 * q_min)) - 0.5 * beta2 * tv * tv


def _euclidean(l2, q_min):
    return np.log1p(l2 * l2 / q_min)


def _euclidean_loose(l2, q_min):
    return l2 * l2 / q_min


def _chain(tv, beta1, beta2):
    with np.errstate(divide="ignore"):
        c = np.maximum(1.0 / beta1 - 1.0, 1.0 - beta2) * tv
    d = np.log1p(c)
    return c, d


def _beta2_floor(q_min, q_max, tv):
    return np.maximum(q_min - tv, 0.0) / q_max


def _renyi_reverse(alpha, tv, p_min, q_min):
    eps = tv
    eps_p = np.minimum(1.0, eps)
    if alpha > 2.0:
        return np.log1p(eps / (2.0 * q_min))
    f2 = np.log1p(eps * eps_p / (2.0 * q_min)) - 0.5 * p_min * eps * eps
    if alpha >= 1.0:
        return np.log1p(eps * eps_p / (2.0 * q_min))
    f1 = (alpha / (1.0 - alpha)) * (np.log1p(eps * eps / (2.0 * p_min)) - 0.5 * q_min * eps * eps)
    best = np.minimum(f1, f2)
    if alpha > 0.5:
        return best
    with np.errstate(divide="ignore"):
        f0 = -2.0 * np.log1p(-0.5 * eps)
    return np.minimum(best, f0)


def _tv_upper_from_kl(kl):
    return 2.0 * np.sqrt(-np.expm1(-kl))


# --------------------------------------------------------------------------
# scalar API


def pinsker_lower(tv: float) -> BoundValue:
    tv = _check_tv(tv)
    return BoundValue("pinsker", float(_pinsker(tv)), LOWER, "KL")


def ow_refined_pinsker_lower(tv: float, pi_q: float) -> BoundValue:
    """phi(pi_Q) tv^2, the balance-coefficient refinement of Pinsker."""
    tv = _check_tv(tv)
    pi_q = float(pi_q)
    if not 0.0 < pi_q <= 0.5 + _EDGE:
        raise BadBalanceError(f"balance coefficient must lie in (0, 1/2], got {pi_q!r}")
    return BoundValue("ow_refined_pinsker", float(_ow(tv, min(pi_q, 0.5))), LOWER, "KL")


def gilardoni_dual_lower(tv: float) -> BoundValue:
    """Lower bound on D(Q||P) that is tight for both small and large tv."""
    tv = _check_tv(tv, allow_two=False)
    return BoundValue("gilardoni_dual", float(_gilardoni(tv)), LOWER, "KL_QP")


def renyi_pinsker_lower(tv: float, alpha: float) -> BoundValue:
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise OrderOutOfRangeError(f"order must lie in (0, 1], got {alpha!r}")
    tv = _check_tv(tv)
    return BoundValue("renyi_pinsker", float(_renyi_pinsker(tv, alpha)), LOWER, "D_alpha", order=alpha)


def verdu_upper(tv: float, beta1: float) -> BoundValue:
    tv = _check_tv(tv)
    beta1 = _check_beta1(beta1)
    return BoundValue("verdu", float(_verdu(tv, beta1)), UPPER, "KL")


def thm1_upper(tv: float, beta1: float, beta2: float) -> BoundValue:
    """(ln(1/beta1)/(1-beta1) - beta2) tv/2; reduces to :func:`verdu_upper` at beta2 = 0."""
    tv = _check_tv(tv)
    beta1 = _check_beta1(beta1)
    beta2 = _check_beta("beta2", beta2)
    return BoundValue("thm1", float(_thm1(tv, beta1, beta2)), UPPER, "KL")


def csiszar_talata_upper(tv: float, q_min: float) -> BoundValue:
    tv = _check_tv(tv)
    q_min = _check_q_min(q_min)
    return BoundValue("csiszar_talata", float(_csiszar_talata(tv, q_min)), UPPER, "KL")


def thm3_upper(tv: float, q_min: float, beta2: float) -> BoundValue:
    tv = _check_tv(tv)
    q_min = _check_q_min(q_min)
    beta2 = _check_beta("beta2", beta2)
    return BoundValue("thm3", float(_thm3(tv, q_min, beta2)), UPPER, "KL")


def corollary_upper(tv: float, q_min: float) -> BoundValue:
    """ln(1 + tv^2/(2 q_min)): :func:`thm3_upper` with beta2 dropped."""
    b = thm3_upper(tv, q_min, 0.0)
    return BoundValue("corollary", b.value, UPPER, "KL")


def euclidean_upper(l2: float, q_min: float, target: str = "D2") -> BoundValue:
    """ln(1 + |P-Q|_2^2 / q_min), an upper bound on D2 and hence on KL.

    Holds with equality (for D2) when Q is equiprobable.
    """
    if target not in ("D2", "KL"):
        raise RevPinskerError(f"target must be 'D2' or 'KL', got {target!r}")
    q_min = _check_q_min(q_min)
    l2 = float(l2)
    if l2 < 0 or math.isnan(l2):
        raise RevPinskerError(f"l2 must be non-negative, got {l2!r}")
    return BoundValue("euclidean", float(_euclidean(l2, q_min)), UPPER, target)


def beta2_floor(q_min: float, q_max: float, tv: float) -> float:
    """(q_min - tv)^+ / q_max, a lower bound on beta2 for any P at distance tv."""
    q_min = _check_q_min(q_min)
    if q_max < q_min:
        raise RevPinskerError("q_max must be at least q_min")
    return float(_beta2_floor(q_min, float(q_max), _check_tv(tv)))


class ChainBounds(NamedTuple):
    chi2_upper: float
    d2_upper: float
    kl_upper: float


def general_measure_chain(tv: float, beta1: float, beta2: float) -> ChainBounds:
    """chi^2 <= max(1/beta1 - 1, 1 - beta2) tv, and D2, KL <= ln(1 + that)."""
    tv = _check_tv(tv)
    beta1 = _check_beta1(beta1)
    beta2 = _check_beta("beta2", beta2)
    c, d = _chain(tv, beta1, beta2)
    return ChainBounds(float(c), float(d), float(d))


def renyi_reverse_upper(alpha: float, tv: float, p_min: float, q_min: float) -> BoundValue:
    """Piecewise reverse-Pinsker bound on D_alpha(P||Q) for alpha in [0, inf]."""
    alpha = float(alpha)
    if math.isnan(alpha) or alpha < 0:
        raise OrderOutOfRangeError(f"order must lie in [0, inf], got {alpha!r}")
    tv = _check_tv(tv)
    if not (p_min > 0 and q_min > 0):
        raise ZeroMinError("renyi reverse bound needs P_min > 0 and Q_min > 0")
    value = float(_renyi_reverse(alpha, tv, float(p_min), float(q_min)))
    return BoundValue("renyi_reverse", value, UPPER, "D_alpha", order=alpha)


def tv_upper_from_kl(kl: float) -> BoundValue:
    """|P-Q| <= 2 sqrt(1 - exp(-D(P||Q)))."""
    kl = float(kl)
    if math.isnan(kl) or kl < 0:
        raise RevPinskerError(f"KL must be non-negative, got {kl!r}")
    return BoundValue("tv_upper_from_kl", float(_tv_upper_from_kl(kl)), UPPER, "TV")


# --------------------------------------------------------------------------
# TV lower bounds from the relative-information distribution


def _require_mutual_ac(p: np.ndarray, q: np.ndarray) -> None:
    if np.any(p <= 0) or np.any(q <= 0):
        raise NotMutuallyACError("P and Q must both be strictly positive")


def _breakpoint_factors(p, q, ri):
    """(1 - e^-eta, e^eta - 1) at eta = |i(a)|, written as mass ratios.

    Going through exp(log(p/q)) would cost relative accuracy 1e-16/eta when
    P(a) is close to Q(a).
    """
    d = p - q
    pos = ri >= 0
    with np.errstate(divide="ignore", invalid="ignore"):
        down = np.where(pos, d / p, -d / q)
        up = np.where(pos, d / q, -d / p)
    return down, up


def _scan_chunk(p, ri, cand, down, up, pos_side: bool, neg_side: bool):
    # objective at eta = cand[..., j]:
    #   (1 - e^-eta) P[i >= eta] + (e^eta - 1) P[i <= -eta]
    total = np.zeros(cand.shape)
    if pos_side:
        mass = np.einsum("kn,kjn->kj", p, (ri[:, None, :] >= cand[:, :, None]).astype(np.float64))
        total += down * mass
    if neg_side:
        mass = np.einsum("kn,kjn->kj", p, (ri[:, None, :] <= -cand[:, :, None]).astype(np.float64))
        total += up * mass
    return total


def _best(p, ri, cand, down, up, pos_side=True, neg_side=True, chunk_elems=4_000_000):
    """Max of the objective over candidate etas; ties go to the smallest eta."""
    order = np.argsort(cand, axis=-1, kind="stable")
    cand = np.take_along_axis(cand, order, axis=-1)
    down = np.take_along_axis(down, order, axis=-1)
    up = np.take_along_axis(up, order, axis=-1)
    k, n = p.shape
    rows = max(1, chunk_elems // max(1, cand.shape[1] * n))
    vals = np.empty(k)
    etas = np.empty(k)
    for s in range(0, k, rows):
        sl = slice(s, s + rows)
        obj = _scan_chunk(p[sl], ri[sl], cand[sl], down[sl], up[sl], pos_side, neg_side)
        j = np.argmax(obj, axis=-1)
        vals[sl] = obj[np.arange(obj.shape[0]), j]
        etas[sl] = cand[sl][np.arange(obj.shape[0]), j]
    etas = np.where(vals > 0, etas, 0.0)
    return np.maximum(vals, 0.0), etas


def _prepare(p, q):
    p = np.atleast_2d(np.asarray(p, dtype=np.float64))
    q = np.atleast_2d(np.asarray(q, dtype=np.float64))
    _require_mutual_ac(p, q)
    ri = np.log(p / q)
    return p, q, ri


def tv_lower_relinfo_array(p: np.ndarray, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batched one-parameter relative-information TV lower bound, (k, n) inputs."""
    p, q, ri = _prepare(p, q)
    down, up = _breakpoint_factors(p, q, ri)
    return _best(p, ri, np.abs(ri), down, up)


def tv_lower_two_param_array(p: np.ndarray, q: np.ndarray):
    """Batched two-parameter version; returns (value, eta1, eta2) arrays."""
    p, q, ri = _prepare(p, q)
    down, up = _breakpoint_factors(p, q, ri)
    # atoms on the other side contribute the candidate eta = 0, where both factors vanish
    v1, e1 = _best(p, ri, np.maximum(ri, 0.0), np.where(ri > 0, down, 0.0), up, neg_side=False)
    v2, e2 = _best(p, ri, np.maximum(-ri, 0.0), down, np.where(ri < 0, up, 0.0), pos_side=False)
    return v1 + v2, e1, e2


def tv_lower_relinfo(pair: MeasurePair) -> tuple[float, float]:
    """sup_eta (1 - e^-eta)(P[i >= eta] + e^eta P[i <= -eta]), i = ln dP/dQ, X ~ P.

    The objective only jumps at eta = |i(a)| and increases in between, so an
    exact scan over those breakpoints finds the supremum.  Returns the value
    and the smallest maximizing eta (both 0 when P = Q).
    """
    v, e = tv_lower_relinfo_array(pair.p[None, :], pair.q[None, :])
    return float(v[0]), float(e[0])


def tv_lower_two_param(pair: MeasurePair) -> tuple[float, float, float]:
    """Separate suprema over eta1 (upper tail) and eta2 (lower tail)."""
    v, e1, e2 = tv_lower_two_param_array(pair.p[None, :], pair.q[None, :])
    return float(v[0]), float(e1[0]), float(e2[0])


def attainment_construction(eta1: float, eta2: float | None = None) -> MeasurePair:
    """Two-atom pair with relative information (eta1, -eta2) on which the
    two-parameter TV lower bound is tight; eta2 defaults to eta1."""
    eta2 = eta1 if eta2 is None else eta2
    eta1, eta2 = float(eta1), float(eta2)
    if not (eta1 > 0 and eta2 > 0) or not (math.isfinite(eta1) and math.isfinite(eta2)):
        raise NonPositiveEtaError(f"eta1 and eta2 must be positive and finite, got {eta1!r}, {eta2!r}")
    e = math.expm1(eta1 + eta2)
    qa = math.expm1(eta2) / e
    pa = math.exp(eta1) * qa
    pb = math.expm1(eta1) / e
    qb = math.exp(eta2) * pb
    labels = ("a", "b")
    return make_pair(build_distribution(labels, [pa, pb]), build_distribution(labels, [qa, qb]))


# --------------------------------------------------------------------------
# equiprobable example


class EquiprobableBounds(NamedTuple):
    lower: float
    upper: float
    looser_lower: float


def equiprobable_example(n: int, beta: float) -> EquiprobableBounds:
    """TV bounds between U (uniform on n atoms) and any P with entropy beta ln n.

    ``lower`` comes from the relative-information lower bound, ``looser_lower``
    from Pinsker-type reasoning via D(P||U) = ln n - H(P) = (1-beta) ln n.
    """
    beta = float(beta)
    if not 0.0 <= beta <= 1.0:
        raise BadBetaError(f"beta must lie in [0, 1], got {beta!r}")
    if int(n) != n or n < 2:
        raise BadBetaError(f"alphabet size must be an integer >= 2, got {n!r}")
    ln_n = math.log(n)
    lower = math.sqrt(max(2.0 * (math.exp(-beta * ln_n) - 1.0 / n), 0.0))
    upper = min(math.sqrt(2.0 * (1.0 - beta) * ln_n), 2.0 * math.sqrt(-math.expm1((beta - 1.0) * ln_n)))
    looser = math.sqrt((1.0 - beta) * ln_n / n)
    return EquiprobableBounds(lower, upper, looser)


# --------------------------------------------------------------------------
# batched table of every bound, for strictly positive pairs


# name -> (smaller, larger) bound names
ORDERING_PAIRS = {
    "thm1_le_verdu": ("thm1", "verdu"),
    "thm3_le_corollary": ("thm3", "corollary"),
    "corollary_le_csiszar_talata": ("corollary", "csiszar_talata"),
    "ow_ge_pinsker": ("pinsker", "ow_refined_pinsker"),
    "two_param_ge_one_param": ("tv_lower_relinfo", "tv_lower_two_param"),
    "euclidean_d2_le_looser": ("euclidean", "euclidean_loose"),
    "thm1_le_general_chain": ("thm1", "general_chain_kl"),
}
# the last ordering is asserted without proof, so it is tracked but not enforced
PROVEN_ORDERINGS = (
    "thm1_le_verdu",
    "thm3_le_corollary",
    "corollary_le_csiszar_talata",
    "ow_ge_pinsker",
    "two_param_ge_one_param",
    "euclidean_d2_le_looser",
)
INFORMATIONAL_ORDERINGS = ("thm1_le_general_chain",)


@dataclass
class BoundTable:
    """Exact divergences and every bound for a batch of strictly positive pairs."""

    exact: dict[str, np.ndarray]
    bounds: list[tuple[str, str, str, float | None, np.ndarray]]
    orderings: dict[str, np.ndarray]

    def target_values(self, target: str, order: float | None) -> np.ndarray:
        if target == "D_alpha":
            return self.exact["renyi"][alpha_key(order)]
        return self.exact[TARGET_KEYS[target]]


TARGET_KEYS = {"KL": "kl_pq", "KL_QP": "kl_qp", "D2": "d2", "TV": "tv", "chi2": "chi2"}


def _le(a, b):
    return a <= b + CHECK_RTOL * np.maximum(1.0, np.abs(b))


def bound_table(p: np.ndarray, q: np.ndarray, pi_q: np.ndarray,
                renyi_orders=REPORT_RENYI_ORDERS) -> BoundTable:
    """Evaluate everything on (k, n) arrays of strictly positive pairs."""
    p = np.atleast_2d(np.asarray(p, dtype=np.float64))
    q = np.atleast_2d(np.asarray(q, dtype=np.float64))
    _require_mutual_ac(p, q)
    pi_q = np.broadcast_to(np.asarray(pi_q, dtype=np.float64), p.shape[:1])
    ratio = p / q
    beta1 = np.minimum(1.0 / ratio.max(axis=-1), 1.0)
    beta2 = np.minimum(ratio.min(axis=-1), 1.0)
    q_min, q_max, p_min = q.min(axis=-1), q.max(axis=-1), p.min(axis=-1)
    tv = np.minimum(tv_array(p, q), 2.0)
    l2 = l2_array(p, q)
    kl_pq = kl_array(p, q)
    renyi = {alpha_key(a): renyi_array(p, q, a) for a in sorted(set(renyi_orders) | {2.0, 0.5})}
    exact = {
        "kl_pq": kl_pq,
        "kl_qp": kl_array(q, p),
        "tv": tv,
        "chi2": chi2_array(p, q),
        "l2": l2,
        "d2": renyi["2"],
        "renyi": renyi,
    }
    one, _ = tv_lower_relinfo_array(p, q)
    two, _, _ = tv_lower_two_param_array(p, q)
    chain_c, chain_d = _chain(tv, beta1, beta2)
    b = {
        "pinsker": _pinsker(tv),
        "ow_refined_pinsker": _ow(tv, pi_q),
        "verdu": _verdu(tv, beta1),
        "thm1": _thm1(tv, beta1, beta2),
        "csiszar_talata": _csiszar_talata(tv, q_min),
        "thm3": _thm3(tv, q_min, beta2),
        "corollary": _thm3(tv, q_min, 0.0),
        "euclidean": _euclidean(l2, q_min),
        "euclidean_loose": _euclidean_loose(l2, q_min),
    }
    bounds = [
        ("pinsker", LOWER, "KL", None, b["pinsker"]),
        ("ow_refined_pinsker", LOWER, "KL", None, b["ow_refined_pinsker"]),
        ("gilardoni_dual", LOWER, "KL_QP", None, _gilardoni(tv)),
        ("renyi_pinsker", LOWER, "D_alpha", 0.5, _renyi_pinsker(tv, 0.5)),
        ("verdu", UPPER, "KL", None, b["verdu"]),
        ("thm1", UPPER, "KL", None, b["thm1"]),
        ("csiszar_talata", UPPER, "KL", None, b["csiszar_talata"]),
        ("thm3", UPPER, "KL", None, b["thm3"]),
        ("corollary", UPPER, "KL", None, b["corollary"]),
        ("euclidean", UPPER, "D2", None, b["euclidean"]),
        ("euclidean_loose", UPPER, "D2", None, b["euclidean_loose"]),
        ("general_chain_chi2", UPPER, "chi2", None, chain_c),
        ("general_chain_d2", UPPER, "D2", None, chain_d),
        ("general_chain_kl", UPPER, "KL", None, chain_d),
    ]
    for a in renyi_orders:
        bounds.append(("renyi_reverse", UPPER, "D_alpha", a, _renyi_reverse(a, tv, p_min, q_min)))
    bounds += [
        ("tv_lower_relinfo", LOWER, "TV", None, one),
        ("tv_lower_two_param", LOWER, "TV", None, two),
        ("tv_upper_from_kl", UPPER, "TV", None, _tv_upper_from_kl(kl_pq)),
    ]
    by_name = {name: v for name, _, _, order, v in bounds if order is None}
    orderings = {k: _le(by_name[a], by_name[b]) for k, (a, b) in ORDERING_PAIRS.items()}
    return BoundTable(exact, bounds, orderings)




def bound_holds(direction: str, value, target):
    """Vectorized soundness test at relative tolerance CHECK_RTOL."""
    value = np.asarray(value, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    with np.errstate(invalid="ignore"):
        slack = CHECK_RTOL * np.maximum(1.0, np.where(np.isfinite(target), np.abs(target), 0.0))
        if direction == UPPER:
            return (value >= target - slack) | (value == np.inf)
        return (value <= target + slack) | (target == np.inf)


# --------------------------------------------------------------------------
# single-pair report


@dataclass
class BoundReport:
    pair: MeasurePair
    exact: dict
    bounds: list[BoundValue]
    orderings: dict[str, bool | None]
    pi_q: float
    pi_q_exact: bool
    extras: dict = field(default_factory=dict)
    label: str | None = None

    def target_value(self, b: BoundValue) -> float:
        if b.target == "D_alpha":
            return self.exact["renyi"][alpha_key(b.order)]
        return self.exact[TARGET_KEYS[b.target]]

    def holds(self, b: BoundValue) -> bool | None:
        if not b.applicable:
            return None
        return bool(bound_holds(b.direction, b.value, self.target_value(b)))

    def find(self, name: str, order: float | None = None) -> BoundValue:
        for b in self.bounds:
            if b.name == name and (order is None or b.order == order):
                return b
        raise KeyError(name)

    @property
    def all_hold(self) -> bool:
        return all(self.holds(b) is not False for b in self.bounds)

    def to_dict(self, base: str = "nats") -> dict:
        scale = _base_scale(base)
        exact = {}
        for key, v in self.exact.items():
            if key == "renyi":
                exact[key] = {k: x * scale for k, x in v.items()}
            else:
                exact[key] = v * scale if key in _LOG_EXACT else v
        bounds = []
        for b in self.bounds:
            s = scale if b.target in LOG_TARGETS else 1.0
            bounds.append({
                "name": b.name,
                "direction": b.direction,
                "target": b.target,
                "order": b.order,
                "value": b.value * s if b.applicable else None,
                "applicable": b.applicable,
                "reason": b.reason,
                "holds": self.holds(b),
            })
        return {
            "pair": self.pair.to_dict() | ({"id": self.label} if self.label else {}),
            "base": base,
            "exact": exact,
            "bounds": bounds,
            "orderings": dict(self.orderings),
            "pi_q": self.pi_q,
            "pi_q_exact": self.pi_q_exact,
            "extras": self.extras,
        }

    def to_json(self, base: str = "nats", indent: int | None = 2) -> str:
        return dumps(self.to_dict(base), indent=indent)


_LOG_EXACT = {"kl_pq", "kl_qp", "d2", "d_half"}


def _base_scale(base: str) -> float:
    if base == "nats":
        return 1.0
    if base == "bits":
        return NATS_TO_BITS
    raise RevPinskerError(f"base must be 'nats' or 'bits', got {base!r}")


def jsonable(obj):
    """Replace non-finite floats by the strings 'inf', '-inf', 'nan'."""
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj, indent: int | None = 2) -> str:
    # json writes floats with repr, the shortest string that round-trips
    return json.dumps(jsonable(obj), indent=indent, allow_nan=False)


def _try(name, direction, target, fn, order=None) -> BoundValue:
    try:
        b = fn()
    except (InapplicableError, ZeroQMinError, ZeroMinError, NotMutuallyACError,
            TVOutOfRangeError, BadBalanceError) as exc:
        return BoundValue(name, math.nan, direction, target, False, str(exc), order)
    return BoundValue(name, b.value, direction, target, True, "", order)


def bound_report(pair: MeasurePair, label: str | None = None) -> BoundReport:
    """Every exact divergence and every applicable bound for one pair."""
    p, q = pair.p, pair.q
    tv = min(float(tv_array(p, q)), 2.0)
    l2 = float(l2_array(p, q))
    kl_pq = float(kl_array(p, q))
    renyi = {alpha_key(a): float(renyi_array(p, q, a)) for a in REPORT_RENYI_ORDERS}
    d2 = renyi["2"]
    chi2 = math.inf if np.any(q == 0) else float(chi2_array(p, q))
    exact = {
        "kl_pq": kl_pq,
        "kl_qp": float(kl_array(q, p)),
        "tv": tv,
        "chi2": chi2,
        "l2": l2,
        "d2": d2,
        "d_half": renyi["0.5"],
        "renyi": renyi,
    }
    pi_exact = balance_is_exact(pair.Q)
    pi_q = balance_coefficient(pair.Q, allow_approximate=True)
    b1, b2, qm, qM, pm = pair.beta1, pair.beta2, pair.q_min, pair.q_max, pair.p_min

    def chain(i):
        return lambda: BoundValue("", general_measure_chain(tv, b1, b2)[i], UPPER, "")

    one = two = None

    def tv_one():
        nonlocal one
        one = tv_lower_relinfo(pair)
        return BoundValue("", one[0], LOWER, "TV")

    def tv_two():
        nonlocal two
        two = tv_lower_two_param(pair)
        return BoundValue("", two[0], LOWER, "TV")

    bounds = [
        _try("pinsker", LOWER, "KL", lambda: pinsker_lower(tv)),
        _try("ow_refined_pinsker", LOWER, "KL", lambda: ow_refined_pinsker_lower(tv, pi_q)),
        _try("gilardoni_dual", LOWER, "KL_QP", lambda: gilardoni_dual_lower(tv)),
        _try("renyi_pinsker", LOWER, "D_alpha", lambda: renyi_pinsker_lower(tv, 0.5), order=0.5),
        _try("verdu", UPPER, "KL", lambda: verdu_upper(tv, b1)),
        _try("thm1", UPPER, "KL", lambda: thm1_upper(tv, b1, b2)),
        _try("csiszar_talata", UPPER, "KL", lambda: csiszar_talata_upper(tv, qm)),
        _try("thm3", UPPER, "KL", lambda: thm3_upper(tv, qm, b2)),
        _try("corollary", UPPER, "KL", lambda: corollary_upper(tv, qm)),
        _try("euclidean", UPPER, "D2", lambda: euclidean_upper(l2, qm)),
        _try("euclidean_loose", UPPER, "D2",
             lambda: BoundValue("", float(_euclidean_loose(l2, _check_q_min(qm))), UPPER, "D2")),
        _try("general_chain_chi2", UPPER, "chi2", chain(0)),
        _try("general_chain_d2", UPPER, "D2", chain(1)),
        _try("general_chain_kl", UPPER, "KL", chain(2)),
    ]
    for a in REPORT_RENYI_ORDERS:
        bounds.append(_try("renyi_reverse", UPPER, "D_alpha",
                           lambda a=a: renyi_reverse_upper(a, tv, pm, qm), order=a))
    bounds += [
        _try("tv_lower_relinfo", LOWER, "TV", tv_one),
        _try("tv_lower_two_param", LOWER, "TV", tv_two),
        _try("tv_upper_from_kl", UPPER, "TV", lambda: tv_upper_from_kl(kl_pq)),
    ]
    by_name = {(b.name, b.order): b for b in bounds}

    def cmp(small, large):
        s, g = by_name[small], by_name[large]
        if not (s.applicable and g.applicable):
            return None
        return bool(_le(s.value, g.value))

    orderings = {k: cmp((a, None), (b, None)) for k, (a, b) in ORDERING_PAIRS.items()}
    extras = {"beta1": b1, "beta2": b2, "q_min": qm, "q_max": qM, "p_min": pm}
    if qm > 0:
        extras["beta2_floor"] = beta2_floor(qm, qM, tv)
    if one is not None:
        extras["tv_lower_relinfo_eta"] = one[1]
    if two is not None:
        extras["tv_lower_two_param_eta1"] = two[1]
        extras["tv_lower_two_param_eta2"] = two[2]
    return BoundReport(pair, exact, bounds, orderings, pi_q, pi_exact, extras, label or pair.label)
