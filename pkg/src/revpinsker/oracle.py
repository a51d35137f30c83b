"""Brute-force ground truth.

Type-class enumeration for constrained KL minimization, the closed-form
minimum over non-typical distributions, and seeded randomized searches for
violations of any registered inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np
from scipy.special import comb, rel_entr

from . import bounds as B
from ._numerics import binary_kl, phi
from .divergence import renyi_array
from .errors import (
    AlphabetTooLargeError,
    EnumerationBudgetError,
    GridTooCoarseError,
    InfeasibleDeltaError,
    NoFeasiblePointError,
    NonPositiveDeltaError,
    NotStrictlyPositiveError,
    UnknownInequalityError,
)
from .measure import (
    DiscreteDistribution,
    MeasurePair,
    PairSampler,
    balance_coefficient_batch,
    build_distribution,
    pair_from_arrays,
)

ENUMERATION_BUDGET = 20_000_000
D_STAR_MIN_GRID = 50
SANOV_MIN_GRID = 200
SANOV_MAX_ALPHABET = 4
D_STAR_SEMANTICS = "upper bound on infimum, gap O(n/m)"


def exact_fraction(x: float) -> Fraction:
    """Rational read of a float through its shortest decimal repr (0.1 -> 1/10)."""
    return Fraction(repr(float(x)))


# --------------------------------------------------------------------------
# type-class grids


@dataclass(frozen=True)
class TypeClassGrid:
    """All probability vectors with entries k/m on n atoms, in lexicographic order."""

    n: int
    m: int

    @property
    def count(self) -> int:
        return int(comb(self.m + self.n - 1, self.n - 1, exact=True))

    def __len__(self) -> int:
        return self.count

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        for block in self.blocks():
            yield from map(tuple, block.tolist())

    def blocks(self) -> Iterator[np.ndarray]:
        """Integer count vectors as (rows, n) int64 arrays, lexicographic overall."""
        n, m = self.n, self.m
        if n == 1:
            yield np.array([[m]], dtype=np.int64)
            return
        if n == 2:
            k = np.arange(m + 1, dtype=np.int64)
            yield np.stack([k, m - k], axis=1)
            return
        yield from self._blocks(n, m, ())

    def _blocks(self, n: int, r: int, prefix: tuple[int, ...]):
        if n == 3:
            # all (a, b, r-a-b) with a + b <= r, a then b ascending
            i, j = np.triu_indices(r + 1)
            a = i.astype(np.int64)
            b = (j - i).astype(np.int64)
            block = np.empty((a.size, len(prefix) + 3), dtype=np.int64)
            block[:, : len(prefix)] = prefix
            block[:, -3] = a
            block[:, -2] = b
            block[:, -1] = r - a - b
            yield block
            return
        for k in range(r + 1):
            yield from self._blocks(n - 1, r - k, prefix + (k,))

    def probabilities(self) -> Iterator[np.ndarray]:
        for block in self.blocks():
            yield block / self.m


def _check_budget(grid: TypeClassGrid, budget: int) -> None:
    if grid.count > budget:
        raise EnumerationBudgetError(
            f"grid n={grid.n}, m={grid.m} has {grid.count} points, over the budget of {budget}"
        )


def _positive_q(Q: DiscreteDistribution) -> np.ndarray:
    q = np.asarray(Q.probs, dtype=np.float64)
    if not np.all(q > 0):
        raise NotStrictlyPositiveError("Q must be strictly positive")
    return q


def _kl_rows(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    return np.sum(rel_entr(p, q), axis=-1)


# --------------------------------------------------------------------------
# D*(eps, Q)


@dataclass(frozen=True)
class DStarResult:
    value: float
    argmin: DiscreteDistribution
    grid_value: float
    grid_argmin: DiscreteDistribution
    m: int
    metadata: dict = field(default_factory=dict)

    def __iter__(self):
        return iter((self.value, self.argmin))


def _tv_feasible_rows(k: np.ndarray, m: int, q: np.ndarray, q_frac, eps: float, eps_frac) -> np.ndarray:
    tv = np.sum(np.abs(k / m - q), axis=-1)
    ok = tv >= eps + 1e-12
    unsure = np.flatnonzero(~ok & (tv > eps - 1e-12))
    for r in unsure:
        # sum |k - m q| >= m eps, in exact rationals
        lhs = sum(abs(int(ki) - m * qf) for ki, qf in zip(k[r], q_frac))
        ok[r] = lhs >= m * eps_frac
    return ok


def _project_to_boundary(x: np.ndarray, q: np.ndarray, eps: float) -> np.ndarray | None:
    """Move along the ray from Q through x until TV = eps (float TV >= eps)."""
    tv = float(np.sum(np.abs(x - q)))
    if tv == 0.0:
        return None if eps > 0 else x
    c = eps / tv
    y = q + c * (x - q)
    for _ in range(64):
        if np.all(y >= 0) and float(np.sum(np.abs(y - q))) >= eps:
            break
        c = np.nextafter(c, np.inf)
        y = q + c * (x - q)
    else:
        return None
    if np.any(y < 0):
        return None
    return y


def d_star(Q: DiscreteDistribution, eps: float, m: int, budget: int = ENUMERATION_BUDGET) -> DStarResult:
    """inf of D(P||Q) over P with |P - Q| >= eps, approximated from above.

    Minimizes over the type-class grid with denominator m (feasibility decided
    in exact rational arithmetic near the boundary), then runs one local pass:
    the minimizer is pushed onto the TV = eps boundary along the ray from Q and
    every coordinate-pair move of size 1/(10m), re-projected, is tried once.
    The returned value is attained by a feasible point, so it can only
    overestimate the infimum.
    """
    q = _positive_q(Q)
    n = q.size
    if m < D_STAR_MIN_GRID:
        raise GridTooCoarseError(f"grid denominator must be at least {D_STAR_MIN_GRID}, got {m}")
    eps = float(eps)
    if math.isnan(eps) or eps < 0:
        raise NoFeasiblePointError(f"eps must be non-negative, got {eps!r}")
    max_tv = 2.0 * (1.0 - float(q.min()))
    if eps > max_tv + 1e-15:
        raise NoFeasiblePointError(f"eps={eps} exceeds the largest achievable distance {max_tv}")
    grid = TypeClassGrid(n, m)
    _check_budget(grid, budget)
    q_frac = [exact_fraction(x) for x in q]
    eps_frac = exact_fraction(eps)
    best_val, best_row = math.inf, None
    for block in grid.blocks():
        feas = _tv_feasible_rows(block, m, q, q_frac, eps, eps_frac)
        if not np.any(feas):
            continue
        rows = block[feas]
        vals = _kl_rows(rows / m, q)
        j = int(np.argmin(vals))
        if vals[j] < best_val:
            best_val, best_row = float(vals[j]), rows[j]
    if best_row is None:
        raise NoFeasiblePointError(f"no grid point with m={m} reaches distance {eps}")
    x_grid = best_row / m
    labels = Q.alphabet
    grid_argmin = build_distribution(labels, x_grid, renormalize=True)
    if eps == 0.0:
        return DStarResult(0.0, grid_argmin, best_val, grid_argmin, m, _meta(n, m, eps))

    x, val = x_grid, best_val
    y = _project_to_boundary(x_grid, q, eps)
    if y is not None:
        v = float(_kl_rows(y, q))
        if v < val:
            x, val = y, v
    h = 1.0 / (10 * m)
    for i in range(n):
        for j in range(n):
            if i == j or x[j] < h:
                continue
            z = x.copy()
            z[i] += h
            z[j] -= h
            z = _project_to_boundary(z, q, eps)
            if z is None:
                continue
            v = float(_kl_rows(z, q))
            if v < val:
                x, val = z, v
    argmin = build_distribution(labels, x, renormalize=True)
    return DStarResult(val, argmin, best_val, grid_argmin, m, _meta(n, m, eps))


def _meta(n: int, m: int, eps: float) -> dict:
    return {"semantics": D_STAR_SEMANTICS, "n": n, "m": m, "eps": eps, "step": 1.0 / (10 * m)}


# --------------------------------------------------------------------------
# minimum KL over non-typical distributions


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not delta > 0 or math.isnan(delta):
        raise NonPositiveDeltaError(f"delta must be positive, got {delta!r}")
    return delta


def sanov_exponent_exact_array(q: np.ndarray, delta: float) -> np.ndarray:
    """Row-wise min over atoms a and signs s of d((1 + s delta) Q(a) || Q(a)).

    Rows with no feasible (a, s) give +inf.
    """
    q = np.atleast_2d(np.asarray(q, dtype=np.float64))
    out = np.full(q.shape[0], np.inf)
    for s in (1.0, -1.0):
        t = (1.0 + s * delta) * q
        ok = (t >= 0.0) & (t <= 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            d = np.where(ok, binary_kl(np.clip(t, 0.0, 1.0), np.clip(q, 1e-300, 1 - 1e-16)), np.inf)
        out = np.minimum(out, d.min(axis=-1))
    return out


def sanov_exponent_exact(Q: DiscreteDistribution, delta: float) -> float:
    """min D(P||Q) over P outside the delta-typical set.

    The non-typical set is a union of half-spaces {P(a) >= (1+delta)Q(a)} and
    {P(a) <= (1-delta)Q(a)}; on each the minimizer keeps P(a) on the boundary
    and spreads the rest proportionally to Q, which reduces to a binary KL.
    """
    q = _positive_q(Q)
    delta = _check_delta(delta)
    v = float(sanov_exponent_exact_array(q, delta)[0])
    if math.isinf(v):
        raise InfeasibleDeltaError(f"no distribution violates typicality at delta={delta}")
    return v


def sanov_exponent_grid(Q: DiscreteDistribution, delta: float, m: int,
                        budget: int = ENUMERATION_BUDGET) -> float:
    """Same minimum restricted to types with denominator m (n <= 4)."""
    q = _positive_q(Q)
    delta = _check_delta(delta)
    if m < SANOV_MIN_GRID:
        raise GridTooCoarseError(f"grid denominator must be at least {SANOV_MIN_GRID}, got {m}")
    if q.size > SANOV_MAX_ALPHABET:
        raise AlphabetTooLargeError(f"grid enumeration supports at most {SANOV_MAX_ALPHABET} atoms")
    grid = TypeClassGrid(q.size, m)
    _check_budget(grid, budget)
    d = exact_fraction(delta)
    # k/m violates typicality at a iff k >= hi[a] or k <= lo[a], exactly
    hi = np.array([math.ceil(m * (1 + d) * exact_fraction(x)) for x in q], dtype=np.int64)
    lo = np.array([math.floor(m * (1 - d) * exact_fraction(x)) for x in q], dtype=np.int64)
    best = math.inf
    for block in grid.blocks():
        viol = np.any((block >= hi) | (block <= lo), axis=-1)
        if np.any(viol):
            best = min(best, float(np.min(_kl_rows(block[viol] / m, q))))
    if math.isinf(best):
        raise InfeasibleDeltaError(f"no type with m={m} violates typicality at delta={delta}")
    return best


# --------------------------------------------------------------------------
# counterexample search


@dataclass(frozen=True)
class Witness:
    inequality: str
    pair: MeasurePair
    lhs: float
    rhs: float
    slack: float
    seed: int | None
    trial: int | None
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "inequality": self.inequality,
            "pair": self.pair.to_dict(),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "seed": self.seed,
            "trial": self.trial,
            "params": self.params,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return B.dumps(self.to_dict(), indent=indent)


SEARCH_RTOL = 1e-9
EXACT_PI_BATCH_LIMIT = 12

# Each check maps (p, q, params) of shape (k, n) to (lhs, rhs); the claim is
# lhs <= rhs.
Check = Callable[[np.ndarray, np.ndarray, dict], tuple[np.ndarray, np.ndarray]]


def pi_q_batch(q: np.ndarray) -> np.ndarray:
    """Exact balance coefficient for small alphabets; 1/2 otherwise.

    1/2 is the smallest possible phi argument's image (phi(1/2) = 1/2 is the
    minimum of phi), so the stand-in only weakens the refined Pinsker bound.
    """
    q = np.atleast_2d(q)
    if q.shape[-1] <= EXACT_PI_BATCH_LIMIT:
        return balance_coefficient_batch(q)
    return np.full(q.shape[0], 0.5)


def _table_check(name: str, order: float | None = None, lower_is_bound: bool = False) -> Check:
    def check(p, q, params):
        o = params.get("alpha", order)
        orders = (o,) if o is not None else B.REPORT_RENYI_ORDERS
        t = B.bound_table(p, q, pi_q_batch(q), renyi_orders=orders)
        for bname, direction, target, border, values in t.bounds:
            if bname == name and (o is None or border == o):
                tv = t.target_values(target, border)
                return (values, tv) if direction == B.LOWER else (tv, values)
        raise UnknownInequalityError(name)
    return check


def _ordering_check(small: str, large: str) -> Check:
    def check(p, q, params):
        t = B.bound_table(p, q, pi_q_batch(q))
        vals = {b[0]: b[4] for b in t.bounds if b[3] is None}
        return vals[small], vals[large]
    return check


def _renyi_pinsker_check(p, q, params):
    a = float(params.get("alpha", 0.5))
    tv = np.sum(np.abs(p - q), axis=-1)
    return B._renyi_pinsker(tv, a), renyi_array(p, q, a)


def _renyi_reverse_check(p, q, params):
    a = float(params.get("alpha", 2.0))
    tv = np.minimum(np.sum(np.abs(p - q), axis=-1), 2.0)
    return renyi_array(p, q, a), B._renyi_reverse(a, tv, p.min(axis=-1), q.min(axis=-1))


def _beta2_floor_check(p, q, params):
    tv = np.sum(np.abs(p - q), axis=-1)
    r = p / q
    return B._beta2_floor(q.min(axis=-1), q.max(axis=-1), tv), r.min(axis=-1)


def _paper_eu_check(p, q, params):
    delta = float(params.get("delta", 0.1))
    exact = sanov_exponent_exact_array(q, delta)
    return exact, np.log1p(q.min(axis=-1) * delta * delta / 2.0)


def _corrected_eu_check(p, q, params):
    delta = float(params.get("delta", 0.1))
    exact = sanov_exponent_exact_array(q, delta)
    return exact, np.log1p(2.0 * q.min(axis=-1) * delta * delta)


def _e_lower_check(p, q, params):
    delta = float(params.get("delta", 0.1))
    e_l = phi(pi_q_batch(q)) * q.min(axis=-1) ** 2 * delta * delta
    return e_l, sanov_exponent_exact_array(q, delta)


INEQUALITIES: dict[str, Check] = {
    "pinsker": _table_check("pinsker"),
    "ow_refined_pinsker": _table_check("ow_refined_pinsker"),
    "gilardoni_dual": _table_check("gilardoni_dual"),
    "renyi_pinsker": _renyi_pinsker_check,
    "verdu": _table_check("verdu"),
    "thm1": _table_check("thm1"),
    "csiszar_talata": _table_check("csiszar_talata"),
    "thm3": _table_check("thm3"),
    "corollary": _table_check("corollary"),
    "euclidean": _table_check("euclidean"),
    "general_chain_chi2": _table_check("general_chain_chi2"),
    "general_chain_kl": _table_check("general_chain_kl"),
    "renyi_reverse": _renyi_reverse_check,
    "tv_lower_relinfo": _table_check("tv_lower_relinfo"),
    "tv_lower_two_param": _table_check("tv_lower_two_param"),
    "tv_upper_from_kl": _table_check("tv_upper_from_kl"),
    "beta2_floor": _beta2_floor_check,
    **{k: _ordering_check(a, b) for k, (a, b) in B.ORDERING_PAIRS.items()},
    "exponent_lower_bound": _e_lower_check,
    "corrected_EU_brackets_exact_exponent": _corrected_eu_check,
    "paper_EU_brackets_exact_exponent": _paper_eu_check,
}

# claims that are not proven and are expected (or known) to fail somewhere
UNPROVEN = frozenset({"thm1_le_general_chain", "paper_EU_brackets_exact_exponent"})


def _lookup(inequality_id: str) -> Check:
    try:
        return INEQUALITIES[inequality_id]
    except KeyError:
        raise UnknownInequalityError(
            f"unknown inequality {inequality_id!r}; known: {', '.join(sorted(INEQUALITIES))}"
        ) from None


def violations(lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    lhs = np.asarray(lhs, dtype=np.float64)
    rhs = np.asarray(rhs, dtype=np.float64)
    with np.errstate(invalid="ignore"):
        scale = np.maximum(1.0, np.where(np.isfinite(rhs), np.abs(rhs), 0.0))
        bad = lhs > rhs + SEARCH_RTOL * scale
    return bad | np.isnan(lhs) | np.isnan(rhs)


def evaluate_inequality(inequality_id: str, pair: MeasurePair, **params) -> Witness | None:
    """Check one fixed, strictly positive pair; a witness if the claim fails."""
    check = _lookup(inequality_id)
    if not pair.strictly_positive:
        raise NotStrictlyPositiveError("inequality checks need strictly positive pairs")
    lhs, rhs = check(pair.p[None, :], pair.q[None, :], params)
    if not violations(lhs, rhs)[0]:
        return None
    l, r = float(lhs[0]), float(rhs[0])
    return Witness(inequality_id, pair, l, r, l - r, None, None, dict(params))


def counterexample_search(inequality_id: str, sampler: PairSampler, trials: int,
                          chunk: int = 2000, **params) -> Witness | None:
    """First sampled pair (in draw order) violating the inequality, or None."""
    check = _lookup(inequality_id)
    done = 0
    labels = [str(i) for i in range(sampler.alphabet_size)]
    while done < trials:
        k = min(chunk, trials - done)
        p, q = sampler.draw_arrays(k)
        lhs, rhs = check(p, q, params)
        bad = np.flatnonzero(violations(lhs, rhs))
        if bad.size:
            j = int(bad[0])
            pair = pair_from_arrays(p[j], q[j], labels, renormalize=True)
            l, r = float(lhs[j]), float(rhs[j])
            return Witness(inequality_id, pair, l, r, l - r, sampler.seed, done + j, dict(params))
        done += k
    return None


def kl_rows(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Plain KL per row via scipy's rel_entr, independent of the divergence module."""
    return _kl_rows(np.asarray(p, dtype=np.float64), np.asarray(q, dtype=np.float64))


__all__ = [
    "TypeClassGrid",
    "DStarResult",
    "d_star",
    "sanov_exponent_exact",
    "sanov_exponent_exact_array",
    "sanov_exponent_grid",
    "Witness",
    "INEQUALITIES",
    "UNPROVEN",
    "counterexample_search",
    "evaluate_inequality",
    "kl_rows",
    "exact_fraction",
    "pi_q_batch",
    "violations",
]
