"""Bracketing the decay exponent of the probability of a non-typical empirical
distribution, plus a seeded Monte-Carlo estimate of that probability."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict
from typing import NamedTuple

import numpy as np

from ._numerics import phi
from .errors import InfeasibleDeltaError, NonPositiveDeltaError, NotStrictlyPositiveError, RevPinskerError
from .measure import DiscreteDistribution, balance_coefficient, balance_is_exact
from .oracle import sanov_exponent_exact

MC_CHUNK = 10_000


@dataclass(frozen=True)
class ExponentBracket:
    """Lower and upper estimates of min D(P||Q) over non-typical P, in nats.

    ``e_upper_paper`` uses the minimal distance delta*q_min for a non-typical
    P; ``e_upper_corrected`` uses 2*delta*q_min, which is what the one-atom
    bound |P-Q| >= 2 max_a |P(a) - Q(a)| actually guarantees.  ``discrepancy``
    is set when the exact exponent exceeds the printed upper estimate.
    """

    delta: float
    q_min: float
    pi_q: float
    pi_q_exact: bool
    e_lower: float
    e_lower_loose: float
    e_upper_paper: float
    e_upper_corrected: float
    exact: float
    ratio_paper: float
    ratio_limit: float
    discrepancy: bool

    def to_dict(self) -> dict:
        return asdict(self)


def _check(Q: DiscreteDistribution, delta: float) -> tuple[np.ndarray, float]:
    delta = float(delta)
    if not delta > 0 or math.isnan(delta):
        raise NonPositiveDeltaError(f"delta must be positive, got {delta!r}")
    q = np.asarray(Q.probs)
    if not np.all(q > 0):
        raise NotStrictlyPositiveError("Q must be strictly positive")
    return q, delta


def exponent_bracket(Q: DiscreteDistribution, delta: float) -> ExponentBracket:
    q, delta = _check(Q, delta)
    q_min = float(q.min())
    pi_q = balance_coefficient(Q, allow_approximate=True)
    ph = float(phi(pi_q))
    e_lower = ph * q_min * q_min * delta * delta
    e_loose = 0.5 * q_min * q_min * delta * delta
    e_paper = math.log1p(0.5 * q_min * delta * delta)
    e_corr = math.log1p(2.0 * q_min * delta * delta)
    try:
        exact = sanov_exponent_exact(Q, delta)
    except InfeasibleDeltaError:
        exact = math.inf
    return ExponentBracket(
        delta=delta,
        q_min=q_min,
        pi_q=pi_q,
        pi_q_exact=balance_is_exact(Q),
        e_lower=e_lower,
        e_lower_loose=e_loose,
        e_upper_paper=e_paper,
        e_upper_corrected=e_corr,
        exact=exact,
        ratio_paper=e_paper / e_lower,
        # small-delta limit of the ratio: q_min delta^2 / 2 over phi q_min^2 delta^2
        ratio_limit=1.0 / (2.0 * ph * q_min),
        discrepancy=bool(exact > e_paper),
    )


class MonteCarloEstimate(NamedTuple):
    p_hat: float
    neg_log_rate: float
    defined: bool
    hits: int
    trials: int
    N: int


def _count_nontypical(q: np.ndarray, delta: float, N: int, trials: int, rng: np.random.Generator) -> int:
    counts = rng.multinomial(N, q, size=trials)
    dev = np.abs(counts - N * q)
    # boundary hits count as non-typical; the slack absorbs rounding in delta*N*q
    return int(np.count_nonzero(np.any(dev >= delta * N * q * (1.0 - 1e-12), axis=-1)))


def montecarlo_nontypical(Q: DiscreteDistribution, delta: float, N: int, trials: int, seed: int,
                          workers: int = 1) -> MonteCarloEstimate:
    """Fraction of ``trials`` length-N i.i.d. Q sequences whose empirical
    distribution is not delta-typical, and -(1/N) ln of that fraction.

    Trials are split into fixed chunks, each with its own child seed of
    ``seed``, so the result does not depend on ``workers``.
    """
    q, delta = _check(Q, delta)
    if int(N) != N or N < 1:
        raise RevPinskerError(f"N must be a positive integer, got {N!r}")
    if int(trials) != trials or trials < 1:
        raise RevPinskerError(f"trials must be a positive integer, got {trials!r}")
    N, trials = int(N), int(trials)
    sizes = [MC_CHUNK] * (trials // MC_CHUNK)
    if trials % MC_CHUNK:
        sizes.append(trials % MC_CHUNK)
    children = np.random.SeedSequence(seed).spawn(len(sizes))

    def run(i: int) -> int:
        return _count_nontypical(q, delta, N, sizes[i], np.random.default_rng(children[i]))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(run, range(len(sizes))))
    else:
        hits = sum(run(i) for i in range(len(sizes)))
    p_hat = hits / trials
    if hits == 0:
        return MonteCarloEstimate(0.0, math.nan, False, 0, trials, N)
    return MonteCarloEstimate(p_hat, -math.log(p_hat) / N, True, hits, trials, N)
