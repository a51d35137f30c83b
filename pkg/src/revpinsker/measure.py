"""Finite discrete distributions, (P, Q) pairs and seeded pair generation.

All logarithms are natural.  A :class:`MeasurePair` caches the statistics the
bounds need (density-ratio extremes, minima, relative information) so they are
computed once per pair.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    AlphabetMismatchError,
    AlphabetTooLargeForExactError,
    DuplicateLabelError,
    EmptyAlphabetError,
    FloorTooLargeError,
    NegativeMassError,
    RevPinskerError,
    SumOutOfToleranceError,
)

SUM_TOLERANCE = 1e-12
EXACT_SUBSET_LIMIT = 20
APPROX_GRID = 1e-6


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """Probability vector indexed by an ordered tuple of unique labels."""

    alphabet: tuple[str, ...]
    probs: np.ndarray

    def __len__(self) -> int:
        return len(self.alphabet)

    @property
    def size(self) -> int:
        return len(self.alphabet)

    @property
    def strictly_positive(self) -> bool:
        return bool(np.all(self.probs > 0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiscreteDistribution):
            return NotImplemented
        return self.alphabet == other.alphabet and np.array_equal(self.probs, other.probs)

    def to_dict(self) -> dict:
        return {"alphabet": list(self.alphabet), "probs": [float(x) for x in self.probs]}


def build_distribution(
    labels: Sequence, masses: Sequence[float], renormalize: bool = False
) -> DiscreteDistribution:
    """Validate ``masses`` and wrap them as a :class:`DiscreteDistribution`.

    With ``renormalize`` each mass is divided by the total; otherwise the total
    must already be within ``SUM_TOLERANCE`` of one and the masses are kept
    bit-for-bit.
    """
    labels = tuple(str(x) for x in labels)
    m = np.asarray(masses, dtype=np.float64)
    if len(labels) == 0:
        raise EmptyAlphabetError("alphabet is empty")
    if m.ndim != 1 or m.shape[0] != len(labels):
        raise RevPinskerError(
            f"got {m.size} masses for {len(labels)} labels; lengths must match"
        )
    if len(set(labels)) != len(labels):
        dup = sorted({x for x in labels if labels.count(x) > 1})
        raise DuplicateLabelError(f"duplicate labels: {dup}")
    if not np.all(np.isfinite(m)):
        raise NegativeMassError("masses must be finite")
    if np.any(m < 0):
        raise NegativeMassError(f"negative mass at index {int(np.argmax(m < 0))}")
    total = math.fsum(m)
    if renormalize:
        if total <= 0:
            raise SumOutOfToleranceError("cannot renormalize masses summing to zero")
        m = m / total
    elif abs(total - 1.0) > SUM_TOLERANCE:
        raise SumOutOfToleranceError(f"masses sum to {total!r}, expected 1 within {SUM_TOLERANCE}")
    return DiscreteDistribution(labels, _frozen(m))


def uniform(n: int, labels: Sequence | None = None) -> DiscreteDistribution:
    labels = labels if labels is not None else [str(i) for i in range(n)]
    return build_distribution(labels, np.full(n, 1.0 / n), renormalize=True)


@dataclass(frozen=True, eq=False)
class MeasurePair:
    """A pair (P, Q) on a common alphabet with cached pair statistics.

    ``rel_info`` holds ln(P/Q) per atom (+inf where Q=0<P, -inf where P=0<Q).
    ``beta1`` is 1/max P/Q (0 when the ratio is unbounded) and ``beta2`` is
    min P/Q over atoms with Q>0.
    """

    P: DiscreteDistribution
    Q: DiscreteDistribution
    rel_info: np.ndarray
    beta1: float
    beta2: float
    q_min: float
    q_max: float
    p_min: float
    label: str | None = field(default=None)

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.P.alphabet

    @property
    def p(self) -> np.ndarray:
        return self.P.probs

    @property
    def q(self) -> np.ndarray:
        return self.Q.probs

    @property
    def strictly_positive(self) -> bool:
        return self.P.strictly_positive and self.Q.strictly_positive

    @property
    def identical(self) -> bool:
        return bool(np.array_equal(self.p, self.q))

    def swapped(self) -> "MeasurePair":
        return make_pair(self.Q, self.P)

    def to_dict(self) -> dict:
        return {
            "alphabet": list(self.alphabet),
            "P": [float(x) for x in self.p],
            "Q": [float(x) for x in self.q],
        }


def make_pair(P: DiscreteDistribution, Q: DiscreteDistribution, label: str | None = None) -> MeasurePair:
    """Pair two distributions on the same alphabet and compute pair statistics.

    Atoms where both masses vanish are dropped (they contribute nothing to any
    divergence under the 0 f(0/0) = 0 convention).
    """
    if P.alphabet != Q.alphabet:
        raise AlphabetMismatchError("P and Q must share labels in the same order")
    keep = (P.probs > 0) | (Q.probs > 0)
    if not np.all(keep):
        labels = tuple(a for a, k in zip(P.alphabet, keep) if k)
        P = DiscreteDistribution(labels, _frozen(P.probs[keep]))
        Q = DiscreteDistribution(labels, _frozen(Q.probs[keep]))
    p, q = P.probs, Q.probs
    with np.errstate(divide="ignore"):
        rel = np.log(p / q)
    qpos = q > 0
    ratio = p[qpos] / q[qpos]
    if np.any(~qpos):
        beta1 = 0.0
    else:
        beta1 = float(1.0 / ratio.max())
    beta2 = float(ratio.min()) if ratio.size else 0.0
    return MeasurePair(
        P=P,
        Q=Q,
        rel_info=_frozen(rel),
        beta1=beta1,
        beta2=beta2,
        q_min=float(q.min()),
        q_max=float(q.max()),
        p_min=float(p.min()),
        label=label,
    )


def pair_from_arrays(p: Sequence[float], q: Sequence[float], labels: Sequence | None = None,
                     renormalize: bool = False) -> MeasurePair:
    """Convenience constructor used throughout the tests and the CLI."""
    p = np.asarray(p, dtype=np.float64)
    labels = labels if labels is not None else [str(i) for i in range(p.size)]
    return make_pair(build_distribution(labels, p, renormalize),
                     build_distribution(labels, q, renormalize))


# --------------------------------------------------------------------------
# balance coefficient


def _subset_sums(q: np.ndarray) -> np.ndarray:
    sums = np.zeros(1)
    for x in q:
        sums = np.concatenate((sums, sums + x))
    return sums


def _balance_exact(q: np.ndarray) -> float:
    s = _subset_sums(q)
    return float(np.max(np.minimum(s, 1.0 - s)))


def _balance_approx(q: np.ndarray, grid: float = APPROX_GRID) -> float:
    # Subset-sum reachability on a mass grid; each reachable cell remembers the
    # true float sum of one subset landing there, so the returned value is
    # attained by an actual subset (a lower estimate of the exact maximum).
    w = np.rint(q / grid).astype(np.int64)
    cap = int(round(0.5 / grid)) + len(q) + 1
    reach = np.zeros(cap + 1, dtype=bool)
    sums = np.zeros(cap + 1)
    reach[0] = True
    for wi, qi in zip(w, q):
        if wi <= 0 or wi > cap:
            continue
        src = reach[:-wi].copy()
        new = src & ~reach[wi:]
        sums[wi:][new] = sums[:-wi][new] + qi
        reach[wi:] |= src
    s = sums[reach]
    return float(np.max(np.minimum(s, 1.0 - s)))


def balance_coefficient(Q: DiscreteDistribution, allow_approximate: bool = False) -> float:
    """max over subsets A of min{Q(A), 1 - Q(A)}.

    Exact subset enumeration for up to ``EXACT_SUBSET_LIMIT`` atoms.  Larger
    alphabets need ``allow_approximate=True``, which switches to a subset-sum
    search on a 1e-6 mass grid; use :func:`balance_is_exact` to label output.
    """
    q = np.asarray(Q.probs if isinstance(Q, DiscreteDistribution) else Q, dtype=np.float64)
    q = q[q > 0]
    if q.size <= EXACT_SUBSET_LIMIT:
        return _balance_exact(q)
    if not allow_approximate:
        raise AlphabetTooLargeForExactError(
            f"{q.size} atoms exceeds the exact limit {EXACT_SUBSET_LIMIT}; "
            "pass allow_approximate=True"
        )
    return _balance_approx(q)


def balance_is_exact(Q: DiscreteDistribution) -> bool:
    return int(np.count_nonzero(np.asarray(Q.probs) > 0)) <= EXACT_SUBSET_LIMIT


def subset_indicator_matrix(n: int) -> np.ndarray:
    """(n, 2**n) 0/1 matrix whose columns enumerate all subsets of n atoms."""
    idx = np.arange(2 ** n, dtype=np.int64)
    return ((idx[None, :] >> np.arange(n)[:, None]) & 1).astype(np.float64)


def balance_coefficient_batch(q: np.ndarray) -> np.ndarray:
    """Exact balance coefficient for each row of a (k, n) array, n <= 16."""
    q = np.asarray(q, dtype=np.float64)
    n = q.shape[-1]
    if n > 16:
        raise AlphabetTooLargeForExactError("batched exact balance coefficient supports n <= 16")
    s = q @ subset_indicator_matrix(n)
    return np.max(np.minimum(s, 1.0 - s), axis=-1)


# --------------------------------------------------------------------------
# seeded pair generation


class PairSampler:
    """Seeded source of random (P, Q) pairs.

    Each distribution is a normalized vector of unit exponentials (uniform on
    the simplex) mixed with the uniform distribution so every atom carries at
    least ``positivity_floor``.  Draws are consumed in order, so
    ``draw_arrays(k)`` returns exactly the next ``k`` pairs that ``k`` calls
    to :func:`sample_pair` would.
    """

    def __init__(self, seed: int, alphabet_size: int, positivity_floor: float = 0.0):
        if alphabet_size < 2:
            raise RevPinskerError("alphabet_size must be at least 2")
        if positivity_floor < 0:
            raise FloorTooLargeError("positivity_floor must be non-negative")
        if positivity_floor * alphabet_size >= 1:
            raise FloorTooLargeError(
                f"floor {positivity_floor} times {alphabet_size} atoms must be below 1"
            )
        self.seed = int(seed)
        self.alphabet_size = int(alphabet_size)
        self.positivity_floor = float(positivity_floor)
        self._rng = np.random.Generator(np.random.PCG64(self.seed))
        self.drawn = 0

    def spawn(self) -> "PairSampler":
        """Fresh sampler with the same parameters, rewound to the start."""
        return PairSampler(self.seed, self.alphabet_size, self.positivity_floor)

    def draw_arrays(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        e = self._rng.standard_exponential((k, 2, self.alphabet_size))
        x = e / e.sum(axis=-1, keepdims=True)
        w = self.positivity_floor * self.alphabet_size
        if w > 0:
            x = (1.0 - w) * x + self.positivity_floor
        self.drawn += k
        return x[:, 0, :], x[:, 1, :]


def sample_pair(sampler: PairSampler) -> MeasurePair:
    p, q = sampler.draw_arrays(1)
    labels = [str(i) for i in range(sampler.alphabet_size)]
    # renormalize absorbs the last-ulp drift of the mixing step
    return make_pair(build_distribution(labels, p[0], renormalize=True),
                     build_distribution(labels, q[0], renormalize=True),
                     label=f"seed={sampler.seed}#{sampler.drawn - 1}")


# --------------------------------------------------------------------------
# JSON files


def pair_from_dict(obj: dict) -> MeasurePair:
    for key in ("alphabet", "P", "Q"):
        if key not in obj:
            raise RevPinskerError(f"pair file is missing key {key!r}")
    renorm = bool(obj.get("renormalize", False))
    return make_pair(build_distribution(obj["alphabet"], obj["P"], renorm),
                     build_distribution(obj["alphabet"], obj["Q"], renorm))


def load_pair(path: str | Path) -> MeasurePair:
    with open(path, encoding="utf-8") as fh:
        return pair_from_dict(json.load(fh))


def distribution_from_dict(obj: dict, key: str = "Q") -> DiscreteDistribution:
    """Read a single distribution: ``{"alphabet": [...], "Q": [...]}`` (or ``"probs"``).

    Without an ``alphabet`` the atoms are labelled "0", "1", ...
    """
    masses = obj.get(key, obj.get("probs")) if isinstance(obj, dict) else None
    if masses is None:
        raise RevPinskerError(f"distribution file needs a '{key}' (or 'probs') array")
    labels = obj.get("alphabet", [str(i) for i in range(len(masses))])
    return build_distribution(labels, masses, bool(obj.get("renormalize", False)))


def load_distribution(path: str | Path, key: str = "Q") -> DiscreteDistribution:
    with open(path, encoding="utf-8") as fh:
        return distribution_from_dict(json.load(fh), key)
