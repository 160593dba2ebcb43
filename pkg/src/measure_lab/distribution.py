"""Depth-n discretisations of the push-forward measure.

A depth cloud has one entry per admissible label word of length n: the
truncated value sum(eps_k beta^-k), the cylinder mass, and certified
bounds [lo, hi] on the full digit-map value over the whole cylinder,
obtained from per-state value ranges (a Bellman fixed point with
contraction 1/beta).  CDF brackets follow by summing masses of entries
entirely below (lower) or not entirely above (upper) the query point.

``cdf_bracket`` computes brackets without materialising per-word entries:
words with equal truncated value and equal reachable-state support are
merged, which keeps the base-2 fixtures feasible at depth 12.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebraic import PisotNumber
from .automaton import LabeledAutomaton, transition_matrices
from .errors import CapExceeded, DeadState
from .parry import PerronData

CLOUD_CAP = 1_000_000


@dataclass(frozen=True)
class CloudEntry:
    word: tuple[int, ...]
    value: float
    mass: float
    lo: float
    hi: float


@dataclass(frozen=True)
class DepthCloud:
    depth: int
    entries: tuple[CloudEntry, ...]
    state_bounds: dict[str, tuple[float, float]]

    @property
    def total_mass(self) -> float:
        return float(sum(e.mass for e in self.entries))

    @property
    def max_radius(self) -> float:
        return max((e.hi - e.lo) for e in self.entries)

    @property
    def max_deviation(self) -> float:
        """Largest distance from a truncated value to its cylinder range."""
        return max(max(e.hi - e.value, e.value - e.lo) for e in self.entries)


def value_bounds(a: LabeledAutomaton, p: PisotNumber, tol: float = 1e-12) -> dict[str, tuple[float, float]]:
    """Per-state min/max of the digit-map value over infinite paths.

    Bellman iteration m(v) <- min/max over edges (label + m(target))/beta;
    the map contracts by 1/beta, and the returned intervals are inflated
    outward by the fixed-point gap, so they are genuine outer bounds.
    """
    beta = p.beta_float
    idx = a.state_index()
    out: list[list[tuple[int, int]]] = [[] for _ in a.states]
    for src, dst, label in a.edges:
        out[idx[src]].append((label, idx[dst]))
    for name, lst in zip(a.states, out):
        if not lst:
            raise DeadState(f"state {name!r} has no outgoing edge")

    n = a.n_states
    lo = np.zeros(n)
    hi = np.zeros(n)
    gap_target = tol * (1 - 1 / beta)
    for _ in range(100_000):
        new_lo = np.array([min((lab + lo[j]) / beta for lab, j in out[i]) for i in range(n)])
        new_hi = np.array([max((lab + hi[j]) / beta for lab, j in out[i]) for i in range(n)])
        change = max(np.abs(new_lo - lo).max(), np.abs(new_hi - hi).max())
        lo, hi = new_lo, new_hi
        if change <= gap_target:
            break
    return {
        name: (float(lo[i] - tol), float(hi[i] + tol))
        for name, i in ((s, idx[s]) for s in a.states)
    }


def _bound_arrays(a: LabeledAutomaton, bounds: dict[str, tuple[float, float]]):
    lo = np.array([bounds[s][0] for s in a.states])
    hi = np.array([bounds[s][1] for s in a.states])
    return lo, hi


def depth_cloud(
    a: LabeledAutomaton,
    p: PisotNumber,
    pd: PerronData,
    n: int,
    cap: int = CLOUD_CAP,
) -> DepthCloud:
    """One entry per admissible word of length n (words deduplicated; the
    matrix product already accounts for multiple runs)."""
    tm = transition_matrices(a)
    bounds = value_bounds(a, p)
    blo, bhi = _bound_arrays(a, bounds)
    beta = p.beta_float
    pows = [beta ** -(k + 1) for k in range(n)]
    tail = beta ** -n
    lam_pow = pd.lam ** -n

    entries: list[CloudEntry] = []
    word: list[int] = []

    def walk(row: np.ndarray, depth: int, value: float) -> None:
        if depth == n:
            support = row > 0
            mass = lam_pow * float(row @ pd.v_R)
            entries.append(
                CloudEntry(
                    word=tuple(word),
                    value=value,
                    mass=mass,
                    lo=value + tail * float(blo[support].min()),
                    hi=value + tail * float(bhi[support].max()),
                )
            )
            if len(entries) > cap:
                raise CapExceeded(f"cloud exceeds {cap} entries at depth {n}")
            return
        for label in a.alphabet:
            nxt = row @ tm.per_label[label]
            if nxt.max() > 0:
                word.append(label)
                walk(nxt, depth + 1, value + label * pows[depth])
                word.pop()

    walk(pd.v_L.copy(), 0, 0.0)
    return DepthCloud(depth=n, entries=tuple(entries), state_bounds=bounds)


def cdf_bounds(cloud: DepthCloud, x: float) -> tuple[float, float]:
    """Bracket of the measure of (-inf, x]: entries with hi <= x certainly
    lie below, entries with lo <= x possibly do."""
    lower = sum(e.mass for e in cloud.entries if e.hi <= x)
    upper = sum(e.mass for e in cloud.entries if e.lo <= x)
    return float(lower), float(upper)


def cdf_bracket(
    a: LabeledAutomaton,
    p: PisotNumber,
    pd: PerronData,
    depth: int,
    points,
    cap: int = CLOUD_CAP,
) -> list[tuple[float, float]]:
    """CDF brackets at the given points from a depth-``depth`` refinement,
    merging equal (value, support) prefixes instead of storing words."""
    tm = transition_matrices(a)
    bounds = value_bounds(a, p)
    blo, bhi = _bound_arrays(a, bounds)
    beta = p.beta_float

    level: dict[tuple[float, int], np.ndarray] = {}
    full_support = sum(1 << i for i in range(a.n_states) if pd.v_L[i] > 0)
    level[(0.0, full_support)] = pd.v_L.copy()
    for k in range(1, depth + 1):
        pow_k = beta ** -k
        nxt: dict[tuple[float, int], np.ndarray] = {}
        for (value, _), row in level.items():
            for label in a.alphabet:
                new_row = row @ tm.per_label[label]
                if new_row.max() <= 0:
                    continue
                support = 0
                for i in range(a.n_states):
                    if new_row[i] > 0:
                        support |= 1 << i
                key = (value + label * pow_k, support)
                if key in nxt:
                    nxt[key] += new_row
                else:
                    nxt[key] = new_row
        if len(nxt) > cap:
            raise CapExceeded(f"bracket refinement exceeds {cap} buckets at depth {k}")
        level = nxt

    tail = beta ** -depth
    lam_pow = pd.lam ** -depth
    points = list(points)
    lower = [0.0] * len(points)
    upper = [0.0] * len(points)
    for (value, support), row in level.items():
        mask = [support >> i & 1 for i in range(a.n_states)]
        sel = np.array(mask, dtype=bool)
        lo = value + tail * float(blo[sel].min())
        hi = value + tail * float(bhi[sel].max())
        mass = lam_pow * float(row @ pd.v_R)
        for i, x in enumerate(points):
            if hi <= x:
                lower[i] += mass
            if lo <= x:
                upper[i] += mass
    return list(zip(lower, upper))


def empirical_cdf(values: np.ndarray, x: float) -> float:
    return float(np.mean(values <= x))


def push_samples(labels: np.ndarray, p: PisotNumber) -> np.ndarray:
    """Digit-map values of sampled label words (rows of ``labels``)."""
    length = labels.shape[1]
    pows = p.beta_float ** -(np.arange(1, length + 1))
    return labels @ pows
