"""Stationary infinite-source Poisson (shot noise) traffic simulation.

Sessions arrive as a Poisson process with intensity lambda; session ``l``
contributes rate ``w_l`` on ``[gamma_l, gamma_l + y_l)``.  The aggregate
level is piecewise constant and cadlag: arrivals take effect at their
timestamp, departures drop the level exactly at ``gamma + y``.

Stationary initialization is exact (no burn-in): the number of sessions
alive at time 0 is Poisson(lambda * E[Y]); each such session has a
duration-size-biased (Y, W) pair and arrival time ``-U * Y`` with U
uniform.  Heavy tails make burn-in truncation badly biased, so this
construction is used instead.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from ._backend import kernels
from .heavy_rand import TailDist
from .rng import RngStream

__all__ = [
    "SessionTriple",
    "Sessions",
    "ConstantRate",
    "IndependentRate",
    "DeterministicRate",
    "named_rate",
    "JointLaw",
    "TrafficConfig",
    "ShotNoisePath",
    "simulate_sessions",
    "build_path",
    "eval_level",
    "stationary_snapshot",
    "stationary_window_draws",
    "path_to_csv",
    "path_from_csv",
]


@dataclass(frozen=True)
class SessionTriple:
    """One transmission session: arrival time, duration, rate."""

    gamma: float
    y: float
    w: float

    def __post_init__(self):
        if self.y <= 0:
            raise ValueError("session duration must be positive")
        if self.w < 0:
            raise ValueError("session rate must be nonnegative")


class Sessions:
    """Column store of session triples, indexable as SessionTriple."""

    def __init__(self, gamma, y, w):
        self.gamma = np.asarray(gamma, dtype=float)
        self.y = np.asarray(y, dtype=float)
        self.w = np.asarray(w, dtype=float)
        if not (len(self.gamma) == len(self.y) == len(self.w)):
            raise ValueError("column lengths differ")
        if np.any(self.y <= 0):
            raise ValueError("session durations must be positive")
        if np.any(self.w < 0):
            raise ValueError("session rates must be nonnegative")

    def __len__(self):
        return len(self.gamma)

    def __getitem__(self, i):
        if isinstance(i, (int, np.integer)):
            return SessionTriple(float(self.gamma[i]), float(self.y[i]), float(self.w[i]))
        return Sessions(self.gamma[i], self.y[i], self.w[i])

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    @classmethod
    def concat(cls, *parts: "Sessions") -> "Sessions":
        return cls(
            np.concatenate([p.gamma for p in parts]),
            np.concatenate([p.y for p in parts]),
            np.concatenate([p.w for p in parts]),
        )


# --- transmission-rate models -------------------------------------------

@dataclass(frozen=True)
class ConstantRate:
    """W identically w0; limiting high-duration rate law is the same point mass."""

    w0: float

    def __post_init__(self):
        if self.w0 <= 0:
            raise ValueError("constant rate must be positive")


@dataclass(frozen=True)
class IndependentRate:
    """W independent of Y; the limiting rate law equals W's own law."""

    sampler: Callable[[int, np.random.Generator], np.ndarray]
    mean: Optional[float] = None


@dataclass(frozen=True)
class DeterministicRate:
    """W = g(Y) with declared limit w_inf of g(y) as y -> infinity."""

    g: Callable[[np.ndarray], np.ndarray]
    w_inf: float


WModel = Union[ConstantRate, IndependentRate, DeterministicRate]


def _uniform_rate(a, b, n, gen):
    return gen.uniform(a, b, n)


def _exponential_rate(mean, n, gen):
    return gen.exponential(mean, n)


def named_rate(name: str, *params: float) -> IndependentRate:
    """Picklable built-in independent rate models ('uniform', 'exponential')."""
    import functools

    if name == "uniform":
        a, b = params
        return IndependentRate(functools.partial(_uniform_rate, a, b), mean=(a + b) / 2)
    if name == "exponential":
        (mean,) = params
        return IndependentRate(functools.partial(_exponential_rate, mean), mean=mean)
    raise ValueError(f"unknown rate model {name!r}")


@dataclass(frozen=True)
class JointLaw:
    """Joint law of (duration, rate) plus the limiting rate law.

    The vague-convergence tail condition on the pair cannot be machine
    checked for arbitrary couplings; ``asserts_joint_tail`` records the
    user's assertion.  It provably holds for the three built-in rate
    models (constant, independent, deterministic with a limit).
    """

    y_dist: TailDist
    w_model: WModel
    asserts_joint_tail: bool = True

    def sample_pairs(self, n: int, gen: np.random.Generator):
        y = self.y_dist.sample(n, gen)
        return y, self._rates_for(y, n, gen)

    def sample_size_biased_pairs(self, n: int, gen: np.random.Generator):
        """(Y, W) weighted by duration; governs sessions alive at a fixed time."""
        y = self.y_dist.sample_size_biased(n, gen)
        return y, self._rates_for(y, n, gen)

    def _rates_for(self, y, n, gen):
        m = self.w_model
        if isinstance(m, ConstantRate):
            return np.full(n, m.w0)
        if isinstance(m, IndependentRate):
            return np.asarray(m.sampler(n, gen), dtype=float)
        return np.asarray(m.g(y), dtype=float)

    def sample_limit_rate(self, n: int, gen: np.random.Generator) -> np.ndarray:
        """Draws from the limiting rate law G (rate given a long session)."""
        m = self.w_model
        if isinstance(m, ConstantRate):
            return np.full(n, m.w0)
        if isinstance(m, DeterministicRate):
            return np.full(n, m.w_inf)
        return np.asarray(m.sampler(n, gen), dtype=float)

    @property
    def mean_y(self) -> float:
        return self.y_dist.mean_y


@dataclass(frozen=True)
class TrafficConfig:
    lam: float
    law: JointLaw
    horizon: float
    window_h: float = 0.0
    stationary_init: bool = True
    rng: RngStream = field(default_factory=lambda: RngStream(0))

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("arrival intensity must be positive")
        if self.horizon <= 0:
            raise ValueError("horizon must be positive")
        if self.window_h < 0:
            raise ValueError("window length must be nonnegative")
        self.law.mean_y  # raises if E[Y] is not finite / not declared


class ShotNoisePath:
    """Piecewise-constant cadlag level and occupancy on [t0, t1].

    ``times`` are merged event timestamps strictly inside (t0, t1]; the
    level / count after event i are ``levels[i]`` / ``counts[i]``.  Counts
    are exact integers; levels carry compensated running sums with slack
    ``eps_num = 1e-9 * accumulated |w|``.
    """

    def __init__(self, t0, t1, times, rate_delta, count_delta, init_level, init_count):
        self.t0 = float(t0)
        self.t1 = float(t1)
        self.times = np.asarray(times, dtype=float)
        self.rate_delta = np.asarray(rate_delta, dtype=float)
        self.count_delta = np.asarray(count_delta, dtype=np.int64)
        self.init_level = float(init_level)
        self.init_count = int(init_count)
        if self.t0 >= self.t1:
            raise ValueError("need t0 < t1")
        if len(self.times) and (
            self.times[0] <= self.t0 or self.times[-1] > self.t1
        ):
            raise ValueError("event times must lie in (t0, t1]")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("event times must be strictly increasing (merged)")
        self.levels = self.init_level + kernels.compensated_cumsum(self.rate_delta)
        self.counts = self.init_count + np.cumsum(self.count_delta)
        self.eps_num = 1e-9 * float(np.abs(self.rate_delta).sum())
        if self.init_count < 0 or np.any(self.counts < 0):
            raise ValueError("occupancy count went negative")
        if self.init_level < 0 or np.any(self.levels < -self.eps_num):
            raise ValueError("level went below numerical slack")

    def __len__(self):
        return len(self.times)

    def eval_level(self, t):
        """X(t) under the cadlag convention; O(log n) binary search."""
        t_arr = np.asarray(t, dtype=float)
        if np.any((t_arr < self.t0) | (t_arr > self.t1)):
            raise ValueError("evaluation point outside path support")
        idx = np.searchsorted(self.times, t_arr, side="right")
        padded = np.concatenate([[self.init_level], self.levels])
        out = padded[idx]
        return float(out) if np.isscalar(t) else out

    def eval_count(self, t):
        t_arr = np.asarray(t, dtype=float)
        if np.any((t_arr < self.t0) | (t_arr > self.t1)):
            raise ValueError("evaluation point outside path support")
        idx = np.searchsorted(self.times, t_arr, side="right")
        padded = np.concatenate([[self.init_count], self.counts])
        out = padded[idx]
        return int(out) if np.isscalar(t) else out

    def segments(self, lo=None, hi=None):
        """(bounds, levels, counts) of the step decomposition on [lo, hi].

        ``bounds`` has one more entry than the value arrays; segment i is
        [bounds[i], bounds[i+1]) with constant level/count.
        """
        lo = self.t0 if lo is None else float(lo)
        hi = self.t1 if hi is None else float(hi)
        if lo < self.t0 or hi > self.t1 or lo >= hi:
            raise ValueError("bad segment range")
        i0 = int(np.searchsorted(self.times, lo, side="right"))
        i1 = int(np.searchsorted(self.times, hi, side="left"))
        bounds = np.concatenate([[lo], self.times[i0:i1], [hi]])
        padded_lev = np.concatenate([[self.init_level], self.levels])
        padded_cnt = np.concatenate([[self.init_count], self.counts])
        return bounds, padded_lev[i0 : i1 + 1], padded_cnt[i0 : i1 + 1]

    @property
    def max_level(self) -> float:
        return max(self.init_level, float(self.levels.max(initial=self.init_level)))


def simulate_sessions(config: TrafficConfig) -> Sessions:
    """Fresh Poisson arrivals on [0, horizon + h], plus (optionally) the
    exact stationary population alive at time 0."""
    gen = config.rng.generator()
    span = config.horizon + config.window_h
    n_fresh = gen.poisson(config.lam * span)
    gamma_f = np.sort(gen.uniform(0.0, span, n_fresh))
    y_f, w_f = config.law.sample_pairs(n_fresh, gen)
    fresh = Sessions(gamma_f, y_f, w_f)
    if not config.stationary_init:
        return fresh
    n0 = gen.poisson(config.lam * config.law.mean_y)
    y0, w0 = config.law.sample_size_biased_pairs(n0, gen)
    gamma0 = -gen.uniform(size=n0) * y0
    return Sessions.concat(Sessions(gamma0, y0, w0), fresh)


def build_path(sessions: Sessions, t0: float, t1: float) -> ShotNoisePath:
    """Assemble the event-sorted path of the session superposition.

    Sessions straddling t0 are folded into the initial level/count;
    departures past t1 are dropped (the level simply never decreases
    there).  Coincident deltas are merged into one net event.
    """
    if t0 >= t1:
        raise ValueError("need t0 < t1")
    gamma, y, w = sessions.gamma, sessions.y, sessions.w
    dep = gamma + y
    live = dep > t0  # sessions already over by t0 are irrelevant
    gamma, dep, w = gamma[live], dep[live], w[live]

    at_init = gamma <= t0
    init_level = float(w[at_init].sum())
    init_count = int(at_init.sum())

    arr_mask = (gamma > t0) & (gamma <= t1)
    dep_mask = (dep > t0) & (dep <= t1) & (gamma <= t1)
    times = np.concatenate([gamma[arr_mask], dep[dep_mask]])
    r_delta = np.concatenate([w[arr_mask], -w[dep_mask]])
    c_delta = np.concatenate(
        [np.ones(arr_mask.sum(), np.int64), -np.ones(dep_mask.sum(), np.int64)]
    )
    order = np.argsort(times, kind="stable")
    times, r_delta, c_delta = times[order], r_delta[order], c_delta[order]
    uniq, start_idx = np.unique(times, return_index=True)
    if len(uniq) != len(times):
        r_delta = np.add.reduceat(r_delta, start_idx)
        c_delta = np.add.reduceat(c_delta, start_idx)
        times = uniq
    return ShotNoisePath(t0, t1, times, r_delta, c_delta, init_level, init_count)


def eval_level(path: ShotNoisePath, t):
    """Point evaluation X(t); see ShotNoisePath.eval_level."""
    return path.eval_level(t)


def stationary_window_draws(
    config: TrafficConfig,
    n: int,
    rng: RngStream,
    offsets=(0.0,),
    with_sup: bool = False,
):
    """n i.i.d. draws of the stationary window observed at ``offsets``.

    Returns an (n, k) matrix of levels X(o_j); with ``with_sup`` also the
    vector of sup X over [0, h] (per-draw event sweep, noticeably slower).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    offsets = np.asarray(offsets, dtype=float)
    h = config.window_h
    if np.any((offsets < 0) | (offsets > h)):
        raise ValueError("offsets must lie in [0, h]")
    gen = rng.generator()
    lam, law = config.lam, config.law
    nu = lam * law.mean_y

    n_init = gen.poisson(nu, n)
    tot0 = int(n_init.sum())
    y0, w0 = law.sample_size_biased_pairs(tot0, gen)
    g0 = -gen.uniform(size=tot0) * y0
    owner0 = np.repeat(np.arange(n), n_init)

    if h > 0:
        n_fresh = gen.poisson(lam * h, n)
        totf = int(n_fresh.sum())
        yf, wf = law.sample_pairs(totf, gen)
        gf = gen.uniform(0.0, h, totf)
        ownerf = np.repeat(np.arange(n), n_fresh)
        gamma = np.concatenate([g0, gf])
        dur = np.concatenate([y0, yf])
        w = np.concatenate([w0, wf])
        owner = np.concatenate([owner0, ownerf])
    else:
        gamma, dur, w, owner = g0, y0, w0, owner0

    values = np.zeros((n, len(offsets)))
    end = gamma + dur
    for j, o in enumerate(offsets):
        mask = (gamma <= o) & (o < end)
        np.add.at(values[:, j], owner[mask], w[mask])

    if not with_sup:
        return values

    sups = np.empty(n)
    order = np.argsort(owner, kind="stable")
    gamma, end, w, owner = gamma[order], end[order], w[order], owner[order]
    bounds_idx = np.searchsorted(owner, np.arange(n + 1))
    for i in range(n):
        lo, hi = bounds_idx[i], bounds_idx[i + 1]
        sups[i] = _window_sup(gamma[lo:hi], end[lo:hi], w[lo:hi], h)
    return values, sups


def _window_sup(gamma, end, w, h):
    # sup over [0, h] of the step superposition of the given sessions;
    # every post-event level with event time in (0, h] is attained in [0, h]
    base = float(w[(gamma <= 0.0) & (end > 0.0)].sum())
    t_ev = np.concatenate([gamma, end])
    d_ev = np.concatenate([w, -w])
    inside = (t_ev > 0.0) & (t_ev <= h)
    t_ev, d_ev = t_ev[inside], d_ev[inside]
    levels = base + np.cumsum(d_ev[np.argsort(t_ev, kind="stable")])
    return float(max(base, levels.max(initial=base)))


def stationary_snapshot(config: TrafficConfig, n: int, rng: RngStream, offsets=(0.0,)):
    """n i.i.d. stationary window values; 1-D when a single offset is asked."""
    values = stationary_window_draws(config, n, rng, offsets=offsets)
    return values[:, 0] if values.shape[1] == 1 else values


def path_to_csv(path: ShotNoisePath, dest) -> None:
    """Dump (time, level, count) per event, header included."""
    with open(dest, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time", "level", "count"])
        writer.writerow([repr(path.t0), repr(path.init_level), path.init_count])
        for t, lev, cnt in zip(path.times, path.levels, path.counts):
            writer.writerow([repr(float(t)), repr(float(lev)), int(cnt)])


def path_from_csv(src, t1=None) -> ShotNoisePath:
    """Rebuild a path from its CSV dump (inverse of ``path_to_csv``)."""
    with open(src, newline="") as fh:
        rows = list(csv.reader(fh))[1:]
    t0 = float(rows[0][0])
    init_level = float(rows[0][1])
    init_count = int(rows[0][2])
    times = np.array([float(r[0]) for r in rows[1:]])
    levels = np.array([float(r[1]) for r in rows[1:]])
    counts = np.array([int(r[2]) for r in rows[1:]])
    r_delta = np.diff(np.concatenate([[init_level], levels]))
    c_delta = np.diff(np.concatenate([[init_count], counts])).astype(np.int64)
    if t1 is None:
        t1 = times[-1] if len(times) else t0 + 1.0
    return ShotNoisePath(t0, t1, times, r_delta, c_delta, init_level, init_count)
