"""Window functionals and their exact integrals along a path.

A functional phi acts on the window {X(s+t), 0 <= t <= h} through either
finitely many evaluation offsets, or the offset values plus the running
supremum over [0, h].  For both classes s -> phi(X_h(s)) is piecewise
constant with breakpoints in the shifted event times, so time integrals
are computed exactly as sum(value * segment length) -- no quadrature.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ._backend import kernels
from .heavy_rand import TailDist, tail_quantile_a
from .rng import RngStream
from .traffic import ShotNoisePath, TrafficConfig, stationary_window_draws

__all__ = [
    "WindowFunctional",
    "identity",
    "clipped",
    "cdf_indicator",
    "idle_indicator",
    "window_sup_indicator",
    "functional_steps",
    "integrate_phi",
    "cycle_integrals",
    "EmpiricalPath",
    "empirical_path",
    "estimate_calE",
    "empirical_cdf",
]


@dataclass(frozen=True)
class WindowFunctional:
    """Bounded measurable map of the window, restricted to computable kinds.

    ``kind`` 'pointwise': ``fn(values)`` with values shaped (..., k) for the
    k offsets.  ``kind`` 'window_sup': ``fn(values, sup)`` where sup is the
    running supremum over [0, h].  ``fn`` must be numpy-vectorized over the
    leading axes.  ``continuity_assertion`` records that the long-session
    response w -> E[phi(w + X_h(0))] is a.s. continuous under the limiting
    rate law (set automatically by the built-ins for atomic rate laws).
    """

    name: str
    h: float
    kind: str
    offsets: tuple
    fn: Callable
    sup_norm: float
    continuity_assertion: bool = False

    def __post_init__(self):
        if self.kind not in ("pointwise", "window_sup"):
            raise ValueError(f"unsupported functional kind {self.kind!r}")
        if self.h < 0:
            raise ValueError("window length must be nonnegative")
        offs = np.asarray(self.offsets, dtype=float)
        if offs.size == 0 or np.any((offs < 0) | (offs > self.h)):
            raise ValueError("offsets must lie in [0, h]")
        if np.any(np.diff(offs) <= 0):
            raise ValueError("offsets must be strictly increasing")

    def __call__(self, values, sup=None):
        if self.kind == "pointwise":
            return self.fn(np.asarray(values, dtype=float))
        return self.fn(np.asarray(values, dtype=float), np.asarray(sup, dtype=float))


def _v0(values):
    return values[..., 0]


def identity() -> WindowFunctional:
    """phi(x) = x(0).  Unbounded; kept for the classical empirical-mean case."""
    return WindowFunctional(
        name="identity", h=0.0, kind="pointwise", offsets=(0.0,),
        fn=_v0, sup_norm=math.inf, continuity_assertion=True,
    )


def clipped(b: float) -> WindowFunctional:
    """phi(x) = min(x(0), b), e.g. rate clipped at a bandwidth cap."""

    def fn(values, _b=float(b)):
        return np.minimum(values[..., 0], _b)

    return WindowFunctional(
        name=f"clipped_{b:g}", h=0.0, kind="pointwise", offsets=(0.0,),
        fn=fn, sup_norm=float(b), continuity_assertion=True,
    )


def cdf_indicator(x: float) -> WindowFunctional:
    """phi = 1{x(0) <= x}; integrating it yields the time-average CDF."""

    def fn(values, _x=float(x)):
        return (values[..., 0] <= _x).astype(float)

    return WindowFunctional(
        name=f"cdf_le_{x:g}", h=0.0, kind="pointwise", offsets=(0.0,),
        fn=fn, sup_norm=1.0, continuity_assertion=True,
    )


def idle_indicator() -> WindowFunctional:
    """phi = 1{x(0) = 0} (idle detection on the level)."""

    def fn(values):
        return (values[..., 0] <= 0.0).astype(float)

    return WindowFunctional(
        name="idle", h=0.0, kind="pointwise", offsets=(0.0,),
        fn=fn, sup_norm=1.0, continuity_assertion=True,
    )


def window_sup_indicator(b: float, h: float) -> WindowFunctional:
    """phi = 1{sup over [0, h] of x <= b}."""

    def fn(values, sup, _b=float(b)):
        return (sup <= _b).astype(float)

    return WindowFunctional(
        name=f"sup_le_{b:g}_h{h:g}", h=float(h), kind="window_sup", offsets=(0.0,),
        fn=fn, sup_norm=1.0, continuity_assertion=True,
    )


def functional_steps(path: ShotNoisePath, phi: WindowFunctional, t0: float, t1: float):
    """Step decomposition of s -> phi(X_h(s)) on [t0, t1].

    Returns (bounds, values): segment i is [bounds[i], bounds[i+1]) with
    constant value values[i].  Requires path data up to t1 + h.  Segment
    values are evaluated at midpoints, which is exact for step paths and
    immune to breakpoint roundoff.
    """
    if t0 < path.t0 or t1 + phi.h > path.t1 or t0 >= t1:
        raise ValueError("path must cover [t0, t1 + h]")
    offs = np.asarray(phi.offsets, dtype=float)
    cands = [path.times - o for o in offs]
    if phi.kind == "window_sup":
        cands.append(path.times - phi.h)
        cands.append(path.times.copy())
    cand = np.concatenate(cands) if cands else np.empty(0)
    cand = cand[(cand > t0) & (cand < t1)]
    bounds = np.concatenate([[t0], np.unique(cand), [t1]])
    mids = 0.5 * (bounds[:-1] + bounds[1:])
    vals = path.eval_level((mids[:, None] + offs[None, :]).ravel()).reshape(
        len(mids), len(offs)
    )
    if phi.kind == "pointwise":
        phi_vals = phi(vals)
    else:
        seg_bounds, seg_levels, _ = path.segments()
        lo = np.searchsorted(seg_bounds, mids, side="right") - 1
        hi = np.searchsorted(seg_bounds, mids + phi.h, side="right") - 1
        hi = np.minimum(hi, len(seg_levels) - 1)
        sups = kernels.sliding_range_max(seg_levels, lo, hi)
        phi_vals = phi(vals, sups)
    return bounds, np.asarray(phi_vals, dtype=float)


def integrate_phi(path: ShotNoisePath, phi: WindowFunctional, t0: float, t1: float) -> float:
    """Exact integral of phi(X_h(s)) over [t0, t1]."""
    bounds, vals = functional_steps(path, phi, t0, t1)
    return float(np.dot(vals, np.diff(bounds)))


def _prefix_integral(bounds, vals):
    cum = np.concatenate([[0.0], np.cumsum(vals * np.diff(bounds))])

    def at(points):
        points = np.asarray(points, dtype=float)
        idx = np.clip(np.searchsorted(bounds, points, side="right") - 1, 0, len(vals) - 1)
        return cum[idx] + vals[idx] * (points - bounds[idx])

    return at


def cycle_integrals(path: ShotNoisePath, decomposition, phi: WindowFunctional) -> np.ndarray:
    """Per-cycle integrals of phi(X_h(s)), one value per complete cycle."""
    if decomposition.m_T == 0:
        return np.empty(0)
    t0 = decomposition.s0
    t1 = float(decomposition.s_end[-1])
    bounds, vals = functional_steps(path, phi, t0, t1)
    at = _prefix_integral(bounds, vals)
    return at(decomposition.s_end) - at(decomposition.s_start)


@dataclass(frozen=True)
class EmpiricalPath:
    """Normalized centered integral u -> Z_T(u) as a piecewise-linear path.

    ``values[i]`` is the normalized integral up to u_breaks[i] * T; linear
    interpolation between breakpoints is exact.
    """

    u_breaks: np.ndarray
    values: np.ndarray
    T: float
    a_T: float
    centering: float
    centering_se: float = 0.0
    centering_method: str = "analytic"

    def __call__(self, u):
        u_arr = np.asarray(u, dtype=float)
        if np.any((u_arr < 0) | (u_arr > 1)):
            raise ValueError("u must lie in [0, 1]")
        out = np.interp(u_arr, self.u_breaks, self.values)
        return float(out) if np.isscalar(u) else out

    def to_csv(self, dest, meta_dest=None) -> None:
        with open(dest, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["u", "value"])
            for u, v in zip(self.u_breaks, self.values):
                writer.writerow([repr(float(u)), repr(float(v))])
        if meta_dest is not None:
            with open(meta_dest, "w") as fh:
                fh.write(
                    f"T: {self.T!r}\na_T: {self.a_T!r}\n"
                    f"centering: {self.centering!r}\n"
                    f"centering_se: {self.centering_se!r}\n"
                    f"centering_method: {self.centering_method}\n"
                )


def empirical_path(
    path: ShotNoisePath,
    phi: WindowFunctional,
    dist: TailDist,
    T: float,
    centering: float,
    centering_se: float = 0.0,
    centering_method: str = "analytic",
) -> EmpiricalPath:
    """Z(u) = (1/a(T)) * integral_0^{Tu} {phi(X_h(s)) - centering} ds.

    The centering constant is the stationary mean of phi; its provenance
    (analytic or Monte Carlo with standard error) is carried along because
    centering error of order se * T / a(T) can dominate at large T.
    """
    a_T = float(tail_quantile_a(dist, T))
    bounds, vals = functional_steps(path, phi, 0.0, T)
    increments = (vals - centering) * np.diff(bounds)
    values = np.concatenate([[0.0], np.cumsum(increments)]) / a_T
    return EmpiricalPath(
        u_breaks=bounds / T,
        values=values,
        T=float(T),
        a_T=a_T,
        centering=float(centering),
        centering_se=float(centering_se),
        centering_method=centering_method,
    )


def estimate_calE(
    w: float,
    phi: WindowFunctional,
    config: TrafficConfig,
    n_mc: int,
    rng: RngStream,
):
    """Monte Carlo estimate of E[phi(w + X_h(0))] with its standard error."""
    if n_mc < 1:
        raise ValueError("n_mc must be >= 1")
    if phi.kind == "window_sup":
        values, sups = stationary_window_draws(
            config, n_mc, rng, offsets=phi.offsets, with_sup=True
        )
        samples = phi(values + w, sups + w)
    else:
        values = stationary_window_draws(config, n_mc, rng, offsets=phi.offsets)
        samples = phi(values + w)
    est = float(np.mean(samples))
    se = float(np.std(samples, ddof=1) / math.sqrt(n_mc)) if n_mc > 1 else math.inf
    return est, se


def empirical_cdf(path: ShotNoisePath, T: float, x_grid) -> np.ndarray:
    """Time-average CDF E(x) = T^{-1} * measure{s <= T : X(s) <= x}, exact."""
    x_grid = np.asarray(x_grid, dtype=float)
    if np.any(np.diff(x_grid) < 0):
        raise ValueError("x grid must be sorted")
    bounds, levels, _ = path.segments(path.t0, T)
    seg_len = np.diff(bounds)
    order = np.argsort(levels, kind="stable")
    lev_sorted = levels[order]
    cum_time = np.concatenate([[0.0], np.cumsum(seg_len[order])])
    idx = np.searchsorted(lev_sorted, x_grid, side="right")
    return cum_time[idx] / (T - path.t0)
