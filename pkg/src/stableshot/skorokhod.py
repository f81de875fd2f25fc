"""Path distances between cadlag step / piecewise-linear paths.

The M1-type distance is reported as a certified bracket, not an exact
value: the upper bound is a minimax dynamic program over monotone
traversals of the two completed graphs (vertical segments filling jumps),
densified to ~grid_n nodes each, capped by the uniform distance (the
identity parametrization is always admissible).  The lower bound collects
necessary conditions: endpoint gaps and extreme-value gaps, which every
parametrization must realize.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels

__all__ = ["SteppyPath", "dist_uniform", "dist_m1"]


@dataclass(frozen=True)
class SteppyPath:
    """Step or piecewise-linear path on [a, b].

    For kind 'step': ``times`` are the n jump epochs strictly inside
    (a, b), ``values`` has n+1 entries (value on each constant piece,
    right-continuous).  For kind 'pwl': ``times`` are the n node epochs
    with a <= t_1 < ... < t_n <= b and ``values`` the node values;
    endpoints are implied by constant extension.
    """

    a: float
    b: float
    times: tuple
    values: tuple
    kind: str = "step"

    def __post_init__(self):
        if self.a >= self.b:
            raise ValueError("need a < b")
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if np.any(np.diff(t) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if t.size and (t[0] < self.a or t[-1] > self.b):
            raise ValueError("breakpoints outside [a, b]")
        if not np.all(np.isfinite(v)):
            raise ValueError("path values must be finite")
        if self.kind == "step":
            if len(v) != len(t) + 1:
                raise ValueError("step path needs len(values) == len(times) + 1")
            if t.size and (t[0] <= self.a or t[-1] >= self.b):
                raise ValueError("step jumps must be strictly inside (a, b)")
        elif self.kind == "pwl":
            if len(v) != len(t) or len(v) < 1:
                raise ValueError("pwl path needs one value per node")
        else:
            raise ValueError(f"unknown path kind {self.kind!r}")

    @classmethod
    def step(cls, a, b, times, values) -> "SteppyPath":
        return cls(float(a), float(b), tuple(times), tuple(values), "step")

    @classmethod
    def pwl(cls, a, b, times, values) -> "SteppyPath":
        return cls(float(a), float(b), tuple(times), tuple(values), "pwl")

    def evaluate(self, t):
        t_arr = np.asarray(t, dtype=float)
        if np.any((t_arr < self.a) | (t_arr > self.b)):
            raise ValueError("evaluation outside [a, b]")
        times = np.asarray(self.times)
        values = np.asarray(self.values)
        if self.kind == "step":
            idx = np.searchsorted(times, t_arr, side="right")
            out = values[idx]
        else:
            xp = np.concatenate([[self.a], times, [self.b]])
            fp = np.concatenate([[values[0]], values, [values[-1]]])
            out = np.interp(t_arr, xp, fp)
        return float(out) if np.isscalar(t) else out

    def left_limit(self, t):
        """Value approached from the left (equals evaluate except at jumps)."""
        if self.kind == "pwl":
            return self.evaluate(t)
        times = np.asarray(self.times)
        values = np.asarray(self.values)
        idx = np.searchsorted(times, np.asarray(t, dtype=float), side="left")
        out = values[idx]
        return float(out) if np.isscalar(t) else out

    def restrict(self, a, b) -> "SteppyPath":
        if not (self.a <= a < b <= self.b):
            raise ValueError("restriction interval not contained in [a, b]")
        times = np.asarray(self.times)
        values = np.asarray(self.values)
        if self.kind == "step":
            keep = np.nonzero((times > a) & (times < b))[0]
            vals = np.concatenate([[self.evaluate(a)], values[keep + 1]])
            return SteppyPath.step(a, b, times[keep], vals)
        keep = (times >= a) & (times <= b)
        t_in = times[keep]
        v_in = values[keep]
        t_new = np.concatenate([[a], t_in, [b]])
        v_new = np.concatenate([[self.evaluate(a)], v_in, [self.evaluate(b)]])
        uniq, idx = np.unique(t_new, return_index=True)
        return SteppyPath.pwl(a, b, uniq, v_new[idx])

    def completed_graph(self) -> np.ndarray:
        """Vertex list (t, v) of the graph with jumps filled vertically."""
        if self.kind == "pwl":
            t = np.concatenate([[self.a], self.times, [self.b]])
            v = np.concatenate([[self.values[0]], self.values, [self.values[-1]]])
            uniq, idx = np.unique(t, return_index=True)
            return np.column_stack([uniq, v[idx]])
        verts = [(self.a, self.values[0])]
        for i, t in enumerate(self.times):
            verts.append((t, self.values[i]))  # left value, end of flat piece
            verts.append((t, self.values[i + 1]))  # jump filled vertically
        verts.append((self.b, self.values[-1]))
        return np.asarray(verts, dtype=float)


def _merged_eval_points(f: SteppyPath, g: SteppyPath) -> np.ndarray:
    pts = np.unique(
        np.concatenate([[f.a, f.b], np.asarray(f.times), np.asarray(g.times)])
    )
    return pts


def dist_uniform(f: SteppyPath, g: SteppyPath) -> float:
    """Sup-norm distance over the merged breakpoints plus one-sided limits."""
    if (f.a, f.b) != (g.a, g.b):
        raise ValueError("paths must share the same interval")
    pts = _merged_eval_points(f, g)
    d_right = np.abs(f.evaluate(pts) - g.evaluate(pts))
    d_left = np.abs(f.left_limit(pts) - g.left_limit(pts))
    return float(max(d_right.max(), d_left.max()))


def _densify(poly: np.ndarray, target: float) -> np.ndarray:
    # resample polyline so no segment exceeds `target` in the max metric,
    # keeping all original vertices
    seg = np.maximum(
        np.abs(np.diff(poly[:, 0])), np.abs(np.diff(poly[:, 1]))
    )
    if seg.sum() == 0 or target <= 0:
        return poly
    pieces = [poly[:1]]
    for i in range(len(seg)):
        k = int(np.ceil(seg[i] / target)) if seg[i] > 0 else 1
        frac = np.arange(1, k + 1) / k
        pts = poly[i] + frac[:, None] * (poly[i + 1] - poly[i])
        pieces.append(pts)
    return np.vstack(pieces)


def dist_m1(f: SteppyPath, g: SteppyPath, grid_n: int = 128):
    """Certified (lower, upper) bracket of the M1 distance on [a, b]."""
    if (f.a, f.b) != (g.a, g.b):
        raise ValueError("paths must share the same interval")
    if grid_n < 8:
        raise ValueError("grid_n must be >= 8")
    # absolute mesh: the discrete minimax distance then differs from the
    # true parametric infimum by at most 2 * (b - a) / grid_n
    mesh = 2.0 * (f.b - f.a) / grid_n
    pf = _densify(f.completed_graph(), mesh)
    pg = _densify(g.completed_graph(), mesh)
    dp = kernels.frechet_minimax(pf, pg)
    upper = min(float(dp), dist_uniform(f, g))
    gf, gg = f.completed_graph(), g.completed_graph()
    lower = max(
        abs(gf[0, 1] - gg[0, 1]),  # initial values must match up
        abs(gf[-1, 1] - gg[-1, 1]),  # terminal values must match up
        abs(gf[:, 1].max() - gg[:, 1].max()),
        abs(gf[:, 1].min() - gg[:, 1].min()),
    )
    return float(min(lower, upper)), upper
