"""Scenario-driven experiment orchestration.

A Scenario is a plain-data description of one verification experiment:
traffic parameters, a horizon ladder, a replicate count, and the set of
analyses to run.  ``run`` executes the requested analyses independently
(a failure in one is recorded in its block, the others still run) and
deterministically: replicate r always draws from stream_id = r of the
master seed, with a substream per horizon, so results do not depend on
the worker count or completion order.
"""

from __future__ import annotations

import csv
import math
import os
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np
import yaml
from scipy import stats as sps

from . import functionals as fns
from ._backend import backend_name
from .cycles import collect_cycle_lengths, cycle_tail_table, hill_alpha
from .functionals import WindowFunctional
from .heavy_rand import TailDist, sample_stable, tail_quantile_a
from .limits import LimitSpec, limit_params, poisson_K
from .rng import RngStream
from .skorokhod import SteppyPath, dist_m1, dist_uniform
from .stats import GofReport, iqr, ks_two_sample, rate_regression
from .traffic import (
    ConstantRate,
    JointLaw,
    TrafficConfig,
    build_path,
    named_rate,
    simulate_sessions,
)

__all__ = [
    "Scenario",
    "Report",
    "make_functional",
    "run",
    "emit",
    "validate",
    "builtin_scenarios",
]

ANALYSES = (
    "cycle_mean",
    "cycle_tail",
    "hill",
    "stable_limit",
    "self_similarity",
    "cdf_rate",
    "m1_diagnostic",
)


@dataclass(frozen=True)
class Scenario:
    """Plain-data experiment description (everything here is YAML-safe)."""

    name: str = "scenario"
    lam: float = 1.0
    alpha: float = 1.5
    xm: float = 1.0
    w_kind: str = "constant"  # constant | uniform | exponential
    w_params: tuple = (1.0,)
    window_h: float = 0.0
    stationary_init: bool = True
    T_ladder: tuple = (1e3, 1e4)
    replicates: int = 200
    functionals: tuple = ("identity",)
    u_grid: tuple = (1.0,)
    x_grid: tuple = (1.0,)
    analyses: tuple = ("stable_limit",)
    seed: int = 0
    n_cycles: int = 10_000
    tail_t: float = 1e3
    tail_x: tuple = (1.0, 2.0)
    hill_k: int = 1000
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "w_params", tuple(self.w_params))
        object.__setattr__(self, "T_ladder", tuple(float(t) for t in self.T_ladder))
        object.__setattr__(self, "functionals", tuple(self.functionals))
        object.__setattr__(self, "u_grid", tuple(float(u) for u in self.u_grid))
        object.__setattr__(self, "x_grid", tuple(float(x) for x in self.x_grid))
        object.__setattr__(self, "analyses", tuple(self.analyses))
        object.__setattr__(self, "tail_x", tuple(float(x) for x in self.tail_x))

    def to_dict(self) -> dict:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown scenario keys: {sorted(unknown)}")
        return cls(**d)

    def to_yaml(self, dest) -> None:
        with open(dest, "w") as fh:
            yaml.safe_dump(self.to_dict(), fh, sort_keys=True)

    @classmethod
    def from_yaml(cls, src) -> "Scenario":
        with open(src) as fh:
            return cls.from_dict(yaml.safe_load(fh))

    # -- derived objects ---------------------------------------------------

    def y_dist(self) -> TailDist:
        return TailDist.pareto(self.alpha, self.xm)

    def law(self) -> JointLaw:
        if self.w_kind == "constant":
            return JointLaw(self.y_dist(), ConstantRate(*self.w_params))
        return JointLaw(self.y_dist(), named_rate(self.w_kind, *self.w_params))

    def config(self, horizon: float, rng: RngStream) -> TrafficConfig:
        return TrafficConfig(
            lam=self.lam,
            law=self.law(),
            horizon=float(horizon),
            window_h=self.window_h,
            stationary_init=self.stationary_init,
            rng=rng,
        )


def validate(scenario: Scenario) -> list:
    """Diagnostics list; raises ValueError on anything fatal."""
    notes = []
    if not 1 < scenario.alpha < 2:
        raise ValueError("tail index must lie in (1, 2)")
    if scenario.replicates < 1:
        raise ValueError("replicates must be >= 1")
    if list(scenario.T_ladder) != sorted(set(scenario.T_ladder)):
        raise ValueError("T_ladder must be strictly increasing")
    if any(t <= 1 for t in scenario.T_ladder):
        raise ValueError("horizons must exceed 1 (normalizer a(t) needs t > 1)")
    bad = set(scenario.analyses) - set(ANALYSES)
    if bad:
        raise ValueError(f"unknown analyses: {sorted(bad)}")
    if len(set(scenario.functionals)) != len(scenario.functionals):
        raise ValueError("functional names must be unique")
    for spec in scenario.functionals:
        make_functional(spec, scenario.window_h)  # raises on bad spec
    scenario.law()  # raises on bad rate model
    if not (0 < min(scenario.u_grid) and max(scenario.u_grid) <= 1):
        raise ValueError("u_grid must lie in (0, 1]")
    ey = scenario.y_dist().mean_y
    notes.append(f"mean session duration E[Y] = {ey:g}")
    notes.append(f"offered load lambda*E[Y] = {scenario.lam * ey:g}")
    notes.append(f"mean cycle length = {math.exp(scenario.lam * ey) / scenario.lam:g}")
    notes.append(f"kernel backend: {backend_name()}")
    if scenario.lam * ey > 8:
        notes.append("warning: heavy load, idle periods will be very rare")
    return notes


def make_functional(spec: str, h: float = 0.0) -> WindowFunctional:
    """Parse a functional spec string: identity | clipped:b | idle |
    cdf:x | winsup:b (window supremum indicator over [0, h])."""
    head, _, arg = spec.partition(":")
    if head == "identity":
        return fns.identity()
    if head == "clipped":
        return fns.clipped(float(arg))
    if head == "idle":
        return fns.idle_indicator()
    if head == "cdf":
        return fns.cdf_indicator(float(arg))
    if head == "winsup":
        return fns.window_sup_indicator(float(arg), h)
    raise ValueError(f"unknown functional spec {spec!r}")


# -- response curve E(w, phi) ----------------------------------------------


def exact_poisson_calE(phi: WindowFunctional, nu: float, w0: float):
    """Exact response curve w -> E[phi(w + X(0))] when the stationary level
    is w0 times a Poisson(nu) count (constant rates, h = 0, pointwise phi)."""
    kmax = int(sps.poisson.ppf(1 - 1e-13, nu)) + 2
    ks = np.arange(kmax + 1)
    pmf = sps.poisson.pmf(ks, nu)

    def calE(w):
        w_arr = np.atleast_1d(np.asarray(w, dtype=float))
        grid = (w_arr[:, None] + w0 * ks[None, :])[..., None]
        return phi(grid) @ pmf

    return calE


def response_curve(scenario: Scenario, phi: WindowFunctional, n_mc: int = 100_000):
    """(calE, calE(0), se, method): exact where a closed form exists,
    otherwise a Monte Carlo curve over shared stationary window draws."""
    law = scenario.law()
    exactable = (
        isinstance(law.w_model, ConstantRate)
        and phi.kind == "pointwise"
        and phi.h == 0.0
    )
    if exactable:
        calE = exact_poisson_calE(phi, scenario.lam * law.mean_y, law.w_model.w0)
        return calE, float(calE(0.0)[0]), 0.0, "exact"
    key = zlib.crc32(phi.name.encode()) % 2**31
    rng = RngStream(scenario.seed, stream_id=2**31).substream(key)
    cfg = scenario.config(horizon=1.0, rng=rng)
    from .traffic import stationary_window_draws

    if phi.kind == "window_sup":
        values, sups = stationary_window_draws(
            cfg, n_mc, rng, offsets=phi.offsets, with_sup=True
        )
    else:
        values = stationary_window_draws(cfg, n_mc, rng, offsets=phi.offsets)
        sups = None

    def calE(w):
        w_arr = np.atleast_1d(np.asarray(w, dtype=float))
        out = np.empty(w_arr.size)
        for i, wv in enumerate(w_arr):
            if sups is None:
                out[i] = float(np.mean(phi(values + wv)))
            else:
                out[i] = float(np.mean(phi(values + wv, sups + wv)))
        return out

    cal0 = float(calE(0.0)[0])
    base = phi(values) if sups is None else phi(values, sups)
    se = float(np.std(base, ddof=1) / math.sqrt(n_mc))
    return calE, cal0, se, "monte_carlo"


# -- replicate workers (module level so ProcessPoolExecutor can pickle) ----


def _z_task(task):
    """One replicate: simulate once, return z-values for every requested
    (functional, u) pair at horizon T."""
    scenario, t_index, r, phi_specs, centerings, u_list = task
    T = scenario.T_ladder[t_index]
    phis = [make_functional(s, scenario.window_h) for s in phi_specs]
    u_top = max(u_list)
    rng = RngStream(scenario.seed, stream_id=r).substream(t_index)
    cfg = scenario.config(horizon=u_top * T + scenario.window_h, rng=rng)
    path = build_path(simulate_sessions(cfg), 0.0, u_top * T + scenario.window_h)
    a_T = float(tail_quantile_a(scenario.y_dist(), T))
    out = np.empty((len(phis), len(u_list)))
    for i, (phi, c) in enumerate(zip(phis, centerings)):
        bounds, vals = fns.functional_steps(path, phi, 0.0, u_top * T)
        at = fns._prefix_integral(bounds, vals - c)
        for j, u in enumerate(u_list):
            out[i, j] = float(at(u * T)) / a_T
    return r, out


def _cdf_task(task):
    """One replicate of the time-average CDF over the full horizon ladder."""
    scenario, r, x_grid = task
    rows = []
    for t_index, T in enumerate(scenario.T_ladder):
        rng = RngStream(scenario.seed, stream_id=r).substream(t_index)
        cfg = scenario.config(horizon=T, rng=rng)
        path = build_path(simulate_sessions(cfg), 0.0, T)
        rows.append(fns.empirical_cdf(path, T, x_grid))
    return r, np.asarray(rows)


def _map_tasks(fn, tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    chunk = max(1, len(tasks) // (8 * workers))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, tasks, chunksize=chunk))


def _ordered(results):
    # reduce by replicate index so worker completion order cannot matter
    return [out for _, out in sorted(results, key=lambda p: p[0])]


# -- analyses ---------------------------------------------------------------


def _analysis_cycle_mean(scenario: Scenario) -> dict:
    law = scenario.law()
    theory = math.exp(scenario.lam * law.mean_y) / scenario.lam
    lengths = collect_cycle_lengths(
        scenario.lam, law, scenario.n_cycles, RngStream(scenario.seed, stream_id=0)
    )
    mean = float(lengths.mean())
    se = float(lengths.std(ddof=1) / math.sqrt(lengths.size))
    gof = GofReport(
        name=f"{scenario.name}/cycle_mean",
        stat=abs(mean - theory) / theory,
        threshold=0.05,
        n=lengths.size,
        detail=f"mean={mean:.4f} theory={theory:.4f} se={se:.4f}",
    )
    return {"mean": mean, "se": se, "theory": theory, "n": int(lengths.size), "gof": gof}


def _analysis_cycle_tail(scenario: Scenario) -> dict:
    law = scenario.law()
    lengths = collect_cycle_lengths(
        scenario.lam, law, scenario.n_cycles, RngStream(scenario.seed, stream_id=1)
    )
    table = cycle_tail_table(
        lengths, scenario.y_dist(), scenario.lam, law.mean_y,
        scenario.tail_x, [scenario.tail_t],
    )
    rel = [
        abs(c.empirical - c.theoretical) / c.theoretical
        for c in table
        if c.reliable
    ]
    gof = GofReport(
        name=f"{scenario.name}/cycle_tail",
        stat=max(rel) if rel else math.inf,
        threshold=0.15,
        n=int(lengths.size),
        detail=f"{len(rel)} reliable cells of {len(table)}",
    )
    return {"table": table, "gof": gof, "n": int(lengths.size)}


def _analysis_hill(scenario: Scenario) -> dict:
    lengths = collect_cycle_lengths(
        scenario.lam, scenario.law(), scenario.n_cycles,
        RngStream(scenario.seed, stream_id=2),
    )
    est, se = hill_alpha(lengths, scenario.hill_k)
    gof = GofReport(
        name=f"{scenario.name}/hill",
        stat=abs(est - scenario.alpha),
        threshold=0.2,
        n=scenario.hill_k,
        detail=f"alpha_hat={est:.3f} se={se:.3f}",
    )
    return {"alpha_hat": float(est), "se": float(se), "gof": gof}


def _limit_spec_for(scenario: Scenario, phi: WindowFunctional) -> LimitSpec:
    calE, _, _, method = response_curve(scenario, phi)
    law = scenario.law()
    if isinstance(law.w_model, ConstantRate):
        g_sampler = law.w_model.w0
    else:
        g_sampler = law.sample_limit_rate
    spec = limit_params(
        phi.name,
        scenario.lam,
        scenario.alpha,
        g_sampler,
        calE,
        rng=RngStream(scenario.seed, stream_id=2**31 - 1),
    )
    if method == "monte_carlo":
        spec = replace(spec, provenance="monte_carlo")
    return spec


def _analysis_stable_limit(scenario: Scenario, workers: int) -> dict:
    block = {}
    for spec_str in scenario.functionals:
        phi = make_functional(spec_str, scenario.window_h)
        calE, cal0, se, method = response_curve(scenario, phi)
        lspec = _limit_spec_for(scenario, phi)
        per_T = {}
        reports = []
        for t_index, T in enumerate(scenario.T_ladder):
            tasks = [
                (scenario, t_index, r, (spec_str,), (cal0,), (1.0,))
                for r in range(scenario.replicates)
            ]
            z = np.array(
                [out[0, 0] for out in _ordered(_map_tasks(_z_task, tasks, workers))]
            )
            per_T[T] = z
            if lspec.degenerate:
                reports.append(
                    GofReport(
                        name=f"{scenario.name}/stable_limit/{phi.name}/T={T:g}",
                        stat=float(np.abs(z).max()),
                        threshold=1e-6 + 10 * se * T / tail_quantile_a(scenario.y_dist(), T),
                        n=z.size,
                        detail="degenerate limit: Delta = 0 a.s.",
                    )
                )
                continue
            ref = sample_stable(
                lspec.params,
                4 * scenario.replicates,
                RngStream(scenario.seed, stream_id=2**30).substream(t_index),
            )
            reports.append(
                ks_two_sample(
                    z, ref, f"{scenario.name}/stable_limit/{phi.name}/T={T:g}"
                )
            )
        block[phi.name] = {
            "limit": lspec,
            "centering": cal0,
            "centering_se": se,
            "centering_method": method,
            "samples": per_T,
            "gofs": reports,
        }
    return block


def _analysis_self_similarity(scenario: Scenario, workers: int) -> dict:
    spec_str = scenario.functionals[0]
    phi = make_functional(spec_str, scenario.window_h)
    _, cal0, se, method = response_curve(scenario, phi)
    u = min(u for u in scenario.u_grid if u < 1.0) if min(scenario.u_grid) < 1 else 0.25
    t_index = len(scenario.T_ladder) - 1
    T = scenario.T_ladder[t_index]
    n = scenario.replicates
    # disjoint replicate banks so the two KS samples are independent
    tasks_u = [
        (scenario, t_index, r, (spec_str,), (cal0,), (u,)) for r in range(n)
    ]
    tasks_1 = [
        (scenario, t_index, r, (spec_str,), (cal0,), (1.0,)) for r in range(n, 2 * n)
    ]
    z_u = np.array([o[0, 0] for o in _ordered(_map_tasks(_z_task, tasks_u, workers))])
    z_1 = np.array([o[0, 0] for o in _ordered(_map_tasks(_z_task, tasks_1, workers))])
    scale = u ** (-1.0 / scenario.alpha)
    gof = ks_two_sample(
        z_u * scale, z_1, f"{scenario.name}/self_similarity/{phi.name}/u={u:g}"
    )
    return {
        "functional": phi.name,
        "u": u,
        "T": T,
        "exponent": 1.0 / scenario.alpha,
        "rescaled": z_u * scale,
        "reference": z_1,
        "gof": gof,
        "centering_method": method,
        "centering_se": se,
    }


def _analysis_cdf_rate(scenario: Scenario, workers: int) -> dict:
    law = scenario.law()
    if not isinstance(law.w_model, ConstantRate) or law.w_model.w0 != 1.0:
        raise ValueError("cdf_rate analysis assumes unit constant rates")
    x_grid = np.asarray(scenario.x_grid, dtype=float)
    nu = scenario.lam * law.mean_y
    K = poisson_K(nu, x_grid)
    tasks = [(scenario, r, x_grid) for r in range(scenario.replicates)]
    rows = _ordered(_map_tasks(_cdf_task, tasks, workers))
    errors = np.stack(rows) - K[None, None, :]  # (replicate, T, x)
    dist = scenario.y_dist()
    out = {"x_grid": x_grid, "K": K, "T_ladder": scenario.T_ladder}
    slope_target = -(1.0 - 1.0 / scenario.alpha)
    per_x = {}
    for j, x in enumerate(x_grid):
        disp = np.array([iqr(errors[:, i, j]) for i in range(len(scenario.T_ladder))])
        slope, stderr = rate_regression(scenario.T_ladder, disp)
        T_top = scenario.T_ladder[-1]
        norm = T_top / float(tail_quantile_a(dist, T_top))
        d_sample = norm * errors[:, -1, j]
        per_x[float(x)] = {
            "iqr": disp,
            "slope": slope,
            "stderr": stderr,
            "d_sample": d_sample,
            "left_skew": bool(d_sample.mean() < np.median(d_sample)),
            "gof": GofReport(
                name=f"{scenario.name}/cdf_rate/x={x:g}",
                stat=abs(slope - slope_target),
                threshold=0.10,
                n=scenario.replicates,
                detail=f"slope={slope:.3f} target={slope_target:.3f}",
            ),
        }
    out["per_x"] = per_x
    return out


def _random_step_path(gen: np.random.Generator) -> SteppyPath:
    n = int(gen.integers(1, 8))
    times = np.sort(gen.uniform(0.05, 0.95, n))
    while np.any(np.diff(times) <= 0):
        times = np.sort(gen.uniform(0.05, 0.95, n))
    values = gen.normal(size=n + 1)
    return SteppyPath.step(0.0, 1.0, times, values)


def _analysis_m1_diagnostic(scenario: Scenario) -> dict:
    gen = RngStream(scenario.seed, stream_id=3).generator()
    n_pairs = 50
    grid_n = 128
    worst = 0.0
    for _ in range(n_pairs):
        f = _random_step_path(gen)
        g = _random_step_path(gen)
        lo, up = dist_m1(f, g, grid_n=grid_n)
        worst = max(worst, up - dist_uniform(f, g), lo - up)
        # interval-splitting: bound on [0,1] vs max over halves
        lo_l, up_l = dist_m1(f.restrict(0.0, 0.5), g.restrict(0.0, 0.5), grid_n)
        lo_r, up_r = dist_m1(f.restrict(0.5, 1.0), g.restrict(0.5, 1.0), grid_n)
        worst = max(worst, up - max(up_l, up_r) - 2.0 / grid_n)
    gof = GofReport(
        name=f"{scenario.name}/m1_diagnostic",
        stat=max(worst, 0.0),
        threshold=1e-9,
        n=n_pairs,
        detail=f"grid_n={grid_n}",
    )
    return {"n_pairs": n_pairs, "grid_n": grid_n, "gof": gof}


# -- report -----------------------------------------------------------------


@dataclass
class Report:
    scenario: Scenario
    blocks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    backend: str = ""

    def gofs(self) -> list:
        out = []

        def walk(obj):
            if isinstance(obj, GofReport):
                out.append(obj)
            elif isinstance(obj, dict):
                for v in obj.values():
                    walk(v)
            elif isinstance(obj, (list, tuple)):
                for v in obj:
                    walk(v)

        walk(self.blocks)
        return out

    @property
    def all_passed(self) -> bool:
        return all(g.passed for g in self.gofs())

    def to_text(self) -> str:
        lines = [f"scenario: {self.scenario.name}"]
        for k, v in sorted(self.scenario.to_dict().items()):
            lines.append(f"  {k}: {v!r}")
        lines.append(f"backend: {self.backend}")
        for note in self.notes:
            lines.append(f"note: {note}")
        for name in sorted(self.blocks):
            lines.append(f"[{name}]")
            block = self.blocks[name]
            if "error" in block:
                lines.append(f"  error: {block['error']}")
                continue
            for g in _collect_gofs(block):
                lines.append("  " + g.line())
        verdict = "PASS" if self.all_passed else "FAIL"
        lines.append(f"overall: {verdict}")
        return "\n".join(lines) + "\n"


def _collect_gofs(block) -> list:
    out = []
    if isinstance(block, GofReport):
        return [block]
    if isinstance(block, dict):
        for v in block.values():
            out.extend(_collect_gofs(v))
    elif isinstance(block, (list, tuple)):
        for v in block:
            out.extend(_collect_gofs(v))
    return out


def run(scenario: Scenario, workers: Optional[int] = None) -> Report:
    notes = validate(scenario)
    workers = scenario.workers if workers is None else workers
    report = Report(scenario=scenario, notes=notes, backend=backend_name())
    dispatch = {
        "cycle_mean": lambda: _analysis_cycle_mean(scenario),
        "cycle_tail": lambda: _analysis_cycle_tail(scenario),
        "hill": lambda: _analysis_hill(scenario),
        "stable_limit": lambda: _analysis_stable_limit(scenario, workers),
        "self_similarity": lambda: _analysis_self_similarity(scenario, workers),
        "cdf_rate": lambda: _analysis_cdf_rate(scenario, workers),
        "m1_diagnostic": lambda: _analysis_m1_diagnostic(scenario),
    }
    for name in scenario.analyses:
        try:
            report.blocks[name] = dispatch[name]()
        except Exception as exc:  # analyses are independent by contract
            report.blocks[name] = {"error": f"{type(exc).__name__}: {exc}"}
    return report


# -- emission ---------------------------------------------------------------


def _write_csv(dest, header, rows):
    with open(dest, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def emit(report: Report, out_dir, fmt: str = "csv-bundle") -> list:
    """Write the report to out_dir; returns the list of files written."""
    if fmt not in ("csv-bundle", "structured-text"):
        raise ValueError(f"unknown emit format {fmt!r}")
    os.makedirs(out_dir, exist_ok=True)
    written = []

    def path(name):
        p = os.path.join(out_dir, name)
        written.append(p)
        return p

    with open(path("report.txt"), "w") as fh:
        fh.write(report.to_text())
    report.scenario.to_yaml(path("scenario_echo.yaml"))
    if fmt == "structured-text":
        return written

    blocks = report.blocks
    if "cycle_tail" in blocks and "table" in blocks["cycle_tail"]:
        _write_csv(
            path("cycle_tail.csv"),
            ["t", "x", "empirical", "theoretical", "n_exceed", "reliable"],
            [
                (c.t, c.x, c.empirical, c.theoretical, c.n_exceed, int(c.reliable))
                for c in blocks["cycle_tail"]["table"]
            ],
        )
    if "stable_limit" in blocks and "error" not in blocks["stable_limit"]:
        for phi_name, sub in blocks["stable_limit"].items():
            for T, z in sub["samples"].items():
                _write_csv(
                    path(f"stable_limit_{phi_name}_T{T:g}.csv"),
                    ["replicate", "z"],
                    list(enumerate(np.asarray(z))),
                )
            with open(path(f"stable_limit_{phi_name}_params.txt"), "w") as fh:
                fh.write(sub["limit"].to_text())
    if "self_similarity" in blocks and "error" not in blocks["self_similarity"]:
        ss = blocks["self_similarity"]
        _write_csv(
            path("self_similarity.csv"),
            ["replicate", "rescaled", "reference"],
            list(zip(range(len(ss["rescaled"])), ss["rescaled"], ss["reference"])),
        )
    if "cdf_rate" in blocks and "error" not in blocks["cdf_rate"]:
        cr = blocks["cdf_rate"]
        rows = []
        for x, sub in cr["per_x"].items():
            for T, d in zip(cr["T_ladder"], sub["iqr"]):
                rows.append((x, T, d, sub["slope"], sub["stderr"]))
        _write_csv(path("cdf_rate.csv"), ["x", "T", "iqr", "slope", "stderr"], rows)
    gof_rows = [
        (g.name, g.stat, g.threshold, g.n, "pass" if g.passed else "fail")
        for g in report.gofs()
    ]
    _write_csv(path("gof.csv"), ["name", "stat", "threshold", "n", "decision"], gof_rows)
    return written


# -- built-in scenarios ------------------------------------------------------


def builtin_scenarios() -> dict:
    """Named scenarios mirroring the shipped verification suite (reduced
    replicate counts so a demo run finishes in minutes; the test suite
    runs the full-scale versions)."""
    ref = dict(lam=1.0, alpha=1.5, xm=1.0, w_kind="constant", w_params=(1.0,))
    return {
        "cycles": Scenario(
            name="cycles", analyses=("cycle_mean", "cycle_tail", "hill"),
            n_cycles=100_000, tail_t=1e3, tail_x=(1.0, 2.0), hill_k=1000,
            seed=7, **ref,
        ),
        "stable-limit": Scenario(
            name="stable-limit", analyses=("stable_limit",),
            functionals=("identity",), T_ladder=(1e3, 1e4), replicates=400,
            seed=11, **ref,
        ),
        "idle-skew": Scenario(
            name="idle-skew", analyses=("stable_limit",),
            functionals=("idle",), T_ladder=(1e4,), replicates=400,
            lam=0.3, alpha=1.5, xm=1.0, w_kind="constant", w_params=(1.0,),
            seed=13,
        ),
        "cdf-rate": Scenario(
            name="cdf-rate", analyses=("cdf_rate",),
            T_ladder=(1e3, 1e4, 1e5), replicates=100, x_grid=(1.0,),
            seed=17, **ref,
        ),
        "self-similar": Scenario(
            name="self-similar", analyses=("self_similarity",),
            functionals=("identity",), T_ladder=(1e4,), replicates=400,
            u_grid=(0.25, 1.0), seed=19, **ref,
        ),
        "m1": Scenario(name="m1", analyses=("m1_diagnostic",), seed=23, **ref),
    }
