"""Heavy-tailed duration laws and alpha-stable variates.

Provides the Pareto (and user-supplied) duration distribution with its tail
quantile ``a(t) = (1/sf)^{<-}(t)``, the stable scale constant
``c(alpha) = |Gamma(1-alpha) cos(pi alpha/2)|``, the Chambers-Mallows-Stuck
sampler and the matching characteristic function.  Sampler and CF share the
"1-type" parametrization: for alpha != 1,

    E exp(itX) = exp{ i mu t - sigma^alpha |t|^alpha
                      (1 - i beta sgn(t) tan(pi alpha / 2)) }.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .rng import RngStream

__all__ = [
    "TailDist",
    "StableParams",
    "sample_pareto",
    "tail_quantile_a",
    "c_alpha",
    "sample_stable",
    "stable_cf",
]


@dataclass(frozen=True)
class TailDist:
    """Session-duration distribution with regularly varying tail.

    ``kind`` is 'pareto' (closed forms throughout) or 'user' (caller
    supplies mutually consistent survival and quantile maps).  The quantile
    map takes p in (0, 1] to inf{y : sf(y) <= p}.
    """

    kind: str
    declared_alpha: float
    xm: float = 1.0
    survival: Optional[Callable] = None
    quantile: Optional[Callable] = None
    mean: Optional[float] = None
    # exact size-biased sampling for non-Pareto laws needs the size-biased
    # quantile; Pareto has it in closed form (tail index alpha - 1)
    size_biased_quantile: Optional[Callable] = None

    @classmethod
    def pareto(cls, alpha: float, xm: float = 1.0) -> "TailDist":
        if alpha <= 0:
            raise ValueError(f"pareto tail index must be positive, got {alpha}")
        if xm <= 0:
            raise ValueError(f"pareto scale must be positive, got {xm}")
        return cls(kind="pareto", declared_alpha=alpha, xm=xm)

    @classmethod
    def user(
        cls,
        survival: Callable,
        quantile: Callable,
        declared_alpha: float,
        mean: float,
        size_biased_quantile: Optional[Callable] = None,
    ) -> "TailDist":
        return cls(
            kind="user",
            declared_alpha=declared_alpha,
            survival=survival,
            quantile=quantile,
            mean=mean,
            size_biased_quantile=size_biased_quantile,
        )

    def sf(self, y):
        """Survival function P(Y > y)."""
        if self.kind == "pareto":
            y = np.asarray(y, dtype=float)
            return np.minimum(1.0, (y / self.xm) ** -self.declared_alpha)
        return self.survival(y)

    def ppf_sf(self, p):
        """Quantile of the survival function: inf{y : sf(y) <= p}."""
        if self.kind == "pareto":
            p = np.asarray(p, dtype=float)
            return self.xm * p ** (-1.0 / self.declared_alpha)
        return self.quantile(p)

    @property
    def mean_y(self) -> float:
        if self.kind == "pareto":
            a = self.declared_alpha
            if a <= 1:
                raise ValueError("pareto mean is infinite for tail index <= 1")
            return a * self.xm / (a - 1)
        if self.mean is None:
            raise ValueError("user distribution must declare its mean")
        return self.mean

    def sample(self, n: int, gen: np.random.Generator) -> np.ndarray:
        u = gen.uniform(size=n)
        return np.asarray(self.ppf_sf(u), dtype=float)

    def sample_size_biased(self, n: int, gen: np.random.Generator) -> np.ndarray:
        """Draws from the duration-weighted law y P(Y in dy) / E[Y]."""
        u = gen.uniform(size=n)
        if self.kind == "pareto":
            a = self.declared_alpha
            if a <= 1:
                raise ValueError("size-biased pareto needs tail index > 1")
            return self.xm * u ** (-1.0 / (a - 1))
        if self.size_biased_quantile is None:
            raise ValueError(
                "user distribution needs a size_biased_quantile for "
                "stationary initialization"
            )
        return np.asarray(self.size_biased_quantile(u), dtype=float)


@dataclass(frozen=True)
class StableParams:
    """(alpha, sigma, beta, mu) of a stable law in the 1-type parametrization."""

    alpha: float
    sigma: float
    beta: float = 0.0
    mu: float = 0.0

    def __post_init__(self):
        if not 0 < self.alpha <= 2:
            raise ValueError(f"alpha must be in (0, 2], got {self.alpha}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")
        if abs(self.beta) > 1:
            raise ValueError(f"beta must be in [-1, 1], got {self.beta}")


def sample_pareto(dist: TailDist, n: int, rng: RngStream) -> np.ndarray:
    """n i.i.d. Pareto draws via inverse transform xm * U^(-1/alpha)."""
    if dist.kind != "pareto":
        raise ValueError("sample_pareto requires a pareto TailDist")
    if n < 1:
        raise ValueError("n must be >= 1")
    return dist.sample(n, rng.generator())


def tail_quantile_a(dist: TailDist, t) -> np.ndarray | float:
    """Tail quantile a(t) = inf{y : 1/sf(y) >= t}, t > 1.

    Exactly xm * t^(1/alpha) for Pareto; nondecreasing in t.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 1):
        raise ValueError("tail quantile requires t > 1")
    out = dist.ppf_sf(1.0 / t_arr)
    return float(out) if np.isscalar(t) else np.asarray(out)


def c_alpha(alpha: float) -> float:
    """Stable scale constant |Gamma(1-alpha) cos(pi alpha/2)| on (1, 2).

    Strictly positive and continuous there, with limit pi/2 as alpha -> 1+
    (a 0 * inf form) and divergence as alpha -> 2-.
    """
    if not 1 < alpha < 2:
        raise ValueError(f"c_alpha is defined on (1, 2), got {alpha}")
    return abs(math.gamma(1.0 - alpha) * math.cos(math.pi * alpha / 2.0))


def _cms_standard(alpha: float, beta: float, n: int, gen: np.random.Generator):
    # Chambers-Mallows-Stuck, alpha != 1, 1-type standardization
    v = gen.uniform(-math.pi / 2, math.pi / 2, n)
    w = gen.exponential(1.0, n)
    ta = beta * math.tan(math.pi * alpha / 2.0)
    b0 = math.atan(ta) / alpha
    scale = (1.0 + ta * ta) ** (1.0 / (2.0 * alpha))
    return (
        scale
        * np.sin(alpha * (v + b0))
        / np.cos(v) ** (1.0 / alpha)
        * (np.cos(v - alpha * (v + b0)) / w) ** ((1.0 - alpha) / alpha)
    )


def sample_stable(params: StableParams, n: int, rng: RngStream) -> np.ndarray:
    """n i.i.d. draws from the stable law of ``stable_cf`` (CMS construction)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if params.alpha == 1.0:
        raise NotImplementedError("alpha = 1 is outside the supported range")
    x = _cms_standard(params.alpha, params.beta, n, rng.generator())
    return params.sigma * x + params.mu


def stable_cf(params: StableParams, t) -> np.ndarray | complex:
    """Characteristic function at t; modulus <= 1, value 1 at t = 0."""
    t_arr = np.asarray(t, dtype=float)
    a = params.alpha
    skew = 1.0 - 1j * params.beta * np.sign(t_arr) * math.tan(math.pi * a / 2.0)
    val = np.exp(
        1j * params.mu * t_arr - params.sigma**a * np.abs(t_arr) ** a * skew
    )
    return complex(val) if np.isscalar(t) else val
