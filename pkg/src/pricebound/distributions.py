"""Positive valuation distributions behind one abstract interface.

Every distribution exposes the CDF ``P(V <= v)``, both survival
conventions ``P(V > v)`` / ``P(V >= v)`` (they differ exactly by the atom
mass at ``v``), the generalized inverse quantile, and seeded sampling.
Parametric families use closed forms; mixtures delegate CDF evaluation
and quantile bisection to the kernel backend (compiled or NumPy).

All array-core methods (`_cdf`, `_sf`, `_sf_weak`, `_quantile`) take and
return 1-D float64 arrays; the public wrappers accept scalars or arrays.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod

import numpy as np
from scipy.special import ndtr, ndtri

from . import _backend
from ._kernels_py import (
    FAM_EMPIRICAL,
    FAM_EQUALREV,
    FAM_EXPONENTIAL,
    FAM_LOGNORMAL,
    FAM_PARETO,
    FAM_POINTMASS,
    FAM_UNIFORM,
    MODE_CDF,
    MODE_SF,
    MODE_SF_WEAK,
)
from .errors import AtomsNotAllowedError, EmpiricalFileError

__all__ = [
    "Distribution",
    "PointMass",
    "Uniform",
    "Exponential",
    "Pareto",
    "LogNormal",
    "EqualRevenue",
    "Empirical",
    "Mixture",
    "is_purely_atomic",
    "probability_integral_samples",
]

_TINY_U = 0.5**53  # smallest uniform draw we allow, keeps samples positive


def _apply(core, x):
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 0:
        return float(core(arr.reshape(1))[0])
    return core(arr)


class Distribution(ABC):
    """A positive random valuation ``V`` with CDF ``F``.

    Immutable after construction and safe for concurrent reads; sampling
    takes a caller-owned :class:`numpy.random.Generator`.
    """

    @abstractmethod
    def _cdf(self, v: np.ndarray) -> np.ndarray:
        """P(V <= v), elementwise."""

    @abstractmethod
    def _sf(self, v: np.ndarray) -> np.ndarray:
        """P(V > v), elementwise, computed natively (not as 1 - cdf)."""

    def _sf_weak(self, v: np.ndarray) -> np.ndarray:
        """P(V >= v); equals ``_sf`` except at atoms."""
        return self._sf(v)

    @abstractmethod
    def _quantile(self, u: np.ndarray) -> np.ndarray:
        """Generalized inverse inf{v : F(v) >= u} for u in (0, 1)."""

    @abstractmethod
    def support(self) -> tuple[float, float]:
        """(lower, upper); upper may be ``math.inf``."""

    def atoms(self) -> list[tuple[float, float]]:
        """Sorted (location, mass) pairs; empty for continuous laws."""
        return []

    # -- public scalar-or-array wrappers ---------------------------------

    def cdf(self, v):
        return _apply(self._cdf, v)

    def survival(self, v):
        return _apply(self._sf, v)

    def left_survival(self, v):
        return _apply(self._sf_weak, v)

    def quantile(self, u):
        arr = np.asarray(u, dtype=np.float64)
        if np.any(arr <= 0.0) or np.any(arr >= 1.0):
            raise ValueError("quantile argument must lie strictly in (0, 1)")
        return _apply(self._quantile, u)

    def sample(self, rng: np.random.Generator, size: int | None = None):
        """Draw samples; scalar when ``size`` is None, else 1-D array."""
        n = 1 if size is None else int(size)
        u = rng.random(n)
        u[u == 0.0] = _TINY_U
        out = self._quantile(u)
        return float(out[0]) if size is None else out


# ---------------------------------------------------------------------------
# parametric families


class PointMass(Distribution):
    """All mass at a single positive value."""

    def __init__(self, value: float):
        value = float(value)
        if not value > 0.0:
            raise ValueError("pointmass value must be positive")
        self.value = value

    def _cdf(self, v):
        return (v >= self.value).astype(float)

    def _sf(self, v):
        return (v < self.value).astype(float)

    def _sf_weak(self, v):
        return (v <= self.value).astype(float)

    def _quantile(self, u):
        return np.full_like(u, self.value)

    def atoms(self):
        return [(self.value, 1.0)]

    def support(self):
        return (self.value, self.value)

    def __repr__(self):
        return f"PointMass({self.value!r})"


class Uniform(Distribution):
    """Uniform on [lo, hi] with 0 <= lo < hi."""

    def __init__(self, lo: float, hi: float):
        lo, hi = float(lo), float(hi)
        if lo < 0.0 or not hi > lo:
            raise ValueError("uniform needs 0 <= a < b")
        self.lo, self.hi = lo, hi

    def _cdf(self, v):
        return np.clip((v - self.lo) / (self.hi - self.lo), 0.0, 1.0)

    def _sf(self, v):
        return np.clip((self.hi - v) / (self.hi - self.lo), 0.0, 1.0)

    def _quantile(self, u):
        return self.lo + u * (self.hi - self.lo)

    def support(self):
        return (self.lo, self.hi)

    def __repr__(self):
        return f"Uniform({self.lo!r}, {self.hi!r})"


class Exponential(Distribution):
    """Exponential with the given rate."""

    def __init__(self, rate: float):
        rate = float(rate)
        if not rate > 0.0:
            raise ValueError("exponential rate must be positive")
        self.rate = rate

    def _cdf(self, v):
        return -np.expm1(-self.rate * np.maximum(v, 0.0))

    def _sf(self, v):
        return np.exp(-self.rate * np.maximum(v, 0.0))

    def _quantile(self, u):
        return -np.log1p(-u) / self.rate

    def support(self):
        return (0.0, math.inf)

    def __repr__(self):
        return f"Exponential({self.rate!r})"


class Pareto(Distribution):
    """Pareto with shape ``alpha`` and scale; infinite mean when alpha <= 1."""

    def __init__(self, alpha: float, scale: float):
        alpha, scale = float(alpha), float(scale)
        if not alpha > 0.0 or not scale > 0.0:
            raise ValueError("pareto needs alpha > 0 and scale > 0")
        self.alpha, self.scale = alpha, scale

    def _cdf(self, v):
        return 1.0 - self._sf(v)

    def _sf(self, v):
        sf = np.ones_like(v)
        m = v > self.scale
        sf[m] = (self.scale / v[m]) ** self.alpha
        return sf

    def _quantile(self, u):
        return self.scale * (1.0 - u) ** (-1.0 / self.alpha)

    def support(self):
        return (self.scale, math.inf)

    def __repr__(self):
        return f"Pareto({self.alpha!r}, {self.scale!r})"


class LogNormal(Distribution):
    """log V ~ Normal(mu, sigma^2)."""

    def __init__(self, mu: float, sigma: float):
        mu, sigma = float(mu), float(sigma)
        if not sigma > 0.0:
            raise ValueError("lognormal sigma must be positive")
        self.mu, self.sigma = mu, sigma

    def _z(self, v):
        z = np.full_like(v, -np.inf)
        m = v > 0.0
        z[m] = (np.log(v[m]) - self.mu) / self.sigma
        return z

    def _cdf(self, v):
        return ndtr(self._z(v))

    def _sf(self, v):
        return ndtr(-self._z(v))

    def _quantile(self, u):
        # evaluate ndtri on the smaller tail for accuracy deep in either tail
        z = np.where(u <= 0.5, ndtri(u), -ndtri(1.0 - u))
        return np.exp(self.mu + self.sigma * z)

    def support(self):
        return (0.0, math.inf)

    def __repr__(self):
        return f"LogNormal({self.mu!r}, {self.sigma!r})"


class EqualRevenue(Distribution):
    """The equal revenue law with parameter c: F(v) = 1 - c/v for v > c.

    Every price p >= c earns expected revenue exactly c.
    """

    def __init__(self, c: float):
        c = float(c)
        if not c > 0.0:
            raise ValueError("equalrev parameter must be positive")
        self.c = c

    def _cdf(self, v):
        return 1.0 - self._sf(v)

    def _sf(self, v):
        sf = np.ones_like(v)
        m = v > self.c
        sf[m] = self.c / v[m]
        return sf

    def _quantile(self, u):
        return self.c / (1.0 - u)

    def support(self):
        return (self.c, math.inf)

    def __repr__(self):
        return f"EqualRevenue({self.c!r})"


class Empirical(Distribution):
    """Discrete uniform law over a finite sample (no smoothing)."""

    def __init__(self, values):
        vals = np.sort(np.asarray(values, dtype=np.float64))
        if vals.size == 0:
            raise ValueError("empirical sample is empty")
        if not np.all(np.isfinite(vals)) or vals[0] <= 0.0:
            raise ValueError("empirical samples must be positive finite numbers")
        self.values = vals
        self._cum = np.arange(1, vals.size + 1) / vals.size

    @classmethod
    def from_file(cls, path) -> "Empirical":
        """One positive decimal per line; ``#`` starts a comment."""
        try:
            with open(path, "r", encoding="utf-8") as fh:
                lines = fh.readlines()
        except OSError as exc:
            raise EmpiricalFileError(f"cannot read {path}: {exc}") from exc
        vals = []
        for i, line in enumerate(lines, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                x = float(text)
            except ValueError as exc:
                raise EmpiricalFileError(f"{path}:{i}: not a number: {text!r}") from exc
            if not (math.isfinite(x) and x > 0.0):
                raise EmpiricalFileError(f"{path}:{i}: values must be positive, got {x!r}")
            vals.append(x)
        if not vals:
            raise EmpiricalFileError(f"{path}: no samples")
        return cls(vals)

    def _cdf(self, v):
        return np.searchsorted(self.values, v, side="right") / self.values.size

    def _sf(self, v):
        n = self.values.size
        return (n - np.searchsorted(self.values, v, side="right")) / n

    def _sf_weak(self, v):
        n = self.values.size
        return (n - np.searchsorted(self.values, v, side="left")) / n

    def _quantile(self, u):
        idx = np.searchsorted(self._cum, u, side="left")
        return self.values[np.minimum(idx, self.values.size - 1)]

    def atoms(self):
        locs, counts = np.unique(self.values, return_counts=True)
        n = self.values.size
        return [(float(l), c / n) for l, c in zip(locs, counts)]

    def support(self):
        return (float(self.values[0]), float(self.values[-1]))

    def __repr__(self):
        return f"Empirical(<{self.values.size} samples>)"


# ---------------------------------------------------------------------------
# mixtures


_LEAF_CODES = {
    PointMass: FAM_POINTMASS,
    Uniform: FAM_UNIFORM,
    Exponential: FAM_EXPONENTIAL,
    Pareto: FAM_PARETO,
    LogNormal: FAM_LOGNORMAL,
    EqualRevenue: FAM_EQUALREV,
    Empirical: FAM_EMPIRICAL,
}


def _leaf_params(d) -> tuple[float, float]:
    if isinstance(d, PointMass):
        return d.value, 0.0
    if isinstance(d, Uniform):
        return d.lo, d.hi
    if isinstance(d, Exponential):
        return d.rate, 0.0
    if isinstance(d, Pareto):
        return d.alpha, d.scale
    if isinstance(d, LogNormal):
        return d.mu, d.sigma
    if isinstance(d, EqualRevenue):
        return d.c, 0.0
    return 0.0, 0.0  # empirical: data carried separately


class Mixture(Distribution):
    """Convex mixture of leaf distributions.

    Nested mixtures are flattened at construction (weights multiply), so
    the kernel always sees a flat component list.  Weights are normalized
    to sum to one.
    """

    def __init__(self, components):
        flat: list[tuple[float, Distribution]] = []

        def _flatten(w, d):
            if isinstance(d, Mixture):
                for wi, di in zip(d.weights, d.components):
                    _flatten(w * wi, di)
            elif type(d) in _LEAF_CODES:
                flat.append((w, d))
            else:
                raise TypeError(f"unsupported mixture component {type(d).__name__}")

        for w, d in components:
            w = float(w)
            if not w > 0.0:
                raise ValueError("mixture weights must be positive")
            _flatten(w, d)
        if not flat:
            raise ValueError("mixture needs at least one component")

        total = sum(w for w, _ in flat)
        self.weights = np.array([w / total for w, _ in flat])
        self.components = [d for _, d in flat]

        n = len(flat)
        self._kind = np.array([_LEAF_CODES[type(d)] for d in self.components], dtype=np.int64)
        self._pa = np.empty(n)
        self._pb = np.empty(n)
        emp_parts, starts, lens = [], np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int64)
        pos = 0
        for i, d in enumerate(self.components):
            self._pa[i], self._pb[i] = _leaf_params(d)
            if isinstance(d, Empirical):
                starts[i], lens[i] = pos, d.values.size
                emp_parts.append(d.values)
                pos += d.values.size
        self._emp = np.concatenate(emp_parts) if emp_parts else np.zeros(0)
        self._emp_start, self._emp_len = starts, lens

    def _prob(self, v, mode):
        return _backend.impl.mixture_prob(
            self._kind, self.weights, self._pa, self._pb,
            self._emp, self._emp_start, self._emp_len, v, mode,
        )

    def _cdf(self, v):
        return self._prob(v, MODE_CDF)

    def _sf(self, v):
        return self._prob(v, MODE_SF)

    def _sf_weak(self, v):
        return self._prob(v, MODE_SF_WEAK)

    def _quantile(self, u):
        # the mixture quantile lies between the extreme component quantiles
        qs = np.stack([d._quantile(u) for d in self.components])
        return _backend.impl.mixture_quantile(
            self._kind, self.weights, self._pa, self._pb,
            self._emp, self._emp_start, self._emp_len,
            u, qs.min(axis=0), qs.max(axis=0),
        )

    def sample(self, rng, size=None):
        n = 1 if size is None else int(size)
        cw = np.cumsum(self.weights)
        idx = np.searchsorted(cw, rng.random(n), side="right")
        idx = np.minimum(idx, len(self.components) - 1)
        u = rng.random(n)
        u[u == 0.0] = _TINY_U
        out = np.empty(n)
        for i, d in enumerate(self.components):
            m = idx == i
            if m.any():
                out[m] = d._quantile(u[m])
        return float(out[0]) if size is None else out

    def atoms(self):
        acc: dict[float, float] = {}
        for w, d in zip(self.weights, self.components):
            for loc, mass in d.atoms():
                acc[loc] = acc.get(loc, 0.0) + w * mass
        return sorted(acc.items())

    def support(self):
        los, his = zip(*(d.support() for d in self.components))
        return (min(los), max(his))

    def __repr__(self):
        parts = ", ".join(f"{w:.3g}*{d!r}" for w, d in zip(self.weights, self.components))
        return f"Mixture({parts})"


def is_purely_atomic(d: Distribution) -> bool:
    """True when the whole law is atoms (point masses / empirical samples)."""
    if isinstance(d, (PointMass, Empirical)):
        return True
    if isinstance(d, Mixture):
        return all(isinstance(c, (PointMass, Empirical)) for c in d.components)
    return False


def probability_integral_samples(d: Distribution, n: int, seed: int) -> np.ndarray:
    """Return ``F(V_i)`` for ``n`` draws; requires an atomless distribution.

    For continuous F this transform is uniform on [0, 1], which is what
    the uniformity test suites check.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if d.atoms():
        raise AtomsNotAllowedError(
            "probability integral transform requires an atomless distribution"
        )
    rng = np.random.default_rng(seed)
    return d._cdf(d.sample(rng, n))
