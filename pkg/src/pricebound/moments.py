"""Arithmetic and geometric expectation by quantile-space quadrature.

Both moments are integrals over the unit interval: E[V] = int Q(u) du and
E[log V] = int log Q(u) du for the quantile function Q.  Working in
quantile space needs no densities and handles atoms for free (Q is flat
across an atom's probability interval).

The unit interval is paneled dyadically toward both endpoints so that
tail singularities are resolved: panels [2^-k-1, 2^-k] and their mirror
images near 1, down to 2^-40, each integrated by 16-point Gauss-Legendre
and refined adaptively.  The leftover stubs at the two ends are summed by
geometric extrapolation of the dyadic panel series; when the upper panel
series fails to decay, the integral is declared divergent (+inf), which
is how the heavy-tail families with infinite mean are recognized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import Distribution, is_purely_atomic

__all__ = [
    "MomentsReport",
    "expectation",
    "log_expectation",
    "geometric_expectation",
    "mc_log_expectation",
    "moments_report",
]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
_DEPTH_CAP = 12
_LADDER_K = 40  # dyadic panels down to width 2^-40 at each end
_DECAY_LIMIT = 0.998  # mean panel ratio at or above this means no decay


@dataclass(frozen=True)
class MomentsReport:
    expectation: float  # +inf for heavy tails
    log_expectation: float
    geometric_expectation: float
    quadrature_error: float
    mc_estimate: float  # Monte Carlo mean of log V
    mc_standard_error: float


def _gl_panels(d, f, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Batched 16-point Gauss-Legendre of f(Q(u)) over panels [a_i, b_i]."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    u = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    vals = f(d._quantile(u)).reshape(a.size, _GL_NODES.size)
    return half * (vals @ _GL_WEIGHTS)


def _stub(i_panels: np.ndarray) -> tuple[float, float, bool]:
    """Extrapolate the remaining dyadic series past its deepest panel.

    ``i_panels`` runs from the shallow end toward the endpoint.  Returns
    (stub_value, stub_error, diverged): the series is treated as roughly
    geometric with the measured mean ratio of the last eight panels.
    """
    if not np.all(np.isfinite(i_panels)):
        return 0.0, 0.0, True
    mags = np.abs(i_panels[-9:])
    if mags[-1] == 0.0:
        return 0.0, 0.0, False
    ratios = mags[1:] / np.maximum(mags[:-1], 1e-300)
    r = float(np.mean(ratios))
    if r >= _DECAY_LIMIT:
        return 0.0, 0.0, True
    r = max(r, 0.0)
    stub = float(i_panels[-1]) * r / (1.0 - r)
    spread = float(np.max(ratios) - np.min(ratios))
    return stub, abs(stub) * min(1.0, 10.0 * spread + 1e-6), False


def _integrate(d: Distribution, f, tol: float) -> tuple[float, float]:
    """Adaptive integral of f(Q(u)) over (0, 1); (value, error_estimate).

    Returns (+-inf, inf) when an endpoint series diverges, signed by the
    deepest panel on that side.
    """
    lower = 0.5 ** np.arange(_LADDER_K, 0, -1.0)
    upper = 1.0 - 0.5 ** np.arange(2.0, _LADDER_K + 1)
    bp = np.concatenate([lower, upper])
    a, b = bp[:-1], bp[1:]
    i_coarse = _gl_panels(d, f, a, b)

    # endpoint behavior from the coarse dyadic ladders (panels ordered
    # from the shallow end toward each endpoint)
    stub_lo, err_lo, div_lo = _stub(i_coarse[: _LADDER_K - 1][::-1])
    stub_hi, err_hi, div_hi = _stub(i_coarse[-(_LADDER_K - 1) :])
    if div_lo:
        deepest = float(i_coarse[0])
        return (math.copysign(math.inf, deepest if deepest != 0.0 else 1.0), math.inf)
    if div_hi:
        deepest = float(i_coarse[-1])
        return (math.copysign(math.inf, deepest if deepest != 0.0 else 1.0), math.inf)

    scale = abs(float(np.sum(i_coarse)) + stub_lo + stub_hi)
    value = stub_lo + stub_hi
    err = err_lo + err_hi
    cur_a, cur_b, cur_i = a, b, i_coarse
    for _ in range(_DEPTH_CAP):
        mid = 0.5 * (cur_a + cur_b)
        halves = _gl_panels(d, f, np.concatenate([cur_a, mid]), np.concatenate([mid, cur_b]))
        refined = halves[: cur_a.size] + halves[cur_a.size :]
        e = np.abs(cur_i - refined)
        done = e <= np.maximum(tol * (cur_b - cur_a), 1e-15 * scale)
        value += float(np.sum(refined[done]))
        err += float(np.sum(e[done]))
        keep = ~done
        if not np.any(keep):
            break
        cur_a = np.concatenate([cur_a[keep], mid[keep]])
        cur_b = np.concatenate([mid[keep], cur_b[keep]])
        cur_i = np.concatenate([halves[: keep.size][keep], halves[keep.size :][keep]])
    else:
        # depth cap reached; accept what is left and charge it to the error
        mid = 0.5 * (cur_a + cur_b)
        halves = _gl_panels(d, f, np.concatenate([cur_a, mid]), np.concatenate([mid, cur_b]))
        refined = halves[: cur_a.size] + halves[cur_a.size :]
        value += float(np.sum(refined))
        err += float(np.sum(np.abs(cur_i - refined)))
    if not math.isfinite(value):
        return (math.copysign(math.inf, value), math.inf)
    return value, err


def _atomic_sums(d: Distribution):
    atoms = d.atoms()
    locs = np.array([a for a, _ in atoms])
    masses = np.array([m for _, m in atoms])
    return float(np.dot(masses, locs)), float(np.dot(masses, np.log(locs)))


def _check_tol(tol: float):
    if not tol > 0.0:
        raise ValueError("tol must be positive")


def expectation(d: Distribution, tol: float = 1e-8) -> float:
    """E[V], or +inf when the upper-tail integral fails to converge."""
    _check_tol(tol)
    if is_purely_atomic(d):
        return _atomic_sums(d)[0]
    return _integrate(d, lambda q: q, tol)[0]


def log_expectation(d: Distribution, tol: float = 1e-8) -> float:
    """E[log V]; -inf when the lower-end integral diverges."""
    _check_tol(tol)
    if is_purely_atomic(d):
        return _atomic_sums(d)[1]
    return _integrate(d, np.log, tol)[0]


def geometric_expectation(d: Distribution, tol: float = 1e-8) -> float:
    """exp(E[log V]); 0 when the log-moment is -inf."""
    le = log_expectation(d, tol)
    return 0.0 if le == -math.inf else math.exp(le)


def mc_log_expectation(d: Distribution, n: int, seed: int) -> tuple[float, float]:
    """Sample mean and standard error of log V over n seeded draws."""
    if n < 1000:
        raise ValueError("n must be >= 1000")
    rng = np.random.default_rng(seed)
    logs = np.log(d.sample(rng, n))
    return float(np.mean(logs)), float(np.std(logs, ddof=1) / math.sqrt(n))


def moments_report(
    d: Distribution, tol: float = 1e-8, n: int = 10**5, seed: int = 0
) -> MomentsReport:
    """All moments plus a Monte Carlo cross-check of the log-moment."""
    _check_tol(tol)
    if is_purely_atomic(d):
        e, le = _atomic_sums(d)
        err_e = err_le = 0.0
    else:
        e, err_e = _integrate(d, lambda q: q, tol)
        le, err_le = _integrate(d, np.log, tol)
    g = 0.0 if le == -math.inf else math.exp(le)
    mc, mc_se = mc_log_expectation(d, n, seed)
    quad_err = max(err_e if math.isfinite(err_e) else 0.0, err_le)
    return MomentsReport(e, le, g, quad_err, mc, mc_se)
