"""Expected revenue at a posted price and the optimal revenue search.

The buyer accepts a price ``p`` only when ``p < V``, so the expected
revenue is ``p * P(V > p)``; at an atom the supremum is approached from
the left, which earns ``p * P(V >= p)``.  Both conventions are reported
(``revenue_right`` / ``revenue_left``) and the left one is what the
optimum search scores.

``optimal_revenue`` reports a certified lower bound: the value is the
revenue actually achieved at ``argmax_price`` (left convention), and
``tolerance`` bounds the remaining gap to the true supremum, derived
from adjacent-candidate envelopes in quantile space.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .distributions import Distribution, EqualRevenue, is_purely_atomic

__all__ = [
    "PriceQuote",
    "Method",
    "OptimalRevenue",
    "RandomPriceEstimate",
    "revenue_at",
    "revenue_curve",
    "optimal_revenue",
    "random_price_revenue",
]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_DEEP_K = 48  # deepest dyadic tail level: u = 1 - 2^-48


@dataclass(frozen=True)
class PriceQuote:
    """Revenue under both tie-break conventions at one price."""

    price: float
    revenue_right: float  # p * P(V > p), strict acceptance
    revenue_left: float  # p * P(V >= p), left limit at atoms


class Method(enum.Enum):
    ANALYTIC = "analytic"
    ATOM_ENUMERATION = "atom_enumeration"
    QUANTILE_GRID_REFINED = "quantile_grid_refined"


@dataclass(frozen=True)
class OptimalRevenue:
    value: float  # achieved revenue_left at argmax_price
    argmax_price: float
    method: Method
    tolerance: float  # claimed gap to the true supremum; inf when divergent


@dataclass(frozen=True)
class RandomPriceEstimate:
    estimate: float
    standard_error: float
    n: int


def revenue_at(d: Distribution, p: float) -> PriceQuote:
    """Expected revenue of posting price ``p``, both conventions."""
    p = float(p)
    if not (math.isfinite(p) and p > 0.0):
        raise ValueError(f"price must be positive and finite, got {p!r}")
    return PriceQuote(p, p * d.survival(p), p * d.left_survival(p))


def revenue_curve(d: Distribution, pmin: float, pmax: float, points: int, log: bool = False):
    """Price grid plus both revenue columns, for plotting and the CLI."""
    if not (0.0 < pmin < pmax):
        raise ValueError("need 0 < pmin < pmax")
    if points < 2:
        raise ValueError("need at least 2 points")
    if log:
        prices = np.geomspace(pmin, pmax, points)
    else:
        prices = np.linspace(pmin, pmax, points)
    return prices, prices * d.survival(prices), prices * d.left_survival(prices)


def _enumerate_atoms(d: Distribution) -> OptimalRevenue:
    # atoms() is ascending; P(V >= a_i) is the suffix sum of the masses
    atoms = d.atoms()
    locs = np.array([a for a, _ in atoms])
    masses = np.array([m for _, m in atoms])
    suffix = np.cumsum(masses[::-1])[::-1]
    scores = locs * suffix
    i = int(np.argmax(scores))  # first index on ties: lowest such price
    return OptimalRevenue(float(scores[i]), float(locs[i]), Method.ATOM_ENUMERATION, 0.0)


def _golden_max(g, lo: float, hi: float, tol: float, max_iter: int = 200):
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    e = a + _INVPHI * (b - a)
    gc, ge = g(c), g(e)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if gc >= ge:
            b, e, ge = e, c, gc
            c = b - _INVPHI * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, e, ge
            e = a + _INVPHI * (b - a)
            ge = g(e)
    return (c, gc) if gc >= ge else (e, ge)


def optimal_revenue(
    d: Distribution, grid_size: int = 4096, refine_tol: float = 1e-9
) -> OptimalRevenue:
    """Search for sup_p p*(1-F(p)) over a quantile-space candidate grid.

    Candidates sit at quantiles of a uniform grid in (0,1), a dyadic
    ladder pushed into the upper tail, every atom location, and the lower
    end of the support.  The best bracket is refined by golden section on
    the strict-acceptance revenue.  Purely atomic laws are enumerated
    exactly instead; a top-level equal revenue law is answered in closed
    form.
    """
    if grid_size < 64:
        raise ValueError("grid_size must be >= 64")
    if not refine_tol > 0.0:
        raise ValueError("refine_tol must be positive")

    if isinstance(d, EqualRevenue):
        # every p >= c earns exactly c under the left convention
        return OptimalRevenue(d.c, d.c, Method.ANALYTIC, 0.0)
    if is_purely_atomic(d):
        return _enumerate_atoms(d)

    u = np.arange(1, grid_size + 1) / (grid_size + 1.0)
    k0 = int(math.ceil(math.log2(grid_size + 1.0)))
    ks = np.arange(k0, _DEEP_K + 1)
    u_tail = 1.0 - 0.5**ks
    cands = [d._quantile(u), d._quantile(u_tail)]
    if d.atoms():
        cands.append(np.array([a for a, _ in d.atoms()]))
    lo_support, _ = d.support()
    if lo_support > 0.0:
        cands.append(np.array([lo_support]))
    prices = np.unique(np.concatenate(cands))
    prices = prices[np.isfinite(prices) & (prices > 0.0)]

    scores = prices * d._sf_weak(prices)
    i = int(np.argmax(scores))
    p_best, s_best = float(prices[i]), float(scores[i])

    # golden-section refinement of the winning bracket on p * P(V > p)
    b_lo = float(prices[i - 1]) if i > 0 else max(lo_support, p_best / 2.0)
    b_hi = float(prices[i + 1]) if i + 1 < prices.size else p_best * 2.0
    tol_abs = refine_tol * max(p_best, 1e-12)

    def g(p):
        return p * float(d.survival(p))

    p_ref, _ = _golden_max(g, b_lo, b_hi, tol_abs)
    for cand in (p_ref, p_best):
        s = cand * float(d.left_survival(cand))
        if s > s_best:
            p_best, s_best = cand, s

    # gap control: on (p_j, p_{j+1}) revenue_left(p) <= p_{j+1} * P(V > p_j)
    sf = d._sf(prices)
    pair_ub = float(np.max(prices[1:] * sf[:-1])) if prices.size > 1 else s_best
    # beyond the deepest candidate, bound p * sf(p) on dyadic intervals by
    # 2 * Q(1 - 2^-k) * 2^-k and flag a growing tail as divergent
    q_deep = d._quantile(1.0 - 0.5 ** np.arange(40, _DEEP_K + 1))
    env = q_deep * 0.5 ** np.arange(40, _DEEP_K + 1)
    if not np.all(np.isfinite(env)) or float(env[-1]) > float(np.min(env)) * (1.0 + 1e-9):
        tolerance = math.inf  # revenue keeps growing along the tail
    else:
        tail_ub = 2.0 * float(np.max(env[-2:]))
        tolerance = max(0.0, max(pair_ub, tail_ub) - s_best) + tol_abs
    return OptimalRevenue(s_best, p_best, Method.QUANTILE_GRID_REFINED, tolerance)


def random_price_revenue(d: Distribution, n: int = 10**6, seed: int = 0) -> RandomPriceEstimate:
    """Expected revenue of posting a price drawn from the law of V itself.

    Monte Carlo over n price draws with strict acceptance; deterministic
    for a fixed seed.
    """
    if n < 1000:
        raise ValueError("n must be >= 1000")
    rng = np.random.default_rng(seed)
    prices = d.sample(rng, n)
    rev = prices * d._sf(prices)
    est = float(np.mean(rev))
    se = float(np.std(rev, ddof=1) / math.sqrt(n))
    return RandomPriceEstimate(est, se, n)
