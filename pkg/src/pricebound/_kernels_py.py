"""Pure-NumPy fallback for the hot kernels.

Same contract as the compiled ``_kernels`` extension: probability
evaluation and quantile bisection for flattened mixtures, plus the
principal-branch Lambert W.  Mixtures are described positionally by
parallel arrays (one entry per component):

    kind      int64 family code (see FAM_* below)
    w         float64 mixture weight
    pa, pb    float64 family parameters (meaning depends on the family)
    emp       float64 concatenated sorted sample values (empirical only)
    emp_start, emp_len   int64 slice of ``emp`` for each component

Probability modes: 0 -> P(V <= v), 1 -> P(V > v), 2 -> P(V >= v).
"""

import numpy as np
from scipy.special import ndtr

BACKEND_NAME = "python"

FAM_POINTMASS = 0
FAM_UNIFORM = 1
FAM_EXPONENTIAL = 2
FAM_PARETO = 3
FAM_LOGNORMAL = 4
FAM_EQUALREV = 5
FAM_EMPIRICAL = 6

MODE_CDF = 0
MODE_SF = 1
MODE_SF_WEAK = 2


def _leaf_prob(kind, a, b, emp, v, mode):
    if kind == FAM_POINTMASS:
        if mode == MODE_CDF:
            return (v >= a).astype(float)
        if mode == MODE_SF:
            return (v < a).astype(float)
        return (v <= a).astype(float)

    if kind == FAM_UNIFORM:
        cdf = np.clip((v - a) / (b - a), 0.0, 1.0)
        return cdf if mode == MODE_CDF else 1.0 - cdf

    if kind == FAM_EXPONENTIAL:
        t = np.maximum(v, 0.0)
        if mode == MODE_CDF:
            return -np.expm1(-a * t)
        return np.exp(-a * t)

    if kind == FAM_PARETO:
        sf = np.ones_like(v)
        m = v > b
        sf[m] = (b / v[m]) ** a
        return 1.0 - sf if mode == MODE_CDF else sf

    if kind == FAM_LOGNORMAL:
        z = np.full_like(v, -np.inf)
        m = v > 0.0
        z[m] = (np.log(v[m]) - a) / b
        return ndtr(z) if mode == MODE_CDF else ndtr(-z)

    if kind == FAM_EQUALREV:
        sf = np.ones_like(v)
        m = v > a
        sf[m] = a / v[m]
        return 1.0 - sf if mode == MODE_CDF else sf

    if kind == FAM_EMPIRICAL:
        n = emp.shape[0]
        if mode == MODE_SF_WEAK:
            return (n - np.searchsorted(emp, v, side="left")) / n
        cnt = np.searchsorted(emp, v, side="right")
        return cnt / n if mode == MODE_CDF else (n - cnt) / n

    raise ValueError(f"unknown family code {kind}")


def mixture_prob(kind, w, pa, pb, emp, emp_start, emp_len, v, mode):
    v = np.asarray(v, dtype=np.float64)
    acc = np.zeros_like(v)
    for i in range(kind.shape[0]):
        sl = emp[emp_start[i] : emp_start[i] + emp_len[i]]
        acc += w[i] * _leaf_prob(int(kind[i]), pa[i], pb[i], sl, v, mode)
    return acc


def mixture_quantile(kind, w, pa, pb, emp, emp_start, emp_len, u, lo, hi,
                     tol=1e-12, max_iter=200):
    """Generalized inverse inf{v : F(v) >= u} by bisection on [lo, hi].

    Requires F(hi) >= u.  For u > 1/2 the acceptance predicate is evaluated
    in survival form against q = 1 - u (exact by Sterbenz subtraction), so
    deep-tail targets stay well conditioned.
    """
    u = np.asarray(u, dtype=np.float64)
    lo = np.array(lo, dtype=np.float64, copy=True)
    hi = np.array(hi, dtype=np.float64, copy=True)
    q = 1.0 - u
    upper = u > 0.5

    def accepted(v):
        cdf = mixture_prob(kind, w, pa, pb, emp, emp_start, emp_len, v, MODE_CDF)
        sf = mixture_prob(kind, w, pa, pb, emp, emp_start, emp_len, v, MODE_SF)
        return np.where(upper, sf <= q, cdf >= u)

    hi = np.where(accepted(lo), lo, hi)
    for _ in range(max_iter):
        active = (hi - lo) > tol
        if not active.any():
            break
        mid = 0.5 * (lo + hi)
        stuck = (mid <= lo) | (mid >= hi)
        ok = accepted(mid)
        hi = np.where(active & ~stuck & ok, mid, hi)
        lo = np.where(active & ~stuck & ~ok, mid, lo)
        if (stuck | ~active).all():
            break
    return hi


_INV_E = 0.36787944117144233  # 1/e


def lambert_w0(x, max_iter=50):
    """Principal branch W0 via Halley iteration; NaN below -1/e."""
    x = np.asarray(x, dtype=np.float64)
    w = np.empty_like(x)

    bad = x < -_INV_E - 1e-15
    p2 = np.maximum(2.0 * (np.e * x + 1.0), 0.0)
    p = np.sqrt(p2)
    series = -1.0 + p * (1.0 - p * (1.0 / 3.0 - p * (11.0 / 72.0)))

    near_branch = p2 < 1e-6
    w[:] = series
    mid = (x >= -0.25) & (x <= np.e)
    w[mid] = np.log1p(x[mid])
    top = x > np.e
    w[top] = np.log(x[top]) - np.log(np.log(x[top]))

    todo = ~(bad | near_branch)
    for _ in range(max_iter):
        if not todo.any():
            break
        wt = w[todo]
        e_w = np.exp(wt)
        f = wt * e_w - x[todo]
        fp = e_w * (1.0 + wt)
        step = f / (fp - f * (2.0 + wt) / (2.0 * (1.0 + wt)))
        # W0 >= -1 everywhere; the floor keeps iterates off the f' = 0 line
        # (it can only bind for x < 0, where the series guess starts us close)
        wn = np.maximum(wt - step, -1.0 + 1e-4)
        w[todo] = wn
        conv = np.abs(wn * np.exp(wn) - x[todo]) <= 1e-13 * np.maximum(1.0, np.abs(x[todo]))
        idx = np.flatnonzero(todo)
        todo[idx[conv]] = False

    w[bad] = np.nan
    return w
