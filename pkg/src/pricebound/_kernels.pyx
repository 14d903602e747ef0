# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: flattened-mixture probability/quantile evaluation
and the principal-branch Lambert W.  Contract and array layout are shared
with the pure-Python fallback in ``_kernels_py``."""

import numpy as np

from libc.math cimport M_E, NAN, erfc, exp, expm1, fabs, log, log1p, pow, sqrt
from libc.stdint cimport int64_t

BACKEND_NAME = "compiled"

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

cdef double INV_SQRT2 = 0.7071067811865476
cdef double INV_E = 0.36787944117144233


cdef inline double _ndtr(double z) noexcept nogil:
    return 0.5 * erfc(-z * INV_SQRT2)


cdef Py_ssize_t _first_geq(const double[::1] a, Py_ssize_t start, Py_ssize_t n,
                           double v) noexcept nogil:
    # first offset in [0, n) with a[start + offset] >= v
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) // 2
        if a[start + mid] >= v:
            hi = mid
        else:
            lo = mid + 1
    return lo


cdef Py_ssize_t _first_gt(const double[::1] a, Py_ssize_t start, Py_ssize_t n,
                          double v) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) // 2
        if a[start + mid] > v:
            hi = mid
        else:
            lo = mid + 1
    return lo


cdef double _leaf_prob(int64_t kind, double a, double b, const double[::1] emp,
                       int64_t es, int64_t el, double v, int mode) noexcept nogil:
    cdef double cdf, sf, z
    cdef Py_ssize_t cnt

    if kind == 0:  # point mass at a
        if mode == 0:
            return 1.0 if v >= a else 0.0
        if mode == 1:
            return 1.0 if v < a else 0.0
        return 1.0 if v <= a else 0.0

    if kind == 1:  # uniform on [a, b]
        cdf = (v - a) / (b - a)
        if cdf < 0.0:
            cdf = 0.0
        elif cdf > 1.0:
            cdf = 1.0
        return cdf if mode == 0 else 1.0 - cdf

    if kind == 2:  # exponential with rate a
        if v <= 0.0:
            return 0.0 if mode == 0 else 1.0
        if mode == 0:
            return -expm1(-a * v)
        return exp(-a * v)

    if kind == 3:  # Pareto, shape a, scale b
        sf = pow(b / v, a) if v > b else 1.0
        return 1.0 - sf if mode == 0 else sf

    if kind == 4:  # lognormal, mu a, sigma b
        if v <= 0.0:
            return 0.0 if mode == 0 else 1.0
        z = (log(v) - a) / b
        return _ndtr(z) if mode == 0 else _ndtr(-z)

    if kind == 5:  # equal revenue, parameter a
        sf = a / v if v > a else 1.0
        return 1.0 - sf if mode == 0 else sf

    # kind == 6: empirical (discrete uniform over sorted emp slice)
    if mode == 2:
        cnt = el - _first_geq(emp, es, el, v)
        return cnt / <double> el
    cnt = _first_gt(emp, es, el, v)
    if mode == 0:
        return cnt / <double> el
    return (el - cnt) / <double> el


cdef double _mix_prob(const int64_t[::1] kind, const double[::1] w,
                      const double[::1] pa, const double[::1] pb,
                      const double[::1] emp, const int64_t[::1] es,
                      const int64_t[::1] el, double v, int mode) noexcept nogil:
    cdef double acc = 0.0
    cdef Py_ssize_t i
    for i in range(kind.shape[0]):
        acc += w[i] * _leaf_prob(kind[i], pa[i], pb[i], emp, es[i], el[i], v, mode)
    return acc


def mixture_prob(kind, w, pa, pb, emp, emp_start, emp_len, v, int mode):
    cdef const int64_t[::1] k = np.ascontiguousarray(kind, dtype=np.int64)
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef const double[::1] av = np.ascontiguousarray(pa, dtype=np.float64)
    cdef const double[::1] bv = np.ascontiguousarray(pb, dtype=np.float64)
    cdef const double[::1] ev = np.ascontiguousarray(emp, dtype=np.float64)
    cdef const int64_t[::1] esv = np.ascontiguousarray(emp_start, dtype=np.int64)
    cdef const int64_t[::1] elv = np.ascontiguousarray(emp_len, dtype=np.int64)
    varr = np.ascontiguousarray(v, dtype=np.float64)
    out = np.empty_like(varr)
    cdef const double[::1] vv = varr.ravel()
    cdef double[::1] ov = out.ravel()
    cdef Py_ssize_t j
    with nogil:
        for j in range(vv.shape[0]):
            ov[j] = _mix_prob(k, wv, av, bv, ev, esv, elv, vv[j], mode)
    return out


def mixture_quantile(kind, w, pa, pb, emp, emp_start, emp_len, u, lo, hi,
                     double tol=1e-12, int max_iter=200):
    cdef const int64_t[::1] k = np.ascontiguousarray(kind, dtype=np.int64)
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef const double[::1] av = np.ascontiguousarray(pa, dtype=np.float64)
    cdef const double[::1] bv = np.ascontiguousarray(pb, dtype=np.float64)
    cdef const double[::1] ev = np.ascontiguousarray(emp, dtype=np.float64)
    cdef const int64_t[::1] esv = np.ascontiguousarray(emp_start, dtype=np.int64)
    cdef const int64_t[::1] elv = np.ascontiguousarray(emp_len, dtype=np.int64)
    cdef const double[::1] uv = np.ascontiguousarray(u, dtype=np.float64)
    cdef const double[::1] lov = np.ascontiguousarray(lo, dtype=np.float64)
    cdef const double[::1] hiv = np.ascontiguousarray(hi, dtype=np.float64)
    out = np.empty(uv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t j
    cdef int it, use_sf, ok
    cdef double uu, q, l, h, m
    with nogil:
        for j in range(uv.shape[0]):
            uu = uv[j]
            q = 1.0 - uu  # exact for uu >= 0.5
            use_sf = uu > 0.5
            l = lov[j]
            h = hiv[j]
            if use_sf:
                ok = _mix_prob(k, wv, av, bv, ev, esv, elv, l, 1) <= q
            else:
                ok = _mix_prob(k, wv, av, bv, ev, esv, elv, l, 0) >= uu
            if ok:
                ov[j] = l
                continue
            it = 0
            while h - l > tol and it < max_iter:
                m = 0.5 * (l + h)
                if m <= l or m >= h:
                    break
                if use_sf:
                    ok = _mix_prob(k, wv, av, bv, ev, esv, elv, m, 1) <= q
                else:
                    ok = _mix_prob(k, wv, av, bv, ev, esv, elv, m, 0) >= uu
                if ok:
                    h = m
                else:
                    l = m
                it += 1
            ov[j] = h
    return out


cdef double _w0(double x, int max_iter) noexcept nogil:
    cdef double p2, p, w, ew, f, fp, wn
    cdef int it
    if x < -INV_E - 1e-15:
        return NAN
    p2 = 2.0 * (M_E * x + 1.0)
    if p2 < 0.0:
        p2 = 0.0
    p = sqrt(p2)
    w = -1.0 + p * (1.0 - p * (1.0 / 3.0 - p * (11.0 / 72.0)))
    if p2 < 1e-6:
        return w
    if -0.25 <= x <= M_E:
        w = log1p(x)
    elif x > M_E:
        w = log(x) - log(log(x))
    for it in range(max_iter):
        ew = exp(w)
        f = w * ew - x
        if fabs(f) <= 1e-13 * max(1.0, fabs(x)):
            break
        fp = ew * (1.0 + w)
        wn = w - f / (fp - f * (2.0 + w) / (2.0 * (1.0 + w)))
        if wn < -1.0 + 1e-4:
            wn = -1.0 + 1e-4
        if wn == w:
            break
        w = wn
    return w


def lambert_w0(x, int max_iter=50):
    xarr = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty_like(xarr)
    cdef const double[::1] xv = xarr.ravel()
    cdef double[::1] ov = out.ravel()
    cdef Py_ssize_t j
    with nogil:
        for j in range(xv.shape[0]):
            ov[j] = _w0(xv[j], max_iter)
    return out
