"""Verification of the two revenue lower bounds and their proof steps.

Bound 1: optimal revenue is at least the geometric expectation over e,
with equality exactly for the equal revenue family.  Bound 2: writing
delta = 1 - G/E for finite E, revenue is at least (1 - 2^(4/3) delta^(1/3)) E.

Beyond the two headline inequalities this module checks the intermediate
steps the derivation rests on: a pointwise revenue envelope, Markov
concentration of V e^(1-V) for normalized V, the Lambert W solution of
the threshold equation, and the chain of algebraic relaxations that turns
the W-based price into the closed-form constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import _backend
from .distributions import Distribution
from .dsl import DistributionSpec, FamilyNode, MixNode
from .errors import BoundViolationError, InfiniteExpectationError, InternalConsistencyError
from .moments import expectation as _expectation
from .moments import log_expectation as _log_expectation
from .revenue import OptimalRevenue, optimal_revenue

__all__ = [
    "BoundReport",
    "ConcentrationResult",
    "ProofTrace",
    "DistributionCheck",
    "VerifyResult",
    "lambert_w",
    "lambert_w_upper_check",
    "theorem1_report",
    "theorem2_report",
    "concentration_check",
    "theorem2_proof_trace",
    "verify_suite",
]

_INV_E = math.exp(-1.0)
_EQUALITY_TOL = 1e-6
_CHECK_GRID = 1024


def _delta_of(g: float, e: float) -> float:
    # exp(log(x)) rounds by an ulp, so a point mass can show delta ~ 2e-16;
    # anything below the floor is indistinguishable from zero dispersion
    delta = 1.0 - g / e
    return 0.0 if delta < 1e-14 else delta


# ---------------------------------------------------------------------------
# Lambert W


def lambert_w(x):
    """Principal-branch W: the solution w of w * e^w = x, for x >= -1/e.

    Scalar in, scalar out; arrays are mapped elementwise.  The residual
    |w e^w - x| stays within 1e-12 * max(1, |x|).
    """
    arr = np.asarray(x, dtype=np.float64)
    scalar = arr.ndim == 0
    flat = np.atleast_1d(arr).astype(np.float64).ravel()
    if np.any(flat < -_INV_E - 1e-15) or np.any(np.isnan(flat)):
        raise ValueError("lambert_w is defined on [-1/e, inf)")
    w = _backend.impl.lambert_w0(flat)
    if scalar:
        return float(w[0])
    return w.reshape(arr.shape)


def lambert_w_upper_check(x) -> bool:
    """True when W(x) <= -1 + sqrt(2(ex+1)) + 1e-12 holds on [-1/e, 0]."""
    arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if np.any(arr < -_INV_E - 1e-15) or np.any(arr > 1e-15):
        raise ValueError("upper bound check applies on [-1/e, 0]")
    w = lambert_w(arr)
    rhs = -1.0 + np.sqrt(np.maximum(2.0 * (math.e * arr + 1.0), 0.0))
    return bool(np.all(w <= rhs + 1e-12))


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class BoundReport:
    u: float  # optimal revenue (certified lower bound estimate)
    argmax_price: float
    G: float  # geometric expectation
    thm1_lower: float  # G / e
    thm1_slack: float  # u - G/e, must be >= -tolerance
    equality_flag: bool
    expectation: float | None = None
    delta: float | None = None  # 1 - G/E, only for finite E
    thm2_lower: float | None = None  # (1 - 2^(4/3) delta^(1/3)) E
    thm2_slack: float | None = None


@dataclass(frozen=True)
class ConcentrationResult:
    empirical_probability: float
    markov_bound: float  # 1/k
    standard_error: float
    delta: float
    threshold: float  # (1 - delta)^k
    k: float
    n: int
    vacuous: bool  # delta == 0: threshold is 1 and the bound says nothing


@dataclass(frozen=True)
class ProofTrace:
    expectation: float
    u: float
    u_normalized: float  # u / E
    delta: float
    k: float
    k_is_default: bool  # k = (2 delta)^(-1/3) when not supplied
    threshold: float  # (1 - delta)^k
    pstar: float  # -W(-threshold / e), the traced posted price
    sell_prob_lower: float  # 1 - 1/k
    sell_prob_empirical: float
    sell_prob_se: float
    bound_revenue: float  # pstar * (1 - 1/k)
    bound_after_w: float  # (1 - sqrt(2(1-threshold))) * (1 - 1/k)
    bound_after_linear: float  # (1 - sqrt(2 k delta)) * (1 - 1/k)
    bound_final: float  # 1 - 1/k - sqrt(2 k delta)
    statement_bound: float  # 1 - 2^(4/3) delta^(1/3)


def _equality_case(d: Distribution, u: float, slack: float, g: float) -> bool:
    # two-stage test: near-zero slack alone can be spoofed by mixtures,
    # so additionally require the CDF to match the equal revenue law c = u
    if abs(slack) > _EQUALITY_TOL * max(1.0, g) or not (u > 0.0 and math.isfinite(u)):
        return False
    uu = np.arange(1, _CHECK_GRID + 1) / (_CHECK_GRID + 1.0)
    v = u / (1.0 - uu)
    return bool(np.max(np.abs(d.cdf(v) - uu)) <= 1e-6)


def _pointwise_envelope_check(d: Distribution, opt: OptimalRevenue):
    # the sup definition forces p * P(V >= p) <= value + tolerance everywhere;
    # a violation can only come from a revenue-search bug
    uu = np.arange(1, _CHECK_GRID + 1) / (_CHECK_GRID + 1.0)
    p = d._quantile(uu)
    if d.atoms():
        p = np.concatenate([p, np.array([a for a, _ in d.atoms()])])
    p = p[np.isfinite(p) & (p > 0.0)]
    rev = p * d._sf_weak(p)
    allowed = opt.value + opt.tolerance + 1e-9 * max(1.0, opt.value)
    worst = float(np.max(rev - allowed))
    if worst > 0.0:
        i = int(np.argmax(rev))
        raise InternalConsistencyError(
            f"revenue envelope violated: price {p[i]!r} earns {rev[i]!r} "
            f"but the search reported value {opt.value!r} + tolerance {opt.tolerance!r}"
        )


def theorem1_report(
    d: Distribution,
    opt: OptimalRevenue | None = None,
    g: float | None = None,
) -> BoundReport:
    """Optimal revenue versus geometric expectation over e.

    Also validates the pointwise revenue envelope on a quantile grid and
    raises :class:`InternalConsistencyError` if the search result fails it.
    """
    if opt is None:
        opt = optimal_revenue(d)
    if g is None:
        g = math.exp(_log_expectation(d))
    _pointwise_envelope_check(d, opt)
    lower = g * _INV_E
    slack = opt.value - lower
    flag = _equality_case(d, opt.value, slack, g)
    return BoundReport(opt.value, opt.argmax_price, g, lower, slack, flag)


def theorem2_report(
    d: Distribution,
    opt: OptimalRevenue | None = None,
    g: float | None = None,
    e: float | None = None,
) -> BoundReport:
    """Low-dispersion bound: u >= (1 - 2^(4/3) delta^(1/3)) E, delta = 1 - G/E.

    Requires a finite expectation; raises
    :class:`InfiniteExpectationError` otherwise.  A negative lower bound
    is reported as-is (the inequality holds vacuously).
    """
    if e is None:
        e = _expectation(d)
    if not math.isfinite(e):
        raise InfiniteExpectationError(
            "the dispersion bound needs E[V] finite, but the expectation diverges"
        )
    base = theorem1_report(d, opt=opt, g=g)
    delta = _delta_of(base.G, e)
    lower = (1.0 - 2.0 ** (4.0 / 3.0) * delta ** (1.0 / 3.0)) * e
    return replace(
        base, expectation=e, delta=delta, thm2_lower=lower, thm2_slack=base.u - lower
    )


def concentration_check(
    d: Distribution, k: float, n: int = 10**6, seed: int = 0
) -> ConcentrationResult:
    """Markov step: P(V e^(1-V) <= (1-delta)^k) <= 1/k for normalized V.

    V is rescaled internally to unit mean.  Raises
    :class:`BoundViolationError` when the empirical frequency exceeds
    1/k plus three binomial standard errors; the delta = 0 case is
    returned as vacuous and not asserted (the threshold degenerates to 1).
    """
    if not k > 1.0:
        raise ValueError("k must exceed 1")
    if n < 1000:
        raise ValueError("n must be >= 1000")
    e = _expectation(d)
    if not math.isfinite(e):
        raise InfiniteExpectationError("concentration check needs E[V] finite")
    g = math.exp(_log_expectation(d))
    delta = _delta_of(g, e)
    threshold = (1.0 - delta) ** k
    rng = np.random.default_rng(seed)
    w = d.sample(rng, n) / e
    hits = w * np.exp(1.0 - w) <= threshold
    phat = float(np.mean(hits))
    se = math.sqrt(max(phat * (1.0 - phat), 1.0 / n) / n)
    bound = 1.0 / k
    if delta == 0.0:
        return ConcentrationResult(phat, bound, se, delta, threshold, k, n, True)
    if phat > bound + 3.0 * se:
        raise BoundViolationError(
            f"concentration failed: empirical {phat!r} > 1/k = {bound!r} + 3se ({se!r})"
        )
    return ConcentrationResult(phat, bound, se, delta, threshold, k, n, False)


def theorem2_proof_trace(
    d: Distribution, k: float | None = None, n: int = 10**6, seed: int = 0
) -> ProofTrace:
    """Trace every intermediate of the dispersion bound derivation.

    Works with V normalized to unit mean.  The posted price is
    p* = -W(-(1-delta)^k / e); concentration guarantees a sale with
    probability at least 1 - 1/k, and the algebraic chain relaxes
    p* (1 - 1/k) down to the closed form 1 - 1/k - sqrt(2 k delta).
    Each link is asserted (with Monte Carlo slack where sampling is
    involved); the default k = (2 delta)^(-1/3) makes the final link
    equal the headline constant 1 - 2^(4/3) delta^(1/3).
    """
    if n < 1000:
        raise ValueError("n must be >= 1000")
    e = _expectation(d)
    if not math.isfinite(e):
        raise InfiniteExpectationError("the proof trace needs E[V] finite")
    g = math.exp(_log_expectation(d))
    delta = _delta_of(g, e)
    if delta == 0.0:
        raise ValueError("delta is 0 (point mass); the traced derivation needs delta > 0")
    k_is_default = k is None
    if k_is_default:
        k = (2.0 * delta) ** (-1.0 / 3.0)
    k = float(k)
    if not k > 1.0:
        raise ValueError("k must exceed 1")

    threshold = (1.0 - delta) ** k
    pstar = -lambert_w(-threshold * _INV_E)
    sell_lower = 1.0 - 1.0 / k
    b1 = pstar * sell_lower
    b2 = (1.0 - math.sqrt(max(2.0 * (1.0 - threshold), 0.0))) * sell_lower
    b3 = (1.0 - math.sqrt(2.0 * k * delta)) * sell_lower
    b4 = 1.0 - 1.0 / k - math.sqrt(2.0 * k * delta)
    statement = 1.0 - 2.0 ** (4.0 / 3.0) * delta ** (1.0 / 3.0)

    rng = np.random.default_rng(seed)
    w = d.sample(rng, n) / e
    sold = w > pstar
    phat = float(np.mean(sold))
    se = math.sqrt(max(phat * (1.0 - phat), 1.0 / n) / n)
    if phat < sell_lower - 3.0 * se:
        raise BoundViolationError(
            f"sale probability {phat!r} fell below 1 - 1/k = {sell_lower!r} - 3se"
        )

    opt = optimal_revenue(d)
    u_norm = opt.value / e
    slack = 3.0 * se * pstar + 1e-9 * max(1.0, u_norm)
    if u_norm < b1 - slack:
        raise BoundViolationError(
            f"normalized revenue {u_norm!r} fell below the traced bound {b1!r}"
        )
    chain = (b1, b2, b3, b4)
    for hi, lo in zip(chain, chain[1:]):
        if lo > hi + 1e-12:
            raise BoundViolationError(f"relaxation chain not monotone: {chain!r}")
    if k_is_default and abs(b4 - statement) > 1e-12 * max(1.0, abs(statement)):
        raise InternalConsistencyError(
            f"with the default k the final link {b4!r} must equal the "
            f"statement constant {statement!r}"
        )
    return ProofTrace(
        e, opt.value, u_norm, delta, k, k_is_default, threshold, pstar,
        sell_lower, phat, se, b1, b2, b3, b4, statement,
    )


# ---------------------------------------------------------------------------
# randomized verification suite


@dataclass(frozen=True)
class DistributionCheck:
    spec_text: str
    u: float
    G: float
    expectation: float  # +inf allowed
    thm1_slack: float
    thm2_slack: float | None  # None when the expectation diverges
    equality_flag: bool
    thm1_ok: bool
    thm2_ok: bool  # True (vacuous) when the expectation diverges


@dataclass(frozen=True)
class VerifyResult:
    checks: list
    n_pass: int
    n_total: int
    worst_thm1_slack: float
    worst_thm2_slack: float | None
    seed: int
    passed: bool


def _random_leaf(rng: np.random.Generator, families) -> FamilyNode:
    name = families[int(rng.integers(len(families)))]
    if name == "pointmass":
        v = math.exp(rng.uniform(math.log(0.1), math.log(10.0)))
        return FamilyNode("pointmass", (("v", v),))
    if name == "uniform":
        a = rng.uniform(0.0, 5.0)
        b = a + rng.uniform(0.1, 5.0)
        return FamilyNode("uniform", (("a", a), ("b", b)))
    if name == "pareto":
        alpha = rng.uniform(0.3, 3.5)
        scale = math.exp(rng.uniform(math.log(0.1), math.log(10.0)))
        return FamilyNode("pareto", (("alpha", alpha), ("scale", scale)))
    if name == "lognormal":
        return FamilyNode(
            "lognormal", (("mu", rng.uniform(-1.0, 1.0)), ("sigma", rng.uniform(0.1, 1.5)))
        )
    if name == "equalrev":
        c = math.exp(rng.uniform(math.log(0.1), math.log(10.0)))
        return FamilyNode("equalrev", (("c", c),))
    if name == "exponential":
        return FamilyNode("exponential", (("rate", math.exp(rng.uniform(-1.5, 1.5))),))
    raise ValueError(f"unknown family for the random suite: {name!r}")


_DEFAULT_SUITE_FAMILIES = ("pointmass", "uniform", "pareto", "lognormal")
_SINGLETON_FAMILIES = frozenset(["equalrev"])  # mixing would break equality


def random_spec(rng: np.random.Generator, families=None) -> DistributionSpec:
    """One random mixture spec (1 to 4 components) for the suite."""
    families = tuple(families) if families else _DEFAULT_SUITE_FAMILIES
    if set(families) & _SINGLETON_FAMILIES:
        return DistributionSpec(_random_leaf(rng, families))
    n_comp = int(rng.integers(1, 5))
    if n_comp == 1:
        return DistributionSpec(_random_leaf(rng, families))
    weights = rng.dirichlet(np.ones(n_comp))
    weights = np.maximum(weights, 1e-6)
    terms = tuple(
        (float(wt), _random_leaf(rng, families)) for wt in weights / weights.sum()
    )
    return DistributionSpec(MixNode(terms))


def verify_suite(n: int = 200, seed: int = 0, families=None) -> VerifyResult:
    """Check both bounds on n randomized seeded mixture distributions.

    The slack floor is -1e-6 * max(1, G) for the first bound and
    -1e-6 * max(1, E) for the second (finite-mean cases only).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    streams = np.random.SeedSequence(seed).spawn(n)
    checks = []
    worst1 = math.inf
    worst2 = math.inf
    seen_finite = False
    for ss in streams:
        rng = np.random.default_rng(ss)
        spec = random_spec(rng, families)
        d = spec.build()
        opt = optimal_revenue(d)
        g = math.exp(_log_expectation(d))
        e = _expectation(d)
        rep = theorem1_report(d, opt=opt, g=g)
        thm1_ok = rep.thm1_slack >= -1e-6 * max(1.0, g)
        if math.isfinite(e):
            rep2 = theorem2_report(d, opt=opt, g=g, e=e)
            thm2_slack = rep2.thm2_slack
            thm2_ok = thm2_slack >= -1e-6 * max(1.0, e)
            worst2 = min(worst2, thm2_slack)
            seen_finite = True
        else:
            thm2_slack, thm2_ok = None, True
        worst1 = min(worst1, rep.thm1_slack)
        checks.append(
            DistributionCheck(
                spec.pretty(), opt.value, g, e, rep.thm1_slack, thm2_slack,
                rep.equality_flag, thm1_ok, thm2_ok,
            )
        )
    n_pass = sum(1 for c in checks if c.thm1_ok and c.thm2_ok)
    return VerifyResult(
        checks, n_pass, n, worst1, worst2 if seen_finite else None, seed, n_pass == n
    )
