"""Monte Carlo lab: estimator risk, empirical tails versus bounds, Dirichlet lower bound.

Reproducibility contract: every experiment derives one RNG per trial from
SeedSequence((seed, n, trial)), so results are bit-identical for a fixed seed
regardless of execution order or thread count; aggregation goes through numpy
pairwise summation on preallocated per-trial arrays.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaln

from . import tail_bounds
from .distributions import DiscreteDistribution, expected_missing
from .errors import InvalidInputError, RegimeError
from .estimators import GENERALIZED, GOOD_TURING, PLUGIN, EstimatorKind, choose_float
from .gfunction import GFunction


@dataclass(frozen=True)
class RiskRow:
    n: int
    trials: int
    mse: float
    se: float


@dataclass(frozen=True)
class RiskReport:
    estimator: str
    g_descriptor: str
    dist_descriptor: str
    rows: Tuple[RiskRow, ...]
    slope: float
    intercept: float


@dataclass(frozen=True)
class TailReport:
    n: int
    g_descriptor: str
    dist_descriptor: str
    trials: int
    eps: Tuple[float, ...]
    right_freq: Tuple[float, ...]
    right_se: Tuple[float, ...]
    left_freq: Tuple[float, ...]
    left_se: Tuple[float, ...]
    bounds: Dict[str, Tuple[float, ...]]


def _trial_rng(seed: int, n: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, n, trial))))


def _run_trials(
    trials: int,
    worker: Callable[[int], float],
    threads: Optional[int],
) -> np.ndarray:
    """Per-trial statistics in trial order; threading never changes values."""
    out = np.empty(trials, dtype=float)
    threads = 1 if threads is None else max(1, int(threads))
    if threads == 1:
        for t in range(trials):
            out[t] = worker(t)
        return out

    def run_chunk(bounds_pair):
        lo, hi = bounds_pair
        for t in range(lo, hi):
            out[t] = worker(t)

    step = -(-trials // threads)
    chunks = [(lo, min(lo + step, trials)) for lo in range(0, trials, step)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(run_chunk, chunks))
    return out


def _g_vector(dist: DiscreteDistribution, g: GFunction) -> np.ndarray:
    """g(p_x) aligned with the support; zero-probability letters contribute 0."""
    gv = np.zeros(dist.size, dtype=float)
    mask = dist.probs > 0.0
    gv[mask] = g.eval(dist.probs[mask])
    return gv


def _check_compatible(kind: EstimatorKind, g: GFunction) -> int:
    """Returns the order alpha the estimator targets; 0 for plugin."""
    if kind.variant == PLUGIN:
        return 0
    alpha = 1 if kind.variant == GOOD_TURING else kind.alpha
    if g.kind != "power" or not float(g.alpha).is_integer() or int(g.alpha) != alpha:
        raise InvalidInputError(
            f"estimator {kind.descriptor()} targets g = power:{alpha}; "
            f"got {g.descriptor()}"
        )
    return alpha


def mc_risk(
    dist: DiscreteDistribution,
    kind: EstimatorKind,
    g: GFunction,
    n_list: Sequence[int],
    trials: int,
    seed: int,
    threads: Optional[int] = None,
) -> RiskReport:
    """Mean squared error (estimate - realized missing mass)^2 per n, with a
    log-log rate fit across n."""
    if trials < 100:
        raise InvalidInputError("mc_risk needs trials >= 100")
    alpha = _check_compatible(kind, g)
    gvec = _g_vector(dist, g)
    probs = dist.probs
    rows = []
    for n in n_list:
        n = int(n)
        if alpha > 0 and n < alpha:
            raise RegimeError(f"n = {n} < alpha = {alpha}")
        comb = choose_float(n, alpha) if alpha > 0 else 1.0

        def one_trial(t: int, n=n, comb=comb) -> float:
            rng = _trial_rng(seed, n, t)
            counts = rng.multinomial(n, probs)
            realized = float(gvec[counts == 0].sum())
            if alpha > 0:
                est = int(np.count_nonzero(counts == alpha)) / comb
            else:
                est = 0.0
            diff = est - realized
            return diff * diff

        sq = _run_trials(trials, one_trial, threads)
        mse = float(np.mean(sq))
        se = float(np.std(sq, ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
        rows.append(RiskRow(n=n, trials=trials, mse=mse, se=se))
    if len(rows) >= 3 and all(r.mse > 0.0 for r in rows):
        slope, intercept, _ = rate_fit([(r.n, r.mse) for r in rows])
    else:
        slope, intercept = math.nan, math.nan
    return RiskReport(
        estimator=kind.descriptor(),
        g_descriptor=g.descriptor(),
        dist_descriptor=dist.label,
        rows=tuple(rows),
        slope=slope,
        intercept=intercept,
    )


def mc_bias(
    dist: DiscreteDistribution,
    kind: EstimatorKind,
    g: GFunction,
    n: int,
    trials: int,
    seed: int,
    threads: Optional[int] = None,
) -> Tuple[float, float]:
    """Empirical bias (mean of estimate - realized missing mass) and its
    standard error."""
    if trials < 100:
        raise InvalidInputError("mc_bias needs trials >= 100")
    alpha = _check_compatible(kind, g)
    gvec = _g_vector(dist, g)
    probs = dist.probs
    n = int(n)
    if alpha > 0 and n < alpha:
        raise RegimeError(f"n = {n} < alpha = {alpha}")
    comb = choose_float(n, alpha) if alpha > 0 else 1.0

    def one_trial(t: int) -> float:
        rng = _trial_rng(seed, n, t)
        counts = rng.multinomial(n, probs)
        realized = float(gvec[counts == 0].sum())
        if alpha > 0:
            est = int(np.count_nonzero(counts == alpha)) / comb
        else:
            est = 0.0
        return est - realized

    dev = _run_trials(trials, one_trial, threads)
    mean = float(np.mean(dev))
    se = float(np.std(dev, ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return mean, se


def _bound_columns(
    n: int, g: GFunction, eps: Sequence[float]
) -> Dict[str, Tuple[float, ...]]:
    """Bound values per family for the deviation of the missing mass of g."""
    cols: Dict[str, Tuple[float, ...]] = {}
    cols["right_subgauss_519"] = tuple(
        tail_bounds.theorem2_sub_gaussian_right(n, g, e) for e in eps
    )
    cols["left_subgauss_519"] = cols["right_subgauss_519"]
    cols["left_exact_u2"] = tuple(tail_bounds.left_tail(n, g, e) for e in eps)
    spec_r2 = tail_bounds.build_spec(n, g, 2)
    cols["right_poly_r2"] = tuple(tail_bounds.poly_filtered_tail(spec_r2, e) for e in eps)
    if g.kind == "power":
        a = g.alpha
        cols["left_corollary"] = tuple(
            tail_bounds.corollary_left_tail("m0alpha", n, e, alpha=a) for e in eps
        )
        if a == 1.0:
            cols["right_corollary"] = tuple(
                tail_bounds.corollary_right_tail("m0", n, e) for e in eps
            )
        elif a > 1.0:
            cols["right_corollary"] = tuple(
                tail_bounds.corollary_right_tail("m0alpha", n, e, alpha=a) for e in eps
            )
    elif g.kind == "entropy_log2":
        k = g.k_floor
        cols["left_corollary"] = tuple(
            tail_bounds.corollary_left_tail("entropy", n, e, k=k) for e in eps
        )
        cols["right_corollary"] = tuple(
            tail_bounds.corollary_right_tail("entropy", n, e, k=k) for e in eps
        )
    return cols


def mc_tail(
    dist: DiscreteDistribution,
    g: GFunction,
    n: int,
    trials: int,
    eps_grid: Sequence[float],
    seed: int,
    threads: Optional[int] = None,
) -> TailReport:
    """Empirical Pr(G0 - E[G0] >= eps) and Pr(G0 - E[G0] <= -eps) per eps,
    against the bound families; E[G0] is analytic.

    Binomial standard errors are floored at 1/trials so that dominance checks
    at empirical frequency 0 stay meaningful.
    """
    if trials < 10**3:
        raise InvalidInputError("mc_tail needs trials >= 1000")
    n = int(n)
    eps = tuple(float(e) for e in eps_grid)
    gvec = _g_vector(dist, g)
    probs = dist.probs
    center = expected_missing(dist, n, g)

    def one_trial(t: int) -> float:
        rng = _trial_rng(seed, n, t)
        counts = rng.multinomial(n, probs)
        return float(gvec[counts == 0].sum()) - center

    dev = _run_trials(trials, one_trial, threads)
    floor = 1.0 / trials

    def freq_and_se(mask_counts: np.ndarray) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
        freqs = tuple(float(c) / trials for c in mask_counts)
        ses = tuple(
            max(math.sqrt(f * (1.0 - f) / trials), floor) for f in freqs
        )
        return freqs, ses

    right_counts = [int(np.count_nonzero(dev >= e)) for e in eps]
    left_counts = [int(np.count_nonzero(dev <= -e)) for e in eps]
    right_freq, right_se = freq_and_se(right_counts)
    left_freq, left_se = freq_and_se(left_counts)
    return TailReport(
        n=n,
        g_descriptor=g.descriptor(),
        dist_descriptor=dist.label,
        trials=trials,
        eps=eps,
        right_freq=right_freq,
        right_se=right_se,
        left_freq=left_freq,
        left_se=left_se,
        bounds=_bound_columns(n, g, eps),
    )


def _tau_log(u: float, v: float) -> float:
    """log tau(u, v) = log Gamma(u+v) - log Gamma(u)."""
    return float(gammaln(u + v) - gammaln(u))


def _dirichlet_setup(n: int, c_param: float, alpha: int) -> Tuple[int, float]:
    if int(n) != n or n < 2:
        raise InvalidInputError("need integer n >= 2")
    if not (c_param > 0.0):
        raise InvalidInputError("need c > 0")
    if int(alpha) != alpha or alpha < 1:
        raise InvalidInputError("need integer alpha >= 1")
    k = int(round(c_param * n * n))
    if k < 2:
        raise InvalidInputError(f"k = round(c n^2) = {k} < 2")
    return k, k / n


def dirichlet_prior_variance(n: int, c_param: float, alpha: int) -> float:
    """Average conditional variance of the order-alpha missing mass under a
    symmetric Dirichlet prior with k = c n^2 letters and weights 1/n:

        T = k A1 (A2 - A3) + k(k-1) A4 A5 (A6 - A7).

    A1, A4 (products of n near-unity factors) go through sum-log1p; the
    near-cancelling differences go through exp/expm1.  Falls like n^-(2a-1)
    and lower-bounds the minimax risk of estimating M_[0,alpha].
    """
    k, beta0 = _dirichlet_setup(n, c_param, alpha)
    n = int(n)
    alpha = int(alpha)
    l_n = np.arange(n, dtype=float)
    denom = n * (beta0 + l_n)
    log_a1 = float(np.sum(np.log1p(-1.0 / denom)))
    log_a4 = float(np.sum(np.log1p(-2.0 / denom)))

    l2 = np.arange(2 * alpha, dtype=float)
    l1 = np.arange(alpha, dtype=float)
    log_a2 = float(np.sum(np.log(1.0 / n + l2) - np.log(beta0 + n + l2)))
    log_a3 = 2.0 * float(np.sum(np.log(1.0 / n + l1) - np.log(beta0 + n + l1)))
    log_a5 = 2.0 * float(np.sum(np.log(1.0 / n + l1)))
    log_a6 = -float(np.sum(np.log(beta0 + n + l2)))
    log_a7 = -2.0 * float(np.sum(np.log(beta0 + n + l1)))

    diff_23 = -math.exp(log_a2) * math.expm1(log_a3 - log_a2)
    diff_67 = -math.exp(log_a6) * math.expm1(log_a7 - log_a6)
    return k * math.exp(log_a1) * diff_23 + k * (k - 1.0) * math.exp(log_a4 + log_a5) * diff_67


def dirichlet_mc_variance(
    n: int,
    c_param: float,
    alpha: int,
    trials: int,
    seed: int,
    threads: Optional[int] = None,
) -> Tuple[float, float]:
    """Monte Carlo estimate (mean, se) of E[Var(M_[0,alpha] | X^n)] under the
    same Dirichlet prior, via the posterior tau-ratio closed form.

    Given the sample, the conditional variance depends only on the number m
    of unseen letters: Var = A m(m-1) + B m with A, B from posterior moments
    (unseen letters are exchangeable with weight 1/n each).
    """
    if trials < 100:
        raise InvalidInputError("needs trials >= 100")
    k, beta0 = _dirichlet_setup(n, c_param, alpha)
    n = int(n)
    u, total = 1.0 / n, beta0 + n
    e1_log = _tau_log(u, alpha) - _tau_log(total, alpha)
    e2_log = _tau_log(u, 2 * alpha) - _tau_log(total, 2 * alpha)
    e11_log = 2.0 * _tau_log(u, alpha) - _tau_log(total, 2 * alpha)
    pair_coef = math.exp(e11_log) - math.exp(2.0 * e1_log)
    single_coef = math.exp(e2_log) - math.exp(2.0 * e1_log)
    weights = np.full(k, u)

    def one_trial(t: int) -> float:
        rng = _trial_rng(seed, n, t)
        p = rng.dirichlet(weights)
        counts = rng.multinomial(n, p / p.sum())
        m = k - int(np.count_nonzero(counts))
        return pair_coef * m * (m - 1.0) + single_coef * m

    vals = _run_trials(trials, one_trial, threads)
    mean = float(np.mean(vals))
    se = float(np.std(vals, ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return mean, se


def rate_fit(pairs) -> Tuple[float, float, float]:
    """OLS fit of log(value) on log(n); returns (slope, intercept, rms residual)."""
    if isinstance(pairs, RiskReport):
        pairs = [(row.n, row.mse) for row in pairs.rows]
    pts = [(float(n), float(v)) for n, v in pairs]
    if len(pts) < 3:
        raise InvalidInputError("rate fit needs at least 3 points")
    if any(v <= 0.0 for _, v in pts):
        raise InvalidInputError("rate fit needs positive values")
    x = np.log([n for n, _ in pts])
    y = np.log([v for _, v in pts])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return float(slope), float(intercept), float(np.sqrt(np.mean(resid**2)))
