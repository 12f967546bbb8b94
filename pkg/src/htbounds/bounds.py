"""Finite-sample bounds on the Type II error of a binary hypothesis test.

Setting: n i.i.d. observations, a test accepts H1 when it should accept
H0 with probability alpha_n (Type I) and conversely with probability
beta_n (Type II); beta_n(eps) is the smallest Type II error achievable
subject to alpha_n <= eps.  Throughout, eps enters as log_eps so the
exponentially small regimes keep full precision.

Converse (lower) bounds on beta_n(eps):

* ``renyi_converse``: the two-branch Renyi bound

      beta_n(eps) >= max{ 1 - inf_{l>1} (eps e^{n D_l(P1||P0)})^{(l-1)/l},
                          sup_{l>1} (1-eps)^{l/(l-1)} e^{-n D_l(P0||P1)} }

* ``phase_transition_converse``: branch one at eps = e^{-nc} for a rate
  c > D(P1||P0), where the bound tends to 1.
* ``fano_bound``, ``hellinger_bound``, ``berry_esseen_bound``,
  ``smoothing_out_bound``: the classical baselines it is compared with.

Achievability (upper) bounds:

* ``renyi_achievability_at_threshold``: for the likelihood-ratio test
  with log-LR threshold tau and Type I error alpha,

      beta < inf_{l in (0,1)}
             (e^{(l-1) n D_l(P1||P0)} - alpha e^{l tau}) / e^{(l-1) tau}

* ``phase_transition_achievability``: the rate form at c < D(P1||P0),
  beta_n(e^{-nc}) < inf_{l} e^{-n ((1-l)/l)(D_l(P1||P0) - c)} over the
  l in (0,1) with D_l > c, obtained from the threshold construction of
  ``threshold_for_rate`` with the Markov bound on alpha.

Sample-size bounds: ``sample_complexity_renyi`` (valid for every l > 1,
optimized over l when none is given) and ``sample_complexity_pensia``
(the comparison bound at its closed-form l*).

Every bound returns a :class:`BoundResult`.  Lower bounds on beta that
come out non-positive are clamped to 0 and flagged valid=False; ones
that come out above 1 (possible for the literal Fano display at small n
and large eps) are clamped to 1 and likewise flagged, since a Type II
probability bound outside [0, 1] carries no information.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from .distributions import (
    Direction,
    DistributionPair,
    GaussianPair,
    UnsupportedFamilyError,
    hellinger_squared,
    kl_divergence,
    llr_moments,
    renyi_divergence,
)
from .numerics import (
    Bracket,
    DomainError,
    OptimizationError,
    log_diff_exp,
    maximize_scalar,
    q_inverse,
)

__all__ = [
    "BoundKind",
    "BoundResult",
    "Constant",
    "ErrorRegime",
    "Exponential",
    "Linear",
    "berry_esseen_bound",
    "eps_at",
    "fano_bound",
    "hellinger_bound",
    "phase_transition_achievability",
    "phase_transition_converse",
    "renyi_achievability_at_threshold",
    "renyi_converse",
    "sample_complexity_pensia",
    "sample_complexity_renyi",
    "smoothing_out_bound",
    "threshold_for_rate",
]

_LOG2 = math.log(2.0)


class BoundKind(Enum):
    LOWER_BETA = "lower_bound_on_beta"
    UPPER_BETA = "upper_bound_on_beta"
    LOWER_N = "lower_bound_on_n"


@dataclass(frozen=True)
class BoundResult:
    """A bound value with its log, the optimizing free parameter, and kind.

    ``value == exp(log_value)`` up to 1e-12 whenever both are
    representable.  ``valid`` is False when the bound degenerated (a beta
    lower bound clamped to 0 or 1, a sample-size bound clamped to 1, or
    an upper bound whose premises admitted no positive value).
    """

    value: float
    log_value: float
    optimizer: float | None
    kind: BoundKind
    valid: bool


@dataclass(frozen=True)
class Constant:
    """Fixed Type I budget eps_n = eps."""

    eps: float

    def __post_init__(self) -> None:
        if not (isinstance(self.eps, (int, float)) and 0.0 < self.eps < 1.0):
            raise DomainError(f"Constant regime requires 0 < eps < 1, got {self.eps!r}")


@dataclass(frozen=True)
class Linear:
    """Vanishing budget eps_n = 1/n (defined for n >= 2)."""


@dataclass(frozen=True)
class Exponential:
    """Exponentially vanishing budget eps_n = e^{-cn} at rate c > 0."""

    c: float

    def __post_init__(self) -> None:
        if not (isinstance(self.c, (int, float)) and math.isfinite(self.c) and self.c > 0.0):
            raise DomainError(f"Exponential regime requires finite c > 0, got {self.c!r}")


ErrorRegime = Union[Constant, Linear, Exponential]


def _check_n(n, minimum: int = 1) -> None:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < minimum:
        raise DomainError(f"n must be an integer >= {minimum}, got {n!r}")


def _check_log_eps(log_eps: float) -> None:
    if not (isinstance(log_eps, (int, float)) and math.isfinite(log_eps) and log_eps < 0.0):
        raise DomainError(f"log_eps must be finite and < 0, got {log_eps!r}")


def eps_at(regime: ErrorRegime, n: int) -> tuple[float, float]:
    """The pair (eps_n, log eps_n) a regime prescribes at sample size n.

    eps_n may underflow to 0.0 in the exponential regime; log eps_n is
    exact regardless.
    """
    _check_n(n)
    if isinstance(regime, Constant):
        return regime.eps, math.log(regime.eps)
    if isinstance(regime, Linear):
        if n < 2:
            raise DomainError("linear regime requires n >= 2")
        return 1.0 / n, -math.log(n)
    if isinstance(regime, Exponential):
        log_eps = -regime.c * n
        return math.exp(log_eps), log_eps
    raise DomainError(f"unknown regime {regime!r}")


def _lower_beta(log_value: float | None, optimizer: float | None) -> BoundResult:
    # Common clamping for lower bounds on beta; see the module docstring.
    if log_value is None or log_value == -math.inf:
        return BoundResult(0.0, -math.inf, optimizer, BoundKind.LOWER_BETA, False)
    if log_value > 0.0:
        return BoundResult(1.0, 0.0, optimizer, BoundKind.LOWER_BETA, False)
    value = math.exp(log_value)
    return BoundResult(value, log_value, optimizer, BoundKind.LOWER_BETA, value > 0.0)


def _branch_one(pair: DistributionPair, n: int, log_eps: float) -> tuple[float, float]:
    """Minimized exponent g* = inf_{l>1} ((l-1)/l)(log_eps + n D_l(P1||P0)).

    The branch-one bound is 1 - e^{g*}; returns (g*, argmin l).
    """

    def objective(lam):
        d = renyi_divergence(pair, lam, Direction.REVERSE)
        return -((lam - 1.0) / lam) * (log_eps + n * d)

    lam, neg_g = maximize_scalar(objective, Bracket(1.0, math.inf))
    return -neg_g, lam


def renyi_converse(pair: DistributionPair, n: int, log_eps: float) -> BoundResult:
    """Two-branch Renyi lower bound on beta_n(eps); optimizer is the winning l."""
    _check_n(n)
    _check_log_eps(log_eps)
    g_min, lam_one = _branch_one(pair, n, log_eps)
    log_one = math.log1p(-math.exp(g_min)) if g_min < 0.0 else None
    log_1m_eps = log_diff_exp(0.0, log_eps)
    log_two, lam_two = None, None
    if log_1m_eps > -math.inf:  # 1 - eps underflows only for eps within 1e-16 of 1

        def objective(lam):
            d = renyi_divergence(pair, lam, Direction.FORWARD)
            return (lam / (lam - 1.0)) * log_1m_eps - n * d

        lam_two, log_two = maximize_scalar(objective, Bracket(1.0, math.inf))
    if log_one is None and log_two is None:
        return _lower_beta(None, None)
    if log_two is None or (log_one is not None and log_one >= log_two):
        return _lower_beta(log_one, lam_one)
    return _lower_beta(log_two, lam_two)


def phase_transition_converse(pair: DistributionPair, n: int, c: float) -> BoundResult:
    """Branch-one Renyi converse at eps = e^{-nc} for c > D(P1||P0).

    beta_n(e^{-nc}) >= 1 - inf_{l>1} e^{-n ((l-1)/l)(c - D_l(P1||P0))},
    which tends to 1: above the divergence the test problem flips phase.
    """
    _check_n(n)
    if not (isinstance(c, (int, float)) and math.isfinite(c) and c > 0.0):
        raise DomainError(f"rate c must be finite and > 0, got {c!r}")
    d_rev = kl_divergence(pair, Direction.REVERSE)
    if c <= d_rev:
        raise DomainError(
            f"phase_transition_converse requires c > D(P1||P0) = {d_rev:.6g}; "
            "for c below the divergence use phase_transition_achievability"
        )
    g_min, lam = _branch_one(pair, n, -c * n)
    log_value = math.log1p(-math.exp(g_min)) if g_min < 0.0 else None
    return _lower_beta(log_value, lam)


def _achievability_log_expr(pair, n, tau, log_alpha, lam):
    # log of (e^{(l-1) n D_l} - alpha e^{l tau}) / e^{(l-1) tau} per lambda,
    # +inf where the numerator is non-positive (or underflows to nothing).
    lam_arr = np.asarray(lam, dtype=float)
    d = np.asarray(renyi_divergence(pair, lam_arr, Direction.REVERSE))
    t_top = (lam_arr - 1.0) * n * d
    t_sub = log_alpha + lam_arr * tau
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        log_num = t_top + np.log1p(-np.exp(t_sub - t_top))
    out = log_num - (lam_arr - 1.0) * tau
    out = np.where((t_top > t_sub) & np.isfinite(out), out, np.inf)
    return float(out) if lam_arr.ndim == 0 else out


def renyi_achievability_at_threshold(
    pair: DistributionPair, n: int, tau: float, log_alpha: float
) -> BoundResult:
    """Upper bound on beta of the log-LR-threshold-tau test with Type I error alpha.

    Minimizes (e^{(l-1) n D_l(P1||P0)} - alpha e^{l tau}) / e^{(l-1) tau}
    over l in (0, 1) in the log domain (the subtraction is a
    log-difference).  The expression decreases in alpha, so log_alpha
    must be the exact Type I error of the test, or a *lower* bound on it;
    log_alpha = -inf (alpha = 0) is always safe.  Lambdas where the
    numerator is non-positive are excluded; if any such lambda exists the
    result is flagged valid=False and the value is the smallest positive
    evaluation, and if none is positive the result is 0 with valid=False.
    """
    _check_n(n)
    if not (isinstance(tau, (int, float)) and math.isfinite(tau)):
        raise DomainError(f"tau must be finite, got {tau!r}")
    if not (isinstance(log_alpha, (int, float)) and log_alpha <= 0.0 and not math.isnan(log_alpha)):
        raise DomainError(f"log_alpha must lie in [-inf, 0], got {log_alpha!r}")
    tol = 1.0e-9
    lam_grid = np.geomspace(tol, 1.0 - tol, 2048)
    obj = _achievability_log_expr(pair, n, tau, log_alpha, lam_grid)
    finite = np.isfinite(obj)
    if not np.any(finite):
        return BoundResult(0.0, -math.inf, None, BoundKind.UPPER_BETA, False)
    i = int(np.argmin(np.where(finite, obj, np.inf)))
    best_lam, best_log = float(lam_grid[i]), float(obj[i])
    a = float(lam_grid[max(i - 1, 0)])
    b = float(lam_grid[min(i + 1, lam_grid.size - 1)])
    try:
        lam_ref, neg_ref = maximize_scalar(
            lambda x: -_achievability_log_expr(pair, n, tau, log_alpha, x), Bracket(a, b)
        )
        if -neg_ref < best_log:
            best_lam, best_log = lam_ref, -neg_ref
    except OptimizationError:
        pass  # feasible set grazes the refinement cell; the grid value stands
    value = float(np.exp(best_log))
    return BoundResult(value, best_log, best_lam, BoundKind.UPPER_BETA, bool(np.all(finite)))


def threshold_for_rate(pair: DistributionPair, n: int, c: float, lam: float) -> float:
    """Log-LR threshold whose Markov bound pins the Type I error at e^{-nc}.

    tau = n D_lam(P1||P0) - n (D_lam(P1||P0) - c) / lam for lam in (0,1);
    requires c < D_lam(P1||P0) so the threshold sits below n D_lam.
    """
    _check_n(n)
    if not (isinstance(lam, (int, float)) and 0.0 < lam < 1.0):
        raise DomainError(f"lam must lie in (0, 1), got {lam!r}")
    if not (isinstance(c, (int, float)) and math.isfinite(c) and c > 0.0):
        raise DomainError(f"rate c must be finite and > 0, got {c!r}")
    d = renyi_divergence(pair, lam, Direction.REVERSE)
    if c >= d:
        raise DomainError(f"threshold_for_rate requires c < D_lambda(P1||P0) = {d:.6g}")
    return n * (d - (d - c) / lam)


def phase_transition_achievability(pair: DistributionPair, n: int, c: float) -> BoundResult:
    """Upper bound on beta_n(e^{-nc}) for rates below the divergence.

    beta_n(e^{-nc}) < inf e^{-n ((1-l)/l)(D_l(P1||P0) - c)}, the infimum
    over the l in (0, 1) with D_l(P1||P0) > c; each such l corresponds to
    the threshold test of :func:`threshold_for_rate` with the alpha term
    of the achievability bound dropped.
    """
    _check_n(n)
    if not (isinstance(c, (int, float)) and math.isfinite(c) and c > 0.0):
        raise DomainError(f"rate c must be finite and > 0, got {c!r}")
    d_rev = kl_divergence(pair, Direction.REVERSE)
    if c >= d_rev:
        raise DomainError(
            f"phase_transition_achievability requires c < D(P1||P0) = {d_rev:.6g}; "
            "for c above the divergence use phase_transition_converse"
        )
    # Restrict to the lambdas with D_lambda > c: D_lambda increases in lambda,
    # so the feasible set is (lam_lo, 1).
    if isinstance(pair, GaussianPair):
        lam_lo = c / d_rev
    else:
        lo, hi = 1.0e-12, 1.0 - 1.0e-12
        if renyi_divergence(pair, lo, Direction.REVERSE) > c:
            lam_lo = 0.0
        else:
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if renyi_divergence(pair, mid, Direction.REVERSE) > c:
                    hi = mid
                else:
                    lo = mid
            lam_lo = hi

    def objective(lam):
        d = renyi_divergence(pair, lam, Direction.REVERSE)
        return ((1.0 - lam) / lam) * n * (d - c)

    lam, exponent = maximize_scalar(objective, Bracket(lam_lo, 1.0))
    log_value = -exponent
    return BoundResult(
        float(np.exp(log_value)), log_value, lam, BoundKind.UPPER_BETA, exponent > 0.0
    )


def _lower_n(value: float, optimizer: float | None) -> BoundResult:
    if not value >= 1.0:
        return BoundResult(1.0, 0.0, optimizer, BoundKind.LOWER_N, False)
    return BoundResult(value, math.log(value), optimizer, BoundKind.LOWER_N, True)


def _check_prob(name: str, p: float, upper: float = 1.0) -> None:
    if not (isinstance(p, (int, float)) and 0.0 < p < upper):
        raise DomainError(f"{name} must lie in (0, {upper:g}), got {p!r}")


def sample_complexity_renyi(
    pair: DistributionPair, eps: float, delta: float, lam: float | None = None
) -> BoundResult:
    """Samples needed so some test has Type I error <= eps and Type II <= delta.

    For every l > 1,

        n >= max{ (log(1/delta) - (l/(l-1)) log(1/(1-eps))) / D_l(P0||P1),
                  (log(1/eps) - (l/(l-1)) log(1/(1-delta))) / D_l(P1||P0) }.

    With lam given the bound is evaluated there; otherwise it is
    maximized over l > 1.  Values below 1 clamp to 1 with valid=False.
    """
    _check_prob("eps", eps)
    _check_prob("delta", delta)
    log_inv_delta = -math.log(delta)
    log_inv_eps = -math.log(eps)
    log_inv_1m_eps = -math.log1p(-eps)
    log_inv_1m_delta = -math.log1p(-delta)

    def objective(lam_):
        ratio = lam_ / (lam_ - 1.0)
        first = (log_inv_delta - ratio * log_inv_1m_eps) / renyi_divergence(
            pair, lam_, Direction.FORWARD
        )
        second = (log_inv_eps - ratio * log_inv_1m_delta) / renyi_divergence(
            pair, lam_, Direction.REVERSE
        )
        return np.maximum(first, second)

    if lam is not None:
        if not (isinstance(lam, (int, float)) and math.isfinite(lam) and lam > 1.0):
            raise DomainError(f"lam must be > 1, got {lam!r}")
        return _lower_n(float(objective(lam)), lam)
    arg, value = maximize_scalar(objective, Bracket(1.0, math.inf))
    return _lower_n(value, arg)


def sample_complexity_pensia(pair: DistributionPair, eps: float, delta: float) -> BoundResult:
    """The comparison sample-size bound at its closed-form order l*.

    n >= (1/2) (l*/(1-l*)) log(1/(2 eps)) / D_{l*}(P0||P1) with
    l* = log(1/(2 delta)) / (log(1/(2 delta)) + log(1/(2 eps)));
    requires eps, delta < 1/2.
    """
    _check_prob("eps", eps, upper=0.5)
    _check_prob("delta", delta, upper=0.5)
    log_s = -math.log(2.0 * delta)
    log_e = -math.log(2.0 * eps)
    lam_star = log_s / (log_s + log_e)
    d = renyi_divergence(pair, lam_star, Direction.FORWARD)
    value = 0.5 * (lam_star / (1.0 - lam_star)) * log_e / d
    return _lower_n(value, lam_star)


def fano_bound(pair: DistributionPair, n: int, log_eps: float) -> BoundResult:
    """Weak-converse baseline beta >= e^{-n D(P0||P1) - log 2} / (1 - eps)."""
    _check_n(n, minimum=0)
    _check_log_eps(log_eps)
    d = kl_divergence(pair, Direction.FORWARD)
    log_value = -n * d - _LOG2 - log_diff_exp(0.0, log_eps)
    return _lower_beta(log_value, None)


def hellinger_bound(pair: DistributionPair, n: int, log_eps: float) -> BoundResult:
    """Hellinger baseline beta >= 1 - sqrt(1 - (1 - H^2)^{2n}) - eps."""
    _check_n(n)
    _check_log_eps(log_eps)
    h2 = hellinger_squared(pair)
    log_affinity_2n = 2.0 * n * math.log1p(-h2)
    x = -math.expm1(log_affinity_2n)  # 1 - (1 - H^2)^{2n} in [0, 1)
    if x > 0.5:
        one_minus_sqrt = math.exp(log_affinity_2n) / (1.0 + math.sqrt(x))
    else:
        one_minus_sqrt = 1.0 - math.sqrt(x)
    value = one_minus_sqrt - math.exp(log_eps)
    if value <= 0.0:
        return _lower_beta(None, None)
    return _lower_beta(math.log(value), None)


def berry_esseen_bound(
    pair: DistributionPair, n: int, log_eps: float, delta_param: float | None = None
) -> BoundResult:
    """Berry-Esseen baseline on log beta, with slack parameter Delta.

    log beta >= -n D(P0||P1) - sqrt(n V) Q^{-1}(1 - eps - (B + Delta)/sqrt(n))
                + log Delta - (1/2) log n

    where V and B are the LLR variance and Berry-Esseen constant of the
    pair.  Delta is optimized over (0, sqrt(n)(1 - eps) - B) when not
    given; if that interval is empty (the Q^{-1} argument leaves (0, 1)
    for every Delta) the bound is vacuous: value 0, valid=False.
    """
    _check_n(n)
    _check_log_eps(log_eps)
    m = llr_moments(pair)
    if m.variance <= 0.0:
        return _lower_beta(None, None)
    one_m_eps = -math.expm1(log_eps)
    sqrt_n = math.sqrt(n)
    hi = sqrt_n * one_m_eps - m.berry_constant
    if hi <= 0.0:
        return _lower_beta(None, None)
    scale = math.sqrt(n * m.variance)
    shift = -n * m.mean - 0.5 * math.log(n)

    def objective(dl):
        arg = one_m_eps - (m.berry_constant + dl) / sqrt_n
        return shift - scale * q_inverse(arg) + np.log(dl)

    if delta_param is not None:
        if not (isinstance(delta_param, (int, float)) and delta_param > 0.0):
            raise DomainError(f"delta_param must be > 0, got {delta_param!r}")
        if delta_param >= hi:
            return _lower_beta(None, delta_param)
        return _lower_beta(float(objective(delta_param)), delta_param)
    arg_opt, log_value = maximize_scalar(objective, Bracket(0.0, hi))
    return _lower_beta(log_value, arg_opt)


def smoothing_out_bound(
    pair: DistributionPair, n: int, log_eps: float, t_param: float | None = None
) -> BoundResult:
    """Smoothing baseline for Gaussian pairs, with temperature t in (0, 10).

    log beta >= -n D + log(1 - eps) / (1 - e^{-2t}) - n t
                - (delta^2 / (2 sigma^2)) (e^t - 1)^2 - n (cosh(2t) - 1)

    with D = delta^2 / (2 sigma^2).  t is optimized over (0, 10) when
    not given.  Non-Gaussian pairs raise UnsupportedFamilyError.
    """
    if not isinstance(pair, GaussianPair):
        raise UnsupportedFamilyError("smoothing_out_bound is defined for Gaussian pairs only")
    _check_n(n)
    _check_log_eps(log_eps)
    d2 = (pair.delta / pair.sigma) ** 2
    log_1m_eps = log_diff_exp(0.0, log_eps)

    def objective(t):
        with np.errstate(divide="ignore"):
            smoothed = log_1m_eps / (-np.expm1(-2.0 * t))
        return -n * d2 / 2.0 + smoothed - n * t - (d2 / 2.0) * np.expm1(t) ** 2 - n * (np.cosh(2.0 * t) - 1.0)

    if t_param is not None:
        if not (isinstance(t_param, (int, float)) and t_param > 0.0):
            raise DomainError(f"t_param must be > 0, got {t_param!r}")
        return _lower_beta(float(objective(t_param)), t_param)
    arg_opt, log_value = maximize_scalar(objective, Bracket(0.0, 10.0))
    return _lower_beta(log_value, arg_opt)
