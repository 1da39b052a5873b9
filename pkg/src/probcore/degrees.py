"""Vertex degree machinery for probabilistic graphs.

The degree of a vertex is a sum of independent Bernoulli edge indicators
(a Poisson binomial variable). This module computes its exact pmf and
tail, the eta-degree (largest t whose tail probability still reaches
eta), a 2^d enumeration cross-check, and a normal-approximation lower
bound driven by the inverse normal cdf.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend


def _check_probs(probs) -> np.ndarray:
    p = np.ascontiguousarray(probs, dtype=np.float64)
    if p.ndim != 1:
        raise ValueError("probabilities must be a flat sequence")
    if p.size and not (np.all(p > 0.0) and np.all(p <= 1.0)):
        raise ValueError("edge probability outside (0, 1]")
    return p


def _check_eta(eta: float) -> float:
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must be within [0, 1], got {eta}")
    return eta


@dataclass(frozen=True)
class DegreeDistribution:
    """pmf[t] = Pr[deg == t] and tail[t] = Pr[deg >= t] for t = 0..d."""

    pmf: np.ndarray
    tail: np.ndarray


def degree_pmf(probs) -> DegreeDistribution:
    p = _check_probs(probs)
    pmf = _backend.impl().pb_pmf(p)
    tail = np.ascontiguousarray(np.cumsum(pmf[::-1])[::-1])
    np.minimum(tail, 1.0, out=tail)
    tail[0] = 1.0
    pmf.flags.writeable = False
    tail.flags.writeable = False
    return DegreeDistribution(pmf, tail)


def eta_degree_exact(probs, eta: float) -> int:
    """Largest t with Pr[deg >= t] >= eta; eta 0 gives d, eta 1 at least 0."""
    p = _check_probs(probs)
    eta = _check_eta(eta)
    return int(_backend.impl().eta_degree(p, eta))


def eta_degree_bruteforce(probs, eta: float) -> int:
    """Same value by enumerating all 2^d edge subsets; d is capped at 20."""
    p = _check_probs(probs)
    eta = _check_eta(eta)
    d = p.shape[0]
    if d > 20:
        raise ValueError(f"enumeration capped at degree 20, got {d}")
    w = np.array([1.0])
    c = np.array([0], dtype=np.int64)
    for pi in p:
        w = np.concatenate([w * (1.0 - pi), w * pi])
        c = np.concatenate([c, c + 1])
    pmf = np.bincount(c, weights=w, minlength=d + 1)
    s = 0.0
    for t in range(d, 0, -1):
        s += pmf[t]
        if s >= eta:
            return t
    return 0


# inverse normal cdf: rational approximation (Acklam's coefficients)
# refined with one Newton step against the erfc-based cdf
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425
_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _acklam(q: float) -> float:
    if q < _P_LOW:
        r = math.sqrt(-2.0 * math.log(q))
        return ((((((_C[0] * r + _C[1]) * r + _C[2]) * r + _C[3]) * r + _C[4]) * r + _C[5])
                / ((((_D[0] * r + _D[1]) * r + _D[2]) * r + _D[3]) * r + 1.0))
    if q > 1.0 - _P_LOW:
        r = math.sqrt(-2.0 * math.log(1.0 - q))
        return -((((((_C[0] * r + _C[1]) * r + _C[2]) * r + _C[3]) * r + _C[4]) * r + _C[5])
                 / ((((_D[0] * r + _D[1]) * r + _D[2]) * r + _D[3]) * r + 1.0))
    r = q - 0.5
    s = r * r
    return ((((((_A[0] * s + _A[1]) * s + _A[2]) * s + _A[3]) * s + _A[4]) * s + _A[5]) * r
            / (((((_B[0] * s + _B[1]) * s + _B[2]) * s + _B[3]) * s + _B[4]) * s + 1.0))


def _normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / _SQRT2)


def normal_quantile(q: float) -> float:
    """z with Phi(z) = q for q in (0, 1), absolute error below 1e-9."""
    q = float(q)
    if not 0.0 < q < 1.0:
        raise ValueError(f"quantile argument must be inside (0, 1), got {q}")
    z = _acklam(q)
    pdf = _INV_SQRT_2PI * math.exp(-0.5 * z * z)
    if pdf > 0.0:
        z -= (_normal_cdf(z) - q) / pdf
    return z


def eta_degree_clt_bound(probs, eta: float) -> int:
    """floor(mu + sigma * z_{1-eta}) clamped into [0, d].

    mu and sigma are the mean and standard deviation of the degree. With
    sigma = 0 (every probability 1) the degree is deterministic and the
    bound is d itself for any eta <= 1.
    """
    p = _check_probs(probs)
    eta = _check_eta(eta)
    d = p.shape[0]
    var = float(np.sum(p * (1.0 - p)))
    if var == 0.0 or eta == 0.0:
        return d
    if eta == 1.0:
        return 0
    mu = float(np.sum(p))
    t = math.floor(mu + math.sqrt(var) * normal_quantile(1.0 - eta))
    return int(min(max(t, 0), d))


def eta_degree_safe_floor(probs, eta: float) -> int:
    """A certified lower bound on the eta-degree, never above the true value.

    The normal approximation can overestimate, and the peeling scan is
    only allowed to trust initial values from below, so it seeds the
    buckets with this floor instead. Built from a Bernstein tail bound
    (Pr[degree <= mu - t] <= exp(-t^2 / (2 var + 2 t / 3))) combined with
    the count of certain edges, which the degree never goes below.
    """
    p = _check_probs(probs)
    eta = _check_eta(eta)
    d = p.shape[0]
    if eta == 0.0:
        return d
    var = float(np.sum(p * (1.0 - p)))
    if var == 0.0:
        # every probability is 1: the degree is exactly d
        return d
    if eta == 1.0:
        # the summed tail carries float dust below 1.0, so nothing above
        # zero can be certified against the computed eta-degree
        return 0
    # certain edges put probability exactly 1 on reaching their count, but
    # the computed tail sits a few ulps under 1, so only lean on them when
    # eta leaves room for that dust
    certain = int(np.count_nonzero(p == 1.0)) if eta <= 1.0 - 1e-6 else 0
    mu = float(np.sum(p))
    beta = -math.log1p(-eta)  # ln(1 / (1 - eta))
    t = beta / 3.0 + math.sqrt(beta * beta / 9.0 + 2.0 * beta * var)
    # tiny slack keeps float rounding from ever pushing the floor above
    # the certified value
    level = math.floor(mu + 1.0 - t - 1e-9)
    return int(min(max(level, certain, 0), d))
