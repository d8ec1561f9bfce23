"""The classical explicit scale-function families.

Each constructor returns a ScaleFunction paired with its Laplace exponent,
so every entry can be checked against the defining transform identity
int_0^inf exp(-theta x) W(x) dx = 1/(psi(theta) - q).

CORRECTIONS.  Three printed formulas circulating for these families fail
that identity and are shipped here in the identity-passing form:

* brownian     -- the sinh argument must carry mu^2 (not mu) under the
                  square root: sqrt(mu^2 + 2 q sigma^2).
* cramer_lundberg -- the exponent must decay: exp(-(mu - lambda/c) x).
* fixed_jumps  -- the sum starts at n = 0 (the n >= 1 version vanishes on
                  [0, jump) and misses W(0+) = 1/c).

Each corrected family carries a regression test demonstrating that the
uncorrected variant violates the transform identity by more than 1e-2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special as sps

from .errors import ParameterError
from .gtsc import ScaleFunction
from .levy import LaplaceExponent
from .special import mittag_leffler, mittag_leffler_deriv

__all__ = [
    "CatalogEntry",
    "CORRECTIONS",
    "w_brownian",
    "w_stable",
    "w_stable_drift",
    "w_cramer_lundberg",
    "w_fixed_jumps",
    "w_abate_whitt",
    "w_pssmp",
    "catalog_families",
    "build_catalog_entry",
]

CORRECTIONS = {
    "brownian": "sinh argument corrected to sqrt(mu^2 + 2 q sigma^2)",
    "cramer_lundberg": "exponent sign corrected to exp(-(mu - lambda/c) x)",
    "fixed_jumps": "sum index corrected to start at n = 0",
}


@dataclass(frozen=True)
class CatalogEntry:
    family: str
    params: dict
    scale: ScaleFunction
    psi: LaplaceExponent


# ---------------------------------------------------------------------------
# 1. Brownian motion with drift
# ---------------------------------------------------------------------------

def w_brownian(sigma: float, mu: float, q: float = 0.0) -> ScaleFunction:
    """W^(q) for psi(theta) = sigma^2 theta^2 / 2 + mu theta."""
    if sigma <= 0:
        raise ParameterError("sigma must be positive")
    s2 = sigma * sigma
    disc = mu * mu + 2.0 * q * s2
    rt = math.sqrt(disc)

    if rt == 0.0:
        def eval_fn(x: float) -> float:
            return 2.0 * x / s2 * math.exp(-mu * x / s2)

        def deriv_fn(x: float) -> float:
            return (2.0 / s2 - 2.0 * x * mu / s2 ** 2) * math.exp(-mu * x / s2)
    else:
        def eval_fn(x: float) -> float:
            return 2.0 / rt * math.exp(-mu * x / s2) * math.sinh(x * rt / s2)

        def deriv_fn(x: float) -> float:
            e = math.exp(-mu * x / s2)
            return (2.0 / s2) * e * (math.cosh(x * rt / s2)
                                     - (mu / rt) * math.sinh(x * rt / s2))

    def psi_eval(theta):
        return 0.5 * s2 * theta * theta + mu * theta

    psi = LaplaceExponent(eval=psi_eval, deriv=lambda th: s2 * th + mu,
                          domain_edge=-math.inf, descriptor="catalog-family",
                          drift_at_zero=mu)
    phi_q = (-mu + rt) / s2
    return ScaleFunction(q=q, phi_q=phi_q, route="catalog", eval_fn=eval_fn,
                         deriv_fn=deriv_fn, psi=psi, value_at_zero=0.0)


# ---------------------------------------------------------------------------
# 2. Stable (and stable plus drift)
# ---------------------------------------------------------------------------

def w_stable(beta: float, q: float = 0.0) -> ScaleFunction:
    """W^(q)(x) = beta x^{beta-1} E'_{beta,1}(q x^beta) for psi(theta) = theta^beta.

    beta = 2 is admitted as the Brownian boundary (psi = theta^2).
    """
    if not 1.0 < beta <= 2.0:
        raise ParameterError("stable index beta must lie in (1, 2]")

    def eval_fn(x: float) -> float:
        if x == 0.0:
            return 0.0
        return beta * x ** (beta - 1.0) * mittag_leffler_deriv(beta, 1.0, 1, q * x ** beta).real

    def deriv_fn(x: float) -> float:
        z = q * x ** beta
        d1 = mittag_leffler_deriv(beta, 1.0, 1, z).real
        d2 = mittag_leffler_deriv(beta, 1.0, 2, z).real
        return beta * (beta - 1.0) * x ** (beta - 2.0) * d1 \
            + beta * beta * q * x ** (2.0 * beta - 2.0) * d2

    def psi_eval(theta):
        return theta ** beta

    psi = LaplaceExponent(eval=psi_eval,
                          deriv=lambda th: beta * th ** (beta - 1.0) if th > 0 else 0.0,
                          domain_edge=0.0, descriptor="catalog-family", drift_at_zero=0.0)
    return ScaleFunction(q=q, phi_q=q ** (1.0 / beta), route="catalog",
                         eval_fn=eval_fn, deriv_fn=deriv_fn, psi=psi, value_at_zero=0.0)


def w_stable_drift(beta: float, c: float) -> ScaleFunction:
    """q = 0 scale function of psi(theta) = theta^beta + c theta, c > 0.

    W(x) = (1/c)(1 - E_{beta-1}(-c x^{beta-1})); the exponent pairing is
    validated by the transform identity before the entry is enabled.
    """
    if not 1.0 < beta < 2.0:
        raise ParameterError("stable index beta must lie in (1, 2)")
    if c <= 0:
        raise ParameterError("drift c must be positive")
    bm1 = beta - 1.0

    def eval_fn(x: float) -> float:
        if x == 0.0:
            return 0.0
        return (1.0 - mittag_leffler(bm1, 1.0, -c * x ** bm1).real) / c

    def deriv_fn(x: float) -> float:
        z = -c * x ** bm1
        return bm1 * x ** (bm1 - 1.0) * mittag_leffler_deriv(bm1, 1.0, 1, z).real

    def psi_eval(theta):
        return theta ** beta + c * theta

    psi = LaplaceExponent(eval=psi_eval,
                          deriv=lambda th: beta * th ** (beta - 1.0) + c if th > 0 else c,
                          domain_edge=0.0, descriptor="catalog-family", drift_at_zero=c)
    return ScaleFunction(q=0.0, phi_q=0.0, route="catalog", eval_fn=eval_fn,
                         deriv_fn=deriv_fn, psi=psi, value_at_zero=0.0)


# ---------------------------------------------------------------------------
# 3. Cramer-Lundberg with exponential claims
# ---------------------------------------------------------------------------

def w_cramer_lundberg(ccoef: float, lam: float, mu: float) -> ScaleFunction:
    """q = 0 scale function of psi(theta) = c theta - lambda theta/(mu + theta).

    Requires positive net drift c - lambda/mu > 0.  W(0+) = 1/c and
    W(inf) = 1/(c - lambda/mu).
    """
    if ccoef <= 0 or lam <= 0 or mu <= 0:
        raise ParameterError("ccoef, lambda, mu must be positive")
    if ccoef - lam / mu <= 0:
        raise ParameterError("net drift must be positive: ccoef - lambda/mu > 0")
    rate = mu - lam / ccoef   # > 0 under the net-drift condition

    def eval_fn(x: float) -> float:
        return (1.0 + lam / (ccoef * mu - lam) * (1.0 - math.exp(-rate * x))) / ccoef

    def deriv_fn(x: float) -> float:
        return lam * rate / (ccoef * (ccoef * mu - lam)) * math.exp(-rate * x)

    def psi_eval(theta):
        return ccoef * theta - lam * theta / (mu + theta)

    def psi_deriv(theta: float) -> float:
        return ccoef - lam * mu / (mu + theta) ** 2

    psi = LaplaceExponent(eval=psi_eval, deriv=psi_deriv, domain_edge=-mu,
                          descriptor="catalog-family", drift_at_zero=ccoef - lam / mu)
    return ScaleFunction(q=0.0, phi_q=0.0, route="catalog", eval_fn=eval_fn,
                         deriv_fn=deriv_fn, psi=psi, value_at_zero=1.0 / ccoef)


# ---------------------------------------------------------------------------
# 4. Drift minus compound Poisson with fixed jump size
# ---------------------------------------------------------------------------

def w_fixed_jumps(ccoef: float, lam: float, jump: float) -> ScaleFunction:
    """q = 0 scale function of psi(theta) = c theta - lambda (1 - exp(-jump*theta)).

    W(x) = (1/c) sum_{n=0}^{floor(x/jump)} e^{-lam(jump n - x)/c} (lam/c)^n (jump n - x)^n / n!
    (piecewise smooth with kinks at multiples of the jump size).
    """
    if ccoef <= 0 or lam < 0 or jump <= 0:
        raise ParameterError("ccoef, jump must be positive and lambda nonnegative")
    if ccoef - lam * jump <= 0:
        raise ParameterError("net drift must be positive: ccoef - lambda*jump > 0")
    lc = lam / ccoef
    drift0 = ccoef - lam * jump

    def _log_terms(x: float):
        # floor with a snap so kink placement is deterministic at multiples
        nmax = int(math.floor(x / jump + 1e-12))
        n = np.arange(0, nmax + 1, dtype=float)
        u = jump * n - x
        # n-th term: e^{-lam u/c} (lam u / c)^n / n!, u <= 0
        with np.errstate(divide="ignore", invalid="ignore"):
            logmag = -lc * u + n * np.log(np.abs(lc * u, where=n > 0, out=np.ones_like(u))) \
                - sps.gammaln(n + 1.0)
        logmag[0] = lc * x
        sign = np.where(n % 2 == 0, 1.0, -1.0)   # (u<0)^n alternates
        vals = sign * np.exp(logmag)
        vals[np.abs(u) < 1e-300] = np.where(n[np.abs(u) < 1e-300] > 0, 0.0, 1.0)
        return vals, float(logmag.max())

    # beyond the depth where the alternating sum cancels catastrophically, the
    # tail is the exact two-pole form 1/psi'(0+) + e^{theta2 x}/psi'(theta2)
    if lam > 0:
        from scipy.optimize import brentq

        theta2 = brentq(lambda th: ccoef * th - lam * (1.0 - math.exp(-jump * th)),
                        -80.0 / jump, -1e-12, maxiter=200)
        psi_d_theta2 = ccoef - lam * jump * math.exp(-jump * theta2)
        x_tail = _fixed_jump_depth_limit(lc, jump)
    else:
        theta2, psi_d_theta2, x_tail = None, None, math.inf

    def eval_fn(x: float) -> float:
        if x >= x_tail:
            return 1.0 / drift0 + math.exp(theta2 * x) / psi_d_theta2
        vals, _ = _log_terms(x)
        return float(vals.sum()) / ccoef

    def psi_eval(theta):
        return ccoef * theta - lam * (1.0 - np.exp(-jump * theta))

    def psi_deriv(theta: float) -> float:
        return ccoef - lam * jump * math.exp(-jump * theta)

    psi = LaplaceExponent(eval=psi_eval, deriv=psi_deriv, domain_edge=-math.inf,
                          descriptor="catalog-family", drift_at_zero=ccoef - lam * jump)
    return ScaleFunction(q=0.0, phi_q=0.0, route="catalog", eval_fn=eval_fn,
                         psi=psi, value_at_zero=1.0 / ccoef)


# ---------------------------------------------------------------------------
# 5. Unit drift minus heavy-tailed compound Poisson (erfc family)
# ---------------------------------------------------------------------------

def _fixed_jump_depth_limit(lc: float, jump: float) -> float:
    """Largest x at which the alternating sum keeps ~9 significant digits."""
    if lc == 0.0:
        return math.inf
    x = jump
    while x < 4000.0 * jump:
        n = np.arange(0, int(x / jump) + 1, dtype=float)
        u = jump * n - x
        with np.errstate(divide="ignore"):
            logmag = -lc * u + n * np.log(np.maximum(np.abs(lc * u), 1e-300)) \
                - sps.gammaln(n + 1.0)
        logmag[0] = lc * x
        if logmag.max() > 18.0:
            return x
        x += jump
    return math.inf


def w_abate_whitt(lam: float, mu: float) -> ScaleFunction:
    """q = 0 scale function for the unit-drift queueing family.

    psi(theta) = theta - lambda*theta/((mu + sqrt(theta))(1 + sqrt(theta))),
    W(x) = (1-lam/mu)^{-1} [1 - (lam/mu)/(nu1 - nu2) (nu1 eta(x nu2^2) - nu2 eta(x nu1^2))]
    with eta(x) = e^x erfc(sqrt(x)).  Coalescing nu1 = nu2 is handled by the
    limit formula.
    """
    if lam <= 0 or mu <= 0:
        raise ParameterError("lambda and mu must be positive")
    rho = lam / mu
    if rho >= 1.0:
        raise ParameterError("drift condition requires lambda/mu < 1")
    half = (1.0 + mu) / 2.0
    disc = half * half - (1.0 - rho) * mu
    pref = 1.0 / (1.0 - rho)

    if abs(disc) < 1e-14 * half * half:
        nu = half

        def eval_fn(x: float) -> float:
            u = nu * nu * x
            et = sps.erfcx(math.sqrt(u))
            lim = (1.0 - 2.0 * u) * et + 2.0 * math.sqrt(u / math.pi)
            return pref * (1.0 - rho * lim)
    else:
        root = math.sqrt(disc)
        nu1, nu2 = half + root, half - root

        def eval_fn(x: float) -> float:
            e1 = sps.erfcx(math.sqrt(x) * abs(nu2))
            e2 = sps.erfcx(math.sqrt(x) * abs(nu1))
            return pref * (1.0 - rho / (nu1 - nu2) * (nu1 * e1 - nu2 * e2))

    def psi_eval(theta):
        rt = np.sqrt(complex(theta))
        return theta - lam * theta / ((mu + rt) * (1.0 + rt))

    def psi_deriv(theta: float) -> float:
        h = 1e-7 * (1.0 + abs(theta))
        lo = max(theta - h, 0.0)
        return float(np.real(psi_eval(theta + h) - psi_eval(lo))) / (theta + h - lo)

    psi = LaplaceExponent(eval=psi_eval, deriv=psi_deriv, domain_edge=0.0,
                          descriptor="catalog-family", drift_at_zero=1.0 - rho)
    return ScaleFunction(q=0.0, phi_q=0.0, route="catalog", eval_fn=eval_fn,
                         psi=psi, value_at_zero=1.0)


# ---------------------------------------------------------------------------
# 6. Self-similar growth-fragmentation related family
# ---------------------------------------------------------------------------

def w_pssmp(beta: float, conditioned: bool) -> ScaleFunction:
    """q = 0 scale functions from positive self-similar Markov processes.

    Unconditioned: W(x) = (1 - e^{-x})^{beta-1} e^x with
    psi(theta) = Gamma(theta - 1 + beta)/(Gamma(theta - 1) Gamma(beta));
    conditioned to drift to +inf: W(x) = (1 - e^{-x})^{beta-1} with
    psi(theta) = Gamma(theta + beta)/(Gamma(theta) Gamma(beta)).
    """
    if not 1.0 < beta < 2.0:
        raise ParameterError("beta must lie in (1, 2)")
    lgb = sps.gammaln(beta)

    if conditioned:
        def eval_fn(x: float) -> float:
            return (-math.expm1(-x)) ** (beta - 1.0)

        def deriv_fn(x: float) -> float:
            return (beta - 1.0) * (-math.expm1(-x)) ** (beta - 2.0) * math.exp(-x)

        def psi_eval(theta):
            return _gamma_ratio(theta, beta, lgb)

        phi0 = 0.0
        drift0 = 1.0
    else:
        def eval_fn(x: float) -> float:
            return (-math.expm1(-x)) ** (beta - 1.0) * math.exp(x)

        def deriv_fn(x: float) -> float:
            em = -math.expm1(-x)
            return math.exp(x) * em ** (beta - 2.0) * ((beta - 1.0) * math.exp(-x) + em)

        def psi_eval(theta):
            return _gamma_ratio(theta - 1.0, beta, lgb)

        phi0 = 1.0
        drift0 = None   # psi'(0+) < 0; obtained by finite differences

    def psi_deriv(theta: float) -> float:
        h = 1e-6
        f = [float(np.real(psi_eval(theta + k * h))) for k in range(5)]
        return (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h)

    psi = LaplaceExponent(eval=psi_eval, deriv=psi_deriv, domain_edge=-math.inf,
                          descriptor="catalog-family", drift_at_zero=drift0)
    return ScaleFunction(q=0.0, phi_q=phi0, route="catalog", eval_fn=eval_fn,
                         deriv_fn=deriv_fn, psi=psi, value_at_zero=0.0)


def _gamma_ratio(t, beta, lgb):
    """Gamma(t + beta) / (Gamma(t) Gamma(beta)), entire in t via rgamma."""
    t = complex(t)
    return complex(np.exp(sps.loggamma(t + beta) - lgb) * sps.rgamma(t))


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

_DEFAULTS = {
    "brownian": {"sigma": 1.0, "mu": 0.5, "q": 0.0},
    "stable": {"beta": 1.5, "q": 0.0},
    "stable_drift": {"beta": 1.5, "c": 1.0},
    "cramer_lundberg": {"ccoef": 2.0, "lam": 1.0, "mu": 1.0},
    "fixed_jumps": {"ccoef": 1.0, "lam": 0.5, "jump": 1.0},
    "abate_whitt": {"lam": 0.5, "mu": 1.0},
    "pssmp_drift_down": {"beta": 1.5, "conditioned": False},
    "pssmp_conditioned": {"beta": 1.5, "conditioned": True},
}

_BUILDERS: dict[str, Callable[..., ScaleFunction]] = {
    "brownian": w_brownian,
    "stable": w_stable,
    "stable_drift": w_stable_drift,
    "cramer_lundberg": w_cramer_lundberg,
    "fixed_jumps": w_fixed_jumps,
    "abate_whitt": w_abate_whitt,
    "pssmp_drift_down": lambda beta, conditioned=False: w_pssmp(beta, conditioned),
    "pssmp_conditioned": lambda beta, conditioned=True: w_pssmp(beta, conditioned),
}


def catalog_families() -> list[str]:
    return sorted(_BUILDERS)


def build_catalog_entry(family: str, **overrides) -> CatalogEntry:
    """Construct a family at its default parameters with optional overrides."""
    if family not in _BUILDERS:
        raise ParameterError(f"unknown catalog family '{family}'; "
                             f"choose from {', '.join(catalog_families())}")
    params = dict(_DEFAULTS[family])
    params.update(overrides)
    scale = _BUILDERS[family](**params)
    return CatalogEntry(family=family, params=params, scale=scale, psi=scale.psi)
