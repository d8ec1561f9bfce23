"""Laplace exponents, ladder height processes and the parent-process construction.

A spectrally negative Levy process is handled through its Laplace exponent
psi(theta) = log E[exp(theta X_1)], strictly convex with psi(0) = 0.  Given a
killed subordinator H (the prescribed descending ladder height process) with
exponent phi and a kill parameter varphi for the ascending ladder, the parent
process has

    psi(theta) = (theta - varphi) * phi(theta),

Gaussian coefficient sigma = sqrt(2*zeta) and jump tail
Pi(-inf, -x) = varphi * Upsilon(x, inf) + dUpsilon/dx (x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import NumericalError, ParameterError

__all__ = [
    "LaplaceExponent",
    "LadderParams",
    "LevyTriple",
    "PathVariation",
    "VariationReport",
    "big_phi",
    "build_parent",
    "classify_variation",
    "mean_drift",
    "levy_khintchine_exponent",
]


@dataclass(frozen=True)
class LaplaceExponent:
    """Evaluable Laplace exponent psi with derivative and analyticity edge.

    ``eval`` accepts real or complex arguments (analytic off
    (-inf, domain_edge]); ``deriv`` is psi' on the real axis.
    """

    eval: Callable[[complex], complex]
    deriv: Callable[[float], float]
    domain_edge: float = 0.0
    descriptor: str = "custom"
    # closed-form psi'(0+) when the family provides one
    drift_at_zero: Optional[float] = None

    def __call__(self, theta):
        return self.eval(theta)


@dataclass(frozen=True)
class LadderParams:
    """Descending ladder height process: killed subordinator with drift.

    The Levy density must be non-increasing on (0, inf); that is what makes
    the parent construction valid.
    """

    kill_rate: float
    drift: float
    levy_density: Callable[[float], float]
    tail: Callable[[float], float]
    exponent: Callable[[complex], complex]
    exponent_deriv: Optional[Callable[[float], float]] = None
    # total jump mass Upsilon(0, inf); math.inf for infinite activity
    activity_mass: Optional[float] = None
    # left edge of analyticity of the exponent (-gamma for tempered families)
    domain_edge: float = 0.0
    # derivative of the ladder Levy density, when available in closed form
    levy_density_deriv: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if self.kill_rate < 0 or self.drift < 0:
            raise ParameterError("ladder kill rate and drift must be nonnegative")
        # spot-check the structural requirements on a coarse grid
        xs = [1e-3, 1e-2, 0.1, 0.5, 1.0, 3.0]
        dens = [self.levy_density(x) for x in xs]
        for lo, hi in zip(dens[1:], dens[:-1]):
            if lo > hi * (1 + 1e-9) + 1e-12:
                raise ParameterError("ladder Levy density must be non-increasing")
        phi0 = complex(self.exponent(0.0)).real
        if abs(phi0 - self.kill_rate) > 1e-8 * (1.0 + self.kill_rate):
            raise ParameterError("ladder exponent must satisfy phi(0) = kill rate")


@dataclass(frozen=True)
class LevyTriple:
    """(a, sigma, Pi) of a spectrally negative process.

    ``pi_tail(x)`` is Pi(-inf, -x) for x > 0; ``pi_density(x)`` the density of
    the jump magnitude at x when available.  ``jump_components`` optionally
    carries a structured description used by the Monte Carlo sampler.
    """

    a: float
    sigma: float
    pi_tail: Callable[[float], float]
    pi_density: Optional[Callable[[float], float]] = None
    jump_components: tuple = field(default=())


class PathVariation(str, Enum):
    BOUNDED = "bounded"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class VariationReport:
    variation: PathVariation
    gaussian: float
    # set when the jump mass is finite: drift of the compound Poisson form
    drift: Optional[float] = None
    activity_mass: Optional[float] = None
    subordinator_tail: Optional[Callable[[float], float]] = None


# ---------------------------------------------------------------------------
# right inverse of psi
# ---------------------------------------------------------------------------

def big_phi(psi: LaplaceExponent, q: float) -> float:
    """Largest root of psi(theta) = q for q >= 0.

    For q = 0 this is 0 when psi'(0+) >= 0 and the strictly positive root
    otherwise.  Convexity makes the bracketing globally convergent.
    """
    if q < 0:
        raise ParameterError("big_phi requires q >= 0")

    def f(th: float) -> float:
        return float(np.real(psi.eval(th))) - q

    if q == 0.0:
        if mean_drift(psi) >= 0.0:
            return 0.0
        # psi dips below zero then crosses back at Phi(0) > 0
        lo = 1e-8
        for _ in range(200):
            if f(lo) < 0:
                break
            lo *= 0.5
        else:
            return 0.0
    else:
        lo = 0.0

    hi = max(1.0, 2.0 * lo)
    for _ in range(200):
        if f(hi) > 0:
            break
        hi *= 2.0
    else:
        raise NumericalError("big_phi: could not bracket the root (malformed exponent?)")
    root = brentq(f, lo, hi, xtol=1e-300, rtol=4.0 * np.finfo(float).eps, maxiter=300)
    return float(root)


def mean_drift(psi: LaplaceExponent) -> float:
    """psi'(0+), the mean of X_1.

    Closed form when the family provides one, otherwise a one-sided
    four-point finite difference with step 1e-6 (avoids cancellation at the
    domain edge).
    """
    if psi.drift_at_zero is not None:
        return psi.drift_at_zero
    h = 1e-6
    f = [float(np.real(psi.eval(k * h))) for k in range(5)]
    return (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h)


# ---------------------------------------------------------------------------
# parent process construction
# ---------------------------------------------------------------------------

def build_parent(ladder: LadderParams, varphi: float) -> tuple[LevyTriple, LaplaceExponent]:
    """Spectrally negative process whose descending ladder height process is ``ladder``.

    ``varphi`` is the kill rate of the (unit-drift) ascending ladder and equals
    Phi(0) of the parent when positive.  At most one of the two ladder
    processes may be killed, hence ``varphi * kill_rate`` must vanish.
    """
    if varphi < 0:
        raise ParameterError("varphi must be nonnegative")
    if varphi > 0 and ladder.kill_rate > 0:
        raise ParameterError("both ladder processes killed: varphi * kappa must be 0")

    kappa, zeta = ladder.kill_rate, ladder.drift
    sigma = math.sqrt(2.0 * zeta)
    phi_l = ladder.exponent

    def psi_eval(theta):
        return (theta - varphi) * phi_l(theta)

    if ladder.exponent_deriv is not None:
        phi_d = ladder.exponent_deriv

        def psi_deriv(theta: float) -> float:
            return float(np.real(phi_l(theta))) + (theta - varphi) * phi_d(theta)

        drift0 = float(np.real(phi_l(0.0))) - varphi * phi_d(0.0)
    else:
        def psi_deriv(theta: float) -> float:
            h = 1e-6
            f = [float(np.real(psi_eval(theta + k * h))) for k in range(5)]
            return (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h)

        drift0 = None

    def pi_tail(x: float) -> float:
        return varphi * ladder.tail(x) + ladder.levy_density(x)

    if ladder.levy_density_deriv is not None:
        def pi_density(x: float) -> float:
            return varphi * ladder.levy_density(x) - ladder.levy_density_deriv(x)
    else:
        def pi_density(x: float) -> float:
            h = min(max(1e-7, 1e-7 * x), 0.45 * x)
            return (pi_tail(x - h) - pi_tail(x + h)) / (2.0 * h)

    a = _triple_location(pi_tail, pi_density, sigma, kappa, varphi)
    triple = LevyTriple(a=a, sigma=sigma, pi_tail=pi_tail, pi_density=pi_density)
    psi = LaplaceExponent(eval=psi_eval, deriv=psi_deriv, domain_edge=ladder.domain_edge,
                          descriptor="parent", drift_at_zero=drift0)
    return triple, psi


def _triple_location(pi_tail, pi_density, sigma, kappa, varphi) -> float:
    """The location parameter a of the Levy-Khintchine form (truncation at 1)."""
    # int_{(-inf,-1)} x Pi(dx) = -int_1^inf u pi(u) du = -(Pi(-inf,-1) + int_1^inf pi_tail)
    # by parts: int_1^inf u pi(u) du = pi_tail(1) + int_1^inf pi_tail(u) du
    tail_int, _ = quad(pi_tail, 1.0, np.inf, limit=200)
    m1 = -(pi_tail(1.0) + tail_int)
    if varphi == 0:
        return m1 - kappa
    # a*varphi = sigma^2 varphi^2/2 + int (exp(varphi x)-1-x varphi 1_{x>-1}) Pi(dx)
    def integrand(u: float) -> float:
        comp = math.exp(-varphi * u) - 1.0 + (varphi * u if u < 1.0 else 0.0)
        return comp * pi_density(u)

    j1, _ = quad(integrand, 0.0, 1.0, limit=200)
    j2, _ = quad(integrand, 1.0, np.inf, limit=200)
    return (0.5 * sigma ** 2 * varphi ** 2 + j1 + j2) / varphi


def classify_variation(ladder: LadderParams, varphi: float = 0.0) -> VariationReport:
    """Path variation of the parent process, with the compound Poisson
    decomposition report when the ladder jump mass is finite."""
    zeta = ladder.drift
    mass = ladder.activity_mass
    if mass is None:
        # probe the tail near zero
        probes = [ladder.tail(x) for x in (1e-3, 1e-5, 1e-7)]
        growing = probes[2] > probes[1] * (1 + 1e-6) and probes[1] > probes[0] * (1 + 1e-6)
        mass = math.inf if growing else probes[2]
    if math.isinf(mass) or zeta > 0:
        return VariationReport(variation=PathVariation.UNBOUNDED,
                               gaussian=math.sqrt(2.0 * zeta),
                               activity_mass=None if math.isinf(mass) else mass)
    drift = ladder.kill_rate + mass - zeta * varphi

    def nu_tail(x: float) -> float:
        return varphi * ladder.tail(x) + ladder.levy_density(x)

    return VariationReport(variation=PathVariation.BOUNDED,
                           gaussian=math.sqrt(2.0 * zeta),
                           drift=drift, activity_mass=mass,
                           subordinator_tail=nu_tail)


# ---------------------------------------------------------------------------
# Levy-Khintchine quadrature (consistency oracle for built triples)
# ---------------------------------------------------------------------------

def levy_khintchine_exponent(triple: LevyTriple, theta: float) -> float:
    """psi(theta) recomputed from the triple by quadrature of the jump integral.

    Splits at |x| = 1 and compensates the integrand near zero, matching the
    truncation convention of the Levy-Khintchine form used throughout.
    """
    if triple.pi_density is None:
        raise ParameterError("levy_khintchine_exponent needs a jump density")

    def near(u: float) -> float:
        # exp(-theta u) - 1 + theta u, compensated part for u in (0, 1)
        tu = theta * u
        comp = math.expm1(-tu) + tu
        return comp * triple.pi_density(u)

    def far(u: float) -> float:
        return (math.exp(-theta * u) - 1.0) * triple.pi_density(u)

    j1, _ = quad(near, 0.0, 1.0, limit=400, epsabs=1e-13, epsrel=1e-11)
    j2, _ = quad(far, 1.0, np.inf, limit=400, epsabs=1e-13, epsrel=1e-11)
    return -triple.a * theta + 0.5 * triple.sigma ** 2 * theta ** 2 + j1 + j2
