"""Polynomial machinery for the rational-stability scale formula.

Builds f_q(z) = (z^n - gamma - varphi) * B(z) - q z^{m_-} with

    B(z) = (kappa - zeta*gamma + c*Gamma(-alpha)*gamma^alpha) z^{m_-}
           + zeta z^{n+m_-} - c*Gamma(-alpha) z^{m_+},

finds its roots with multiplicities (companion matrix + multiplicity-aware
Newton polishing in extended precision) and produces the partial fraction
decomposition of z^{m_-} / f_q(z).

The bracket constant carries -zeta*gamma: that is what the defining identity
f_q(z) = z^{m_-} (psi(z^n - gamma) - q) requires, and the identity is checked
at sampled points for every build.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import special as sps

from .errors import ConditioningError, NumericalError, ParameterError

__all__ = [
    "RationalAlpha",
    "PartialFraction",
    "build_fq",
    "roots_with_multiplicity",
    "partial_fractions",
]

_CLUSTER_TOL = 1e-6     # cluster radius factor: tol = _CLUSTER_TOL * (1 + |r|)
_REAL_SNAP = 1e-7       # |Im r| below this * (1+|r|) counts as real


@dataclass(frozen=True)
class RationalAlpha:
    """Stability parameter alpha = m/n in (-1, 1) \\ {0} in lowest terms."""

    m: int
    n: int

    def __post_init__(self):
        if self.n <= 0:
            raise ParameterError("denominator n must be positive")
        if not 0 < abs(self.m) < self.n:
            raise ParameterError("rational stability requires 0 < |m| < n")
        if math.gcd(abs(self.m), self.n) != 1:
            raise ParameterError("m/n must be in lowest terms")

    @classmethod
    def from_value(cls, alpha) -> "RationalAlpha":
        frac = Fraction(alpha) if not isinstance(alpha, Fraction) else alpha
        return cls(frac.numerator, frac.denominator)

    @property
    def value(self) -> float:
        return self.m / self.n

    @property
    def m_plus(self) -> int:
        return max(self.m, 0)

    @property
    def m_minus(self) -> int:
        return max(-self.m, 0)


@dataclass(frozen=True)
class PartialFraction:
    """Decomposition z^{m_-}/f_q(z) = sum_k sum_j A_kj / (z - r_k)^{j+1}.

    The largest real root is listed first (index 0).
    """

    roots: tuple
    multiplicities: tuple
    coeffs: tuple            # coeffs[k][j] = A_kj, j = 0..mult_k-1
    poly: tuple              # ascending coefficients of f_q
    m_minus: int
    largest_real_root_index: int = 0

    def reconstruct(self, z: complex) -> complex:
        out = 0.0j
        for r, mu, row in zip(self.roots, self.multiplicities, self.coeffs):
            d = z - r
            for j in range(mu):
                out += row[j] / d ** (j + 1)
        return out


# ---------------------------------------------------------------------------
# polynomial construction
# ---------------------------------------------------------------------------

def build_fq(params, alpha: RationalAlpha, q: float) -> np.ndarray:
    """Ascending coefficient array of f_q(z) for a GTSC parameter set."""
    if q < 0:
        raise ParameterError("q must be nonnegative")
    if abs(params.alpha - alpha.value) > 1e-12:
        raise ParameterError("params.alpha does not match the rational m/n")
    n, m_minus, m_plus = alpha.n, alpha.m_minus, alpha.m_plus
    gamma, c, zeta = params.gamma, params.c, params.zeta
    kappa, varphi = params.kappa, params.varphi
    cg = c * sps.gamma(-alpha.value)

    bracket = np.zeros(n + m_minus + 1)
    bracket[m_minus] += kappa - zeta * gamma + cg * gamma ** alpha.value
    if zeta != 0.0:
        bracket[n + m_minus] += zeta
    bracket[m_plus] += -cg

    lead = np.zeros(n + 1)
    lead[0] = -(gamma + varphi)
    lead[n] = 1.0

    fq = npoly.polymul(lead, np.trim_zeros(bracket, "b"))
    fq = npoly.polysub(fq, [0.0] * m_minus + [q])
    fq = np.asarray(np.trim_zeros(fq, "b"), dtype=float)

    # the defining identity pins the construction down
    psi = _psi_from_params(params)
    for z in (0.57, 1.31, 2.03):
        lhs = npoly.polyval(z, fq)
        rhs = z ** m_minus * (psi(z ** n - gamma) - q)
        if abs(lhs - rhs) > 1e-9 * (1.0 + abs(rhs)):
            raise NumericalError("f_q identity check failed; inconsistent parameters")
    return fq


def _psi_from_params(params):
    gamma, c, zeta = params.gamma, params.c, params.zeta
    kappa, varphi, alpha = params.kappa, params.varphi, params.alpha
    ga = sps.gamma(-alpha)

    def psi(theta):
        phi_l = kappa + zeta * theta + c * ga * (gamma ** alpha - (gamma + theta) ** alpha)
        return (theta - varphi) * phi_l

    return psi


# ---------------------------------------------------------------------------
# roots with multiplicities
# ---------------------------------------------------------------------------

def roots_with_multiplicity(poly, cluster_tol: float = _CLUSTER_TOL) -> tuple[np.ndarray, np.ndarray]:
    """All roots of the polynomial, clustered into multiple roots.

    Returns (roots, multiplicities) with the largest real root first.  The
    guaranteed real root must exist; its absence signals invalid parameters.
    Companion-matrix eigenvalue splitting of an exact m-fold root grows like
    eps^(1/m), so the clustering radius is widened automatically until every
    reported root passes its residual bound.
    """
    coeffs = np.asarray(np.trim_zeros(np.asarray(poly, dtype=complex), "b"))
    if coeffs.size < 2:
        raise ParameterError("polynomial degree must be at least 1")
    raw = npoly.polyroots(coeffs)
    raw = _newton_sweep(coeffs, raw)

    last_err: NumericalError | None = None
    for tol in (cluster_tol, 1e-5, 3e-5, 3e-4, 1e-3):
        if tol < cluster_tol:
            continue
        try:
            return _cluster_and_validate(coeffs, raw, tol)
        except NumericalError as exc:
            last_err = exc
    raise last_err


def _newton_sweep(coeffs: np.ndarray, roots: np.ndarray) -> np.ndarray:
    """Vectorized plain-Newton refinement of all raw roots (double precision).

    Updates are only accepted while |f| decreases; near a multiple root the
    iteration stagnates at the noise floor instead of being kicked away.
    """
    der = npoly.polyder(coeffs)
    z = roots.astype(complex)
    fz = np.abs(npoly.polyval(z, coeffs))
    for _ in range(50):
        fp = npoly.polyval(z, der)
        fp = np.where(fp == 0, 1.0, fp)
        step = npoly.polyval(z, coeffs) / fp
        znew = z - step
        fnew = np.abs(npoly.polyval(znew, coeffs))
        improve = fnew <= fz
        z = np.where(improve, znew, z)
        fz = np.where(improve, fnew, fz)
        if np.all(np.abs(step) < 1e-15 * (1.0 + np.abs(z))):
            break
    return z


def _cluster_and_validate(coeffs: np.ndarray, raw: np.ndarray, tol: float):
    # single-linkage clustering at radius tol*(1+|r|)
    pts = list(raw)
    assigned = [-1] * len(pts)
    nclust = 0
    for i in range(len(pts)):
        if assigned[i] >= 0:
            continue
        assigned[i] = nclust
        stack = [i]
        while stack:
            a = stack.pop()
            for b in range(len(pts)):
                if assigned[b] < 0 and abs(pts[a] - pts[b]) <= tol * (1.0 + abs(pts[a])):
                    assigned[b] = nclust
                    stack.append(b)
        nclust += 1

    roots, mults = [], []
    for c in range(nclust):
        members = [pts[i] for i in range(len(pts)) if assigned[i] == c]
        mu = len(members)
        center = sum(members) / mu
        center = _polish_center(coeffs, center, mu)
        if abs(center.imag) <= _REAL_SNAP * (1.0 + abs(center)):
            center = complex(center.real, 0.0)
        roots.append(center)
        mults.append(mu)

    roots, mults = _enforce_conjugacy(roots, mults)

    der = npoly.polyder(coeffs)
    abs_c = np.abs(coeffs)
    abs_d = np.abs(der)
    for r, mu in zip(roots, mults):
        res = abs(npoly.polyval(r, coeffs))
        # scale against the local evaluation magnitude S(r) = sum |c_k| |r|^k;
        # an m-fold pseudo-root carries residual ~ (cluster radius)^m
        scale = float(npoly.polyval(abs(r), abs_c)) + 1e-300
        bound = max(1e-8, (3.0 * _CLUSTER_TOL) ** mu) * scale
        if res > bound:
            raise NumericalError(
                f"root residual {res:.3g} exceeds tolerance at {r:.6g} (multiplicity {mu})")
        if mu == 1:
            # |f'(r)| = |lead| prod |r - r_j|: far below its evaluation scale
            # means an unresolved multiple hides at r
            dscale = float(npoly.polyval(abs(r), abs_d)) + 1e-300
            if abs(npoly.polyval(r, der)) < 1e-7 * dscale:
                raise NumericalError(
                    f"simple-root classification inconsistent at {r:.6g} (nearly multiple)")
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) < 1e-5 * (1.0 + abs(roots[i])):
                raise NumericalError("distinct reported roots are closer than the "
                                     "classification can support")

    real_idx = [i for i, r in enumerate(roots) if r.imag == 0.0]
    if not real_idx:
        raise NumericalError("no real root found; invalid parameters or numerical failure")
    i1 = max(real_idx, key=lambda i: roots[i].real)
    r1 = roots[i1].real

    for i, r in enumerate(roots):
        if r.imag != 0.0 and abs(r.real) >= r1 * (1.0 + 1e-9) + 1e-12:
            warnings.warn(
                "non-real root with |Re| >= largest real root detected; "
                "the largest-real-root identification may be ambiguous",
                stacklevel=3)

    order = [i1] + sorted((i for i in range(len(roots)) if i != i1),
                          key=lambda i: (-roots[i].real, -abs(roots[i].imag), roots[i].imag))
    return (np.array([roots[i] for i in order]),
            np.array([mults[i] for i in order], dtype=int))


def _polish_center(coeffs: np.ndarray, z0: complex, mu: int) -> complex:
    """Refine a cluster center as a root of the (mu-1)-th derivative.

    For an exact m-fold root of f that derivative has a simple root there, so
    plain Newton converges quadratically; for a rounding-split cluster it
    lands on the center that minimizes the reconstruction error.
    """
    work = coeffs
    for _ in range(mu - 1):
        work = npoly.polyder(work)
    cs = [mp.mpc(c) for c in work]
    dcs = [mp.mpc(c) for c in npoly.polyder(work)]
    with mp.workdps(50):
        z = mp.mpc(z0)
        for _ in range(40):
            fp = mp.polyval(dcs[::-1], z)
            if fp == 0:
                break
            step = mp.polyval(cs[::-1], z) / fp
            z -= step
            if abs(step) < mp.mpf("1e-35") * (1 + abs(z)):
                break
        return complex(z)


def _enforce_conjugacy(roots, mults):
    """Pair complex roots into exact conjugates (real-coefficient polynomials)."""
    out_r, out_m = [], []
    used = [False] * len(roots)
    for i, r in enumerate(roots):
        if used[i]:
            continue
        if r.imag == 0.0:
            out_r.append(r)
            out_m.append(mults[i])
            used[i] = True
            continue
        best, best_d = None, np.inf
        for j in range(len(roots)):
            if j == i or used[j] or roots[j].imag == 0.0:
                continue
            d = abs(roots[j] - r.conjugate())
            if d < best_d:
                best, best_d = j, d
        if best is not None and best_d <= 1e-6 * (1.0 + abs(r)) and mults[best] == mults[i]:
            avg = 0.5 * (r + roots[best].conjugate())
            out_r.extend([avg, avg.conjugate()])
            out_m.extend([mults[i], mults[i]])
            used[i] = used[best] = True
        else:
            out_r.append(r)
            out_m.append(mults[i])
            used[i] = True
    return out_r, out_m


# ---------------------------------------------------------------------------
# partial fractions
# ---------------------------------------------------------------------------

def partial_fractions(poly, m_minus: int, roots=None, mults=None) -> PartialFraction:
    """Partial fraction decomposition of z^{m_-} / f_q(z).

    Simple roots use A_k0 = r^{m_-}/f_q'(r); clusters are resolved through
    the local Taylor expansion of z^{m_-}/(f_q(z)/(z-r)^mu), a triangular
    solve on the cluster.  A reconstruction check at 32 sample points guards
    against misclassified clusters.
    """
    coeffs = np.asarray(np.trim_zeros(np.asarray(poly, dtype=complex), "b"))
    if roots is None or mults is None:
        err: ConditioningError | None = None
        for tol in (_CLUSTER_TOL, 10 * _CLUSTER_TOL, 100 * _CLUSTER_TOL):
            roots, mults = roots_with_multiplicity(coeffs, cluster_tol=tol)
            try:
                return partial_fractions(coeffs, m_minus, roots=roots, mults=mults)
            except ConditioningError as exc:
                err = exc
        raise err
    der = npoly.polyder(coeffs)

    rows = []
    for r, mu in zip(roots, mults):
        if mu == 1:
            rows.append((r ** m_minus / npoly.polyval(r, der),))
            continue
        # deflate the cluster and expand locally
        h = coeffs.copy()
        for _ in range(mu):
            h = _synthetic_division(h, r)
        order = int(mu)
        h_taylor = _taylor_coeffs(h, r, order)
        num_taylor = np.array([_binom(m_minus, i) * r ** (m_minus - i) if i <= m_minus else 0.0
                               for i in range(order)], dtype=complex)
        inv_h = _series_reciprocal(h_taylor, order)
        c = _series_product(num_taylor, inv_h, order)
        rows.append(tuple(c[mu - 1 - j] for j in range(mu)))

    pf = PartialFraction(roots=tuple(roots), multiplicities=tuple(int(m) for m in mults),
                         coeffs=tuple(rows), poly=tuple(float(c.real) for c in coeffs),
                         m_minus=int(m_minus))

    rng = np.random.default_rng(20,)
    radius = 1.0 + 2.0 * max(abs(r) for r in roots)
    angles = rng.uniform(0.0, 2.0 * math.pi, 32)
    for ang in angles:
        z = radius * np.exp(1j * ang)
        direct = z ** m_minus / npoly.polyval(z, coeffs)
        rec = 0.0j
        mag = 0.0
        for r, mu, row in zip(pf.roots, pf.multiplicities, pf.coeffs):
            d = z - r
            for j in range(mu):
                term = row[j] / d ** (j + 1)
                rec += term
                mag += abs(term)
        # near-degenerate clusters carry large, cancelling coefficients; the
        # representable accuracy is then limited by eps * sum |terms|
        tol = 1e-9 * (1.0 + abs(direct)) + 2e-13 * mag
        if abs(rec - direct) > tol:
            raise ConditioningError(
                "partial fraction reconstruction failed; a root cluster may be "
                "misclassified -- consider loosening the clustering tolerance")
    return pf


def _divide_once(coeffs: np.ndarray, r: complex):
    """(remainder, quotient) of division by (z - r); ascending coefficients."""
    d = coeffs.size - 1
    q = np.zeros(max(d, 0), dtype=complex)
    if d >= 1:
        q[d - 1] = coeffs[d]
        for k in range(d - 1, 0, -1):
            q[k - 1] = coeffs[k] + r * q[k]
        rem = coeffs[0] + r * q[0]
    else:
        rem = coeffs[0]
    return rem, q


def _synthetic_division(coeffs: np.ndarray, r: complex) -> np.ndarray:
    """Quotient by (z - r), discarding the (near-zero) remainder."""
    _, q = _divide_once(np.asarray(coeffs, dtype=complex), r)
    return q


def _taylor_coeffs(coeffs: np.ndarray, r: complex, order: int) -> np.ndarray:
    """First ``order`` Taylor coefficients of the polynomial at z = r."""
    work = np.asarray(coeffs, dtype=complex).copy()
    out = np.zeros(order, dtype=complex)
    for i in range(order):
        rem, work = _divide_once(work, r)
        out[i] = rem
        if work.size == 0:
            break
    return out


def _series_reciprocal(u: np.ndarray, order: int) -> np.ndarray:
    if u[0] == 0:
        raise ConditioningError("deflated polynomial vanishes at the cluster center")
    out = np.zeros(order, dtype=complex)
    out[0] = 1.0 / u[0]
    for i in range(1, order):
        acc = 0.0j
        for j in range(1, min(i, u.size - 1) + 1):
            acc += u[j] * out[i - j]
        out[i] = -acc / u[0]
    return out


def _series_product(u: np.ndarray, v: np.ndarray, order: int) -> np.ndarray:
    out = np.zeros(order, dtype=complex)
    for i in range(order):
        for j in range(order - i):
            if i < u.size and j < v.size:
                out[i + j] += u[i] * v[j]
    return out


def _binom(nn: int, kk: int) -> float:
    return float(math.comb(nn, kk)) if 0 <= kk <= nn else 0.0
