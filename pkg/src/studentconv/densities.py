"""Component and series densities for the two sum decompositions.

All laws here are isotropic, so every density is exposed through its
radial profile.  The two series evaluators truncate adaptively with a
certified geometric bound on the discarded terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special as _sp

from .errors import TruncationError
from .mixing import (
    GaussStudentParams,
    StudentPairParams,
    alpha_supply,
    c_supply,
)
from .specfun import DEFAULT_QUADRATURE, QuadratureConfig, integrate_semi_infinite, macdonald_k

__all__ = [
    "RadialDensity",
    "TruncationPolicy",
    "ConvolutionSpec",
    "student_density",
    "g_component",
    "phi_component",
    "fz_density",
    "fy_density",
    "gauss_student_sum_density",
    "student_pair_sum_density",
    "student_cf",
    "subordination_check",
]

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class TruncationPolicy:
    """Series truncation control: relative tail tolerance and a term cap."""

    epsilon: float = 1e-10
    hard_cap: int = 100_000

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.hard_cap < 1:
            raise ValueError("hard_cap must be at least 1")


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class RadialDensity:
    """An isotropic density on R^d exposed through its radial profile.

    ``eval_radial`` maps a radius array (or scalar) to density values; the
    value at any point x is eval_radial(||x||).
    """

    dimension: int
    eval_radial: Callable[[np.ndarray], np.ndarray]
    kind: str

    def __call__(self, r):
        return self.eval_radial(r)

    def density_at(self, x) -> np.ndarray:
        """Density at points given as an (n, d) array (or a single vector)."""
        pts = np.atleast_2d(np.asarray(x, dtype=float))
        if pts.shape[1] != self.dimension:
            raise ValueError(f"points must have dimension {self.dimension}")
        return self.eval_radial(np.linalg.norm(pts, axis=1))


@dataclass(frozen=True)
class ConvolutionSpec:
    """Which sum law to evaluate: two Students, or Gaussian plus Student."""

    kind: str  # 'student-student' | 'gauss-student'
    d: int
    nu: float
    mu: float | None = None
    sigma: float | None = None
    a1: float = 1.0
    a2: float = 1.0

    @classmethod
    def student_pair(cls, d, nu, mu):
        return cls(kind="student-student", d=d, nu=nu, mu=mu)

    @classmethod
    def gauss_student(cls, d, nu, sigma=1.0, a1=1.0, a2=1.0):
        return cls(kind="gauss-student", d=d, nu=nu, sigma=sigma, a1=a1, a2=a2)

    def pair_params(self) -> StudentPairParams:
        if self.kind != "student-student":
            raise ValueError(f"spec is {self.kind}, not student-student")
        return StudentPairParams(d=self.d, nu=self.nu, mu=self.mu)

    def gauss_params(self) -> GaussStudentParams:
        if self.kind != "gauss-student":
            raise ValueError(f"spec is {self.kind}, not gauss-student")
        return GaussStudentParams(d=self.d, nu=self.nu, sigma=self.sigma)

    def digest(self) -> str:
        if self.kind == "student-student":
            return f"y:d={self.d}:nu={self.nu!r}:mu={self.mu!r}"
        return f"z:d={self.d}:nu={self.nu!r}:sigma={self.sigma!r}:a1={self.a1!r}:a2={self.a2!r}"


# ---------------------------------------------------------------------------
# component densities


def student_density(nu: float, d: int, r) -> np.ndarray | float:
    """Isotropic Student-t density with 2*nu degrees of freedom at radius r."""
    if not nu > 0:
        raise ValueError(f"nu must be positive, got {nu}")
    if d < 1 or d != int(d):
        raise ValueError(f"dimension must be a positive integer, got {d}")
    rr = np.asarray(r, dtype=float)
    if np.any(rr < 0):
        raise ValueError("radius must be nonnegative")
    logA = _sp.gammaln(nu + d / 2) - _sp.gammaln(nu) - (d / 2) * math.log(math.pi)
    out = np.exp(logA - (nu + d / 2) * np.log1p(rr * rr))
    return float(out) if np.isscalar(r) else out


def g_component(k: int, sigma: float, d: int, r) -> np.ndarray | float:
    """Squared-radius-tilted Gaussian component at radius r.

    g_{k,sigma}(r) = Gamma(d/2)/(Gamma(k+d/2) (sigma sqrt(2 pi))^d)
                     (r^2/(2 sigma^2))^k exp(-r^2/(2 sigma^2)).
    """
    if k < 0 or k != int(k):
        raise ValueError(f"k must be a nonnegative integer, got {k}")
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if d < 1 or d != int(d):
        raise ValueError(f"dimension must be a positive integer, got {d}")
    rr = np.asarray(r, dtype=float)
    if np.any(rr < 0):
        raise ValueError("radius must be nonnegative")
    x = rr * rr / (2.0 * sigma * sigma)
    logc = _sp.gammaln(d / 2) - _sp.gammaln(k + d / 2) - d * (math.log(sigma) + 0.5 * _LOG_2PI)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(
            x > 0,
            np.exp(logc + k * np.log(np.where(x > 0, x, 1.0)) - x),
            math.exp(logc) if k == 0 else 0.0,
        )
    return float(out) if np.isscalar(r) else out


def phi_component(n: int, eta: float, d: int, r) -> np.ndarray | float:
    """Squared-radius-tilted Student component at radius r.

    phi_{n,eta}(r) = Gamma(d/2)/(pi^(d/2) B(eta, n+d/2))
                     r^(2n) / (1+r^2)^(eta+n+d/2).
    """
    if n < 0 or n != int(n):
        raise ValueError(f"n must be a nonnegative integer, got {n}")
    if not eta > 0:
        raise ValueError(f"eta must be positive, got {eta}")
    if d < 1 or d != int(d):
        raise ValueError(f"dimension must be a positive integer, got {d}")
    rr = np.asarray(r, dtype=float)
    if np.any(rr < 0):
        raise ValueError("radius must be nonnegative")
    logc = (
        _sp.gammaln(d / 2)
        - (d / 2) * math.log(math.pi)
        - _sp.betaln(eta, n + d / 2)
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(
            rr > 0,
            np.exp(
                logc
                + 2 * n * np.log(np.where(rr > 0, rr, 1.0))
                - (eta + n + d / 2) * np.log1p(rr * rr)
            ),
            math.exp(logc) if n == 0 else 0.0,
        )
    return float(out) if np.isscalar(r) else out


# ---------------------------------------------------------------------------
# series evaluation
#
# Both series have positive terms whose index-to-index ratio is the product
# of a coefficient ratio (eventually < 1, past the mode of the mixing law)
# and a component ratio that decreases in the index.  Past both modes the
# remaining terms are dominated by a geometric series with the current
# component ratio, which gives the certified truncation bound.

_CONSEC = 8  # consecutive sub-unit coefficient ratios required before trusting the bound


def _certified_terms(coeffs, comp_ratio, start_floor, policy):
    """Smallest term count K with certified tail <= epsilon * max term.

    ``coeffs`` maps a count m to the first m coefficients; ``comp_ratio(j)``
    bounds every component ratio from index >= j.  Returns (K, values,
    zero_tail) where zero_tail marks a degenerate family whose remaining
    coefficients vanish identically.
    """
    n = max(int(start_floor) + _CONSEC + 2, _CONSEC + 2)
    while True:
        n = min(n, policy.hard_cap)
        vals = coeffs(n)
        # trailing exact zeros mean the mixing law is degenerate; everything
        # beyond is zero as well (coefficients are strictly positive otherwise)
        if len(vals) >= 2 and vals[-1] == 0.0 and vals[-2] == 0.0:
            nz = np.nonzero(vals)[0]
            k = int(nz[-1]) + 1 if nz.size else 1
            return k, vals[:k], True
        k = _scan_stop(vals, comp_ratio, start_floor)
        if k is not None:
            return k, vals[:k], False
        if n >= policy.hard_cap:
            raise TruncationError(
                f"series not certified within hard cap {policy.hard_cap}", terms_used=n
            )
        n = 2 * n


def _scan_stop(vals, comp_ratio, start_floor):
    ok = 0
    for j in range(1, len(vals)):
        ok = ok + 1 if vals[j] < vals[j - 1] else 0
        if j < start_floor or ok < _CONSEC:
            continue
        if comp_ratio(j + 1) < 1.0:
            return j + 1
    return None


def _series_profile(radii, coeff_supply, log_comp_const, log_comp_radial, comp_ratio_at, policy):
    """Evaluate sum_j coeff_j * comp_j(r) for each radius with certified tails.

    log_comp_const(j_array) is the radius-free part of log comp_j;
    log_comp_radial(j_array, r) the radius part; comp_ratio_at(j, r) an upper
    bound for all component ratios from index j at radius r.
    """
    radii = np.asarray(radii, dtype=float)
    if np.any(radii < 0):
        raise ValueError("radius must be nonnegative")
    out = np.zeros_like(radii)
    rmax = float(radii.max(initial=0.0))
    if rmax == 0.0:
        j0 = np.array([0])
        base = float(np.exp(log_comp_const(j0) + log_comp_radial(j0, 0.0))[0])
        out[:] = coeff_supply.values(1)[0] * base
        return out

    k, coeffs, zero_tail = _certified_terms(
        coeff_supply.values,
        lambda j: comp_ratio_at(j, rmax),
        start_floor=_ratio_floor(comp_ratio_at, rmax),
        policy=policy,
    )
    while True:
        jarr = np.arange(k)
        with np.errstate(divide="ignore"):
            logc = np.log(coeffs) + log_comp_const(jarr)
        pending = []
        for i, r in enumerate(radii):
            if r == 0.0:
                base = float(np.exp(log_comp_const(np.array([0])) + log_comp_radial(np.array([0]), 0.0))[0])
                out[i] = coeffs[0] * base
                continue
            lterms = logc + log_comp_radial(jarr, r)
            terms = np.exp(lterms)
            total = float(np.sum(terms))
            if not zero_tail:
                rho = comp_ratio_at(k, r)
                bound = terms[-1] * rho / (1.0 - rho) if rho < 1.0 else math.inf
                if not bound <= policy.epsilon * float(terms.max()) + 5e-324:
                    pending.append(i)
                    continue
            out[i] = total
        if not pending:
            return out
        # some radius needs more terms than rmax suggested (rare); extend
        if k >= policy.hard_cap:
            raise TruncationError(
                f"series not certified within hard cap {policy.hard_cap}", terms_used=k
            )
        k = min(max(k + 64, int(1.3 * k)), policy.hard_cap)
        coeffs = coeff_supply.values(k)


def _ratio_floor(comp_ratio_at, r):
    # first index where the component-ratio bound drops below 1
    lo, hi = 1, 2
    while comp_ratio_at(hi, r) >= 1.0 and hi < 10**8:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if comp_ratio_at(mid, r) < 1.0:
            hi = mid
        else:
            lo = mid + 1
    return lo


def gauss_student_sum_density(
    p: GaussStudentParams,
    a1: float = 1.0,
    a2: float = 1.0,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> RadialDensity:
    """Density of a1*X + a2*T as a lazily evaluated radial profile.

    Negative scale factors are reduced to positive ones by symmetry; the
    series runs with sigma' = |a1| sigma and gamma' = |a2/a1| gamma.
    """
    if a1 == 0.0:
        raise ValueError("a1 must be nonzero")
    a1, a2 = abs(a1), abs(a2)
    sigma_eff = a1 * p.sigma
    gamma_eff = (a2 / a1) * p.gamma
    p_eff = GaussStudentParams(d=p.d, nu=p.nu, gamma=gamma_eff)
    supply = alpha_supply(p_eff)
    d = p.d
    log_norm = _sp.gammaln(d / 2) - d * (math.log(sigma_eff) + 0.5 * _LOG_2PI)

    def log_comp_const(jarr):
        return log_norm - _sp.gammaln(jarr + d / 2)

    def log_comp_radial(jarr, r):
        x = r * r / (2.0 * sigma_eff * sigma_eff)
        if x == 0.0:
            return np.where(jarr == 0, 0.0, -np.inf)
        return jarr * math.log(x) - x

    def comp_ratio_at(j, r):
        x = r * r / (2.0 * sigma_eff * sigma_eff)
        return x / (j + d / 2)

    def eval_radial(r):
        scalar = np.isscalar(r)
        vals = _series_profile(
            np.atleast_1d(r), supply, log_comp_const, log_comp_radial, comp_ratio_at, policy
        )
        return float(vals[0]) if scalar else vals

    return RadialDensity(dimension=d, eval_radial=eval_radial, kind="gauss-student-sum")


def student_pair_sum_density(
    p: StudentPairParams, policy: TruncationPolicy = DEFAULT_POLICY
) -> RadialDensity:
    """Density of T1 + T2 as a lazily evaluated radial profile."""
    supply = c_supply(p)
    d, eta = p.d, p.eta
    log_norm = _sp.gammaln(d / 2) - (d / 2) * math.log(math.pi)

    def log_comp_const(jarr):
        return log_norm - _sp.betaln(eta, jarr + d / 2)

    def log_comp_radial(jarr, r):
        if r == 0.0:
            return np.where(jarr == 0, 0.0, -np.inf)
        return 2 * jarr * math.log(r) - (eta + jarr + d / 2) * math.log1p(r * r)

    def comp_ratio_at(j, r):
        q = r * r / (1.0 + r * r)
        return q * (j + eta + d / 2) / (j + d / 2)

    def eval_radial(r):
        scalar = np.isscalar(r)
        vals = _series_profile(
            np.atleast_1d(r), supply, log_comp_const, log_comp_radial, comp_ratio_at, policy
        )
        return float(vals[0]) if scalar else vals

    return RadialDensity(dimension=d, eval_radial=eval_radial, kind="student-student-sum")


def fz_density(
    p: GaussStudentParams,
    a1: float = 1.0,
    a2: float = 1.0,
    r: float = 0.0,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> float:
    """Density of a1*X + a2*T at radius r (scalar convenience wrapper)."""
    return float(gauss_student_sum_density(p, a1, a2, policy).eval_radial(float(r)))


def fy_density(
    p: StudentPairParams, r: float = 0.0, policy: TruncationPolicy = DEFAULT_POLICY
) -> float:
    """Density of T1 + T2 at radius r (scalar convenience wrapper)."""
    return float(student_pair_sum_density(p, policy).eval_radial(float(r)))


# ---------------------------------------------------------------------------
# characteristic function and subordination


def student_cf(nu: float, u) -> np.ndarray | float:
    """Characteristic function of the 1-d Student-t law with 2*nu df.

    k_nu(u) = 2^(1-nu)/Gamma(nu) * u^nu K_nu(u) for u > 0, with the
    removable singularity k_nu(0) = 1 filled in exactly.
    """
    if not nu > 0:
        raise ValueError(f"nu must be positive, got {nu}")
    uu = np.asarray(u, dtype=float)
    if np.any(uu < 0):
        raise ValueError("u must be nonnegative")
    logpre = (1.0 - nu) * math.log(2.0) - _sp.gammaln(nu)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.where(
            uu > 0,
            np.exp(logpre + nu * np.log(np.where(uu > 0, uu, 1.0)))
            * _sp.kv(nu, np.where(uu > 0, uu, 1.0)),
            1.0,
        )
    return float(vals) if np.isscalar(u) else vals


def subordination_check(
    nu: float, d: int, r: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """Residual of the Gaussian scale-mixture identity for the Student density.

    Integrates the heat kernel against the inverse-Gamma mixing measure
    (shape nu, scale 1/4) and returns the absolute deviation from
    student_density(nu, d, r); expected at quadrature-noise level.
    """
    if not nu > 0:
        raise ValueError(f"nu must be positive, got {nu}")
    if d < 1 or d != int(d):
        raise ValueError(f"dimension must be a positive integer, got {d}")
    if r < 0:
        raise ValueError("radius must be nonnegative")
    logc = -2.0 * nu * math.log(2.0) - _sp.gammaln(nu) - (d / 2) * math.log(4.0 * math.pi)

    def f(t):
        if t <= 0.0:
            return 0.0
        return math.exp(logc - (d / 2) * math.log(t) - (r * r + 1.0) / (4.0 * t) - (nu + 1.0) * math.log(t))

    tstar = (r * r + 1.0) / (4.0 * (nu + d / 2 + 1.0))
    value, _ = integrate_semi_infinite(f, cfg, points=[tstar], scale=max(tstar, 1e-6))
    return abs(value - student_density(nu, d, r))
