"""Special functions and adaptive quadrature primitives.

Everything downstream (mixing coefficients, densities, moment checks) is
built on the routines here: log-space Gamma/Beta/Pochhammer helpers, the
Macdonald function K_nu, the confluent hypergeometric function of the
second kind, and two adaptive integrators (finite interval and half line).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import mpmath
from scipy import special as _sp
from scipy.integrate import quad as _quad

from .errors import QuadratureError

__all__ = [
    "QuadratureConfig",
    "DEFAULT_QUADRATURE",
    "log_gamma",
    "log_beta",
    "log_pochhammer",
    "macdonald_k",
    "kummer_psi",
    "integrate_finite",
    "integrate_semi_infinite",
]


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and subdivision budget for the adaptive integrators."""

    rel_tol: float = 1e-12
    abs_tol: float = 1e-15
    max_subdivisions: int = 200

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.abs_tol < 0:
            raise ValueError(f"abs_tol must be nonnegative, got {self.abs_tol}")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")


DEFAULT_QUADRATURE = QuadratureConfig()


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return float(_sp.gammaln(x))


def log_beta(a: float, b: float) -> float:
    """ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a+b) for a, b > 0."""
    if not (a > 0 and b > 0):
        raise ValueError(f"log_beta requires positive arguments, got ({a}, {b})")
    return float(_sp.betaln(a, b))


def log_pochhammer(a: float, n: int) -> float:
    """ln (a)_n = ln Gamma(a+n) - ln Gamma(a) for a > 0 and integer n >= 0."""
    if not a > 0:
        raise ValueError(f"log_pochhammer requires a > 0, got {a}")
    if n < 0 or n != int(n):
        raise ValueError(f"log_pochhammer requires integer n >= 0, got {n}")
    if n == 0:
        return 0.0
    return float(_sp.gammaln(a + n) - _sp.gammaln(a))


def macdonald_k(nu: float, u: float) -> float:
    """Modified Bessel function of the second kind K_nu(u), u > 0.

    Symmetric in nu -> -nu.  Intended for |nu| <= 50; may overflow to inf
    for very small u at large |nu|.
    """
    if not u > 0:
        raise ValueError(f"macdonald_k requires u > 0, got {u}")
    return float(_sp.kv(nu, u))


def kummer_psi(alpha: float, beta: float, z: float) -> float:
    """Confluent hypergeometric function of the second kind Psi(alpha, beta; z).

    Equals (1/Gamma(alpha)) * int_0^inf exp(-z t) t^(alpha-1) (1+t)^(beta-alpha-1) dt
    for alpha > 0, z > 0.  Evaluated through arbitrary-precision arithmetic;
    a single call costs on the order of a millisecond, so batch callers
    should cache results.
    """
    if not alpha > 0:
        raise ValueError(f"kummer_psi requires alpha > 0, got {alpha}")
    if not z > 0:
        raise ValueError(f"kummer_psi requires z > 0, got {z}")
    with mpmath.workdps(30):
        return float(mpmath.hyperu(alpha, beta, z))


def _run_quad(f, lo, hi, cfg, points):
    res = _quad(
        f,
        lo,
        hi,
        epsabs=cfg.abs_tol,
        epsrel=cfg.rel_tol,
        limit=cfg.max_subdivisions,
        points=points,
        full_output=1,
    )
    value, err_est = res[0], res[1]
    converged = len(res) == 3
    if not converged:
        # QUADPACK flagged trouble (subdivision cap, roundoff, ...).  Accept
        # the estimate when it is still within two orders of magnitude of the
        # requested tolerance, otherwise raise with the best estimate attached.
        tol = max(cfg.abs_tol, cfg.rel_tol * abs(value))
        if not err_est <= 100.0 * tol:
            raise QuadratureError(
                f"quadrature did not converge: err_est={err_est:.3e}, value={value:.6e}",
                value=value,
                err_est=err_est,
            )
    return value, err_est


def integrate_finite(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    points: Sequence[float] | None = None,
) -> tuple[float, float]:
    """Adaptive integral of f over [lo, hi]; returns (value, err_est).

    Endpoint singularities of integrable power type are handled by the
    underlying Gauss-Kronrod subdivision.  ``points`` marks interior
    locations (sharp peaks) the subdivision should resolve.
    """
    if points is not None:
        pts = sorted(p for p in points if lo < p < hi)
        points = pts or None
    return _run_quad(f, lo, hi, cfg, points)


def integrate_semi_infinite(
    f: Callable[[float], float],
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    points: Sequence[float] | None = None,
    scale: float = 1.0,
) -> tuple[float, float]:
    """Adaptive integral of f over (0, inf); returns (value, err_est).

    Uses the substitution a = scale * u / (1 - u) onto (0, 1) followed by
    adaptive subdivision.  ``scale`` should sit near the integrand's mass
    (e.g. the location of an interior peak) so the transformed peak lands
    well inside the unit interval; ``points`` are peak locations in the
    original variable.
    """
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")

    def g(u):
        w = 1.0 - u
        a = scale * u / w
        return f(a) * scale / (w * w)

    upts = None
    if points is not None:
        upts = sorted(
            min(max(s / (1.0 + s), 1e-12), 1.0 - 1e-12)
            for p in points
            if p > 0
            for s in [p / scale]
        )
    return _run_quad(g, 0.0, 1.0, cfg, upts)
