"""Discrete mixing distributions for the two sum decompositions.

The weights {alpha_k} mix squared-radius-tilted Gaussians into the density
of a Gaussian plus a Student-t vector; the weights {c_n} mix tilted
Student components into the density of two Student-t vectors.  Both are
probability mass functions of compound negative binomial laws, which this
module exploits for exact tail masses and tail moments.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np
from scipy import special as _sp

from .errors import MomentUndefinedError, TruncationError
from .specfun import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    integrate_finite,
    integrate_semi_infinite,
)

__all__ = [
    "GaussStudentParams",
    "StudentPairParams",
    "CoefficientSequence",
    "alpha_coeff",
    "alpha_sequence",
    "c_coeff",
    "c_sequence",
    "k_mean",
    "k_variance",
    "k_moments",
    "n_mean",
    "n_variance",
    "n_moments",
    "alpha_nb_limit",
    "complete_monotonicity_defect",
    "tau_coeff",
    "alpha_tail_mass",
    "c_tail_mass",
    "alpha_tail_moment",
    "c_tail_moment",
]

SEQUENCE_HARD_CAP = 100_000


@dataclass(frozen=True)
class GaussStudentParams:
    """Parameters of Z = X + T: Gaussian scale sigma and Student half-df nu.

    The Student vector T has 2*nu degrees of freedom.  Exactly one of
    ``sigma``/``gamma`` may be given; the other is derived through
    gamma = 1/(sigma*sqrt(2)).  gamma = 0 is accepted as the degenerate
    pure-Gaussian limit (sigma = inf).
    """

    d: int
    nu: float
    sigma: float | None = None
    gamma: float | None = None

    def __post_init__(self):
        if self.d < 1 or self.d != int(self.d):
            raise ValueError(f"dimension must be a positive integer, got {self.d}")
        if not self.nu > 0:
            raise ValueError(f"nu must be positive, got {self.nu}")
        if self.sigma is None and self.gamma is None:
            object.__setattr__(self, "sigma", 1.0)
        if self.sigma is not None and self.gamma is not None:
            if not math.isclose(self.gamma * self.sigma * math.sqrt(2.0), 1.0, rel_tol=1e-12):
                raise ValueError("sigma and gamma are inconsistent; supply only one")
        elif self.sigma is not None:
            if not self.sigma > 0:
                raise ValueError(f"sigma must be positive, got {self.sigma}")
            object.__setattr__(self, "gamma", 1.0 / (self.sigma * math.sqrt(2.0)))
        else:
            if self.gamma < 0:
                raise ValueError(f"gamma must be nonnegative, got {self.gamma}")
            sigma = math.inf if self.gamma == 0 else 1.0 / (self.gamma * math.sqrt(2.0))
            object.__setattr__(self, "sigma", sigma)

    def digest(self) -> str:
        return f"alpha:d={self.d}:nu={self.nu!r}:gamma={self.gamma!r}"


@dataclass(frozen=True)
class StudentPairParams:
    """Parameters of Y = T1 + T2 with half-dfs nu and mu (2*nu, 2*mu df)."""

    d: int
    nu: float
    mu: float
    eta: float = field(init=False)

    def __post_init__(self):
        if self.d < 1 or self.d != int(self.d):
            raise ValueError(f"dimension must be a positive integer, got {self.d}")
        if not (self.nu > 0 and self.mu > 0):
            raise ValueError(f"nu and mu must be positive, got ({self.nu}, {self.mu})")
        object.__setattr__(self, "eta", self.nu + self.mu)

    def digest(self) -> str:
        return f"c:d={self.d}:nu={self.nu!r}:mu={self.mu!r}"


@dataclass(frozen=True)
class CoefficientSequence:
    """A truncated mixing sequence with certified tail mass.

    ``values`` holds the leading coefficients, ``cumulative_mass`` their
    compensated sum and ``tail_bound`` an upper bound on the discarded
    mass (exact compound-law tail integral plus the accumulated
    quadrature error budget).
    """

    values: np.ndarray
    cumulative_mass: float
    tail_bound: float
    params_digest: str

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        if np.any(arr < 0):
            raise ValueError("coefficient values must be nonnegative")
        if self.cumulative_mass > 1.0 + 1e-12:
            raise ValueError(f"cumulative mass {self.cumulative_mass} exceeds 1")
        if self.tail_bound < 1.0 - self.cumulative_mass - 1e-12:
            raise ValueError("tail_bound is smaller than the missing mass")

    def __len__(self):
        return len(self.values)


# ---------------------------------------------------------------------------
# pointwise coefficients


def _alpha_coeff_err(p: GaussStudentParams, k: int, cfg: QuadratureConfig):
    """alpha_k with the quadrature error estimate."""
    if k < 0 or k != int(k):
        raise ValueError(f"k must be a nonnegative integer, got {k}")
    gam = p.gamma
    if gam == 0.0:
        return (1.0 if k == 0 else 0.0), 0.0
    g2 = gam * gam
    d = p.d
    logpre = (
        _sp.gammaln(k + d / 2)
        - _sp.gammaln(k + 1)
        - _sp.gammaln(d / 2)
        - _sp.gammaln(p.nu)
        + 2 * k * math.log(gam)
    )
    a_exp = p.nu + d / 2 - 1.0  # power of a
    q_exp = k + d / 2  # power of (a + gamma^2)

    def log_integrand(a):
        return logpre - a + a_exp * math.log(a) - q_exp * math.log(a + g2)

    def f(a):
        if a <= 0.0:
            return 0.0
        return math.exp(log_integrand(a))

    # Interior peak of the log-integrand solves a^2 + (g2 - a_exp + q_exp) a
    # - a_exp*g2 = 0; for large nu or large k the peak is sharp, so the
    # half-line substitution is rescaled to put it at u = 1/2.
    points = None
    scale = 1.0
    if a_exp > 0:
        b = g2 - a_exp + q_exp
        astar = 0.5 * (-b + math.sqrt(b * b + 4.0 * a_exp * g2))
        if astar > 0:
            scale = astar
            curv = -a_exp / astar**2 + q_exp / (astar + g2) ** 2
            width = astar if curv == 0 else 1.0 / math.sqrt(abs(curv))
            points = [astar + m * width for m in (-30, -10, -3, -1, 1, 3, 10, 30)]
            points = [pt for pt in points if pt > 0] + [astar]
    else:
        scale = min(1.0, g2 + a_exp + 1.0) or 1.0
    return integrate_semi_infinite(f, cfg, points=points, scale=scale)


def alpha_coeff(p: GaussStudentParams, k: int, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Mixing weight alpha_k for the Gaussian-plus-Student sum."""
    return _alpha_coeff_err(p, k, cfg)[0]


def _c_coeff_err(p: StudentPairParams, n: int, cfg: QuadratureConfig):
    """c_n with the quadrature error estimate."""
    if n < 0 or n != int(n):
        raise ValueError(f"n must be a nonnegative integer, got {n}")
    d = p.d
    logpre = (
        -_sp.betaln(p.nu, p.mu)
        + _sp.gammaln(d / 2 + n)
        - _sp.gammaln(d / 2)
        - _sp.gammaln(n + 1)
    )

    # For large n the factor (1 - t(1-t))^n concentrates at both endpoints
    # on the scale 1/n.  Each half (0, 1/2] is integrated in s = -log(2t),
    # which keeps that feature O(1) wide for every n; the upper half is the
    # lower half with nu and mu swapped (t -> 1-t symmetry).
    def half(mu_, nu_):
        et = mu_ + d / 2 - 1.0
        eo = nu_ + d / 2 - 1.0

        def g(s):
            t = 0.5 * math.exp(-s)
            if t <= 0.0:
                return 0.0
            return t * math.exp(
                logpre + et * math.log(t) + eo * math.log1p(-t) + n * math.log1p(t * t - t)
            )

        s_feat = max(math.log(2.0 * max(n, 1)), 1e-3)
        return integrate_semi_infinite(
            g, cfg, points=[s_feat / 2, s_feat, s_feat + 2], scale=max(1.0, s_feat)
        )

    v1, e1 = half(p.mu, p.nu)
    v2, e2 = half(p.nu, p.mu)
    return v1 + v2, e1 + e2


def c_coeff(p: StudentPairParams, n: int, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Mixing weight c_n for the Student-plus-Student sum.

    Symmetric in (nu, mu): the integrand maps onto itself under t -> 1-t.
    """
    return _c_coeff_err(p, n, cfg)[0]


# ---------------------------------------------------------------------------
# exact tail masses / moments through the compound negative binomial law
#
# K | a ~ NB(d/2, a/(1+a)) with a ~ Gamma(nu, rate gamma^2), and
# N | t ~ NB(d/2, t(1-t)) with t ~ Beta(mu, nu).  The negative binomial
# survival function is an incomplete Beta ratio, so tail masses and tail
# factorial moments reduce to a single smooth mixing integral.


def _nb_sf(start: int, r: float, pp: float) -> float:
    """P(NB(r, pp) >= start)."""
    if start <= 0:
        return 1.0
    return float(_sp.betainc(start, r, 1.0 - pp))


def _integrate_with_origin_ramp(f, ramp, split, scale, cfg, points=()):
    """(value, err) of int_0^inf f when f has a feature near the origin.

    The survival factors below ramp to a constant on a scale that shrinks
    like 1/start, so the piece (0, split] is integrated in s = -log(a/split)
    where the ramp sits at s = log(split/ramp) with O(1) width regardless
    of start; the remainder [split, inf) is handled by the peak-scaled
    half-line transform.
    """

    def left(s):
        a = split * math.exp(-s)
        return f(a) * a

    s_ramp = max(math.log(split / ramp), 1e-3)
    v1, e1 = integrate_semi_infinite(
        left, cfg, points=[s_ramp / 2, s_ramp, s_ramp + 2], scale=max(1.0, s_ramp)
    )
    v2, e2 = integrate_semi_infinite(
        lambda x: f(split + x), cfg, points=[p - split for p in points], scale=scale
    )
    return v1 + v2, e1 + e2


def _alpha_tail_mass_err(p, start, cfg):
    if start <= 0:
        return 1.0, 0.0
    gam = p.gamma
    if gam == 0.0:
        return 0.0, 0.0
    g2 = gam * gam
    nu, d = p.nu, p.d
    logc = nu * math.log(g2) - _sp.gammaln(nu)

    def f(a):
        if a <= 0.0:
            return 0.0
        dens = math.exp(logc + (nu - 1.0) * math.log(a) - g2 * a)
        return dens * _nb_sf(start, d / 2, a / (1.0 + a))

    scale = max(nu / g2, 1e-6)
    ramp = d / (2.0 * start)
    value, err = _integrate_with_origin_ramp(
        f, ramp, min(1.0, scale), scale, cfg, points=[max((nu - 1.0) / g2, scale / 10), scale]
    )
    return min(value, 1.0), err


def alpha_tail_mass(
    p: GaussStudentParams, start: int, cfg: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """Exact tail mass sum_{k >= start} alpha_k."""
    return _alpha_tail_mass_err(p, start, cfg)[0]


def _c_tail_mass_err(p, start, cfg):
    if start <= 0:
        return 1.0, 0.0
    d = p.d
    ramp = min(d / (2.0 * start), 0.2)

    def half(mu_, nu_):
        # contribution of t in (0, 1/2]; the other half is the same with
        # the roles of mu and nu swapped (t -> 1-t symmetry)
        logc = -_sp.betaln(mu_, nu_)

        def g(s):
            t = 0.5 * math.exp(-s)
            if t <= 0.0:
                return 0.0
            dens = math.exp(logc + (mu_ - 1.0) * math.log(t) + (nu_ - 1.0) * math.log1p(-t))
            return dens * _nb_sf(start, d / 2, t * (1.0 - t)) * t

        s_ramp = max(math.log(0.5 / ramp), 1e-3)
        return integrate_semi_infinite(
            g, cfg, points=[s_ramp / 2, s_ramp, s_ramp + 2], scale=max(1.0, s_ramp)
        )

    v1, e1 = half(p.mu, p.nu)
    v2, e2 = half(p.nu, p.mu)
    return min(v1 + v2, 1.0), e1 + e2


def c_tail_mass(
    p: StudentPairParams, start: int, cfg: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """Exact tail mass sum_{n >= start} c_n."""
    return _c_tail_mass_err(p, start, cfg)[0]


def _nb_tail_moment_logdens(logdens: float, start: int, r: float, pp: float, order: int) -> float:
    """exp(logdens) * sum_{k >= start} k^order NB(r, pp) pmf, order in {1, 2}.

    Uses k * pmf_r(k) = r ((1-pp)/pp) pmf_{r+1}(k-1) and its second-order
    analogue, so each term is again a negative binomial survival value.
    The density weight stays in log space because the (1-pp)/pp factors
    overflow on their own where the weight has already vanished.
    """
    lw = math.log1p(-pp) - math.log(pp)
    m1 = r * math.exp(logdens + lw) * _nb_sf(start - 1, r + 1.0, pp)
    if order == 1:
        return m1
    m2fac = r * (r + 1.0) * math.exp(logdens + 2.0 * lw) * _nb_sf(start - 2, r + 2.0, pp)
    return m2fac + m1


def alpha_tail_moment(
    p: GaussStudentParams,
    start: int,
    order: int,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """Exact tail moment sum_{k >= start} k^order alpha_k (order 1 or 2)."""
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    if not p.nu > order:
        raise MomentUndefinedError(f"tail moment of order {order} requires nu > {order}")
    gam = p.gamma
    if gam == 0.0:
        return 0.0
    g2 = gam * gam
    nu, d = p.nu, p.d
    logc = nu * math.log(g2) - _sp.gammaln(nu)

    def f(a):
        if a <= 0.0:
            return 0.0
        logdens = logc + (nu - 1.0) * math.log(a) - g2 * a
        return _nb_tail_moment_logdens(logdens, start, d / 2, a / (1.0 + a), order)

    scale = max(nu / g2, 1e-6)
    ramp = d / (2.0 * max(start, 1))
    value, _ = _integrate_with_origin_ramp(
        f, ramp, min(1.0, scale), scale, cfg, points=[scale]
    )
    return value


def c_tail_moment(
    p: StudentPairParams,
    start: int,
    order: int,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """Exact tail moment sum_{n >= start} n^order c_n (order 1 or 2)."""
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    if not (p.nu > order and p.mu > order):
        raise MomentUndefinedError(f"tail moment of order {order} requires nu, mu > {order}")
    d = p.d
    ramp = min(d / (2.0 * max(start, 1)), 0.2)

    def half(mu_, nu_):
        logc = -_sp.betaln(mu_, nu_)

        def g(s):
            t = 0.5 * math.exp(-s)
            if t <= 0.0:
                return 0.0
            logdens = logc + (mu_ - 1.0) * math.log(t) + (nu_ - 1.0) * math.log1p(-t) + math.log(t)
            return _nb_tail_moment_logdens(logdens, start, d / 2, t * (1.0 - t), order)

        s_ramp = max(math.log(0.5 / ramp), 1e-3)
        return integrate_semi_infinite(
            g, cfg, points=[s_ramp / 2, s_ramp, s_ramp + 2], scale=max(1.0, s_ramp)
        )[0]

    return half(p.mu, p.nu) + half(p.nu, p.mu)


# ---------------------------------------------------------------------------
# lazily extended coefficient caches shared by sequences and densities


class CoefficientSupply:
    """Grow-on-demand cache of one coefficient family.

    Values are appended under a lock, so concurrent readers always see a
    consistent prefix; already-published arrays are never mutated.
    """

    def __init__(self, provider):
        self._provider = provider
        self._values: list[float] = []
        self._errors: list[float] = []
        self._lock = threading.Lock()

    def extend_to(self, n: int) -> None:
        with self._lock:
            while len(self._values) < n:
                val, err = self._provider(len(self._values))
                self._values.append(val)
                self._errors.append(err)

    def values(self, n: int) -> np.ndarray:
        self.extend_to(n)
        return np.array(self._values[:n])

    def error_budget(self, n: int) -> float:
        self.extend_to(n)
        return float(np.sum(self._errors[:n]))


_supply_cache: dict[tuple, CoefficientSupply] = {}
_supply_lock = threading.Lock()


def alpha_supply(p: GaussStudentParams, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> CoefficientSupply:
    key = ("alpha", p.d, p.nu, p.gamma, cfg)
    with _supply_lock:
        if key not in _supply_cache:
            _supply_cache[key] = CoefficientSupply(lambda k: _alpha_coeff_err(p, k, cfg))
        return _supply_cache[key]


def c_supply(p: StudentPairParams, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> CoefficientSupply:
    key = ("c", p.d, p.nu, p.mu, cfg)
    with _supply_lock:
        if key not in _supply_cache:
            _supply_cache[key] = CoefficientSupply(lambda n: _c_coeff_err(p, n, cfg))
        return _supply_cache[key]


def _build_sequence(supply, epsilon, hard_cap, tail_mass_fn, digest):
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    block = 32
    n = 0
    while True:
        n = min(n + block, hard_cap)
        vals = supply.values(n)
        cum = np.cumsum(vals)
        hits = np.nonzero(cum >= 1.0 - epsilon)[0]
        if hits.size:
            count = int(hits[0]) + 1
            break
        if n >= hard_cap:
            raise TruncationError(
                f"could not reach tail tolerance {epsilon:.3e} within {hard_cap} terms "
                f"(mass so far {cum[-1]:.12f})",
                partial_mass=float(cum[-1]),
                terms_used=n,
            )
        block = min(2 * block, 8192)
    values = supply.values(count)
    cumulative = math.fsum(values)
    tail, tail_err = tail_mass_fn(count)
    budget = supply.error_budget(count) + tail_err + 1e-13
    return CoefficientSequence(
        values=values,
        cumulative_mass=cumulative,
        tail_bound=tail + budget,
        params_digest=digest,
    )


def alpha_sequence(
    p: GaussStudentParams, epsilon: float, hard_cap: int = SEQUENCE_HARD_CAP
) -> CoefficientSequence:
    """Shortest prefix of {alpha_k} holding mass at least 1 - epsilon.

    ``tail_bound`` certifies the discarded mass through the exact
    compound-law tail integral.  Raises TruncationError if the requested
    mass is not reached within ``hard_cap`` terms (the coefficient tails
    decay like k^-(nu+1), so small nu makes tight epsilons unreachable).
    """
    if p.gamma == 0.0:
        return CoefficientSequence(
            values=np.array([1.0]), cumulative_mass=1.0, tail_bound=0.0, params_digest=p.digest()
        )
    return _build_sequence(
        alpha_supply(p), epsilon, hard_cap,
        lambda k: _alpha_tail_mass_err(p, k, DEFAULT_QUADRATURE), p.digest()
    )


def c_sequence(
    p: StudentPairParams, epsilon: float, hard_cap: int = SEQUENCE_HARD_CAP
) -> CoefficientSequence:
    """Shortest prefix of {c_n} holding mass at least 1 - epsilon."""
    return _build_sequence(
        c_supply(p), epsilon, hard_cap,
        lambda n: _c_tail_mass_err(p, n, DEFAULT_QUADRATURE), p.digest()
    )


# ---------------------------------------------------------------------------
# closed-form moments


def k_mean(p: GaussStudentParams) -> float:
    """E K = d gamma^2 / (2 nu - 2), requires nu > 1."""
    if not p.nu > 1:
        raise MomentUndefinedError(f"E K requires nu > 1, got nu={p.nu}")
    return p.d * p.gamma**2 / (2.0 * p.nu - 2.0)


def k_variance(p: GaussStudentParams) -> float:
    """Var K, requires nu > 2."""
    if not p.nu > 2:
        raise MomentUndefinedError(f"Var K requires nu > 2, got nu={p.nu}")
    g2 = p.gamma**2
    nu, d = p.nu, p.d
    return (d * g2 / (2.0 * (nu - 1.0))) * (
        1.0 + (g2 / 2.0) * (d + 2.0 * (nu - 1.0)) / ((nu - 1.0) * (nu - 2.0))
    )


def k_moments(p: GaussStudentParams) -> tuple[float, float]:
    """(mean, variance) of the mixing variable K; use k_mean when only the
    mean exists (1 < nu <= 2)."""
    return k_mean(p), k_variance(p)


def _beta_ratio(nu, mu, shift):
    return math.exp(_sp.betaln(nu - shift, mu - shift) - _sp.betaln(nu, mu))


def n_mean(p: StudentPairParams) -> float:
    """E N = (d/2) (B(nu-1, mu-1)/B(nu, mu) - 1), requires nu, mu > 1."""
    if not (p.nu > 1 and p.mu > 1):
        raise MomentUndefinedError(f"E N requires nu, mu > 1, got ({p.nu}, {p.mu})")
    return (p.d / 2.0) * (_beta_ratio(p.nu, p.mu, 1) - 1.0)


def n_variance(p: StudentPairParams) -> float:
    """Var N, requires nu, mu > 2."""
    if not (p.nu > 2 and p.mu > 2):
        raise MomentUndefinedError(f"Var N requires nu, mu > 2, got ({p.nu}, {p.mu})")
    d = p.d
    r1 = _beta_ratio(p.nu, p.mu, 1)
    r2 = _beta_ratio(p.nu, p.mu, 2)
    return (d / 4.0) * ((d + 2.0) * r2 - 2.0 * r1 - d * r1 * r1)


def n_moments(p: StudentPairParams) -> tuple[float, float]:
    """(mean, variance) of the mixing variable N; use n_mean when only the
    mean exists."""
    return n_mean(p), n_variance(p)


# ---------------------------------------------------------------------------
# asymptotics and structure checks


def alpha_nb_limit(k: int, d: int, eta_over_sigma_sq: float) -> float:
    """Large-nu limit of alpha_k at fixed Student covariance.

    The negative binomial NB(d/2, 1/(1 + eta^2/sigma^2)) pmf at k.
    """
    if k < 0 or k != int(k):
        raise ValueError(f"k must be a nonnegative integer, got {k}")
    if d < 1 or d != int(d):
        raise ValueError(f"dimension must be a positive integer, got {d}")
    rho = eta_over_sigma_sq
    if not rho > 0:
        raise ValueError(f"eta_over_sigma_sq must be positive, got {rho}")
    return math.exp(
        _sp.gammaln(k + d / 2)
        - _sp.gammaln(k + 1)
        - _sp.gammaln(d / 2)
        + k * math.log(rho)
        - (k + d / 2) * math.log1p(rho)
    )


def complete_monotonicity_defect(seq: CoefficientSequence, max_order: int) -> float:
    """Largest violation of (-1)^m Delta^m seq_k >= 0 for m <= max_order.

    Hausdorff moment sequences (both families for d = 1, 2) are completely
    monotone, so the defect should sit at numerical-noise level.
    """
    if max_order < 1:
        raise ValueError(f"max_order must be at least 1, got {max_order}")
    values = np.asarray(seq.values, dtype=float)
    defect = 0.0
    for m in range(1, max_order + 1):
        if len(values) <= m:
            break
        diffs = np.diff(values, m)
        signed = diffs if m % 2 == 0 else -diffs
        worst = float(np.min(signed))
        defect = max(defect, -worst if worst < 0 else 0.0)
    return defect


def tau_coeff(
    p: GaussStudentParams,
    k: int,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    form: str = "rate-mixture",
) -> float:
    """Hausdorff factor tau_k with alpha_k = ((d/2)_k / k!) tau_k.

    ``form='rate-mixture'`` integrates over the Gamma rate on (0, inf);
    ``form='moment'`` uses the equivalent unit-interval moment integral
    (tau_k as the k-th moment of a fixed measure on (0, 1)).
    """
    if k < 0 or k != int(k):
        raise ValueError(f"k must be a nonnegative integer, got {k}")
    gam = p.gamma
    if gam == 0.0:
        return 1.0 if k == 0 else 0.0
    g2 = gam * gam
    nu, d = p.nu, p.d
    if form == "rate-mixture":
        # tau_k = (sigma sqrt2)^d / Gamma(nu) * int s^(nu+d/2-1) e^-s (1+s/g2)^-(k+d/2) ds
        a_exp = nu + d / 2 - 1.0
        q_exp = k + d / 2

        def f(s):
            if s <= 0.0:
                return 0.0
            return math.exp(
                -d * math.log(gam)
                - _sp.gammaln(nu)
                - s
                + a_exp * math.log(s)
                - q_exp * (math.log(s + g2) - math.log(g2))
            )

        scale = max(a_exp, g2, 0.5)
        value, _ = integrate_semi_infinite(f, cfg, points=[scale], scale=scale)
        return value
    if form == "moment":
        # tau_k = (2 sigma^2)^-nu / Gamma(nu) * int_0^1 u^(k-nu-1) (1-u)^(nu+d/2-1)
        #         exp(-gamma^2 (1-u)/u) du
        logpre = nu * math.log(g2) - _sp.gammaln(nu)

        def f(u):
            if u <= 0.0 or u >= 1.0:
                return 0.0
            return math.exp(
                logpre
                + (k - nu - 1.0) * math.log(u)
                + (nu + d / 2 - 1.0) * math.log1p(-u)
                - g2 * (1.0 - u) / u
            )

        points = [g2 / (g2 + 1.0), g2 / (g2 + max(k, 1)), 0.5]
        value, _ = integrate_finite(f, 0.0, 1.0, cfg, points=points)
        return value
    raise ValueError(f"unknown form {form!r}; expected 'rate-mixture' or 'moment'")
