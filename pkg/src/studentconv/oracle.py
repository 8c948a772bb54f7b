"""Independent brute-force references for the series densities.

Nothing here reuses the series code paths being validated: the
convolution oracle integrates the defining convolution integral, the
Monte Carlo check bins sampler output against the radial law, and the
Fourier check transforms the density numerically.  Reports are
deterministic given (parameters, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special as _sp
from scipy.integrate import quad as _quad
from scipy.interpolate import CubicSpline
from scipy.stats import chi2 as _chi2

from .densities import (
    ConvolutionSpec,
    TruncationPolicy,
    gauss_student_sum_density,
    student_cf,
    student_density,
    student_pair_sum_density,
)
from .mixing import (
    GaussStudentParams,
    StudentPairParams,
    alpha_supply,
    alpha_tail_mass,
    c_supply,
    c_tail_mass,
)
from .sampling import sample_y, sample_z

__all__ = [
    "ValidationReport",
    "convolve_quadrature_1d",
    "mc_density_check",
    "fourier_product_check",
]


@dataclass(frozen=True)
class ValidationReport:
    """Series-versus-oracle comparison on a fixed grid."""

    method: str
    grid: np.ndarray
    series_values: np.ndarray
    oracle_values: np.ndarray
    max_abs_err: float
    max_rel_err: float
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        s = np.asarray(self.series_values, dtype=float)
        o = np.asarray(self.oracle_values, dtype=float)
        if not (len(g) == len(s) == len(o)):
            raise ValueError("grid, series_values and oracle_values must have equal length")
        for arr in (g, s, o):
            arr.setflags(write=False)
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "series_values", s)
        object.__setattr__(self, "oracle_values", o)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "grid": self.grid.tolist(),
            "series_values": self.series_values.tolist(),
            "oracle_values": self.oracle_values.tolist(),
            "max_abs_err": self.max_abs_err,
            "max_rel_err": self.max_rel_err,
            "details": self.details,
        }


def _report(method, grid, series, oracle, details=None):
    series = np.asarray(series, dtype=float)
    oracle = np.asarray(oracle, dtype=float)
    abs_err = np.abs(series - oracle)
    nz = oracle != 0.0
    rel = np.max(abs_err[nz] / np.abs(oracle[nz])) if np.any(nz) else math.inf
    return ValidationReport(
        method=method,
        grid=np.asarray(grid, dtype=float),
        series_values=series,
        oracle_values=oracle,
        max_abs_err=float(np.max(abs_err)) if len(series) else 0.0,
        max_rel_err=float(rel),
        details=details or {},
    )


# ---------------------------------------------------------------------------
# direct convolution, d = 1


def _student_pdf_1d(nu, x):
    logA = _sp.gammaln(nu + 0.5) - _sp.gammaln(nu) - 0.5 * math.log(math.pi)
    return math.exp(logA - (nu + 0.5) * math.log1p(x * x))


def convolution_oracle_point(nu: float, mu: float, x: float) -> tuple[float, float]:
    """(f_nu * f_mu)(x) by adaptive quadrature; returns (value, err_est).

    The integrand peaks at y = 0 and y = x, so the real line is split
    there (plus a midpoint split when the peaks are far apart) and the
    unbounded wings are handled by the infinite-interval transform of
    the underlying QUADPACK routine.
    """
    f = lambda y: _student_pdf_1d(nu, x - y) * _student_pdf_1d(mu, y)
    lo, hi = sorted((0.0, x))
    pieces = [(-np.inf, lo), (hi, np.inf)]
    if hi > lo:
        mid = 0.5 * (lo + hi)
        pieces += [(lo, mid), (mid, hi)] if hi - lo > 20.0 else [(lo, hi)]
    value = err = 0.0
    for a, b in pieces:
        res = _quad(f, a, b, epsabs=1e-13, epsrel=1e-11, limit=300, full_output=1)
        value += res[0]
        err += res[1]
    return value, err


def convolve_quadrature_1d(
    nu: float,
    mu: float,
    grid,
    policy: TruncationPolicy | None = None,
) -> ValidationReport:
    """Compare the mixture series for T1 + T2 against direct convolution."""
    grid = np.asarray(grid, dtype=float)
    params = StudentPairParams(d=1, nu=nu, mu=mu)
    dens = student_pair_sum_density(params, policy or TruncationPolicy(epsilon=1e-12))
    series = dens.eval_radial(np.abs(grid))
    oracle = np.empty_like(grid)
    errs = np.empty_like(grid)
    for i, x in enumerate(grid):
        oracle[i], errs[i] = convolution_oracle_point(nu, mu, float(x))
    return _report(
        "quadrature-convolution",
        grid,
        series,
        oracle,
        details={"nu": nu, "mu": mu, "oracle_err_max": float(np.max(errs))},
    )


# ---------------------------------------------------------------------------
# Monte Carlo radial histogram check


def _radial_pdf_factory(spec: ConvolutionSpec, policy):
    d = spec.d
    surf = 2.0 * math.pi ** (d / 2) / math.exp(_sp.gammaln(d / 2))
    if spec.kind == "student-student":
        dens = student_pair_sum_density(spec.pair_params(), policy)
    else:
        dens = gauss_student_sum_density(spec.gauss_params(), spec.a1, spec.a2, policy)
    return lambda r: surf * r ** (d - 1) * float(dens.eval_radial(float(r)))


def _radial_tail_prob(spec: ConvolutionSpec, r_edge: float) -> float:
    """P(||sum|| > r_edge) from the component radial CDFs.

    The tilted-Gaussian components have chi-square radial CDFs and the
    tilted-Student components incomplete-Beta radial CDFs; the discarded
    coefficient tail is added in full (those components carry essentially
    all their mass beyond any moderate radius).
    """
    kmax = 4000
    if spec.kind == "student-student":
        p = spec.pair_params()
        coeffs = c_supply(p).values(kmax)
        narr = np.arange(kmax)
        v = r_edge * r_edge / (1.0 + r_edge * r_edge)
        comp = _sp.betaincc(narr + p.d / 2.0, p.eta, v)
        tail = c_tail_mass(p, kmax)
    else:
        p = spec.gauss_params()
        sigma_eff = abs(spec.a1) * p.sigma
        gamma_eff = abs(spec.a2 / spec.a1) * p.gamma
        p_eff = GaussStudentParams(d=p.d, nu=p.nu, gamma=gamma_eff)
        coeffs = alpha_supply(p_eff).values(kmax)
        narr = np.arange(kmax)
        x = r_edge * r_edge / (2.0 * sigma_eff * sigma_eff)
        comp = _sp.gammaincc(narr + p.d / 2.0, x)
        tail = alpha_tail_mass(p_eff, kmax)
    return float(coeffs @ comp) + tail


def mc_density_check(
    spec: ConvolutionSpec,
    count: int,
    seed: int,
    bins: int = 40,
    policy: TruncationPolicy | None = None,
) -> ValidationReport:
    """Chi-square test of sampler radii against the radial series law.

    Bins the sampled norms on [0, q995] plus an open tail bin, computes
    expected counts by quadrature of density x surface measure (tail bin
    through the component CDFs), pools adjacent bins with expected count
    below 5, and reports the chi-square statistic and p-value.
    """
    if count < 10_000:
        raise ValueError(f"count must be at least 10^4, got {count}")
    policy = policy or TruncationPolicy(epsilon=1e-10)
    if spec.kind == "student-student":
        batch = sample_y(spec.pair_params(), count, seed)
    else:
        if spec.a1 != 1.0 or spec.a2 != 1.0:
            raise ValueError("mc_density_check supports unit scale factors only")
        batch = sample_z(spec.gauss_params(), count, seed)
    radii = batch.radii()
    r_hi = float(np.quantile(radii, 0.995))
    edges = np.linspace(0.0, r_hi, bins)
    observed = np.histogram(radii, bins=np.append(edges, np.inf))[0].astype(float)

    pdf = _radial_pdf_factory(spec, policy)
    probs = np.empty(bins)
    for i in range(bins - 1):
        probs[i] = _quad(pdf, edges[i], edges[i + 1], epsabs=1e-11, epsrel=1e-9, limit=200)[0]
    probs[-1] = _radial_tail_prob(spec, r_hi)

    expected = count * probs
    # pool right-to-left until every bin expects at least 5
    obs_p, exp_p, centers = [], [], []
    acc_o = acc_e = 0.0
    pooled = 0
    for i in range(bins - 1, -1, -1):
        acc_o += observed[i]
        acc_e += expected[i]
        if acc_e >= 5.0:
            obs_p.append(acc_o)
            exp_p.append(acc_e)
            centers.append(edges[i])
            acc_o = acc_e = 0.0
        else:
            pooled += 1
    if acc_e > 0.0:  # leftover underfilled leading bins fold into the last kept bin
        if obs_p:
            obs_p[-1] += acc_o
            exp_p[-1] += acc_e
        else:
            obs_p, exp_p, centers = [acc_o], [acc_e], [0.0]
        pooled += 1
    obs_p = np.array(obs_p[::-1])
    exp_p = np.array(exp_p[::-1])
    centers = np.array(centers[::-1])

    flags = []
    if len(obs_p) < 3:
        flags.append("pooling left fewer than 3 bins; test is underpowered")
    dof = max(len(obs_p) - 1, 1)
    stat = float(np.sum((obs_p - exp_p) ** 2 / exp_p))
    p_value = float(_chi2.sf(stat, dof))
    details = {
        "statistic": stat,
        "p_value": p_value,
        "dof": dof,
        "bins_pooled": pooled,
        "count": count,
        "seed": seed,
    }
    if flags:
        details["flags"] = flags
    return _report("monte-carlo", centers, exp_p, obs_p, details)


# ---------------------------------------------------------------------------
# Fourier product check, d = 1


def fourier_product_check(
    nu: float,
    mu: float,
    u_grid,
    r_split: float = 18.0,
    r_far: float = 1500.0,
    policy: TruncationPolicy | None = None,
) -> ValidationReport:
    """Check FT(f_Y) = k_nu * k_mu pointwise on u_grid (d = 1).

    The density of the sum carries heavy Student tails, so the transform
    is computed against the residual h = f_Y - f_nu - f_mu, whose tail
    decays two orders faster; the two subtracted Students transform in
    closed form (single-density characteristic functions).  h comes from
    the series on [0, r_split] and from the convolution oracle on
    [r_split, r_far]; beyond r_far the residual integral is below 1e-9
    for half-dfs >= 1/2.
    """
    u_grid = np.asarray(u_grid, dtype=float)
    if np.any(u_grid <= 0):
        raise ValueError("u_grid must be strictly positive")
    params = StudentPairParams(d=1, nu=nu, mu=mu)
    dens = student_pair_sum_density(params, policy or TruncationPolicy(epsilon=1e-12))

    def students(r):
        return student_density(nu, 1, r) + student_density(mu, 1, r)

    grid = np.linspace(0.0, r_split, 2401)
    bulk_spline = CubicSpline(grid, dens.eval_radial(grid) - students(grid))

    # decade-wise splines of the convolution-oracle residual on [r_split, r_far]
    edges = [r_split]
    while edges[-1] < r_far:
        edges.append(min(edges[-1] * math.sqrt(10.0), r_far))
    tail_splines = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        pts = np.linspace(lo, hi, 33)
        res = np.array([convolution_oracle_point(nu, mu, float(r))[0] for r in pts])
        tail_splines.append((lo, hi, CubicSpline(pts, res - students(pts))))

    oracle = np.empty_like(u_grid)
    kw = dict(epsabs=1e-12, epsrel=1e-11, limit=600)
    for i, u in enumerate(u_grid):
        acc = _quad(bulk_spline, 0.0, r_split, weight="cos", wvar=float(u), **kw)[0]
        for lo, hi, spl in tail_splines:
            acc += _quad(spl, lo, hi, weight="cos", wvar=float(u), **kw)[0]
        oracle[i] = 2.0 * acc + float(student_cf(nu, u) + student_cf(mu, u))
    series = student_cf(nu, u_grid) * student_cf(mu, u_grid)
    return _report(
        "fourier-product",
        u_grid,
        series,
        oracle,
        details={"nu": nu, "mu": mu, "r_split": r_split, "r_far": r_far},
    )


def fourier_transform_1d(density_radial, u: float, r_max: float) -> float:
    """2 * int_0^r_max cos(u r) f(r) dr for an even 1-d density profile."""
    val = _quad(
        lambda r: density_radial(r), 0.0, r_max, weight="cos", wvar=float(u),
        epsabs=1e-12, epsrel=1e-11, limit=600,
    )[0]
    return 2.0 * val
