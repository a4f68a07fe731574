"""Zeros via truncated-matrix eigenproblems, strip/dynamics verification,
m-function identities, Nevai diagnostics, and ratio asymptotics.

Zeros of P_n are the eigenvalues of the n x n truncation of the Jacobi
matrix; the eigensolver output is polished with two Newton steps driven by
the recurrence, which also yields a residual certificate.  Cluster-zero
distances |xi_n - kappa| for Geronimus transforms decay geometrically below
double precision, so they are refined with mpmath Newton iteration at a
precision that grows with n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from .core import (
    RecurrenceCoeffs,
    SymmetricJacobi,
    moments,
    symmetric_jacobi_matrix,
    symmetrize,
)
from .darboux import GeronimusChain, TransformPoint, christoffel, geronimus, _auto_dps
from .errors import ConfigurationError, EigenSolverError, PrefixError
from .polyeval import ratio_sequence

__all__ = [
    "ZeroCloud",
    "StripReport",
    "NevaiDiagnostics",
    "MFunctionSeries",
    "MIdentityReport",
    "DynamicsReport",
    "RatioAsymptoticReport",
    "zeros",
    "kernel_zero_cloud",
    "geronimus_zero_cloud",
    "strip_check",
    "zero_dynamics",
    "cluster_distance",
    "nevai_diagnostics",
    "ratio_limit_f",
    "mfunction_series",
    "verify_m_identities",
    "truncation_spectrum",
    "ratio_asymptotic_check",
]

_RESIDUAL_TOL = 1e-8
_STRIP_SLACK = 1e-9


@dataclass(frozen=True)
class ZeroCloud:
    """Zeros of one degree-n polynomial plus strip metadata."""

    n: int
    zeros: np.ndarray
    max_im: float
    strip_bound: float | None = None
    cluster_candidate: complex | None = None

    def __post_init__(self):
        arr = np.asarray(self.zeros, dtype=complex).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "zeros", arr)
        if len(arr) != self.n:
            raise ConfigurationError("zero count must equal the degree")


@dataclass(frozen=True)
class StripReport:
    ok: bool
    side: str
    bound: float
    violators: tuple[complex, ...]


@dataclass(frozen=True)
class NevaiDiagnostics:
    """Estimated Nevai-class data (lambda_n -> a, c_n -> c) and tail health."""

    a_limit: complex
    c_limit: complex
    tail_residuals: np.ndarray
    is_member: bool
    f_branch_note: str = (
        "f(z) = larger-modulus root of w^2 - (z-c) w + a = 0, "
        "the fixed point of w = z - c - a/w"
    )


@dataclass(frozen=True)
class MFunctionSeries:
    """Truncated expansion m(J;z) = -sum_j s_j / z^{j+1} near infinity."""

    moments: np.ndarray
    order: int
    validity_radius: float

    def __call__(self, z: complex) -> complex:
        zp = complex(z)
        acc = 0.0 + 0.0j
        for s in self.moments[::-1]:
            acc = (acc + s) / zp
        return -acc


@dataclass(frozen=True)
class MIdentityReport:
    kappa: complex
    order: int
    christoffel_residuals: np.ndarray
    geronimus_residuals: np.ndarray | None
    max_residual: float


@dataclass(frozen=True)
class DynamicsReport:
    kind: str
    kappa: complex
    n_list: tuple[int, ...]
    max_im: np.ndarray
    cluster_dist: np.ndarray | None = None
    log_cluster_dist: np.ndarray | None = None
    fit_slope: float | None = None
    fit_r2: float | None = None
    strictly_decreasing: bool | None = None
    diagnostics: NevaiDiagnostics | None = None


@dataclass(frozen=True)
class RatioAsymptoticReport:
    n_check: int
    z_list: tuple[complex, ...]
    f_values: tuple[complex, ...]
    errors: np.ndarray
    monotone_tail: tuple[bool, ...]


def _newton_polish(m: RecurrenceCoeffs, n: int, z: complex, steps: int = 2) -> complex:
    """Newton refinement of a zero of P_n using joint (P, P') recurrences."""
    c, lam = m.c, m.lam
    for _ in range(steps):
        p_prev, p = 1.0 + 0.0j, z - c[0]
        dp_prev, dp = 0.0j, 1.0 + 0.0j
        for k in range(1, n):
            zc = z - c[k]
            p_prev, p = p, zc * p - lam[k - 1] * p_prev
            dp_prev, dp = dp, p_prev + zc * dp - lam[k - 1] * dp_prev
            mag = abs(p)
            if mag > 1e120:
                p_prev /= mag
                p /= mag
                dp_prev /= mag
                dp /= mag
        if dp == 0:
            break
        z = z - p / dp
    return z


def _residual_log(m: RecurrenceCoeffs, n: int, z: complex) -> tuple[float, float]:
    """(log|P_n(z)|, log of the evaluation error envelope E_n(z)).

    E runs the recurrence on absolute values; rounding errors of the forward
    evaluation are bounded by ~n eps E_n, so |P_n| below 1e-8 E_n is the
    strongest certificate the evaluation itself can support (a zero clustered
    at a spectral point of the prefix cannot beat this floor).
    """
    c, lam = m.c, m.lam
    p_prev, p = 1.0 + 0.0j, z - c[0]
    e_prev, e = 1.0, max(abs(z) + abs(c[0]), 1.0)
    log_scale = 0.0
    for k in range(1, n):
        zc = z - c[k]
        p_prev, p = p, zc * p - lam[k - 1] * p_prev
        e_prev, e = e, abs(zc) * e + abs(lam[k - 1]) * e_prev
        mag = abs(p)
        if mag > 1e150 or (0 < mag < 1e-150):
            p_prev /= mag
            p /= mag
            e_prev /= mag
            e /= mag
            log_scale += math.log(mag)
    mag = abs(p)
    val_log = (math.log(mag) + log_scale) if mag > 0 else -math.inf
    return val_log, math.log(e) + log_scale


def zeros(m: RecurrenceCoeffs, n: int) -> ZeroCloud:
    """The n zeros of P_n: truncation eigenvalues polished by Newton steps.

    Each refined zero carries the residual certificate
    |P_n(zero)| <= 1e-8 * max_k |P_k(zero)|.
    """
    if n > m.n_max:
        raise PrefixError(f"degree {n} exceeds prefix length {m.n_max}")
    if n == 0:
        return ZeroCloud(n=0, zeros=np.empty(0, dtype=complex), max_im=0.0)
    J = symmetric_jacobi_matrix(symmetrize(m), n)
    try:
        vals = np.linalg.eigvals(J)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"eigensolver failed to converge at degree {n}") from exc
    polished = np.array([_newton_polish(m, n, z) for z in vals])
    for z in polished:
        val_log, peak_log = _residual_log(m, n, z)
        if val_log > math.log(_RESIDUAL_TOL) + peak_log:
            raise EigenSolverError(
                f"zero residual check failed at degree {n}: |P_n| too large at {z}"
            )
    order = np.lexsort((polished.imag, polished.real))
    polished = polished[order]
    return ZeroCloud(n=n, zeros=polished, max_im=float(np.max(polished.imag)))


def kernel_zero_cloud(m: RecurrenceCoeffs, site: TransformPoint, n: int) -> ZeroCloud:
    """Zeros of the kernel polynomial P*_n(kappa, .) with the strip bound
    -1/Im(P_{n-1}(kappa)/P_n(kappa))."""
    tc = christoffel(m, site)
    cloud = zeros(tc.coeffs, n)
    rho_n = tc.ratio_seq[n - 1]  # P_n/P_{n-1} at kappa
    # -1/Im(P_{n-1}/P_n) is positive for kappa above the axis and negative
    # below; store the strip half-width
    bound = abs(1.0 / (1.0 / rho_n).imag)
    return ZeroCloud(
        n=n, zeros=cloud.zeros, max_im=cloud.max_im, strip_bound=float(bound)
    )


def geronimus_zero_cloud(m: RecurrenceCoeffs, site: TransformPoint, n: int) -> ZeroCloud:
    """Zeros of P^{-*}_n(kappa, .) with bound -1/Im(R_{n-1}(kappa)/R_n(kappa))
    and the zero nearest kappa recorded as cluster candidate."""
    tc = geronimus(m, site)
    cloud = zeros(tc.coeffs, n)
    w_n = -tc.a_seq[n]  # R_n/R_{n-1} at kappa
    bound = abs(1.0 / (1.0 / w_n).imag)
    cluster = complex(cloud.zeros[np.argmin(np.abs(cloud.zeros - site.kappa))])
    return ZeroCloud(
        n=n,
        zeros=cloud.zeros,
        max_im=cloud.max_im,
        strip_bound=float(bound),
        cluster_candidate=cluster,
    )


def strip_check(cloud: ZeroCloud, bound: float, side: str = "upper") -> StripReport:
    """True iff every zero lies strictly inside the half-plane and within the
    strip bound (slack 1e-9); violators are listed otherwise."""
    if side not in ("upper", "lower"):
        raise ConfigurationError("side must be 'upper' or 'lower'")
    violators = []
    for z in cloud.zeros:
        im = z.imag if side == "upper" else -z.imag
        if not (0.0 < im <= bound + _STRIP_SLACK):
            violators.append(complex(z))
    return StripReport(ok=not violators, side=side, bound=float(bound), violators=tuple(violators))


def nevai_diagnostics(m: RecurrenceCoeffs, tail_window: int = 32) -> NevaiDiagnostics:
    """Estimate (a, c) from the prefix tail and check residual decay."""
    if m.n_max < tail_window + 2:
        tail_window = max(m.n_max // 2, 2)
    a = complex(m.lam[-1])
    c = complex(m.c[-1])
    lam_tail = m.lam[-tail_window:]
    c_tail = m.c[-tail_window:]
    res = np.abs(lam_tail - a) + np.abs(c_tail[: len(lam_tail)] - c)
    slack = 1e-13 * (1.0 + abs(a) + abs(c))
    member = bool(np.all(np.diff(res) <= slack))
    return NevaiDiagnostics(a_limit=a, c_limit=c, tail_residuals=res, is_member=member)


def ratio_limit_f(a: complex, c: complex, z: complex) -> complex:
    """Ratio-asymptotic limit: the larger-modulus root of w^2-(z-c)w+a = 0.

    Satisfies w = z - c - a/w and w/z -> 1 at infinity (monic normalization).
    """
    zc = complex(z) - complex(c)
    disc = zc * zc - 4.0 * complex(a)
    if disc == 0:
        # Branch point: the two roots coincide, so the value is unambiguous.
        return zc / 2.0
    root = complex(np.sqrt(complex(disc)))
    w1 = (zc + root) / 2.0
    w2 = (zc - root) / 2.0
    if abs(abs(w1) - abs(w2)) <= 1e-12 * (abs(w1) + abs(w2)):
        raise ConfigurationError(
            f"z={z} lies on the boundary arc |w+| = |w-|: no dominant root"
        )
    return w1 if abs(w1) > abs(w2) else w2


def mfunction_series(m: RecurrenceCoeffs, order: int) -> MFunctionSeries:
    """Laurent data of m(J;z) near infinity, valid for |z| > ||J|| estimate."""
    s = moments(m, order)
    max_c = float(np.max(np.abs(m.c)))
    max_a = float(np.max(np.sqrt(np.abs(m.lam))))
    return MFunctionSeries(moments=s, order=order, validity_radius=max_c + 2 * max_a)


def verify_m_identities(m: RecurrenceCoeffs, site: TransformPoint, order: int) -> MIdentityReport:
    """Moment-level residuals of the transform m-function identities.

    Christoffel:  s_{j+1} - kappa s_j = s*_j  (the transformed moments),
    which is the coefficient form of
    m(J_C;z) = [(z-kappa) m(J;z) + 1]/(b_0-kappa).
    Geronimus:  s^G_{j+1} - kappa s^G_j = s_j, the coefficient form of
    m(J_G;z) = m(J;z)/(s0star (z-kappa)) - 1/(z-kappa).
    """
    kappa = site.kappa
    s = moments(m, order + 1)
    tc = christoffel(m, site)
    s_c = moments(tc.coeffs, order)
    lhs = s[1 : order + 2] - kappa * s[: order + 1]
    scale = np.maximum.reduce([np.abs(lhs), np.abs(s_c), np.ones(order + 1)])
    res_c = np.abs(lhs - s_c) / scale
    res_g = None
    if site.s0star is not None:
        tg = geronimus(m, site)
        s_g = moments(tg.coeffs, order + 1)
        lhs_g = s_g[1 : order + 2] - kappa * s_g[: order + 1]
        scale_g = np.maximum.reduce(
            [np.abs(lhs_g), np.abs(s[: order + 1]), np.ones(order + 1)]
        )
        res_g = np.abs(lhs_g - s[: order + 1]) / scale_g
    max_res = float(np.max(res_c if res_g is None else np.concatenate([res_c, res_g])))
    return MIdentityReport(
        kappa=kappa,
        order=order,
        christoffel_residuals=res_c,
        geronimus_residuals=res_g,
        max_residual=max_res,
    )


def truncation_spectrum(J: SymmetricJacobi, size: int) -> np.ndarray:
    """Eigenvalues of the size x size complex-symmetric truncation, sorted."""
    M = symmetric_jacobi_matrix(J, size)
    try:
        vals = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"eigensolver failed at truncation size {size}") from exc
    order = np.lexsort((vals.imag, vals.real))
    return vals[order]


def cluster_distance(
    m: RecurrenceCoeffs, site: TransformPoint, n: int, dps: int | None = None
) -> tuple[complex, float, float]:
    """(xi_n, |xi_n - kappa|, ln|xi_n - kappa|) for the Geronimus transform.

    xi_n is the zero of P^{-*}_n(kappa, .) nearest kappa, found by mpmath
    Newton iteration started at kappa; |xi_n - kappa| decays geometrically
    below double resolution, hence the extended precision.
    """
    if site.s0star is None:
        raise ConfigurationError("cluster_distance needs a Geronimus site with s0star")
    if dps is None:
        dps = 60 + int(math.ceil(1.2 * n))
    work = m.truncated(min(m.n_max, max(n + 2, 4)))
    chain_dps = max(dps, _auto_dps(work.c, work.lam, abs(m.s0 / site.s0star), site.kappa, work.n_max))
    chain = GeronimusChain(work, dps=chain_dps)
    with mp.workdps(chain_dps):
        kappa = mp.mpc(site.kappa)
        s0star = mp.mpc(site.s0star)
        ws = []
        w = kappa - chain._c[0] + chain._s0 / s0star
        ws.append(w)
        for k in range(2, n + 1):
            w = (kappa - chain._c[k - 1]) - chain._lam[k - 2] / w
            ws.append(w)
        a_n = -ws[n - 1]
        c_mp, lam_mp = chain._c, chain._lam

        def p_pair(z):
            p_prev, p = mp.mpc(1), z - c_mp[0]
            dp_prev, dp = mp.mpc(0), mp.mpc(1)
            for k in range(1, n):
                zc = z - c_mp[k]
                p_prev, p = p, zc * p - lam_mp[k - 1] * p_prev
                dp_prev, dp = dp, p_prev + zc * dp - lam_mp[k - 1] * dp_prev
            return p + a_n * p_prev, dp + a_n * dp_prev

        z = kappa
        tol = mp.mpf(10) ** (-(dps - 10))
        for _ in range(80):
            val, der = p_pair(z)
            if der == 0:
                break
            step = val / der
            z = z - step
            if abs(step) <= tol * max(abs(z), mp.mpf(1)):
                break
        dist = abs(z - kappa)
        return complex(z), float(dist), float(mp.log(dist)) if dist > 0 else -math.inf


def zero_dynamics(
    m: RecurrenceCoeffs,
    site: TransformPoint,
    kind: str,
    n_list,
) -> DynamicsReport:
    """Per-degree zero behavior of a transformed family.

    For Christoffel: max imaginary parts (the collapse toward the real line).
    For Geronimus: additionally the cluster distances |xi_n - kappa|, their
    logs, and a linear fit of ln|xi_n - kappa| against n.
    """
    if kind not in ("christoffel", "geronimus"):
        raise ConfigurationError("kind must be 'christoffel' or 'geronimus'")
    diag = nevai_diagnostics(m)
    if not diag.is_member:
        raise ConfigurationError(
            "zero_dynamics requires a base prefix diagnosed in a Nevai class"
        )
    n_list = tuple(int(n) for n in n_list)
    if kind == "christoffel":
        tc = christoffel(m, site)
        max_im = np.array([zeros(tc.coeffs, n).max_im for n in n_list])
        return DynamicsReport(
            kind=kind, kappa=site.kappa, n_list=n_list, max_im=max_im, diagnostics=diag
        )
    tc = geronimus(m, site)
    max_im = np.empty(len(n_list))
    dist = np.empty(len(n_list))
    log_dist = np.empty(len(n_list))
    for i, n in enumerate(n_list):
        cloud = zeros(tc.coeffs, n)
        k_near = int(np.argmin(np.abs(cloud.zeros - site.kappa)))
        rest = np.delete(cloud.zeros, k_near)
        max_im[i] = float(np.max(rest.imag)) if len(rest) else 0.0
        _, dist[i], log_dist[i] = cluster_distance(m, site, n)
    slope, intercept = np.polyfit(np.asarray(n_list, dtype=float), log_dist, 1)
    pred = slope * np.asarray(n_list, dtype=float) + intercept
    ss_res = float(np.sum((log_dist - pred) ** 2))
    ss_tot = float(np.sum((log_dist - np.mean(log_dist)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return DynamicsReport(
        kind=kind,
        kappa=site.kappa,
        n_list=n_list,
        max_im=max_im,
        cluster_dist=dist,
        log_cluster_dist=log_dist,
        fit_slope=float(slope),
        fit_r2=float(r2),
        strictly_decreasing=bool(np.all(np.diff(dist) < 0)),
        diagnostics=diag,
    )


def ratio_asymptotic_check(
    coeffs: RecurrenceCoeffs, z_list, n_check: int
) -> RatioAsymptoticReport:
    """Errors |P_{n}/P_{n-1}(z) - f(z)| at n = n_check with a monotone-tail flag.

    The limit data (a, c) is diagnosed from the prefix tail, not assumed.
    """
    diag = nevai_diagnostics(coeffs)
    if not diag.is_member:
        raise ConfigurationError("ratio asymptotics need a Nevai-class prefix")
    z_list = tuple(complex(z) for z in z_list)
    errors = np.empty(len(z_list))
    f_values = []
    monotone = []
    for i, z in enumerate(z_list):
        fz = ratio_limit_f(diag.a_limit, diag.c_limit, z)
        f_values.append(fz)
        rs = ratio_sequence(coeffs, z, "P", n_terms=n_check)
        err = np.abs(rs.values - fz)
        errors[i] = err[-1]
        w = min(30, n_check // 2)
        head = float(np.max(err[-w : -w + max(w // 3, 1)]))
        tail = float(np.max(err[-max(w // 3, 1) :]))
        monotone.append(tail <= head * 1.01 + 1e-15)
    return RatioAsymptoticReport(
        n_check=n_check,
        z_list=z_list,
        f_values=tuple(f_values),
        errors=errors,
        monotone_tail=tuple(monotone),
    )
