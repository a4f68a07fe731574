"""Christoffel and Geronimus transformations of coefficient prefixes.

Christoffel at kappa maps the functional L to L*[p] = L[(z-kappa)p]; its
coefficients follow from consecutive ratios P_n(kappa)/P_{n-1}(kappa), which
a forward ratio recurrence computes stably (the P-solution is dominant off
the real axis).

Geronimus at (kappa, s0star) inverts it.  Its coefficients are driven by the
ratios of R_n = P_n + Q_n/s0star, and when s0star sits at (or near) the
Cauchy transform of the measure, R_n is the *minimal* solution of the
recurrence: forward double-precision iteration then loses the true ratios at
a geometric rate.  All R-ratio runs therefore happen in mpmath with a
precision budget sized to the requested prefix length, and Cauchy-transform
values are produced by a continued fraction evaluated in the same precision
(quadrature is kept as an independent cross-check).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from ._quadrature import adaptive_integral
from .core import RecurrenceCoeffs
from .errors import (
    ConfigurationError,
    ExistenceError,
    PrefixError,
    QuadratureError,
    ZeroHitError,
)
from .polyeval import eval_P, ratio_sequence, _scaled_run

__all__ = [
    "TransformPoint",
    "TransformedCoeffs",
    "GeronimusChain",
    "christoffel",
    "kernel_eval",
    "christoffel_two",
    "geronimus",
    "geronimus_eval",
    "geronimus_cauchy",
    "cauchy_s0star",
]

# Relative cancellation threshold for ratio/pivot breakdown detection.
_BREAKDOWN_RTOL = 1e-13
# |z - kappa| below this switches kernel_eval to the transformed recurrence.
_KERNEL_SWITCH = 1e-12


@dataclass(frozen=True)
class TransformPoint:
    """A Darboux site: kappa, optional s0star (Geronimus), validity flags."""

    kappa: complex
    s0star: complex | None = None
    allow_real: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kappa", complex(self.kappa))
        if self.s0star is not None:
            object.__setattr__(self, "s0star", complex(self.s0star))
        if self.kappa.imag == 0 and not self.allow_real:
            raise ConfigurationError(
                f"kappa={self.kappa} is real; zero-location and existence guarantees "
                "need a nonreal site (pass allow_real=True to proceed unguaranteed)"
            )

    @property
    def geronimus_guaranteed(self) -> bool:
        """Existence hypothesis: kappa in C+- and s0star in the opposite
        closed half-plane, nonzero."""
        if self.s0star is None or self.s0star == 0 or self.kappa.imag == 0:
            return False
        if self.kappa.imag > 0:
            return self.s0star.imag <= 0
        return self.s0star.imag >= 0


@dataclass(frozen=True)
class TransformedCoeffs:
    """Result of one or more Darboux transforms.

    ``coeffs`` is the transformed prefix (its own, shorter n_max).  For
    Christoffel steps ``ratio_seq[n-1]`` stores P_n(kappa)/P_{n-1}(kappa) of
    the *input* prefix; for Geronimus steps ``a_seq[n]`` stores
    A_n = -R_n(kappa)/R_{n-1}(kappa) (A_0 = 0).
    """

    base: RecurrenceCoeffs
    sites: tuple[TransformPoint, ...]
    kinds: tuple[str, ...]
    coeffs: RecurrenceCoeffs
    ratio_seq: np.ndarray | None = None
    a_seq: np.ndarray | None = None
    notes: tuple[str, ...] = ()


# ---------------------------------------------------------------------------
# Christoffel transformation (double precision; ratios of the dominant P)
# ---------------------------------------------------------------------------

def christoffel(
    m: RecurrenceCoeffs | TransformedCoeffs, site: TransformPoint
) -> TransformedCoeffs:
    """Kernel-polynomial (Christoffel) transform of the prefix at site.kappa.

    lambda*_{n+1} = lambda_{n+1} P_{n+1}(k)P_{n-1}(k)/P_n(k)^2 and
    c*_{n+1} = c_{n+2} - P_{n+1}(k)/P_n(k) + P_{n+2}(k)/P_{n+1}(k), evaluated
    through consecutive ratios only.  The usable prefix shrinks by 2.

    Accepts a Geronimus ``TransformedCoeffs`` taken at the *same* kappa, in
    which case the kernel ratios come from the stored R-ratio sequence
    (rho*_1 = -s_0/s0star, rho*_n = lambda_n / w_{n-1}); recomputing them by
    forward recurrence would be exponentially ill-conditioned because kappa
    belongs to the transformed spectrum.
    """
    if isinstance(m, TransformedCoeffs):
        if (
            m.kinds
            and m.kinds[-1] == "geronimus"
            and m.a_seq is not None
            and m.sites[-1].kappa == complex(site.kappa)
        ):
            return _christoffel_of_geronimus(m, site)
        m = m.coeffs
    if m.n_max < 4:
        raise PrefixError("christoffel needs a prefix of length >= 4")
    kappa = site.kappa
    # The ratio run happens in extended precision: c*_{n+1} subtracts two
    # consecutive ratios whose difference decays geometrically, so double
    # arithmetic would floor the small entries at ~1e-16 absolute.
    dps = _auto_dps(m.c, m.lam, 1.0, kappa, m.n_max)
    out_len = m.n_max - 2
    with mp.workdps(dps):
        kap = mp.mpc(kappa)
        c_mp = [mp.mpc(z) for z in m.c]
        lam_mp = [mp.mpc(z) for z in m.lam]
        first = kap - c_mp[0]
        if abs(first) < _BREAKDOWN_RTOL * max(abs(kap), abs(c_mp[0]), 1):
            raise ExistenceError(
                f"kernel polynomials do not exist at kappa={kappa}", 1
            )
        rho = [first]
        for n in range(2, m.n_max + 1):
            term1 = kap - c_mp[n - 1]
            term2 = lam_mp[n - 2] / rho[-1]
            nxt = term1 - term2
            if abs(nxt) < _BREAKDOWN_RTOL * max(abs(term1), abs(term2)):
                raise ExistenceError(
                    f"kernel polynomials do not exist at kappa={kappa}", n
                )
            rho.append(nxt)
        c_out = [
            complex(c_mp[k + 1] - rho[k] + rho[k + 1]) for k in range(out_len)
        ]
        lam_out = [
            complex(lam_mp[k] * rho[k + 1] / rho[k]) for k in range(out_len - 1)
        ]
        rho_d = np.array([complex(r) for r in rho])
    s0_out = (m.c[0] - kappa) * m.s0
    coeffs = RecurrenceCoeffs(c=c_out, lam=lam_out, s0=s0_out)
    return TransformedCoeffs(
        base=m, sites=(site,), kinds=("christoffel",), coeffs=coeffs, ratio_seq=rho_d
    )


def _christoffel_of_geronimus(tc: TransformedCoeffs, site: TransformPoint) -> TransformedCoeffs:
    """Christoffel at the kappa of a preceding Geronimus step (inverse pair)."""
    base = tc.base
    gero = tc.coeffs
    kappa = site.kappa
    s0star = gero.s0
    n_in = gero.n_max
    w = -tc.a_seq[1:]  # w_n = R_n(kappa)/R_{n-1}(kappa)
    # rho*_n = P^{-*}_n(kappa)/P^{-*}_{n-1}(kappa); need n = 1..n_in-1
    rho = np.empty(n_in - 1, dtype=complex)
    rho[0] = -base.s0 / s0star
    rho[1:] = base.lam[: n_in - 2] / w[: n_in - 2]
    out_len = n_in - 2
    c_out = gero.c[1 : out_len + 1] - rho[:out_len] + rho[1 : out_len + 1]
    lam_out = gero.lam[: out_len - 1] * rho[1:out_len] / rho[: out_len - 1]
    s0_out = (gero.c[0] - kappa) * s0star
    coeffs = RecurrenceCoeffs(c=c_out, lam=lam_out, s0=s0_out)
    return TransformedCoeffs(
        base=gero,
        sites=(site,),
        kinds=("christoffel",),
        coeffs=coeffs,
        ratio_seq=rho,
        notes=("kernel-ratios-from-geronimus-inverse",),
    )


def kernel_eval(m: RecurrenceCoeffs, site: TransformPoint, n: int, z: complex) -> complex:
    """Monic kernel polynomial P*_n(kappa, z).

    Near z = kappa the two-term form is ill-conditioned; the value is then
    obtained from the transformed recurrence instead.
    """
    if n == 0:
        return 1.0 + 0.0j
    kappa = site.kappa
    if abs(z - kappa) <= _KERNEL_SWITCH:
        return eval_P(christoffel(m, site).coeffs, n, z)
    try:
        rho = ratio_sequence(m, kappa, "P", n_terms=n + 1)
    except ZeroHitError as exc:
        raise ExistenceError(
            f"kernel polynomials do not exist at kappa={kappa}", exc.index
        ) from exc
    p_n, p_n1, log_scale, _ = _scaled_run(m, n + 1, z, 1.0 + 0.0j, z - m.c[0])
    val = (p_n1 - rho.r(n + 1) * p_n) / (z - kappa)
    return val * math.exp(log_scale) if log_scale != 0.0 else val


def christoffel_two(
    m: RecurrenceCoeffs, k1: TransformPoint, k2: TransformPoint
) -> TransformedCoeffs:
    """Two-point Christoffel transform: the OPS of (x-k1)(x-k2) dmu.

    Implemented as two single-site transforms; existence is certified by
    Delta_n = P_{n+1}(k1)P_{n+1}(k2)[P_n(k2)/P_{n+1}(k2) - P_n(k1)/P_{n+1}(k1)]
    staying away from zero for every usable n.
    """
    notes = []
    repeated = k1.kappa == k2.kappa
    opposite = k1.kappa.imag * k2.kappa.imag < 0
    if not (opposite or repeated):
        notes.append("hypothesis-unmet:same-half-plane")
    if repeated:
        # Delta_n as stated degenerates for coincident points; the second
        # single-site transform below still certifies P*_n(kappa) != 0.
        notes.append("unverified-existence:repeated-site")
    else:
        try:
            rho1 = ratio_sequence(m, k1.kappa, "P").values
            rho2 = ratio_sequence(m, k2.kappa, "P").values
        except ZeroHitError as exc:
            raise ExistenceError("two-point transform does not exist", exc.index) from exc
        inv1 = 1.0 / rho1
        inv2 = 1.0 / rho2
        bracket = inv2 - inv1
        scale = np.maximum(np.abs(inv1), np.abs(inv2))
        bad = np.abs(bracket) <= _BREAKDOWN_RTOL * scale
        if np.any(bad):
            n = int(np.flatnonzero(bad)[0])
            raise ExistenceError(
                f"Delta_n vanishes within tolerance for kappa1={k1.kappa}, kappa2={k2.kappa}",
                n,
            )
    first = christoffel(m, k1)
    second = christoffel(first.coeffs, k2)
    return TransformedCoeffs(
        base=m,
        sites=(k1, k2),
        kinds=("christoffel", "christoffel"),
        coeffs=second.coeffs,
        ratio_seq=first.ratio_seq,
        notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# Geronimus transformation (mpmath-backed R-ratio runs)
# ---------------------------------------------------------------------------

def _auto_dps(c, lam, s0_over_s0star_mag: float, kappa: complex, length: int) -> int:
    """Precision budget: 1 digit per step per decade of worst-case error growth.

    The ratio map w -> (kappa - c) - lambda/w amplifies perturbations by
    |lambda|/|w|^2 ~ |f|^2/|lambda| when w tracks the minimal solution.
    """
    max_c = float(np.max(np.abs(c))) if len(c) else 0.0
    max_a = float(np.max(np.sqrt(np.abs(lam)))) if len(lam) else 0.0
    min_lam = float(np.min(np.abs(lam))) if len(lam) else 1.0
    bound = abs(kappa) + max_c + 2.0 * max_a + min(s0_over_s0star_mag, 1e3)
    amp = max(bound * bound / max(min_lam, 1e-300), 2.0)
    digits = 80 + int(math.ceil(length * math.log10(amp)))
    return int(min(max(digits, 60), 6000))


def _tail_seed(c_tail, lam_tail, z):
    """Smaller-modulus root of t^2 - (c-z) t + lambda: the continued-fraction
    tail value of a constant-coefficient Jacobi matrix."""
    half = (c_tail - z) / 2
    disc = mp.sqrt(half * half - lam_tail)
    t_plus, t_minus = half + disc, half - disc
    return t_plus if abs(t_plus) < abs(t_minus) else t_minus


def _cf_m_function(c_mp, lam_mp, z):
    """m(J; z) = ((J - z)^{-1} e_0, e_0) via the Jacobi continued fraction.

    Uses the full stored depth and seeds the tail with the asymptotic value
    from the last stored coefficients (exact for constant tails).
    """
    depth = len(c_mp)
    t = _tail_seed(c_mp[-1], lam_mp[-1], z)
    for j in range(depth, 1, -1):  # t_j = lambda_j / (c_j - z - t_{j+1})
        t = lam_mp[j - 2] / (c_mp[j - 1] - z - t)
    return 1 / (c_mp[0] - z - t)


def _w_run(c_mp, lam_mp, s0_mp, kappa_mp, s0star_mp, count):
    """w_n = R_n(kappa)/R_{n-1}(kappa) for n = 1..count, in current precision.

    Raises ExistenceError on a cancellation collapse (R_n(kappa) ~ 0).
    """
    term1 = kappa_mp - c_mp[0]
    term2 = s0_mp / s0star_mp
    w = term1 + term2
    if abs(w) < _BREAKDOWN_RTOL * max(abs(term1), abs(term2)):
        raise ExistenceError(
            "Geronimus transform does not exist for this (kappa, s0star)", 1
        )
    ws = [w]
    for n in range(2, count + 1):
        term1 = kappa_mp - c_mp[n - 1]
        term2 = lam_mp[n - 2] / w
        w = term1 - term2
        scale = max(abs(term1), abs(term2))
        if abs(w) < _BREAKDOWN_RTOL * scale or scale == 0:
            raise ExistenceError(
                "Geronimus transform does not exist for this (kappa, s0star)", n
            )
        ws.append(w)
    return ws


class GeronimusChain:
    """Iterated Geronimus transformations carried in extended precision.

    Keeps the current prefix as mpmath numbers so that step k+1 sees step k's
    coefficients (and Cauchy-transform normalizations) at full working
    precision; exports IEEE doubles on demand.
    """

    def __init__(self, m: RecurrenceCoeffs, dps: int | None = None):
        if dps is None:
            dps = _auto_dps(m.c, m.lam, 1.0, 2.0 + 2.0j, m.n_max)
        self.dps = dps
        self.base = m
        with mp.workdps(self.dps):
            self._c = [mp.mpc(z) for z in m.c]
            self._lam = [mp.mpc(z) for z in m.lam]
            self._s0 = mp.mpc(m.s0)
        self.steps: list[dict] = []

    @property
    def n_max(self) -> int:
        return len(self._c)

    def m_function(self, z: complex) -> complex:
        with mp.workdps(self.dps):
            return complex(_cf_m_function(self._c, self._lam, mp.mpc(z)))

    def cauchy_s0(self, z: complex):
        """integral d(current measure)/(t - z) = s0 * m(J; z), as mpc."""
        with mp.workdps(self.dps):
            return self._s0 * _cf_m_function(self._c, self._lam, mp.mpc(z))

    def apply(self, kappa: complex, s0star=None) -> None:
        """One Geronimus step; s0star None means the Cauchy-transform value."""
        with mp.workdps(self.dps):
            kappa_mp = mp.mpc(kappa)
            s0star_mp = mp.mpc(s0star) if s0star is not None else self.cauchy_s0(kappa)
            if s0star_mp == 0:
                raise ConfigurationError("s0star = 0: the transformed OPS does not exist")
            out_len = len(self._c) - 2
            if out_len < 2:
                raise PrefixError("prefix too short for another Geronimus step")
            ws = _w_run(self._c, self._lam, self._s0, kappa_mp, s0star_mp, out_len + 1)
            c_new = [self._c[0] + ws[0]]
            c_new += [self._c[k] - ws[k - 1] + ws[k] for k in range(1, out_len)]
            lam_new = [-ws[0] * self._s0 / s0star_mp]
            lam_new += [
                self._lam[k - 1] * ws[k] / ws[k - 1] for k in range(1, out_len - 1)
            ]
            a_seq = np.concatenate(([0.0 + 0.0j], [-complex(w) for w in ws]))
            self.steps.append(
                {"kappa": complex(kappa), "s0star": complex(s0star_mp), "a_seq": a_seq}
            )
            self._c, self._lam, self._s0 = c_new, lam_new, s0star_mp

    def coeffs(self) -> RecurrenceCoeffs:
        with mp.workdps(self.dps):
            return RecurrenceCoeffs(
                c=[complex(z) for z in self._c],
                lam=[complex(z) for z in self._lam],
                s0=complex(self._s0),
            )


def geronimus(m: RecurrenceCoeffs, site: TransformPoint) -> TransformedCoeffs:
    """Geronimus transform of the prefix at (site.kappa, site.s0star).

    lambda^{-*}_{n+1} = lambda_n R_n(k)R_{n-2}(k)/R_{n-1}(k)^2 and
    c^{-*}_{n+1} = c_{n+1} - R_n(k)/R_{n-1}(k) + R_{n+1}(k)/R_n(k), with
    c^{-*}_1 = c_1 - A_1 and lambda^{-*}_2 = -R_1(k) s_0/s0star; the result's
    s0 is s0star.  The R-ratio run happens in extended precision (see module
    docstring).
    """
    if site.s0star is None or site.s0star == 0:
        raise ConfigurationError(
            "Geronimus transform needs s0star != 0: the OPS does not exist otherwise"
        )
    if m.n_max < 4:
        raise PrefixError("geronimus needs a prefix of length >= 4")
    return _geronimus_impl(m, site, site.s0star)


def _geronimus_impl(m, site, s0star_value) -> TransformedCoeffs:
    dps = _auto_dps(m.c, m.lam, abs(m.s0 / complex(s0star_value)), site.kappa, m.n_max)
    chain = GeronimusChain(m, dps=dps)
    chain.apply(site.kappa, s0star_value)
    notes = () if site.geronimus_guaranteed else ("existence-checked-numerically",)
    step = chain.steps[-1]
    return TransformedCoeffs(
        base=m,
        sites=(site,),
        kinds=("geronimus",),
        coeffs=chain.coeffs(),
        a_seq=step["a_seq"],
        notes=notes,
    )


def geronimus_eval(
    m: RecurrenceCoeffs, site: TransformPoint, n: int, z: complex
) -> complex:
    """Monic Geronimus-transformed polynomial P^{-*}_n(kappa, z) = P_n + A_n P_{n-1}."""
    if n == 0:
        return 1.0 + 0.0j
    if n + 2 > m.n_max:
        raise PrefixError(f"degree {n} needs a prefix of length >= {n + 2}")
    # A_n only depends on the first n coefficients; truncating keeps the
    # extended-precision budget proportional to n.
    tc = geronimus(m.truncated(min(m.n_max, max(n + 2, 4))), site)
    return geronimus_eval_from(tc, n, z)


def geronimus_eval_from(tc: TransformedCoeffs, n: int, z: complex) -> complex:
    """P^{-*}_n(kappa, z) from a precomputed Geronimus TransformedCoeffs."""
    if tc.a_seq is None:
        raise ConfigurationError("transform does not carry a Geronimus A-sequence")
    if n == 0:
        return 1.0 + 0.0j
    m = tc.base
    a_n = tc.a_seq[n]
    prev, cur, log_scale, _ = _scaled_run(m, n, z, 1.0 + 0.0j, z - m.c[0])
    val = cur + a_n * prev
    return val * math.exp(log_scale) if log_scale != 0.0 else val


def cauchy_s0star(m: RecurrenceCoeffs, kappa: complex, quadrature_nodes: int = 4096) -> complex:
    """s0star = integral dmu(t)/(t - kappa) for a preset family.

    Computed two independent ways: kind-matched Gauss-Chebyshev quadrature
    with node doubling, and the Jacobi continued fraction; they must agree to
    1e-10.  The continued-fraction value is returned (it is the one usable at
    extended precision internally).
    """
    if m.family is None or m.family.kind == "custom":
        raise ConfigurationError(
            "Cauchy-transform s0star needs a preset family with a known weight"
        )
    kappa = complex(kappa)
    if kappa.imag == 0:
        lo, hi = m.family.support
        if lo <= kappa.real <= hi:
            raise ConfigurationError(
                f"kappa={kappa} lies inside the support [{lo}, {hi}]"
            )
    quad = adaptive_integral(
        m.family, lambda t: 1.0 / (t - kappa), stop=max(quadrature_nodes // 2, 512)
    )
    cf = GeronimusChain(m).m_function(kappa) * m.s0
    if abs(quad - cf) > 1e-10 * max(1.0, abs(cf)):
        raise QuadratureError(
            f"quadrature and continued-fraction Cauchy transforms disagree: "
            f"{quad} vs {cf}"
        )
    return cf


def geronimus_cauchy(
    m: RecurrenceCoeffs, kappa: complex, quadrature_nodes: int = 4096
) -> TransformedCoeffs:
    """Geronimus transform with s0star = integral dmu/(t - kappa).

    This choice makes the result the OPS of the complex measure
    dmu(t)/(t - kappa); applying it again at the conjugate point with
    s0star = integral dmu/|t - kappa|^2 lands on a positive measure.
    """
    kappa = complex(kappa)
    s0star = cauchy_s0star(m, kappa, quadrature_nodes)
    site = TransformPoint(kappa=kappa, s0star=s0star, allow_real=(kappa.imag == 0))
    # The continued fraction is re-evaluated inside the high-precision chain:
    # a double-rounded s0star would derail the minimal-solution ratios.
    dps = _auto_dps(m.c, m.lam, abs(m.s0 / s0star), kappa, m.n_max)
    chain = GeronimusChain(m, dps=dps)
    chain.apply(kappa, s0star=None)
    step = chain.steps[-1]
    return TransformedCoeffs(
        base=m,
        sites=(site,),
        kinds=("geronimus",),
        coeffs=chain.coeffs(),
        a_seq=step["a_seq"],
        notes=("s0star-from-cauchy-transform",),
    )
