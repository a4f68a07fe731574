"""Coefficient data model, classical family presets, symmetrization, moments.

Index conventions follow the monic three-term recurrence

    z P_n(z) = P_{n+1}(z) + c_{n+1} P_n(z) + lambda_{n+1} P_{n-1}(z),

with P_0 = 1 and P_1 = z - c_1.  A finite prefix stores c_1..c_N in ``c``
(0-based: ``c[k] == c_{k+1}``) and lambda_2..lambda_N in ``lam``
(``lam[k] == lambda_{k+2}``).  lambda_1 plays no role in the recurrence; the
functional normalization L(1) is carried separately as ``s0``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigurationError, PrefixError, QuasiDefinitenessError

__all__ = [
    "CHEBYSHEV_KINDS",
    "DEFAULT_N_MAX",
    "Family",
    "RecurrenceCoeffs",
    "SymmetricJacobi",
    "family_coeffs",
    "symmetrize",
    "moments",
    "monic_jacobi_matrix",
    "symmetric_jacobi_matrix",
]

DEFAULT_N_MAX = 256

CHEBYSHEV_KINDS = ("chebyshev1", "chebyshev2", "chebyshev3", "chebyshev4")


@dataclass(frozen=True)
class Family:
    """An orthogonality-measure preset (or ``custom``) with known support."""

    kind: str
    support: tuple[float, float] | None = (-1.0, 1.0)

    def __post_init__(self):
        if self.kind not in CHEBYSHEV_KINDS + ("custom",):
            raise ConfigurationError(f"unknown family kind {self.kind!r}")


def _as_complex_readonly(x) -> np.ndarray:
    arr = np.asarray(x, dtype=complex).copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RecurrenceCoeffs:
    """Finite prefix of monic recurrence coefficients (a monic Jacobi matrix).

    Attributes
    ----------
    c : ndarray
        ``c[k] == c_{k+1}``, k = 0..n_max-1.
    lam : ndarray
        ``lam[k] == lambda_{k+2}``, k = 0..n_max-2; all entries nonzero.
    s0 : complex
        Normalization L(1) of the underlying functional (1 for presets).
    family : Family or None
        Set for presets; enables quadrature against the known weight.
    """

    c: np.ndarray
    lam: np.ndarray
    s0: complex = 1.0 + 0.0j
    family: Family | None = None

    def __post_init__(self):
        object.__setattr__(self, "c", _as_complex_readonly(self.c))
        object.__setattr__(self, "lam", _as_complex_readonly(self.lam))
        object.__setattr__(self, "s0", complex(self.s0))
        if self.c.ndim != 1 or self.lam.ndim != 1:
            raise ConfigurationError("c and lam must be one-dimensional")
        if len(self.c) < 1 or len(self.lam) != len(self.c) - 1:
            raise ConfigurationError(
                f"inconsistent prefix lengths: len(c)={len(self.c)}, "
                f"len(lam)={len(self.lam)} (expected len(c)-1)"
            )
        if np.any(self.lam == 0):
            k = int(np.flatnonzero(self.lam == 0)[0])
            raise QuasiDefinitenessError(f"lambda_{k + 2} = 0: functional is not quasi-definite")

    @property
    def n_max(self) -> int:
        return len(self.c)

    def c_n(self, n: int) -> complex:
        """c_n by its 1-based recurrence index (n = 1..n_max)."""
        if not 1 <= n <= self.n_max:
            raise PrefixError(f"c_{n} outside stored prefix (n_max={self.n_max})")
        return complex(self.c[n - 1])

    def lam_n(self, n: int) -> complex:
        """lambda_n by its recurrence index (n = 2..n_max)."""
        if not 2 <= n <= self.n_max:
            raise PrefixError(f"lambda_{n} outside stored prefix (n_max={self.n_max})")
        return complex(self.lam[n - 2])

    def truncated(self, n_max: int) -> "RecurrenceCoeffs":
        if not 1 <= n_max <= self.n_max:
            raise PrefixError(f"cannot truncate prefix of length {self.n_max} to {n_max}")
        return replace(self, c=self.c[:n_max], lam=self.lam[: n_max - 1])

    def to_dict(self) -> dict:
        d = {
            "v": 1,
            "kind": "recurrence",
            "n_max": self.n_max,
            "s0": [self.s0.real, self.s0.imag],
            "c": [[z.real, z.imag] for z in self.c],
            "lambda": [[z.real, z.imag] for z in self.lam],
        }
        if self.family is not None:
            d["family"] = self.family.kind
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RecurrenceCoeffs":
        if d.get("v") != 1 or d.get("kind", "recurrence") != "recurrence":
            raise ConfigurationError("unsupported coefficient schema")
        fam = d.get("family")
        return cls(
            c=[complex(re, im) for re, im in d["c"]],
            lam=[complex(re, im) for re, im in d["lambda"]],
            s0=complex(*d["s0"]),
            family=Family(fam) if fam else None,
        )

    def dumps(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def loads(cls, text: str) -> "RecurrenceCoeffs":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class SymmetricJacobi:
    """Complex-symmetric Jacobi data: b_k diagonal, a_k off-diagonal.

    ``b[k] == c_{k+1}`` and ``a[k]`` is a square root of ``lambda_{k+2}``;
    ``sqrt_branch[k]`` is +1 where the principal root was taken, -1 where it
    was negated.
    """

    b: np.ndarray
    a: np.ndarray
    sqrt_branch: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "b", _as_complex_readonly(self.b))
        object.__setattr__(self, "a", _as_complex_readonly(self.a))
        branch = self.sqrt_branch
        if branch is None:
            branch = np.ones(len(self.a), dtype=np.int8)
        branch = np.asarray(branch, dtype=np.int8).copy()
        branch.setflags(write=False)
        object.__setattr__(self, "sqrt_branch", branch)
        if len(self.a) != len(self.b) - 1:
            raise ConfigurationError("a must be one entry shorter than b")
        if len(self.sqrt_branch) != len(self.a):
            raise ConfigurationError("sqrt_branch must match a in length")
        if np.any(self.a == 0):
            raise QuasiDefinitenessError("off-diagonal entry a_k = 0")

    @property
    def n_max(self) -> int:
        return len(self.b)

    def to_monic(self) -> RecurrenceCoeffs:
        """Monic reduction: c_{k+1} = b_k, lambda_{k+2} = a_k^2."""
        return RecurrenceCoeffs(c=self.b, lam=self.a**2)

    def to_dict(self) -> dict:
        return {
            "v": 1,
            "kind": "symmetric",
            "n_max": self.n_max,
            "b": [[z.real, z.imag] for z in self.b],
            "a": [[z.real, z.imag] for z in self.a],
            "sqrt_branch": [int(s) for s in self.sqrt_branch],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SymmetricJacobi":
        if d.get("v") != 1 or d.get("kind") != "symmetric":
            raise ConfigurationError("unsupported symmetric-Jacobi schema")
        return cls(
            b=[complex(re, im) for re, im in d["b"]],
            a=[complex(re, im) for re, im in d["a"]],
            sqrt_branch=d.get("sqrt_branch"),
        )


def family_coeffs(kind: str | Family, n_max: int = DEFAULT_N_MAX) -> RecurrenceCoeffs:
    """Monic recurrence prefix of a classical Chebyshev family.

    All four kinds are normalized to probability measures on [-1, 1] so that
    s_0 = 1:  dx/(pi sqrt(1-x^2)) for the first kind, (2/pi) sqrt(1-x^2) dx
    for the second, (1/pi) sqrt((1+x)/(1-x)) dx and its mirror for the third
    and fourth.
    """
    if isinstance(kind, Family):
        family = kind
        kind = family.kind
    else:
        family = Family(kind)
    if kind == "custom":
        raise ConfigurationError("custom family has no preset coefficients")
    if n_max < 2:
        raise ConfigurationError("n_max must be at least 2")

    c = np.zeros(n_max, dtype=complex)
    lam = np.full(n_max - 1, 0.25, dtype=complex)
    if kind == "chebyshev1":
        lam[0] = 0.5  # T_2 = z^2 - 1/2 forces lambda_2 = 1/2
    elif kind == "chebyshev3":
        c[0] = 0.5
    elif kind == "chebyshev4":
        c[0] = -0.5
    return RecurrenceCoeffs(c=c, lam=lam, s0=1.0, family=family)


def symmetrize(m: RecurrenceCoeffs) -> SymmetricJacobi:
    """Symmetric Jacobi data b_k = c_{k+1}, a_k = principal sqrt(lambda_{k+2})."""
    a = np.sqrt(m.lam)
    return SymmetricJacobi(b=m.c, a=a, sqrt_branch=np.ones(len(a), dtype=np.int8))


def monic_jacobi_matrix(m: RecurrenceCoeffs, size: int) -> np.ndarray:
    """Dense size x size truncation of the monic Jacobi matrix (1's above)."""
    if size > m.n_max:
        raise PrefixError(f"truncation size {size} exceeds prefix length {m.n_max}")
    J = np.zeros((size, size), dtype=complex)
    idx = np.arange(size)
    J[idx, idx] = m.c[:size]
    if size > 1:
        J[idx[:-1], idx[:-1] + 1] = 1.0
        J[idx[:-1] + 1, idx[:-1]] = m.lam[: size - 1]
    return J


def symmetric_jacobi_matrix(J: SymmetricJacobi, size: int) -> np.ndarray:
    """Dense size x size truncation of a complex-symmetric Jacobi matrix."""
    if size > J.n_max:
        raise PrefixError(f"truncation size {size} exceeds stored length {J.n_max}")
    M = np.zeros((size, size), dtype=complex)
    idx = np.arange(size)
    M[idx, idx] = J.b[:size]
    if size > 1:
        M[idx[:-1], idx[:-1] + 1] = J.a[: size - 1]
        M[idx[:-1] + 1, idx[:-1]] = J.a[: size - 1]
    return M


def moments(m: RecurrenceCoeffs, count: int) -> np.ndarray:
    """Moments s_0..s_count, s_j = (J^j e_0, e_0) * s0.

    Computed by repeated tridiagonal matrix-vector products on a truncation
    large enough that the boundary is never reached (a length-j path from
    index 0 back to 0 visits indices <= j/2).
    """
    if count < 0:
        raise ConfigurationError("count must be nonnegative")
    if count > m.n_max:
        raise PrefixError(
            f"count={count} exceeds prefix length {m.n_max}: "
            "truncation would corrupt the requested moments"
        )
    size = min(count + 1, m.n_max)
    out = np.empty(count + 1, dtype=complex)
    out[0] = m.s0
    if count == 0:
        return out
    diag = m.c[:size]
    sub = m.lam[: size - 1]
    v = np.zeros(size, dtype=complex)
    v[0] = 1.0
    for j in range(1, count + 1):
        w = diag * v
        w[:-1] += v[1:]          # superdiagonal of ones
        w[1:] += sub * v[:-1]    # subdiagonal lambda
        v = w
        out[j] = v[0] * m.s0
    return out
