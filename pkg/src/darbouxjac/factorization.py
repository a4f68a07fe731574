"""LDL^T / UDU^T factorizations of J - kappa I and the matrix-level Darboux
transforms J_C(kappa) = L^T L + kappa I and J_G(kappa) = U^T U + kappa I.

Entry recurrences (lower):  d_0 = b_0 - kappa,  d_j v_j = a_j,
d_{j+1} = b_{j+1} - kappa - d_j v_j^2.  Upper:  t_0 = 1, u_0^2 = 1/s0star
(the free parameter; this choice pins one factorization),
t_{j+1} = b_j - kappa - t_j u_j^2,  t_{j+1} u_{j+1} = a_j.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SymmetricJacobi
from .errors import ConfigurationError, FactorBreakdownError

__all__ = [
    "LowerFactor",
    "UpperFactor",
    "lu_factor",
    "ul_factor",
    "lower_from_upper",
    "build_JC",
    "build_JG",
]

_BREAKDOWN_RTOL = 1e-13


@dataclass(frozen=True)
class LowerFactor:
    """J - kappa I = (script-L) D (script-L)^T with unit lower bidiagonal
    script-L (subdiagonal v) and D = diag(d); sqrt_d holds the chosen roots
    for L = script-L D^(1/2)."""

    kappa: complex
    d: np.ndarray
    v: np.ndarray
    sqrt_d: np.ndarray

    def dense_L(self, size: int | None = None) -> np.ndarray:
        size = len(self.d) if size is None else size
        L = np.zeros((size, size), dtype=complex)
        idx = np.arange(size)
        L[idx, idx] = self.sqrt_d[:size]
        L[idx[1:], idx[:-1]] = self.v[: size - 1] * self.sqrt_d[: size - 1]
        return L

    def reconstruct(self) -> tuple[np.ndarray, np.ndarray]:
        """(diagonal, off-diagonal) of L D L^T; should equal J - kappa I."""
        diag = self.d.copy()
        diag[1:] += self.d[:-1] * self.v**2
        off = self.d[:-1] * self.v
        return diag, off


@dataclass(frozen=True)
class UpperFactor:
    """J - kappa I = (script-U) D (script-U)^T with upper bidiagonal script-U
    (diagonal u, unit superdiagonal) and D = diag(t)."""

    kappa: complex
    s0star: complex
    t: np.ndarray
    u: np.ndarray
    sqrt_t: np.ndarray

    def dense_U(self, size: int | None = None) -> np.ndarray:
        size = len(self.t) if size is None else size
        U = np.zeros((size, size), dtype=complex)
        idx = np.arange(size)
        U[idx, idx] = self.u[:size] * self.sqrt_t[:size]
        U[idx[:-1], idx[:-1] + 1] = self.sqrt_t[1:size]
        return U

    def reconstruct(self) -> tuple[np.ndarray, np.ndarray]:
        """(diagonal, off-diagonal) of U D U^T on the rows it determines."""
        n = len(self.t) - 1
        diag = self.t[:n] * self.u[:n] ** 2 + self.t[1 : n + 1]
        off = self.t[1 : n + 1][: n - 1] * self.u[1:n]
        return diag, off


def lu_factor(J: SymmetricJacobi, kappa: complex) -> LowerFactor:
    """LDL^T data of J - kappa I.

    Exists whenever the underlying polynomials do not vanish at kappa
    (guaranteed for real J and nonreal kappa); a pivot collapse raises
    FactorBreakdownError naming the index.
    """
    kappa = complex(kappa)
    n = J.n_max
    d = np.empty(n, dtype=complex)
    v = np.empty(n - 1, dtype=complex)
    d[0] = J.b[0] - kappa
    for j in range(n - 1):
        local = max(abs(J.b[j]), abs(kappa), abs(d[j - 1] * v[j - 1] ** 2) if j else 0.0)
        if abs(d[j]) <= _BREAKDOWN_RTOL * max(local, 1.0):
            raise FactorBreakdownError(j, "d")
        v[j] = J.a[j] / d[j]
        d[j + 1] = J.b[j + 1] - kappa - d[j] * v[j] ** 2
    return LowerFactor(kappa=kappa, d=d, v=v, sqrt_d=np.sqrt(d))


def ul_factor(J: SymmetricJacobi, kappa: complex, s0star: complex) -> UpperFactor:
    """UDU^T data of J - kappa I with the convention t_0 = 1, u_0^2 = 1/s0star."""
    kappa = complex(kappa)
    s0star = complex(s0star)
    if s0star == 0:
        raise ConfigurationError("ul_factor needs s0star != 0")
    n = J.n_max
    t = np.empty(n, dtype=complex)
    u = np.empty(n, dtype=complex)
    t[0] = 1.0
    u[0] = np.sqrt(1.0 / (s0star + 0j))
    for j in range(n - 1):
        t[j + 1] = J.b[j] - kappa - t[j] * u[j] ** 2
        local = max(abs(J.b[j]), abs(kappa), abs(t[j] * u[j] ** 2))
        if abs(t[j + 1]) <= _BREAKDOWN_RTOL * max(local, 1.0):
            raise FactorBreakdownError(j + 1, "t")
        u[j + 1] = J.a[j] / t[j + 1]
    return UpperFactor(kappa=kappa, s0star=s0star, t=t, u=u, sqrt_t=np.sqrt(t))


def _branch_record(a: np.ndarray) -> np.ndarray:
    principal = np.sqrt(a**2)
    branch = np.where(np.abs(a - principal) <= np.abs(a + principal), 1, -1)
    return branch.astype(np.int8)


def build_JC(f: LowerFactor) -> SymmetricJacobi:
    """J_C(kappa) = L^T L + kappa I, assembled entrywise from the factors.

    b^C_j = d_j (1 + v_j^2) + kappa and a^C_j = v_j sqrt(d_j d_{j+1}); the
    monic reduction reproduces the Christoffel-transformed coefficients.
    """
    n = len(f.d) - 1
    b = f.d[:n] * (1.0 + f.v[:n] ** 2) + f.kappa
    a = f.v[: n - 1] * f.sqrt_d[: n - 1] * f.sqrt_d[1:n]
    return SymmetricJacobi(b=b, a=a, sqrt_branch=_branch_record(a))


def lower_from_upper(f: UpperFactor) -> LowerFactor:
    """Closed-form lower factor of J_G(kappa) - kappa I.

    J_G - kappa I = U^T U by definition, and U^T is already lower bidiagonal,
    so d_j = t_j u_j^2 and v_j = sqrt(t_{j+1})/(u_j sqrt(t_j)) exactly.
    Re-deriving the pivots from the assembled J_G entries is exponentially
    ill-conditioned (kappa lies in the spectrum of J_G); this route is not.
    """
    n = len(f.t) - 1
    d = f.t[:n] * f.u[:n] ** 2
    v = f.sqrt_t[1:n] / (f.u[: n - 1] * f.sqrt_t[: n - 1])
    sqrt_d = f.u[:n] * f.sqrt_t[:n]
    return LowerFactor(kappa=f.kappa, d=d, v=v, sqrt_d=sqrt_d)


def build_JG(f: UpperFactor) -> SymmetricJacobi:
    """J_G(kappa) = U^T U + kappa I, assembled entrywise from the factors.

    b^G_0 = kappa + 1/s0star, b^G_j = t_j (1 + u_j^2) + kappa for j >= 1, and
    a^G_j = u_j sqrt(t_j t_{j+1}); the monic reduction reproduces the
    Geronimus-transformed coefficients.
    """
    n = len(f.t) - 1
    b = np.empty(n, dtype=complex)
    b[0] = f.t[0] * f.u[0] ** 2 + f.kappa
    b[1:] = f.t[1:n] * (1.0 + f.u[1:n] ** 2) + f.kappa
    a = f.u[: n - 1] * f.sqrt_t[: n - 1] * f.sqrt_t[1:n]
    return SymmetricJacobi(b=b, a=a, sqrt_branch=_branch_record(a))
