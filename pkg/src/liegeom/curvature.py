"""Curvature of left-invariant metrics, computed in an orthonormal frame.

Every function here (except :func:`orthonormalize`) assumes the basis of the
given algebra is orthonormal for the metric. A general metric is handled by
first moving it into the structure constants with :func:`orthonormalize`.

Conventions, fixed by two anchors (Heisenberg Ricci = diag(-1/2, -1/2, 1/2),
hyperbolic(n) Ricci = -(n-1) I):

* ``gamma[k, i, j]`` = <nabla_{e_i} e_j, e_k>
* ``riemann[l, k, i, j]`` = R^l_{kij}, with R(e_i, e_j) e_k = R^l_{kij} e_l and
  R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y]
* ``ricci[k, j]`` = R^i_{kij}
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tolerances
from .algebra import LieAlgebra, change_basis, killing_form, trace_vector
from .errors import InvalidBasisChangeError

SIGN_CONVENTION = (
    "[e_i,e_j] = C^k_ij e_k; R(X,Y) = [nabla_X,nabla_Y] - nabla_[X,Y]; "
    "Ric_kj = R^i_kij (heisenberg3 Ric = diag(-1/2,-1/2,1/2), hyperbolic(n) Ric = -(n-1) I)"
)

# Reading of Z_ij = C^a_ab C^b_(ij) that agrees with the Koszul route.
Z_READING = "Z_ij = 1/2 a_b (C^i_jb + C^j_ib), a_b = C^a_ab"


@dataclass(frozen=True)
class MetricFrame:
    """Inner product g = s^T s on the algebra; s is any invertible matrix."""

    s: np.ndarray

    def __post_init__(self):
        s = np.array(self.s, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise InvalidBasisChangeError(f"metric frame must be square, got shape {s.shape}")
        if not np.all(np.isfinite(s)) or abs(np.linalg.det(s)) <= tolerances.get().det:
            raise InvalidBasisChangeError("metric frame matrix is singular")
        s.flags.writeable = False
        object.__setattr__(self, "s", s)

    @property
    def g(self) -> np.ndarray:
        return self.s.T @ self.s

    @classmethod
    def identity(cls, n: int) -> "MetricFrame":
        return cls(np.eye(n))

    @classmethod
    def from_metric(cls, g) -> "MetricFrame":
        """Upper-triangular frame from the Cholesky factor of an SPD matrix."""
        g = np.asarray(g, dtype=float)
        g = 0.5 * (g + g.T)
        try:
            low = np.linalg.cholesky(g)
        except np.linalg.LinAlgError:
            raise InvalidBasisChangeError("metric is not positive definite") from None
        return cls(low.T)


def orthonormalize(alg: LieAlgebra, m: MetricFrame) -> LieAlgebra:
    """Structure constants in a g-orthonormal basis, via change_basis(alg, s^-1)."""
    if not isinstance(m, MetricFrame):
        m = MetricFrame(m)
    return change_basis(alg, np.linalg.inv(m.s))


def connection(alg: LieAlgebra) -> np.ndarray:
    """Levi-Civita coefficients from the Koszul formula in an orthonormal frame."""
    c = alg.c
    # Gamma^k_ij = 1/2 (C^k_ij - C^i_jk + C^j_ki)
    return 0.5 * (c - np.einsum("ijk->kij", c) + np.einsum("jki->kij", c))


def riemann(alg: LieAlgebra, gamma: np.ndarray | None = None) -> np.ndarray:
    g = connection(alg) if gamma is None else gamma
    c = alg.c
    return (
        np.einsum("lim,mjk->lkij", g, g)
        - np.einsum("ljm,mik->lkij", g, g)
        - np.einsum("mij,lmk->lkij", c, g)
    )


def ricci_from_connection(alg: LieAlgebra) -> np.ndarray:
    return np.einsum("ikij->kj", riemann(alg))


def scalar_curvature(alg: LieAlgebra) -> float:
    return float(np.trace(ricci_from_connection(alg)))


def _r_part(c: np.ndarray) -> np.ndarray:
    n = c.shape[0]
    flat = c.reshape(n, n * n)
    # C^a_{bi} C^a_{bj}: contract the first two slots
    side = c.reshape(n * n, n)
    return 0.25 * flat @ flat.T - 0.5 * side.T @ side


def _z_part(c: np.ndarray) -> np.ndarray:
    t = np.einsum("aab->b", c)
    z = 0.5 * c @ t
    return z + z.T


def _killing(c: np.ndarray) -> np.ndarray:
    k = np.einsum("abi,baj->ij", c, c)
    return 0.5 * (k + k.T)


def ricci_array(c: np.ndarray) -> np.ndarray:
    """Closed-form Ricci of raw orthonormal-frame constants ``c[k, i, j]``."""
    return _r_part(c) - 0.5 * _killing(c) - _z_part(c)


def r_part(alg: LieAlgebra) -> np.ndarray:
    return _r_part(alg.c)


def z_part(alg: LieAlgebra) -> np.ndarray:
    return _z_part(alg.c)


def ricci_closed_form_matrix(alg: LieAlgebra) -> np.ndarray:
    """Ric = R - K/2 - Z straight from the structure constants."""
    return ricci_array(alg.c)


@dataclass(frozen=True)
class CurvatureReport:
    gamma: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    killing_part: np.ndarray
    r_part: np.ndarray
    z_part: np.ndarray
    z_reading: str = Z_READING

    def to_json(self) -> dict:
        return {
            "ricci": self.ricci.tolist(),
            "scalar": self.scalar,
            "killing_part": self.killing_part.tolist(),
            "r_part": self.r_part.tolist(),
            "z_part": self.z_part.tolist(),
            "z_reading": self.z_reading,
            "gamma": self.gamma.tolist(),
            "riemann": self.riemann.tolist(),
        }


def ricci_closed_form(alg: LieAlgebra) -> CurvatureReport:
    """Full report; ``ricci`` comes from the closed form, the rest from the connection."""
    gam = connection(alg)
    riem = riemann(alg, gam)
    k = killing_form(alg)
    rp = r_part(alg)
    zp = z_part(alg)
    ric = rp - 0.5 * k - zp
    return CurvatureReport(
        gamma=gam,
        riemann=riem,
        ricci=ric,
        scalar=float(np.trace(ric)),
        killing_part=k,
        r_part=rp,
        z_part=zp,
    )


def first_bianchi(alg: LieAlgebra) -> float:
    """max |R^l_{kij} + R^l_{ijk} + R^l_{jki}|."""
    r = riemann(alg)
    cyc = r + np.einsum("lijk->lkij", r) + np.einsum("ljki->lkij", r)
    return float(np.max(np.abs(cyc), initial=0.0))


def covariant_derivative(alg: LieAlgebra, t: np.ndarray, gamma: np.ndarray | None = None) -> np.ndarray:
    """(nabla_a T)_{bc} for a left-invariant 2-tensor: frame components are constant."""
    g = connection(alg) if gamma is None else gamma
    return -np.einsum("dab,dc->abc", g, t) - np.einsum("dac,bd->abc", g, t)


def box(alg: LieAlgebra, t: np.ndarray) -> np.ndarray:
    """Rough Laplacian nabla^a nabla_a T of a left-invariant 2-tensor."""
    g = connection(alg)
    d1 = covariant_derivative(alg, t, g)
    # (nabla^2 T)_{a e b c} = nabla_a (nabla T)_{e b c}
    d2 = (
        -np.einsum("dae,dbc->aebc", g, d1)
        - np.einsum("dab,edc->aebc", g, d1)
        - np.einsum("dac,ebd->aebc", g, d1)
    )
    return np.einsum("aabc->bc", d2)


def covariant_derivative_ricci(alg: LieAlgebra) -> np.ndarray:
    return covariant_derivative(alg, ricci_from_connection(alg))


def box_ricci(alg: LieAlgebra) -> np.ndarray:
    return box(alg, ricci_from_connection(alg))


def contracted_bianchi(alg: LieAlgebra) -> float:
    """max_b |nabla^a R_ab - 1/2 nabla_b R|; the second term is zero on a homogeneous space."""
    d = covariant_derivative_ricci(alg)
    return float(np.max(np.abs(np.einsum("aab->b", d)), initial=0.0))


def sectional_curvature(alg: LieAlgebra, i: int, j: int) -> float:
    """K(e_i, e_j) for orthonormal e_i, e_j (0-based)."""
    r = riemann(alg)
    return float(r[i, j, i, j])
