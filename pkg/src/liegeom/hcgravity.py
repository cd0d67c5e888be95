"""Quadratic-curvature field equation  Phi + Lambda g = 0  on homogeneous metrics.

The action density is R + alpha R^2 + beta Ric.Ric - 2 Lambda. For a
left-invariant metric R is constant, so the (g box - nabla nabla) R term
drops out and box(R g) = 0; only box Ric survives among the derivative terms.
Everything is evaluated in an orthonormal frame (g = identity).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import tolerances
from .algebra import LieAlgebra
from .curvature import box, riemann, ricci_from_connection


@dataclass(frozen=True)
class HCParameters:
    alpha: float
    beta: float
    lambda_cc: float

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.lambda_cc])


def phi_parts(alg: LieAlgebra) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(Phi_0, Phi_alpha, Phi_beta) with Phi = Phi_0 + alpha Phi_alpha + beta Phi_beta."""
    n = alg.dim
    g = np.eye(n)
    ric = ricci_from_connection(alg)
    ric = 0.5 * (ric + ric.T)
    r = float(np.trace(ric))
    einstein = ric - 0.5 * r * g
    phi0 = einstein
    phi_a = 2.0 * r * (ric - 0.25 * r * g)
    # R_{mu sigma nu rho} R^{sigma rho}; contracting slots 1 and 3 of riemann gives Ric
    rm_ric = np.einsum("mspr,sr->mp", riemann(alg), ric)
    phi_b = box(alg, einstein) + 2.0 * (rm_ric - 0.25 * g * np.sum(ric * ric))
    sym = lambda x: 0.5 * (x + x.T)  # noqa: E731
    return sym(phi0), sym(phi_a), sym(phi_b)


def phi_tensor(alg: LieAlgebra, alpha: float, beta: float) -> np.ndarray:
    p0, pa, pb = phi_parts(alg)
    return p0 + alpha * pa + beta * pb


def lagrangian_density(alg: LieAlgebra, params: HCParameters) -> float:
    ric = ricci_from_connection(alg)
    r = float(np.trace(ric))
    return r + params.alpha * r * r + params.beta * float(np.sum(ric * ric)) - 2.0 * params.lambda_cc


@dataclass(frozen=True)
class FieldEquationReport:
    phi: np.ndarray
    residual: float  # max |Phi + Lambda g|
    lagrangian_density: float

    def to_json(self) -> dict:
        return {"phi": self.phi.tolist(), "residual": self.residual, "lagrangian_density": self.lagrangian_density}


def check_solution(alg: LieAlgebra, params: HCParameters) -> FieldEquationReport:
    phi = phi_tensor(alg, params.alpha, params.beta)
    resid = float(np.abs(phi + params.lambda_cc * np.eye(alg.dim)).max())
    return FieldEquationReport(phi, resid, lagrangian_density(alg, params))


@dataclass(frozen=True)
class InvariantProduct:
    form: tuple[float, float]  # (p, q) of the linear form p alpha + q beta
    value: float  # Lambda * (p alpha + q beta), constant on the family

    @property
    def label(self) -> str:
        return f"Lambda*({_coef(self.form[0])}alpha + {_coef(self.form[1])}beta)"


def _coef(x: float) -> str:
    if x == 1:
        return ""
    if float(x).is_integer():
        return f"{int(x)}*"
    return f"{x:.17g}*"


@dataclass(frozen=True)
class HCSolutionSet:
    empty: bool
    offset: Optional[np.ndarray]  # a point (alpha, beta, Lambda) of the family
    basis: np.ndarray  # (k, 3) directions spanning the family
    residual: float  # least-squares residual of the linear system
    max_check_residual: float  # worst |Phi + Lambda g| over offset and offset + basis vectors
    invariant_products: list[InvariantProduct] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return -1 if self.empty else int(self.basis.shape[0])

    def point(self, coords) -> np.ndarray:
        coords = np.atleast_1d(np.asarray(coords, float))
        return self.offset + coords @ self.basis

    def contains(self, x, tol: float = 1e-8) -> bool:
        """Whether (alpha, beta, Lambda) lies on the affine family."""
        if self.empty:
            return False
        d = np.asarray(x, float) - self.offset
        if self.basis.size:
            d = d - self.basis.T @ (self.basis @ d)
        return bool(np.linalg.norm(d) <= tol * max(1.0, np.linalg.norm(x)))

    def to_json(self) -> dict:
        return {
            "empty": self.empty,
            "offset": None if self.offset is None else self.offset.tolist(),
            "basis": self.basis.tolist(),
            "residual": self.residual,
            "max_check_residual": self.max_check_residual,
            "coordinates": ["alpha", "beta", "Lambda"],
            "invariant_products": [
                {"label": p.label, "form": list(p.form), "value": p.value} for p in self.invariant_products
            ],
        }


def invariant_product(params, form: tuple[float, float]) -> float:
    """Lambda * (p alpha + q beta), unchanged by the rescaling (l^2 alpha, l^2 beta, Lambda / l^2)."""
    a, b, lam = np.asarray(params.as_array() if isinstance(params, HCParameters) else params, float)
    return float(lam * (form[0] * a + form[1] * b))


def _simple_form(p: float, q: float) -> tuple[float, float]:
    """Scale (p, q) to small coprime integers when the ratio is rational, else to p = 1."""
    if abs(p) < 1e-12 * max(abs(q), 1e-300):
        return 0.0, 1.0
    ratio = q / p
    frac = Fraction(ratio).limit_denominator(24)
    if abs(float(frac) - ratio) <= 1e-9 * max(1.0, abs(ratio)):
        return float(frac.denominator), float(frac.numerator)
    return 1.0, ratio


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(v)))
    return v if v[i] > 0 else -v


def solve_parameters(alg: LieAlgebra) -> HCSolutionSet:
    """All (alpha, beta, Lambda) for which the orthonormal-frame metric solves Phi + Lambda g = 0.

    The tensor equation is linear in the unknowns; its independent components
    (upper triangle, off-diagonal rows weighted by sqrt 2) form an
    overdetermined system solved through the SVD. Singular values below
    rank * s_max count as zero; the family is empty when the residual exceeds
    the ``hc_empty`` tolerance. Invariant products are reported when Lambda is
    constant on the family and the family has dimension one.
    """
    tol = tolerances.get()
    n = alg.dim
    p0, pa, pb = phi_parts(alg)
    iu = np.triu_indices(n)
    w = np.where(iu[0] == iu[1], 1.0, np.sqrt(2.0))
    a = np.column_stack([pa[iu] * w, pb[iu] * w, np.eye(n)[iu] * w])
    rhs = -p0[iu] * w
    u, s, vt = np.linalg.svd(a, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > tol.rank * smax)) if smax > 0 else 0
    coef = (u[:, :rank].T @ rhs) / s[:rank]
    x = vt[:rank].T @ coef
    residual = float(np.linalg.norm(a @ x - rhs))
    if residual > tol.hc_empty:
        return HCSolutionSet(True, None, np.zeros((0, 3)), residual, float("nan"))
    basis = np.array([_canonical_sign(v) for v in vt[rank:]]).reshape(-1, 3)

    def check(pt):
        return check_solution(alg, HCParameters(*pt)).residual

    worst = max([check(x)] + [check(x + v) for v in basis])
    products = []
    if basis.shape[0] == 1 and abs(basis[0, 2]) <= 1e-10:
        va, vb = basis[0, 0], basis[0, 1]
        form = _simple_form(-vb, va)
        products.append(InvariantProduct(form, invariant_product(x, form)))
    return HCSolutionSet(False, x, basis, residual, worst, products)
