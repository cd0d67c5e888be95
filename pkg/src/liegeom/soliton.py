"""Ricci nilsolitons, the Einstein condition, and numerical witnesses.

A metric nilpotent Lie algebra is a nilsoliton when Ric = lambda I + D with D a
derivation. :func:`soliton_project` decides this for a fixed orthonormal frame
by linear least squares; :func:`solve_nilsoliton` searches the space of metrics.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import tolerances
from ._lm import levenberg_marquardt
from ._threads import single_threaded
from .algebra import (
    LieAlgebra,
    change_basis,
    derivation_residual,
    derivation_space,
    is_nilpotent,
)
from .curvature import MetricFrame, orthonormalize, ricci_closed_form_matrix, scalar_curvature
from .errors import BudgetExhaustedError, InvalidBasisChangeError, NotNilpotentError, SearchFailedError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    restarts: int = 8
    max_iter: int = 1000
    tol: float = 1e-10
    step: float = 0.1

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    def rngs(self) -> list[np.random.Generator]:
        """Independent generators, one per restart, derived from the seed."""
        children = np.random.SeedSequence(self.seed).spawn(self.restarts)
        return [np.random.default_rng(c) for c in children]


@dataclass(frozen=True)
class SolitonCertificate:
    lam: float
    d: np.ndarray
    residual: float  # ||Ric - lam I - D||_F
    derivation_residual: float
    bracket_norm: float  # ||C||_F of the orthonormal constants the certificate refers to

    @property
    def verified(self) -> bool:
        tol = tolerances.get()
        return self.residual <= tol.soliton and self.derivation_residual <= tol.derivation

    @property
    def scale_invariant(self) -> tuple[float, np.ndarray]:
        """(lam / ||C||^2, D / ||C||^2); undefined (zeros) for the abelian case."""
        n2 = self.bracket_norm ** 2
        if n2 == 0.0:
            return 0.0, np.zeros_like(self.d)
        return self.lam / n2, self.d / n2

    def to_json(self) -> dict:
        lam_hat, d_hat = self.scale_invariant
        return {
            "lambda": self.lam,
            "d": self.d.ravel().tolist(),
            "residual": self.residual,
            "derivation_residual": self.derivation_residual,
            "verified": self.verified,
            "scale_invariant": {"lambda_hat": lam_hat, "d_hat": d_hat.ravel().tolist()},
        }


def _projection_basis(alg: LieAlgebra) -> np.ndarray:
    n = alg.dim
    der = derivation_space(alg).matrix()
    cols = [np.eye(n).ravel()[:, None]]
    if der.size:
        cols.append(der)
    return np.hstack(cols)


def soliton_project(alg: LieAlgebra) -> SolitonCertificate:
    """Best (lambda, D) with D in Der(g), minimising ||Ric - lambda I - D||_F."""
    n = alg.dim
    ric = ricci_closed_form_matrix(alg)
    basis = _projection_basis(alg)
    coef, *_ = np.linalg.lstsq(basis, ric.ravel(), rcond=None)
    lam = float(coef[0])
    d = (basis[:, 1:] @ coef[1:]).reshape(n, n) if basis.shape[1] > 1 else np.zeros((n, n))
    resid = float(np.linalg.norm(ric - lam * np.eye(n) - d))
    return SolitonCertificate(
        lam=lam,
        d=d,
        residual=resid,
        derivation_residual=derivation_residual(alg, d),
        bracket_norm=alg.norm(),
    )


def _soliton_residual_vector(alg: LieAlgebra) -> np.ndarray:
    # component of Ric orthogonal to span{I} + Der, divided by ||C||^2 (scale free)
    ric = ricci_closed_form_matrix(alg).ravel()
    q, _ = np.linalg.qr(_projection_basis(alg))
    r = ric - q @ (q.T @ ric)
    norm2 = alg.norm() ** 2
    r = r / norm2 if norm2 > 0 else r
    # frames far outside the useful range can overflow; steer the solver back
    return np.where(np.isfinite(r), r, 1e6)


def n_triangular_params(n: int) -> int:
    return n * (n + 1) // 2 - 1


def triangular_frame(p: np.ndarray, n: int) -> np.ndarray:
    """Upper-triangular, positive diagonal, unit determinant matrix from n(n+1)/2 - 1 numbers."""
    p = np.asarray(p, float)
    logs = np.append(p[: n - 1], -np.sum(p[: n - 1]))
    s = np.diag(np.exp(logs))
    s[np.triu_indices(n, k=1)] = p[n - 1 :]
    return s


@single_threaded
def solve_nilsoliton(alg: LieAlgebra, cfg: SearchConfig = SearchConfig()) -> tuple[MetricFrame, SolitonCertificate]:
    """Search unit-determinant triangular metrics for a nilsoliton.

    Restart 0 starts at the identity metric (and returns immediately if that is
    already a soliton); later restarts start at seeded random perturbations.
    Each restart runs Levenberg-Marquardt on the scale-free residual. Raises
    :class:`SearchFailedError` carrying the best (frame, certificate) found.
    """
    if not is_nilpotent(alg):
        raise NotNilpotentError(f"{alg!r} is not nilpotent")
    n = alg.dim
    ident = MetricFrame.identity(n)
    cert = soliton_project(alg)
    if cert.residual <= cfg.tol:
        return ident, cert
    best = (ident, cert)
    npar = n_triangular_params(n)

    def fun(p):
        with np.errstate(all="ignore"):
            try:
                frame = MetricFrame(triangular_frame(p, n))
            except InvalidBasisChangeError:
                return np.full(n * n, 1e6)
            return _soliton_residual_vector(orthonormalize(alg, frame))

    for idx, rng in enumerate(cfg.rngs()):
        x0 = np.zeros(npar) if idx == 0 else cfg.step * 5 * rng.standard_normal(npar)
        try:
            sol = levenberg_marquardt(fun, x0, max_nfev=cfg.max_iter)
        except (np.linalg.LinAlgError, ValueError) as exc:
            log.debug("restart %d failed: %s", idx, exc)
            continue
        frame = MetricFrame(triangular_frame(sol.x, n))
        c = soliton_project(orthonormalize(alg, frame))
        log.debug("restart %d: residual %.3e", idx, c.residual)
        if c.residual < best[1].residual:
            best = (frame, c)
        if c.residual <= cfg.tol:
            break
    if best[1].residual > cfg.tol:
        raise SearchFailedError(
            f"nilsoliton search ended at residual {best[1].residual:.3e} > {cfg.tol:.1e}",
            residual=best[1].residual,
            best=best,
        )
    return best


@dataclass(frozen=True)
class EinsteinReport:
    lam: float
    residual: float


def einstein_check(alg: LieAlgebra) -> EinsteinReport:
    ric = ricci_closed_form_matrix(alg)
    n = alg.dim
    lam = float(np.trace(ric)) / n
    return EinsteinReport(lam, float(np.linalg.norm(ric - lam * np.eye(n))))


@single_threaded
def find_negative_scalar_metric(
    alg: LieAlgebra, cfg: SearchConfig = SearchConfig(), target: float = 0.0
) -> tuple[MetricFrame, float]:
    """Look for a unit-determinant metric with scalar curvature below ``target``.

    Plain gradient descent (central differences, backtracking step) over
    triangular frames. The identity metric is tried first. ``cfg.max_iter``
    bounds the number of gradient evaluations across all restarts.
    Exhausting it raises :class:`BudgetExhaustedError`, which proves nothing.
    """
    n = alg.dim
    if target > 0:
        raise ValueError("target must be <= 0")

    def scal(p):
        return scalar_curvature(orthonormalize(alg, MetricFrame(triangular_frame(p, n))))

    npar = n_triangular_params(n)
    best_p, best_val = np.zeros(npar), scal(np.zeros(npar))
    if best_val < target:
        return MetricFrame.identity(n), best_val
    budget = cfg.max_iter
    h = 1e-6
    per_restart = max(1, budget // cfg.restarts)
    for rng in cfg.rngs():
        x = 0.5 * rng.standard_normal(npar)
        fx = scal(x)
        eta = cfg.step
        for _ in range(per_restart):
            if budget <= 0 or fx < target:
                break
            budget -= 1
            grad = np.array([(scal(x + h * e) - scal(x - h * e)) / (2 * h) for e in np.eye(npar)])
            gnorm = np.linalg.norm(grad)
            if gnorm == 0.0 or not np.isfinite(gnorm):
                break
            while eta > 1e-12:
                trial = x - eta * grad / gnorm
                ft = scal(trial)
                if ft < fx - 1e-4 * eta * gnorm:
                    x, fx = trial, ft
                    eta *= 2.0
                    break
                eta *= 0.5
            else:
                break
        if fx < best_val:
            best_p, best_val = x, fx
        if best_val < target or budget <= 0:
            break
    frame = MetricFrame(triangular_frame(best_p, n))
    if best_val < target:
        return frame, best_val
    raise BudgetExhaustedError(
        f"no metric with scalar curvature < {target} found; best {best_val:.6g}",
        residual=best_val,
        best=(frame, best_val),
    )


@dataclass(frozen=True)
class Su2Report:
    found: bool
    triple: Optional[np.ndarray]  # rows x, y, z
    residual: float
    heuristic: bool = True  # a negative answer is never a proof

    def to_json(self) -> dict:
        return {
            "found": self.found,
            "triple": None if self.triple is None else self.triple.tolist(),
            "residual": self.residual,
            "heuristic": self.heuristic,
            "note": "found=false is heuristic, not a proof of absence",
        }


def su2_residual(alg: LieAlgebra, x, y, z) -> float:
    """Defect of [x,y]=z, [y,z]=x, [z,x]=y relative to the triple's smallest singular value.

    Dividing by sigma_min keeps degenerate triples (the zero triple, or
    nearly collinear vectors) away from 0.
    """
    return float(np.sum(_su2_vector(alg, np.concatenate([x, y, z])) ** 2))


def _su2_vector(alg: LieAlgebra, v: np.ndarray) -> np.ndarray:
    n = alg.dim
    b = alg.bracket
    x, y, z = v[:n], v[n : 2 * n], v[2 * n :]
    smin = np.linalg.svd(np.vstack([x, y, z]), compute_uv=False)[-1]
    r = np.concatenate([b(x, y) - z, b(y, z) - x, b(z, x) - y])
    return r / max(smin, 1e-300)


@single_threaded
def detect_su2(alg: LieAlgebra, cfg: SearchConfig = SearchConfig(restarts=64), threshold: float = 1e-8) -> Su2Report:
    """Look for x, y, z with [x,y]=z, [y,z]=x, [z,x]=y (a copy of su(2)).

    All three vectors are free, so any basis of a candidate subalgebra can be
    reached. A triple is reported only after its residual is recomputed.
    """
    n = alg.dim
    best_val, best_v = np.inf, None
    for rng in cfg.rngs():
        v0 = rng.standard_normal(3 * n)
        try:
            sol = levenberg_marquardt(
                lambda v: _su2_vector(alg, v), v0, max_nfev=cfg.max_iter, target=0.1 * np.sqrt(threshold)
            )
        except (np.linalg.LinAlgError, ValueError):
            continue
        if not np.all(np.isfinite(sol.x)):
            continue
        val = float(sol.fun @ sol.fun)
        if val < best_val:
            best_val, best_v = val, sol.x
        if best_val <= threshold:
            break
    if best_v is None:
        return Su2Report(False, None, float("inf"))
    triple = best_v.reshape(3, n)
    checked = su2_residual(alg, *triple)
    found = checked <= threshold and np.linalg.matrix_rank(triple, tol=1e-8 * np.abs(triple).max()) == 3
    return Su2Report(bool(found), triple if found else None, checked)


def ricci_squared_gradient(alg: LieAlgebra, step: float = 1e-5) -> float:
    """Largest derivative of tr(Ric^2) along the GL(n) orbit, brackets kept at unit norm.

    Directions are the elementary matrices E_ab acting by change of basis;
    derivatives are central differences with the given step.
    """
    n = alg.dim
    unit = alg.scaled(1.0 / alg.norm())

    def f(m):
        c = change_basis(unit, m)
        c = c.scaled(1.0 / c.norm())
        r = ricci_closed_form_matrix(c)
        return float(np.sum(r * r))

    worst = 0.0
    for a in range(n):
        for b in range(n):
            e = np.zeros((n, n))
            e[a, b] = step
            g = (f(np.eye(n) + e) - f(np.eye(n) - e)) / (2 * step)
            worst = max(worst, abs(g))
    return worst
