"""Rank-one solvable extensions s = R X0 + n of a nilpotent metric algebra."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tolerances
from ._threads import single_threaded
from .algebra import LieAlgebra, derivation_residual, is_nilpotent, validate
from .curvature import orthonormalize
from .errors import NotADerivationError, NotNilpotentError, NotSymmetricError, ValidationError
from .soliton import SearchConfig, SolitonCertificate, einstein_check, solve_nilsoliton, soliton_project

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class RankOneExtension:
    """``total`` has basis (e_1, ..., e_n, X0): X0 is the last vector, [X0, x] = scale * D x."""

    base: LieAlgebra
    d: np.ndarray
    scale: float
    total: LieAlgebra

    @property
    def x0_index(self) -> int:
        """1-based position of X0 in ``total``."""
        return self.total.dim

    @property
    def positive(self) -> bool:
        """Whether ad_X0 restricted to n has only positive eigenvalues."""
        return bool(np.all(np.linalg.eigvalsh(0.5 * (self.d + self.d.T)) * self.scale > 0))


def rank_one_extend(base: LieAlgebra, d, s: float) -> RankOneExtension:
    d = np.asarray(d, dtype=float)
    n = base.dim
    tol = tolerances.get()
    if d.shape != (n, n):
        raise ValidationError(f"derivation must be {n}x{n}, got {d.shape}")
    if not s > 0:
        raise ValidationError(f"scale must be positive, got {s}")
    if not is_nilpotent(base):
        raise NotNilpotentError(f"{base!r} is not nilpotent")
    scale_d = max(1.0, float(np.abs(d).max()))
    if np.abs(d - d.T).max() > tol.symmetric * scale_d:
        raise NotSymmetricError("ad_X0 must act on the nilradical by a symmetric derivation")
    res = derivation_residual(base, d)
    if res > tol.derivation * scale_d:
        raise NotADerivationError(f"matrix is not a derivation of the base (Leibniz residual {res:.3e})")
    total = _extend_unchecked(base, d, s)
    report = validate(total)
    if not report.ok:
        raise NotADerivationError(f"extension fails Jacobi (residual {report.max_residual:.3e})")
    return RankOneExtension(base=base, d=d, scale=float(s), total=total)


@dataclass(frozen=True)
class EinsteinExtension:
    extension: RankOneExtension
    einstein_lambda: float
    einstein_residual: float
    certificate: SolitonCertificate
    base_frame: np.ndarray  # metric frame s of the base used for the extension (g = s^T s)

    def to_json(self) -> dict:
        doc = self.extension.total.to_json()
        doc.update(
            {
                "x0_index": self.extension.x0_index,
                "scale": self.extension.scale,
                "einstein_lambda": self.einstein_lambda,
                "einstein_residual": self.einstein_residual,
                "ad_x0_positive": self.extension.positive,
                "base_metric_frame": self.base_frame.tolist(),
                "soliton": self.certificate.to_json(),
            }
        )
        return doc


def _golden_section(f, lo: float, hi: float, iterations: int = 200) -> float:
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(iterations):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
    return x1 if f1 <= f2 else x2


@single_threaded
def solve_einstein_extension(base: LieAlgebra, cfg: SearchConfig = SearchConfig()) -> EinsteinExtension:
    """Einstein solvmanifold over a nilsoliton base.

    D comes from the soliton certificate (after a metric search when the given
    frame is not a soliton); the scale of ad_X0 is then found by golden-section
    search on the Einstein residual over the bracket [0, 4 / sqrt(||D||_F)].

    An abelian base has no preferred soliton decomposition and every scale is
    Einstein; it is extended with D = I and scale 1, i.e. real hyperbolic space.
    """
    if not is_nilpotent(base):
        raise NotNilpotentError(f"{base!r} is not nilpotent")
    n = base.dim
    frame = np.eye(n)
    cert = soliton_project(base)
    if not cert.verified:
        mf, cert = solve_nilsoliton(base, cfg)
        frame = np.array(mf.s)
        base = orthonormalize(base, mf)
    if base.norm() == 0.0:
        ext = rank_one_extend(base, np.eye(n), 1.0)
        report = einstein_check(ext.total)
        return EinsteinExtension(ext, report.lam, report.residual, cert, frame)
    d = 0.5 * (cert.d + cert.d.T)

    def resid(s: float) -> float:
        if s <= 0:
            return np.inf
        return einstein_check(_extend_unchecked(base, d, s)).residual

    hi = 4.0 / np.sqrt(np.linalg.norm(d))
    s_best = _golden_section(resid, 0.0, hi)
    ext = rank_one_extend(base, d, s_best)
    report = einstein_check(ext.total)
    return EinsteinExtension(ext, report.lam, report.residual, cert, frame)


def _extend_unchecked(base: LieAlgebra, d: np.ndarray, s: float) -> LieAlgebra:
    n = base.dim
    c = np.zeros((n + 1, n + 1, n + 1))
    c[:n, :n, :n] = base.c
    # [X0, e_i] = s D e_i; stored with i < j as [e_i, X0] = -s D[k, i] e_k
    c[:n, :n, n] = -s * d
    return LieAlgebra(c, name=f"{base.name}+X0" if base.name else "")
