"""Small deterministic Levenberg-Marquardt for the seeded searches.

Central-difference Jacobian, SVD-based damped steps. Singular directions
below ``rcond`` of the largest are dropped, so the step has no component
along flat directions of the objective (the orbits along which soliton
metrics and su(2) triples come in continuous families). Without that,
rounding noise steers the iterate along the valley and reruns drift apart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LMResult:
    x: np.ndarray
    fun: np.ndarray
    nfev: int
    iterations: int


def jacobian(fun, x: np.ndarray, r0: np.ndarray, h: float = 1e-7) -> np.ndarray:
    jac = np.empty((r0.size, x.size))
    for k in range(x.size):
        step = h * max(1.0, abs(x[k]))
        xp, xm = x.copy(), x.copy()
        xp[k] += step
        xm[k] -= step
        jac[:, k] = (fun(xp) - fun(xm)) / (2 * step)
    return jac


def levenberg_marquardt(
    fun, x0, max_nfev: int = 1000, target: float = 0.0, rcond: float = 1e-10, mu0: float = 1e-3
) -> LMResult:
    """Minimise ||fun(x)||^2 until ||fun|| <= target, no progress, or max_nfev evaluations."""
    x = np.array(x0, dtype=float)
    r = fun(x)
    f = float(r @ r)
    nfev, it, mu = 1, 0, mu0
    while nfev < max_nfev and np.sqrt(f) > target:
        jac = jacobian(fun, x, r)
        nfev += 2 * x.size
        u, s, vt = np.linalg.svd(jac, full_matrices=False)
        if not s.size or s[0] == 0.0 or not np.isfinite(s[0]):
            break
        keep = s > rcond * s[0]
        s, g, vt = s[keep], (u[:, keep].T @ r), vt[keep]
        it += 1
        accepted = False
        while nfev < max_nfev and mu < 1e12:
            step = -(vt.T @ (s * g / (s * s + mu * s[0] ** 2)))
            trial = x + step
            rt = fun(trial)
            nfev += 1
            ft = float(rt @ rt)
            if ft < f:
                accepted = True
                progress = f - ft
                x, r, f = trial, rt, ft
                mu = max(mu / 3.0, 1e-15)
                break
            mu *= 4.0
        if not accepted or progress <= 1e-15 * f:
            break
    return LMResult(x, r, nfev, it)
