"""Ricci flow dg/dt = -2 Ric(g) of left-invariant metrics on a fixed algebra.

The metric lives in the fixed basis of the algebra; Ric(g) is evaluated by
orthonormalizing (Cholesky frame) and pulling the orthonormal Ricci back.
The brackets never change.
"""

from __future__ import annotations

import enum
import io
from dataclasses import dataclass, field

import numpy as np

from .algebra import LieAlgebra
from ._threads import single_threaded
from .curvature import MetricFrame, orthonormalize, ricci_array
from .errors import InvalidBasisChangeError, SPDLossError, StepUnderflowError
from .soliton import soliton_project


class Normalization(str, enum.Enum):
    NONE = "none"
    UNIT_VOLUME = "unit_volume"
    UNIT_BRACKET_NORM = "unit_bracket_norm"

    @classmethod
    def parse(cls, value) -> "Normalization":
        aliases = {"volume": cls.UNIT_VOLUME, "bracket": cls.UNIT_BRACKET_NORM}
        if isinstance(value, cls):
            return value
        if value in aliases:
            return aliases[value]
        return cls(value)


def _frame(g: np.ndarray) -> MetricFrame:
    try:
        return MetricFrame.from_metric(g)
    except InvalidBasisChangeError:
        raise SPDLossError("metric left the positive-definite cone") from None


@dataclass(frozen=True)
class FlowState:
    g: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        g = np.array(self.g, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError(f"metric must be square, got shape {g.shape}")
        if np.abs(g - g.T).max(initial=0.0) > 1e-13 * max(1.0, np.abs(g).max()):
            raise ValueError("metric is not symmetric")
        g = 0.5 * (g + g.T)
        if np.linalg.eigvalsh(g)[0] <= 0:
            raise SPDLossError("metric is not positive definite")
        g.flags.writeable = False
        object.__setattr__(self, "g", g)


def ricci_form(alg: LieAlgebra, g: np.ndarray) -> np.ndarray:
    """Ricci tensor of the metric g as a bilinear form in the algebra's basis."""
    # inlined orthonormalize: this is the inner loop of every flow
    try:
        s = np.linalg.cholesky(0.5 * (g + g.T)).T
    except np.linalg.LinAlgError:
        raise SPDLossError("metric left the positive-definite cone") from None
    n = alg.dim
    m = np.linalg.inv(s)
    c = m.T @ ((s @ alg.c.reshape(n, n * n)).reshape(n, n, n) @ m)
    out = s.T @ ricci_array(c) @ s
    return 0.5 * (out + out.T)


def flow_step(alg: LieAlgebra, state: FlowState, dt: float) -> FlowState:
    """One classical RK4 step; raises SPDLossError if any stage leaves the SPD cone."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    g = state.g

    def rhs(h):
        return -2.0 * ricci_form(alg, h)

    k1 = rhs(g)
    k2 = rhs(g + 0.5 * dt * k1)
    k3 = rhs(g + 0.5 * dt * k2)
    k4 = rhs(g + dt * k3)
    new = g + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    new = 0.5 * (new + new.T)
    _frame(new)
    return FlowState(new, state.t + dt)


@dataclass(frozen=True)
class FlowSample:
    t: float
    g: np.ndarray
    scalar: float
    soliton_residual: float
    scale_estimate: float


@dataclass
class FlowTrajectory:
    normalization: Normalization
    samples: list[FlowSample] = field(default_factory=list)

    @property
    def final(self) -> FlowSample:
        return self.samples[-1]

    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    def to_csv(self) -> str:
        n = self.samples[0].g.shape[0] if self.samples else 0
        iu = np.triu_indices(n)
        cols = ["t"] + [f"g_{i + 1}{j + 1}" for i, j in zip(*iu)] + ["scalar", "soliton_residual", "scale_estimate"]
        buf = io.StringIO(newline="")
        buf.write(",".join(cols) + "\n")
        for s in self.samples:
            vals = [s.t, *s.g[iu], s.scalar, s.soliton_residual, s.scale_estimate]
            buf.write(",".join(f"{float(v):.17g}" for v in vals) + "\n")
        return buf.getvalue()

    def summary(self) -> dict:
        f = self.final
        return {
            "normalization": self.normalization.value,
            "samples": len(self.samples),
            "t_final": f.t,
            "g_final": f.g.tolist(),
            "scalar_final": f.scalar,
            "soliton_residual_final": f.soliton_residual,
            "scale_estimate_final": f.scale_estimate,
        }


def _normalize(alg: LieAlgebra, g: np.ndarray, how: Normalization) -> np.ndarray:
    if how is Normalization.UNIT_VOLUME:
        return g / np.linalg.det(g) ** (1.0 / g.shape[0])
    if how is Normalization.UNIT_BRACKET_NORM:
        # scaling g by c scales the orthonormal constants by c^(-1/2)
        norm = orthonormalize(alg, _frame(g)).norm()
        return g * norm ** 2 if norm > 0 else g
    return g


def _sample(alg, g_raw, t, how, det0) -> FlowSample:
    g = _normalize(alg, g_raw, how)
    ortho = orthonormalize(alg, _frame(g))
    n = g.shape[0]
    scale = (np.linalg.det(g_raw) / det0) ** (1.0 / n)
    return FlowSample(
        float(t), g, float(np.trace(ricci_array(ortho.c))), soliton_project(ortho).residual, float(scale)
    )


@single_threaded
def integrate(
    alg: LieAlgebra,
    g0,
    t_max: float,
    dt: float,
    normalization="none",
    sample_every: int = 1,
) -> FlowTrajectory:
    """RK4 from t = 0 to t_max, halving the step whenever definiteness is lost.

    The unnormalized flow is integrated in its own time; the normalization is
    applied to the stored samples only (renormalizing the state every step
    would also rescale time). A sample is stored every ``sample_every`` steps
    and at t_max. ``scale_estimate`` is (det g(t) / det g0)^(1/n) of the raw flow.
    """
    how = Normalization.parse(normalization)
    if not dt > 0 or not t_max > 0:
        raise ValueError("dt and t_max must be positive")
    state = FlowState(np.asarray(g0, float), 0.0)
    det0 = float(np.linalg.det(state.g))
    traj = FlowTrajectory(how)
    traj.samples.append(_sample(alg, state.g, 0.0, how, det0))

    h = dt
    step = 0
    end = t_max * (1 - 1e-14)
    while state.t < end:
        h_try = min(h, t_max - state.t)
        try:
            state = flow_step(alg, state, h_try)
        except SPDLossError:
            h *= 0.5
            if h < 1e-12:
                raise StepUnderflowError(f"step size underflow at t = {state.t}", residual=state.t) from None
            continue
        step += 1
        if step % sample_every == 0 or state.t >= end:
            traj.samples.append(_sample(alg, state.g, state.t, how, det0))
    return traj


def normalized_brackets(alg: LieAlgebra, g) -> np.ndarray:
    """Unit-norm structure constants in the Cholesky orthonormal frame of g."""
    c = orthonormalize(alg, _frame(np.asarray(g, float))).c
    norm = np.linalg.norm(c)
    return c / norm if norm > 0 else c


def bracket_stationarity(alg: LieAlgebra, traj: FlowTrajectory) -> float:
    """max_t |C_hat(t) - C_hat(0)|, the drift of the normalized brackets along the flow."""
    ref = normalized_brackets(alg, traj.samples[0].g)
    return max(float(np.abs(normalized_brackets(alg, s.g) - ref).max()) for s in traj.samples)
