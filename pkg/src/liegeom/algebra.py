"""Lie algebras given by structure constants.

Index convention: ``c[k, i, j]`` is C^k_{ij} in ``[e_i, e_j] = C^k_{ij} e_k``.
When a metric is written with left-invariant one-forms, the constants follow
from ``d omega^k = -1/2 C^k_{ij} omega^i ^ omega^j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import tolerances
from .errors import InvalidBasisChangeError, SchemaError


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Structure constants of an n-dimensional real Lie algebra.

    Only the entries with ``i < j`` of the input array are read; the rest is
    mirrored so that the stored array is exactly antisymmetric. The stored
    array is read-only.
    """

    c: np.ndarray
    name: str = ""

    def __post_init__(self):
        raw = np.array(self.c, dtype=float)
        if raw.ndim != 3 or not (raw.shape[0] == raw.shape[1] == raw.shape[2]) or raw.shape[0] < 1:
            raise SchemaError(f"structure constants must have shape (n, n, n), got {raw.shape}")
        upper = np.triu(np.ones(raw.shape[1:], dtype=bool), k=1)
        c = np.where(upper[None, :, :], raw, 0.0)
        c = c - c.transpose(0, 2, 1)
        c.flags.writeable = False
        object.__setattr__(self, "c", c)

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    @classmethod
    def from_brackets(cls, dim: int, brackets, name: str = "") -> "LieAlgebra":
        """Build from ``(i, j, k, c)`` tuples meaning C^k_{ij} = c, 1-based, i < j."""
        arr = np.zeros((dim, dim, dim))
        seen = set()
        for entry in brackets:
            i, j, k, val = entry
            key = (i, j, k)
            if key in seen:
                raise SchemaError(f"duplicate bracket entry (i={i}, j={j}, k={k})")
            seen.add(key)
            for label, idx in (("i", i), ("j", j), ("k", k)):
                if not 1 <= idx <= dim:
                    raise SchemaError(f"bracket entry {key}: index {label}={idx} out of range 1..{dim}")
            if not i < j:
                raise SchemaError(f"bracket entry {key}: requires i < j")
            arr[k - 1, i - 1, j - 1] = val
        return cls(arr, name=name)

    def brackets(self, tol: float = 0.0) -> list[tuple[int, int, int, float]]:
        """Nonzero entries as 1-based ``(i, j, k, c)`` with ``i < j``."""
        n = self.dim
        out = []
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(n):
                    v = float(self.c[k, i, j])
                    if abs(v) > tol:
                        out.append((i + 1, j + 1, k + 1, v))
        return out

    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("kij,i,j->k", self.c, np.asarray(x, float), np.asarray(y, float))

    def scaled(self, s: float) -> "LieAlgebra":
        return LieAlgebra(s * self.c, name=self.name)

    def norm(self) -> float:
        """Frobenius norm of the full (antisymmetric) constant array."""
        return float(np.linalg.norm(self.c))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "brackets": [{"i": i, "j": j, "k": k, "c": v} for i, j, k, v in self.brackets()],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "LieAlgebra":
        if not isinstance(doc, dict):
            raise SchemaError("algebra document must be a JSON object")
        dim = doc.get("dim")
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
            raise SchemaError(f"field 'dim' must be a positive integer, got {dim!r}")
        entries = doc.get("brackets", [])
        if not isinstance(entries, list):
            raise SchemaError("field 'brackets' must be a list")
        tuples = []
        for pos, e in enumerate(entries):
            if not isinstance(e, dict):
                raise SchemaError(f"brackets[{pos}] must be an object")
            try:
                i, j, k, val = e["i"], e["j"], e["k"], e["c"]
            except KeyError as missing:
                raise SchemaError(f"brackets[{pos}] is missing field {missing}") from None
            for label, idx in (("i", i), ("j", j), ("k", k)):
                if not isinstance(idx, int) or isinstance(idx, bool):
                    raise SchemaError(f"brackets[{pos}].{label} must be an integer")
            if not isinstance(val, (int, float)) or isinstance(val, bool):
                raise SchemaError(f"brackets[{pos}].c must be a number")
            tuples.append((i, j, k, float(val)))
        return cls.from_brackets(dim, tuples, name=str(doc.get("name", "")))

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<LieAlgebra{label} dim={self.dim}>"


@dataclass(frozen=True)
class BasisChange:
    """Invertible matrix M; new basis vectors are e'_i = M^m_i e_m."""

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidBasisChangeError(f"basis change must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)) or abs(np.linalg.det(m)) <= tolerances.get().det:
            raise InvalidBasisChangeError("basis change matrix is singular")
        m.flags.writeable = False
        object.__setattr__(self, "m", m)

    @property
    def condition_number(self) -> float:
        return float(np.linalg.cond(self.m))


@dataclass(frozen=True)
class JacobiReport:
    max_residual: float
    ok: bool
    worst: tuple[int, int, int, int]  # 1-based (i, j, k, l)


def jacobi_tensor(alg: LieAlgebra) -> np.ndarray:
    """J[i, j, k, l], the e_l component of the cyclic Jacobi sum over (i, j, k)."""
    c = alg.c
    t = np.einsum("mij,lkm->ijkl", c, c)
    return t + np.einsum("jkil->ijkl", t) + np.einsum("kijl->ijkl", t)


def validate(alg: LieAlgebra) -> JacobiReport:
    j = np.abs(jacobi_tensor(alg))
    worst_val = float(j.max()) if j.size else 0.0
    # first index (lexicographic) within rounding of the maximum
    cand = np.argwhere(j >= worst_val * (1 - 1e-12))
    worst = tuple(int(v) + 1 for v in cand[0])
    return JacobiReport(worst_val, worst_val <= tolerances.get().identity, worst)


def change_basis(alg: LieAlgebra, b) -> LieAlgebra:
    """Constants in the basis e'_i = M^m_i e_m:  C'^k_{ij} = (M^-1)^k_l C^l_{mn} M^m_i M^n_j."""
    if not isinstance(b, BasisChange):
        b = BasisChange(b)
    m = b.m
    if m.shape[0] != alg.dim:
        raise InvalidBasisChangeError(f"basis change is {m.shape[0]}x{m.shape[0]}, algebra has dim {alg.dim}")
    n = alg.dim
    t = (np.linalg.inv(m) @ alg.c.reshape(n, n * n)).reshape(n, n, n)
    c = m.T @ (t @ m)
    return LieAlgebra(c, name=alg.name)


def adjoint(alg: LieAlgebra, x) -> np.ndarray:
    """Matrix of ad_x:  (ad_x)^k_j = x^i C^k_{ij}."""
    return np.einsum("i,kij->kj", np.asarray(x, float), alg.c)


def killing_form(alg: LieAlgebra) -> np.ndarray:
    """K_ij = C^a_{bi} C^b_{aj} = tr(ad_{e_i} ad_{e_j})."""
    k = np.einsum("abi,baj->ij", alg.c, alg.c)
    return 0.5 * (k + k.T)


def trace_vector(alg: LieAlgebra) -> np.ndarray:
    """a_b = C^a_{ab}; note tr(ad_{e_b}) = -a_b."""
    return np.einsum("aab->b", alg.c)


def is_unimodular(alg: LieAlgebra) -> bool:
    return bool(np.max(np.abs(trace_vector(alg)), initial=0.0) <= tolerances.get().identity)


def _orthonormal_span(vectors: np.ndarray, n: int) -> np.ndarray:
    """Orthonormal basis (as columns) of the column span, by thresholded SVD."""
    if vectors.size == 0:
        return np.zeros((n, 0))
    u, s, _ = np.linalg.svd(vectors, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((n, 0))
    r = int(np.sum(s > tolerances.get().rank * max(s[0], 1.0)))
    return u[:, :r]


def _bracket_span(alg: LieAlgebra, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # all [a_p, b_q] as columns
    prods = np.einsum("kij,ip,jq->kpq", alg.c, a, b).reshape(alg.dim, -1)
    return _orthonormal_span(prods, alg.dim)


def lower_central_series(alg: LieAlgebra) -> list[int]:
    """Dimensions of g, [g, g], [g, [g, g]], ... until zero or stagnation."""
    n = alg.dim
    full = np.eye(n)
    cur = full
    dims = [n]
    while cur.shape[1] > 0:
        nxt = _bracket_span(alg, full, cur)
        dims.append(nxt.shape[1])
        if nxt.shape[1] == cur.shape[1]:
            break
        cur = nxt
    return dims


def derived_series(alg: LieAlgebra) -> list[int]:
    """Dimensions of g, [g, g], [[g, g], [g, g]], ... until zero or stagnation."""
    n = alg.dim
    cur = np.eye(n)
    dims = [n]
    while cur.shape[1] > 0:
        nxt = _bracket_span(alg, cur, cur)
        dims.append(nxt.shape[1])
        if nxt.shape[1] == cur.shape[1]:
            break
        cur = nxt
    return dims


def nilpotency_class(alg: LieAlgebra) -> Optional[int]:
    dims = lower_central_series(alg)
    return len(dims) - 1 if dims[-1] == 0 else None


def derived_length(alg: LieAlgebra) -> Optional[int]:
    dims = derived_series(alg)
    return len(dims) - 1 if dims[-1] == 0 else None


def is_nilpotent(alg: LieAlgebra) -> bool:
    return lower_central_series(alg)[-1] == 0


def is_solvable(alg: LieAlgebra) -> bool:
    return derived_series(alg)[-1] == 0


def is_semisimple(alg: LieAlgebra) -> bool:
    k = killing_form(alg)
    scale = np.max(np.abs(k), initial=0.0)
    if scale == 0.0:
        return False
    return bool(abs(np.linalg.det(k)) > 1e-10 * scale ** alg.dim)


@dataclass(frozen=True)
class AlgebraProfile:
    trace_vector: np.ndarray
    killing: np.ndarray
    unimodular: bool
    nilpotent: Optional[int]  # nilpotency class, None if not nilpotent
    solvable: Optional[int]  # derived length, None if not solvable
    semisimple: bool
    lower_central: list[int] = field(default_factory=list)
    derived: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "trace_vector": self.trace_vector.tolist(),
            "killing": self.killing.tolist(),
            "unimodular": self.unimodular,
            "nilpotent": self.nilpotent is not None,
            "nilpotency_class": self.nilpotent,
            "solvable": self.solvable is not None,
            "derived_length": self.solvable,
            "semisimple": self.semisimple,
            "lower_central_series": list(self.lower_central),
            "derived_series": list(self.derived),
        }


def profile(alg: LieAlgebra) -> AlgebraProfile:
    lcs = lower_central_series(alg)
    ds = derived_series(alg)
    return AlgebraProfile(
        trace_vector=trace_vector(alg),
        killing=killing_form(alg),
        unimodular=is_unimodular(alg),
        nilpotent=len(lcs) - 1 if lcs[-1] == 0 else None,
        solvable=len(ds) - 1 if ds[-1] == 0 else None,
        semisimple=is_semisimple(alg),
        lower_central=lcs,
        derived=ds,
    )


@dataclass(frozen=True)
class DerivationSpace:
    basis: list[np.ndarray]  # Frobenius-orthonormal n x n matrices

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> np.ndarray:
        """Basis flattened row-major into the columns of an (n*n, dim) array."""
        if not self.basis:
            return np.zeros((0, 0))
        return np.stack([d.ravel() for d in self.basis], axis=1)


def leibniz_operator(alg: LieAlgebra) -> np.ndarray:
    """Matrix of D -> (D[e_i,e_j] - [De_i,e_j] - [e_i,De_j])_{l,i,j}, acting on row-major vec(D)."""
    n = alg.dim
    c = alg.c
    eye = np.eye(n)
    # D[l, p] -> sum_k D[l,k] C[k,i,j]
    t1 = np.einsum("lp,qij->lijpq", eye, c)
    # -sum_m D[m,i] C[l,m,j]
    t2 = -np.einsum("ip,lqj->lijqp", eye, c)
    # -sum_m D[m,j] C[l,i,m]
    t3 = -np.einsum("jp,liq->lijqp", eye, c)
    return (t1 + t2 + t3).reshape(n ** 3, n * n)


def derivation_residual(alg: LieAlgebra, d) -> float:
    """max_{i,j} |D[e_i,e_j] - [De_i,e_j] - [e_i,De_j]|."""
    d = np.asarray(d, float)
    r = leibniz_operator(alg) @ d.ravel()
    return float(np.max(np.abs(r), initial=0.0))


def derivation_space(alg: LieAlgebra) -> DerivationSpace:
    n = alg.dim
    op = leibniz_operator(alg)
    _, s, vt = np.linalg.svd(op, full_matrices=True)
    smax = s[0] if s.size else 0.0
    cutoff = tolerances.get().rank * max(smax, 1.0)
    rank = int(np.sum(s > cutoff))
    return DerivationSpace([vt[r].reshape(n, n) for r in range(rank, n * n)])


def in_span(space: DerivationSpace, d, tol: float = 1e-8) -> bool:
    mat = space.matrix()
    v = np.asarray(d, float).ravel()
    if mat.size == 0:
        return bool(np.linalg.norm(v) <= tol)
    resid = v - mat @ (mat.T @ v)
    return bool(np.linalg.norm(resid) <= tol * max(1.0, np.linalg.norm(v)))

