"""Numerical thresholds shared across the package.

The defaults suit double precision at dimension <= 10. They can be overridden
for a block of code with :func:`override`; the override is held in a context
variable, so concurrent threads keep their own settings.
"""

from __future__ import annotations

import contextlib
import contextvars
import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    identity: float = 1e-12  # exact-identity residuals (Jacobi, unimodularity)
    rank: float = 1e-10  # relative singular-value cutoff for subspaces/kernels
    derivation: float = 1e-10  # Leibniz residual accepted for a derivation
    symmetric: float = 1e-10  # asymmetry accepted for "symmetric" matrices
    soliton: float = 1e-10  # certificate residual counted as verified
    hc_empty: float = 1e-8  # least-squares residual above which no (alpha, beta, Lambda) exists
    det: float = 1e-12  # smallest |det| for an invertible basis change


_current: contextvars.ContextVar[Tolerances] = contextvars.ContextVar(
    "liegeom_tolerances", default=Tolerances()
)


def get() -> Tolerances:
    return _current.get()


@contextlib.contextmanager
def override(**changes: float):
    """Temporarily replace selected thresholds, e.g. ``override(rank=1e-9)``."""
    token = _current.set(dataclasses.replace(_current.get(), **changes))
    try:
        yield _current.get()
    finally:
        _current.reset(token)


def names() -> list[str]:
    return [f.name for f in dataclasses.fields(Tolerances)]
