"""Bundled example algebras."""

from __future__ import annotations

import numpy as np

from .algebra import LieAlgebra, validate
from .errors import SchemaError, UnknownAlgebraError


def abelian(n: int = 3) -> LieAlgebra:
    return LieAlgebra(np.zeros((n, n, n)), name=f"abelian({n})")


def heisenberg3(c: float = 1.0) -> LieAlgebra:
    return LieAlgebra.from_brackets(3, [(1, 2, 3, c)], name="heisenberg3")


def heisenberg5() -> LieAlgebra:
    """H-type algebra with one-dimensional centre: [e1,e2] = [e3,e4] = e5."""
    return LieAlgebra.from_brackets(5, [(1, 2, 5, 1.0), (3, 4, 5, 1.0)], name="heisenberg5")


def nil4(a: float = 1.0) -> LieAlgebra:
    """Filiform 4-dim algebra of the metric dw^2 + (dx - a y dw)^2 + (dy - a z dw)^2 + dz^2.

    Frame (dw, dx - a y dw, dy - a z dw, dz); exterior derivatives give
    [e1, e3] = -a e2 and [e1, e4] = -a e3.
    """
    return LieAlgebra.from_brackets(4, [(1, 3, 2, -a), (1, 4, 3, -a)], name="nil4")


def hyperbolic(n: int = 3) -> LieAlgebra:
    """Basis (X0, X1, ..., X_{n-1}) with [X0, Xi] = Xi; real hyperbolic n-space."""
    return LieAlgebra.from_brackets(n, [(1, i, i, 1.0) for i in range(2, n + 1)], name=f"hyperbolic({n})")


def su2() -> LieAlgebra:
    return LieAlgebra.from_brackets(3, [(1, 2, 3, 1.0), (2, 3, 1, 1.0), (1, 3, 2, -1.0)], name="su2")


def sl2r() -> LieAlgebra:
    return LieAlgebra.from_brackets(3, [(1, 2, 2, 2.0), (1, 3, 3, -2.0), (2, 3, 1, 1.0)], name="sl2r")


# name -> (factory, number of accepted parameters, whether the parameter is an integer dimension)
_ENTRIES = {
    "abelian": (abelian, 1, True),
    "heisenberg3": (heisenberg3, 1, False),
    "heisenberg5": (heisenberg5, 0, False),
    "nil4": (nil4, 1, False),
    "hyperbolic": (hyperbolic, 1, True),
    "su2": (su2, 0, False),
    "sl2r": (sl2r, 0, False),
}

NAMES = tuple(_ENTRIES)


def catalog(name: str, params=()) -> LieAlgebra:
    """Look up a bundled algebra, e.g. ``catalog("nil4", [2.0])``."""
    try:
        factory, nparams, integral = _ENTRIES[name]
    except KeyError:
        raise UnknownAlgebraError(f"unknown algebra {name!r}; known: {', '.join(NAMES)}") from None
    params = list(params or ())
    if len(params) > nparams:
        raise SchemaError(f"{name} takes at most {nparams} parameter(s), got {len(params)}")
    if integral:
        args = []
        for p in params:
            if float(p) != int(p) or int(p) < 1:
                raise SchemaError(f"{name}: dimension parameter must be a positive integer, got {p}")
            args.append(int(p))
        if name == "hyperbolic" and args and args[0] < 2:
            raise SchemaError("hyperbolic(n) needs n >= 2")
    else:
        args = [float(p) for p in params]
    alg = factory(*args)
    report = validate(alg)
    assert report.ok, f"catalog entry {name} fails Jacobi: {report}"
    return alg


def standard_set() -> list[LieAlgebra]:
    """One instance of every catalog entry (seven algebras)."""
    return [abelian(3), heisenberg3(), heisenberg5(), nil4(), hyperbolic(3), su2(), sl2r()]
