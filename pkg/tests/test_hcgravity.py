import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from liegeom.algebra import change_basis
from liegeom.catalog import abelian, heisenberg3, heisenberg5, hyperbolic, nil4, sl2r, su2
from liegeom.curvature import MetricFrame, orthonormalize, ricci_from_connection, scalar_curvature
from liegeom.hcgravity import (
    HCParameters,
    check_solution,
    invariant_product,
    lagrangian_density,
    phi_tensor,
    solve_parameters,
)
from liegeom.jsonio import dumps

from conftest import rotation, schema_validator, well_conditioned


def einstein_lambda_cc(lam, n, alpha, beta):
    return -(lam * (1 - n / 2) + 2 * lam ** 2 * (1 - n / 4) * (n * alpha + beta))


def test_abelian_is_flat():
    for a, b in [(0, 0), (1.3, -0.4)]:
        assert np.array_equal(phi_tensor(abelian(4), a, b), np.zeros((4, 4)))
    assert lagrangian_density(abelian(3), HCParameters(2.0, 1.0, 0.0)) == 0.0
    sol = solve_parameters(abelian(3))
    assert not sol.empty and sol.dimension == 2
    # flat space needs Lambda = 0 and nothing else
    assert np.allclose(sol.basis[:, 2], 0) and abs(sol.offset[2]) < 1e-14


def test_phi_is_einstein_tensor_at_zero_coupling():
    alg = nil4()
    ric = ricci_from_connection(alg)
    assert np.allclose(phi_tensor(alg, 0, 0), ric - 0.5 * np.trace(ric) * np.eye(4), atol=1e-14)


@pytest.mark.parametrize(
    "params",
    [HCParameters(0.5, 0.0, -0.25), HCParameters(0.0, 1 / 3, -0.25), HCParameters(2.0, -1.0, -0.25)],
)
def test_nil4_members(params):
    rep = check_solution(nil4(), params)
    assert rep.residual <= 1e-10
    assert abs(rep.lagrangian_density) <= 1e-12
    assert np.allclose(rep.phi, rep.phi.T, atol=1e-11)


def test_nil4_off_family():
    assert check_solution(nil4(), HCParameters(0.5, 0.0, -0.3)).residual > 1e-3
    assert check_solution(nil4(), HCParameters(1.0, 0.0, -0.25)).residual > 1e-3


def test_su2_round_einstein_tensor():
    assert check_solution(su2(), HCParameters(0.0, 0.0, 0.25)).residual <= 1e-10


@pytest.mark.parametrize("alg, lam", [(su2(), 0.5), (hyperbolic(4), -3.0), (hyperbolic(3), -2.0), (hyperbolic(5), -4.0)])
def test_einstein_closed_form(alg, lam):
    n = alg.dim
    for a, b in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (0.7, -2.1)]:
        phi = phi_tensor(alg, a, b)
        assert np.allclose(phi, -einstein_lambda_cc(lam, n, a, b) * np.eye(n), atol=1e-11)
    sol = solve_parameters(alg)
    assert sol.dimension == 2 and sol.max_check_residual <= 1e-9
    for coords in [(0, 0), (1, 0), (0, 1), (-3.5, 2.0)]:
        a, b, cc = sol.point(coords)
        assert cc == pytest.approx(einstein_lambda_cc(lam, n, a, b), abs=1e-10)
    assert sol.invariant_products == []


@given(st.floats(-5, 5), st.floats(-5, 5))
def test_linearity(alpha, beta):
    for alg in (nil4(), heisenberg3(), sl2r()):
        p0 = phi_tensor(alg, 0, 0)
        pa = phi_tensor(alg, 1, 0) - p0
        pb = phi_tensor(alg, 0, 1) - p0
        assert np.allclose(phi_tensor(alg, alpha, beta), p0 + alpha * pa + beta * pb, atol=1e-11)


@given(st.integers(0, 2 ** 32 - 1))
def test_phi_rotation_covariant(seed):
    rng = np.random.default_rng(seed)
    q = rotation(rng, 4)
    base = orthonormalize(nil4(), MetricFrame(np.diag([1.0, 1.3, 0.8, 1.1])))
    rot = change_basis(base, q)
    assert np.allclose(phi_tensor(rot, 0.3, -0.2), q.T @ phi_tensor(base, 0.3, -0.2) @ q, atol=1e-10)


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
def test_nil4_family(a):
    sol = solve_parameters(nil4(a))
    assert sol.dimension == 1
    assert sol.max_check_residual <= 1e-9
    (prod,) = sol.invariant_products
    assert prod.form == (2.0, 3.0)
    assert prod.value == pytest.approx(-0.25, abs=1e-9)
    assert prod.label == "Lambda*(2*alpha + 3*beta)"
    # 2 alpha + 3 beta = 1/a^2, Lambda = -a^2/4
    for t in (-2.0, 0.0, 1.5):
        al, be, cc = sol.point(t)
        assert 2 * al + 3 * be == pytest.approx(1 / a ** 2, abs=1e-9)
        assert cc == pytest.approx(-(a ** 2) / 4, abs=1e-9)
        assert lagrangian_density(nil4(a), HCParameters(al, be, cc)) == pytest.approx(0, abs=1e-9)


@pytest.mark.parametrize("c", [1.0, 2.0, 0.3])
def test_heisenberg_family(c):
    sol = solve_parameters(heisenberg3(c))
    assert sol.dimension == 1
    (prod,) = sol.invariant_products
    assert prod.form == (1.0, 3.0)
    assert prod.value == pytest.approx(-1 / 8, abs=1e-9)
    for t in (-1.0, 2.0):
        p = HCParameters(*sol.point(t))
        assert check_solution(heisenberg3(c), p).residual <= 1e-9
        assert lagrangian_density(heisenberg3(c), p) == pytest.approx(0, abs=1e-9)


@pytest.mark.parametrize("alg", [nil4(), nil4(2.0), heisenberg3()], ids=lambda a: a.name)
@pytest.mark.parametrize("ell", [0.5, 2.0])
def test_rescaling_covariance(alg, ell):
    base = solve_parameters(alg)
    scaled = solve_parameters(alg.scaled(1 / ell))
    k = np.array([ell ** 2, ell ** 2, ell ** -2])
    for t in (-1.0, 0.0, 3.0):
        assert scaled.contains(k * base.point(t))
    for p, q in zip(base.invariant_products, scaled.invariant_products):
        assert p.form == q.form
        assert p.value == pytest.approx(q.value, abs=1e-9)
    assert invariant_product(k * base.offset, (2, 3)) == pytest.approx(invariant_product(base.offset, (2, 3)))


@given(st.integers(0, 2 ** 32 - 1))
def test_pure_r_squared_point(seed):
    # with beta = 0 and alpha = -1/(2R), Phi = -R g / 4, so any metric with R != 0 solves
    rng = np.random.default_rng(seed)
    for alg in (su2(), sl2r(), heisenberg5()):
        n = alg.dim
        a = orthonormalize(alg, MetricFrame(well_conditioned(rng, n, 0.3)))
        r = scalar_curvature(a)
        if abs(r) < 1e-3:
            continue
        assert check_solution(a, HCParameters(-0.5 / r, 0.0, r / 4)).residual <= 1e-9
        assert solve_parameters(a).contains([-0.5 / r, 0.0, r / 4], tol=1e-7)


def test_empty_family():
    # scalar-flat, three distinct Ricci eigenvalues: alpha drops out, leaving two unknowns for three equations
    t = 3 + 2 * np.sqrt(2)
    alg = orthonormalize(su2(), MetricFrame.from_metric(np.diag([1 / t, 2 / t, 1.0])))
    sol = solve_parameters(alg)
    assert sol.empty and sol.dimension == -1 and sol.offset is None
    assert sol.residual > 0.1
    assert not sol.contains([0, 0, 0])
    doc = json.loads(dumps(sol.to_json()))
    schema_validator("hc_solution").validate(doc)


def test_heisenberg5_family_exists():
    sol = solve_parameters(heisenberg5())
    assert not sol.empty and sol.max_check_residual <= 1e-9


def test_solution_json_schema():
    sol = solve_parameters(nil4())
    doc = json.loads(dumps(sol.to_json()))
    schema_validator("hc_solution").validate(doc)
    assert doc["coordinates"] == ["alpha", "beta", "Lambda"]
    assert doc["invariant_products"][0]["form"] == [2.0, 3.0]
    rep = check_solution(nil4(), HCParameters(0.5, 0.0, -0.25))
    schema_validator("hc_check").validate(json.loads(dumps(rep.to_json())))
