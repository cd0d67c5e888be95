"""The twelve acceptance criteria, one test each.

Every test appends a "PASS n: ..." or "FAIL n: ..." line that the terminal
summary prints after the run, then asserts.
"""

import subprocess
import sys
import time

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from liegeom.algebra import change_basis
from liegeom.catalog import abelian, heisenberg3, hyperbolic, nil4, standard_set, su2
from liegeom.curvature import (
    MetricFrame,
    contracted_bianchi,
    first_bianchi,
    orthonormalize,
    ricci_closed_form_matrix,
    ricci_from_connection,
    scalar_curvature,
)
from liegeom.extension import solve_einstein_extension
from liegeom.flow import bracket_stationarity, integrate
from liegeom.hcgravity import HCParameters, lagrangian_density, solve_parameters
from liegeom.jsonio import dumps
from liegeom.soliton import SearchConfig, find_negative_scalar_metric, soliton_project

from conftest import ACCEPTANCE_LINES, all_catalog, well_conditioned


def record(n, ok, text):
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'} {n}: {text}")
    assert ok, text


# artifact builders, shared by the criteria and the determinism check


def certificates_artifact():
    out = {}
    for name, alg in (("heisenberg3", heisenberg3()), ("nil4", nil4(1.0))):
        out[name] = soliton_project(alg).to_json()
    return dumps(out)


def extension_artifact():
    out = {}
    for name, alg in (("heisenberg3", heisenberg3()), ("nil4", nil4())):
        out[name] = solve_einstein_extension(alg).to_json()
    return dumps(out)


def milnor_artifact():
    frame, scal = find_negative_scalar_metric(su2(), SearchConfig(seed=0, max_iter=1000), target=-1.0)
    return dumps({"scalar": scal, "s": frame.s.tolist()}), scal


def flow_start(seed=0):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((3, 3))
    g0 = np.eye(3) + 0.3 * 0.5 * (a + a.T)
    w, v = np.linalg.eigh(g0)
    return (v * np.maximum(w, 1e-2)) @ v.T


def flow_artifact():
    traj = integrate(heisenberg3(), flow_start(0), 50.0, 0.01, "unit_bracket_norm", sample_every=10)
    return traj.to_csv(), traj


def test_criterion_01_ricci_routes_agree():
    rng = np.random.default_rng(2024)
    worst = 0.0
    algs = standard_set()
    assert len(algs) == 7
    for alg in algs:
        for _ in range(50):
            b = change_basis(alg, well_conditioned(rng, alg.dim))
            worst = max(worst, float(np.abs(ricci_closed_form_matrix(b) - ricci_from_connection(b)).max()))
    record(1, worst <= 1e-9, f"closed-form vs connection Ricci, 7 algebras x 50 bases, worst {worst:.2e} <= 1e-9")


@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(range(7)))
def test_criterion_01_property(seed, idx):
    alg = standard_set()[idx]
    b = change_basis(alg, well_conditioned(np.random.default_rng(seed), alg.dim))
    assert np.abs(ricci_closed_form_matrix(b) - ricci_from_connection(b)).max() <= 1e-9


def test_criterion_02_heisenberg_anchor():
    h = heisenberg3(1.0)
    err = max(
        np.abs(ricci_from_connection(h) - np.diag([-0.5, -0.5, 0.5])).max(),
        np.abs(ricci_closed_form_matrix(h) - np.diag([-0.5, -0.5, 0.5])).max(),
        abs(scalar_curvature(h) + 0.5),
    )
    record(2, err <= 1e-12, f"heisenberg3 Ricci diag(-1/2,-1/2,1/2), scalar -1/2, error {err:.1e} <= 1e-12")


def test_criterion_03_hyperbolic_anchor():
    err = 0.0
    for n in range(2, 7):
        h = hyperbolic(n)
        for ric in (ricci_from_connection(h), ricci_closed_form_matrix(h)):
            err = max(err, np.abs(ric + (n - 1) * np.eye(n)).max())
        err = max(err, abs(scalar_curvature(h) + n * (n - 1)))
    record(3, err <= 1e-11, f"hyperbolic(2..6) Ricci -(n-1)I, scalar -n(n-1), error {err:.1e} <= 1e-11")


def test_criterion_04_nilsoliton_certificates():
    cases = [
        (heisenberg3(), -1.5, np.diag([1.0, 1.0, 2.0])),
        (nil4(1.0), -1.5, np.diag([0.5, 2.0, 1.5, 1.0])),
    ]
    err, worst_res = 0.0, 0.0
    for alg, lam, d in cases:
        cert = soliton_project(alg)
        err = max(err, abs(cert.lam - lam), np.abs(cert.d - d).max())
        worst_res = max(worst_res, cert.residual, cert.derivation_residual)
    ok = err <= 1e-10 and worst_res <= 1e-10
    record(4, ok, f"(lambda, D) for heisenberg3 and nil4(1), error {err:.1e}, residuals {worst_res:.1e} <= 1e-10")


def test_criterion_05_nil4_identity():
    worst_prod, worst_density, dims, forms = 0.0, 0.0, set(), set()
    for a in (0.5, 1.0, 2.0):
        alg = nil4(a)
        sol = solve_parameters(alg)
        dims.add(sol.dimension)
        for p in sol.invariant_products:
            forms.add(p.form)
            worst_prod = max(worst_prod, abs(p.value + 0.25))
        for t in (-3.0, -1.0, 0.0, 0.5, 2.0):
            pt = sol.point(t)
            worst_prod = max(worst_prod, abs(pt[2] * (2 * pt[0] + 3 * pt[1]) + 0.25))
            worst_density = max(worst_density, abs(lagrangian_density(alg, HCParameters(*pt))))
    ok = dims == {1} and forms == {(2.0, 3.0)} and worst_prod <= 1e-9 and worst_density <= 1e-9
    record(
        5, ok,
        f"nil4(1/2,1,2): 1-parameter family, Lambda*(2alpha+3beta) = -1/4 within {worst_prod:.1e}, "
        f"density within {worst_density:.1e}",
    )


def test_criterion_06_heisenberg_identity():
    worst_prod, worst_density, dims, forms = 0.0, 0.0, set(), set()
    for c in (1.0, 2.0):
        alg = heisenberg3(c)
        sol = solve_parameters(alg)
        dims.add(sol.dimension)
        for p in sol.invariant_products:
            forms.add(p.form)
            worst_prod = max(worst_prod, abs(p.value + 0.125))
        for t in (-2.0, 0.0, 1.0, 4.0):
            pt = sol.point(t)
            worst_prod = max(worst_prod, abs(pt[2] * (pt[0] + 3 * pt[1]) + 0.125))
            worst_density = max(worst_density, abs(lagrangian_density(alg, HCParameters(*pt))))
    ok = dims == {1} and forms == {(1.0, 3.0)} and worst_prod <= 1e-9 and worst_density <= 1e-9
    record(
        6, ok,
        f"heisenberg3(1,2): Lambda*(alpha+3beta) = -1/8 within {worst_prod:.1e}, density within {worst_density:.1e}",
    )


def test_criterion_07_einstein_families():
    err, dims = 0.0, []
    for alg, lam in ((su2(), 0.5), (hyperbolic(4), -3.0)):
        n = alg.dim
        sol = solve_parameters(alg)
        dims.append(sol.dimension)
        if sol.empty:
            continue
        for coords in [(0, 0), (1, 0), (0, 1), (2.5, -1.5), (-4, 3)]:
            a, b, cc = sol.point(coords)
            closed = -(lam * (1 - n / 2) + 2 * lam ** 2 * (1 - n / 4) * (n * a + b))
            err = max(err, abs(cc - closed))
    ok = dims == [2, 2] and err <= 1e-10
    record(7, ok, f"su2 and hyperbolic(4): 2-parameter families, Lambda vs closed form within {err:.1e} <= 1e-10")


def test_criterion_08_einstein_extension():
    worst, lams = 0.0, []
    for alg in (heisenberg3(), nil4()):
        res = solve_einstein_extension(alg)
        worst = max(worst, res.einstein_residual)
        lams.append(res.einstein_lambda)
    exact = True
    for n in range(2, 7):
        res = solve_einstein_extension(abelian(n - 1))
        # the extension puts X0 last; hyperbolic(n) has it first
        p = [n - 1] + list(range(n - 1))
        exact &= bool(np.array_equal(res.extension.total.c[np.ix_(p, p, p)], hyperbolic(n).c))
    ok = worst <= 1e-9 and all(v < 0 for v in lams) and exact
    record(
        8, ok,
        f"extensions of heisenberg3, nil4: residual {worst:.1e} <= 1e-9, lambda {lams[0]:.4g}, {lams[1]:.4g} < 0; "
        f"abelian(n-1) -> hyperbolic(n) exact: {exact}",
    )


def test_criterion_09_milnor_witness():
    _, scal = milnor_artifact()
    t = 5.0
    oracle = scalar_curvature(orthonormalize(su2(), MetricFrame.from_metric(np.diag([1 / t, 1 / t, 1.0]))))
    oracle_ok = abs(oracle - (2 * t - t * t / 2)) <= 1e-12 and abs(oracle + 2.5) <= 1e-12
    ok = scal <= -1.0 and oracle_ok
    record(9, ok, f"su2 seed 0: scalar {scal:.4g} <= -1; diagonal stretch at t=5 gives {oracle:.6g} (expect -2.5)")


def test_criterion_10_flow_convergence():
    start = time.perf_counter()
    _, traj = flow_artifact()
    elapsed = time.perf_counter() - start
    final = traj.final.soliton_residual
    at_soliton = integrate(heisenberg3(), np.eye(3), 50.0, 0.01, "unit_bracket_norm", sample_every=10)
    assert soliton_project(heisenberg3()).verified
    drift = bracket_stationarity(heisenberg3(), at_soliton)
    ok = final <= 1e-6 and elapsed <= 10.0 and drift <= 1e-8
    record(
        10, ok,
        f"heisenberg3 normalized flow: residual {final:.1e} <= 1e-6 at t=50 in {elapsed:.2f}s <= 10s; "
        f"drift at the soliton {drift:.1e} <= 1e-8",
    )


def test_criterion_11_bianchi():
    rng = np.random.default_rng(11)
    worst_first, worst_second = 0.0, 0.0
    for alg in all_catalog():
        frames = [MetricFrame.identity(alg.dim)] + [MetricFrame(well_conditioned(rng, alg.dim)) for _ in range(5)]
        for frame in frames:
            o = orthonormalize(alg, frame)
            worst_first = max(worst_first, first_bianchi(o))
            worst_second = max(worst_second, contracted_bianchi(o))
    ok = worst_first <= 1e-10 and worst_second <= 1e-10
    record(11, ok, f"first Bianchi {worst_first:.1e}, contracted second Bianchi {worst_second:.1e} <= 1e-10")


@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(range(12)))
def test_criterion_11_property(seed, idx):
    alg = all_catalog()[idx]
    o = orthonormalize(alg, MetricFrame(well_conditioned(np.random.default_rng(seed), alg.dim)))
    assert first_bianchi(o) <= 1e-10
    assert contracted_bianchi(o) <= 1e-10


CLI_RUNS = [
    ["soliton", "-i", "nil4", "--metric", "-"],
    ["extend", "-i", "nil4"],
    ["search-negR", "-i", "su2", "--target", "-1", "--max-iter", "1000"],
    ["flow", "-i", "heisenberg3", "--t-max", "50", "--dt", "0.01", "--normalize", "bracket", "--sample-every", "100",
     "--csv", "-"],
]


def _cli(argv):
    stdin = b"[[1.0, 0.3, 0, 0], [0.3, 2.0, 0, 0], [0, 0, 1.5, 0.2], [0, 0, 0.2, 1.0]]" if "--metric" in argv else None
    res = subprocess.run([sys.executable, "-m", "liegeom", *argv, "--seed", "0"], input=stdin, capture_output=True)
    return res.returncode, res.stdout


def test_criterion_12_determinism():
    same = {}
    same["4"] = certificates_artifact() == certificates_artifact()
    same["8"] = extension_artifact() == extension_artifact()
    same["9"] = milnor_artifact()[0] == milnor_artifact()[0]
    same["10"] = flow_artifact()[0] == flow_artifact()[0]
    for argv in CLI_RUNS:
        first, second = _cli(argv), _cli(argv)
        same[f"cli {argv[0]}"] = first == second and first[0] == 0
    bad = [k for k, v in same.items() if not v]
    record(12, not bad, f"byte-identical reruns for criteria 4, 8, 9, 10 and their CLI runs; differing: {bad or 'none'}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
