import json
import pathlib

import jsonschema
import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from referencing import Registry, Resource

from liegeom.catalog import heisenberg3, hyperbolic, nil4, standard_set

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# lines collected by the acceptance module, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def well_conditioned(rng, n, max_log=0.7):
    """Q1 diag(exp(u)) Q2 with |u| <= max_log, so cond <= exp(2 max_log)."""
    q1, _ = np.linalg.qr(rng.standard_normal((n, n)))
    q2, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return q1 @ np.diag(np.exp(rng.uniform(-max_log, max_log, n))) @ q2


def rotation(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] *= -1
    return q


def all_catalog():
    """The standard seven plus parameter variants."""
    return standard_set() + [heisenberg3(2.0), nil4(0.5), nil4(2.0), hyperbolic(2), hyperbolic(5)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


SCHEMA_DIR = pathlib.Path(__file__).resolve().parents[1] / "docs" / "schemas"


def schema_validator(name):
    """Draft 2020-12 validator for docs/schemas/<name>.schema.json, with cross-file $refs resolved."""
    docs = {p.name: json.loads(p.read_text()) for p in SCHEMA_DIR.glob("*.schema.json")}
    registry = Registry().with_resources((k, Resource.from_contents(v)) for k, v in docs.items())
    return jsonschema.Draft202012Validator(docs[f"{name}.schema.json"], registry=registry)
