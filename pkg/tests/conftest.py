import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from slicecalc.fixtures import random_paravector, random_paravector_operator

settings.register_profile(
    "default", deadline=None, max_examples=25, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@pytest.fixture(scope="session")
def oracles():
    return json.loads((DATA / "oracles.json").read_text())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def operator_and_point(seed: int, n: int = 2, d: int = 3, ratio: float = 0.5):
    """Random paravector operator with op_norm 1 and a point s with |s| = 1/ratio."""
    rng = np.random.default_rng(seed)
    T = random_paravector_operator(rng, n, d, 1.0)
    return T, random_paravector(rng, n, 1.0 / ratio)


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
