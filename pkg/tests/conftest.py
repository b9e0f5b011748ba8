from __future__ import annotations

import sys

import numpy as np
import pytest

from ncpoincare.coeff_algebra import MatrixModel, build_subalgebra
from ncpoincare.models_rng import random_model, trial_rng

SPECS = ["scalars", "diagonal", {"type": "blocks", "sizes": [2, 1]}]


@pytest.fixture
def rng():
    return trial_rng(20261017, 0)


@pytest.fixture
def diag2():
    return build_subalgebra("diagonal", 2)


@pytest.fixture
def pauli_model(diag2):
    return MatrixModel(diag2, np.array([[0, 1], [1, 0]]))


@pytest.fixture(params=SPECS, ids=["scalars", "diagonal", "blocks21"])
def model3(request):
    return random_model(trial_rng(3, 0), 3, request.param)


def random_matrix(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
