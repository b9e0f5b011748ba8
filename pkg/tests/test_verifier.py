import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncpoincare.coeff_algebra import MatrixModel, build_subalgebra
from ncpoincare.errors import RadiusError
from ncpoincare.models_rng import (
    SuiteConfig,
    random_cancelling_poly,
    random_model,
    random_monomial,
    random_poly,
    trial_rng,
)
from ncpoincare.ncpoly import NCPoly
from ncpoincare.verifier import (
    check_kernel,
    check_lemma4_bounds,
    check_poincare,
    check_telescoping,
    growth_constant,
    growth_constant_bruteforce,
    run_suite,
    run_trial,
    sobolev_norm,
)


def growth_oracle(norm_x, R, n_max=200_000):
    n = np.arange(1, n_max + 1, dtype=float)
    with np.errstate(under="ignore"):
        return float(np.max(n * (norm_x / R) ** (n - 1) / R))


# -- telescoping ----------------------------------------------------------


def test_telescoping_on_x(pauli_model):
    r = check_telescoping(NCPoly.x(pauli_model.coeff_algebra), pauli_model)
    assert r.passed and r.kind == "identity"
    assert r.residual < 1e-14
    assert r.lhs == pytest.approx(1.0)


def test_telescoping_random(model3):
    rng = trial_rng(4, 4)
    for _ in range(10):
        p = random_poly(rng, model3.coeff_algebra, 4, 4)
        r = check_telescoping(p, model3)
        assert r.passed
        assert r.details["relative_residual"] < 1e-12


def test_telescoping_when_value_lies_in_B():
    B = build_subalgebra("diagonal", 2)
    m = MatrixModel(B, np.array([[0.0, 1.0], [1.0, 0.0]]))
    p = NCPoly.x(B) * NCPoly.x(B)
    r = check_telescoping(p, m)
    assert r.passed
    # X^2 = 1 lies in B, so p(X) - E[p(X)] vanishes
    assert r.rhs == pytest.approx(0.0, abs=1e-14)


# -- Poincare ---------------------------------------------------------------


def test_poincare_example(pauli_model):
    x = NCPoly.x(pauli_model.coeff_algebra)
    r = check_poincare(x, pauli_model, "l2")
    # E kills the off-diagonal X, |X|_2 = 1, dX = 1 (x) 1
    assert r.lhs == pytest.approx(1.0)
    assert r.rhs == pytest.approx(2.0)
    assert r.passed
    r = check_poincare(x, pauli_model, "op")
    assert r.rhs == pytest.approx(2.0) and r.passed


def test_poincare_constants_have_zero_rhs(pauli_model):
    b = NCPoly.constant(pauli_model.coeff_algebra, np.diag([1.0, -2.0]))
    for variant in ("l2", "op"):
        r = check_poincare(b, pauli_model, variant)
        assert r.lhs == pytest.approx(0.0, abs=1e-15)
        assert r.rhs == 0.0 and r.passed


def test_operator_variant_needs_operator_norm_of_x():
    """With |X|_2 in place of ||X|| the operator-norm inequality is false."""
    n = 10
    B = build_subalgebra("scalars", n)
    X = np.zeros((n, n))
    X[0, 0] = 1.0
    m = MatrixModel(B, X)
    p = NCPoly.x(B)
    r = check_poincare(p, m, "op")
    assert r.lhs == pytest.approx(0.9)
    assert r.passed
    l2_constant = 2 * m.x_l2 * r.details["pi_upper"]
    assert l2_constant == pytest.approx(2 / math.sqrt(10))
    assert r.lhs > l2_constant


def test_poincare_bad_variant(pauli_model):
    with pytest.raises(ValueError):
        check_poincare(NCPoly.x(pauli_model.coeff_algebra), pauli_model, "sup")


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 6),
       kind=st.sampled_from(["scalars", "diagonal", "blocks"]))
def test_poincare_holds_on_random_models(seed, n, kind):
    rng = trial_rng(seed, 0)
    m = random_model(rng, n, kind)
    p = random_poly(rng, m.coeff_algebra, 4, 5)
    for variant in ("l2", "op"):
        assert check_poincare(p, m, variant, canonical_cap=4096).margin >= -1e-12


# -- kernel -----------------------------------------------------------------


def test_kernel_examples(diag2):
    b = NCPoly.constant(diag2, np.diag([1.0, 3.0]))
    x = NCPoly.x(diag2)
    r = check_kernel(b)
    assert r.passed and r.details["constant_only"] and r.details["derivative_zero"]
    r = check_kernel(x + b)
    assert r.passed and not r.details["constant_only"] and not r.details["derivative_zero"]
    r = check_kernel(x * b - x * b + b)
    assert r.passed and r.details["constant_only"]


def test_kernel_on_cancellations():
    rng = trial_rng(21, 0)
    for kind in ("scalars", "diagonal", "blocks"):
        m = random_model(rng, 3, kind)
        for _ in range(10):
            p = random_cancelling_poly(rng, m.coeff_algebra, 2, 3)
            r = check_kernel(p)
            assert r.passed and r.details["constant_only"]


# -- Sobolev norm and growth constant --------------------------------------


def test_sobolev_example(pauli_model):
    assert sobolev_norm(NCPoly.x(pauli_model.coeff_algebra), pauli_model) == pytest.approx(2.0)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), kind=st.sampled_from(["scalars", "diagonal", "blocks"]))
def test_sobolev_submultiplicative_on_monomials(seed, kind):
    rng = trial_rng(seed, 2)
    m = random_model(rng, 3, kind)
    B = m.coeff_algebra
    p = NCPoly(B, [(1.0, random_monomial(rng, B, int(rng.integers(0, 4))))])
    q = NCPoly(B, [(1.0, random_monomial(rng, B, int(rng.integers(0, 4))))])
    lhs = sobolev_norm(p * q, m, "stored")
    rhs = sobolev_norm(p, m, "stored") * sobolev_norm(q, m, "stored")
    assert lhs <= rhs * (1 + 1e-12)


def test_growth_constant_examples():
    assert growth_constant(1.0, 2.0) == 0.5
    assert growth_constant(0.0, 2.0) == 0.5
    assert growth_constant(1.0, 1.1) == pytest.approx(growth_constant_bruteforce(1.0, 1.1), rel=1e-12)
    assert growth_constant(1.0, 1.1) == pytest.approx(growth_oracle(1.0, 1.1), rel=1e-12)


def test_growth_constant_errors():
    with pytest.raises(RadiusError):
        growth_constant(1.0, 1.0)
    with pytest.raises(RadiusError):
        growth_constant_bruteforce(2.0, 1.0)
    with pytest.raises(ValueError):
        growth_constant(1.0, 0.0)


@settings(max_examples=50, deadline=None)
@given(ratio=st.floats(0.0, 0.99), R=st.floats(0.1, 10.0))
def test_growth_constant_matches_enumeration(ratio, R):
    x = ratio * R
    assert growth_constant(x, R) == pytest.approx(growth_oracle(x, R), rel=1e-12)


# -- radius-R bounds ---------------------------------------------------------


def test_lemma4_example(pauli_model):
    x = NCPoly.x(pauli_model.coeff_algebra)
    r = check_lemma4_bounds(x, 2.0, pauli_model)
    subs = r.details["sub_checks"]
    assert r.passed
    assert subs["a_eval_vs_R"]["rhs"] == pytest.approx(2.0)
    assert subs["b_spatial_vs_pi"]["lhs"] == pytest.approx(1.0)
    # C = 1/2 and |||X|||_2 = 2: the bound c is attained
    assert subs["c_pi_vs_growth"]["lhs"] == pytest.approx(subs["c_pi_vs_growth"]["rhs"])


@pytest.mark.parametrize("rep", ["stored", "canonical"])
def test_lemma4_random(model3, rep):
    rng = trial_rng(6, 1)
    for _ in range(5):
        p = random_poly(rng, model3.coeff_algebra, 3, 4)
        r = check_lemma4_bounds(p, 2 * model3.x_op, model3, representation=rep)
        assert r.passed, r.details


def test_lemma4_radius_error(pauli_model):
    with pytest.raises(RadiusError):
        check_lemma4_bounds(NCPoly.x(pauli_model.coeff_algebra), 0.5, pauli_model)


# -- suite ---------------------------------------------------------------


def test_empty_suite():
    report = run_suite(SuiteConfig(trials=0))
    assert report["summary"]["pass"] and report["trials"] == []


def test_suite_is_deterministic():
    cfg = SuiteConfig(trials=6, seed=3)
    a = json.dumps(run_suite(cfg), sort_keys=True)
    b = json.dumps(run_suite(cfg), sort_keys=True)
    assert a == b


def test_workers_do_not_change_results():
    serial = run_suite(SuiteConfig(trials=4, seed=5))
    parallel = run_suite(SuiteConfig(trials=4, seed=5, workers=2))
    assert serial["trials"] == parallel["trials"]
    assert serial["summary"] == parallel["summary"]


def test_trial_reports_and_skips():
    reports = run_trial(SuiteConfig(seed=1, canonical_cap=1), 0)
    names = [r.check_name for r in reports]
    assert names == ["telescoping", "poincare_l2", "poincare_op", "kernel", "lemma4"]
    kernel = reports[3]
    assert kernel.skipped and kernel.to_dict()["pass"] is None
    assert all(r.details["trial"] == 0 for r in reports)
