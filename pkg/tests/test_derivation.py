import itertools

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from ncpoincare.coeff_algebra import build_subalgebra
from ncpoincare.derivation import fdq, split_word
from ncpoincare.models_rng import random_model, random_poly, trial_rng
from ncpoincare.ncpoly import NCPoly
from ncpoincare.parser import parse
from ncpoincare.tensor2 import TensorElem, bimodule_act

T = TensorElem.from_polys
SPECS = ["scalars", "diagonal", "blocks"]


def test_x_maps_to_one_tensor_one(diag2):
    one = NCPoly.one(diag2)
    assert fdq(NCPoly.x(diag2)) == T(one, one)


def test_constants_map_to_zero(diag2):
    b = NCPoly.constant(diag2, np.diag([1.0, 4.0]))
    assert fdq(b).is_zero()
    assert len(fdq(b).terms) == 0


def test_two_letter_word(diag2):
    b0, b1, b2 = (NCPoly.constant(diag2, np.diag(v)) for v in ([1.0, 2.0], [3.0, -1.0], [0.5, 0.25]))
    x = NCPoly.x(diag2)
    p = b0 * x * b1 * x * b2
    want = T(b0, b1 * x * b2) + T(b0 * x * b1, b2)
    assert fdq(p) == want


def test_square(diag2):
    one, x = NCPoly.one(diag2), NCPoly.x(diag2)
    assert fdq(x * x) == T(one, x) + T(x, one)


def test_power_has_n_splits(diag2):
    one, x = NCPoly.one(diag2), NCPoly.x(diag2)
    want = T(x * x, one) + T(x, x) + T(one, x * x)
    assert fdq(x**3) == want


def test_split_word_is_injective():
    # every word of length n+1 splits at each X into distinct (left, right) pairs
    seen = set()
    for n in range(1, 4):
        for word in itertools.product(range(2), repeat=n + 1):
            for i in range(1, n + 1):
                left, right = split_word(word, i)
                assert left + right == word
                assert (left, right) not in seen
                seen.add((left, right))


def test_parsed_example():
    B = build_subalgebra("diagonal", 2)
    u = fdq(parse("b0*X*b1*X*b2", B))
    assert len(u.terms) == 2
    assert [(l.degree, r.degree) for _, l, r in u.terms] == [(0, 1), (1, 0)]


def _polys(seed, kind, count):
    rng = trial_rng(seed, 1)
    m = random_model(rng, 2 if kind != "scalars" else 3, kind)
    return [random_poly(rng, m.coeff_algebra, 3, 3) for _ in range(count)]


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), kind=st.sampled_from(SPECS))
def test_leibniz(seed, kind):
    p, q = _polys(seed, kind, 2)
    one = NCPoly.one(p.algebra)
    lhs = fdq(p * q)
    rhs = bimodule_act(one, fdq(p), q) + bimodule_act(p, fdq(q), one)
    assert lhs.equals(rhs, 1e-12)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), kind=st.sampled_from(SPECS),
       a=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_linear(seed, kind, a):
    p, q = _polys(seed, kind, 2)
    assert fdq(p.scale(a) + q).equals(fdq(p).scale(a) + fdq(q), 1e-12)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), kind=st.sampled_from(SPECS))
def test_representation_independent(seed, kind):
    (p,) = _polys(seed, kind, 1)
    again = NCPoly.from_canonical(p.algebra, p.canonical())
    assert fdq(p).equals(fdq(again), 1e-12)
