"""The tensor square of B<X>: elements ``sum_i w_i * l_i (x) r_i``.

Besides the vector-space structure this module provides the sharp product
``(a1 (x) a2) # (a3 (x) a4) = (a1 a3) (x) (a4 a2)``, the bimodule actions, the
multiplication map ``mu``, evaluation of ``mu o (id (x) E)`` in a matrix model,
and two norms of the evaluated element: a projective-norm upper bound and the
spatial (Kronecker) norm, which is a lower bound for it.
"""

from __future__ import annotations

import numbers
from collections.abc import Iterable

import numpy as np

from .canonical import MAX_CANONICAL_ENTRIES, CanonicalForm, check_size, outer_all
from .coeff_algebra import CoeffAlgebra, MatrixModel, op_norm
from .errors import CapExceededError, MixedAlgebraError
from .ncpoly import REPRESENTATIONS, Monomial, NCPoly

SPATIAL_DIM_CAP = 16
WORD_EVAL_CAP = 1 << 14

Term = tuple[complex, Monomial, Monomial]


class TensorElem:
    """An element of B<X> (x) B<X> kept in the representation it was built in."""

    __slots__ = ("algebra", "terms", "_canonical")

    def __init__(self, algebra: CoeffAlgebra, terms: Iterable[Term] = ()):
        self.algebra = algebra
        self.terms: tuple[Term, ...] = tuple((complex(w), l, r) for w, l, r in terms)
        self._canonical: CanonicalForm | None = None

    @classmethod
    def zero(cls, algebra: CoeffAlgebra) -> TensorElem:
        return cls(algebra)

    @classmethod
    def from_polys(cls, p: NCPoly, q: NCPoly) -> TensorElem:
        """The simple tensor ``p (x) q`` expanded over the stored terms."""
        _same(p.algebra, q.algebra)
        return cls(p.algebra, [(w1 * w2, m1, m2) for w1, m1 in p.terms for w2, m2 in q.terms])

    def _check(self, other: TensorElem) -> None:
        _same(self.algebra, other.algebra)

    def __add__(self, other: TensorElem) -> TensorElem:
        if not isinstance(other, TensorElem):
            return NotImplemented
        self._check(other)
        return TensorElem(self.algebra, self.terms + other.terms)

    def __neg__(self) -> TensorElem:
        return self.scale(-1.0)

    def __sub__(self, other: TensorElem) -> TensorElem:
        if not isinstance(other, TensorElem):
            return NotImplemented
        return self + (-other)

    def scale(self, c: complex) -> TensorElem:
        c = complex(c)
        return TensorElem(self.algebra, [(c * w, l, r) for w, l, r in self.terms])

    def __mul__(self, c: numbers.Number) -> TensorElem:
        if isinstance(c, numbers.Number):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def canonical(self, cap: int = MAX_CANONICAL_ENTRIES) -> CanonicalForm:
        if self._canonical is None:
            form = CanonicalForm(self.algebra.dim)
            for _, l, r in self.terms:
                check_size(self.algebra.dim, l.degree + r.degree + 2, cap)
            for w, l, r in self.terms:
                vectors = [self.algebra.coords(b) for b in l.coeffs + r.coeffs]
                form.accumulate((l.degree, r.degree), w * outer_all(vectors))
            self._canonical = form.prune()
        return self._canonical

    def equals(self, other: TensorElem, tol: float | None = None) -> bool:
        self._check(other)
        if tol is None:
            return self.canonical().equals(other.canonical())
        return self.canonical().equals(other.canonical(), tol)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElem):
            return NotImplemented
        return self.equals(other)

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return self.canonical().is_zero()

    def __repr__(self) -> str:
        return f"TensorElem({len(self.terms)} terms, B dim {self.algebra.dim})"


def _same(a: CoeffAlgebra, b: CoeffAlgebra) -> None:
    if not a.same_as(b):
        raise MixedAlgebraError("operands live over different coefficient algebras")


def x_difference(algebra: CoeffAlgebra) -> TensorElem:
    """``X (x) 1 - 1 (x) X``."""
    one = NCPoly.one(algebra)
    x = NCPoly.x(algebra)
    return TensorElem.from_polys(x, one) - TensorElem.from_polys(one, x)


def sharp(u: TensorElem, v: TensorElem) -> TensorElem:
    """Bilinear extension of ``(a1 (x) a2) # (a3 (x) a4) = (a1 a3) (x) (a4 a2)``."""
    _same(u.algebra, v.algebra)
    terms = [
        (w1 * w2, l1 * l2, r2 * r1) for w1, l1, r1 in u.terms for w2, l2, r2 in v.terms
    ]
    return TensorElem(u.algebra, terms)


def bimodule_act(p: NCPoly, u: TensorElem, q: NCPoly) -> TensorElem:
    """``p . (l (x) r) . q = (p l) (x) (r q)``, extended bilinearly."""
    _same(p.algebra, u.algebra)
    _same(u.algebra, q.algebra)
    terms = [
        (wp * w * wq, mp * l, r * mq)
        for wp, mp in p.terms
        for w, l, r in u.terms
        for wq, mq in q.terms
    ]
    return TensorElem(u.algebra, terms)


def mu(u: TensorElem) -> NCPoly:
    """Multiplication map ``l (x) r -> l r``."""
    return NCPoly(u.algebra, [(w, l * r) for w, l, r in u.terms], check=False)


def _x_of(u: TensorElem, model: MatrixModel) -> np.ndarray:
    if not u.algebra.same_as(model.coeff_algebra):
        raise MixedAlgebraError("tensor and model use different coefficient algebras")
    return model.X


def mu_idE_eval(u: TensorElem, model: MatrixModel) -> np.ndarray:
    """Evaluate ``mu o (id (x) E)``: ``sum_i w_i l_i(X) E[r_i(X)]``."""
    x = _x_of(u, model)
    n = model.dim
    out = np.zeros((n, n), dtype=complex)
    for w, l, r in u.terms:
        out += w * (l.evaluate(x) @ model.E(r.evaluate(x)))
    return out


def _stored_pi_bound(u: TensorElem, x: np.ndarray) -> float:
    return float(
        sum(abs(w) * op_norm(l.evaluate(x)) * op_norm(r.evaluate(x)) for w, l, r in u.terms)
    )


def word_norms(algebra: CoeffAlgebra, x: np.ndarray, degree: int, cap: int = WORD_EVAL_CAP) -> np.ndarray:
    """Operator norms of ``e_k0 X e_k1 ... X e_kn`` for all words, lexicographic order."""
    d = algebra.dim
    count = d ** (degree + 1)
    if count > cap:
        raise CapExceededError(f"{count} word evaluations exceed cap {cap}")
    words = algebra.basis
    n = algebra.ambient_dim
    for _ in range(degree):
        words = np.matmul((words @ x)[:, None], algebra.basis[None]).reshape(-1, n, n)
    return np.linalg.norm(words, 2, axis=(1, 2))


def _canonical_pi_bound(u: TensorElem, x: np.ndarray, cap: int) -> float:
    d = u.algebra.dim
    cache: dict[int, np.ndarray] = {}

    def norms_of(deg: int) -> np.ndarray:
        if deg not in cache:
            cache[deg] = word_norms(u.algebra, x, deg, min(cap, WORD_EVAL_CAP))
        return cache[deg]

    total = 0.0
    for (a, b), arr in u.canonical(cap).arrays.items():
        mat = np.abs(arr).reshape(d ** (a + 1), d ** (b + 1))
        total += float(norms_of(a) @ mat @ norms_of(b))
    return total


def pi_upper_detail(
    u: TensorElem,
    model: MatrixModel,
    representation: str = "min",
    canonical_cap: int = MAX_CANONICAL_ENTRIES,
) -> tuple[float, str]:
    """Upper bound ``sum |w| ||l(X)|| ||r(X)||`` on the projective norm.

    Returns the value and the representation that achieved it.  In ``min``
    mode a canonical representation too large to expand or evaluate is
    skipped and the stored bound is returned.
    """
    if representation not in REPRESENTATIONS:
        raise ValueError(f"representation must be one of {REPRESENTATIONS}")
    x = _x_of(u, model)
    if representation == "canonical":
        return _canonical_pi_bound(u, x, canonical_cap), "canonical"
    stored = _stored_pi_bound(u, x)
    if representation == "stored":
        return stored, "stored"
    try:
        canonical = _canonical_pi_bound(u, x, canonical_cap)
    except CapExceededError:
        return stored, "stored"
    if canonical < stored:
        return canonical, "canonical"
    return stored, "stored"


def pi_upper(
    u: TensorElem,
    model: MatrixModel,
    representation: str = "min",
    canonical_cap: int = MAX_CANONICAL_ENTRIES,
) -> float:
    return pi_upper_detail(u, model, representation, canonical_cap)[0]


def kron_eval(u: TensorElem, model: MatrixModel, dim_cap: int = SPATIAL_DIM_CAP) -> np.ndarray:
    """``sum_i w_i l_i(X) (x) r_i(X)`` as an ``N^2 x N^2`` matrix."""
    x = _x_of(u, model)
    n = model.dim
    if n > dim_cap:
        raise CapExceededError(f"Kronecker evaluation needs N <= {dim_cap}, got {n}")
    out = np.zeros((n * n, n * n), dtype=complex)
    for w, l, r in u.terms:
        out += w * np.kron(l.evaluate(x), r.evaluate(x))
    return out


def spatial_norm(u: TensorElem, model: MatrixModel, dim_cap: int = SPATIAL_DIM_CAP) -> float:
    return op_norm(kron_eval(u, model, dim_cap))

