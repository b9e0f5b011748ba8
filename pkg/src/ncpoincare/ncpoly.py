"""B-valued non-commutative polynomials in one indeterminate.

A monomial ``b0 X b1 X ... X bn`` is stored as its coefficient list
``[b0, ..., bn]``; a polynomial is a weighted list of monomials.  The stored
representation is kept as built (no merging) because norm bounds depend on
it; equality goes through the canonical word-basis form.
"""

from __future__ import annotations

import numbers
from collections.abc import Iterable, Sequence
from functools import reduce
from typing import Union

import numpy as np

from .canonical import MAX_CANONICAL_ENTRIES, CanonicalForm, check_size, outer_all
from .coeff_algebra import CoeffAlgebra, MatrixModel, op_norm
from .errors import CapExceededError, DimensionError, MixedAlgebraError, SpanError

Label = Union[str, None]

REPRESENTATIONS = ("stored", "canonical", "min")


def _merge_labels(a: Label, b: Label) -> Label:
    if a is None or b is None:
        return None
    if a == "1":
        return b
    if b == "1":
        return a
    return f"{a}*{b}"


def _adjoint_label(a: Label) -> Label:
    if a is None or a == "1":
        return a
    if a.isidentifier():
        return a + "'"
    return f"({a})'"


class Monomial:
    """The word ``b0 X b1 ... X bn``; ``labels`` optionally names each ``b_i``."""

    __slots__ = ("coeffs", "labels", "_norms")

    def __init__(self, coeffs: Sequence[np.ndarray], labels: Sequence[Label] | None = None):
        if len(coeffs) == 0:
            raise ValueError("a monomial needs at least one coefficient")
        self.coeffs: tuple[np.ndarray, ...] = tuple(coeffs)
        if labels is None or any(lab is None for lab in labels):
            self.labels: tuple[str, ...] | None = None
        else:
            if len(labels) != len(coeffs):
                raise ValueError("labels and coefficients differ in length")
            self.labels = tuple(labels)
        self._norms: np.ndarray | None = None

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __mul__(self, other: Monomial) -> Monomial:
        merged = self.coeffs[-1] @ other.coeffs[0]
        coeffs = self.coeffs[:-1] + (merged,) + other.coeffs[1:]
        labels = None
        if self.labels is not None and other.labels is not None:
            labels = (
                self.labels[:-1]
                + (_merge_labels(self.labels[-1], other.labels[0]),)
                + other.labels[1:]
            )
        return Monomial(coeffs, labels)

    def adjoint(self) -> Monomial:
        coeffs = tuple(b.conj().T for b in reversed(self.coeffs))
        labels = None
        if self.labels is not None:
            labels = tuple(_adjoint_label(lab) for lab in reversed(self.labels))
        return Monomial(coeffs, labels)

    def split(self, i: int) -> tuple[Monomial, Monomial]:
        """Cut at the ``i``-th X (1-based): ``b0 X ... b_{i-1}`` and ``b_i X ... bn``."""
        left_labels = right_labels = None
        if self.labels is not None:
            left_labels, right_labels = self.labels[:i], self.labels[i:]
        return Monomial(self.coeffs[:i], left_labels), Monomial(self.coeffs[i:], right_labels)

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        out = self.coeffs[0]
        for b in self.coeffs[1:]:
            out = out @ x @ b
        return out

    def coeff_norms(self) -> np.ndarray:
        if self._norms is None:
            self._norms = np.array([op_norm(b) for b in self.coeffs])
        return self._norms

    def text(self) -> str | None:
        """Printable form from labels, e.g. ``b0*X*b1``; ``None`` if unlabeled."""
        if self.labels is None:
            return None
        parts: list[str] = []
        for i, lab in enumerate(self.labels):
            if i > 0:
                parts.append("X")
            if lab != "1":
                parts.append(lab)
        return "*".join(parts) if parts else "1"

    def __repr__(self) -> str:
        text = self.text()
        return f"Monomial({text if text is not None else f'degree={self.degree}'})"


class NCPoly:
    """A finite sum ``sum_j w_j * m_j`` of weighted monomials over one algebra.

    Instances are immutable.  ``==`` compares canonical forms.
    """

    max_degree = 12
    max_terms = 50_000

    __slots__ = ("algebra", "terms", "_canonical")

    def __init__(
        self,
        algebra: CoeffAlgebra,
        terms: Iterable[tuple[complex, Monomial]] = (),
        *,
        check: bool = True,
    ):
        self.algebra = algebra
        self.terms: tuple[tuple[complex, Monomial], ...] = tuple(
            (complex(w), m) for w, m in terms
        )
        self._canonical: CanonicalForm | None = None
        if len(self.terms) > self.max_terms:
            raise CapExceededError(f"{len(self.terms)} terms exceeds cap {self.max_terms}")
        for _, m in self.terms:
            if m.degree > self.max_degree:
                raise CapExceededError(f"degree {m.degree} exceeds cap {self.max_degree}")
        if check:
            self._check_coeffs()

    def _check_coeffs(self) -> None:
        n = self.algebra.ambient_dim
        for _, m in self.terms:
            for b in m.coeffs:
                if b.shape != (n, n):
                    raise DimensionError(f"coefficient of shape {b.shape}, expected ({n}, {n})")
                if not self.algebra.contains(b):
                    raise SpanError("coefficient does not lie in the coefficient algebra")

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, algebra: CoeffAlgebra) -> NCPoly:
        return cls(algebra, (), check=False)

    @classmethod
    def one(cls, algebra: CoeffAlgebra) -> NCPoly:
        return cls(algebra, [(1.0, Monomial([algebra.unit], ["1"]))], check=False)

    @classmethod
    def x(cls, algebra: CoeffAlgebra) -> NCPoly:
        unit = algebra.unit
        return cls(algebra, [(1.0, Monomial([unit, unit], ["1", "1"]))], check=False)

    @classmethod
    def constant(cls, algebra: CoeffAlgebra, b: np.ndarray, label: Label = None) -> NCPoly:
        b = np.asarray(b, dtype=complex)
        return cls(algebra, [(1.0, Monomial([b], [label]))])

    @classmethod
    def monomial(
        cls,
        algebra: CoeffAlgebra,
        coeffs: Sequence[np.ndarray],
        weight: complex = 1.0,
        labels: Sequence[Label] | None = None,
    ) -> NCPoly:
        coeffs = [np.asarray(b, dtype=complex) for b in coeffs]
        return cls(algebra, [(weight, Monomial(coeffs, labels))])

    @classmethod
    def basis_word(cls, algebra: CoeffAlgebra, word: Sequence[int], weight: complex = 1.0) -> NCPoly:
        coeffs = [algebra.basis[k] for k in word]
        return cls(algebra, [(weight, Monomial(coeffs, [f"e{k}" for k in word]))], check=False)

    @classmethod
    def from_canonical(cls, algebra: CoeffAlgebra, form: CanonicalForm) -> NCPoly:
        terms = []
        for _, word, w in form.entries():
            coeffs = [algebra.basis[k] for k in word]
            terms.append((w, Monomial(coeffs, [f"e{k}" for k in word])))
        return cls(algebra, terms, check=False)

    # -- arithmetic ------------------------------------------------------

    def _same(self, other: NCPoly) -> None:
        if not self.algebra.same_as(other.algebra):
            raise MixedAlgebraError("polynomials live over different coefficient algebras")

    def __add__(self, other: NCPoly) -> NCPoly:
        if isinstance(other, numbers.Number):
            other = NCPoly.one(self.algebra).scale(other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        self._same(other)
        return NCPoly(self.algebra, self.terms + other.terms, check=False)

    __radd__ = __add__

    def __neg__(self) -> NCPoly:
        return self.scale(-1.0)

    def __sub__(self, other: NCPoly) -> NCPoly:
        if isinstance(other, numbers.Number):
            return self + (-other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: numbers.Number) -> NCPoly:
        return (-self) + other

    def scale(self, c: complex) -> NCPoly:
        c = complex(c)
        return NCPoly(self.algebra, [(c * w, m) for w, m in self.terms], check=False)

    def __mul__(self, other: NCPoly | numbers.Number) -> NCPoly:
        if isinstance(other, numbers.Number):
            return self.scale(other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        self._same(other)
        terms = [(w1 * w2, m1 * m2) for w1, m1 in self.terms for w2, m2 in other.terms]
        return NCPoly(self.algebra, terms, check=False)

    def __rmul__(self, other: numbers.Number) -> NCPoly:
        if isinstance(other, numbers.Number):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> NCPoly:
        if not isinstance(k, int) or k < 0:
            raise ValueError("powers must be nonnegative integers")
        if self.degree * k > self.max_degree:
            raise CapExceededError(f"power {k} would exceed degree cap {self.max_degree}")
        return reduce(lambda a, b: a * b, [self] * k, NCPoly.one(self.algebra))

    def adjoint(self) -> NCPoly:
        return NCPoly(
            self.algebra, [(w.conjugate(), m.adjoint()) for w, m in self.terms], check=False
        )

    # -- structure -------------------------------------------------------

    @property
    def degree(self) -> int:
        """Largest stored monomial degree (-1 for the empty sum)."""
        return max((m.degree for _, m in self.terms), default=-1)

    def canonical(self, cap: int = MAX_CANONICAL_ENTRIES) -> CanonicalForm:
        if self._canonical is None:
            self._canonical = _canonicalize_terms(self.algebra, self.terms, cap)
        return self._canonical

    def canonical_degrees(self) -> list[int]:
        return sorted(self.canonical().arrays)

    def evaluate(self, model: MatrixModel | np.ndarray) -> np.ndarray:
        x = model.X if isinstance(model, MatrixModel) else np.asarray(model, dtype=complex)
        n = self.algebra.ambient_dim
        if x.shape != (n, n):
            raise DimensionError(f"X has shape {x.shape}, polynomial lives in dimension {n}")
        out = np.zeros((n, n), dtype=complex)
        for w, m in self.terms:
            out += w * m.evaluate(x)
        return out

    def equals(self, other: NCPoly, tol: float | None = None) -> bool:
        self._same(other)
        if tol is None:
            return self.canonical().equals(other.canonical())
        return self.canonical().equals(other.canonical(), tol)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.equals(other)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"NCPoly({len(self.terms)} terms, degree {self.degree}, B dim {self.algebra.dim})"


def _canonicalize_terms(
    algebra: CoeffAlgebra, terms: Sequence[tuple[complex, Monomial]], cap: int
) -> CanonicalForm:
    form = CanonicalForm(algebra.dim)
    for w, m in terms:
        check_size(algebra.dim, m.degree + 1, cap)
    for w, m in terms:
        vectors = [algebra.coords(b) for b in m.coeffs]
        form.accumulate(m.degree, w * outer_all(vectors))
    return form.prune()


# -- functional interface -----------------------------------------------


def add(p: NCPoly, q: NCPoly) -> NCPoly:
    return p + q


def scale(c: complex, p: NCPoly) -> NCPoly:
    return p.scale(c)


def mul(p: NCPoly, q: NCPoly) -> NCPoly:
    return p * q


def adjoint(p: NCPoly) -> NCPoly:
    return p.adjoint()


def canonicalize(p: NCPoly) -> CanonicalForm:
    return p.canonical()


def evaluate(p: NCPoly, model: MatrixModel | np.ndarray) -> np.ndarray:
    return p.evaluate(model)


def _stored_R_bound(p: NCPoly, R: float) -> float:
    return float(sum(abs(w) * np.prod(m.coeff_norms()) * R**m.degree for w, m in p.terms))


def _canonical_R_bound(p: NCPoly, R: float, cap: int) -> float:
    total = 0.0
    norms = p.algebra.basis_op_norms
    for n, arr in p.canonical(cap).arrays.items():
        acc = np.abs(arr)
        for _ in range(n + 1):
            acc = acc @ norms
        total += float(acc) * R**n
    return total


def norm_R_upper_detail(
    p: NCPoly, R: float, representation: str = "min", canonical_cap: int = MAX_CANONICAL_ENTRIES
) -> tuple[float, str]:
    """Upper bound on the radius-``R`` norm and the representation achieving it.

    The bound is ``sum |w| prod ||b_i|| R^deg`` over a representation of ``p``:
    the stored terms, the canonical word expansion, or the smaller of the two.
    A canonical expansion above the size cap is skipped in ``min`` mode.
    """
    if R <= 0:
        raise ValueError(f"R must be positive, got {R}")
    if representation not in REPRESENTATIONS:
        raise ValueError(f"representation must be one of {REPRESENTATIONS}")
    if representation == "stored":
        return _stored_R_bound(p, R), "stored"
    if representation == "canonical":
        return _canonical_R_bound(p, R, canonical_cap), "canonical"
    stored = _stored_R_bound(p, R)
    try:
        canonical = _canonical_R_bound(p, R, canonical_cap)
    except CapExceededError:
        return stored, "stored"
    if canonical < stored:
        return canonical, "canonical"
    return stored, "stored"


def norm_R_upper(
    p: NCPoly, R: float, representation: str = "min", canonical_cap: int = MAX_CANONICAL_ENTRIES
) -> float:
    return norm_R_upper_detail(p, R, representation, canonical_cap)[0]
