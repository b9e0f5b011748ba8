"""Finite-dimensional models of the coefficient algebra B inside M_N(C).

B is stored through a basis that is orthonormal for ``<a, b> = tau(a* b)``,
where ``tau`` is the normalized trace.  The conditional expectation is the
tau-orthogonal projection onto the span of that basis, which for a unital
*-subalgebra is the unique trace-preserving conditional expectation.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import CapExceededError, DimensionError, NCPError

DEFAULT_TOLERANCE = 1e-9

SUBALGEBRA_TYPES = ("scalars", "diagonal", "blocks", "generators")


def _as_square(a: Any, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} must be a square matrix, got shape {arr.shape}")
    return arr


def normalized_trace(a: np.ndarray) -> complex:
    a = _as_square(a)
    return complex(np.trace(a)) / a.shape[0]


def l2_norm(a: np.ndarray) -> float:
    """``|a|_2 = tau(a* a)^(1/2)`` with the normalized trace."""
    a = _as_square(a)
    return float(np.linalg.norm(a) / np.sqrt(a.shape[0]))


def op_norm(a: np.ndarray) -> float:
    """Spectral norm (largest singular value)."""
    a = _as_square(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def norms(a: np.ndarray) -> tuple[float, float]:
    """Return ``(l2, op)``; always ``l2 <= op``."""
    return l2_norm(a), op_norm(a)


@dataclass(frozen=True, eq=False)
class CoeffAlgebra:
    """A unital *-subalgebra of M_N(C) given by a tau-orthonormal basis.

    ``basis`` has shape ``(d, N, N)``.  Construction validates orthonormality,
    closure under products and adjoints, and membership of the identity.
    """

    ambient_dim: int
    basis: np.ndarray
    contains_unit_flag: bool = True
    label: str = "custom"
    tolerance: float = DEFAULT_TOLERANCE
    basis_op_norms: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        basis = np.array(self.basis, dtype=complex)
        n = self.ambient_dim
        if basis.ndim != 3 or basis.shape[1:] != (n, n):
            raise DimensionError(f"basis must have shape (d, {n}, {n}), got {basis.shape}")
        if basis.shape[0] == 0:
            raise NCPError("basis must be nonempty")
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        op = np.linalg.norm(basis, 2, axis=(1, 2))
        op.setflags(write=False)
        object.__setattr__(self, "basis_op_norms", op)
        self._validate()

    # -- structure -----------------------------------------------------

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def unit(self) -> np.ndarray:
        return np.eye(self.ambient_dim, dtype=complex)

    def gram(self) -> np.ndarray:
        flat = self.basis.reshape(self.dim, -1)
        return flat.conj() @ flat.T / self.ambient_dim

    def coords(self, a: np.ndarray) -> np.ndarray:
        """Coordinates ``tau(e_k* a)`` of ``a`` against the basis."""
        a = self._check(a)
        return np.einsum("kij,ij->k", self.basis.conj(), a) / self.ambient_dim

    def from_coords(self, c: np.ndarray) -> np.ndarray:
        return np.einsum("k,kij->ij", np.asarray(c, dtype=complex), self.basis)

    def expect(self, a: np.ndarray) -> np.ndarray:
        """Conditional expectation ``E[a] = sum_k tau(e_k* a) e_k``."""
        return self.from_coords(self.coords(a))

    def span_residual(self, a: np.ndarray) -> float:
        a = self._check(a)
        return op_norm(a - self.expect(a))

    def contains(self, a: np.ndarray, tol: float | None = None) -> bool:
        tol = self.tolerance if tol is None else tol
        a = self._check(a)
        return self.span_residual(a) <= tol * (1.0 + op_norm(a))

    def same_as(self, other: CoeffAlgebra) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, CoeffAlgebra)
            and self.basis.shape == other.basis.shape
            and np.array_equal(self.basis, other.basis)
        )

    def describe(self) -> dict[str, Any]:
        return {"type": self.label, "dim": self.dim, "ambient_dim": self.ambient_dim}

    # -- internals -----------------------------------------------------

    def _check(self, a: np.ndarray) -> np.ndarray:
        a = _as_square(a)
        if a.shape[0] != self.ambient_dim:
            raise DimensionError(
                f"expected a {self.ambient_dim}x{self.ambient_dim} matrix, got {a.shape}"
            )
        return a

    def _validate(self) -> None:
        tol = self.tolerance
        g = self.gram()
        if np.max(np.abs(g - np.eye(self.dim))) > tol:
            raise NCPError("basis is not orthonormal under tau(a* b)")
        scale = 1.0 + float(np.max(self.basis_op_norms)) ** 2
        flat = self.basis.reshape(self.dim, -1)
        for e in self.basis:
            if self.span_residual(e.conj().T) > tol * scale:
                raise NCPError("span(basis) is not closed under adjoint")
            prods = np.matmul(e, self.basis).reshape(self.dim, -1)
            coeffs = prods @ flat.conj().T / self.ambient_dim
            resid = prods - coeffs @ flat
            if np.max(np.abs(resid), initial=0.0) > tol * scale:
                raise NCPError("span(basis) is not closed under multiplication")
        has_unit = self.span_residual(self.unit) <= tol
        if not has_unit:
            raise NCPError("identity matrix is not in span(basis)")
        object.__setattr__(self, "contains_unit_flag", has_unit)


def conditional_expectation(a: np.ndarray, algebra: CoeffAlgebra) -> np.ndarray:
    return algebra.expect(a)


# -- construction -------------------------------------------------------


def _gram_schmidt(
    candidates: Sequence[np.ndarray], n: int, basis: list[np.ndarray], rank_tol: float
) -> list[np.ndarray]:
    """Extend a tau-orthonormal ``basis`` by ``candidates`` (modified Gram-Schmidt)."""
    out = list(basis)
    for c in candidates:
        v = np.array(c, dtype=complex)
        size = np.linalg.norm(v) / np.sqrt(n)
        if size == 0.0:
            continue
        # two passes keep orthogonality at machine precision
        for _ in range(2):
            for e in out:
                v = v - (np.vdot(e, v) / n) * e
        norm = np.linalg.norm(v) / np.sqrt(n)
        if norm > rank_tol * max(1.0, size):
            out.append(v / norm)
    return out


def _matrix_unit(n: int, i: int, j: int) -> np.ndarray:
    m = np.zeros((n, n), dtype=complex)
    m[i, j] = 1.0
    return m


def _block_basis(n: int, sizes: Sequence[int]) -> np.ndarray:
    sizes = [int(s) for s in sizes]
    if any(s <= 0 for s in sizes) or sum(sizes) != n:
        raise DimensionError(f"block sizes {sizes} must be positive and sum to {n}")
    scale = np.sqrt(n)
    basis = []
    start = 0
    for s in sizes:
        for i in range(start, start + s):
            for j in range(start, start + s):
                basis.append(scale * _matrix_unit(n, i, j))
        start += s
    return np.array(basis)


def _generated_basis(
    n: int, generators: Sequence[np.ndarray], max_dim: int, rank_tol: float
) -> np.ndarray:
    gens = []
    for g in generators:
        g = _as_square(g, "generator")
        if g.shape[0] != n:
            raise DimensionError(f"generator has shape {g.shape}, expected ({n}, {n})")
        gens.extend([g, g.conj().T])
    basis = _gram_schmidt([np.eye(n, dtype=complex)] + gens, n, [], rank_tol)
    while True:
        if len(basis) > max_dim:
            raise CapExceededError(
                f"generated algebra dimension {len(basis)} exceeds cap {max_dim}"
            )
        products = [a @ b for a in basis for b in basis]
        grown = _gram_schmidt(products, n, basis, rank_tol)
        if len(grown) == len(basis):
            return np.array(basis)
        basis = grown


def build_subalgebra(
    spec: str | Mapping[str, Any],
    n: int,
    *,
    max_dim: int | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> CoeffAlgebra:
    """Build a :class:`CoeffAlgebra` inside M_n(C).

    ``spec`` is either a type name or a mapping ``{"type": ..., ...}``:

    * ``scalars`` -- C*1, basis ``{I}``
    * ``diagonal`` -- basis ``{sqrt(n) E_ii}``
    * ``blocks`` with ``sizes`` -- block-diagonal algebra, basis ``{sqrt(n) E_ij}``
    * ``generators`` with a list of matrices -- the unital *-algebra they generate

    >>> build_subalgebra({"type": "blocks", "sizes": [2, 1]}, 3).dim
    5
    """
    if n <= 0:
        raise DimensionError(f"ambient dimension must be positive, got {n}")
    if isinstance(spec, str):
        spec = {"type": spec}
    kind = spec.get("type")
    if kind not in SUBALGEBRA_TYPES:
        raise NCPError(f"unknown subalgebra type {kind!r}; expected one of {SUBALGEBRA_TYPES}")
    cap = n * n if max_dim is None else int(max_dim)

    if kind == "generators" and not spec.get("generators"):
        kind = "scalars"

    if kind == "scalars":
        basis = np.eye(n, dtype=complex)[None]
        label = "scalars"
    elif kind == "diagonal":
        basis = _block_basis(n, [1] * n)
        label = "diagonal"
    elif kind == "blocks":
        sizes = spec.get("sizes")
        if sizes is None:
            raise NCPError("blocks subalgebra requires 'sizes'")
        basis = _block_basis(n, sizes)
        label = "blocks"
    else:
        gens = [_as_square(g, "generator") for g in spec["generators"]]
        basis = _generated_basis(n, gens, cap, rank_tol=1e-10)
        label = "generators"
    if basis.shape[0] > cap:
        raise CapExceededError(f"subalgebra dimension {basis.shape[0]} exceeds cap {cap}")
    return CoeffAlgebra(n, basis, True, label, tolerance)


@dataclass(frozen=True, eq=False)
class MatrixModel:
    """A tracial matrix model: the algebra B together with a self-adjoint X."""

    coeff_algebra: CoeffAlgebra
    X: np.ndarray
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self) -> None:
        x = _as_square(self.X, "X").copy()
        if x.shape[0] != self.coeff_algebra.ambient_dim:
            raise DimensionError(
                f"X has shape {x.shape}, algebra lives in dimension {self.coeff_algebra.ambient_dim}"
            )
        if op_norm(x - x.conj().T) > self.tolerance * (1.0 + op_norm(x)):
            raise NCPError("X must be self-adjoint")
        x.setflags(write=False)
        object.__setattr__(self, "X", x)

    @property
    def dim(self) -> int:
        return self.coeff_algebra.ambient_dim

    def tau(self, a: np.ndarray) -> complex:
        return normalized_trace(a)

    def E(self, a: np.ndarray) -> np.ndarray:
        return self.coeff_algebra.expect(a)

    @property
    def x_l2(self) -> float:
        return l2_norm(self.X)

    @property
    def x_op(self) -> float:
        return op_norm(self.X)
