"""Seeded generation of matrix models and random B-valued polynomials.

Every trial draws from its own ``numpy.random.PCG64`` stream derived from
``SeedSequence(entropy=seed, spawn_key=(trial,))``; generation is a pure
function of ``(seed, trial)``.
"""

from __future__ import annotations

import hashlib
import json
from collections.abc import Mapping, Sequence
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

from .coeff_algebra import (
    DEFAULT_TOLERANCE,
    CoeffAlgebra,
    MatrixModel,
    build_subalgebra,
    op_norm,
)
from .errors import NCPError
from .ncpoly import Monomial, NCPoly

GENERATOR_FAMILY = "numpy.random.PCG64 via SeedSequence(entropy=seed, spawn_key=(trial,))"


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    trials: int = 100
    dim_range: tuple[int, int] = (2, 8)
    B_spec: tuple[Any, ...] = ("scalars", "diagonal", "blocks")
    max_degree: int = 6
    max_terms: int = 8
    coeff_scale: float = 1.0
    R_factor: float = 2.0
    tolerance: float = DEFAULT_TOLERANCE
    canonical_cap: int = 4096
    workers: int = 1

    def __post_init__(self) -> None:
        lo, hi = (int(v) for v in self.dim_range)
        object.__setattr__(self, "dim_range", (lo, hi))
        specs = self.B_spec
        if isinstance(specs, (str, Mapping)):
            specs = (specs,)
        object.__setattr__(self, "B_spec", tuple(specs))
        if self.trials < 0:
            raise NCPError("trials must be nonnegative")
        if not 1 <= lo <= hi:
            raise NCPError(f"dim_range {self.dim_range} must satisfy 1 <= min <= max")
        if not self.B_spec:
            raise NCPError("B_spec must name at least one subalgebra")
        if self.max_degree < 0 or self.max_terms < 1:
            raise NCPError("max_degree must be >= 0 and max_terms >= 1")
        if self.coeff_scale <= 0:
            raise NCPError("coeff_scale must be positive")
        if self.R_factor <= 1:
            raise NCPError("R_factor must exceed 1 so that ||X|| < R")
        if self.tolerance <= 0:
            raise NCPError("tolerance must be positive")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> SuiteConfig:
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise NCPError(f"unknown suite config keys: {sorted(unknown)}")
        kwargs = dict(data)
        if "dim_range" in kwargs:
            kwargs["dim_range"] = tuple(kwargs["dim_range"])
        return cls(**kwargs)

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["dim_range"] = list(self.dim_range)
        out["B_spec"] = list(self.B_spec)
        return out

    def digest(self) -> str:
        data = self.to_dict()
        data.pop("workers")
        blob = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(trial),))
    return np.random.Generator(np.random.PCG64(ss))


def complex_gaussian(rng: np.random.Generator, shape: Sequence[int] | int) -> np.ndarray:
    """Standard complex Gaussian entries, ``E|z|^2 = 1``."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_block_sizes(rng: np.random.Generator, n: int) -> list[int]:
    cuts = sorted(int(c) for c in np.flatnonzero(rng.random(n - 1) < 0.5) + 1)
    edges = [0] + cuts + [n]
    return [b - a for a, b in zip(edges, edges[1:])]


def resolve_spec(rng: np.random.Generator, spec: Any, n: int) -> dict[str, Any]:
    if isinstance(spec, str):
        spec = {"type": spec}
    spec = dict(spec)
    if spec.get("type") == "blocks" and "sizes" not in spec:
        spec["sizes"] = random_block_sizes(rng, n)
    return spec


def random_model(
    rng: np.random.Generator,
    n: int,
    spec: Any = "scalars",
    tolerance: float = DEFAULT_TOLERANCE,
) -> MatrixModel:
    """``X = (G + G*)/2`` with complex Gaussian ``G``, rescaled to ``||X|| = 1``."""
    spec = resolve_spec(rng, spec, n)
    g = complex_gaussian(rng, (n, n))
    x = (g + g.conj().T) / 2
    x = x / op_norm(x)
    algebra = build_subalgebra(spec, n, tolerance=tolerance)
    return MatrixModel(algebra, x, tolerance)


def random_element(rng: np.random.Generator, algebra: CoeffAlgebra, scale: float = 1.0) -> np.ndarray:
    """Random element of B with operator norm in ``[scale/2, scale]``."""
    b = algebra.from_coords(complex_gaussian(rng, algebra.dim))
    return b * (scale * rng.uniform(0.5, 1.0) / op_norm(b))


def random_monomial(
    rng: np.random.Generator, algebra: CoeffAlgebra, degree: int, scale: float = 1.0
) -> Monomial:
    return Monomial([random_element(rng, algebra, scale) for _ in range(degree + 1)])


def random_poly(
    rng: np.random.Generator,
    algebra: CoeffAlgebra,
    max_degree: int = 6,
    max_terms: int = 8,
    coeff_scale: float = 1.0,
) -> NCPoly:
    if max_degree < 0 or max_terms < 1:
        raise ValueError("max_degree must be >= 0 and max_terms >= 1")
    count = int(rng.integers(1, max_terms + 1))
    terms = []
    for _ in range(count):
        degree = int(rng.integers(0, max_degree + 1))
        terms.append((1.0, random_monomial(rng, algebra, degree, coeff_scale)))
    return NCPoly(algebra, terms, check=False)


def random_cancelling_poly(
    rng: np.random.Generator,
    algebra: CoeffAlgebra,
    max_degree: int = 4,
    max_terms: int = 4,
    coeff_scale: float = 1.0,
) -> NCPoly:
    """A polynomial whose positive-degree part cancels only after canonicalization.

    ``q`` is subtracted in a different representation (its canonical word
    expansion, or with one coefficient split into two summands), and a random
    element of B is added.
    """
    top = max(max_degree, 1)
    q = random_poly(rng, algebra, top, max_terms, coeff_scale)
    lead = random_monomial(rng, algebra, int(rng.integers(1, top + 1)), coeff_scale)
    q = NCPoly(algebra, [(1.0, lead), *q.terms], check=False)
    if rng.random() < 0.5:
        q_again = NCPoly.from_canonical(algebra, q.canonical())
    else:
        terms = []
        for w, m in q.terms:
            i = int(rng.integers(0, m.degree + 1))
            piece = random_element(rng, algebra, coeff_scale)
            first = list(m.coeffs)
            second = list(m.coeffs)
            first[i] = piece
            second[i] = m.coeffs[i] - piece
            terms += [(w, Monomial(first)), (w, Monomial(second))]
        q_again = NCPoly(algebra, terms, check=False)
    b = NCPoly(algebra, [(1.0, random_monomial(rng, algebra, 0, coeff_scale))], check=False)
    return q + b - q_again
