"""Word-basis canonical forms shared by polynomials and tensors.

A canonical form maps a *shape key* to a dense coefficient array.  For a
polynomial the key is the degree ``n`` and the array has shape ``(d,)*(n+1)``
with entry ``[k0, ..., kn]`` the weight of the word ``e_k0 X e_k1 ... X e_kn``.
For a tensor the key is ``(n_left, n_right)`` and the array concatenates the
index axes of both legs.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterator
from typing import Any

import numpy as np

from .errors import CapExceededError

DROP_THRESHOLD = 1e-12
MAX_CANONICAL_ENTRIES = 1 << 21


def expansion_size(d: int, letters: int) -> int:
    return d**letters


def check_size(d: int, letters: int, cap: int = MAX_CANONICAL_ENTRIES) -> None:
    size = expansion_size(d, letters)
    if size > cap:
        raise CapExceededError(
            f"canonical expansion needs {size} entries (d={d}, {letters} coefficient slots), cap is {cap}"
        )


def outer_all(vectors: list[np.ndarray]) -> np.ndarray:
    out = vectors[0]
    for v in vectors[1:]:
        out = np.multiply.outer(out, v)
    return out


class CanonicalForm:
    """Sparse-by-shape, dense-by-index map from words to complex weights."""

    __slots__ = ("d", "arrays")

    def __init__(self, d: int, arrays: dict[Hashable, np.ndarray] | None = None):
        self.d = d
        self.arrays: dict[Hashable, np.ndarray] = {}
        for key, arr in (arrays or {}).items():
            self.accumulate(key, arr)
        self.prune()

    def accumulate(self, key: Hashable, arr: np.ndarray) -> None:
        if key in self.arrays:
            self.arrays[key] = self.arrays[key] + arr
        else:
            self.arrays[key] = np.array(arr, dtype=complex)

    def prune(self, threshold: float = DROP_THRESHOLD) -> CanonicalForm:
        """Zero entries below ``threshold`` and drop all-zero shapes."""
        for key in list(self.arrays):
            arr = self.arrays[key]
            arr[np.abs(arr) < threshold] = 0.0
            if not arr.any():
                del self.arrays[key]
        return self

    def is_zero(self) -> bool:
        return not self.arrays

    def keys(self) -> list[Hashable]:
        return sorted(self.arrays, key=_key_order)

    def max_abs(self) -> float:
        return max((float(np.max(np.abs(a))) for a in self.arrays.values()), default=0.0)

    def entries(self) -> Iterator[tuple[Hashable, tuple[int, ...], complex]]:
        """Nonzero entries in deterministic order: shape key, then lexicographic index."""
        for key in self.keys():
            arr = self.arrays[key]
            for idx in zip(*np.nonzero(arr)):
                yield key, tuple(int(i) for i in idx), complex(arr[idx])

    def to_dict(self) -> dict[tuple[Any, tuple[int, ...]], complex]:
        return {(key, idx): w for key, idx, w in self.entries()}

    def __len__(self) -> int:
        return sum(int(np.count_nonzero(a)) for a in self.arrays.values())

    def difference(self, other: CanonicalForm) -> float:
        """Largest entrywise discrepancy between two canonical forms."""
        worst = 0.0
        for key in set(self.arrays) | set(other.arrays):
            a = self.arrays.get(key)
            b = other.arrays.get(key)
            if a is None:
                worst = max(worst, float(np.max(np.abs(b))))
            elif b is None:
                worst = max(worst, float(np.max(np.abs(a))))
            else:
                worst = max(worst, float(np.max(np.abs(a - b))))
        return worst

    def equals(self, other: CanonicalForm, tol: float = DROP_THRESHOLD) -> bool:
        if self.d != other.d:
            return False
        scale = max(1.0, self.max_abs(), other.max_abs())
        return self.difference(other) <= tol * scale


def _key_order(key: Hashable) -> tuple:
    if isinstance(key, tuple):
        return (sum(key),) + key
    return (key,)
