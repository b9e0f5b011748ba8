"""The free difference quotient relative to B.

On a monomial ``b0 X b1 ... X bn`` it returns the sum of the ``n`` splits
``b0 X ... b_{i-1} (x) b_i X ... bn``; coefficients are constants, so
degree-0 monomials map to zero.  The result keeps the stored representation
of the input, which keeps projective-norm bounds tight.
"""

from __future__ import annotations

from .ncpoly import NCPoly
from .tensor2 import TensorElem


def fdq(p: NCPoly) -> TensorElem:
    terms = []
    for w, m in p.terms:
        for i in range(1, m.degree + 1):
            left, right = m.split(i)
            terms.append((w, left, right))
    return TensorElem(p.algebra, terms)


def split_word(word: tuple[int, ...], i: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split a basis word at its ``i``-th X letter; ``left + right == word``."""
    return word[:i], word[i:]
