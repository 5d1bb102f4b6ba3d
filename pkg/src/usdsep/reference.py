"""Closed-form reference values for the five-state two-qubit family.

For n = 5 with dims (2, 2) both the family states and their reciprocal
partners have compact closed forms in terms of w = exp(2 pi i / 5).  They
serve as an independent cross-check of the generic constructions: the
generated states must match these entrywise, and the computed reciprocal
states must match up to the (physically irrelevant) global phase.
"""

from __future__ import annotations

import numpy as np

__all__ = ["two_qubit_states", "two_qubit_reciprocal_states"]


def two_qubit_states() -> np.ndarray:
    """The five two-qubit family states, row j-1 = state j, basis order
    |00>, |01>, |10>, |11> with the first qubit most significant."""
    w = np.exp(2j * np.pi / 5.0)
    rows = []
    for j in range(1, 6):
        rows.append([1.0, w ** (2 * j), w**j, w ** (3 * j)])
    return 0.5 * np.array(rows)


def two_qubit_reciprocal_states() -> np.ndarray:
    """Closed forms of the four reciprocal states (labels 2..5, omit = 1).

    Rows are unit norm with common normalization 1/sqrt(5 + sqrt(5)); each
    is orthogonal to the three family states it does not partner.
    """
    w = np.exp(2j * np.pi / 5.0)
    half = np.exp(1j * np.pi / 5.0)  # w^(1/2)
    c = 1.0 / np.sqrt(5.0 + np.sqrt(5.0))
    gold = 2.0 * np.cos(2.0 * np.pi / 5.0)
    rows = [
        [-(w**-1), 1.0 + w**-1, -(1.0 + w), w],
        [w / gold, -1.0, -half, 1.0 + w**-1],
        [1.0 + w, -half, half, -(1.0 + w)],
        [1.0, w / gold, 1.0 + w, -(w**-1)],
    ]
    return c * np.array(rows)
