"""Linear algebra over the field with two elements, on numpy `uint8` arrays."""
from __future__ import annotations
import numpy as np


def as_gf2(m: np.ndarray) -> np.ndarray:
    """Copy an integer array into a `uint8` array of zeros and ones."""
    return (np.asarray(m, dtype=np.int64) % 2).astype(np.uint8)


def row_reduce(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """
    Put a matrix in reduced row echelon form over GF(2).

    :param m: The matrix.
    :return: The reduced matrix and the pivot column of each of its non-zero rows.
    """
    reduced = as_gf2(m)
    if reduced.ndim != 2:
        raise ValueError(f"Expected a matrix, got an array of shape {reduced.shape}.")
    n_rows, n_cols = reduced.shape
    pivots: list[int] = []
    row = 0
    for col in range(n_cols):
        if row == n_rows:
            break
        candidates = np.nonzero(reduced[row:, col])[0]
        if candidates.size == 0:
            continue
        pivot_row = row + int(candidates[0])
        if pivot_row != row:
            reduced[[row, pivot_row]] = reduced[[pivot_row, row]]
        others = np.nonzero(reduced[:, col])[0]
        others = others[others != row]
        reduced[others] ^= reduced[row]
        pivots.append(col)
        row += 1
    return reduced, pivots


def rank(m: np.ndarray) -> int:
    """The rank of a matrix over GF(2)."""
    if np.asarray(m).size == 0:
        return 0
    return len(row_reduce(m)[1])


def kernel_basis(m: np.ndarray) -> np.ndarray:
    """
    A basis of the right kernel `{x : m @ x = 0 (mod 2)}`.

    :return: An array whose rows are the basis vectors.
    """
    m = as_gf2(m)
    n_cols = m.shape[1]
    reduced, pivots = row_reduce(m)
    free = [col for col in range(n_cols) if col not in pivots]
    basis = np.zeros((len(free), n_cols), dtype=np.uint8)
    for i, col in enumerate(free):
        basis[i, col] = 1
        for r, pivot in enumerate(pivots):
            basis[i, pivot] = reduced[r, col]
    return basis


class IncrementalBasis:
    """A growing set of independent vectors that tells whether a new vector lies in its span."""

    def __init__(self, length: int) -> None:
        """:param length: The length of the vectors."""
        self.length = length
        self.rows: list[tuple[int, np.ndarray]] = []

    def reduce(self, vector: np.ndarray) -> np.ndarray:
        """Reduce a vector against the rows added so far."""
        reduced = as_gf2(vector)
        for pivot, row in self.rows:
            if reduced[pivot]:
                reduced ^= row
        return reduced

    def add(self, vector: np.ndarray) -> bool:
        """
        Add a vector if it is independent of the rows added so far.

        :return: Whether the vector was independent.
        """
        reduced = self.reduce(vector)
        nonzero = np.nonzero(reduced)[0]
        if nonzero.size == 0:
            return False
        self.rows.append((int(nonzero[0]), reduced))
        return True

    @property
    def dimension(self) -> int:
        """The dimension of the span."""
        return len(self.rows)
