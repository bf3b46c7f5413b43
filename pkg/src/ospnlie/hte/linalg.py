"""Exact Gaussian elimination over Gaussian rationals."""

from __future__ import annotations

from .gauss import Gauss


def solve_exact(matrix, rhs):
    """Solve ``matrix @ x = rhs`` exactly; raise ``ZeroDivisionError`` if singular.

    ``matrix`` is a list of rows; overdetermined systems are accepted as long as
    they are consistent (extra rows are checked after elimination).
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    aug = [[Gauss.coerce(x) for x in row] + [Gauss.coerce(b)] for row, b in zip(matrix, rhs)]
    pivot_row = 0
    pivots = []
    for col in range(cols):
        piv = next((r for r in range(pivot_row, rows) if aug[r][col]), None)
        if piv is None:
            raise ZeroDivisionError(f"singular system (column {col})")
        aug[pivot_row], aug[piv] = aug[piv], aug[pivot_row]
        inv = aug[pivot_row][col].reciprocal()
        aug[pivot_row] = [x * inv for x in aug[pivot_row]]
        for r in range(rows):
            if r != pivot_row and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[pivot_row])]
        pivots.append(pivot_row)
        pivot_row += 1
    for r in range(pivot_row, rows):
        if aug[r][cols]:
            raise ArithmeticError("inconsistent overdetermined system")
    return [aug[p][cols] for p in pivots]
