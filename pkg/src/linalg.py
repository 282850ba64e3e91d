"""
Exact linear algebra over the integers (fraction-free elimination).

Rows are reduced by cross multiplication, r <- p*r - c*pivot_row, and then
divided by the gcd of their entries, so every intermediate stays integral and
no tolerance ever enters a rank decision.
"""

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

Vector = List[int]


def _primitive(values: Sequence[int]) -> List[int]:
    g = reduce(gcd, values, 0)
    if g <= 1:
        return list(values)
    return [x // g for x in values]


def _eliminate(row: Vector, pivot_row: Vector, col: int) -> Vector:
    p, c = pivot_row[col], row[col]
    return _primitive([p * a - c * b for a, b in zip(row, pivot_row)])


def as_integer_matrix(matrix: Sequence[Sequence]) -> List[Vector]:
    """Scale each row of a rational matrix by the lcm of its denominators."""
    out = []
    for row in matrix:
        fractions = [Fraction(x) for x in row]
        denominator = reduce(lambda a, b: a * b // gcd(a, b), (f.denominator for f in fractions), 1)
        out.append([int(f * denominator) for f in fractions])
    return out


def row_echelon(matrix: Sequence[Sequence]) -> Tuple[List[Vector], List[int]]:
    """Integer row-reduced echelon form and its pivot columns."""
    rows = [r for r in as_integer_matrix(matrix)]
    if not rows:
        return [], []
    n_cols = len(rows[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                break
        else:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        for j in range(len(rows)):
            if j != r and rows[j][c] != 0:
                rows[j] = _eliminate(rows[j], rows[r], c)
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(matrix: Sequence[Sequence]) -> int:
    return len(row_echelon(matrix)[1])


class ColumnEchelon:
    """
    Columns added one at a time, kept in echelon form together with the
    combination of original columns each stored vector represents. `push`
    reports the linear relation as soon as a column becomes dependent, and
    `pop` undoes the last successful push (for depth-first searches).
    """

    def __init__(self):
        self._rows: List[Tuple[int, Vector, Dict[int, int]]] = []

    def __len__(self) -> int:
        return len(self._rows)

    def push(self, column: Sequence[int], label: int) -> Optional[Dict[int, int]]:
        vector = list(column)
        combo = {label: 1}
        for pivot, stored, stored_combo in self._rows:
            c = vector[pivot]
            if c == 0:
                continue
            p = stored[pivot]
            vector = [p * a - c * b for a, b in zip(vector, stored)]
            merged = {k: p * v for k, v in combo.items()}
            for k, v in stored_combo.items():
                merged[k] = merged.get(k, 0) - c * v
            combo = {k: v for k, v in merged.items() if v}
            g = reduce(gcd, vector, 0)
            g = reduce(gcd, combo.values(), g)
            if g > 1:
                vector = [a // g for a in vector]
                combo = {k: v // g for k, v in combo.items()}
        for pivot, a in enumerate(vector):
            if a:
                self._rows.append((pivot, vector, combo))
                return None
        g = reduce(gcd, combo.values(), 0)
        return {k: v // g for k, v in sorted(combo.items())}

    def pop(self) -> None:
        self._rows.pop()
