from fractions import Fraction

from src.finite_field import build_tower
from src.linalg import ColumnEchelon, as_integer_matrix, rank, row_echelon
from src.paley import build_paley


def test_as_integer_matrix_clears_denominators():
    assert as_integer_matrix([[Fraction(1, 2), Fraction(1, 3)], [2, 4]]) == [[3, 2], [2, 4]]


def test_row_echelon_pivots():
    rows, pivots = row_echelon([[2, 4], [1, 3]])
    assert pivots == [0, 1]
    assert len(rows) == 2
    assert row_echelon([]) == ([], [])


def test_rank_is_exact_on_rationals():
    assert rank([[Fraction(1, 2), 1], [1, 2]]) == 1
    assert rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 3
    assert rank([[0, 0], [0, 0]]) == 0


def test_dependent_rows_drop_rank():
    assert rank([[1, 2, 3], [2, 4, 6]]) == 1
    assert rank([]) == 0


def test_eigenspace_dimensions_of_p9():
    g = build_paley(build_tower(3))
    for theta, multiplicity in ((1, 4), (-2, 4), (4, 1)):
        matrix = [[((g.adj[i] >> j) & 1) - (theta if i == j else 0) for j in range(9)] for i in range(9)]
        assert rank(matrix) == 9 - multiplicity


def test_column_echelon_reports_relations():
    echelon = ColumnEchelon()
    assert echelon.push([1, 0], 0) is None
    assert echelon.push([0, 1], 1) is None
    assert echelon.push([1, 1], 2) == {0: -1, 1: -1, 2: 1}
    assert len(echelon) == 2


def test_column_echelon_pop_and_parallel_columns():
    echelon = ColumnEchelon()
    echelon.push([1, 0, 1], 0)
    assert echelon.push([2, 0, 2], 1) == {0: -2, 1: 1}
    assert echelon.push([0, 1, 0], 2) is None
    echelon.pop()
    assert len(echelon) == 1
    assert echelon.push([0, 3, 0], 3) is None
