from functools import reduce
from itertools import combinations
from math import gcd

import pytest

from errors import InputError
from zlinalg import (IntegerMatrix, cokernel_structure, is_unimodular, smith_normal_form,
                     solve_integer_linear, unimodular_inverse)


def random_matrix(rng, rows, cols, bound=9):
    return IntegerMatrix.from_rows([[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)])


def det(rows):
    if len(rows) == 1:
        return rows[0][0]
    return sum((-1) ** j * rows[0][j] * det([r[:j] + r[j + 1:] for r in rows[1:]])
               for j in range(len(rows)))


def determinantal_divisor(a: IntegerMatrix, k: int) -> int:
    rows = a.to_rows()
    minors = [det([[rows[i][j] for j in cs] for i in rs])
              for rs in combinations(range(a.rows), k) for cs in combinations(range(a.cols), k)]
    return reduce(gcd, (abs(m) for m in minors), 0)


def test_smith_normal_form_random(rng):
    for _ in range(500):
        a = random_matrix(rng, rng.randint(1, 8), rng.randint(1, 8))
        d, u, v = smith_normal_form(a)
        assert u @ a @ v == d
        assert is_unimodular(u) and is_unimodular(v)
        diag = d.diagonal()
        for i in range(d.rows):
            for j in range(d.cols):
                if i != j:
                    assert d[i, j] == 0
        assert all(x >= 0 for x in diag)
        nonzero = [x for x in diag if x]
        assert diag[:len(nonzero)] == nonzero
        for x, y in zip(nonzero, nonzero[1:]):
            assert y % x == 0


def test_invariants_match_determinantal_divisors(rng):
    for _ in range(100):
        a = random_matrix(rng, 3, 3, bound=6)
        diag = smith_normal_form(a)[0].diagonal()
        product = 1
        for k in range(1, 4):
            product *= diag[k - 1]
            assert determinantal_divisor(a, k) == product


def test_cokernel_structure():
    a = IntegerMatrix.from_rows([[2, 0], [0, 3], [0, 0]])
    structure = cokernel_structure(a)
    assert structure.rank == 1
    assert structure.torsion == [6]
    assert cokernel_structure(IntegerMatrix.identity(3)).is_trivial


def test_solve_integer_linear():
    a = IntegerMatrix.from_rows([[2, 4], [1, 3]])
    x = solve_integer_linear(a, [6, 5])
    assert a.apply(x) == [6, 5]
    assert solve_integer_linear(IntegerMatrix.from_rows([[2, 4]]), [3]) is None
    with pytest.raises(InputError):
        solve_integer_linear(a, [1])


def test_solve_random_consistent_systems(rng):
    for _ in range(100):
        a = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
        x0 = [rng.randint(-5, 5) for _ in range(a.cols)]
        b = a.apply(x0)
        x = solve_integer_linear(a, b)
        assert x is not None
        assert a.apply(x) == b


def test_unimodular_inverse():
    a = IntegerMatrix.from_rows([[2, 1], [1, 1]])
    inverse = unimodular_inverse(a)
    assert a @ inverse == IntegerMatrix.identity(2)
    assert unimodular_inverse(IntegerMatrix.from_rows([[2, 0], [0, 1]])) is None
    with pytest.raises(InputError):
        unimodular_inverse(IntegerMatrix.from_rows([[1, 2]]))
