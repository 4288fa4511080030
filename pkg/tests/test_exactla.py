from __future__ import annotations

import random
from fractions import Fraction

import pytest

from iterforms import exactla
from iterforms.errors import UsageError
from iterforms.exactla import _kernels


def _random_matrix(rng, rows, cols, rank=None):
    if rank is None:
        return [[Fraction(rng.randint(-4, 4), rng.choice((1, 1, 2, 3))) for _ in range(cols)]
                for _ in range(rows)]
    A = [[rng.randint(-3, 3) for _ in range(rank)] for _ in range(rows)]
    B = [[rng.randint(-3, 3) for _ in range(cols)] for _ in range(rank)]
    return [[sum(A[i][t] * B[t][j] for t in range(rank)) for j in range(cols)] for i in range(rows)]


def test_known_ranks():
    M = exactla.SparseMatrixQ.from_dense([[1, 2], [2, 4]])
    assert exactla.rank(M) == 1
    assert exactla.rank(exactla.SparseMatrixQ(0, 3)) == 0
    assert exactla.rank(exactla.SparseMatrixQ.from_dense([[Fraction(1, 3), 1], [0, 1]])) == 2


@pytest.mark.parametrize("backend", ["python", "numpy", "numba"])
def test_backends_agree_on_low_rank_products(backend):
    rng = random.Random(5)
    for _ in range(40):
        r = rng.randint(0, 4)
        dense = _random_matrix(rng, rng.randint(1, 8), rng.randint(1, 8), rank=r)
        M = exactla.SparseMatrixQ.from_dense(dense)
        assert exactla.rank(M, backend=backend) == exactla.rank(M, backend="python")


def test_overflow_falls_back_to_big_integers():
    big = 10 ** 30
    M = exactla.SparseMatrixQ.from_dense([[big, 1], [1, big]])
    assert exactla.rank(M, backend="numba") == 2
    assert exactla.rank(M, backend="numpy") == 2


def test_kernel_basis_vectors_are_in_kernel():
    rng = random.Random(9)
    for _ in range(30):
        dense = _random_matrix(rng, rng.randint(1, 6), rng.randint(1, 7))
        M = exactla.SparseMatrixQ.from_dense(dense)
        ker = exactla.kernel_basis(M)
        assert len(ker) + exactla.rank(M) == M.ncols
        for v in ker:
            assert not any(M.matvec(v))


def test_solve_in_image():
    M = exactla.SparseMatrixQ.from_dense([[1, 0], [0, 2], [1, 2]])
    x = exactla.solve_in_image(M, [1, 4, 5])
    assert M.matvec(x) == [1, 4, 5]
    assert exactla.solve_in_image(M, [1, 0, 0]) is exactla.NOT_IN_IMAGE


def test_backend_env_flag(monkeypatch):
    monkeypatch.setenv("ITERFORMS_BACKEND", "numpy")
    assert _kernels.backend() == "numpy"
    monkeypatch.setenv("ITERFORMS_BACKEND", "bogus")
    with pytest.raises(UsageError):
        _kernels.backend()


def test_small_examples():
    I3 = exactla.SparseMatrixQ.from_dense([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert exactla.rank(I3) == 3
    assert exactla.kernel_basis(I3) == []
    assert exactla.rank(exactla.SparseMatrixQ.from_dense([[0, 0], [0, 0]])) == 0
    (v,) = exactla.kernel_basis(exactla.SparseMatrixQ.from_dense([[1, 1]]))
    assert v[0] == -v[1] != 0
    assert exactla.solve_in_image(I3, [3, Fraction(1, 2), -1]) == [3, Fraction(1, 2), -1]
    assert exactla.solve_in_image(I3, [0, 0, 0]) == [0, 0, 0]
    col = exactla.SparseMatrixQ.from_dense([[1], [0]])
    assert exactla.solve_in_image(col, [0, 1]) is exactla.NOT_IN_IMAGE


def test_solve_dimension_mismatch():
    with pytest.raises(UsageError):
        exactla.solve_in_image(exactla.SparseMatrixQ.from_dense([[1, 0]]), [1, 2])
