from __future__ import annotations

import random

import pytest

from iterforms import suites
from iterforms.calculus import (TensorField11, apply, derivation_of, dual_basis, evaluate,
                                interior, lift_tensor, pair, wedge)
from iterforms.errors import DegreeError
from iterforms.forms import Polyvector, const, coord, d, dual, gen
from iterforms.grading import ChartSpec
from iterforms.textio import parse_element

K1 = ChartSpec(1, 1)
N2 = ChartSpec(2, 1)


def test_dual_basis_on_generators():
    X = dual_basis(K1, (1,), 1)
    assert apply(X, gen(K1, (1,), 1)) == 1
    assert apply(X, coord(K1, 1)) == 0


def test_dual_basis_rejects_top_slot_input():
    with pytest.raises(DegreeError):
        apply(dual_basis(K1, (1,), 1), gen(K1, (2,), 1))


def test_apply_leibniz_and_power():
    X = dual_basis(N2, (1,), 1)
    assert apply(X, gen(N2, (1,), 1) * gen(N2, (1,), 2)) == gen(N2, (1,), 2)
    assert apply(dual_basis(K1, (), 1), coord(K1, 1) ** 2) == 2 * coord(K1, 1)


def test_wedge_signs_follow_dual_parity():
    # D[L]x has parity |L| + 1: D[1]x is even, D[]x is odd
    a1, a2 = dual(N2, (1,), 1), dual(N2, (1,), 2)
    assert wedge(a1, a1) != 0
    assert wedge(a2, a1) == wedge(a1, a2)
    b1, b2 = dual(N2, (), 1), dual(N2, (), 2)
    assert not wedge(b1, b1)
    assert wedge(b2, b1) == -wedge(b1, b2)


def test_square_of_even_dual_contracts_to_two():
    Z = wedge(dual(K1, (1,), 1), dual(K1, (1,), 1))
    assert interior(Z, gen(K1, (1, 2), 1) ** 2) == 2


def test_interior_examples():
    assert interior(dual(K1, (1,), 1), gen(K1, (1, 2), 1)) == 1
    assert interior(dual(K1, (1,), 1), coord(K1, 1) * gen(K1, (1,), 1)) == 0


def test_interior_degree_error():
    Z = dual(N2, (), 1) * dual(N2, (), 2)
    with pytest.raises(DegreeError):
        interior(Z, gen(N2, (2,), 1))


def test_pair_examples():
    X = dual(N2, (1,), 1) * dual(N2, (1,), 2)
    assert pair(X, const(N2, 1)) == X
    assert pair(X, gen(N2, (1, 2), 2)) == dual(N2, (1,), 1)


def test_pair_of_product_equals_iterated_pair():
    rng = random.Random(11)
    for chart in (K1, N2, ChartSpec(1, 2)):
        for _ in range(15):
            Z = suites.random_polyvector(rng, chart, 2)
            w1, w2 = suites.random_top_form(rng, chart, 1), suites.random_top_form(rng, chart, 1)
            assert pair(pair(Z, w1), w2) == pair(Z, w1 * w2)


def test_evaluate_is_derivation_for_degree_one():
    rng = random.Random(2)
    for _ in range(20):
        Z = suites.random_polyvector(rng, N2, 1)
        X = derivation_of(Z)
        a = suites.random_homogeneous(rng, N2, slots=1)
        assert evaluate(Z, [a]) == apply(X, a)
        assert X.to_polyvector() == Z


def test_lift_tensor_examples():
    ident = TensorField11.from_json([["1", "0"], ["0", "1"]])
    X = lift_tensor(ident)
    for nu in (1, 2):
        assert X(gen(N2, (1,), nu)) == gen(N2, (1,), nu)
    nil = lift_tensor(TensorField11.from_json([["0", "1"], ["0", "0"]]))
    assert nil(gen(N2, (1,), 1)) == gen(N2, (1,), 2)
    assert nil(gen(N2, (1,), 2)) == 0


def test_tensor_json_round_trip():
    T = TensorField11.from_json({"entries": [["x1", "x2^2"], ["x1*x2", "0"]]})
    assert TensorField11.from_json(T.to_json()).to_json() == T.to_json()
    assert str(T.diagonal_sum()) == "x1"


def test_polyvector_products_stay_polyvectors():
    Z = parse_element("x1*D[1]x1", K1)
    assert isinstance(Z * coord(K1, 1), Polyvector)
    assert isinstance(d(1, coord(K1, 1)) * Z, Polyvector)
