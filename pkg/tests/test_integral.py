from __future__ import annotations

import random

import pytest

from iterforms import suites
from iterforms.calculus import TensorField11, lift_tensor
from iterforms.errors import DegreeError, SlotError
from iterforms.forms import IteratedForm, Polyvector, as_polyvector, coord, dual, gen
from iterforms.grading import ChartSpec
from iterforms.integral import (adjoint_check_prop2, de_rham_table, hat_d, hat_d_lower,
                                hat_d_top, homology, kappa_identity_check, nu, trace)
from iterforms.textio import parse_element

K1 = ChartSpec(1, 1)


def pv(text, chart=K1):
    return as_polyvector(parse_element(text, chart))


def test_nu():
    assert nu(1, 1) == 1
    assert nu(2, 3) == 6
    assert nu(3, 2) == 8


def test_hat_d_top_local_formula():
    assert hat_d_top(pv("x1^2*D[]x1")) == -2 * coord(K1, 1)
    assert hat_d_top(pv("d[1]x1*D[1]x1")) == 1
    assert hat_d_top(pv("x1*D[]x1")) == -1


def test_hat_d_top_rejects_degree_zero():
    with pytest.raises(DegreeError):
        hat_d_top(pv("x1"))


def test_hat_d_top_squares_to_zero():
    rng = random.Random(21)
    for chart in (K1, ChartSpec(2, 1), ChartSpec(1, 2), ChartSpec(2, 2)):
        for s in (2, 3):
            Z = suites.random_polyvector(rng, chart, s)
            assert not hat_d_top(hat_d_top(Z))


def test_hat_d_lower_examples():
    assert hat_d_lower(1, dual(K1, (1,), 1)) == -dual(K1, (), 1)
    assert not hat_d_lower(1, dual(K1, (), 1))
    Z = pv("x1*d[1]x1*D[1]x1")
    assert hat_d_lower(1, 3 * Z) == 3 * hat_d_lower(1, Z)


def test_hat_d_lower_slot_range():
    with pytest.raises(SlotError):
        hat_d_lower(2, dual(K1, (1,), 1))
    with pytest.raises(SlotError):
        hat_d(3, dual(K1, (1,), 1))


def test_lower_adjoint_spot_checks():
    x, dx = coord(K1, 1), gen(K1, (1,), 1)
    for Z in (pv("D[1]x1"), pv("x1*D[]x1"), pv("d[1]x1*D[1]x1^2")):
        for a in (x, dx, x * dx, x ** 2):
            args = [a] * Z.s
            assert suites._lower_adjoint_holds(1, Z, args)


def test_adjoint_routes_examples():
    a, b = adjoint_check_prop2(pv("x1*D[]x1"))
    assert a == b and a.coefficient == -1
    zero = adjoint_check_prop2(Polyvector(K1))
    assert zero[0] == zero[1] and zero[0].coefficient == 0
    ident = lift_tensor(TensorField11.from_json([["1", "0"], ["0", "1"]])).to_polyvector()
    a, b = adjoint_check_prop2(ident)
    assert a.coefficient == 2 and b.coefficient == 2


@pytest.mark.parametrize("entries, expected", [
    ([["1", "0"], ["0", "1"]], "2"),
    ([["1", "2"], ["3", "4"]], "5"),
    ([["x1", "x2^2"], ["x1*x2", "0"]], "x1"),
])
def test_trace_examples(entries, expected):
    assert str(trace(TensorField11.from_json(entries))) == expected


@pytest.mark.parametrize("n", [1, 2, 3])
def test_kappa_identity(n):
    assert kappa_identity_check(n)


def test_kappa_sign_at_n2():
    # global sign (-1)^(n(n-1)/2) is -1 at n = 2
    from iterforms.diffops import apply_op, berezin_generator
    from iterforms.forms import kappa

    chart = ChartSpec(2, 1)
    a = gen(chart, (1,), 1) * gen(chart, (1,), 2)
    assert apply_op(berezin_generator(chart), a) == -kappa(a)


@pytest.mark.parametrize("k, n, deg, expected", [
    (1, 1, 3, [0, 1, 0]),
    (1, 2, 2, [0, 0, 1, 0]),
    (2, 1, 2, [0, 0, 1, 0]),
])
def test_homology_tables(k, n, deg, expected):
    rep = homology(ChartSpec(n, k), deg)
    assert rep.dims == expected
    assert rep.extra["matches"]


def test_homology_witness_is_the_expected_class():
    rep = homology(K1, 2)
    assert rep.witnesses == ["d[1]x1*D[]x1"]


def test_de_rham_comparator_is_poincare():
    for n in (1, 2, 3):
        assert de_rham_table(n, 3) == [1] + [0] * n


def test_integral_forms_are_not_forms():
    with pytest.raises(DegreeError):
        hat_d_top(IteratedForm(K1, {(): 1}) * dual(K1, (), 1) + coord(K1, 1))
