from __future__ import annotations

import random
from fractions import Fraction

import pytest

from iterforms import suites
from iterforms.calculus import TensorField11, lift_tensor
from iterforms.diffops import (DiffOperator, WindowSpec, apply_op, berezin_generator, chi_realize,
                               class_of, cohomology_window, compose_derivation, compose_mult,
                               format_operator, nu, polyvector_of, right_action, w)
from iterforms.errors import DegreeError, NotClosedError, ResourceLimitError, WindowError
from iterforms.forms import IteratedForm, const, coord, d, dual, gen, mul_keys, table
from iterforms.grading import ChartSpec, labels_of, mask_of
from iterforms.limits import LIMITS
from iterforms.textio import parse_element

K1 = ChartSpec(1, 1)
CHARTS = [ChartSpec(1, 1), ChartSpec(2, 1), ChartSpec(1, 2), ChartSpec(2, 2)]


def _op(chart, form="", ops=(), coeff=1):
    """coeff * form ^ D_1 o D_2 o ..., ops given as (labels, mu)."""
    tab = table(chart)
    f = parse_element(form, chart) if form else const(chart, 1)
    (fkey, c0), = f.terms.items()
    okey, sign = (), 1
    for labels, mu in ops:
        s, okey = mul_keys(tab, okey, ((tab.op(mask_of(labels, chart.k), mu - 1), 1),))
        sign *= s
    return DiffOperator(chart, {(fkey, okey, ()): Fraction(coeff) * c0 * sign})


def _random_op(rng, chart):
    out = DiffOperator(chart)
    for _ in range(rng.randint(1, 3)):
        f = suites.random_homogeneous(rng, chart, 2)
        ops = [(labels_of(rng.randint(0, (1 << chart.k) - 1)), rng.randint(1, chart.n))
               for _ in range(rng.randint(0, 2))]
        P = _op(chart, ops=ops)
        out = out + DiffOperator(chart, {(fk, pk, ck): c * cf for fk, cf in f.terms.items()
                                         for (_, pk, ck), c in P.terms.items()})
    return out


def _spanning(rng, chart, count=6):
    return [suites.random_homogeneous(rng, chart, 3, slots=chart.k) for _ in range(count)]


def test_apply_examples():
    op = _op(K1, "d[2]x1", [((1,), 1)])
    assert apply_op(op, gen(K1, (1,), 1)) == gen(K1, (2,), 1)
    a = coord(K1, 1) * gen(K1, (1,), 1)
    assert apply_op(DiffOperator.identity(K1), a) == a
    assert apply_op(berezin_generator(K1), const(K1, 1)) == 0


def test_w_is_d_after_operator():
    rng = random.Random(4)
    for chart in CHARTS:
        for _ in range(15):
            D = _random_op(rng, chart)
            for a in _spanning(rng, chart, 3):
                assert apply_op(w(D), a) == d(chart.slots, apply_op(D, a))
            assert not w(w(D))


def test_w_of_dual_derivation():
    # no order-zero term appears: w(D) a = d_2(D a) on a spanning set
    D = _op(K1, ops=[((1,), 1)])
    wD = w(D)
    assert wD.order() == 2
    assert not w(wD)
    x, dx = coord(K1, 1), gen(K1, (1,), 1)
    for a in (const(K1, 1), x, dx, x * dx, x ** 3 * dx):
        assert apply_op(wD, a) == d(2, apply_op(D, a))


def test_w_of_identity_is_d():
    wI = w(DiffOperator.identity(K1))
    a = coord(K1, 1) ** 2 * gen(K1, (1,), 1)
    assert apply_op(wI, a) == d(2, a)


def test_composition_matches_application():
    rng = random.Random(8)
    for chart in CHARTS[:3]:
        for _ in range(10):
            D = _random_op(rng, chart)
            b = suites.random_homogeneous(rng, chart, 2, slots=chart.k)
            X = lift_tensor(suites.random_tensor(rng, chart.n)) if chart.k == 1 else None
            for a in _spanning(rng, chart, 3):
                assert apply_op(compose_mult(D, b), a) == apply_op(D, b * a)
                if X is not None:
                    assert apply_op(compose_derivation(D, X), a) == apply_op(D, X(a))


@pytest.mark.parametrize("chart", CHARTS)
def test_berezinian_is_closed(chart):
    box = berezin_generator(chart)
    assert not w(box)
    assert box.form_degrees() == {nu(chart)}


def test_berezinian_printing():
    assert format_operator(berezin_generator(K1)) == "d[2]x1 ∧ D[1]x1"
    assert str(berezin_generator(ChartSpec(2, 1))) == "d[2]x1*d[2]x2 ∧ D[1]x1∘D[1]x2"
    # k = 2: even subsets {} and {1,2}, odd subsets {1} and {2}
    assert str(berezin_generator(ChartSpec(1, 2))) == "d[3]x1*d[1,2,3]x1 ∧ D[1]x1∘D[2]x1"


def test_berezinian_resource_limit(monkeypatch):
    monkeypatch.setattr(LIMITS, "max_nu", 3)
    berezin_generator.cache_clear()
    try:
        with pytest.raises(ResourceLimitError):
            berezin_generator(ChartSpec(1, 3))
    finally:
        berezin_generator.cache_clear()


def test_class_of_examples():
    assert class_of(berezin_generator(K1)).coefficient == 1
    chart = ChartSpec(2, 1)
    T = TensorField11.from_json([["1", "2"], ["3", "4"]])
    assert class_of(compose_derivation(berezin_generator(chart), lift_tensor(T))).coefficient == 5


def test_class_of_is_constant_on_cosets():
    rng = random.Random(12)
    for chart in CHARTS[:3]:
        box = berezin_generator(chart)
        n_k = nu(chart)
        for _ in range(5):
            m = suites.random_homogeneous(rng, chart, 1, slots=chart.k)
            if not m:
                continue
            base = right_action(m, box)
            gamma = _random_op(rng, chart)
            tab = table(chart)
            gamma = DiffOperator(chart, {k: v for k, v in gamma.terms.items()
                                         if sum(e for g, e in k[0] if tab.is_top_form(g)) == n_k - 1})
            assert class_of(base + w(gamma)).coefficient == m
            if gamma:
                assert class_of(w(gamma)).coefficient == 0


def test_class_of_rejects_open_operators():
    with pytest.raises(NotClosedError):
        class_of(_op(K1, "d[2]x1"))
    with pytest.raises(DegreeError):
        class_of(_op(K1, "x1"))


def test_chi_realize_examples():
    assert chi_realize(IteratedForm(K1, {(): 1})) == berezin_generator(K1)
    Z = dual(K1, (1,), 1)
    nabla = chi_realize(Z)
    assert not w(nabla)
    assert polyvector_of(nabla, 1) == Z


def test_chi_realize_round_trip_random():
    rng = random.Random(1)
    for chart in CHARTS[:3]:
        for s in (0, 1, 2):
            Z = suites.random_polyvector(rng, chart, s)
            assert polyvector_of(chi_realize(Z), s) == Z


def test_window_k1_n1():
    rep = cohomology_window(WindowSpec(n=1, k=1, r_max=2, coeff_degree=2))
    assert rep.dims[0] == 0 and rep.dims[1] > 0
    assert rep.extra["generator_matches_berezinian"] and rep.extra["free_rank_one"]


def test_degenerate_window_has_no_kernel():
    rep = cohomology_window(WindowSpec(n=1, k=1, r_max=0, coeff_degree=0, s_max=0))
    assert rep.dims == [0]
    # direct enumeration: order-zero operators a -> c a at s = 0 are never w-closed
    x, dx = coord(K1, 1), gen(K1, (1,), 1)
    for c in (const(K1, 1), x, dx, x * dx):
        assert w(DiffOperator.multiplication(c))


def test_explicit_block_must_fit():
    with pytest.raises(WindowError):
        cohomology_window(WindowSpec(n=1, k=1, r_max=0, coeff_degree=1, blocks=((1, -1),)))
