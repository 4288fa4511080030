"""Randomised and exhaustive identity checks, shared by the CLI and the test-suite.

Each suite returns a SuiteResult with the number of cases it checked and the
first failures it saw.  Randomness comes from one `random.Random(seed)`.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import diffops, grading, integral, textio
from .calculus import TensorField11, apply, dual_basis, evaluate, interior, pair
from .forms import IteratedForm, Poly, Polyvector, as_polyvector, const, coord, d, dual, gen
from .grading import ChartSpec


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.cases > 0 and not self.failures

    def fail(self, msg: str):
        if len(self.failures) < 5:
            self.failures.append(msg)
        elif self.failures[-1] != "...":
            self.failures.append("...")

    def to_json(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "cases": self.cases,
                "failures": self.failures, **self.detail}


# -- random elements ----------------------------------------------------------------------

def random_poly_form(rng: random.Random, chart: ChartSpec, max_deg: int = 2) -> IteratedForm:
    out = IteratedForm(chart)
    for _ in range(rng.randint(1, 3)):
        term = const(chart, rng.randint(-3, 3))
        for _ in range(rng.randint(0, max_deg)):
            term = term * coord(chart, rng.randint(1, chart.n))
        out = out + term
    return out


def random_homogeneous(rng: random.Random, chart: ChartSpec, max_factors: int = 3,
                       slots: int | None = None) -> IteratedForm:
    """Sum of terms sharing one list of subset masks, so all have the same multidegree."""
    slots = chart.slots if slots is None else slots
    masks = [rng.randint(1, (1 << slots) - 1) for _ in range(rng.randint(0, max_factors))]
    out = IteratedForm(chart)
    for _ in range(rng.randint(1, 3)):
        term = random_poly_form(rng, chart, 1)
        for m in masks:
            term = term * gen(chart, grading.labels_of(m), rng.randint(1, chart.n))
        out = out + term
    return out


def random_polyvector(rng: random.Random, chart: ChartSpec, s: int, max_factors: int = 2) -> Polyvector:
    out = IteratedForm(chart)
    for _ in range(rng.randint(1, 3)):
        term = random_poly_form(rng, chart, 2)
        for _ in range(rng.randint(0, max_factors)):
            term = term * gen(chart, grading.labels_of(rng.randint(1, (1 << chart.k) - 1)),
                              rng.randint(1, chart.n))
        for _ in range(s):
            term = term * dual(chart, grading.labels_of(rng.randint(0, (1 << chart.k) - 1)),
                               rng.randint(1, chart.n))
        out = out + term
    return as_polyvector(out)


def random_top_form(rng: random.Random, chart: ChartSpec, l: int) -> IteratedForm:
    """An element of Lambda^l_{k+1}: Lambda_k coefficients times l factors d_{k+1} d_L x."""
    out = IteratedForm(chart)
    top = chart.slots
    for _ in range(rng.randint(1, 2)):
        term = random_homogeneous(rng, chart, 1, slots=chart.k)
        for _ in range(l):
            labels = grading.labels_of(rng.randint(0, (1 << chart.k) - 1)) + (top,)
            term = term * gen(chart, labels, rng.randint(1, chart.n))
        out = out + term
    return out


def random_tensor(rng: random.Random, n: int, max_deg: int = 2) -> TensorField11:
    chart = ChartSpec(n, 1)
    return TensorField11([[Poly.from_form(random_poly_form(rng, chart, max_deg)) for _ in range(n)]
                          for _ in range(n)])


def random_expr(rng: random.Random, chart: ChartSpec, depth: int = 3) -> textio.Expr:
    if depth == 0 or rng.random() < 0.3:
        r = rng.random()
        name = chart.names[rng.randrange(chart.n)]
        if r < 0.25:
            return textio.Num(Fraction(rng.randint(0, 9), rng.choice((1, 1, 2, 3))))
        if r < 0.5:
            return textio.Coord(name)
        if r < 0.85:
            return textio.Gen(grading.labels_of(rng.randint(1, (1 << chart.slots) - 1)), name)
        return textio.Dual(grading.labels_of(rng.randint(0, (1 << chart.k) - 1)), name)
    r = rng.random()
    sub = lambda: random_expr(rng, chart, depth - 1)  # noqa: E731
    if r < 0.45:
        return textio.BinOp(rng.choice("+-*"), sub(), sub())
    if r < 0.55:
        return textio.Neg(sub())
    if r < 0.65:
        return textio.Pow(sub(), rng.randint(0, 3))
    if r < 0.8:
        return textio.Call("d", (rng.randint(1, chart.slots),), sub())
    if r < 0.88:
        return textio.Call("kappa", (), sub())
    if r < 0.94:
        return textio.Call("p", (rng.randint(1, chart.slots), rng.randint(0, 2)), sub())
    return textio.Call("hatd", (rng.randint(1, chart.slots),), sub())


def _charts(max_n: int, max_k: int) -> list:
    return [ChartSpec(n, k) for n in range(1, max_n + 1) for k in range(1, max_k + 1)]


def _sign_of(a: IteratedForm, b: IteratedForm) -> int:
    return grading.commutation_sign(a.degree(), b.degree())


# -- suites --------------------------------------------------------------------------------

def algebra_laws(seed: int = 0, cases: int = 500) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("algebra-laws")
    charts = _charts(3, 3)
    for i in range(cases):
        chart = charts[i % len(charts)]
        a, b, c = (random_homogeneous(rng, chart) for _ in range(3))
        res.cases += 1
        if a and b and a * b != _sign_of(a, b) * (b * a):
            res.fail(f"commutativity: {a} | {b}")
        if (a * b) * c != a * (b * c):
            res.fail(f"associativity: {a} | {b} | {c}")
        l, j = rng.randint(1, chart.slots), rng.randint(1, chart.slots)
        if d(l, d(l, a)):
            res.fail(f"d_{l}^2 != 0 on {a}")
        if d(l, d(j, a)) != d(j, d(l, a)):
            res.fail(f"d_{l} d_{j} != d_{j} d_{l} on {a}")
        if a and b and d(l, a * b) != d(l, a) * b + grading.commutation_sign(
                grading.unit_degree(l, chart.slots), a.degree()) * (a * d(l, b)):
            res.fail(f"Leibniz for d_{l}: {a} | {b}")
    return res


def dual_basis_law(seed: int = 0) -> SuiteResult:
    res = SuiteResult("dual-basis")
    for chart in _charts(2, 3):
        top = chart.slots
        pairs = [(grading.labels_of(m), mu) for m in range(1 << chart.k) for mu in range(1, chart.n + 1)]
        for (L, mu), (J, nu_) in itertools.product(pairs, pairs):
            expect = 1 if (L, mu) == (J, nu_) else 0
            res.cases += 1
            got = apply(dual_basis(chart, L, mu), gen(chart, J, nu_) if J else coord(chart, nu_))
            if got != expect:
                res.fail(f"d/d(d_{L}x{mu}) (d_{J}x{nu_}) = {got}")
            got = interior(dual(chart, L, mu), gen(chart, J + (top,), nu_))
            if got != expect:
                res.fail(f"i_(D_{L}x{mu}) d_{top}d_{J}x{nu_} = {got}")
    return res


def right_leibniz(seed: int = 0, cases: int = 200) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("right-leibniz")
    charts = _charts(2, 2)
    while res.cases < cases:
        chart = charts[res.cases % len(charts)]
        s = rng.randint(1, 3)
        l = rng.randint(0, min(2, s - 1))
        Z = random_polyvector(rng, chart, s)
        om = random_top_form(rng, chart, l)
        res.cases += 1
        lhs = pair(integral.hat_d_top(Z), om)
        t = integral.hat_d_top(pair(Z, om)) if Z and om else Polyvector(chart)
        rhs = pair(Z, d(chart.slots, om)) + (t if l % 2 == 0 else -t)
        if lhs != rhs:
            res.fail(f"Z={Z} omega={om}")
    return res


def hat_d_squared(seed: int = 0, cases: int = 100) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("hat-d-squared")
    charts = _charts(2, 2)
    for i in range(cases):
        chart = charts[i % len(charts)]
        s = 2 + i % 2
        Z = random_polyvector(rng, chart, s)
        res.cases += 1
        if integral.hat_d_top(integral.hat_d_top(Z)):
            res.fail(f"d-hat^2 Z != 0 for Z={Z}")
        for l in range(1, chart.k + 1):
            if integral.hat_d_lower(l, integral.hat_d_lower(l, Z)):
                res.fail(f"d-hat_{l}^2 Z != 0 for Z={Z}")
    return res


def adjoint_routes(seed: int = 0, cases: int = 50) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("adjoint-routes")
    charts = [ChartSpec(1, 1), ChartSpec(2, 1), ChartSpec(1, 2)]
    for i in range(cases):
        chart = charts[i % len(charts)]
        Z = random_polyvector(rng, chart, 1)
        res.cases += 1
        local, via_class = integral.adjoint_check_prop2(Z)
        if local != via_class:
            res.fail(f"Z={Z}: local {local} vs class {via_class}")
    return res


def trace_identity(seed: int = 0, cases: int = 100) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("trace")
    for i in range(cases):
        T = random_tensor(rng, 1 + i % 3)
        res.cases += 1
        if integral.trace(T) != T.diagonal_sum():
            res.fail(f"trace of {T.to_json()}")
    for n in (1, 2, 3):
        res.cases += 1
        if not integral.kappa_identity_check(n):
            res.fail(f"kappa identity fails at n={n}")
    return res


def berezinian_windows(seed: int = 0) -> SuiteResult:
    res = SuiteResult("berezinian-windows")
    reports = []
    for k, n in ((1, 1), (1, 2), (2, 1)):
        D = 2 if (k, n) == (1, 1) else 1
        spec = diffops.WindowSpec(n=n, k=k, r_max=D + diffops.nu(k, n), coeff_degree=D)
        rep = diffops.cohomology_window(spec)
        res.cases += 1
        nk = diffops.nu(k, n)
        extra = rep.extra
        ok = (extra["off_nu_zero"] and extra["free_rank_one"] and extra["generator_matches_berezinian"]
              and rep.dims[nk] == extra["blocks_at_nu"])
        reports.append({"k": k, "n": n, "r_max": spec.r_max, "coeff_degree": D, "dims": rep.dims,
                        "blocks": extra["blocks"], "rank_one_blocks_at_nu": extra["blocks_at_nu"]})
        if not ok:
            res.fail(f"window k={k} n={n}: {rep.to_json()}")
    res.detail["windows"] = reports
    return res


def integral_homology(seed: int = 0) -> SuiteResult:
    res = SuiteResult("integral-homology")
    tables = []
    for k, n, deg in ((1, 1, 3), (1, 2, 2), (2, 1, 2)):
        rep = integral.homology(ChartSpec(n, k), deg)
        res.cases += 1
        tables.append({"k": k, "n": n, "deg": deg, "dims": rep.dims})
        if not rep.extra["matches"]:
            res.fail(f"k={k} n={n} deg={deg}: {rep.dims} vs {rep.extra['expected']}")
    res.detail["tables"] = tables
    return res


def _lower_adjoint_holds(l: int, Z: Polyvector, args: list) -> bool:
    chart = Z.chart
    el = grading.unit_degree(l, chart.slots)
    lhs = evaluate(integral.hat_d_lower(l, Z), args)
    rhs = -d(l, evaluate(Z, args))
    acc = Z.degree()
    for i, a in enumerate(args):
        t = evaluate(Z, args[:i] + [d(l, a)] + args[i + 1:])
        rhs = rhs + (-t if grading.dot(el, acc) & 1 else t)
        acc = grading.add(acc, a.degree())
    return lhs == rhs


def lower_adjoint(seed: int = 0) -> SuiteResult:
    res = SuiteResult("lower-adjoint")
    for chart in _charts(2, 2):
        k, n = chart.k, chart.n
        gens = [gen(chart, grading.labels_of(m), mu) if m else coord(chart, mu)
                for m in range(1 << k) for mu in range(1, n + 1)]
        args_pool = gens + [coord(chart, 1) * coord(chart, n)]
        duals = [dual(chart, grading.labels_of(m), mu) for m in range(1 << k) for mu in range(1, n + 1)]
        for s in (1, 2):
            for c in [const(chart, 1)] + gens:
                for ds in itertools.combinations_with_replacement(duals, s):
                    Z = c
                    for t in ds:
                        Z = Z * t
                    if not Z:
                        continue
                    Z = as_polyvector(Z)
                    for l in range(1, k + 1):
                        for args in itertools.product(args_pool, repeat=s):
                            res.cases += 1
                            if not _lower_adjoint_holds(l, Z, list(args)):
                                res.fail(f"l={l} Z={Z} args={[str(a) for a in args]}")
    chart = ChartSpec(1, 1)
    res.cases += 1
    spot = integral.hat_d_lower(1, dual(chart, (1,), 1))
    if spot != -dual(chart, (), 1):
        res.fail(f"d-hat_1(D[1]x1) = {spot}, expected -D[]x1")
    res.detail["spot"] = str(spot)
    return res


def parse_roundtrip(seed: int = 0, cases: int = 1000) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("parse-roundtrip")
    charts = _charts(2, 2)
    for i in range(cases):
        chart = charts[i % len(charts)]
        e = random_expr(rng, chart)
        text = textio.to_text(e)
        res.cases += 1
        try:
            e2 = textio.parse(text, chart)
        except Exception as exc:  # report, do not abort the corpus
            res.fail(f"{text!r}: {exc}")
            continue
        if e2 != e or textio.to_text(e2) != text:
            res.fail(f"{text!r} reprinted as {textio.to_text(e2)!r}")
    return res


SUITES = {
    "algebra-laws": algebra_laws,
    "dual-basis": dual_basis_law,
    "right-leibniz": right_leibniz,
    "hat-d-squared": hat_d_squared,
    "adjoint-routes": adjoint_routes,
    "trace": trace_identity,
    "berezinian-windows": berezinian_windows,
    "integral-homology": integral_homology,
    "lower-adjoint": lower_adjoint,
    "parse-roundtrip": parse_roundtrip,
}


def run(name: str, seed: int = 0) -> list:
    if name == "all":
        return [fn(seed=seed) for fn in SUITES.values()]
    if name not in SUITES:
        from .errors import UsageError

        raise UsageError(f"unknown suite {name!r}; choose from all, {', '.join(SUITES)}")
    return [SUITES[name](seed=seed)]
