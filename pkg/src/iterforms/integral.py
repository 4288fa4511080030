"""Integral forms over Lambda_k: the adjoint differentials, the trace and homology.

Integral s-forms are represented by s-polyvectors (see `calculus`).  The
adjoint of d_{k+1} is given on 1-forms by a local formula and extended to
higher degrees through the right Leibniz rule against the basis forms
d_{k+1} d_L x^mu, whose d_{k+1} vanishes.  The adjoints of the lower
differentials d_l come from the derivation of the polyvector algebra that
extends d_l by D_L x^mu -> D_{L-l} x^mu.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from . import exactla, grading
from .calculus import (TensorField11, derivation_of, lift_tensor, pair, reconstruct,
                       s_components, split_key)
from .diffops import berezin_generator, class_of, compose_derivation, nu
from .errors import DegreeError, SlotError, UsageError
from .forms import (DUAL, FORM, IteratedForm, Poly, Polyvector, add_into, as_polyvector, d,
                    derive, format_element, kappa, key_degree, partial_key, project, table)
from .grading import ChartSpec
from .limits import LIMITS, check
from .reports import BerezinSection, HomologyReport

__all__ = ["nu", "berezin_generator", "hat_d_top", "hat_d_lower", "hat_d", "adjoint_check_prop2",
           "trace", "kappa_identity_check", "homology", "de_rham_table"]


def _degree(Z: IteratedForm) -> int:
    comps = s_components(Z)
    if not comps:
        return -1
    if len(comps) > 1:
        raise DegreeError(f"polyvector mixes degrees {sorted(comps)}")
    return next(iter(comps))


def _hat_d_one(Z: IteratedForm) -> IteratedForm:
    """Local formula on integral 1-forms."""
    tab = table(Z.chart)
    out: dict = {}
    for key, c in Z.terms.items():
        coeff, duals = split_key(tab, key)
        (gd, e), = duals
        _, mask, mu = tab.split(gd)
        g = tab.form(mask, mu)
        pk = partial_key(tab, g, coeff)
        if pk is None:
            continue
        m, rest = pk
        eL = grading.mask_degree(mask, Z.chart.slots)
        deg = key_degree(tab, key)
        sign = -1 if grading.dot(eL, grading.add(eL, deg)) & 1 else 1
        add_into(out, {rest: -sign * m * c})
    return IteratedForm._raw(Z.chart, out)


def hat_d_top(Z: IteratedForm) -> Polyvector:
    """d-hat_{k+1}: integral s-forms to integral (s-1)-forms."""
    chart = Z.chart
    out = Polyvector(chart)
    comps = s_components(Z)
    if 0 in comps:
        raise DegreeError("d-hat_{k+1} is defined on integral forms of degree s >= 1")
    for s, Zs in comps.items():
        if s == 1:
            out = out + as_polyvector(_hat_d_one(Zs))
            continue
        sign = -1 if (s - 1) & 1 else 1

        def value(omega, Zs=Zs):
            v = _hat_d_one(pair(Zs, omega))
            return v if sign > 0 else -v

        out = out + reconstruct(chart, s - 1, value)
    return as_polyvector(out)


def hat_d_lower(l: int, Z: IteratedForm) -> Polyvector:
    """d-hat_l for 1 <= l <= k, degree preserving."""
    chart = Z.chart
    if not isinstance(l, int) or not 1 <= l <= chart.k:
        raise SlotError(f"d-hat_l needs 1 <= l <= k = {chart.k}, got {l!r}")
    tab = table(chart)
    bit = 1 << (l - 1)

    def value(g):
        kind, mask, mu = tab.split(g)
        if kind == FORM:
            if mask & bit:
                return None
            return IteratedForm._raw(chart, {((tab.form(mask | bit, mu), 1),): Fraction(1)})
        if kind == DUAL and mask & bit:
            # sign making D_L x^mu dual to d_l d_{L-l} x^mu
            lower = tab.form(mask & ~bit, mu)
            img = d(l, IteratedForm._raw(chart, {((lower, 1),): Fraction(1)}))
            eps = next(iter(img.terms.values()))
            return Polyvector._raw(chart, {((tab.dual(mask & ~bit, mu), 1),): eps})
        return None

    return Polyvector._raw(chart, {k: -v for k, v in derive(Z, value).items()})


def hat_d(l: int, Z: IteratedForm) -> Polyvector:
    if not isinstance(l, int) or not 1 <= l <= Z.chart.slots:
        raise SlotError(f"slot {l!r} outside 1..{Z.chart.slots}")
    return hat_d_top(Z) if l == Z.chart.slots else hat_d_lower(l, Z)


def adjoint_check_prop2(Z: IteratedForm) -> tuple:
    """(local formula result, class of box o Z) for an integral 1-form Z."""
    chart = Z.chart
    if not Z.terms:
        zero = BerezinSection(IteratedForm(chart))
        return zero, zero
    if _degree(Z) != 1:
        raise DegreeError("the two-route check needs an integral 1-form")
    local = BerezinSection(IteratedForm._raw(chart, dict(hat_d_top(Z).terms)))
    box = berezin_generator(chart)
    total = IteratedForm(chart)
    tab = table(chart)
    # split by operator degree of the homogeneous pieces
    pieces: dict = {}
    for key, c in Z.terms.items():
        deg = key_degree(tab, key)[:-1]
        pieces.setdefault(deg, {})[key] = c
    for deg, terms in pieces.items():
        Xd = derivation_of(Polyvector._raw(chart, terms))
        cls = class_of(compose_derivation(box, Xd)).coefficient
        if grading.dot(box.degree()[:-1], deg) & 1:
            cls = -cls
        total = total + cls
    return local, BerezinSection(total)


def trace(T: TensorField11) -> Poly:
    """tr T computed as the coefficient of d-hat_2(i_X) along zeta_1."""
    chart = ChartSpec(T.n, 1)
    Z = lift_tensor(T, chart).to_polyvector()
    return Poly.from_form(hat_d_top(Z))


# -- kappa identity --------------------------------------------------------------------

def _lambda1_monomials(chart: ChartSpec, max_xdeg: int) -> list:
    from itertools import combinations, product

    tab = table(chart)
    n = chart.n
    out = []
    for xs in product(range(max_xdeg + 1), repeat=n):
        if sum(xs) > max_xdeg:
            continue
        for r in range(n + 1):
            for idx in combinations(range(n), r):
                key = [(tab.form(0, mu), e) for mu, e in enumerate(xs) if e]
                key += [(tab.form(1, mu), 1) for mu in idx]
                out.append(tuple(sorted(key)))
    return out


def kappa_identity_check(n: int, max_xdeg: int = 2) -> bool:
    """box(a) = (-1)^{n(n-1)/2} kappa(p_n(a)) for all spanning monomials a of Lambda_1."""
    from .diffops import apply_op

    chart = ChartSpec(n, 1)
    check("n for the kappa identity", n, 6)
    box = berezin_generator(chart)
    sign = -1 if (n * (n - 1) // 2) & 1 else 1
    for key in _lambda1_monomials(chart, max_xdeg):
        a = IteratedForm._raw(chart, {key: Fraction(1)})
        lhs = apply_op(box, a)
        rhs = kappa(project(a, n, 1))
        if lhs != (rhs if sign > 0 else -rhs):
            return False
    return True


# -- homology of the integral complex ------------------------------------------------------

def _content(tab, key) -> tuple:
    """C_g = exp(g) - exp(D g) per generator g of Lambda_k; preserved by d-hat."""
    ex = dict(key)
    return tuple(ex.get(tab.form(m, mu), 0) - ex.get(tab.dual(m, mu), 0)
                 for m in range(1 << tab.k) for mu in range(tab.n))


def _content_block(chart: ChartSpec, C: tuple) -> list:
    tab = table(chart)
    opts = []
    for (m, mu), c in zip(((m, mu) for m in range(1 << chart.k) for mu in range(chart.n)), C):
        g, th = tab.form(m, mu), tab.dual(m, mu)
        choices = []
        if tab.odd[g]:
            for a in (0, 1):
                b = a - c
                if b >= 0:
                    choices.append((a, b))
        else:
            for b in (0, 1):
                a = c + b
                if a >= 0:
                    choices.append((a, b))
        opts.append((g, th, choices))
    keys = [((), 0)]
    for g, th, choices in opts:
        nxt = []
        for key, _ in keys:
            for a, b in choices:
                part = list(key)
                if a:
                    part.append((g, a))
                if b:
                    part.append((th, b))
                nxt.append((tuple(part), 0))
        keys = nxt
    return [tuple(sorted(k)) for k, _ in keys]


def _form_weight(tab, key) -> int:
    return sum(e for g, e in key if g < tab.nform)


def _homology_blocks(chart: ChartSpec, deg: int, s_max: int):
    """Whole content blocks whose elements have form weight <= deg and degree <= s_max."""
    from itertools import product

    tab = table(chart)
    ranges = []
    for m in range(1 << chart.k):
        for mu in range(chart.n):
            g = tab.form(m, mu)
            ranges.append(range(-s_max, 2) if tab.odd[g] else range(-1, deg + 1))
    total = 1
    for r in ranges:
        total *= len(r)
    check("homology content blocks", total, LIMITS.max_block_candidates)
    for C in product(*ranges):
        keys = _content_block(chart, C)
        if not keys:
            continue
        if max(_form_weight(tab, k) for k in keys) > deg:
            continue
        if max(sum(e for g, e in k if g >= tab.nform) for k in keys) > s_max:
            continue
        yield C, keys


def homology(chart: ChartSpec, deg: int, s_max: int | None = None) -> HomologyReport:
    """dim H_i(d-hat_{k+1}) over content blocks with form weight <= deg."""
    if deg < 0:
        raise UsageError("truncation degree must be nonnegative")
    tab = table(chart)
    n_k = nu(chart)
    s_max = n_k + 1 if s_max is None else s_max
    dims = [0] * (s_max + 1)
    witnesses = []
    sizes = 0
    for C, keys in _homology_blocks(chart, deg, s_max):
        by_s: dict = {}
        for key in keys:
            by_s.setdefault(sum(e for g, e in key if g >= tab.nform), []).append(key)
        sizes += len(keys)
        check("homology basis size", sizes, LIMITS.max_basis)
        ranks = {}
        for s in range(1, s_max + 1):
            src, dst = by_s.get(s, []), by_s.get(s - 1, [])
            if not src or not dst:
                ranks[s] = 0
                continue
            index = {k: i for i, k in enumerate(dst)}
            cols = []
            for key in src:
                img = hat_d_top(Polyvector._raw(chart, {key: Fraction(1)}))
                col = {}
                for k2, v in img.terms.items():
                    if k2 not in index:
                        raise AssertionError("d-hat left its content block")
                    col[index[k2]] = v
                cols.append(col)
            ranks[s] = exactla.rank(exactla.SparseMatrixQ.from_columns(len(dst), cols))
        for s in range(s_max + 1):
            h = len(by_s.get(s, [])) - ranks.get(s, 0) - ranks.get(s + 1, 0)
            if h < 0:
                raise AssertionError("negative homology dimension")
            if h:
                dims[s] += h
                if h == 1 and len(by_s[s]) == 1:
                    witnesses.append(format_element(Polyvector._raw(chart, {by_s[s][0]: Fraction(1)})))
    params = {"n": chart.n, "k": chart.k, "deg": deg, "s_max": s_max, "nu": n_k}
    comparator = de_rham_table(chart.n, deg)
    expected = [comparator[n_k - i] if 0 <= n_k - i < len(comparator) else 0 for i in range(s_max + 1)]
    return HomologyReport(params, dims, witnesses,
                          {"de_rham": comparator, "expected": expected, "matches": dims == expected})


@lru_cache(maxsize=None)
def de_rham_table(n: int, deg: int) -> list:
    """dim H^j(Lambda_1, d_1) with polynomial coefficients, blocks of weight <= deg.

    d_1 preserves x-degree + form degree, so each weight is a finite subcomplex.
    """
    chart = ChartSpec(n, 1)
    dims = [0] * (n + 1)
    for weight in range(deg + 1):
        by_j: dict = {}
        for key in _lambda1_monomials(chart, weight):
            w_ = sum(e for _, e in key)
            if w_ == weight:
                by_j.setdefault(sum(e for g, e in key if g >= n), []).append(key)
        ranks = {}
        for j in range(n):
            src, dst = by_j.get(j, []), by_j.get(j + 1, [])
            if not src or not dst:
                ranks[j] = 0
                continue
            index = {k: i for i, k in enumerate(dst)}
            cols = [{index[k]: v for k, v in d(1, IteratedForm._raw(chart, {key: Fraction(1)})).terms.items()}
                    for key in src]
            ranks[j] = exactla.rank(exactla.SparseMatrixQ.from_columns(len(dst), cols))
        for j in range(n + 1):
            dims[j] += len(by_j.get(j, [])) - ranks.get(j, 0) - ranks.get(j - 1, 0)
    return dims
