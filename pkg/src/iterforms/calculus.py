"""Derivations, polyvectors and interior products over Lambda_k.

A polyvector is an element of the graded commutative algebra generated over
Lambda_k by the dual symbols D_L x^mu (L a subset of {1..k}).  D_L x^mu acts
on Lambda_{k+1} as the interior product i_D = d/d(d_{k+1} d_L x^mu), and a
product of dual symbols acts by composition in the written order:
i_{c X_1 ... X_s} = c * i_{X_1} o ... o i_{X_s}.  Multidegrees of D_L x^mu
are -1_L - e_{k+1}; with that choice the wedge signs are plain Koszul signs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Callable, Mapping, Sequence

from . import grading
from .errors import ChartMismatchError, DegreeError, UsageError
from .forms import (IteratedForm, Poly, Polyvector, add_into, derive,
                    key_degree, mul_keys, partial_key, table)
from .grading import ChartSpec


@dataclass
class Derivation:
    """Derivation of Lambda_k given by its values on the generators.

    `values` maps generator ids of Lambda_k (coordinates included) to
    elements of Lambda_k; missing generators map to zero.
    """

    chart: ChartSpec
    degree: tuple
    values: dict

    def __call__(self, a: IteratedForm) -> IteratedForm:
        return apply(self, a)

    def to_polyvector(self) -> Polyvector:
        tab = table(self.chart)
        out: dict = {}
        for g, v in self.values.items():
            _, mask, mu = tab.split(g)
            add_into(out, _mul_right(v, ((tab.dual(mask, mu), 1),)))
        return Polyvector._raw(self.chart, out)


def dual_basis(chart: ChartSpec, labels: Sequence[int], mu: int) -> Derivation:
    """The derivation d/d(d_L x^mu) of Lambda_k."""
    tab = table(chart)
    mask = grading.mask_of(labels, chart.k)
    g = tab.form(mask, mu - 1)
    deg = tuple(-a for a in grading.mask_degree(mask, chart.slots))
    return Derivation(chart, deg, {g: IteratedForm(chart, {(): 1})})


def derivation_of(Z: Polyvector) -> Derivation:
    """Read a degree-1 polyvector as the derivation a -> i_Z(d_{k+1} a)."""
    tab = Z.table
    values: dict = {}
    for key, c in Z.terms.items():
        coeff, duals = split_key(tab, key)
        if len(duals) != 1 or duals[0][1] != 1:
            raise DegreeError("derivation_of needs a polyvector of degree 1")
        _, mask, mu = tab.split(duals[0][0])
        g = tab.form(mask, mu)
        values.setdefault(g, {})
        add_into(values[g], {coeff: c})
    degs = {key_degree(tab, k)[:-1] + (0,) for k in Z.terms}
    degree = degs.pop() if len(degs) == 1 else None
    return Derivation(Z.chart, degree,
                      {g: IteratedForm._raw(Z.chart, t) for g, t in values.items() if t})


def apply(X: Derivation, a: IteratedForm) -> IteratedForm:
    if X.chart != a.chart:
        raise ChartMismatchError("derivation and form live on different charts")
    tab = a.table
    for key in a.terms:
        for g, _ in key:
            if not tab.is_lower_form(g):
                raise DegreeError("derivations of Lambda_k act on Lambda_k only")
    return IteratedForm._raw(a.chart, derive(a, X.values.get))


def wedge(X: IteratedForm, Y: IteratedForm) -> Polyvector:
    out = X * Y
    return Polyvector._raw(out.chart, out.terms)


# -- interior products ---------------------------------------------------------

def split_key(tab, key: tuple):
    """Split a polyvector monomial into its coefficient part and dual part."""
    coeff = tuple(p for p in key if p[0] < tab.nform)
    duals = tuple(p for p in key if p[0] >= tab.nform)
    return coeff, duals


def top_generator(tab, dual_id: int) -> int:
    """d_{k+1} d_L x^mu paired with the dual symbol D_L x^mu."""
    _, mask, mu = tab.split(dual_id)
    return tab.form(mask | tab.top_bit, mu)


def _mul_right(a: IteratedForm, key: tuple, coeff=1) -> dict:
    tab = a.table
    out: dict = {}
    for ka, ca in a.terms.items():
        sign, k2 = mul_keys(tab, ka, key)
        if sign:
            out[k2] = out.get(k2, 0) + (ca * coeff if sign > 0 else -ca * coeff)
    return out


def _contract(tab, duals: tuple, terms: dict) -> dict:
    for g, e in reversed(duals):
        G = top_generator(tab, g)
        for _ in range(e):
            nxt: dict = {}
            for key, c in terms.items():
                pk = partial_key(tab, G, key)
                if pk is not None:
                    m, rest = pk
                    v = nxt.get(rest, 0) + c * m
                    if v:
                        nxt[rest] = v
                    else:
                        del nxt[rest]
            terms = nxt
            if not terms:
                return terms
    return terms


def interior(Z: IteratedForm, omega: IteratedForm) -> IteratedForm:
    """i_Z(omega) for a polyvector Z and omega in Lambda_{k+1}."""
    if Z.chart != omega.chart:
        raise ChartMismatchError("polyvector and form live on different charts")
    tab = Z.table
    top = Z.chart.slots
    if Z.terms and omega.terms:
        s_min = min(len_duals(tab, k) for k in Z.terms)
        m_max = max(key_degree(tab, k)[top - 1] for k in omega.terms)
        if m_max == 0 and s_min > 0:
            return IteratedForm(Z.chart)
        if m_max < s_min:
            raise DegreeError(f"cannot contract a degree-{s_min} polyvector into a "
                              f"form of degree {m_max} in d_{top}")
    out: dict = {}
    for key, c in Z.terms.items():
        coeff, duals = split_key(tab, key)
        contracted = _contract(tab, duals, omega.terms)
        for k2, c2 in contracted.items():
            sign, k3 = mul_keys(tab, coeff, k2)
            if sign:
                v = out.get(k3, 0) + (c * c2 if sign > 0 else -c * c2)
                if v:
                    out[k3] = v
                else:
                    del out[k3]
    return IteratedForm._raw(Z.chart, out)


def len_duals(tab, key) -> int:
    return sum(e for g, e in key if g >= tab.nform)


def evaluate(Z: IteratedForm, args: Sequence[IteratedForm]) -> IteratedForm:
    """Z(a_1, ..., a_s) = i_Z(d_{k+1} a_1 ... d_{k+1} a_s)."""
    from .forms import d

    top = Z.chart.slots
    omega = IteratedForm(Z.chart, {(): 1})
    for a in args:
        omega = omega * d(top, a)
    return interior(Z, omega)


# -- bases of Lambda^s_{k+1} over Lambda_k ----------------------------------------

@lru_cache(maxsize=None)
def top_basis(chart: ChartSpec, s: int) -> tuple:
    """Monomials in the d_{k+1} d_L x^mu of total degree s (canonical keys)."""
    tab = table(chart)
    gens = [tab.form(mask | tab.top_bit, mu) for mask in range(1 << chart.k) for mu in range(chart.n)]
    gens.sort()
    out = []
    for combo in combinations_with_replacement(gens, s):
        key: dict = {}
        for g in combo:
            key[g] = key.get(g, 0) + 1
        if any(e > 1 and tab.odd[g] for g, e in key.items()):
            continue
        out.append(tuple(sorted(key.items())))
    return tuple(out)


@lru_cache(maxsize=None)
def _dual_of_basis(chart: ChartSpec, key: tuple):
    """(dual key, normalisation N) with i_{dual}(basis) = N."""
    tab = table(chart)
    dkey = tuple((tab.dual(tab.split(g)[1] & ~tab.top_bit, tab.split(g)[2]), e) for g, e in key)
    val = _contract(tab, dkey, {key: Fraction(1)})
    norm = val.get((), 0)
    if not norm:
        raise AssertionError("dual basis pairing vanished")
    return dkey, norm


def reconstruct(chart: ChartSpec, s: int, values: Callable[[IteratedForm], IteratedForm]) -> Polyvector:
    """The polyvector Z of degree s with i_Z(Omega) = values(Omega) on the basis."""
    out: dict = {}
    for key in top_basis(chart, s):
        v = values(IteratedForm._raw(chart, {key: Fraction(1)}))
        if not v:
            continue
        dkey, norm = _dual_of_basis(chart, key)
        add_into(out, _mul_right(v, dkey, 1 / Fraction(norm)))
    return Polyvector._raw(chart, out)


def s_components(Z: IteratedForm) -> dict:
    tab = Z.table
    out: dict = {}
    for key, c in Z.terms.items():
        out.setdefault(len_duals(tab, key), {})[key] = c
    return {s: Polyvector._raw(Z.chart, t) for s, t in out.items()}


def pair(Z: IteratedForm, omega: IteratedForm) -> Polyvector:
    """The polyvector Y of degree s - l with i_Y(eta) = i_Z(omega eta)."""
    if Z.chart != omega.chart:
        raise ChartMismatchError("polyvector and form live on different charts")
    chart = Z.chart
    tab = Z.table
    top = chart.slots
    if not omega.terms or not Z.terms:
        return Polyvector(chart)
    ls = {key_degree(tab, k)[top - 1] for k in omega.terms}
    out = Polyvector(chart)
    for s, Zs in s_components(Z).items():
        for l in ls:
            if l > s:
                raise DegreeError(f"cannot pair a degree-{s} polyvector with a {l}-form")
            om = IteratedForm._raw(chart, {k: c for k, c in omega.terms.items()
                                           if key_degree(tab, k)[top - 1] == l})
            out = out + reconstruct(chart, s - l, lambda eta, Zs=Zs, om=om: interior(Zs, om * eta))
    return Polyvector._raw(chart, out.terms)


# -- (1,1)-tensors -------------------------------------------------------------------

@dataclass
class TensorField11:
    """n x n matrix of polynomials; x^nu -> sum_mu T[nu][mu] d_1 x^mu."""

    entries: list

    @property
    def n(self) -> int:
        return len(self.entries)

    def __post_init__(self):
        n = len(self.entries)
        if n == 0 or any(len(row) != n for row in self.entries):
            raise UsageError("tensor must be a nonempty square matrix")

    def diagonal_sum(self) -> Poly:
        out = Poly(self.n)
        for i in range(self.n):
            out = out + self.entries[i][i]
        return out

    @classmethod
    def from_json(cls, data) -> "TensorField11":
        from .textio import parse_element

        rows = data["entries"] if isinstance(data, Mapping) else data
        n = len(rows)
        chart = ChartSpec(n, 1)
        return cls([[Poly.from_form(parse_element(str(v), chart)) for v in row] for row in rows])

    def to_json(self) -> dict:
        return {"n": self.n, "entries": [[str(v) for v in row] for row in self.entries]}


def lift_tensor(T: TensorField11, chart: ChartSpec | None = None) -> Derivation:
    """The degree-0 derivation i_X of Lambda_1 induced by a (1,1)-tensor."""
    chart = chart or ChartSpec(T.n, 1)
    if chart.k != 1:
        raise UsageError("lift_tensor needs a chart with k = 1")
    if chart.n != T.n:
        raise ChartMismatchError("tensor size differs from chart dimension")
    tab = table(chart)
    values = {}
    for nu in range(T.n):
        img = IteratedForm(chart)
        for mu in range(T.n):
            entry = T.entries[nu][mu]
            if entry.terms:
                img = img + entry.to_form(chart) * IteratedForm._raw(
                    chart, {((tab.form(1, mu), 1),): Fraction(1)})
        if img:
            values[tab.form(1, nu)] = img
    return Derivation(chart, (0, 0), values)
