"""The graded commutative algebra of iterated differential forms.

One chart (n coordinates, depth k) fixes a free graded commutative algebra
over Q generated by

* form generators ``d_L x^mu`` with L a subset of {1..k+1} (L empty is the
  coordinate x^mu itself), of multidegree 1_L;
* dual generators ``D_L x^mu`` standing for the dual-basis derivations
  d/d(d_L x^mu), L a subset of {1..k}, of multidegree -1_L - e_{k+1}.  They
  only occur inside polyvectors (see `calculus`).

Elements are sparse dicts from canonical monomial keys to Fractions.  A key
is a tuple of ``(generator_id, exponent)`` pairs sorted by generator id; ids
are laid out so that numeric order is (kind, mask(L), mu).  Odd generators
(those whose degree has odd square) carry exponent 1.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from . import grading
from .errors import ChartMismatchError, DegreeError, SlotError, UsageError
from .grading import ChartSpec

FORM, DUAL, OP = 0, 1, 2


class GeneratorTable:
    """Id layout and parity data of all generators of a chart."""

    def __init__(self, chart: ChartSpec):
        n, k = chart.n, chart.k
        self.chart = chart
        self.n = n
        self.k = k
        self.slots = k + 1
        self.top_bit = 1 << k
        self.nform = (1 << (k + 1)) * n
        self.ndual = (1 << k) * n
        self.dual_base = self.nform
        self.op_base = self.nform + self.ndual
        self.size = self.op_base + self.ndual
        # parity mask: dot(deg g, deg h) is odd iff popcount(pm[g] & pm[h]) is odd
        pm = []
        for g in range(self.size):
            kind, mask, _ = self.split(g)
            pm.append(mask | self.top_bit if kind == DUAL else mask)
        self.pm = pm
        self.odd = [m.bit_count() & 1 for m in pm]

    def split(self, g: int) -> tuple:
        """(kind, mask, mu) of a generator id; mu is 0-based."""
        if g < self.nform:
            return FORM, g // self.n, g % self.n
        if g < self.op_base:
            g -= self.dual_base
            return DUAL, g // self.n, g % self.n
        g -= self.op_base
        return OP, g // self.n, g % self.n

    def form(self, mask: int, mu: int) -> int:
        return mask * self.n + mu

    def dual(self, mask: int, mu: int) -> int:
        return self.dual_base + mask * self.n + mu

    def op(self, mask: int, mu: int) -> int:
        return self.op_base + mask * self.n + mu

    def degree(self, g: int) -> tuple:
        kind, mask, _ = self.split(g)
        deg = grading.mask_degree(mask, self.slots)
        if kind == FORM:
            return deg
        if kind == DUAL:
            return tuple(-a for a in deg[:-1]) + (-1,)
        return tuple(-a for a in deg)

    def is_lower_form(self, g: int) -> bool:
        """Generator of Lambda_k: a form generator without slot k+1."""
        return g < self.nform and not (g // self.n) & self.top_bit

    def is_top_form(self, g: int) -> bool:
        """Generator d_{k+1} d_L x^mu of Lambda^1_{k+1} over Lambda_k."""
        return g < self.nform and bool((g // self.n) & self.top_bit)


@lru_cache(maxsize=None)
def table(chart: ChartSpec) -> GeneratorTable:
    return GeneratorTable(chart)


# -- monomial keys -----------------------------------------------------------

def mul_keys(tab: GeneratorTable, a: tuple, b: tuple):
    """Product of two canonical monomials: returns (sign, key), sign 0 if zero."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    pm = tab.pm
    s = 0
    for h, eh in b:
        if not eh & 1:
            continue
        ph = pm[h]
        for g, eg in reversed(a):
            if g <= h:
                break
            if eg & 1:
                s ^= (pm[g] & ph).bit_count() & 1
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    odd = tab.odd
    while i < la and j < lb:
        ga, gb = a[i][0], b[j][0]
        if ga < gb:
            out.append(a[i])
            i += 1
        elif gb < ga:
            out.append(b[j])
            j += 1
        else:
            if odd[ga]:
                return 0, None
            out.append((ga, a[i][1] + b[j][1]))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return (-1 if s else 1), tuple(out)


def partial_key(tab: GeneratorTable, g: int, key: tuple):
    """Left derivative d/dg of a monomial: (coefficient, key) or None."""
    pm_g = tab.pm[g]
    s = 0
    for idx, (h, e) in enumerate(key):
        if h == g:
            rest = key[:idx] + (((g, e - 1),) if e > 1 else ()) + key[idx + 1:]
            return (-e if s else e), rest
        if h > g:
            return None
        if e & 1:
            s ^= (pm_g & tab.pm[h]).bit_count() & 1
    return None


def key_degree(tab: GeneratorTable, key: tuple) -> tuple:
    deg = [0] * tab.slots
    for g, e in key:
        for i, a in enumerate(tab.degree(g)):
            deg[i] += e * a
    return tuple(deg)


def key_weight(tab: GeneratorTable, key: tuple, kind: int = FORM) -> int:
    """Total exponent of generators of the given kind."""
    lo, hi = {FORM: (0, tab.nform), DUAL: (tab.dual_base, tab.op_base),
              OP: (tab.op_base, tab.size)}[kind]
    return sum(e for g, e in key if lo <= g < hi)


def sort_key(key: tuple):
    return (sum(e for _, e in key), key)


# -- elements ----------------------------------------------------------------

class IteratedForm:
    """Sparse element of the iterated-forms algebra of one chart."""

    __slots__ = ("chart", "terms")

    def __init__(self, chart: ChartSpec, terms: Mapping | None = None):
        self.chart = chart
        self.terms = {}
        if terms:
            for key, c in terms.items():
                if c:
                    self.terms[key] = Fraction(c)

    # construction helpers
    @classmethod
    def _raw(cls, chart, terms):
        obj = cls.__new__(cls)
        obj.chart = chart
        obj.terms = terms
        return obj

    @property
    def table(self) -> GeneratorTable:
        return table(self.chart)

    def _check(self, other):
        if other.chart != self.chart:
            raise ChartMismatchError(f"chart mismatch: {self.chart.to_json()} vs {other.chart.to_json()}")

    def _result_type(self, other):
        if isinstance(self, Polyvector) or isinstance(other, Polyvector):
            return Polyvector
        return IteratedForm

    def _coerce(self, other):
        if isinstance(other, IteratedForm):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return IteratedForm(self.chart, {(): other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for key, c in other.terms.items():
            v = terms.get(key, 0) + c
            if v:
                terms[key] = v
            else:
                terms.pop(key, None)
        return self._result_type(other)._raw(self.chart, terms)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.chart, {key: -c for key, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return type(self)._raw(self.chart, {})
            return type(self)._raw(self.chart, {key: c * other for key, c in self.terms.items()})
        if not isinstance(other, IteratedForm):
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise UsageError("exponent must be a nonnegative integer")
        out = IteratedForm(self.chart, {(): 1})
        for _ in range(e):
            out = out * self
        return type(self)._raw(self.chart, out.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.terms == ({(): Fraction(other)} if other else {})
        if not isinstance(other, IteratedForm):
            return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"{type(self).__name__}({format_element(self)!r})"

    def __str__(self):
        return format_element(self)

    def copy(self):
        return type(self)._raw(self.chart, dict(self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def components(self) -> dict:
        """Homogeneous components keyed by multidegree."""
        tab = self.table
        out: dict = {}
        for key, c in self.terms.items():
            out.setdefault(key_degree(tab, key), {})[key] = c
        return {deg: type(self)._raw(self.chart, t) for deg, t in out.items()}

    def degree(self) -> tuple:
        """Multidegree of a nonzero homogeneous element."""
        degs = {key_degree(self.table, key) for key in self.terms}
        if len(degs) != 1:
            raise DegreeError("element is zero or not homogeneous")
        return degs.pop()

    def is_homogeneous(self) -> bool:
        return len({key_degree(self.table, key) for key in self.terms}) <= 1

    def slot_degrees(self, slot: int) -> set:
        tab = self.table
        return {key_degree(tab, key)[slot - 1] for key in self.terms}

    def in_lower(self) -> bool:
        """True if the element lies in Lambda_k (no slot k+1, no dual factors)."""
        tab = self.table
        return all(tab.is_lower_form(g) for key in self.terms for g, _ in key)


class Polyvector(IteratedForm):
    """Element containing dual factors D_L x^mu: a graded skew multiderivation."""

    __slots__ = ()

    def degrees(self) -> set:
        tab = self.table
        return {key_weight(tab, key, DUAL) for key in self.terms}

    @property
    def s(self) -> int:
        """Polyvector degree (number of dual factors) of a homogeneous element."""
        degs = self.degrees()
        if len(degs) > 1:
            raise DegreeError("polyvector mixes several degrees")
        return degs.pop() if degs else 0


def as_polyvector(a: IteratedForm) -> Polyvector:
    return Polyvector._raw(a.chart, dict(a.terms))


def as_form(a: IteratedForm) -> IteratedForm:
    return IteratedForm._raw(a.chart, dict(a.terms))


def mul(a: IteratedForm, b: IteratedForm) -> IteratedForm:
    """Graded commutative product."""
    a._check(b)
    tab = a.table
    terms: dict = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            sign, key = mul_keys(tab, ka, kb)
            if sign:
                v = terms.get(key, 0) + (ca * cb if sign > 0 else -ca * cb)
                if v:
                    terms[key] = v
                else:
                    del terms[key]
    return a._result_type(b)._raw(a.chart, terms)


def mul_key_left(a: IteratedForm, key: tuple, coeff=1) -> dict:
    """Terms of a * (coeff * monomial key)."""
    tab = a.table
    out: dict = {}
    for ka, ca in a.terms.items():
        sign, k2 = mul_keys(tab, ka, key)
        if sign:
            out[k2] = out.get(k2, 0) + (ca * coeff if sign > 0 else -ca * coeff)
    return out


def add_into(acc: dict, terms: Mapping, scale=1):
    for key, c in terms.items():
        v = acc.get(key, 0) + c * scale
        if v:
            acc[key] = v
        else:
            acc.pop(key, None)


# -- constructors ------------------------------------------------------------

def const(chart: ChartSpec, c) -> IteratedForm:
    return IteratedForm(chart, {(): c})


def coord(chart: ChartSpec, mu: int) -> IteratedForm:
    """The coordinate x^mu (mu is 1-based)."""
    _check_mu(chart, mu)
    return IteratedForm._raw(chart, {((table(chart).form(0, mu - 1), 1),): Fraction(1)})


def gen(chart: ChartSpec, labels: Sequence[int], mu: int) -> IteratedForm:
    """The generator d_L x^mu, L a subset of {1..k+1}; empty L gives x^mu."""
    _check_mu(chart, mu)
    mask = grading.mask_of(labels, chart.slots)
    return IteratedForm._raw(chart, {((table(chart).form(mask, mu - 1), 1),): Fraction(1)})


def dual(chart: ChartSpec, labels: Sequence[int], mu: int) -> Polyvector:
    """The dual-basis derivation d/d(d_L x^mu), L a subset of {1..k}."""
    _check_mu(chart, mu)
    mask = grading.mask_of(labels, chart.k)
    return Polyvector._raw(chart, {((table(chart).dual(mask, mu - 1), 1),): Fraction(1)})


def _check_mu(chart, mu):
    if not isinstance(mu, int) or not 1 <= mu <= chart.n:
        raise UsageError(f"coordinate index {mu!r} outside 1..{chart.n}")


# -- derivations -------------------------------------------------------------

def derive(a: IteratedForm, value: Callable[[int], IteratedForm | None]) -> dict:
    """Apply the derivation sum_g value(g) * d/dg to a; returns raw terms.

    `value(g)` returns the image of generator g (None or zero for 0).  The
    degree bookkeeping is carried entirely by left derivatives.
    """
    tab = a.table
    out: dict = {}
    cache: dict = {}
    for key, c in a.terms.items():
        for g, _ in key:
            if g not in cache:
                cache[g] = value(g)
            v = cache[g]
            if not v:
                continue
            pk = partial_key(tab, g, key)
            if pk is None:
                continue
            e, rest = pk
            add_into(out, mul_key_left(v, rest, c * e))
    return out


def partial(a: IteratedForm, g: int) -> IteratedForm:
    """Left derivative of a with respect to generator id g."""
    tab = a.table
    out: dict = {}
    for key, c in a.terms.items():
        pk = partial_key(tab, g, key)
        if pk is not None:
            e, rest = pk
            out[rest] = out.get(rest, 0) + c * e
    return type(a)._raw(a.chart, {k: v for k, v in out.items() if v})


def d(slot: int, a: IteratedForm) -> IteratedForm:
    """Iterated de Rham differential d_slot, 1 <= slot <= k+1."""
    chart = a.chart
    if not isinstance(slot, int) or not 1 <= slot <= chart.slots:
        raise SlotError(f"slot {slot!r} outside 1..{chart.slots}")
    tab = a.table
    bit = 1 << (slot - 1)
    images: dict = {}

    def value(g):
        kind, mask, mu = tab.split(g)
        if kind != FORM:
            raise DegreeError("d_l acts on forms only; use hat_d for polyvectors")
        if mask & bit:
            return None
        if g not in images:
            images[g] = IteratedForm._raw(chart, {((tab.form(mask | bit, mu), 1),): Fraction(1)})
        return images[g]

    return IteratedForm._raw(chart, derive(a, value))


def relabel(sigma: Sequence[int], a: IteratedForm) -> IteratedForm:
    """Algebra automorphism induced by a permutation of the slots.

    ``sigma[i-1]`` is the image of slot i.
    """
    chart = a.chart
    slots = chart.slots
    sigma = list(sigma)
    if sorted(sigma) != list(range(1, slots + 1)):
        raise UsageError(f"invalid slot permutation {sigma!r} for {slots} slots")
    tab = a.table

    def image_mask(mask):
        out = 0
        for i in range(slots):
            if mask >> i & 1:
                out |= 1 << (sigma[i] - 1)
        return out

    def image(g):
        kind, mask, mu = tab.split(g)
        if kind == FORM:
            return tab.form(image_mask(mask), mu)
        if sigma[slots - 1] != slots:
            raise UsageError("relabelling polyvectors needs sigma to fix slot k+1")
        return tab.dual(image_mask(mask), mu) if kind == DUAL else tab.op(image_mask(mask), mu)

    out: dict = {}
    for key, c in a.terms.items():
        sign, acc = 1, ()
        for g, e in key:
            s, acc = mul_keys(tab, acc, ((image(g), e),))
            sign *= s
        add_into(out, {acc: c * sign})
    return type(a)._raw(chart, out)


def kappa(a: IteratedForm) -> IteratedForm:
    """The involution exchanging d_1 and d_2."""
    if a.chart.slots < 2:
        raise SlotError("kappa needs at least two slots")
    sigma = list(range(1, a.chart.slots + 1))
    sigma[0], sigma[1] = 2, 1
    return relabel(sigma, a)


def project(a: IteratedForm, s: int, slot: int) -> IteratedForm:
    """Component of slot-degree s."""
    if not 1 <= slot <= a.chart.slots:
        raise SlotError(f"slot {slot!r} outside 1..{a.chart.slots}")
    tab = a.table
    return type(a)._raw(a.chart, {key: c for key, c in a.terms.items()
                                  if key_degree(tab, key)[slot - 1] == s})


# -- polynomial coefficients ---------------------------------------------------

class Poly:
    """Polynomial in x^1..x^n with rational coefficients, keyed by exponent tuple."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping | None = None):
        self.n = n
        self.terms = {tuple(e): Fraction(c) for e, c in (terms or {}).items() if c}

    @classmethod
    def from_form(cls, f: IteratedForm) -> "Poly":
        tab = f.table
        out = {}
        for key, c in f.terms.items():
            exps = [0] * f.chart.n
            for g, e in key:
                kind, mask, mu = tab.split(g)
                if kind != FORM or mask:
                    raise DegreeError(f"not a polynomial: {format_element(f)}")
                exps[mu] = e
            out[tuple(exps)] = c
        return cls(f.chart.n, out)

    def to_form(self, chart: ChartSpec) -> IteratedForm:
        if chart.n != self.n:
            raise ChartMismatchError("polynomial and chart disagree on n")
        tab = table(chart)
        return IteratedForm._raw(chart, {
            tuple((tab.form(0, mu), e) for mu, e in enumerate(exps) if e): c
            for exps, c in self.terms.items()})

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.n, out)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.terms == ({(0,) * self.n: Fraction(other)} if other else {})
        return isinstance(other, Poly) and self.n == other.n and self.terms == other.terms

    __hash__ = None

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def __repr__(self):
        return f"Poly({str(self)!r})"

    def __str__(self):
        return format_element(self.to_form(ChartSpec(self.n, 1)))


# -- text rendering ----------------------------------------------------------

def format_generator(tab: GeneratorTable, g: int) -> str:
    kind, mask, mu = tab.split(g)
    name = tab.chart.names[mu]
    labels = ",".join(str(s) for s in grading.labels_of(mask))
    if kind == FORM:
        return name if not mask else f"d[{labels}]{name}"
    return f"D[{labels}]{name}"


def format_key(tab: GeneratorTable, key: tuple, sep: str = "*") -> str:
    parts = []
    for g, e in key:
        s = format_generator(tab, g)
        parts.append(s if e == 1 else f"{s}^{e}")
    return sep.join(parts)


def format_terms(tab: GeneratorTable, terms: Iterable) -> str:
    """Render (coefficient, body) pairs; body is a string, empty for 1."""
    out = []
    for c, body in terms:
        neg = c < 0
        a = -c if neg else c
        if not body:
            s = str(a)
        elif a == 1:
            s = body
        else:
            s = f"{a}*{body}"
        if not out:
            out.append(f"-{s}" if neg else s)
        else:
            out.append(f" - {s}" if neg else f" + {s}")
    return "".join(out) if out else "0"


def format_element(a: IteratedForm) -> str:
    tab = a.table
    keys = sorted(a.terms, key=sort_key)
    return format_terms(tab, ((a.terms[k], format_key(tab, k)) for k in keys))


# -- JSON ----------------------------------------------------------------------

def _split_coeff(tab, key):
    coeff, rest, wedge = [], [], []
    for g, e in key:
        kind, mask, mu = tab.split(g)
        if kind == FORM and not mask:
            coeff.append((g, e))
        elif kind == FORM:
            rest.append([list(grading.labels_of(mask)), mu + 1, e])
        else:
            wedge.append([list(grading.labels_of(mask)), mu + 1, e])
    return tuple(coeff), rest, wedge


def to_json(a: IteratedForm) -> dict:
    """{kind, chart, terms: [{coeff: poly-string, factors: [[L, mu, exp]...], wedge?}]}"""
    tab = a.table
    groups: dict = {}
    order = []
    for key in sorted(a.terms, key=sort_key):
        coeff, rest, wedge = _split_coeff(tab, key)
        tag = (repr(rest), repr(wedge))
        if tag not in groups:
            groups[tag] = (rest, wedge, {})
            order.append(tag)
        groups[tag][2][coeff] = a.terms[key]
    terms = []
    for tag in order:
        rest, wedge, poly = groups[tag]
        entry = {"coeff": format_element(IteratedForm._raw(a.chart, poly)), "factors": rest}
        if isinstance(a, Polyvector) or wedge:
            entry["wedge"] = wedge
        terms.append(entry)
    kind = "polyvector" if isinstance(a, Polyvector) else "form"
    return {"kind": kind, "chart": a.chart.to_json(), "terms": terms}


def from_json(data: Mapping, chart: ChartSpec | None = None) -> IteratedForm:
    from .textio import parse_element

    if chart is None:
        chart = ChartSpec(int(data["chart"]["n"]), int(data["chart"]["k"]))
    poly_type = Polyvector if data.get("kind") == "polyvector" else IteratedForm
    out = poly_type(chart)
    for term in data.get("terms", []):
        coeff = parse_element(term["coeff"], chart)
        body = IteratedForm(chart, {(): 1})
        for labels, mu, e in term.get("factors", []):
            body = body * gen(chart, labels, mu) ** int(e)
        for labels, mu, e in term.get("wedge", []):
            body = body * dual(chart, labels, mu) ** int(e)
        out = out + coeff * body
    return poly_type._raw(chart, out.terms)
