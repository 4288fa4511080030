"""Differential operators Lambda^p_{k+1} -> Lambda^s_{k+1} over Lambda_k and the w-complex.

An operator is a sparse sum of terms ``c * F ^ P o i_C`` where

* F is a monomial of Lambda_{k+1} (the form part, left factor),
* P is a monomial in the dual-basis derivations d/d(d_J x^nu) composed in
  canonical order (the operator part; these derivations graded-commute),
* C is a monomial in the dual symbols D_L x^mu; the contraction i_C maps
  Lambda^p_{k+1} to Lambda_k and is applied first (empty when p = 0).

Terms are keyed by ``(F, P, C)`` canonical monomial keys.

Exactness questions are decided block by block.  For a generator g of
Lambda_k write a, b, c for the exponents of g, d_{k+1} g and d/dg in a
p = 0 basis operator; the content psi_g = a + b - c is preserved by w, and
w never raises the Lambda_k-weight sum(a).  A content block cut at weight
<= D is therefore a finite subcomplex.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import exactla, grading
from .errors import DegreeError, NotClosedError, UsageError, WindowError
from .forms import (IteratedForm, add_into, d, format_key, format_terms,
                    key_degree, mul_keys, partial_key, sort_key, table)
from .grading import ChartSpec
from .limits import LIMITS, check
from .reports import BerezinSection, HomologyReport
from .calculus import Derivation, _contract, reconstruct, split_key


class DiffOperator:
    __slots__ = ("chart", "terms")

    def __init__(self, chart: ChartSpec, terms: dict | None = None):
        self.chart = chart
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def _raw(cls, chart, terms):
        obj = cls.__new__(cls)
        obj.chart = chart
        obj.terms = terms
        return obj

    @classmethod
    def identity(cls, chart: ChartSpec) -> "DiffOperator":
        return cls._raw(chart, {((), (), ()): Fraction(1)})

    @classmethod
    def multiplication(cls, a: IteratedForm) -> "DiffOperator":
        return cls._raw(a.chart, {(k, (), ()): c for k, c in a.terms.items()})

    @classmethod
    def from_derivation(cls, X: Derivation) -> "DiffOperator":
        """X = sum_g X(g) d/dg as a first-order operator."""
        tab = table(X.chart)
        out: dict = {}
        for g, v in X.values.items():
            _, mask, mu = tab.split(g)
            o = tab.op(mask, mu)
            for k, c in v.terms.items():
                add_into(out, {(k, ((o, 1),), ()): c})
        return cls._raw(X.chart, out)

    def __add__(self, other):
        out = dict(self.terms)
        add_into(out, other.terms)
        return DiffOperator._raw(self.chart, out)

    def __neg__(self):
        return DiffOperator._raw(self.chart, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if not isinstance(c, (int, Fraction)):
            return NotImplemented
        return DiffOperator._raw(self.chart, {k: v * c for k, v in self.terms.items() if v * c})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, DiffOperator) and self.chart == other.chart and self.terms == other.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        return format_operator(self)

    def __repr__(self):
        return f"DiffOperator({format_operator(self)!r})"

    def degree(self) -> tuple:
        degs = {operator_key_degree(table(self.chart), k) for k in self.terms}
        if len(degs) != 1:
            raise DegreeError("operator is zero or not homogeneous")
        return degs.pop()

    def form_degrees(self) -> set:
        tab = table(self.chart)
        return {key_degree(tab, k[0])[-1] for k in self.terms}

    def order(self) -> int:
        return max((sum(e for _, e in k[1]) for k in self.terms), default=0)


def operator_key_degree(tab, key) -> tuple:
    f, p, c = key
    deg = key_degree(tab, f)
    for part in (p, c):
        if part:
            deg = grading.add(deg, key_degree(tab, part))
    return deg


def format_operator(D: DiffOperator) -> str:
    tab = table(D.chart)
    items = []
    for key in sorted(D.terms, key=lambda k: (sort_key(k[0]), sort_key(k[1]), sort_key(k[2]))):
        f, p, c = key
        parts = []
        if f:
            parts.append(format_key(tab, f))
        tail = []
        if p:
            tail.append(format_key(tab, p, sep="∘"))
        if c:
            tail.append(f"i[{format_key(tab, c)}]")
        if tail:
            if not parts:
                parts.append("1")
            parts.append("∘".join(tail))
        items.append((D.terms[key], " ∧ ".join(parts)))
    return format_terms(tab, items)


def to_json(D: DiffOperator) -> dict:
    tab = table(D.chart)

    def factors(key):
        return [[list(grading.labels_of(tab.split(g)[1])), tab.split(g)[2] + 1, e] for g, e in key]

    return {"kind": "diffop", "chart": D.chart.to_json(), "text": format_operator(D),
            "terms": [{"coeff": str(c), "form": factors(k[0]), "ops": factors(k[1]),
                       "contract": factors(k[2])}
                      for k, c in sorted(D.terms.items(), key=lambda kv: sort_key(kv[0][0]) + sort_key(kv[0][1]))]}


# -- action and composition ----------------------------------------------------------

def _op_form(tab, o: int) -> int:
    _, mask, mu = tab.split(o)
    return tab.form(mask, mu)


def _apply_ops(tab, P: tuple, terms: dict) -> dict:
    for o, e in reversed(P):
        g = _op_form(tab, o)
        for _ in range(e):
            nxt: dict = {}
            for key, c in terms.items():
                pk = partial_key(tab, g, key)
                if pk is not None:
                    m, rest = pk
                    add_into(nxt, {rest: c * m})
            terms = nxt
    return terms


def apply_op(D: DiffOperator, a: IteratedForm) -> IteratedForm:
    """D(a) for a in Lambda_k (p = 0) or in Lambda^p_{k+1}."""
    if D.chart != a.chart:
        raise UsageError("operator and form live on different charts")
    tab = table(D.chart)
    out: dict = {}
    for (f, P, C), c in D.terms.items():
        src = _contract(tab, C, a.terms) if C else a.terms
        if not src:
            continue
        for key in src:
            if not all(tab.is_lower_form(g) for g, _ in key):
                raise DegreeError("operator part acts on Lambda_k only; contract first")
        res = _apply_ops(tab, P, dict(src))
        for k2, c2 in res.items():
            sign, k3 = mul_keys(tab, f, k2)
            if sign:
                add_into(out, {k3: c * c2 * sign})
    return IteratedForm._raw(D.chart, out)


def _lower_gens(tab):
    return [tab.form(mask, mu) for mask in range(1 << tab.k) for mu in range(tab.n)]


def w(D: DiffOperator) -> DiffOperator:
    """w(D) = d_{k+1} o D, rewritten in normal form."""
    chart = D.chart
    tab = table(chart)
    top = chart.slots
    out: dict = {}
    lower = _lower_gens(tab)
    for (f, P, C), c in D.terms.items():
        df = d(top, IteratedForm._raw(chart, {f: Fraction(1)}))
        for k2, c2 in df.terms.items():
            add_into(out, {(k2, P, C): c * c2})
        sign0 = -1 if key_degree(tab, f)[top - 1] & 1 else 1
        for g in lower:
            _, mask, mu = tab.split(g)
            G = tab.form(mask | tab.top_bit, mu)
            s1, fk = mul_keys(tab, f, ((G, 1),))
            if not s1:
                continue
            s2, pk = mul_keys(tab, ((tab.op(mask, mu), 1),), P)
            if not s2:
                continue
            add_into(out, {(fk, pk, C): c * sign0 * s1 * s2})
    return DiffOperator._raw(chart, out)


def _key_dot_parity(tab, k1: tuple, k2: tuple) -> int:
    s = 0
    for g, e in k1:
        if e & 1:
            for h, e2 in k2:
                if e2 & 1:
                    s ^= (tab.pm[g] & tab.pm[h]).bit_count() & 1
    return s


def _ops_times(tab, P: tuple, a_terms: dict) -> dict:
    """P o (multiplication by a) as {(b_key, Q_key): coeff} meaning y -> b Q(y)."""
    acc = {(k, ()): c for k, c in a_terms.items()}
    for o, e in reversed(P):
        g = _op_form(tab, o)
        okey = ((o, 1),)
        for _ in range(e):
            nxt: dict = {}
            for (b, Q), v in acc.items():
                pk = partial_key(tab, g, b)
                if pk is not None:
                    m, rest = pk
                    add_into(nxt, {(rest, Q): v * m})
                sign, q2 = mul_keys(tab, okey, Q)
                if sign:
                    if _key_dot_parity(tab, okey, b):
                        sign = -sign
                    add_into(nxt, {(b, q2): v * sign})
            acc = nxt
    return acc


def compose_mult(D: DiffOperator, a: IteratedForm) -> DiffOperator:
    """D o (multiplication by a), a in Lambda_k."""
    tab = table(D.chart)
    out: dict = {}
    for (f, P, C), c in D.terms.items():
        terms = a.terms
        if C:
            terms = {k: (-v if _key_dot_parity(tab, C, k) else v) for k, v in terms.items()}
        for (b, Q), v in _ops_times(tab, P, terms).items():
            sign, fb = mul_keys(tab, f, b)
            if sign:
                add_into(out, {(fb, Q, C): c * v * sign})
    return DiffOperator._raw(D.chart, out)


def compose_derivation(D: DiffOperator, X: Derivation) -> DiffOperator:
    """D o X for a derivation X = sum_g X(g) d/dg of Lambda_k."""
    tab = table(D.chart)
    out: dict = {}
    for g, v in X.values.items():
        _, mask, mu = tab.split(g)
        okey = ((tab.op(mask, mu), 1),)
        for (f, Q, C), c in compose_mult(D, v).terms.items():
            if C:
                raise DegreeError("compose_derivation needs an operator on Lambda_k")
            sign, q2 = mul_keys(tab, Q, okey)
            if sign:
                add_into(out, {(f, q2, C): c * sign})
    return DiffOperator._raw(D.chart, out)


def right_action(a: IteratedForm, D: DiffOperator) -> DiffOperator:
    """a^> D = (-1)^{|a||D|} D o a, summed over homogeneous components of a."""
    out = DiffOperator(D.chart)
    dD = D.degree()
    for deg, comp in a.components().items():
        piece = compose_mult(D, comp)
        if grading.dot(deg, dD) & 1:
            piece = -piece
        out = out + piece
    return out


# -- berezinian generator --------------------------------------------------------------

def nu(chart_or_k, n: int | None = None) -> int:
    if isinstance(chart_or_k, ChartSpec):
        return 2 ** (chart_or_k.k - 1) * chart_or_k.n
    return 2 ** (chart_or_k - 1) * n


def subset_families(k: int) -> tuple:
    """(even, odd) subsets of {1..k} as bitmasks, each sorted ascending."""
    even = [m for m in range(1 << k) if not grading.parity(m)]
    odd = [m for m in range(1 << k) if grading.parity(m)]
    return even, odd


@lru_cache(maxsize=None)
def berezin_generator(chart: ChartSpec) -> DiffOperator:
    """Omega_U ^ Delta_U with coordinates outermost and subsets by bitmask."""
    check("nu(k)", nu(chart), LIMITS.max_nu)
    tab = table(chart)
    even, odd = subset_families(chart.k)
    sign, omega = 1, ()
    for mu in range(chart.n):
        for m in even:
            s, omega = mul_keys(tab, omega, ((tab.form(m | tab.top_bit, mu), 1),))
            sign *= s
    delta = ()
    for mu in range(chart.n):
        for m in odd:
            s, delta = mul_keys(tab, delta, ((tab.op(m, mu), 1),))
            sign *= s
    if not sign:
        raise AssertionError("berezinian generator vanished")
    return DiffOperator._raw(chart, {(omega, delta, ()): Fraction(sign)})


# -- content blocks ------------------------------------------------------------------------

@dataclass(frozen=True)
class _Triple:
    g: int
    G: int
    o: int
    odd: bool


@lru_cache(maxsize=None)
def _triples(chart: ChartSpec) -> tuple:
    tab = table(chart)
    out = []
    for mask in range(1 << chart.k):
        for mu in range(chart.n):
            out.append(_Triple(tab.form(mask, mu), tab.form(mask | tab.top_bit, mu),
                               tab.op(mask, mu), bool(grading.parity(mask))))
    return tuple(out)


def content(chart: ChartSpec, key: tuple) -> tuple:
    """psi_g = exp(g) + exp(d_{k+1} g) - exp(d/dg) for every generator g of Lambda_k."""
    f, P, C = key
    if C:
        raise DegreeError("content blocks are defined for operators on Lambda_k")
    fe = dict(f)
    pe = dict(P)
    return tuple(fe.get(t.g, 0) + fe.get(t.G, 0) - pe.get(t.o, 0) for t in _triples(chart))


def lambda_weight(chart: ChartSpec, key: tuple) -> int:
    tab = table(chart)
    return sum(e for g, e in key[0] if tab.is_lower_form(g))


def _options(t: _Triple, psi: int, weight_bound: int) -> list:
    out = []
    if t.odd:
        for a in (0, 1):
            for c in (0, 1):
                b = psi - a + c
                if b >= 0 and a <= weight_bound:
                    out.append((a, b, c))
    else:
        for a in range(weight_bound + 1):
            for b in (0, 1):
                c = a + b - psi
                if c >= 0:
                    out.append((a, b, c))
    return out


def block_basis(chart: ChartSpec, psi: tuple, weight_bound: int, s: int | None = None) -> list:
    """Canonical basis operators of a content block with Lambda_k-weight <= weight_bound."""
    trip = _triples(chart)
    opts = [_options(t, p, weight_bound) for t, p in zip(trip, psi)]
    out = []

    def rec(i, weight, ss, chosen):
        if weight > weight_bound or (s is not None and ss > s):
            return
        if i == len(trip):
            if s is None or ss == s:
                out.append(tuple(chosen))
            return
        for a, b, c in opts[i]:
            chosen.append((a, b, c))
            rec(i + 1, weight + a, ss + b, chosen)
            chosen.pop()

    rec(0, 0, 0, [])
    check("block size", len(out), LIMITS.max_basis)
    keys = []
    for choice in out:
        f, P = [], []
        for t, (a, b, c) in zip(trip, choice):
            if a:
                f.append((t.g, a))
            if b:
                f.append((t.G, b))
            if c:
                P.append((t.o, c))
        keys.append((tuple(sorted(f)), tuple(sorted(P)), ()))
    return keys




def key_s(tab, key) -> int:
    return sum(e for g, e in key[0] if tab.is_top_form(g))


def key_order(key) -> int:
    return sum(e for _, e in key[1])


# -- windows ------------------------------------------------------------------------------

@dataclass
class WindowSpec:
    """Finite piece of the w-complex.

    Content blocks are kept whole (cut at Lambda_k-weight <= coeff_degree) and
    only if every element has order <= r_max and form degree <= s_max.
    `blocks` restricts to explicitly listed content vectors.
    """

    n: int
    k: int
    r_max: int
    coeff_degree: int
    s_min: int = 0
    s_max: int | None = None
    blocks: tuple | None = None

    def __post_init__(self):
        if min(self.r_max, self.coeff_degree, self.s_min) < 0:
            raise UsageError("window bounds must be nonnegative")

    @property
    def chart(self) -> ChartSpec:
        return ChartSpec(self.n, self.k)

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "r_max": self.r_max, "coeff_degree": self.coeff_degree,
                "s_min": self.s_min, "s_max": self.resolved_s_max()}

    def resolved_s_max(self) -> int:
        return self.s_max if self.s_max is not None else nu(self.k, self.n) + 1


def _candidate_blocks(chart: ChartSpec, spec: WindowSpec):
    trip = _triples(chart)
    D, r_max, s_max = spec.coeff_degree, spec.r_max, spec.resolved_s_max()
    ranges = []
    for t in trip:
        if t.odd:
            ranges.append(range(-1, s_max + 2))
        else:
            ranges.append(range(-r_max, D + 2))
    total = 1
    for r in ranges:
        total *= len(r)
    check("candidate content blocks", total, LIMITS.max_block_candidates)
    out = []

    def min_order(t, p):
        return max(0, -p)

    def min_s(t, p):
        if t.odd:
            return max(0, p - 1)
        return 0 if p <= D else 1

    def rec(i, acc, mo, ms):
        if mo > r_max or ms > s_max:
            return
        if i == len(trip):
            out.append(tuple(acc))
            return
        t = trip[i]
        for p in ranges[i]:
            acc.append(p)
            rec(i + 1, acc, mo + min_order(t, p), ms + min_s(t, p))
            acc.pop()

    rec(0, [], 0, 0)
    return out


def _block_complex(chart, psi, weight_bound):
    tab = table(chart)
    keys = block_basis(chart, psi, weight_bound)
    by_s: dict = {}
    for key in keys:
        by_s.setdefault(key_s(tab, key), []).append(key)
    return by_s


def _w_matrix(chart, src: list, dst: list, strict=True):
    """Matrix of w from src keys into dst keys; raises WindowError on escape."""
    index = {k: i for i, k in enumerate(dst)}
    cols = []
    for key in src:
        img = w(DiffOperator._raw(chart, {key: Fraction(1)}))
        col = {}
        for k2, v in img.terms.items():
            if k2 not in index:
                if strict:
                    raise WindowError(
                        "window is not closed under w: "
                        f"w({format_operator(DiffOperator._raw(chart, {key: Fraction(1)}))}) "
                        f"leaves it through {format_operator(DiffOperator._raw(chart, {k2: v}))}",
                        element=format_operator(DiffOperator._raw(chart, {key: Fraction(1)})))
                continue
            col[index[k2]] = v
        cols.append(col)
    return exactla.SparseMatrixQ.from_columns(len(dst), cols)


def _in_image(M, vec_terms: dict, index: dict, nrows: int) -> bool:
    b = [Fraction(0)] * nrows
    for k, v in vec_terms.items():
        if k not in index:
            return False
        b[index[k]] = v
    if M.ncols == 0:
        return not any(b)
    return exactla.solve_in_image(M, b) is not exactla.NOT_IN_IMAGE


def _berezin_content(chart):
    B = berezin_generator(chart)
    (key,) = B.terms
    return content(chart, key)


def expected_monomial(chart: ChartSpec, psi: tuple):
    """The unique Lambda_k monomial m with m^> box in block psi, or None."""
    base = _berezin_content(chart)
    key = []
    for t, p, b in zip(_triples(chart), psi, base):
        a = p - b
        if a < 0 or (t.odd and a > 1):
            return None
        if a:
            key.append((t.g, a))
    return tuple(sorted(key))


def _fit_block(chart, psi, spec):
    """Largest weight cut W <= coeff_degree whose block has order <= r_max, with its pieces."""
    worst = None
    for W in range(spec.coeff_degree, -1, -1):
        by_s = _block_complex(chart, psi, W)
        if not by_s:
            return None, None, worst
        top = max((k for ks in by_s.values() for k in ks), key=key_order)
        if key_order(top) <= spec.r_max:
            return W, by_s, worst
        worst = worst or top
    return None, None, worst


def cohomology_window(spec: WindowSpec) -> HomologyReport:
    """Dimensions of H^s(w_{k,0}), s_min <= s <= s_max, over the content blocks of a window.

    Each block is cut at the largest Lambda_k-weight W <= coeff_degree for
    which every element has order <= r_max; blocks with no such cut are
    skipped (or rejected, when listed explicitly in the window).
    """
    chart = spec.chart
    n_k = nu(chart)
    s_max = spec.resolved_s_max()
    if spec.blocks is not None:
        psis = [tuple(b) for b in spec.blocks]
    else:
        psis = _candidate_blocks(chart, spec)
    dims = [0] * (s_max + 1)
    blocks_used = 0
    expected_at_nu = 0
    nonzero = []
    free_ok = True
    box = berezin_generator(chart)
    box_psi = content(chart, next(iter(box.terms)))
    generator_match = False
    for psi in psis:
        W, by_s, worst = _fit_block(chart, psi, spec)
        if by_s is None:
            if spec.blocks is not None:
                raise WindowError(
                    f"block {list(psi)} does not fit in r_max={spec.r_max}"
                    + (f": it contains {format_operator(DiffOperator._raw(chart, {worst: Fraction(1)}))}"
                       if worst else " (empty block)"),
                    element=format_operator(DiffOperator._raw(chart, {worst: Fraction(1)})) if worst else "")
            continue
        blocks_used += 1
        ranks = {}
        mats = {}
        for s in range(max(by_s) + 1):
            src, dst = by_s.get(s, []), by_s.get(s + 1, [])
            M = _w_matrix(chart, src, dst)
            mats[s] = (M, dst)
            ranks[s] = exactla.rank(M) if src and dst else 0
        h_of = {}
        for s in range(max(by_s) + 1):
            h = len(by_s.get(s, [])) - ranks.get(s, 0) - ranks.get(s - 1, 0)
            if h < 0:
                raise AssertionError("negative cohomology dimension")
            h_of[s] = h
            if h and spec.s_min <= s <= s_max:
                dims[s] += h
                nonzero.append({"psi": list(psi), "s": s, "dim": h, "weight_cut": W})
        # expected class at s = nu: m^> box for the unique admissible monomial m
        m = expected_monomial(chart, psi)
        h_nu = h_of.get(n_k, 0)
        if m is not None and sum(e for _, e in m) <= W:
            expected_at_nu += 1
            rep = right_action(IteratedForm._raw(chart, {m: Fraction(1)}), box)
            M, dst = mats.get(n_k - 1, (None, []))
            index = {k: i for i, k in enumerate(dst)}
            exact = _in_image(M, rep.terms, index, len(dst)) if M is not None and dst else not rep.terms
            rep_ok = h_nu == 1 and not exact and not w(rep)
            if psi == box_psi:
                generator_match = rep_ok
        else:
            rep_ok = h_nu == 0
        free_ok = free_ok and rep_ok
    off = [s for s, v in enumerate(dims) if v and s != n_k]
    params = {"n": chart.n, "k": chart.k, "nu": n_k, **spec.to_json()}
    return HomologyReport(params, dims, [format_operator(box)] if generator_match else [], {
        "blocks": blocks_used,
        "blocks_at_nu": expected_at_nu,
        "nonzero_blocks": nonzero,
        "off_nu_zero": not off,
        "generator_matches_berezinian": generator_match,
        "free_rank_one": free_ok,
    })


# -- classes in the berezinian ----------------------------------------------------------------

def class_of(D: DiffOperator) -> BerezinSection:
    """a with D = a^> box + w(Gamma), for a w-closed D: Lambda_k -> Lambda^nu_{k+1}."""
    chart = D.chart
    n_k = nu(chart)
    if not D.terms:
        return BerezinSection(IteratedForm(chart))
    if any(k[2] for k in D.terms):
        raise DegreeError("class_of needs an operator on Lambda_k")
    if D.form_degrees() != {n_k}:
        raise DegreeError(f"class_of needs form degree nu(k) = {n_k}")
    if w(D):
        raise NotClosedError("operator is not w-closed")
    box = berezin_generator(chart)
    groups: dict = {}
    for key, c in D.terms.items():
        groups.setdefault(content(chart, key), {})[key] = c
    coeff: dict = {}
    for psi, terms in groups.items():
        m = expected_monomial(chart, psi)
        base_weight = max(lambda_weight(chart, k) for k in terms)
        rep = None
        if m is not None:
            rep = right_action(IteratedForm._raw(chart, {m: Fraction(1)}), box)
            base_weight = max(base_weight, sum(e for _, e in m))
        for extra in range(LIMITS.max_extra_weight + 1):
            bound = base_weight + extra
            src = block_basis(chart, psi, bound, s=n_k - 1)
            dst = block_basis(chart, psi, bound, s=n_k)
            M = _w_matrix(chart, src, dst)
            index = {k: i for i, k in enumerate(dst)}
            cols = []
            if rep is not None:
                cols.append({index[k]: v for k, v in rep.terms.items()})
            cols.extend({i: v for (i, _), v in M.entries.items() if _ == j} for j in range(M.ncols))
            A = exactla.SparseMatrixQ.from_columns(len(dst), cols)
            b = [Fraction(0)] * len(dst)
            for k, v in terms.items():
                b[index[k]] = v
            x = exactla.solve_in_image(A, b)
            if x is not exactla.NOT_IN_IMAGE:
                if rep is not None and x[0]:
                    coeff[m] = coeff.get(m, 0) + x[0]
                break
        else:
            raise WindowError(f"window too small to decide the class of the block {list(psi)}")
    return BerezinSection(IteratedForm(chart, coeff))


# -- integral forms as operators ------------------------------------------------------------

def chi_realize(Z: IteratedForm) -> DiffOperator:
    """w-closed representative of the integral form Z: sum_beta (z_beta^> box) o i_{D^beta}."""
    chart = Z.chart
    tab = table(chart)
    box = berezin_generator(chart)
    out = DiffOperator(chart)
    groups: dict = {}
    for key, c in Z.terms.items():
        coeff, duals = split_key(tab, key)
        groups.setdefault(duals, {})[coeff] = c
    for duals, coeffs in groups.items():
        z = IteratedForm._raw(chart, coeffs)
        if not z.in_lower():
            raise DegreeError("integral form coefficients must lie in Lambda_k")
        piece = right_action(z, box)
        out = out + DiffOperator._raw(chart, {(f, P, duals): c for (f, P, _), c in piece.terms.items()})
    return out


def contraction_operator(nabla: DiffOperator, omega_key: tuple) -> DiffOperator:
    """The operator a -> nabla(Omega a) on Lambda_k for a basis monomial Omega of Lambda^s_{k+1}."""
    chart = nabla.chart
    tab = table(chart)
    out: dict = {}
    for (f, P, C), c in nabla.terms.items():
        val = _contract(tab, C, {omega_key: Fraction(1)}) if C else {omega_key: Fraction(1)}
        for k2, v in val.items():
            if k2:
                raise DegreeError("contraction did not reduce the basis form to a scalar")
            add_into(out, {(f, P, ()): c * v})
    return DiffOperator._raw(chart, out)


def polyvector_of(nabla: DiffOperator, s: int):
    """Read back the integral form of a closed operator on Lambda^s_{k+1}."""
    chart = nabla.chart
    return reconstruct(chart, s, lambda om: class_of(
        contraction_operator(nabla, next(iter(om.terms)))).coefficient)
