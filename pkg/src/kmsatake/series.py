"""Truncated formal series over the lattice Y.

A :class:`TruncSeries` stores terms ``e^mu -> ParamCoeff`` together with a
window: a ceiling ``lam`` with every exponent in ``lam - Q_+^vee``, and a depth
``N`` such that all coefficients with ``ht(lam - mu) <= N`` are exact.  An
exact Laurent polynomial has ``depth=None``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .coeffs import ParamCoeff
from .root_datum import RootDatum, RootDatumError, WeylElt


class WindowError(ValueError):
    pass


def _min_depth(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(eq=False)
class TruncSeries:
    rd: RootDatum
    terms: dict
    ceiling: tuple | None
    depth: int | None = None

    def __post_init__(self):
        if any(not c for c in self.terms.values()):
            self.terms = {m: c for m, c in self.terms.items() if c}

    @property
    def exact(self) -> bool:
        return self.depth is None

    def offset(self, mu) -> int:
        """Scaled height of ceiling - mu (height_den units)."""
        return self.rd.hscaled(self.ceiling) - self.rd.hscaled(mu)

    def coeff(self, mu) -> ParamCoeff:
        mu = tuple(mu)
        if self.depth is not None and self.ceiling is not None:
            off = self.offset(mu)
            if off > self.depth * self.rd.height_den:
                raise WindowError(f"coefficient of e^{mu} lies outside the certified window")
        return self.terms.get(mu, ParamCoeff.zero(self.rd.vars))

    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        return series_add(self, series_scale(other, -1))

    def __neg__(self):
        return series_scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            return series_mul(self, other)
        return series_scale(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (self.ceiling == other.ceiling and self.depth == other.depth
                and _terms_equal(self.terms, other.terms))

    def __repr__(self):
        return f"TruncSeries({format_series(self)}; ceiling={self.ceiling}, depth={self.depth})"

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_items(self) -> list:
        """Terms sorted by depth from the ceiling, then descending exponent."""
        if self.ceiling is None:
            return sorted(self.terms.items(), key=lambda kv: tuple(-x for x in kv[0]))
        return sorted(self.terms.items(),
                      key=lambda kv: (self.offset(kv[0]), tuple(-x for x in kv[0])))


def _terms_equal(a: dict, b: dict) -> bool:
    if a.keys() != b.keys():
        return False
    return all(a[k] == b[k] for k in a)


def lub(rd: RootDatum, exps) -> tuple | None:
    """Least upper bound for the order mu <= nu iff nu - mu in Q_+^vee, or None."""
    exps = list(exps)
    if not exps:
        return None
    base = exps[0]
    best = [0] * rd.index_count
    for mu in exps[1:]:
        x = rd.coroot_coords(tuple(a - b for a, b in zip(mu, base)))
        if x is None:
            return None
        best = [max(p, c) for p, c in zip(best, x)]
    off = rd.from_coroot_coords(best)
    return tuple(a + b for a, b in zip(base, off))


def exact_poly(rd: RootDatum, terms: dict) -> TruncSeries:
    terms = {m: c for m, c in terms.items() if c}
    return TruncSeries(rd, terms, lub(rd, terms) if terms else None, None)


def series_monomial(rd: RootDatum, lam, coeff=1) -> TruncSeries:
    lam = rd.check_vector(lam, "exponent")
    c = ParamCoeff.coerce(coeff, rd.vars)
    return TruncSeries(rd, {lam: c} if c else {}, lam, None)


def series_zero(rd: RootDatum, ceiling=None, depth=None) -> TruncSeries:
    return TruncSeries(rd, {}, tuple(ceiling) if ceiling is not None else None, depth)


def series_one(rd: RootDatum) -> TruncSeries:
    return series_monomial(rd, (0,) * rd.lattice_dim)


def _same_lattice(f: TruncSeries, g: TruncSeries):
    if f.rd is not g.rd:
        raise RootDatumError("series live on different root data")


def reanchor(f: TruncSeries, ceiling) -> TruncSeries:
    """Same series viewed from a higher ceiling (depth grows accordingly)."""
    ceiling = tuple(ceiling)
    if f.ceiling == ceiling:
        return f
    rd = f.rd
    if f.ceiling is None:
        if not f.exact:
            raise WindowError("truncated series without ceiling")
        return TruncSeries(rd, f.terms, ceiling, None)
    x = rd.coroot_coords(tuple(a - b for a, b in zip(ceiling, f.ceiling)))
    if x is None or any(c < 0 for c in x):
        raise WindowError(f"{ceiling} is not above {f.ceiling}")
    depth = None if f.depth is None else f.depth + sum(x)
    return TruncSeries(rd, f.terms, ceiling, depth)


def truncate(f: TruncSeries, N: int, ceiling=None) -> TruncSeries:
    """Keep terms within depth N of the (given or own) ceiling."""
    rd = f.rd
    if ceiling is not None:
        ceiling = tuple(ceiling)
        if f.ceiling is None and f.terms:
            top = lub(rd, f.terms)
            if top is None:
                raise WindowError("terms have no common upper bound")
            f = TruncSeries(rd, f.terms, top, f.depth)
        if f.ceiling is not None:
            f = reanchor(f, ceiling)
        else:
            f = TruncSeries(rd, f.terms, ceiling, f.depth)
    elif f.ceiling is None:
        if not f.terms:
            return TruncSeries(rd, {}, None, N)
        top = lub(rd, f.terms)
        if top is None:
            raise WindowError("terms have no common upper bound")
        f = TruncSeries(rd, f.terms, top, f.depth)
    limit = N * rd.height_den
    hc = rd.hscaled(f.ceiling)
    terms = {m: c for m, c in f.terms.items() if hc - rd.hscaled(m) <= limit}
    return TruncSeries(rd, terms, f.ceiling, _min_depth(f.depth, N))


def series_add(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    _same_lattice(f, g)
    rd = f.rd
    if f.exact and g.exact:
        out = dict(f.terms)
        for m, c in g.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        if f.ceiling is not None and g.ceiling is not None:
            ceiling = lub(rd, [f.ceiling, g.ceiling])
        else:
            ceiling = lub(rd, out)
        return TruncSeries(rd, out, ceiling, None)
    # at least one is truncated: common ceiling
    cf = f.ceiling if f.ceiling is not None else lub(rd, f.terms)
    cg = g.ceiling if g.ceiling is not None else lub(rd, g.terms)
    if cf is None and cg is None:
        raise WindowError("cannot add series without ceilings")
    ceiling = cf if cg is None else cg if cf is None else lub(rd, [cf, cg])
    if ceiling is None:
        raise WindowError(f"ceilings {cf} and {cg} are incomparable")
    fa = reanchor(TruncSeries(rd, f.terms, cf, f.depth), ceiling) if cf is not None else f
    ga = reanchor(TruncSeries(rd, g.terms, cg, g.depth), ceiling) if cg is not None else g
    depth = _min_depth(fa.depth, ga.depth)
    limit = depth * rd.height_den
    hc = rd.hscaled(ceiling)
    out = {}
    for src in (fa.terms, ga.terms):
        for m, c in src.items():
            if hc - rd.hscaled(m) > limit:
                continue
            s = out.get(m)
            s = c if s is None else s + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return TruncSeries(rd, out, ceiling, depth)


def series_sum(rd: RootDatum, items) -> TruncSeries:
    acc = None
    for f in items:
        acc = f if acc is None else series_add(acc, f)
    return acc if acc is not None else TruncSeries(rd, {}, None, None)


def series_scale(f: TruncSeries, c) -> TruncSeries:
    if not isinstance(c, ParamCoeff):
        c = ParamCoeff.coerce(c, f.rd.vars)
    if c.is_zero():
        return TruncSeries(f.rd, {}, f.ceiling, f.depth)
    return TruncSeries(f.rd, {m: v * c for m, v in f.terms.items()}, f.ceiling, f.depth)


def series_shift(f: TruncSeries, lam) -> TruncSeries:
    """e^lam * f."""
    lam = tuple(lam)
    terms = {tuple(a + b for a, b in zip(m, lam)): c for m, c in f.terms.items()}
    ceiling = None if f.ceiling is None else tuple(a + b for a, b in zip(f.ceiling, lam))
    return TruncSeries(f.rd, terms, ceiling, f.depth)


def series_mul(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    _same_lattice(f, g)
    rd = f.rd
    if not f.exact or not g.exact:
        if f.ceiling is None or g.ceiling is None:
            # an exact factor without ceiling: give it one
            if f.ceiling is None:
                f = TruncSeries(rd, f.terms, lub(rd, f.terms) if f.terms else (0,) * rd.lattice_dim, f.depth)
            if g.ceiling is None:
                g = TruncSeries(rd, g.terms, lub(rd, g.terms) if g.terms else (0,) * rd.lattice_dim, g.depth)
            if f.ceiling is None or g.ceiling is None:
                raise WindowError("exact factor has no ceiling")
    depth = _min_depth(f.depth, g.depth)
    ceiling = None
    if f.ceiling is not None and g.ceiling is not None:
        ceiling = tuple(a + b for a, b in zip(f.ceiling, g.ceiling))
    out: dict = {}
    if depth is None:
        for m1, c1 in f.terms.items():
            for m2, c2 in g.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                p = c1 * c2
                s = out.get(m)
                s = p if s is None else s + p
                if s:
                    out[m] = s
                else:
                    del out[m]
        return TruncSeries(rd, out, ceiling, None)
    limit = depth * rd.height_den
    hf = rd.hscaled(f.ceiling)
    hg = rd.hscaled(g.ceiling)
    fl = [(m, c, hf - rd.hscaled(m)) for m, c in f.terms.items()]
    gl = [(m, c, hg - rd.hscaled(m)) for m, c in g.terms.items()]
    fl = [t for t in fl if t[2] <= limit]
    gl = [t for t in gl if t[2] <= limit]
    for m1, c1, o1 in fl:
        room = limit - o1
        for m2, c2, o2 in gl:
            if o2 > room:
                continue
            m = tuple(a + b for a, b in zip(m1, m2))
            p = c1 * c2
            s = out.get(m)
            s = p if s is None else s + p
            if s:
                out[m] = s
            else:
                del out[m]
    return TruncSeries(rd, out, ceiling, depth)


def series_pow(f: TruncSeries, k: int, N: int | None = None) -> TruncSeries:
    result = series_one(f.rd)
    for _ in range(k):
        result = series_mul(result, f)
        if N is not None:
            result = truncate(result, N)
    return result


# b and c expansions


def _class_coeffs(rd: RootDatum, cls: int, params: Mapping | None):
    s = rd.sigma(cls)
    t = rd.sigma_prime(cls)
    if params:
        s = s.substitute({k: v for k, v in params.items() if k in s.vars})
        t = t.substitute({k: v for k, v in params.items() if k in t.vars})
    return s, t


def _positive_part(rd: RootDatum, beta):
    beta = tuple(beta)
    sign = rd.coroot_sign(beta)
    if sign == 0:
        raise RootDatumError(f"{beta} is not a real coroot")
    alpha = beta if sign > 0 else tuple(-x for x in beta)
    return sign, alpha


def _bc_terms(rd: RootDatum, beta, N: int, cls: int | None, params, which: str) -> TruncSeries:
    sign, alpha = _positive_part(rd, beta)
    if cls is None:
        cls = rd.coroot_class(alpha)
    s, t = _class_coeffs(rd, cls, params)
    a = s - s.inverse()
    ap = t - t.inverse()
    hd = rd.hscaled(alpha)
    zero = (0,) * rd.lattice_dim
    terms: dict = {}
    k = 0
    while k * hd <= N * rd.height_den:
        mu = tuple(-k * x for x in alpha)
        if sign > 0:
            # b(alpha) = -sum_{k>=1} x_k e^{-k alpha}, x_k = a' (k odd), a (k even)
            if k >= 1:
                x = ap if k % 2 else a
                terms[mu] = -x if which == "b" else x
        else:
            # b(-alpha) = sum_{k>=0} y_k e^{-k alpha}, y_k = a (k even), a' (k odd)
            y = a if k % 2 == 0 else ap
            if which == "b":
                terms[mu] = y
            elif k >= 1:
                terms[mu] = -y
        k += 1
    if which == "c":
        const = s if sign > 0 else s.inverse()
        terms[zero] = terms.get(zero, ParamCoeff.zero(rd.vars)) + const
    terms = {m: c for m, c in terms.items() if c}
    return TruncSeries(rd, terms, zero, N)


def expand_b(rd: RootDatum, beta, N: int, cls: int | None = None, params: Mapping | None = None) -> TruncSeries:
    """b(sigma_beta, sigma'_beta; e^beta) expanded in -Q_+^vee through depth N."""
    return _bc_terms(rd, beta, N, cls, params, "b")


def expand_c(rd: RootDatum, beta, N: int, cls: int | None = None, params: Mapping | None = None) -> TruncSeries:
    """c = sigma_beta - b, expanded in -Q_+^vee through depth N."""
    return _bc_terms(rd, beta, N, cls, params, "c")


def invert_unit(f: TruncSeries, N: int) -> TruncSeries:
    """Inverse through depth N of a series whose ceiling coefficient is a unit monomial."""
    rd = f.rd
    if f.ceiling is None:
        if not f.terms:
            raise ZeroDivisionError("cannot invert zero")
        f = TruncSeries(rd, f.terms, lub(rd, f.terms), f.depth)
    lead = f.terms.get(f.ceiling)
    if lead is None or not lead.is_unit() or (lead.is_integral() and abs(next(iter(lead.terms.values()))) != 1):
        raise ZeroDivisionError(f"leading coefficient {lead} is not a unit monomial")
    N = N if f.depth is None else min(N, f.depth)
    lead_inv = lead.inverse()
    zero = (0,) * rd.lattice_dim
    neg_ceiling = tuple(-x for x in f.ceiling)
    # f = lead e^ceiling (1 + u), u of depth >= 1
    u = series_shift(series_scale(truncate(f, N), lead_inv), neg_ceiling)
    u = TruncSeries(rd, {m: c for m, c in u.terms.items() if m != zero}, zero, N)
    one = TruncSeries(rd, {zero: ParamCoeff.one(rd.vars)}, zero, N)
    g = one
    for _ in range(N):
        g = series_add(one, -series_mul(u, g))
    g = series_shift(series_scale(g, lead_inv), neg_ceiling)
    g = TruncSeries(rd, g.terms, g.ceiling, N)
    check = truncate(series_mul(truncate(f, N), g), N)
    expected = TruncSeries(rd, {zero: ParamCoeff.one(rd.vars)}, zero, N)
    if not equal_within(check, expected, N):
        raise ArithmeticError("unit inversion failed its verification")
    return g


def relabel_exponents(w: WeylElt, f: TruncSeries) -> TruncSeries:
    if not f.exact:
        raise WindowError("relabel_exponents is only defined on exact Laurent polynomials")
    rd = f.rd
    terms = {rd.act(w, m): c for m, c in f.terms.items()}
    return TruncSeries(rd, terms, lub(rd, terms) if terms else None, None)


def equal_within(f: TruncSeries, g: TruncSeries, N: int, ceiling=None) -> bool:
    return first_difference(f, g, N, ceiling) is None


def first_difference(f: TruncSeries, g: TruncSeries, N: int, ceiling=None):
    """First exponent (by depth, then lex) within depth N where f and g differ, or None."""
    rd = f.rd
    if ceiling is None:
        ceiling = f.ceiling if f.ceiling is not None else g.ceiling
    if ceiling is None:
        ceiling = lub(rd, list(f.terms) + list(g.terms))
    if ceiling is None:
        return None if _terms_equal(f.terms, g.terms) else next(iter(set(f.terms) ^ set(g.terms)), None)
    ceiling = tuple(ceiling)
    for h in (f, g):
        if h.depth is not None and h.ceiling is not None:
            x = rd.coroot_coords(tuple(a - b for a, b in zip(ceiling, h.ceiling)))
            eff = h.depth - (sum(x) if x is not None else 0)
            if x is None or eff < N:
                raise WindowError(f"series is only certified to depth {eff} at ceiling {ceiling}")
    hc = rd.hscaled(ceiling)
    limit = N * rd.height_den
    keys = sorted({m for m in list(f.terms) + list(g.terms) if hc - rd.hscaled(m) <= limit},
                  key=lambda m: (hc - rd.hscaled(m), tuple(-x for x in m)))
    zero = ParamCoeff.zero(rd.vars)
    for m in keys:
        if f.terms.get(m, zero) != g.terms.get(m, zero):
            return m
    return None


# specialization


def specialize(f, assignment: Mapping):
    """Substitute parameter variables in a ParamCoeff or a series."""
    if isinstance(f, ParamCoeff):
        return _spec_coeff(f, assignment)
    if isinstance(f, TruncSeries):
        for v in assignment:
            if v not in f.rd.vars:
                raise KeyError(f"{v!r} is not a parameter class variable of this datum")
        out = {}
        for m, c in f.terms.items():
            s = _spec_coeff(c, assignment)
            if s:
                out[m] = s
        return TruncSeries(f.rd, out, f.ceiling, f.depth)
    raise TypeError(f"cannot specialize {type(f).__name__}")


def _spec_coeff(c: ParamCoeff, assignment: Mapping) -> ParamCoeff:
    subs = {}
    renames = []
    for v, target in assignment.items():
        if v not in c.vars:
            continue
        if isinstance(target, tuple) and target[0] == "square":
            renames.append((v, target[1]))
        else:
            subs[v] = target
    out = c.substitute(subs) if subs else c
    for v, new in renames:
        out = out.rename_square(v, new)
    return out


def rename_square(f, var: str, new: str):
    """sigma^2 -> t rename (all exponents of ``var`` must be even)."""
    return specialize(f, {var: ("square", new)})


def map_coeffs(f: TruncSeries, fn) -> TruncSeries:
    out = {}
    for m, c in f.terms.items():
        s = fn(c)
        if s:
            out[m] = s
    return TruncSeries(f.rd, out, f.ceiling, f.depth)


# serialization and display


def _exp_key(m):
    return tuple(m)


def series_to_json(f: TruncSeries) -> dict:
    return {
        "schema": 1,
        "ceiling": list(f.ceiling) if f.ceiling is not None else None,
        "depth": "exact" if f.depth is None else f.depth,
        "terms": [{"exp": list(m), "coeff": c.to_json()}
                  for m, c in sorted(f.terms.items(), key=lambda kv: _exp_key(kv[0]))],
    }


def series_from_json(rd: RootDatum, data: dict) -> TruncSeries:
    vars = rd.vars
    terms = {}
    for t in data["terms"]:
        c = ParamCoeff.from_json(t["coeff"])
        terms[tuple(t["exp"])] = c
    depth = None if data["depth"] == "exact" else int(data["depth"])
    ceiling = tuple(data["ceiling"]) if data["ceiling"] is not None else None
    del vars
    return TruncSeries(rd, terms, ceiling, depth)


def dumps(f: TruncSeries) -> str:
    return json.dumps(series_to_json(f), ensure_ascii=False, sort_keys=True)


MINUS = "\u2212"


def _fmt_exp(m) -> str:
    return "e^{(" + ",".join(str(x).replace("-", MINUS) for x in m) + ")}"


def _fmt_coeff(c: ParamCoeff) -> str:
    s = str(c).replace(" - ", MINUS).replace(" + ", "+").replace("-", MINUS)
    return f"({s})" if len(c.terms) > 1 else s


def format_series(f: TruncSeries) -> str:
    """Pretty form such as ``q·e^{(1)} + (q−1)·e^{(0)}``, by depth then exponent."""
    if not f.terms:
        return "0"
    parts = []
    for m, c in f.sorted_items():
        cs = _fmt_coeff(c)
        neg = cs.startswith(MINUS)
        if neg:
            cs = cs[1:]
        body = _fmt_exp(m) if cs == "1" else f"{cs}·{_fmt_exp(m)}"
        parts.append((MINUS if neg else "+", body))
    s = (MINUS if parts[0][0] == MINUS else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def total_coefficient(f: TruncSeries):
    """Sum of all coefficients (evaluation at e^mu -> 1)."""
    acc = ParamCoeff.zero(f.rd.vars)
    for c in f.terms.values():
        acc = acc + c
    return acc


@dataclass(eq=False)
class GroupSeries:
    """Finite sum  sum_v f_v [v]  with f_v truncated series of ceiling 0."""

    rd: RootDatum
    comps: dict
    length_bound: int | None
    depth: int

    def component(self, v: WeylElt) -> TruncSeries:
        zero = (0,) * self.rd.lattice_dim
        return self.comps.get(v, TruncSeries(self.rd, {}, zero, self.depth))

    def __add__(self, other: "GroupSeries") -> "GroupSeries":
        out = dict(self.comps)
        for v, f in other.comps.items():
            out[v] = series_add(out[v], f) if v in out else f
        out = {v: f for v, f in out.items() if f.terms}
        lb = None if self.length_bound is None or other.length_bound is None \
            else min(self.length_bound, other.length_bound)
        return GroupSeries(self.rd, out, lb, min(self.depth, other.depth))

    def scale(self, c) -> "GroupSeries":
        return GroupSeries(self.rd, {v: series_scale(f, c) for v, f in self.comps.items()},
                           self.length_bound, self.depth)

    def support(self) -> list:
        return sorted(self.comps, key=lambda v: (v.length, v.word))

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "length_bound": self.length_bound,
            "depth": self.depth,
            "components": [{"word": [i + 1 for i in v.word], "series": series_to_json(self.comps[v])}
                           for v in self.support()],
        }
