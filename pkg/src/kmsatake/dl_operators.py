"""Demazure-Lusztig operators.

Two regimes are used.  Applied to e^lam, ``H_i`` acts exactly on Laurent
polynomials:

    H_i(f) = sigma_i * r_i(f) + b(sigma_i, sigma'_i; e^{alpha_i^vee}) * (f - r_i(f)).

As group-algebra elements, ``H_w = sum_v f_v [v]`` is built by right
multiplication with ``h_i = c(alpha_i^vee)[r_i] + b(alpha_i^vee)[e]`` and each
``f_v`` is truncated at depth N (support in -Q_+^vee).
"""

from __future__ import annotations

from typing import Mapping

from .coeffs import ParamCoeff
from .root_datum import RootDatum, WeylElt, weyl_ball
from .series import (GroupSeries, TruncSeries, exact_poly, expand_b, expand_c,
                     series_add, series_monomial, series_mul)


class DLContext:
    """Caches for one root datum and one choice of operator parameters.

    ``params`` optionally substitutes the class variables inside the operators
    (used for the q-specialized recursion).
    """

    def __init__(self, rd: RootDatum, params: Mapping | None = None):
        self.rd = rd
        self.params = dict(params) if params else None
        self._string: dict = {}
        self._bc: dict = {}
        self._hw: dict = {}
        self._hw_poly: dict = {}

    def sigma(self, i: int) -> ParamCoeff:
        s = self.rd.sigma(i)
        return s.substitute(self.params) if self.params else s

    def sigma_prime(self, i: int) -> ParamCoeff:
        s = self.rd.sigma_prime(i)
        return s.substitute(self.params) if self.params else s

    def sigma_w(self, w: WeylElt) -> ParamCoeff:
        s = self.rd.sigma_w(w)
        return s.substitute(self.params) if self.params else s

    def b(self, beta, N: int, i: int) -> TruncSeries:
        key = ("b", tuple(beta), N, i)
        if key not in self._bc:
            self._bc[key] = expand_b(self.rd, beta, N, cls=i, params=self.params)
        return self._bc[key]

    def c(self, beta, N: int, i: int) -> TruncSeries:
        key = ("c", tuple(beta), N, i)
        if key not in self._bc:
            self._bc[key] = expand_c(self.rd, beta, N, cls=i, params=self.params)
        return self._bc[key]

    def string(self, i: int, m: int) -> list:
        """H_i(e^mu) = sum_k coeff_k e^{mu + k alpha_i^vee} for alpha_i(mu) = m."""
        key = (i, m)
        if key not in self._string:
            self._string[key] = _string_coeffs(self.sigma(i), self.sigma_prime(i), m)
        return self._string[key]


def _string_coeffs(s: ParamCoeff, t: ParamCoeff, m: int) -> list:
    a = s - s.inverse()
    ap = t - t.inverse()
    # numerator (a + a' z)(1 - z^{-m}) as {degree: coeff}
    num: dict = {}

    def acc(d, c):
        v = num.get(d)
        v = c if v is None else v + c
        if v:
            num[d] = v
        else:
            num.pop(d, None)

    acc(0, a)
    acc(1, ap)
    acc(-m, -a)
    acc(1 - m, -ap)
    quot: dict = {}
    rem = dict(num)
    low = min(num) if num else 0
    # divide by (1 - z^2) from the top degree down
    while rem and max(rem) - 2 >= low:
        top = max(rem)
        c = rem.pop(top)
        qd = top - 2
        quot[qd] = quot.get(qd, ParamCoeff.zero(s.vars)) - c
        v = rem.get(qd)
        v = c if v is None else v + c
        if v:
            rem[qd] = v
        else:
            rem.pop(qd, None)
    if rem:
        raise AssertionError(f"Demazure-Lusztig division left a remainder for m={m}; "
                             "parameter classes are inconsistent with the lattice")
    quot[-m] = quot.get(-m, ParamCoeff.zero(s.vars)) + s
    return sorted((k, c) for k, c in quot.items() if c)


def dl_apply_Hi(ctx: DLContext, i: int, f: TruncSeries) -> TruncSeries:
    if not f.exact:
        raise ValueError("dl_apply_Hi needs an exact Laurent polynomial")
    rd = ctx.rd
    if not 0 <= i < rd.index_count:
        raise IndexError(f"index {i} out of range")
    col = rd.coroots[i]
    R = rd.R[i]
    d = rd.lattice_dim
    out: dict = {}
    for mu, c in f.terms.items():
        m = sum(R[k] * mu[k] for k in range(d))
        for k, q in ctx.string(i, m):
            nu = tuple(mu[j] + k * col[j] for j in range(d))
            p = c * q
            s = out.get(nu)
            s = p if s is None else s + p
            if s:
                out[nu] = s
            else:
                del out[nu]
    return exact_poly(rd, out)


def dl_apply_word(ctx: DLContext, word, f: TruncSeries) -> TruncSeries:
    """Apply H_{i_1} ... H_{i_k}, rightmost letter first."""
    for i in reversed(tuple(word)):
        f = dl_apply_Hi(ctx, i, f)
    return f


def dl_apply_Hw(ctx: DLContext, w: WeylElt, lam) -> TruncSeries:
    """H_w(e^lam) as an exact Laurent polynomial, memoized by word suffix."""
    rd = ctx.rd
    lam = rd.check_vector(lam, "lambda")
    word = w.word
    j = len(word)
    f = series_monomial(rd, lam, ParamCoeff.one(rd.vars))
    for s in range(len(word)):
        hit = ctx._hw_poly.get((word[s:], lam))
        if hit is not None:
            j, f = s, hit
            break
    for k in range(j - 1, -1, -1):
        f = dl_apply_Hi(ctx, word[k], f)
        ctx._hw_poly[(word[k:], lam)] = f
    return f


def right_mul_h(ctx: DLContext, g: GroupSeries, i: int, N: int) -> GroupSeries:
    """(sum f_v [v]) h_i = sum f_v c(v a_i)[v r_i] + f_v b(v a_i)[v]."""
    rd = ctx.rd
    out: dict = {}

    def put(v, f):
        if not f.terms:
            return
        out[v] = series_add(out[v], f) if v in out else f

    for v, f in g.comps.items():
        beta = rd.act(v, rd.coroots[i])
        put(rd.mul_simple_right(v, i), series_mul(f, ctx.c(beta, N, i)))
        put(v, series_mul(f, ctx.b(beta, N, i)))
    out = {v: f for v, f in out.items() if f.terms}
    lb = None if g.length_bound is None else g.length_bound + 1
    return GroupSeries(rd, out, lb, N)


def hw_group_element(ctx: DLContext, w: WeylElt, N: int) -> GroupSeries:
    if N < 0:
        raise ValueError("N must be >= 0")
    rd = ctx.rd
    key = (w.matrix, N)
    if key in ctx._hw:
        return ctx._hw[key]
    if w.length == 0:
        zero = (0,) * rd.lattice_dim
        g = GroupSeries(rd, {w: TruncSeries(rd, {zero: ParamCoeff.one(rd.vars)}, zero, N)}, 0, N)
    else:
        # canonical words are prefix-closed
        parent = rd.element_from_word(w.word[:-1])
        g = right_mul_h(ctx, hw_group_element(ctx, parent, N), w.word[-1], N)
    ctx._hw[key] = g
    return g


def apply_group_element(g: GroupSeries, lam) -> TruncSeries:
    """Pair [v] with e^{v lam}: sum_v f_v e^{v lam}, truncated to the common window."""
    rd = g.rd
    out = None
    for v, f in g.comps.items():
        mu = rd.act(v, lam)
        term = series_mul(f, series_monomial(rd, mu))
        out = term if out is None else series_add(out, term)
    if out is None:
        return TruncSeries(rd, {}, tuple(lam), g.depth)
    return out


class WindowPruner:
    """Drops terms that cannot reach the window ht(lam - nu) <= N.

    H_u(e^mu) is supported in the union of v(mu) - Q_+^vee over v <= u, so a
    term e^mu may be dropped once ht(v mu) < ht(lam) - N for every v of length
    at most the remaining budget.
    """

    def __init__(self, rd: RootDatum, lam, N: int):
        self.rd = rd
        self.threshold = rd.hscaled(lam) - N * rd.height_den
        self._cov: dict = {}

    def covectors(self, r: int) -> list:
        if r not in self._cov:
            rd = self.rd
            d = rd.lattice_dim
            h = rd.height_vec
            cov = {tuple(sum(h[k] * v.matrix[k * d + c] for k in range(d)) for c in range(d))
                   for v in weyl_ball(rd, r)}
            self._cov[r] = sorted(cov)
        return self._cov[r]

    def prune(self, f: TruncSeries, r: int) -> TruncSeries:
        cov = self.covectors(r)
        t = self.threshold
        keep = {}
        for mu, c in f.terms.items():
            for cv in cov:
                if sum(a * b for a, b in zip(cv, mu)) >= t:
                    keep[mu] = c
                    break
        return TruncSeries(f.rd, keep, f.ceiling, None)


def windowed_images(ctx: DLContext, lam, elements, N: int, L: int, base=None) -> dict:
    """sigma_w H_w(e^lam) for each w in ``elements``, correct within depth N of lam.

    ``elements`` must be listed by increasing length and contain r_i w whenever it
    contains w and r_i is a left descent of w (Weyl balls and minimal coset
    representatives qualify); L bounds their lengths.
    """
    rd = ctx.rd
    lam = tuple(lam)
    pruner = WindowPruner(rd, lam, N)
    c0 = base if base is not None else ParamCoeff.one(rd.vars)
    out: dict = {}
    for w in elements:
        if w.length == 0:
            f = series_monomial(rd, lam, c0)
        else:
            i = w.word[0]
            parent = rd.mul_simple_left(i, w)
            g = out[parent]
            f = dl_apply_Hi(ctx, i, g)
            f = TruncSeries(rd, {m: c * ctx.sigma(i) for m, c in f.terms.items()}, f.ceiling, None)
        out[w] = pruner.prune(f, L - w.length)
    return out
