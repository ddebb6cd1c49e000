"""Satake images of c_lambda, Hall-Littlewood series and finite-type characters.

Two independent routes produce the same truncated series:

* ``recursion``: J_e = delta^{1/2}(lam) e^lam and J_w = T_i(J_{w'}) for
  w = r_i w', where T_i = sigma_i H_i with sigma_c -> q_c^{-1/2}; then sum
  J_w over minimal coset representatives of length <= 2N.
* ``closed``: delta^{1/2}(lam) * m_sigma * H_lambda after the same
  specialization, with H_lambda the Delta-twisted orbit sum divided by
  W_lam(sigma^2) whenever the stabilizer is finite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Mapping

import sympy

from .coeffs import ParamCoeff
from .dl_operators import DLContext, dl_apply_Hi, dl_apply_Hw, windowed_images
from .root_datum import (RootDatum, RootDatumError, WeylElt, is_min_coset_rep, min_coset_reps,
                         parabolic_ball, stabilizer_indices)
from .series import (TruncSeries, exact_poly, first_difference, map_coeffs, rename_square,
                     series_add, series_monomial, series_mul, series_scale, series_to_json, specialize,
                     truncate)
from .symmetrizers import SymContext


class RouteMismatch(AssertionError):
    def __init__(self, exponent, closed, recursion):
        super().__init__(f"routes disagree at e^{exponent}: closed={closed}, recursion={recursion}")
        self.exponent = exponent


def q_name(class_var: str) -> str:
    """'σ' -> '√q', 'σ1' -> '√q1', "σ'1" -> "√q'1"."""
    return "√q" + class_var[1:]


def q_assignment(rd: RootDatum) -> dict:
    """sigma_c -> (sqrt q_c)^{-1} for every class variable."""
    return {c: ParamCoeff.var(q_name(c), -1) for c in rd.vars}


@dataclass(frozen=True)
class DeltaHalf:
    value: ParamCoeff | None  # None when left symbolic
    exponent: object  # Fraction (equal parameters) or {q-name: Fraction}

    def to_json(self):
        if self.value is None:
            return None
        if isinstance(self.exponent, dict):
            return {k: str(v) for k, v in sorted(self.exponent.items())}
        return str(self.exponent)


def delta_half(rd: RootDatum, lam) -> DeltaHalf:
    lam = rd.check_vector(lam, "lambda")
    if rd.equal_parameters():
        e = rd.rho_value(lam)
        name = q_name(rd.vars[0])
        return DeltaHalf(ParamCoeff.var(name, int(2 * e)), e)
    x = rd.coroot_coords(lam)
    if x is None:
        raise RootDatumError("delta^{1/2} is undefined off the coroot lattice for unequal parameters")
    exps: dict = {}
    for i, a in enumerate(x):
        for nm in (rd.sigma_name(i), rd.sigma_prime_name(i)):
            qn = q_name(nm)
            exps[qn] = exps.get(qn, 0) + a
    value = ParamCoeff.monomial(exps)
    return DeltaHalf(value, {k[1:]: Fraction(v, 2) for k, v in exps.items() if v})


@dataclass
class SatakeResult:
    series: TruncSeries
    route: str
    delta_half: DeltaHalf | None
    depth: int

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "route": self.route,
            "delta_half_exponent": self.delta_half.to_json() if self.delta_half else None,
            "delta_half_symbolic": self.delta_half is None or self.delta_half.value is None,
            "series": series_to_json(self.series),
        }


def _perfect_square(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = isqrt(x.numerator), isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def evaluate_q(f, values: Mapping[str, object]):
    """Numeric q post-pass: sqrt(q)^e -> q^{e//2} * sqrt(q)^{e mod 2} unless q is a square."""
    if isinstance(f, TruncSeries):
        return map_coeffs(f, lambda c: evaluate_q(c, values))
    pc: ParamCoeff = f
    subs = {}
    for name, val in values.items():
        var = "√" + name
        if var in pc.vars:
            subs[var] = Fraction(val)
    if not subs:
        return pc
    idx = {pc.vars.index(v): q for v, q in subs.items()}
    keep = tuple(v for v in pc.vars if v not in subs or _perfect_square(subs[v]) is None)
    out: dict = {}
    for m, c in pc.terms.items():
        coeff = Fraction(c)
        e = list(m)
        for k, q in idx.items():
            root = _perfect_square(q)
            if root is not None:
                coeff *= root ** e[k]
                e[k] = 0
            else:
                coeff *= q ** (e[k] // 2)
                e[k] = e[k] % 2
        key = tuple(e[pc.vars.index(v)] for v in keep)
        out[key] = out.get(key, 0) + coeff
    return ParamCoeff(out, keep)


def _parse_q(rd: RootDatum, q) -> dict | None:
    if q is None or q == "symbolic":
        return None
    names = [q_name(c)[1:] for c in rd.vars]
    if isinstance(q, Mapping):
        missing = [n for n in names if n not in q]
        if missing:
            raise ValueError(f"numeric q missing values for {missing}")
        return {n: Fraction(q[n]) for n in names}
    return {n: Fraction(q) for n in names}


class SatakeEngine:
    """Shared caches for the symbolic and q-specialized computations on one datum and depth."""

    def __init__(self, rd: RootDatum, N: int, adaptive: bool = False):
        self.rd = rd
        self.N = N
        self.sym = SymContext(rd, N, adaptive=adaptive)
        self.qmap = q_assignment(rd)
        self.dlq = DLContext(rd, params=self.qmap)
        self._j: dict = {}

    def spec(self, f):
        return specialize(f, self.qmap)

    def delta_half(self, lam) -> DeltaHalf:
        try:
            return delta_half(self.rd, lam)
        except RootDatumError:
            return DeltaHalf(None, None)

    def _base(self, lam) -> TruncSeries:
        dh = self.delta_half(lam)
        c = dh.value if dh.value is not None else ParamCoeff.one()
        return series_monomial(self.rd, lam, c)

    def j_w(self, w: WeylElt, lam, check: bool = True) -> TruncSeries:
        rd = self.rd
        lam = rd.check_vector(lam, "lambda")
        if not rd.is_dominant(lam):
            raise RootDatumError(f"lambda={lam} is not dominant")
        if not is_min_coset_rep(rd, w, lam):
            raise RootDatumError(f"{w} is not a minimal coset representative for {lam}")
        word = w.word
        start = len(word)
        f = self._base(lam)
        for s in range(len(word)):
            hit = self._j.get((word[s:], lam))
            if hit is not None:
                start, f = s, hit
                break
        for k in range(start - 1, -1, -1):
            i = word[k]
            f = series_scale(dl_apply_Hi(self.dlq, i, f), self.dlq.sigma(i))
            self._j[(word[k:], lam)] = f
        if check:
            dh = self.delta_half(lam)
            ref = self.spec(series_scale(dl_apply_Hw(self.sym.dl, w, lam), self.rd.sigma_w(w)))
            if dh.value is not None:
                ref = series_scale(ref, dh.value)
            if first_difference(exact_poly(rd, f.terms), exact_poly(rd, ref.terms), 10 ** 9,
                                ceiling=lam) is not None:
                raise AssertionError(f"J_{w} disagrees with the specialized H_w(e^lambda)")
        return f

    def recursion(self, lam) -> TruncSeries:
        """sum of J_w over minimal coset reps with l(w) <= 2N, evaluated in the depth-N window."""
        rd, N = self.rd, self.N
        lam = tuple(lam)
        dh = self.delta_half(lam)
        base = dh.value if dh.value is not None else None
        imgs = windowed_images(self.dlq, lam, min_coset_reps(rd, lam, 2 * N), N, 2 * N, base=base)
        acc = TruncSeries(rd, {}, lam, N)
        for f in imgs.values():
            acc = series_add(acc, truncate(f, N, lam))
        return acc

    def hall_littlewood_sigma(self, lam) -> TruncSeries:
        """H_lambda in sigma, by the orbit route when W_lam is finite, else the quotient route."""
        lam = self.sym.check_dominant(lam)
        J = stabilizer_indices(self.rd, lam)
        _, finite = parabolic_ball(self.rd, J, 64)
        if finite:
            return self.sym.h_lambda_orbit(lam)
        return self.sym.h_lambda(lam)

    def closed(self, lam) -> TruncSeries:
        N = self.N
        h = self.hall_littlewood_sigma(lam)
        m = self.sym.m_sigma()
        out = truncate(series_mul(self.spec(m), self.spec(h)), N, lam)
        dh = self.delta_half(lam)
        if dh.value is not None:
            out = series_scale(out, dh.value)
        return out

    def satake(self, lam, route: str = "both", q="symbolic") -> SatakeResult:
        lam = self.sym.check_dominant(lam)
        qvals = _parse_q(self.rd, q)
        dh = self.delta_half(lam)
        if route == "recursion":
            series = self.recursion(lam)
        elif route == "closed":
            series = self.closed(lam)
        elif route == "both":
            series = self.closed(lam)
            rec = self.recursion(lam)
            diff = first_difference(series, rec, self.N)
            if diff is not None:
                raise RouteMismatch(diff, series.terms.get(diff), rec.terms.get(diff))
        else:
            raise ValueError(f"unknown route {route!r}")
        if qvals is not None:
            series = evaluate_q(series, qvals)
        return SatakeResult(series, "closed" if route == "both" else route,
                            dh if dh.value is not None else None, self.N)


# functional API


def j_w(rd: RootDatum, w: WeylElt, lam, q="symbolic") -> TruncSeries:
    eng = SatakeEngine(rd, 0)
    out = eng.j_w(w, lam)
    qvals = _parse_q(rd, q)
    return evaluate_q(out, qvals) if qvals else out


def satake(rd: RootDatum, lam, N: int = 4, route: str = "both", q="symbolic",
           adaptive: bool = False) -> SatakeResult:
    return SatakeEngine(rd, N, adaptive=adaptive).satake(lam, route, q)


def hall_littlewood(rd: RootDatum, lam, N: int = 4, ctx: SymContext | None = None) -> TruncSeries:
    """H_lambda with sigma^2 renamed to t (equal parameters only)."""
    if not rd.equal_parameters():
        raise RootDatumError("Hall-Littlewood series need equal parameters")
    ctx = ctx if ctx is not None else SymContext(rd, N)
    return rename_square(ctx.h_lambda(lam), rd.vars[0], "t")


def character_t0(rd: RootDatum, lam, N: int = 4, ctx: SymContext | None = None) -> TruncSeries:
    hl = hall_littlewood(rd, lam, N, ctx)
    return specialize_t(hl, 0)


def specialize_t(f: TruncSeries, value) -> TruncSeries:
    def sub(c: ParamCoeff):
        return c.substitute({"t": value}) if "t" in c.vars else c
    return map_coeffs(f, sub)


def _rho_vee(rd: RootDatum) -> list:
    """rho^vee in Y (x) Q with alpha_i(rho^vee) = 1, taken in the span of the coroots."""
    n = rd.index_count
    At = sympy.Matrix(rd.cartan).T
    x = At.LUsolve(sympy.Matrix([1] * n))
    return [sum(Fraction(int(x[j].p), int(x[j].q)) * rd.C[k][j] for j in range(n))
            for k in range(rd.lattice_dim)]


def weyl_character(rd: RootDatum, lam, max_length: int = 64) -> TruncSeries:
    """Alternating orbit sum quotient; finite type only."""
    lam = rd.check_vector(lam, "lambda")
    if not rd.is_dominant(lam):
        raise RootDatumError(f"lambda={lam} is not dominant")
    if sympy.Matrix(rd.cartan).det() == 0:
        raise RootDatumError("Weyl character oracle needs an invertible Cartan matrix")
    elems, finite = parabolic_ball(rd, range(rd.index_count), max_length)
    if not finite:
        raise RootDatumError("Weyl group is not finite")
    d = rd.lattice_dim
    names = tuple(f"x{k:02d}" for k in range(d))
    rho = _rho_vee(rd)

    def alt(v):
        terms = {}
        for w in elems:
            img = [sum(w.matrix[r * d + c] * v[c] for c in range(d)) for r in range(d)]
            key = tuple(int(2 * x) for x in img)
            terms[key] = terms.get(key, 0) + (-1) ** w.length
        return ParamCoeff(terms, names)

    num = alt([Fraction(l) + r for l, r in zip(lam, rho)])
    den = alt(rho)
    quot = num.exact_div(den)
    out = {}
    for m, c in quot.terms.items():
        if any(x % 2 for x in m):
            raise ArithmeticError("character has non-lattice exponents")
        out[tuple(x // 2 for x in m)] = ParamCoeff.const(c, rd.vars)
    return exact_poly(rd, out)


__all__ = ["SatakeEngine", "SatakeResult", "DeltaHalf", "RouteMismatch", "delta_half", "j_w", "satake",
           "hall_littlewood", "character_t0", "weyl_character", "evaluate_q", "q_assignment", "q_name"]
