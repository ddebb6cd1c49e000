"""Delta, its Weyl twists, Gamma, the multiplier m_sigma and Hall-Littlewood series.

Everything is computed at a fixed depth N.  Length cutoffs default to 2N,
which is exact by the support bounds on the coefficients of H_w.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dl_operators import DLContext, dl_apply_Hw, hw_group_element, windowed_images
from .root_datum import (RootDatum, RootDatumError, WeylElt, inversion_coroots, min_coset_reps,
                         parabolic_ball, poincare_series, positive_real_coroots, stabilizer_indices,
                         weyl_ball)
from .series import (GroupSeries, TruncSeries, first_difference, invert_unit, series_add, series_mul,
                     series_scale, series_shift, truncate)


class StabilizationError(RuntimeError):
    pass


@dataclass
class CherednikEntry:
    word: tuple
    passed: bool
    slack: int
    first_difference: tuple | None = None


@dataclass
class CherednikReport:
    depth: int
    length_bound: int
    cutoff: int
    entries: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "depth": self.depth,
            "length_bound": self.length_bound,
            "cutoff": self.cutoff,
            "passed": self.passed,
            "entries": [{"word": [i + 1 for i in e.word], "passed": e.passed, "slack": e.slack,
                         "first_difference": list(e.first_difference) if e.first_difference else None}
                        for e in self.entries],
        }


class SymContext:
    def __init__(self, rd: RootDatum, N: int, dl: DLContext | None = None, adaptive: bool = False):
        if N < 0:
            raise ValueError("depth must be >= 0")
        self.rd = rd
        self.N = N
        self.L = 2 * N
        self.dl = dl if dl is not None else DLContext(rd)
        self.adaptive = adaptive
        self._delta = None
        self._gamma = None
        self._twist: dict = {}
        self._psum: dict = {}
        self._inv: dict = {}

    @property
    def zero(self) -> tuple:
        return (0,) * self.rd.lattice_dim

    def unit(self) -> TruncSeries:
        return TruncSeries(self.rd, {self.zero: self.rd.one()}, self.zero, self.N)

    # Delta and its twists

    def delta(self) -> TruncSeries:
        if self._delta is None:
            N = self.N
            acc = self.unit()
            if N >= 1:
                for beta in positive_real_coroots(self.rd, N):
                    neg = tuple(-x for x in beta.coords)
                    factor = series_scale(self.dl.c(neg, N, beta.class_index), self.rd.sigma(beta.class_index))
                    acc = truncate(series_mul(acc, factor), N)
            self._delta = acc
        return self._delta

    def delta_inverse(self) -> TruncSeries:
        if "delta" not in self._inv:
            self._inv["delta"] = invert_unit(self.delta(), self.N)
        return self._inv["delta"]

    def twist_quotient(self, beta, cls: int) -> TruncSeries:
        """c(beta) / c(-beta) through depth N (leading term sigma^2)."""
        N = self.N
        neg = tuple(-x for x in beta)
        return truncate(series_mul(self.dl.c(beta, N, cls), invert_unit(self.dl.c(neg, N, cls), N)), N)

    def delta_twist(self, w: WeylElt) -> TruncSeries:
        if w.matrix not in self._twist:
            acc = self.delta()
            for beta in inversion_coroots(self.rd, w):
                acc = truncate(series_mul(acc, self.twist_quotient(beta.coords, beta.class_index)), self.N)
            self._twist[w.matrix] = acc
        return self._twist[w.matrix]

    # P_sigma and Gamma

    def p_sigma(self, cutoff: int) -> GroupSeries:
        """sum_{l(w) <= cutoff} sigma_w H_w, truncated at depth N."""
        if cutoff not in self._psum:
            rd = self.rd
            acc = GroupSeries(rd, {}, cutoff, self.N)
            for w in weyl_ball(rd, cutoff):
                acc = acc + hw_group_element(self.dl, w, self.N).scale(self.dl.sigma_w(w))
            acc.length_bound = cutoff
            self._psum[cutoff] = acc
        return self._psum[cutoff]

    def coefficient(self, v: WeylElt, cutoff: int | None = None) -> TruncSeries:
        """C_v: the [v]-coefficient of P_sigma, exact through depth N."""
        cutoff = self.L + v.length if cutoff is None else cutoff
        return self.p_sigma(cutoff).component(v)

    def gamma(self) -> TruncSeries:
        if self._gamma is None:
            e = self.rd.identity()
            g = self.coefficient(e)
            if self.adaptive:
                g = self._stabilize(lambda L: self.coefficient(e, L), self.L, g)
            self._gamma = g
        return self._gamma

    def gamma_inverse(self) -> TruncSeries:
        if "gamma" not in self._inv:
            self._inv["gamma"] = invert_unit(self.gamma(), self.N)
        return self._inv["gamma"]

    def _stabilize(self, compute, start: int, first: TruncSeries) -> TruncSeries:
        prev, L, stable = first, start, 0
        while stable < 2:
            L += 2
            cur = compute(L)
            if first_difference(prev, cur, self.N) is None:
                stable += 1
            else:
                stable = 0
            prev = cur
        if first_difference(first, prev, self.N) is not None:
            raise StabilizationError(f"cutoff {start} is not stable at depth {self.N}")
        return first

    def m_sigma(self) -> TruncSeries:
        return truncate(series_mul(self.gamma(), self.delta_inverse()), self.N)

    # images of e^lambda

    def check_dominant(self, lam) -> tuple:
        lam = self.rd.check_vector(lam, "lambda")
        if not self.rd.is_dominant(lam):
            raise RootDatumError(f"lambda={lam} is not dominant")
        return lam

    def p_lambda_sigma(self, lam, cutoff: int | None = None) -> TruncSeries:
        """sum over minimal coset reps w, l(w) <= cutoff, of sigma_w H_w(e^lam), to depth N."""
        lam = self.check_dominant(lam)
        first = self._p_lambda(lam, self.L if cutoff is None else cutoff)
        if self.adaptive and cutoff is None:
            return self._stabilize(lambda L: self._p_lambda(lam, L), self.L, first)
        return first

    def _p_lambda(self, lam, cutoff: int) -> TruncSeries:
        reps = min_coset_reps(self.rd, lam, cutoff)
        imgs = windowed_images(self.dl, lam, reps, self.N, cutoff)
        return _window_sum(self.rd, imgs.values(), lam, self.N)

    def p_sigma_on(self, lam, cutoff: int | None = None) -> TruncSeries:
        """sum over all w with l(w) <= cutoff of sigma_w H_w(e^lam), to depth N."""
        lam = self.check_dominant(lam)
        cutoff = self.L if cutoff is None else cutoff
        imgs = windowed_images(self.dl, lam, weyl_ball(self.rd, cutoff), self.N, cutoff)
        return _window_sum(self.rd, imgs.values(), lam, self.N)

    def stabilizer_sum(self, lam, D: int) -> TruncSeries:
        """sum over w in W_lam, l(w) <= D, of sigma_w H_w(e^lam) (exact)."""
        lam = self.check_dominant(lam)
        elems, _ = parabolic_ball(self.rd, stabilizer_indices(self.rd, lam), D)
        acc = TruncSeries(self.rd, {}, lam, None)
        for w in elems:
            acc = series_add(acc, series_scale(dl_apply_Hw(self.dl, w, lam), self.dl.sigma_w(w)))
        return acc

    def h_lambda(self, lam) -> TruncSeries:
        """H_lambda by the quotient route P^lambda(e^lambda) Delta Gamma^{-1}."""
        p = self.p_lambda_sigma(lam)
        out = series_mul(series_mul(p, self.delta()), self.gamma_inverse())
        return truncate(out, self.N, lam)

    def j_sigma_regular(self, lam) -> TruncSeries:
        lam = self.check_dominant(lam)
        if stabilizer_indices(self.rd, lam):
            raise RootDatumError(f"lambda={lam} is not regular")
        return self._orbit_sum(lam, weyl_ball(self.rd, self.N), [self.rd.identity()])

    def h_lambda_orbit(self, lam, max_stabilizer_length: int = 64) -> TruncSeries:
        """H_lambda as the twisted orbit sum divided by W_lam(sigma^2); needs W_lam finite."""
        lam = self.check_dominant(lam)
        J = stabilizer_indices(self.rd, lam)
        stab, finite = parabolic_ball(self.rd, J, max_stabilizer_length)
        if not finite:
            raise RootDatumError(f"stabilizer of {lam} is infinite (or longer than {max_stabilizer_length})")
        reps = min_coset_reps(self.rd, lam, self.N)
        total = self._orbit_sum(lam, reps, stab)
        if len(stab) == 1:
            return total
        poinc = poincare_series(self.rd, J, max_stabilizer_length).value
        terms = {m: c.exact_div(poinc) for m, c in total.terms.items()}
        return TruncSeries(self.rd, terms, total.ceiling, total.depth)

    def _orbit_sum(self, lam, reps, stab) -> TruncSeries:
        rd, N = self.rd, self.N
        limit = N * rd.height_den
        acc = TruncSeries(rd, {}, lam, N)
        for u in reps:
            mu = rd.act(u, lam)
            if rd.hscaled(lam) - rd.hscaled(mu) > limit:
                continue
            for v in stab:
                uv = rd._weyl.element(rd.matmul(u.matrix, v.matrix), u.length + v.length)
                term = series_shift(self.delta_twist(uv), mu)
                acc = series_add(acc, term)
        return truncate(acc, N, lam)

    # checks

    def cherednik_check(self, Lv: int) -> CherednikReport:
        N = self.N
        cutoff = self.L + Lv
        report = CherednikReport(N, Lv, cutoff)
        gamma = self.gamma()
        delta = self.delta()
        for v in weyl_ball(self.rd, Lv):
            cv = self.coefficient(v, cutoff)
            lhs = truncate(series_mul(cv, delta), N)
            rhs = truncate(series_mul(gamma, self.delta_twist(v)), N)
            diff = first_difference(lhs, rhs, N)
            report.entries.append(CherednikEntry(v.word, diff is None, 0, diff))
        return report

    def delta_im(self, imaginary) -> TruncSeries:
        """prod ((1 - sigma^2 e^{-a}) / (1 - e^{-a}))^m over user-supplied imaginary coroots."""
        rd, N = self.rd, self.N
        if not rd.equal_parameters():
            raise RootDatumError("delta_im requires equal parameters")
        table = {}
        for coords, mult in imaginary:
            coords = rd.check_vector(coords, "imaginary coroot")
            if not isinstance(mult, int) or mult < 0:
                raise RootDatumError(f"multiplicity of {coords} must be a nonnegative integer")
            x = rd.coroot_coords(coords)
            if x is None or any(c < 0 for c in x) or not any(x):
                raise RootDatumError(f"{coords} is not a positive element of the coroot lattice")
            table[coords] = mult
        for coords, mult in table.items():
            for i in range(rd.index_count):
                image = tuple(c - rd.pair(i, coords) * rd.C[k][i] for k, c in enumerate(coords))
                x = rd.coroot_coords(image)
                if sum(x) <= N and table.get(image, mult) != mult:
                    raise RootDatumError(f"multiplicities of {coords} and its translate {image} differ")
                if sum(x) <= N and image not in table and mult:
                    raise RootDatumError(f"W-translate {image} of {coords} is missing")
        acc = self.unit()
        s2 = rd.sigma(0, 2)
        for coords, mult in sorted(table.items()):
            h = rd.hscaled(coords)
            terms = {self.zero: rd.one()}
            k = 1
            while k * h <= N * rd.height_den:
                terms[tuple(-k * c for c in coords)] = rd.one() - s2
                k += 1
            factor = TruncSeries(rd, terms, self.zero, N)
            for _ in range(mult):
                acc = truncate(series_mul(acc, factor), N)
        return acc


def _window_sum(rd: RootDatum, polys, lam, N: int) -> TruncSeries:
    acc = TruncSeries(rd, {}, lam, N)
    for f in polys:
        acc = series_add(acc, truncate(f, N, lam))
    return acc


def poincare_factor_check(ctx: SymContext, lam, sigma_degree: int = 8):
    """Compare sum_{l(w)<=2N} sigma_w H_w(e^lam) with W_lam(sigma^2) P^lam(e^lam)."""
    rd = ctx.rd
    lam = ctx.check_dominant(lam)
    J = stabilizer_indices(rd, lam)
    poinc = poincare_series(rd, J, max(ctx.L, sigma_degree)).value
    lhs = ctx.p_sigma_on(lam)
    rhs = truncate(series_scale(ctx.p_lambda_sigma(lam), poinc), ctx.N, lam)
    names = rd.vars

    def cut(f):
        terms = {m: c.truncate_degree(names, sigma_degree) for m, c in f.terms.items()}
        return TruncSeries(rd, {m: c for m, c in terms.items() if c}, f.ceiling, f.depth)

    return first_difference(cut(lhs), cut(rhs), ctx.N)


def m_sigma_witness(ctx: SymContext, h0: TruncSeries | None = None) -> bool:
    """m_sigma * H_0 = 1 through depth N."""
    if h0 is None:
        h0 = ctx.h_lambda((0,) * ctx.rd.lattice_dim)
    prod = truncate(series_mul(ctx.m_sigma(), h0), ctx.N)
    return first_difference(prod, ctx.unit(), ctx.N) is None

