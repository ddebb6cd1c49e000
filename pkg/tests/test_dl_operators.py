import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kmsatake import ParamCoeff, min_coset_reps, weyl_ball
from kmsatake.dl_operators import (DLContext, apply_group_element, dl_apply_Hi, dl_apply_Hw, dl_apply_word,
                                   hw_group_element, windowed_images)
from kmsatake.root_datum import is_min_coset_rep
from kmsatake.series import expand_b, first_difference, series_add, series_monomial, series_mul, truncate

from conftest import datum
from oracles import dl_operator, to_sympy

s = ParamCoeff.var("σ")
a = s - s ** -1
RANK2 = ["a2", "b2", "g2", "affine_a1", "hyperbolic", "b2_auto"]
DATA = {name: datum(name) for name in RANK2 + ["a1"]}
CTX = {name: DLContext(rd) for name, rd in DATA.items()}


def mono(rd, mu, c=1):
    return series_monomial(rd, tuple(mu), ParamCoeff.coerce(c, rd.vars))


def lattice_vectors(d, lo=-3, hi=3):
    return st.lists(st.integers(lo, hi), min_size=d, max_size=d).map(tuple)


# examples


def test_m0_gives_sigma(a2):
    ctx = DLContext(a2)
    assert dl_apply_Hi(ctx, 0, mono(a2, (0, 2))).terms == {(0, 2): s}


def test_m1_gives_sigma_inverse(a2):
    ctx = DLContext(a2)
    mu = (1, 0)
    r = a2.act(a2.simple(0), mu)
    assert dl_apply_Hi(ctx, 0, mono(a2, mu)).terms == {r: s ** -1}


def test_m2_unequal(a1_unequal):
    rd = a1_unequal
    s0, t0 = rd.sigma(0), rd.sigma_prime(0)
    ctx = DLContext(rd)
    out = dl_apply_Hi(ctx, 0, mono(rd, (1,)))
    # sigma e^{-1} - (s - 1/s) e^{-1} - (s' - 1/s') e^{0}
    assert out.terms == {(-1,): s0 ** -1, (0,): -(t0 - t0 ** -1)}


def test_m2_against_expand_b(a1_unequal):
    rd = a1_unequal
    ctx = DLContext(rd)
    mu = (1,)
    exact = dl_apply_Hi(ctx, 0, mono(rd, mu))
    diff = series_add(mono(rd, mu), -mono(rd, (-1,)))
    lhs = series_add(series_mul(expand_b(rd, (1,), 6), diff), mono(rd, (-1,), rd.sigma(0)))
    assert first_difference(exact, lhs, 6, ceiling=(1,)) is None


def test_hw_identity_and_a1_s(a1):
    ctx = DLContext(a1)
    assert dl_apply_Hw(ctx, a1.identity(), (3,)).terms == {(3,): 1}
    assert dl_apply_Hw(ctx, a1.simple(0), (1,)).terms == {(-1,): s ** -1, (0,): -a}


def test_hw_group_element_a1(a1):
    ctx = DLContext(a1)
    e, r = a1.identity(), a1.simple(0)
    assert hw_group_element(ctx, e, 3).comps[e].terms == {(0,): 1}
    g = hw_group_element(ctx, r, 1)
    assert g.component(r).terms == {(0,): s, (-1,): a}
    assert g.component(e).terms == {(-1,): -a}


@pytest.mark.parametrize("name", RANK2)
def test_identity_component_has_no_constant(name):
    rd, ctx = DATA[name], CTX[name]
    zero = (0,) * rd.lattice_dim
    for w in weyl_ball(rd, 4)[1:]:
        f = hw_group_element(ctx, w, 3).component(rd.identity())
        assert zero not in f.terms


def test_cache_matches_fresh(a2):
    ctx = DLContext(a2)
    w = a2.element_from_word([0, 1, 0])
    first = hw_group_element(ctx, w, 3)
    again = hw_group_element(DLContext(a2), w, 3)
    assert {v: f.terms for v, f in first.comps.items()} == {v: f.terms for v, f in again.comps.items()}


def test_index_out_of_range(a2):
    with pytest.raises(IndexError):
        dl_apply_Hi(DLContext(a2), 2, mono(a2, (0, 0)))


# sympy oracle


@pytest.mark.parametrize("name", ["a1", "a2", "b2_auto", "affine_a1"])
@settings(max_examples=25)
@given(data=st.data())
def test_matches_rational_function_oracle(name, data):
    rd, ctx = DATA[name], CTX[name]
    mu = data.draw(lattice_vectors(rd.lattice_dim))
    i = data.draw(st.integers(0, rd.index_count - 1))
    sym = sympy.Symbol(rd.sigma_name(i), positive=True)
    symp = sympy.Symbol(rd.sigma_prime_name(i), positive=True)
    expect, _ = dl_operator(rd.R, rd.C, i, mu, sym, symp)
    got = dl_apply_Hi(ctx, i, mono(rd, mu))
    assert {m: sympy.expand(to_sympy(c)) for m, c in got.terms.items()} == expect


def test_a1_unequal_oracle(a1_unequal):
    rd = a1_unequal
    ctx = DLContext(rd)
    sym = sympy.Symbol(rd.sigma_name(0), positive=True)
    symp = sympy.Symbol(rd.sigma_prime_name(0), positive=True)
    for m in range(-4, 5):
        expect, _ = dl_operator(rd.R, rd.C, 0, (m,), sym, symp)
        got = dl_apply_Hi(ctx, 0, mono(rd, (m,)))
        assert {k: sympy.expand(to_sympy(c)) for k, c in got.terms.items()} == expect


# relations


@pytest.mark.parametrize("name", RANK2)
@settings(max_examples=100)
@given(data=st.data())
def test_quadratic_relation(name, data):
    rd, ctx = DATA[name], CTX[name]
    mu = data.draw(lattice_vectors(rd.lattice_dim))
    i = data.draw(st.integers(0, rd.index_count - 1))
    f = mono(rd, mu)
    h = dl_apply_Hi(ctx, i, f)
    lhs = dl_apply_Hi(ctx, i, h)
    si = rd.sigma(i)
    rhs = series_add(series_mul(h, mono(rd, (0,) * rd.lattice_dim, si - si ** -1)), f)
    assert lhs.terms == rhs.terms


@pytest.mark.parametrize("name, order", [("a2", 3), ("b2", 4), ("b2_auto", 4), ("g2", 6)])
@settings(max_examples=30)
@given(data=st.data())
def test_braid_relation(name, order, data):
    rd, ctx = DATA[name], CTX[name]
    mu = data.draw(lattice_vectors(rd.lattice_dim, -2, 2))
    w1 = [k % 2 for k in range(order)]
    w2 = [(k + 1) % 2 for k in range(order)]
    assert dl_apply_word(ctx, w1, mono(rd, mu)).terms == dl_apply_word(ctx, w2, mono(rd, mu)).terms


@pytest.mark.parametrize("name", ["a2", "affine_a1", "hyperbolic"])
@settings(max_examples=20)
@given(data=st.data())
def test_bernstein_lusztig_relation(name, data):
    rd, ctx = DATA[name], CTX[name]
    d = rd.lattice_dim
    lam = data.draw(lattice_vectors(d, -2, 2))
    mu = data.draw(lattice_vectors(d, -2, 2))
    i = data.draw(st.integers(0, rd.index_count - 1))
    N = 4
    neg = tuple(-x for x in lam)
    rneg = tuple(-x for x in rd.act(rd.simple(i), lam))
    f = mono(rd, mu)
    lhs = series_add(dl_apply_Hi(ctx, i, series_mul(mono(rd, neg), f)),
                     -series_mul(mono(rd, rneg), dl_apply_Hi(ctx, i, f)))
    poly = series_mul(series_add(mono(rd, neg), -mono(rd, rneg)), f)
    if not poly.terms:
        assert not lhs.terms
        return
    rhs = series_mul(expand_b(rd, rd.coroots[i], N), poly)
    assert first_difference(lhs, rhs, N, ceiling=rhs.ceiling) is None


# support bounds


@pytest.mark.parametrize("name", RANK2)
def test_group_element_support_bound(name):
    rd, ctx = DATA[name], CTX[name]
    N = 3
    for w in weyl_ball(rd, 5):
        g = hw_group_element(ctx, w, N)
        for v, f in g.comps.items():
            for m in f.terms:
                x = rd.coroot_coords(tuple(-c for c in m))
                assert x is not None and min(x) >= 0
                assert 2 * sum(x) >= w.length - v.length


@pytest.mark.parametrize("name, lam", [("a2", (0, 1)), ("a2", (1, 1)), ("affine_a1", (0, 0, 1)),
                                       ("hyperbolic", (1, 1)), ("g2", (1, 0))])
def test_parabolic_support_bound(name, lam):
    rd, ctx = DATA[name], CTX[name]
    reps = min_coset_reps(rd, lam, 5)
    for w in reps:
        f = dl_apply_Hw(ctx, w, lam)
        for m in f.terms:
            ok = False
            for v in reps:
                if v.length > w.length:
                    continue
                x = rd.coroot_coords(tuple(p - q for p, q in zip(rd.act(v, lam), m)))
                if x is not None and min(x) >= 0 and 2 * sum(x) >= w.length - v.length:
                    ok = True
                    break
            assert ok, (w, m)
            x = rd.coroot_coords(tuple(p - q for p, q in zip(lam, m)))
            assert x is not None and min(x) >= 0


@pytest.mark.parametrize("name, lam", [("a2", (1, 1)), ("affine_a1", (0, 0, 1)), ("hyperbolic", (1, 1))])
def test_group_element_pairing_matches_exact(name, lam):
    rd, ctx = DATA[name], CTX[name]
    N = 4
    for w in weyl_ball(rd, 3):
        paired = apply_group_element(hw_group_element(ctx, w, N), lam)
        exact = dl_apply_Hw(ctx, w, lam)
        assert first_difference(paired, exact, paired.depth, ceiling=paired.ceiling) is None


@pytest.mark.parametrize("name, lam", [("a2", (0, 1)), ("affine_a1", (0, 0, 1)), ("hyperbolic", (1, 1)),
                                       ("affine_a1", (1, 1, 0))])
def test_windowed_images_match_exact(name, lam):
    rd, ctx = DATA[name], CTX[name]
    N, L = 3, 6
    reps = min_coset_reps(rd, lam, L)
    imgs = windowed_images(ctx, lam, reps, N, L)
    for w in reps:
        if w.length > 4:
            continue
        assert is_min_coset_rep(rd, w, lam)
        exact = dl_apply_Hw(ctx, w, lam)
        exact = series_mul(exact, mono(rd, (0,) * rd.lattice_dim, rd.sigma_w(w)))
        got = truncate(imgs[w], N, lam)
        assert first_difference(got, truncate(exact, N, lam), N) is None
