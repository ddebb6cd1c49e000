import pytest
import sympy

from kmsatake import ParamCoeff, weyl_ball
from kmsatake.dl_operators import right_mul_h
from kmsatake.root_datum import RootDatumError, poincare_series, stabilizer_indices
from kmsatake.series import TruncSeries, expand_c, first_difference, series_mul, series_scale, truncate
from kmsatake.symmetrizers import SymContext, m_sigma_witness, poincare_factor_check

from conftest import datum

s = ParamCoeff.var("σ")
s2 = s ** 2
CTX4 = {}


def ctx4(name):
    if name not in CTX4:
        CTX4[name] = SymContext(datum(name), 4)
    return CTX4[name]


def test_delta_examples(a1, a2):
    assert SymContext(a1, 2).delta().terms == {(0,): 1, (-1,): 1 - s2, (-2,): 1 - s2}
    assert SymContext(a2, 0).delta().terms == {(0, 0): 1}
    d = SymContext(a2, 1).delta()
    assert d.terms == {(0, 0): 1, (-2, 1): 1 - s2, (1, -2): 1 - s2}


def test_delta_twist_a1(a1):
    ctx = SymContext(a1, 2)
    assert ctx.delta_twist(a1.identity()) == ctx.delta()
    assert ctx.delta_twist(a1.simple(0)).terms == {(0,): s2, (-1,): s2 - 1, (-2,): s2 - 1}


@pytest.mark.parametrize("name", ["a2", "b2_auto", "affine_a1", "hyperbolic"])
def test_delta_twist_simple_reflection_identity(name):
    ctx = ctx4(name)
    rd, N = ctx.rd, ctx.N
    for i in range(rd.index_count):
        al = rd.coroots[i]
        neg = tuple(-x for x in al)
        lhs = truncate(series_mul(expand_c(rd, neg, N, cls=i), ctx.delta_twist(rd.simple(i))), N)
        rhs = truncate(series_mul(expand_c(rd, al, N, cls=i), ctx.delta()), N)
        assert first_difference(lhs, rhs, N) is None


def test_delta_twist_leading_term(affine):
    ctx = SymContext(affine, 3)
    for w in weyl_ball(affine, 3):
        assert ctx.delta_twist(w).coeff((0, 0, 0)) == s ** (2 * w.length)


def test_gamma_examples(a1, hyperbolic):
    assert SymContext(a1, 2).gamma().terms == {(0,): 1, (-1,): 1 - s2, (-2,): 1 - s2}
    assert SymContext(hyperbolic, 0).gamma().terms == {(0, 0): 1}
    assert ctx4("hyperbolic").gamma().coeff((0, 0)) == 1


@pytest.mark.parametrize("name", ["a1", "a2", "b2", "b2_auto", "g2"])
def test_finite_type_multiplier_is_one(name):
    m = SymContext(datum(name), 5).m_sigma()
    assert m.terms == {(0,) * m.rd.lattice_dim: 1}


def test_multiplier_depth_zero(hyperbolic):
    assert SymContext(hyperbolic, 0).m_sigma().terms == {(0, 0): 1}


def test_affine_multiplier_product_formula(affine):
    # prod_j (1 - s^2 x^j)^2 / ((1 - x^j)(1 - s^4 x^j)), x = e^{-delta}
    x, sy = sympy.symbols("x s")
    f = sympy.Integer(1)
    for j in (1, 2):
        f *= (1 - sy ** 2 * x ** j) ** 2 * sum(x ** (j * k) for k in range(3)) \
            * sum((sy ** 4 * x ** j) ** k for k in range(3))
    poly = sympy.Poly(sympy.expand(f), x)
    m = SymContext(affine, 4).m_sigma()
    for k in range(3):
        expect = sympy.expand(poly.coeff_monomial(x ** k))
        got = m.coeff((-k, -k, 0))
        assert sympy.expand(sum(c * sy ** e[0] for e, c in got.terms.items())) == expect
    assert set(m.terms) <= {(0, 0, 0), (-1, -1, 0), (-2, -2, 0)}


@pytest.mark.parametrize("name", ["affine_a1", "hyperbolic", "a2"])
def test_multiplier_witness(name):
    assert m_sigma_witness(ctx4(name))


def test_p_lambda_examples(a1, a2):
    assert SymContext(a2, 3).p_lambda_sigma((0, 0)).terms == {(0, 0): 1}
    assert SymContext(a1, 2).p_lambda_sigma((1,)).terms == {(1,): 1, (0,): 1 - s2, (-1,): 1}
    with pytest.raises(RootDatumError, match="dominant"):
        SymContext(a2, 2).p_lambda_sigma((1, -1))


@pytest.mark.parametrize("name, lam", [("a2", (0, 1)), ("affine_a1", (0, 0, 1)), ("hyperbolic", (1, 1)),
                                       ("hyperbolic", (0, 1)), ("g2", (1, 0))])
def test_p_lambda_cutoff_stabilizes(name, lam):
    ctx = ctx4(name)
    N = ctx.N
    assert first_difference(ctx.p_lambda_sigma(lam, 2 * N), ctx.p_lambda_sigma(lam, 2 * N + 2), N) is None


def test_adaptive_mode_agrees(affine):
    ctx = SymContext(affine, 3, adaptive=True)
    plain = SymContext(affine, 3)
    assert ctx.gamma() == plain.gamma()
    assert ctx.p_lambda_sigma((0, 0, 1)) == plain.p_lambda_sigma((0, 0, 1))


def test_h_lambda_examples(a1, a2):
    ctx = SymContext(a1, 2)
    expect = {(1,): 1, (0,): 1 - s2, (-1,): 1}
    assert ctx.h_lambda((1,)).terms == expect
    assert ctx.j_sigma_regular((1,)).terms == expect
    assert SymContext(a2, 3).h_lambda((0, 0)).terms == {(0, 0): 1}
    lam = a2.from_coroot_coords((1, 1))
    assert ctx4("a2").h_lambda(lam).coeff(lam) == 1


@pytest.mark.parametrize("name, lam", [("a2", (1, 1)), ("b2_auto", (1, 1)), ("g2", (1, 1)),
                                       ("affine_a1", (0, 1, 3)), ("hyperbolic", (1, 1)), ("hyperbolic", (2, 1))])
def test_h_lambda_equals_orbit_sum(name, lam):
    ctx = ctx4(name)
    assert first_difference(ctx.h_lambda(lam), ctx.j_sigma_regular(lam), ctx.N) is None


@pytest.mark.parametrize("name, lam", [("a2", (0, 1)), ("affine_a1", (0, 0, 1)), ("hyperbolic", (0, 1))])
def test_h_lambda_singular_matches_orbit_route(name, lam):
    ctx = ctx4(name)
    assert first_difference(ctx.h_lambda(lam), ctx.h_lambda_orbit(lam), ctx.N) is None


def test_j_sigma_regular_rejects_singular(a2):
    with pytest.raises(RootDatumError, match="regular"):
        SymContext(a2, 2).j_sigma_regular((0, 1))


def test_orbit_terms_affine_level_one(affine):
    N = 4
    lam = (0, 0, 1)
    limit = N * affine.height_den
    reach = [w for w in weyl_ball(affine, 3 * N)
             if affine.hscaled(lam) - affine.hscaled(affine.act(w, lam)) <= limit]
    assert len(reach) <= 2 * N + 1


@pytest.mark.parametrize("name", ["affine_a1", "hyperbolic"])
def test_cherednik(name):
    rep = ctx4(name).cherednik_check(3)
    assert rep.passed, [e for e in rep.entries if not e.passed]
    assert [e.word for e in rep.entries][0] == ()
    assert rep.to_json()["passed"]


def test_cherednik_detects_corruption(affine):
    ctx = SymContext(affine, 3)
    good = ctx.gamma()
    terms = dict(good.terms)
    terms[(-1, -1, 0)] = terms[(-1, -1, 0)] + 1
    ctx._gamma = TruncSeries(affine, terms, good.ceiling, good.depth)
    assert not ctx.cherednik_check(1).passed


@pytest.mark.parametrize("name", ["a2", "affine_a1", "hyperbolic"])
def test_right_multiplication_by_h(name):
    # P_sigma h_i = sigma_i P_sigma on [v] with l(v) <= 1
    ctx = SymContext(datum(name), 3)
    rd, N = ctx.rd, ctx.N
    P = ctx.p_sigma(2 * N + 3)
    for i in range(rd.index_count):
        Ph = right_mul_h(ctx.dl, P, i, N)
        for v in weyl_ball(rd, 1):
            lhs = Ph.component(v)
            rhs = series_scale(P.component(v), rd.sigma(i))
            assert first_difference(truncate(lhs, N), truncate(rhs, N), N, ceiling=(0,) * rd.lattice_dim) is None


def test_delta_im(affine):
    ctx = SymContext(affine, 2)
    assert ctx.delta_im([]).terms == {(0, 0, 0): 1}
    assert ctx.delta_im([((1, 1, 0), 1)]).terms == {(0, 0, 0): 1, (-1, -1, 0): 1 - s2}
    sq = ctx.delta_im([((1, 1, 0), 2)])
    assert sq.terms == {(0, 0, 0): 1, (-1, -1, 0): 2 * (1 - s2)}
    assert SymContext(affine, 4).delta_im([((1, 1, 0), 2)]).coeff((-2, -2, 0)) == 2 * (1 - s2) + (1 - s2) ** 2
    with pytest.raises(RootDatumError, match="nonnegative"):
        ctx.delta_im([((1, 1, 0), -1)])
    with pytest.raises(RootDatumError, match="equal parameters"):
        SymContext(datum("b2_auto"), 2).delta_im([])


@pytest.mark.parametrize("name, lam", [("a2", (0, 1)), ("a2", (0, 0)), ("b2_auto", (0, 1)), ("g2", (0, 1))])
def test_poincare_factorization(name, lam):
    assert poincare_factor_check(ctx4(name), lam) is None


@pytest.mark.parametrize("name, lam", [("a2", (0, 1)), ("affine_a1", (0, 0, 1)), ("b2_auto", (1, 0))])
def test_stabilizer_sum(name, lam):
    ctx = ctx4(name)
    rd = ctx.rd
    J = stabilizer_indices(rd, lam)
    poinc = poincare_series(rd, J, 12).value
    assert ctx.stabilizer_sum(lam, 12).terms == {lam: poinc}
