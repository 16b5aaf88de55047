#include <catch2/catch_amalgamated.hpp>

#include "dpcert/form.hpp"
#include "test_support.hpp"

using namespace dpcert;
using testutil::Rng;
using testutil::random_poly;

namespace {

RingElement elem(const SurfacePtr& s, const std::string& text)
{
    return normal_form(parse_poly(text, s->vars), s);
}

RingElement power_times(const SurfacePtr& s, Var v, int k, Var w, int e)
{
    Poly p = Poly::monomial(s->vars, v, k, Scalar(1)) * Poly::monomial(s->vars, w, e, Scalar(1));
    return normal_form(p, s);
}

LaurentPoly random_laurent(Rng& rng, const VarSet& vars)
{
    Poly p = random_poly(rng, vars, 3, 3, /*allow_y=*/false);
    return to_laurent(p).shifted_x(rng.uniform(-2, 0));
}

ChartForm random_form(Rng& rng, const SurfacePtr& s, int degree)
{
    ChartForm f(s, degree);
    int dim = ChartForm::chart_dim(*s);
    for (ChartForm::Mask m = 0; m < (ChartForm::Mask{1} << dim); ++m) {
        if (std::popcount(m) != degree)
            continue;
        if (rng.uniform(0, 2) == 0)
            continue;
        f.add_term(m, random_laurent(rng, s->vars));
    }
    return f;
}

}  // namespace

TEST_CASE("omega basics")
{
    SurfacePtr s = make_shorthand_surface(Scalar(1), Scalar(0));
    ChartForm w = omega(s);
    CHECK(w.degree() == 2);  // top form on the two-dimensional surface chart
    REQUIRE(w.terms().size() == 1);
    CHECK(w.coeff(0b11) == to_laurent(Poly::constant(s->vars, Scalar(1))).shifted_x(-2));
    CHECK(w.coeff(0b01).is_zero());

    VarSet v2(2, 0);
    SurfacePtr s2 = make_surface(parse_poly("z0^2 + z1 + z2", v2), parse_poly("1", v2));
    CHECK(omega(s2).degree() == 4);
}

TEST_CASE("interior products of the catalogue fields")
{
    // i_{v_x^i} omega = (-1)^{i+1} dx ^ dz_0 ^ .. skip i .. ^ dz_n and
    // i_{v_y^j} omega = (-1)^j dy ^ dz_0 ^ .. skip j .. ^ dz_n with dy
    // expanded on the chart.
    Rng rng(53);
    VarSet vkr(1, 0);
    std::vector<SurfacePtr> surfaces{
        make_surface(parse_poly("-(z0^2 + z1^3)", vkr), parse_poly("-1", vkr)),
        testutil::random_admissible_surface(rng, 2)};
    for (const SurfacePtr& s : surfaces) {
        int dim = ChartForm::chart_dim(*s);
        ChartForm::Mask all = (ChartForm::Mask{1} << dim) - 1;
        for (int i = 0; i < s->vars.zvars; ++i) {
            ChartForm expected(s, dim - 1);
            Scalar sign = (i % 2 == 0) ? Scalar(-1) : Scalar(1);  // (-1)^{i+1}
            expected.add_term(all & ~(ChartForm::Mask{1} << (1 + i)),
                              to_laurent(Poly::constant(s->vars, sign)));
            CHECK(interior(chart_field(build_vx(s, i)), omega(s)) == expected);
        }
        for (int j = 0; j <= s->k_window.value_or(-1); ++j) {
            ChartForm dzs(s, dim - 2);
            dzs.add_term(all & ~1u & ~(ChartForm::Mask{1} << (1 + j)),
                         to_laurent(Poly::constant(s->vars, Scalar(1))));
            ChartForm dy = ext_d(chart_zero_form(elem(s, "y")));
            ChartForm expected = wedge(dy, dzs);
            if (j % 2 == 1)
                expected = -expected;
            CHECK(interior(chart_field(build_vy(s, j)), omega(s)) == expected);
        }
    }
}

TEST_CASE("double contraction vanishes")
{
    SurfacePtr s = make_shorthand_surface(Scalar(1), Scalar(1));
    for (const VectorField& f : {build_vx(s, 0), build_vy(s, 0), build_vz(s)})
        CHECK(psi(f, f).is_zero());
}

TEST_CASE("exterior derivative")
{
    SurfacePtr s = make_shorthand_surface(Scalar(1), Scalar(0));

    SECTION("power rule with negative exponents")
    {
        // d(x^{-1} dz) = -x^{-2} dx ^ dz
        ChartForm phi(s, 1);
        phi.add_term(0b10, to_laurent(Poly::constant(s->vars, Scalar(1))).shifted_x(-1));
        ChartForm expected(s, 2);
        expected.add_term(0b11, to_laurent(Poly::constant(s->vars, Scalar(-1))).shifted_x(-2));
        CHECK(ext_d(phi) == expected);
    }

    SECTION("theta images of x^k v_x are closed")
    {
        SurfacePtr sym = make_symbolic_shorthand();
        for (int k = 0; k <= 6; ++k) {
            RingElement xk = elem(sym, "x^" + std::to_string(k));
            CHECK(ext_d(theta_form(xk * build_vx(sym, 0))).is_zero());
        }
    }

    SECTION("d after d is zero")
    {
        Rng rng(59);
        VarSet v2(2, 0);
        SurfacePtr s2 = make_surface(parse_poly("z0^2 + z1*z2", v2), parse_poly("z1", v2));
        for (int t = 0; t < 15; ++t) {
            ChartForm f0 = random_form(rng, s2, 0);
            CHECK(ext_d(ext_d(f0)).is_zero());
            ChartForm f1 = random_form(rng, s2, 1);
            CHECK(ext_d(ext_d(f1)).is_zero());
        }
    }

    SECTION("top forms differentiate to the flagged zero form")
    {
        ChartForm top = omega(s);
        ChartForm d = ext_d(top);
        CHECK(d.is_zero());
        CHECK(d.degree() == top.degree());
    }
}

TEST_CASE("theta correspondence")
{
    SurfacePtr s = make_symbolic_shorthand();
    VectorField vx = build_vx(s, 0);
    VectorField vy = build_vy(s, 0);
    for (int k = 0; k <= 6; ++k) {
        RingElement xk = elem(s, "x^" + std::to_string(k));
        RingElement yk = elem(s, "y^" + std::to_string(k));

        // (k+1) i_{x^k v_x} omega = -d x^{k+1}
        ThetaResult tx = theta(xk * vx);
        CHECK(tx.closed);
        ChartForm lhs = tx.form.scaled(Scalar(k + 1));
        ChartForm rhs = -ext_d(chart_zero_form(elem(s, "x^" + std::to_string(k + 1))));
        CHECK(lhs == rhs);

        // (k+1) i_{y^k v_y} omega = d y^{k+1} (chart projected)
        ThetaResult ty = theta(yk * vy);
        CHECK(ty.closed);
        CHECK(ty.form.scaled(Scalar(k + 1)) ==
              ext_d(chart_zero_form(elem(s, "y^" + std::to_string(k + 1)))));
    }

    // z v_x is not volume preserving: d i_{z v_x} omega = x^2 omega.
    ThetaResult tz = theta(elem(s, "z0") * vx);
    CHECK_FALSE(tz.closed);
    CHECK(divergence(elem(s, "z0") * vx) == elem(s, "x^2"));
}

TEST_CASE("divergence suite on the symbolic family")
{
    SurfacePtr s = make_symbolic_shorthand();
    VectorField vx = build_vx(s, 0);
    VectorField vy = build_vy(s, 0);
    VectorField vz = build_vz(s);
    Poly beta = Poly::variable(s->vars, s->vars.param(1));
    for (int k = 0; k <= 6; ++k) {
        RingElement xk = elem(s, "x^" + std::to_string(k));
        RingElement yk = elem(s, "y^" + std::to_string(k));
        RingElement zk = elem(s, "z0^" + std::to_string(k));
        RingElement zxk = elem(s, "z0*x^" + std::to_string(k));

        CHECK(divergence(xk * vx).is_zero());
        CHECK(divergence(yk * vy).is_zero());
        CHECK(divergence(zxk * vx) == elem(s, "x^" + std::to_string(k + 2)));

        // Corrected divergence of z^k v_z: -z^{k+2} + beta z^k.
        RingElement expected =
            normal_form(beta * zk.nf, s) - elem(s, "z0^" + std::to_string(k + 2));
        CHECK(divergence(zk * vz) == expected);
    }
}

TEST_CASE("divergence of brackets and the Leibniz rule")
{
    Rng rng(61);
    SurfacePtr s = make_shorthand_surface(Scalar(1), Scalar(1));
    ChartInverter inverter(s, 14);
    auto random_tangent = [&]() {
        int which = rng.uniform(0, 2);
        RingElement f = normal_form(random_poly(rng, s->vars, 3, 3), s);
        switch (which) {
            case 0: return f * build_vx(s, 0);
            case 1: return f * build_vy(s, 0);
            default: return f * build_vz(s);
        }
    };
    for (int t = 0; t < 20; ++t) {
        VectorField v1 = random_tangent();
        VectorField v2 = random_tangent();
        RingElement lhs = divergence(bracket(v1, v2), &inverter);
        RingElement rhs = apply(v1, divergence(v2, &inverter)) -
                          apply(v2, divergence(v1, &inverter));
        CHECK(lhs == rhs);
    }
    for (int t = 0; t < 20; ++t) {
        VectorField nu = random_tangent();
        RingElement f = normal_form(random_poly(rng, s->vars, 3, 3), s);
        CHECK(divergence(f * nu, &inverter) == f * divergence(nu, &inverter) + apply(nu, f));
    }
}

TEST_CASE("bracket contraction identity for volume preserving pairs")
{
    // i_{[a,b]} omega = d i_a i_b omega
    Rng rng(67);
    SurfacePtr s = make_shorthand_surface(Scalar(1), Scalar(0));
    auto vp_field = [&]() {
        int k = rng.uniform(0, 3);
        bool use_x = rng.flip();
        RingElement f = elem(s, (use_x ? "x^" : "y^") + std::to_string(k));
        return use_x ? f * build_vx(s, 0) : f * build_vy(s, 0);
    };
    for (int t = 0; t < 20; ++t) {
        VectorField a = vp_field();
        VectorField b = vp_field();
        REQUIRE(divergence(a).is_zero());
        REQUIRE(divergence(b).is_zero());
        CHECK(theta_form(bracket(a, b)) == ext_d(psi(a, b)));
    }

    // psi of the basic pair is the 0-form 2z on the (1,0) surface.
    CHECK(psi(build_vx(s, 0), build_vy(s, 0)) == chart_zero_form(elem(s, "2*z0")));
}

TEST_CASE("primitive transport under brackets")
{
    // If i_{v1} omega = d f then i_{[v2,v1]} omega = d v2(f).
    Rng rng(71);
    SurfacePtr s = make_shorthand_surface(Scalar(2), Scalar(1));
    for (int k = 0; k <= 3; ++k) {
        VectorField v1 = power_times(s, Var::x(), k, Var::x(), 0) * build_vx(s, 0);
        RingElement f = scaled(elem(s, "x^" + std::to_string(k + 1)),
                               Scalar::fraction(-1, k + 1));
        REQUIRE(theta_form(v1) == ext_d(chart_zero_form(f)));
        for (int t = 0; t < 3; ++t) {
            int m = rng.uniform(0, 2);
            VectorField v2 = elem(s, "y^" + std::to_string(m)) * build_vy(s, 0);
            CHECK(theta_form(bracket(v2, v1)) == ext_d(chart_zero_form(apply(v2, f))));
        }
    }
}

TEST_CASE("interior product is an antiderivation")
{
    Rng rng(73);
    VarSet v2(2, 0);
    SurfacePtr s = make_surface(parse_poly("z0^2 - z1*z2", v2), parse_poly("z1 - 1", v2));
    ChartField nu = chart_field(build_vx(s, 0));
    for (int t = 0; t < 10; ++t) {
        ChartForm phi = random_form(rng, s, 1);
        ChartForm psi_form = random_form(rng, s, 2);
        ChartForm lhs = interior(nu, wedge(phi, psi_form));
        ChartForm rhs = wedge(interior(nu, phi), psi_form) - wedge(phi, interior(nu, psi_form));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("chart inversion")
{
    Rng rng(79);
    SurfacePtr s = make_shorthand_surface(Scalar(1), Scalar(1));
    ChartInverter inv(s, 9);
    for (int t = 0; t < 25; ++t) {
        RingElement e = normal_form(random_poly(rng, s->vars, 4, 5), s);
        auto back = inv.invert(chart_project(e));
        REQUIRE(back);
        CHECK(*back == e);
    }
    // Outside the window there is no preimage.
    ChartInverter tiny(s, 2);
    CHECK_FALSE(tiny.invert(chart_project(elem(s, "y^4"))));
}

TEST_CASE("forms print coefficients against wedge monomials")
{
    SurfacePtr s = make_shorthand_surface(Scalar(1), Scalar(0));
    std::string txt = to_string(omega(s));
    CHECK(txt.find("x^-2") != std::string::npos);
    CHECK(txt.find("dx") != std::string::npos);
    CHECK(txt.find("dz0") != std::string::npos);
    CHECK(to_string(ChartForm(s, 1)) == "0");
}

TEST_CASE("form error paths")
{
    SurfacePtr s = make_shorthand_surface(Scalar(1), Scalar(0));
    ChartForm zero_form(s, 0);
    zero_form.add_term(0, to_laurent(Poly::constant(s->vars, Scalar(1))));
    CHECK_THROWS_AS(interior(chart_field(build_vx(s, 0)), zero_form), std::invalid_argument);

    // A divergence whose preimage lies outside a tiny window is flagged.
    RingElement y2{s, parse_poly("y^2", s->vars)};
    VectorField field = y2 * build_vz(s);
    CHECK_THROWS_AS(divergence(field, nullptr, 0), NotInRingError);
    CHECK_NOTHROW(divergence(field));
}
