#include <catch2/catch_amalgamated.hpp>

#include "dpcert/field.hpp"
#include "test_support.hpp"

using namespace dpcert;
using testutil::Rng;
using testutil::random_poly;

namespace {

SurfacePtr koras_russell()
{
    VarSet v(1, 0);
    return make_surface(parse_poly("-(z0^2 + z1^3)", v), parse_poly("-1", v));
}

RingElement elem(const SurfacePtr& s, const std::string& text)
{
    return normal_form(parse_poly(text, s->vars), s);
}

// Random element of ker v_x^i (polynomial in x and the other z's) or of
// ker v_y^j (polynomial in y and the other z's).
Poly random_kernel_poly(Rng& rng, const SurfacePtr& s, bool for_vx, int idx)
{
    const VarSet& vars = s->vars;
    Poly p(vars);
    int terms = rng.uniform(1, 3);
    for (int t = 0; t < terms; ++t) {
        Mono m(vars.count(), 0);
        int budget = rng.uniform(0, 2);
        if (for_vx)
            m[Var::x().idx] = rng.uniform(0, budget);
        else
            m[Var::y().idx] = rng.uniform(0, budget);
        for (int i = 0; i < vars.zvars; ++i)
            if (i != idx)
                m[Var::z(i).idx] = rng.uniform(0, 1);
        p.add_term(std::move(m), testutil::random_scalar(rng));
    }
    if (p.is_zero())
        p = Poly::constant(vars, Scalar(1));
    return p;
}

}  // namespace

TEST_CASE("catalogue fields on the two-parameter family")
{
    SurfacePtr s = make_symbolic_shorthand();
    const VarSet& v = s->vars;

    VectorField vx = build_vx(s, 0);
    CHECK(vx.cx().is_zero());
    CHECK(vx.cy() == Poly::monomial(v, Var::z(0), 1, Scalar(2)));
    CHECK(vx.cz()[0] == Poly::monomial(v, Var::x(), 2, Scalar(1)));

    VectorField vy = build_vy(s, 0);
    CHECK(vy.cx() == Poly::monomial(v, Var::z(0), 1, Scalar(2)));
    CHECK(vy.cy().is_zero());
    Poly expected_cz = Poly::variable(v, Var::x()) * Poly::variable(v, Var::y());
    expected_cz = expected_cz.scaled(Scalar(2)) - Poly::variable(v, v.param(0));
    CHECK(vy.cz()[0] == expected_cz);

    // v_z specialized to a = z^2 - beta, b = alpha:
    // (z^2-beta) x d/dx - (2(z^2-beta)y - alpha x y + alpha^2) d/dy
    VectorField vz = build_vz(s);
    Poly alpha = Poly::variable(v, v.param(0));
    Poly beta = Poly::variable(v, v.param(1));
    Poly z2mb = Poly::monomial(v, Var::z(0), 2, Scalar(1)) - beta;
    Poly x = Poly::variable(v, Var::x());
    Poly y = Poly::variable(v, Var::y());
    CHECK(vz.cx() == z2mb * x);
    CHECK(vz.cy() == -(z2mb * y.scaled(Scalar(2)) - alpha * x * y + alpha * alpha));
    CHECK(vz.cz()[0].is_zero());
    CHECK(apply(vz, elem(s, "z0")).is_zero());
}

TEST_CASE("catalogue fields on the Koras-Russell threefold")
{
    SurfacePtr s = koras_russell();
    VectorField vx0 = build_vx(s, 0);
    CHECK(vx0.cy() == parse_poly("-2*z0", s->vars));
    CHECK(vx0.cz()[0] == parse_poly("x^2", s->vars));

    // Tangency: each field annihilates the defining polynomial.
    RingElement P = normal_form(s->defining_poly(), s);
    CHECK(P.is_zero());  // the relation itself reduces to zero
    for (const VectorField& f : {build_vx(s, 0), build_vx(s, 1), build_vy(s, 0), build_vz(s)})
        CHECK(normal_form(f.apply_ambient(s->defining_poly()), s).is_zero());

    // The degree window on Koras-Russell stops at k = 0.
    CHECK(s->k_window == std::optional<int>(0));
    CHECK_THROWS_WITH(build_vy(s, 1), Catch::Matchers::ContainsSubstring("deg_z1(a) = 3"));
}

TEST_CASE("tangency on random admissible surfaces")
{
    Rng rng(23);
    for (int t = 0; t < 10; ++t) {
        SurfacePtr s = testutil::random_admissible_surface(rng, rng.uniform(0, 2));
        for (int i = 0; i < s->vars.zvars; ++i)
            CHECK(normal_form(build_vx(s, i).apply_ambient(s->defining_poly()), s).is_zero());
        for (int j = 0; j <= s->k_window.value_or(-1); ++j) {
            VectorField vy = build_vy(s, j);
            CHECK(normal_form(vy.apply_ambient(s->defining_poly()), s).is_zero());
            CHECK(apply(vy, RingElement{s, Poly::variable(s->vars, Var::y())}).is_zero());
        }
        CHECK(normal_form(build_vz(s).apply_ambient(s->defining_poly()), s).is_zero());
    }
}

TEST_CASE("the corrupted v_z variant is not tangent when beta is nonzero")
{
    SurfacePtr s = make_shorthand_surface(Scalar(1), Scalar(1));
    VectorField bad = build_vz_corrupted(s);
    Poly residual = reduce_against_relation(bad.apply_ambient(s->defining_poly()), *s);
    CHECK_FALSE(residual.is_zero());
    // residual = beta (2 z^2 - 2 beta + alpha x) for the general family
    CHECK(residual == parse_poly("2*z0^2 - 2 + x", s->vars));

    // With beta = 0 the variant coincides with the tangent field.
    SurfacePtr s0 = make_shorthand_surface(Scalar(1), Scalar(0));
    CHECK(reduce_against_relation(build_vz_corrupted(s0).apply_ambient(s0->defining_poly()), *s0)
              .is_zero());
}

TEST_CASE("applying fields: derivation examples")
{
    SurfacePtr s = make_symbolic_shorthand();
    VectorField vx = build_vx(s, 0);
    VectorField vy = build_vy(s, 0);
    CHECK(apply(vx, elem(s, "y^2")) == elem(s, "4*y*z0"));
    CHECK(apply(vy, elem(s, "x^2")) == elem(s, "4*x*z0"));
    CHECK(apply(vx, elem(s, "1")).is_zero());
    CHECK(apply(vx, elem(s, "17")).is_zero());
}

TEST_CASE("kernel membership")
{
    SurfacePtr s = koras_russell();
    VectorField vx0 = build_vx(s, 0);
    VectorField vy0 = build_vy(s, 0);
    CHECK(kernel_member(vx0, elem(s, "x")));
    CHECK(kernel_member(vx0, elem(s, "z1")));
    CHECK_FALSE(kernel_member(vx0, elem(s, "z0")));
    CHECK(kernel_member(vy0, elem(s, "y")));
    CHECK(kernel_member(vy0, elem(s, "z1")));
    CHECK_FALSE(kernel_member(vy0, elem(s, "z0")));
    CHECK(apply(vy0, elem(s, "z0")) == elem(s, "2*x*y + 1"));
}

TEST_CASE("bracket structure")
{
    SurfacePtr s = make_shorthand_surface(Scalar(1), Scalar(0));
    VectorField vx = build_vx(s, 0);
    VectorField vy = build_vy(s, 0);

    CHECK(bracket(vx, vx).is_zero());

    // Componentwise expansion frozen from a hand calculation:
    // [v_x, v_y] = 2x^2 d/dx + (2 - 4xy) d/dy on the (1,0) surface.
    VectorField br = bracket(vx, vy);
    CHECK(br.cx() == parse_poly("2*x^2", s->vars));
    CHECK(br.cy() == parse_poly("2 - 4*x*y", s->vars));
    CHECK(br.cz()[0].is_zero());
}

TEST_CASE("bracket multiplier identity")
{
    // [f nu, g h mu] - [f h nu, g mu] = f g nu(h) mu for h in ker mu,
    // exercised with the compatible-pair data nu = v_x^i, mu = v_y^j, h = z_i.
    Rng rng(29);
    SurfacePtr s = koras_russell();
    VectorField nu = build_vx(s, 1);
    VectorField mu = build_vy(s, 0);
    RingElement h = elem(s, "z1");
    REQUIRE(kernel_member(mu, h));
    for (int t = 0; t < 20; ++t) {
        RingElement f = normal_form(random_kernel_poly(rng, s, true, 1), s);
        RingElement g = normal_form(random_kernel_poly(rng, s, false, 0), s);
        REQUIRE(kernel_member(nu, f));
        REQUIRE(kernel_member(mu, g));
        VectorField lhs = bracket(f * nu, (g * h) * mu) - bracket((f * h) * nu, g * mu);
        VectorField rhs = ((f * g) * apply(nu, h)) * mu;
        CHECK(lhs == rhs);
    }
    // The same identity without h in ker mu acquires the extra term
    // f g mu(h) nu; check the full two-sided form on generic h.
    RingElement h2 = elem(s, "z0");
    for (int t = 0; t < 5; ++t) {
        RingElement f = normal_form(random_kernel_poly(rng, s, true, 1), s);
        RingElement g = normal_form(random_kernel_poly(rng, s, false, 0), s);
        VectorField lhs = bracket(f * nu, (g * h2) * mu) - bracket((f * h2) * nu, g * mu);
        VectorField rhs = ((f * g) * apply(nu, h2)) * mu + ((f * g) * apply(mu, h2)) * nu;
        CHECK(lhs == rhs);
    }
}

TEST_CASE("bracket laws: antisymmetry and Jacobi")
{
    Rng rng(31);
    SurfacePtr s = testutil::random_admissible_surface(rng, 1);
    REQUIRE(s->k_window.value_or(-1) >= 1);
    auto random_field = [&](int which) {
        switch (which) {
            case 0: {
                int i = rng.uniform(0, 1);
                return normal_form(random_kernel_poly(rng, s, true, i), s) * build_vx(s, i);
            }
            case 1: {
                int j = rng.uniform(0, 1);
                return normal_form(random_kernel_poly(rng, s, false, j), s) * build_vy(s, j);
            }
            default: {
                Poly f(s->vars);
                Mono m(s->vars.count(), 0);
                m[Var::z(0).idx] = rng.uniform(0, 2);
                m[Var::z(1).idx] = rng.uniform(0, 1);
                f.add_term(std::move(m), testutil::random_scalar(rng));
                return normal_form(f, s) * build_vz(s);
            }
        }
    };
    for (int t = 0; t < 8; ++t) {
        VectorField a = random_field(rng.uniform(0, 2));
        VectorField b = random_field(rng.uniform(0, 2));
        VectorField c = random_field(rng.uniform(0, 2));
        CHECK(bracket(a, b) == VectorField::zero(s) - bracket(b, a));
        VectorField jac = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) +
                          bracket(c, bracket(a, b));
        CHECK(jac.is_zero());
    }
}

TEST_CASE("Leibniz rule for field application")
{
    Rng rng(37);
    SurfacePtr s = make_shorthand_surface(Scalar(1), Scalar(1));
    VectorField vy = build_vy(s, 0);
    for (int t = 0; t < 20; ++t) {
        RingElement f = normal_form(random_poly(rng, s->vars, 4, 4), s);
        RingElement g = normal_form(random_poly(rng, s->vars, 4, 4), s);
        CHECK(apply(vy, f * g) == apply(vy, f) * g + f * apply(vy, g));
    }
}

TEST_CASE("completeness certificates")
{
    SurfacePtr s = make_symbolic_shorthand();
    VectorField vx = build_vx(s, 0);
    VectorField vy = build_vy(s, 0);
    VectorField vz = build_vz(s);

    SECTION("v_x is locally nilpotent")
    {
        auto cert = certify_complete(vx);
        REQUIRE(cert);
        CHECK(cert->kind == CompletenessCertificate::Kind::LND);
        for (const auto& [u, steps] : cert->nilpotency) {
            if (u == Var::y())
                CHECK(steps <= s->a.degree_in(Var::z(0)) + 2);
        }
        CHECK(replay_certificate(*cert, vx));
    }

    SECTION("z x^k v_x solves by blocks x, z, y")
    {
        RingElement zxk = elem(s, "z0*x^2");
        VectorField field = zxk * vx;
        auto cert = certify_complete(field);
        REQUIRE(cert);
        CHECK(cert->kind == CompletenessCertificate::Kind::BlockAffine);
        REQUIRE(cert->blocks.size() == 3);
        CHECK(cert->blocks[0][0].u == Var::x());
        CHECK(cert->blocks[1][0].u == Var::z(0));
        CHECK(cert->blocks[2][0].u == Var::y());
        CHECK(replay_certificate(*cert, field));
    }

    SECTION("v_y is block affine in x and z jointly")
    {
        auto cert = certify_complete(vy);
        REQUIRE(cert);
        CHECK(cert->kind == CompletenessCertificate::Kind::BlockAffine);
        REQUIRE(cert->blocks.size() == 2);
        CHECK(cert->blocks[0][0].u == Var::y());
        CHECK(cert->blocks[1].size() == 2);
        CHECK(replay_certificate(*cert, vy));
    }

    SECTION("v_z solves z, then x, then y")
    {
        auto cert = certify_complete(vz);
        REQUIRE(cert);
        CHECK(cert->kind == CompletenessCertificate::Kind::BlockAffine);
        REQUIRE(cert->blocks.size() == 3);
        CHECK(cert->blocks[0][0].u == Var::z(0));
        CHECK(cert->blocks[1][0].u == Var::x());
        CHECK(cert->blocks[2][0].u == Var::y());
        CHECK(replay_certificate(*cert, vz));
    }

    SECTION("kernel multipliers are validated")
    {
        RingElement in_kernel = elem(s, "x^2 - 1");
        auto cert = certify_complete(vx, in_kernel);
        REQUIRE(cert);
        CHECK(replay_certificate(*cert, in_kernel * vx));
        CHECK_THROWS_AS(certify_complete(vx, elem(s, "z0")), std::invalid_argument);
    }

    SECTION("tampered certificates fail replay")
    {
        auto cert = certify_complete(vx);
        REQUIRE(cert);
        REQUIRE(cert->kind == CompletenessCertificate::Kind::LND);
        // The recorded bound for y is sharp; shrinking it must break replay.
        for (auto& [u, steps] : cert->nilpotency)
            if (u == Var::y())
                steps -= 1;
        CHECK_FALSE(replay_certificate(*cert, vx));

        auto cert2 = certify_complete(vz);
        REQUIRE(cert2);
        cert2->blocks[1][0].constant = Poly::constant(s->vars, Scalar(5));
        CHECK_FALSE(replay_certificate(*cert2, vz));
    }
}

TEST_CASE("certificates replay for multiplied catalogue fields")
{
    Rng rng(41);
    SurfacePtr s = koras_russell();
    for (int t = 0; t < 6; ++t) {
        int i = rng.uniform(0, 1);
        VectorField vx = build_vx(s, i);
        RingElement f = normal_form(random_kernel_poly(rng, s, true, i), s);
        auto cert = certify_complete(vx, f);
        REQUIRE(cert);
        CHECK(replay_certificate(*cert, f * vx));

        VectorField vy = build_vy(s, 0);
        RingElement g = normal_form(random_kernel_poly(rng, s, false, 0), s);
        auto cert2 = certify_complete(vy, g);
        REQUIRE(cert2);
        CHECK(replay_certificate(*cert2, g * vy));
    }
}

TEST_CASE("fields print with their coefficients and directions")
{
    SurfacePtr s = make_shorthand_surface(Scalar(1), Scalar(0));
    std::string txt = to_string(build_vx(s, 0));
    CHECK(txt.find("(2*z0)") != std::string::npos);
    CHECK(txt.find("∂y") != std::string::npos);
    CHECK(txt.find("(x^2)") != std::string::npos);
    CHECK(to_string(VectorField::zero(s)) == "0");
}

TEST_CASE("cross-surface operations are refused")
{
    SurfacePtr s1 = make_shorthand_surface(Scalar(1), Scalar(0));
    SurfacePtr s2 = make_shorthand_surface(Scalar(1), Scalar(1));
    RingElement f{s2, parse_poly("z0", s2->vars)};
    CHECK_THROWS_AS(apply(build_vx(s1, 0), f), std::invalid_argument);
    CHECK_THROWS_AS(bracket(build_vx(s1, 0), build_vy(s2, 0)), std::invalid_argument);
    CHECK_THROWS_AS(f * build_vx(s1, 0), std::invalid_argument);
}
