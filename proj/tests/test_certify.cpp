#include <catch2/catch_amalgamated.hpp>

#include "dpcert/genset.hpp"
#include "dpcert/pairs.hpp"
#include "dpcert/transitivity.hpp"
#include "test_support.hpp"

using namespace dpcert;
using testutil::Rng;

namespace {

SurfacePtr koras_russell()
{
    VarSet v(1, 0);
    return make_surface(parse_poly("-(z0^2 + z1^3)", v), parse_poly("-1", v));
}

SurfacePtr surface_n0(const std::string& a, const std::string& b)
{
    VarSet v(0, 0);
    return make_surface(parse_poly(a, v), parse_poly(b, v));
}

Point make_point(const SurfacePtr& s, Scalar y, Scalar x, std::vector<Scalar> z)
{
    Point p(s->vars.count(), Scalar(0));
    p[Var::y().idx] = std::move(y);
    p[Var::x().idx] = std::move(x);
    for (std::size_t i = 0; i < z.size(); ++i)
        p[Var::z(static_cast<int>(i)).idx] = z[i];
    return p;
}

}  // namespace

TEST_CASE("compatible pairs on Koras-Russell")
{
    SurfacePtr s = koras_russell();
    PairReport r = check_catalogue_pair(s, 1, 0, 3);
    CHECK(r.semi_compatible);
    CHECK(r.compatible);
    REQUIRE(r.nu_h);
    CHECK(r.nu_h->nf == parse_poly("x^2", s->vars));
    CHECK(r.product_witness.has_value());
    CHECK(r.failure.empty());
}

TEST_CASE("pair hints are verified, not trusted")
{
    SurfacePtr s = koras_russell();
    VectorField nu = build_vx(s, 1);
    VectorField mu = build_vy(s, 0);
    // Claim z1 (moved by v_x^1) inside the kernel: rejected with image x^2.
    std::vector<Var> bad{Var::x(), Var::z(1)};
    PairReport r = check_semicompatible(nu, mu, bad, vy_kernel_vars(s, 0), 2);
    CHECK_FALSE(r.semi_compatible);
    REQUIRE(r.rejected_hint);
    REQUIRE(r.rejected_image);
    CHECK(r.rejected_image->nf == parse_poly("x^2", s->vars));
}

TEST_CASE("compatibility fails with the wrong function")
{
    SurfacePtr s = koras_russell();
    VectorField nu = build_vx(s, 0);
    VectorField mu = build_vy(s, 0);
    PairReport base = check_semicompatible(nu, mu, vx_kernel_vars(s, 0), vy_kernel_vars(s, 0), 2);
    // h = z_0 is moved by v_y^0: mu(h) != 0.
    PairReport r = check_compatible(nu, mu, RingElement{s, parse_poly("z0", s->vars)}, base);
    CHECK_FALSE(r.compatible);
    CHECK(r.failure.find("mu(h)") != std::string::npos);
    // Constants have nu(h) = 0.
    PairReport r2 = check_compatible(nu, mu, RingElement{s, parse_poly("1", s->vars)}, base);
    CHECK_FALSE(r2.compatible);
    CHECK(r2.failure.find("nu(h) vanishes") != std::string::npos);
}

TEST_CASE("kernel products reach mixed monomials")
{
    SurfacePtr s = koras_russell();
    RingElement left = normal_form(parse_poly("x^3*z1", s->vars), s);   // in ker v_x^1... wait
    RingElement right = normal_form(parse_poly("y^2*z0", s->vars), s);
    // For the pair (v_x^0, v_y^1)-style data use i = 0, j = 1 roles reversed:
    // here nu = v_x^1 keeps x, z0; mu = v_y^0 keeps y, z1.
    RingElement left01 = normal_form(parse_poly("x^3*z0", s->vars), s);
    RingElement right01 = normal_form(parse_poly("y^2*z1", s->vars), s);
    CHECK(kernel_member(build_vx(s, 1), left01));
    CHECK(kernel_member(build_vy(s, 0), right01));
    CHECK(left01 * right01 == normal_form(parse_poly("x^3*y^2*z0*z1", s->vars), s));
    (void)left;
    (void)right;
}

TEST_CASE("pairs on a random admissible n = 2 surface")
{
    Rng rng(83);
    SurfacePtr s = testutil::random_admissible_surface(rng, 2);
    REQUIRE(s->k_window == std::optional<int>(2));
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i == j)
                continue;
            PairReport r = check_catalogue_pair(s, i, j, 3);
            CHECK(r.semi_compatible);
            CHECK(r.compatible);
        }
    }
}

TEST_CASE("generating set at the worked point")
{
    SurfacePtr s = make_shorthand_surface(Scalar(1), Scalar(0));
    // (x, y, z) = (1, 2, 1) in the paper's print order.
    Point p = make_point(s, Scalar(2), Scalar(1), {Scalar(1)});
    GensetReport r = generating_set_check(s, p, {build_vy(s, 0)}, default_moves(s, p));
    CHECK(r.success);
    CHECK(r.dim_reached == 2);
    CHECK(r.dim_needed == 2);
}

TEST_CASE("generating set check validates inputs")
{
    SurfacePtr s = make_shorthand_surface(Scalar(1), Scalar(0));
    Point off = make_point(s, Scalar(5), Scalar(1), {Scalar(1)});
    CHECK_THROWS_AS(generating_set_check(s, off, {build_vy(s, 0)}, {}), std::invalid_argument);

    Point p = make_point(s, Scalar(2), Scalar(1), {Scalar(1)});
    // A move whose multiplier does not vanish at p is refused.
    TangentMove bad{build_vx(s, 0), RingElement{s, parse_poly("x", s->vars)}};
    CHECK_THROWS_AS(generating_set_check(s, p, {build_vy(s, 0)}, {bad}), std::invalid_argument);
    // A multiplier outside the kernel is refused.
    TangentMove bad2{build_vx(s, 0), RingElement{s, parse_poly("z0 - 1", s->vars)}};
    CHECK_THROWS_AS(generating_set_check(s, p, {build_vy(s, 0)}, {bad2}), std::invalid_argument);
}

TEST_CASE("x = 0 points leave the default moves degenerate")
{
    SurfacePtr s = make_shorthand_surface(Scalar(1), Scalar(0));
    // (y, x, z) = (1, 0, 0) lies on the surface since a(0) = 0.
    Point p = make_point(s, Scalar(1), Scalar(0), {Scalar(0)});
    GensetReport r = generating_set_check(s, p, {build_vy(s, 0)}, default_moves(s, p));
    CHECK_FALSE(r.success);
    CHECK(r.dim_reached < r.dim_needed);
    CHECK_FALSE(r.reason.empty());
}

TEST_CASE("a candidate basis needs no moves")
{
    SurfacePtr s = make_shorthand_surface(Scalar(1), Scalar(0));
    Point p = make_point(s, Scalar(2), Scalar(1), {Scalar(1)});
    GensetReport r = generating_set_check(s, p, {build_vx(s, 0), build_vy(s, 0)}, {});
    CHECK(r.success);
}

TEST_CASE("wedge generating set on Koras-Russell")
{
    SurfacePtr s = koras_russell();
    bool found = false;
    for (const Point& p : rational_point_candidates(s)) {
        auto pairs = std::vector<std::pair<VectorField, VectorField>>{
            {build_vx(s, 1), build_vy(s, 0)}};
        GensetReport r = wedge_generating_check(s, p, pairs, default_moves(s, p));
        if (r.success) {
            CHECK(r.dim_needed == 3);  // dim Lambda^2 of a 3-dim tangent space
            CHECK(r.dim_reached == 3);
            found = true;
            break;
        }
    }
    CHECK(found);
}

TEST_CASE("wedge degeneracies")
{
    SurfacePtr s = make_shorthand_surface(Scalar(1), Scalar(0));
    Point p = make_point(s, Scalar(2), Scalar(1), {Scalar(1)});

    // A pair wedged with itself is zero: immediate failure.
    VectorField vx = build_vx(s, 0);
    GensetReport same = wedge_generating_check(s, p, {{vx, vx}}, {});
    CHECK_FALSE(same.success);
    CHECK(same.dim_reached == 0);

    // For n = 0 the wedge space is one-dimensional: any nonzero wedge wins.
    GensetReport r = wedge_generating_check(s, p, {{vx, build_vy(s, 0)}}, {});
    CHECK(r.success);
    CHECK(r.dim_needed == 1);
}

TEST_CASE("condition B")
{
    SECTION("Koras-Russell holds")
    {
        ConditionBReport r = condition_B(*koras_russell());
        CHECK(r.verdict == Cond::Holds);
    }
    SECTION("proportional partials fail with the witness")
    {
        ConditionBReport r = condition_B(*surface_n0("z0", "z0"));
        REQUIRE(r.verdict == Cond::Fails);
        REQUIRE(r.witness_c);
        CHECK(*r.witness_c == Scalar(-1));
    }
    SECTION("degree mismatch holds")
    {
        ConditionBReport r = condition_B(*surface_n0("z0^2", "z0"));
        CHECK(r.verdict == Cond::Holds);
    }
    SECTION("constant a and b fail with any witness")
    {
        ConditionBReport r = condition_B(*surface_n0("1", "1"));
        REQUIRE(r.verdict == Cond::Fails);
        CHECK(r.witness_c.has_value());
    }
    SECTION("witness rescales inversely under rescaling of b")
    {
        Rng rng(89);
        for (int t = 0; t < 10; ++t) {
            long num = rng.uniform(1, 5);
            long den = rng.uniform(1, 4);
            Scalar lambda = Scalar::fraction(num, den);
            VarSet v(0, 0);
            Poly a = parse_poly("2*z0 + 1", v);
            Poly b = parse_poly("z0", v);
            ConditionBReport base = condition_B(*make_surface(a, b));
            ConditionBReport scaled_r = condition_B(*make_surface(a, b.scaled(lambda)));
            REQUIRE(base.verdict == Cond::Fails);
            REQUIRE(scaled_r.verdict == Cond::Fails);
            CHECK(*scaled_r.witness_c == *base.witness_c / lambda);
        }
    }
}

TEST_CASE("condition A")
{
    SECTION("Koras-Russell: the single common zero passes both clauses")
    {
        ConditionAReport r = condition_A(*koras_russell());
        REQUIRE(r.verdict == Cond::Holds);
        REQUIRE(r.zeros.size() == 1);
        CHECK(r.zeros[0][0].is_zero());
        CHECK(r.zeros[0][1].is_zero());
    }
    SECTION("b vanishing at a common zero fails with witness")
    {
        ConditionAReport r = condition_A(*surface_n0("z0^2", "z0"));
        REQUIRE(r.verdict == Cond::Fails);
        REQUIRE(r.witness);
        CHECK((*r.witness)[0].is_zero());
        CHECK(validate_condition_A_witness(*surface_n0("z0^2", "z0"), *r.witness));
    }
    SECTION("empty common zero set holds vacuously")
    {
        ConditionAReport r = condition_A(*surface_n0("z0^2 - 1", "z0"));
        CHECK(r.verdict == Cond::Holds);
        CHECK(r.zeros.empty());
    }
    SECTION("irrational common zeros stay undecided with the blocking polynomial")
    {
        VarSet v(0, 0);
        Poly a = parse_poly("(z0^2 - 2)*(z0^2 - 2)", v);
        ConditionAReport r = condition_A(*make_surface(a, parse_poly("1", v)));
        CHECK(r.verdict == Cond::Undecided);
        CHECK_FALSE(r.reason.empty());
    }
    SECTION("two-variable elimination through the resultant")
    {
        VarSet v(1, 0);
        // a = (z0 + z1)^2 + z0 - z1: the common zeros of a and da/dz0 form
        // an empty set, certified by a constant resultant.
        Poly a = parse_poly("z0^2 + 2*z0*z1 + z1^2 + z0 - z1", v);
        ConditionAReport r = condition_A(*make_surface(a, parse_poly("1", v)));
        CHECK(r.verdict == Cond::Holds);
        CHECK(r.zeros.empty());

        // a = (z0 - z1)^2 vanishes with its partials on the whole line
        // z0 = z1: the resultant vanishes identically and the decider
        // honestly reports the blocking situation.
        Poly shared = parse_poly("z0^2 - 2*z0*z1 + z1^2", v);
        ConditionAReport rs = condition_A(*make_surface(shared, parse_poly("1", v)));
        CHECK(rs.verdict == Cond::Undecided);
        CHECK_FALSE(rs.reason.empty());

        // A clean two-variable case: a = z0^2 + z1^2 + z0 z1 only vanishes
        // with its partials at the origin.
        Poly a2 = parse_poly("z0^2 + z1^2 + z0*z1", v);
        ConditionAReport r2 = condition_A(*make_surface(a2, parse_poly("1", v)));
        REQUIRE(r2.verdict == Cond::Holds);
        REQUIRE(r2.zeros.size() == 1);
    }
}

TEST_CASE("transitivity verdicts")
{
    SECTION("Koras-Russell: both actions transitive")
    {
        TransitivityReport r = transitivity_verdict(*koras_russell());
        CHECK(r.aut_transitive == Established::Yes);
        CHECK(r.autw_transitive == Established::Yes);
    }
    SECTION("a failing condition downgrades to NOT-ESTABLISHED")
    {
        TransitivityReport r = transitivity_verdict(*surface_n0("z0^2", "z0"));
        CHECK(r.aut_transitive == Established::NotEstablished);
        CHECK(r.autw_transitive == Established::NotEstablished);
    }
    SECTION("smooth shorthand surfaces hold automatically")
    {
        for (auto [alpha, beta] : {std::pair<long, long>{1, 0}, {0, 1}, {1, 1}}) {
            SurfacePtr s = make_shorthand_surface(Scalar(alpha), Scalar(beta));
            TransitivityReport r = transitivity_verdict(*s);
            CHECK(r.aut_transitive == Established::Yes);
            CHECK(r.autw_transitive == Established::Yes);
        }
    }
}
