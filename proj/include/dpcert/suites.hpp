#pragma once

#include <chrono>
#include <functional>
#include <random>

#include "dpcert/biholo.hpp"
#include "dpcert/form.hpp"
#include "dpcert/saturate.hpp"

namespace dpcert {

struct SuiteContext {
    std::uint64_t seed = 0;
    bool corrupt_vz = false;  // swap in the known-bad v_z variant
};

struct SuiteResult {
    std::string name;
    bool pass = true;
    std::string detail;
    double wall_ms = 0.0;
};

namespace suites_detail {

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    int uniform(int lo, int hi)
    {
        std::uniform_int_distribution<int> d(lo, hi);
        return d(eng);
    }
    bool flip() { return uniform(0, 1) == 1; }
    Scalar small_scalar()
    {
        long num = uniform(-3, 3);
        if (num == 0)
            num = 1;
        return Scalar::fraction(num, uniform(1, 2));
    }
};

inline Poly random_z_poly(Rng& rng, const VarSet& vars, int deg_z0_max, int deg_other_max,
                          int terms)
{
    Poly p(vars);
    for (int t = 0; t < terms; ++t) {
        Mono m(vars.count(), 0);
        m[Var::z(0).idx] = rng.uniform(0, deg_z0_max);
        for (int i = 1; i < vars.zvars; ++i)
            m[Var::z(i).idx] = rng.uniform(0, deg_other_max);
        p.add_term(std::move(m), rng.small_scalar());
    }
    return p;
}

inline SurfacePtr random_admissible(Rng& rng, int n)
{
    VarSet vars(n, 0);
    while (true) {
        Poly a = random_z_poly(rng, vars, 2, 2, rng.uniform(1, 4));
        Poly b = random_z_poly(rng, vars, 1, 1, rng.uniform(1, 3));
        if (!a.depends_on(Var::z(0)) && !b.depends_on(Var::z(0)))
            continue;
        bool windowed = true;
        for (int i = 0; i < vars.zvars; ++i)
            windowed = windowed && a.degree_in(Var::z(i)) <= 2 && b.degree_in(Var::z(i)) <= 1;
        if (windowed && a.degree() <= 3 && b.degree() <= 3)
            return make_surface(std::move(a), std::move(b));
    }
}

inline SurfacePtr koras_russell()
{
    VarSet v(1, 0);
    return make_surface(parse_poly("-(z0^2 + z1^3)", v), parse_poly("-1", v));
}

inline RingElement elem(const SurfacePtr& s, const std::string& text)
{
    return normal_form(parse_poly(text, s->vars), s);
}

inline Poly kernel_poly(Rng& rng, const SurfacePtr& s, bool for_vx, int idx)
{
    const VarSet& vars = s->vars;
    Poly p(vars);
    int terms = rng.uniform(1, 3);
    for (int t = 0; t < terms; ++t) {
        Mono m(vars.count(), 0);
        if (for_vx)
            m[Var::x().idx] = rng.uniform(0, 2);
        else
            m[Var::y().idx] = rng.uniform(0, 2);
        for (int i = 0; i < vars.zvars; ++i)
            if (i != idx)
                m[Var::z(i).idx] = rng.uniform(0, 1);
        p.add_term(std::move(m), rng.small_scalar());
    }
    if (p.is_zero())
        p = Poly::constant(vars, Scalar(1));
    return p;
}

using SuiteFn = std::function<SuiteResult(const SuiteContext&)>;

inline SuiteResult make_result(const std::string& name, bool pass, std::string detail)
{
    SuiteResult r;
    r.name = name;
    r.pass = pass;
    r.detail = std::move(detail);
    return r;
}

// --- the derivation identities on the symbolic two-parameter family -------

inline SuiteResult suite_eq(int which, const SuiteContext&)
{
    SurfacePtr s = make_symbolic_shorthand();
    const VarSet& v = s->vars;
    VectorField vx = build_vx(s, 0);
    VectorField vy = build_vy(s, 0);
    Poly alpha = Poly::variable(v, v.param(0));
    Poly beta = Poly::variable(v, v.param(1));
    Poly x = Poly::variable(v, Var::x());
    Poly y = Poly::variable(v, Var::y());
    Poly z = Poly::variable(v, Var::z(0));
    Poly two_xy = (x * y).scaled(Scalar(2));
    Poly z2 = z * z;

    int instances = 0;
    for (int i = 0; i <= 6; ++i) {
        for (int k = 0; k <= 6; ++k) {
            bool ok = true;
            switch (which) {
                case 1: {  // y^j v_y(z^{k+1}) = (k+1) y^j z^k (2xy - alpha)
                    RingElement lhs = apply(vy, elem(s, "z0^" + std::to_string(k + 1)));
                    Poly rhs = (two_xy - alpha).scaled(Scalar(k + 1)) * z.pow(k);
                    Poly yj = y.pow(i);
                    ok = normal_form(yj * lhs.nf, s) == normal_form(yj * rhs, s);
                    break;
                }
                case 2: {  // v_y(x^{i+1}) = 2(i+1) x^i z
                    RingElement lhs = apply(vy, elem(s, "x^" + std::to_string(i + 1)));
                    ok = lhs.nf == (x.pow(i) * z).scaled(Scalar(2 * (i + 1)));
                    break;
                }
                case 3: {  // v_y(x^{i+1} z^{k+1}) = x^i z^k (2(i+1)z^2 + (k+1)(2z^2-2beta+alpha x))
                    RingElement lhs = apply(
                        vy, RingElement{s, x.pow(i + 1) * z.pow(k + 1)});
                    Poly inner = z2.scaled(Scalar(2 * (i + 1))) +
                                 (z2.scaled(Scalar(2)) - beta.scaled(Scalar(2)) + alpha * x)
                                     .scaled(Scalar(k + 1));
                    ok = lhs == normal_form(x.pow(i) * z.pow(k) * inner, s);
                    break;
                }
                case 4: {  // v_x(y^{j+1}) = 2(j+1) y^j z
                    RingElement lhs = apply(vx, elem(s, "y^" + std::to_string(i + 1)));
                    ok = lhs.nf == (y.pow(i) * z).scaled(Scalar(2 * (i + 1)));
                    break;
                }
                default: {  // v_x(y^{j+1} z^{k+1}) = y^j z^k (2(j+1)z^2 + (k+1)(z^2-beta+alpha x))
                    RingElement lhs = apply(
                        vx, RingElement{s, y.pow(i + 1) * z.pow(k + 1)});
                    Poly inner = z2.scaled(Scalar(2 * (i + 1))) +
                                 (z2 - beta + alpha * x).scaled(Scalar(k + 1));
                    ok = lhs == normal_form(y.pow(i) * z.pow(k) * inner, s);
                    break;
                }
            }
            ++instances;
            if (!ok)
                return make_result("eq" + std::to_string(which), false,
                                   "identity fails at indices (" + std::to_string(i) + ", " +
                                       std::to_string(k) + ")");
        }
    }
    return make_result("eq" + std::to_string(which), true,
                       std::to_string(instances) + " symbolic instances");
}

inline SuiteResult suite_tangency(const SuiteContext& ctx)
{
    std::vector<SurfacePtr> surfaces{koras_russell(), make_symbolic_shorthand()};
    Rng rng(ctx.seed + 1);
    for (int t = 0; t < 10; ++t)
        surfaces.push_back(random_admissible(rng, rng.uniform(0, 2)));

    int fields = 0;
    for (const SurfacePtr& s : surfaces) {
        std::vector<VectorField> catalogue;
        for (int i = 0; i < s->vars.zvars; ++i)
            catalogue.push_back(build_vx(s, i));
        for (int j = 0; j <= s->k_window.value_or(-1); ++j)
            catalogue.push_back(build_vy(s, j));
        if (ctx.corrupt_vz && s->n() == 0)
            catalogue.push_back(build_vz_corrupted(s));
        else
            catalogue.push_back(build_vz(s));
        for (const VectorField& f : catalogue) {
            ++fields;
            Poly residual = reduce_against_relation(f.apply_ambient(s->defining_poly()), *s);
            if (!residual.is_zero())
                return make_result("tangency", false,
                                   "field is not tangent; residual " + to_string(residual));
        }
    }
    return make_result("tangency", true, std::to_string(fields) + " fields annihilate the relation");
}

inline SuiteResult suite_interior(const SuiteContext& ctx)
{
    Rng rng(ctx.seed + 2);
    std::vector<SurfacePtr> surfaces{koras_russell(), random_admissible(rng, 2)};
    int instances = 0;
    for (const SurfacePtr& s : surfaces) {
        int dim = ChartForm::chart_dim(*s);
        ChartForm::Mask all = (ChartForm::Mask{1} << dim) - 1;
        for (int i = 0; i < s->vars.zvars; ++i) {
            ChartForm expected(s, dim - 1);
            expected.add_term(all & ~(ChartForm::Mask{1} << (1 + i)),
                              to_laurent(Poly::constant(s->vars, (i % 2 == 0) ? Scalar(-1)
                                                                              : Scalar(1))));
            ++instances;
            if (interior(chart_field(build_vx(s, i)), omega(s)) != expected)
                return make_result("interior", false,
                                   "contraction of v_x^" + std::to_string(i) + " is off");
        }
        for (int j = 0; j <= s->k_window.value_or(-1); ++j) {
            ChartForm dzs(s, dim - 2);
            dzs.add_term(all & ~1u & ~(ChartForm::Mask{1} << (1 + j)),
                         to_laurent(Poly::constant(s->vars, Scalar(1))));
            ChartForm expected = wedge(ext_d(chart_zero_form(elem(s, "y"))), dzs);
            if (j % 2 == 1)
                expected = -expected;
            ++instances;
            if (interior(chart_field(build_vy(s, j)), omega(s)) != expected)
                return make_result("interior", false,
                                   "contraction of v_y^" + std::to_string(j) + " is off");
        }
    }
    return make_result("interior", true, std::to_string(instances) + " contractions match");
}

inline SuiteResult suite_theta(const SuiteContext&)
{
    SurfacePtr s = make_symbolic_shorthand();
    VectorField vx = build_vx(s, 0);
    VectorField vy = build_vy(s, 0);
    for (int k = 0; k <= 6; ++k) {
        RingElement xk = elem(s, "x^" + std::to_string(k));
        RingElement yk = elem(s, "y^" + std::to_string(k));
        ThetaResult tx = theta(xk * vx);
        ThetaResult ty = theta(yk * vy);
        bool ok = tx.closed && ty.closed &&
                  tx.form.scaled(Scalar(k + 1)) ==
                      -ext_d(chart_zero_form(elem(s, "x^" + std::to_string(k + 1)))) &&
                  ty.form.scaled(Scalar(k + 1)) ==
                      ext_d(chart_zero_form(elem(s, "y^" + std::to_string(k + 1))));
        if (!ok)
            return make_result("theta", false, "correspondence fails at k = " + std::to_string(k));
    }
    return make_result("theta", true, "14 symbolic primitives match");
}

inline SuiteResult suite_divergence(const SuiteContext&)
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
        bool ok = divergence(xk * vx).is_zero() && divergence(yk * vy).is_zero() &&
                  divergence(zxk * vx) == elem(s, "x^" + std::to_string(k + 2));
        RingElement expected =
            normal_form(beta * zk.nf, s) - elem(s, "z0^" + std::to_string(k + 2));
        ok = ok && divergence(zk * vz) == expected;
        if (!ok)
            return make_result("divergence", false, "divergence law fails at k = " + std::to_string(k));
    }
    return make_result("divergence", true,
                       "28 symbolic divergences match (z^k v_z carries the beta correction)");
}

inline SuiteResult suite_div_bracket(const SuiteContext& ctx)
{
    Rng rng(ctx.seed + 3);
    SurfacePtr s = make_shorthand_surface(Scalar(1), Scalar(1));
    ChartInverter inverter(s, 14);
    auto random_tangent = [&]() {
        Poly f(s->vars);
        Mono m(s->vars.count(), 0);
        m[Var::x().idx] = rng.uniform(0, 2);
        m[Var::y().idx] = rng.uniform(0, 1);
        m[Var::z(0).idx] = rng.uniform(0, 2);
        f.add_term(std::move(m), rng.small_scalar());
        RingElement fe = normal_form(f, s);
        switch (rng.uniform(0, 2)) {
            case 0: return fe * build_vx(s, 0);
            case 1: return fe * build_vy(s, 0);
            default: return fe * build_vz(s);
        }
    };
    for (int t = 0; t < 20; ++t) {
        VectorField v1 = random_tangent();
        VectorField v2 = random_tangent();
        RingElement lhs = divergence(bracket(v1, v2), &inverter);
        RingElement rhs =
            apply(v1, divergence(v2, &inverter)) - apply(v2, divergence(v1, &inverter));
        if (lhs != rhs)
            return make_result("div-bracket", false, "bracket divergence law fails");
        VectorField nu = random_tangent();
        RingElement f = normal_form(
            Poly::monomial(s->vars, Var::z(0), rng.uniform(0, 2), rng.small_scalar()), s);
        if (divergence(f * nu, &inverter) != f * divergence(nu, &inverter) + apply(nu, f))
            return make_result("div-bracket", false, "divergence product rule fails");
    }
    return make_result("div-bracket", true, "20 random bracket and product instances");
}

inline SuiteResult suite_contract(const SuiteContext& ctx)
{
    Rng rng(ctx.seed + 4);
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
        if (theta_form(bracket(a, b)) != ext_d(psi(a, b)))
            return make_result("contract", false, "bracket contraction identity fails");
    }
    return make_result("contract", true, "20 volume preserving pairs");
}

inline SuiteResult suite_primitive(const SuiteContext& ctx)
{
    Rng rng(ctx.seed + 5);
    SurfacePtr s = make_shorthand_surface(Scalar(2), Scalar(1));
    for (int k = 0; k <= 3; ++k) {
        VectorField v1 = elem(s, "x^" + std::to_string(k)) * build_vx(s, 0);
        RingElement f =
            scaled(elem(s, "x^" + std::to_string(k + 1)), Scalar::fraction(-1, k + 1));
        if (theta_form(v1) != ext_d(chart_zero_form(f)))
            return make_result("primitive", false, "primitive of x^k v_x is off");
        for (int t = 0; t < 3; ++t) {
            VectorField v2 = elem(s, "y^" + std::to_string(rng.uniform(0, 2))) * build_vy(s, 0);
            if (theta_form(bracket(v2, v1)) != ext_d(chart_zero_form(apply(v2, f))))
                return make_result("primitive", false, "primitive transport fails");
        }
    }
    return make_result("primitive", true, "16 primitive transports match");
}

inline SuiteResult suite_multiplier(const SuiteContext& ctx)
{
    Rng rng(ctx.seed + 6);
    SurfacePtr s = koras_russell();
    VectorField nu = build_vx(s, 1);
    VectorField mu = build_vy(s, 0);
    RingElement h = elem(s, "z1");
    for (int t = 0; t < 20; ++t) {
        RingElement f = normal_form(kernel_poly(rng, s, true, 1), s);
        RingElement g = normal_form(kernel_poly(rng, s, false, 0), s);
        VectorField lhs = bracket(f * nu, (g * h) * mu) - bracket((f * h) * nu, g * mu);
        if (lhs != ((f * g) * apply(nu, h)) * mu)
            return make_result("multiplier", false, "bracket multiplier identity fails");
    }
    return make_result("multiplier", true, "20 kernel-multiplied instances");
}

inline SuiteResult suite_jacobi(const SuiteContext& ctx)
{
    Rng rng(ctx.seed + 7);
    SurfacePtr s = random_admissible(rng, 1);
    auto random_field = [&]() {
        switch (rng.uniform(0, 2)) {
            case 0: {
                int i = rng.uniform(0, 1);
                return normal_form(kernel_poly(rng, s, true, i), s) * build_vx(s, i);
            }
            case 1: {
                int j = std::min(rng.uniform(0, 1), s->k_window.value_or(0));
                return normal_form(kernel_poly(rng, s, false, j), s) * build_vy(s, j);
            }
            default:
                return normal_form(random_z_poly(rng, s->vars, 1, 1, 2), s) * build_vz(s);
        }
    };
    for (int t = 0; t < 20; ++t) {
        VectorField a = random_field();
        VectorField b = random_field();
        VectorField c = random_field();
        if (!(bracket(a, b) + bracket(b, a)).is_zero())
            return make_result("jacobi", false, "antisymmetry fails");
        VectorField jac =
            bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b));
        if (!jac.is_zero())
            return make_result("jacobi", false, "Jacobi identity fails");
    }
    return make_result("jacobi", true, "20 random triples");
}

inline SuiteResult suite_biholo(const SuiteContext&)
{
    for (const Scalar& alpha : {Scalar(1), Scalar(2), Scalar::imaginary_unit(), Scalar(0)}) {
        BiholoCheck c = biholomorphism_check(alpha);
        if (!c.ok)
            return make_result("biholo", false,
                               "transport identity fails; residual " + to_string(c.residual));
    }
    BiholoCheck perturbed = biholomorphism_check(Scalar(1), /*perturbed=*/true);
    if (perturbed.ok)
        return make_result("biholo", false, "perturbed map unexpectedly passes");
    return make_result("biholo", true,
                       "identity exact for four parameter values; perturbed map rejected");
}

}  // namespace suites_detail

inline const std::vector<std::pair<std::string, suites_detail::SuiteFn>>& lemma_suites()
{
    using namespace suites_detail;
    static const std::vector<std::pair<std::string, SuiteFn>> registry = {
        {"eq1", [](const SuiteContext& c) { return suite_eq(1, c); }},
        {"eq2", [](const SuiteContext& c) { return suite_eq(2, c); }},
        {"eq3", [](const SuiteContext& c) { return suite_eq(3, c); }},
        {"eq4", [](const SuiteContext& c) { return suite_eq(4, c); }},
        {"eq5", [](const SuiteContext& c) { return suite_eq(5, c); }},
        {"tangency", suite_tangency},
        {"interior", suite_interior},
        {"theta", suite_theta},
        {"divergence", suite_divergence},
        {"div-bracket", suite_div_bracket},
        {"contract", suite_contract},
        {"primitive", suite_primitive},
        {"multiplier", suite_multiplier},
        {"jacobi", suite_jacobi},
        {"biholo", suite_biholo},
    };
    return registry;
}

// Run all suites (or one, by name); unknown names throw.
inline std::vector<SuiteResult> run_lemma_suites(const SuiteContext& ctx,
                                                 const std::string& filter = "")
{
    std::vector<SuiteResult> results;
    bool matched = false;
    for (const auto& [name, fn] : lemma_suites()) {
        if (!filter.empty() && name != filter)
            continue;
        matched = true;
        auto start = std::chrono::steady_clock::now();
        SuiteResult r = fn(ctx);
        r.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
        results.push_back(std::move(r));
    }
    if (!filter.empty() && !matched)
        throw std::invalid_argument("unknown suite: " + filter);
    return results;
}

}  // namespace dpcert
