#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "dpcert/poly.hpp"
#include "dpcert/uni.hpp"

namespace dpcert {

// Descriptor of one member of the family {x^2 y = a(z) + x b(z)}. a and b
// are polynomials in the z variables (parameter indeterminates allowed);
// k_window is the largest k with deg_{z_i} a <= 2 and deg_{z_i} b <= 1 for
// all i <= k, or empty when even i = 0 violates the bounds.
struct SurfaceSpec {
    VarSet vars;
    Poly a;
    Poly b;
    std::optional<int> k_window;

    int n() const { return vars.n_family(); }

    Poly defining_poly() const
    {
        Poly p = Poly::monomial(vars, Var::x(), 2, Scalar(1)) * Poly::variable(vars, Var::y());
        p -= a;
        p -= Poly::variable(vars, Var::x()) * b;
        return p;
    }

    // a + x b, the right-hand side of the defining relation.
    Poly relation_rhs() const { return a + Poly::variable(vars, Var::x()) * b; }

    friend bool operator==(const SurfaceSpec& s, const SurfaceSpec& t)
    {
        return s.vars == t.vars && s.a == t.a && s.b == t.b;
    }
    friend bool operator!=(const SurfaceSpec& s, const SurfaceSpec& t) { return !(s == t); }
};

using SurfacePtr = std::shared_ptr<const SurfaceSpec>;

namespace detail {

inline std::optional<int> widest_k_window(const VarSet& vars, const Poly& a, const Poly& b)
{
    std::optional<int> k;
    for (int i = 0; i < vars.zvars; ++i) {
        if (a.degree_in(Var::z(i)) <= 2 && b.degree_in(Var::z(i)) <= 1)
            k = i;
        else
            break;
    }
    return k;
}

}  // namespace detail

inline SurfacePtr make_surface(Poly a, Poly b)
{
    if (a.vars() != b.vars())
        throw std::invalid_argument("make_surface: a and b use different variables");
    for (Var v : {Var::x(), Var::y()}) {
        if (a.depends_on(v) || b.depends_on(v))
            throw std::invalid_argument("make_surface: a and b must only involve z variables");
    }
    SurfaceSpec s;
    s.vars = a.vars();
    s.k_window = detail::widest_k_window(s.vars, a, b);
    s.a = std::move(a);
    s.b = std::move(b);
    return std::make_shared<const SurfaceSpec>(std::move(s));
}

// The n = 0 two-parameter family {x^2 y = z^2 - beta + alpha x}.
inline SurfacePtr make_shorthand_surface(const Scalar& alpha, const Scalar& beta)
{
    VarSet vars(0, 0);
    Poly a = Poly::monomial(vars, Var::z(0), 2, Scalar(1)) - Poly::constant(vars, beta);
    Poly b = Poly::constant(vars, alpha);
    return make_surface(std::move(a), std::move(b));
}

// Same family with alpha and beta adjoined as commuting indeterminates, so
// identity suites hold for all parameter values at once.
inline SurfacePtr make_symbolic_shorthand()
{
    VarSet vars(0, 2);
    Poly a = Poly::monomial(vars, Var::z(0), 2, Scalar(1)) -
             Poly::variable(vars, vars.param(1));
    Poly b = Poly::variable(vars, vars.param(0));
    return make_surface(std::move(a), std::move(b));
}

inline bool shorthand_smooth(const Scalar& alpha, const Scalar& beta)
{
    return !(alpha.is_zero() && beta.is_zero());
}

// Recognize a concrete n = 0 surface that is literally of the shorthand
// shape z^2 - beta + alpha x; returns (alpha, beta) when it is.
inline std::optional<std::pair<Scalar, Scalar>> recognize_shorthand(const SurfaceSpec& s)
{
    if (s.n() != 0 || s.vars.params != 0)
        return std::nullopt;
    if (!s.b.is_constant())
        return std::nullopt;
    Var z = Var::z(0);
    if (s.a.degree_in(z) != 2)
        return std::nullopt;
    Mono sq(s.vars.count(), 0);
    sq[z.idx] = 2;
    Mono lin(s.vars.count(), 0);
    lin[z.idx] = 1;
    if (s.a.coeff(sq) != Scalar(1) || !s.a.coeff(lin).is_zero())
        return std::nullopt;
    if (s.a.term_count() > 2)
        return std::nullopt;
    return std::make_pair(s.b.constant_part(), -s.a.constant_part());
}

namespace detail {

inline bool divisible_by_x2y(const Mono& m)
{
    return m[Var::x().idx] >= 2 && m[Var::y().idx] >= 1;
}

inline Poly mul_monomial(const Poly& p, const Mono& m, const Scalar& c)
{
    Poly r(p.vars());
    Mono s(m.size(), 0);
    for (const auto& [pm, pc] : p.terms()) {
        for (std::size_t i = 0; i < m.size(); ++i)
            s[i] = pm[i] + m[i];
        r.add_term(s, pc * c);
    }
    return r;
}

}  // namespace detail

// Rewrite x^2 y -> a + x b until no monomial is divisible by x^2 y. Each
// rewrite lowers the y-degree of the affected monomial, so this terminates,
// and the single rewrite rule makes the result unique.
inline Poly reduce_against_relation(Poly p, const SurfaceSpec& s)
{
    const Poly rhs = s.relation_rhs();
    while (true) {
        std::vector<std::pair<Mono, Scalar>> offending;
        for (const auto& [m, c] : p.terms())
            if (detail::divisible_by_x2y(m))
                offending.emplace_back(m, c);
        if (offending.empty())
            return p;
        for (auto& [m, c] : offending) {
            p.add_term(m, -c);
            Mono q = m;
            q[Var::x().idx] -= 2;
            q[Var::y().idx] -= 1;
            p += detail::mul_monomial(rhs, q, c);
        }
    }
}

// Element of the quotient coordinate ring, stored by its unique normal form
// (no monomial divisible by x^2 y).
struct RingElement {
    SurfacePtr surface;
    Poly nf;

    bool is_zero() const { return nf.is_zero(); }
    int degree() const { return nf.degree(); }

    friend bool operator==(const RingElement& a, const RingElement& b)
    {
        return *a.surface == *b.surface && a.nf == b.nf;
    }
    friend bool operator!=(const RingElement& a, const RingElement& b) { return !(a == b); }
};

inline void check_same_surface(const RingElement& a, const RingElement& b)
{
    if (*a.surface != *b.surface)
        throw std::invalid_argument("RingElement: surface mismatch");
}

inline RingElement normal_form(Poly p, const SurfacePtr& s)
{
    return RingElement{s, reduce_against_relation(std::move(p), *s)};
}

inline RingElement ring_zero(const SurfacePtr& s)
{
    return RingElement{s, Poly::zero(s->vars)};
}

inline RingElement ring_constant(const SurfacePtr& s, Scalar c)
{
    return RingElement{s, Poly::constant(s->vars, std::move(c))};
}

inline RingElement operator+(const RingElement& a, const RingElement& b)
{
    check_same_surface(a, b);
    return RingElement{a.surface, a.nf + b.nf};
}

inline RingElement operator-(const RingElement& a, const RingElement& b)
{
    check_same_surface(a, b);
    return RingElement{a.surface, a.nf - b.nf};
}

inline RingElement operator-(const RingElement& a)
{
    return RingElement{a.surface, -a.nf};
}

inline RingElement operator*(const RingElement& a, const RingElement& b)
{
    check_same_surface(a, b);
    return normal_form(a.nf * b.nf, a.surface);
}

inline RingElement scaled(const RingElement& a, const Scalar& c)
{
    return RingElement{a.surface, a.nf.scaled(c)};
}

// All monomials of total degree <= d in the coordinates x, y, z (parameters
// excluded) that survive the rewrite, in increasing monomial order.
inline std::vector<RingElement> basis_monomials(const SurfacePtr& s, int d)
{
    if (d < 0)
        throw std::invalid_argument("basis_monomials: negative degree");
    const VarSet& vars = s->vars;
    std::vector<Mono> out;
    Mono m(vars.count(), 0);
    int coords = 2 + vars.zvars;
    auto rec = [&](auto&& self, int idx, int remaining) -> void {
        if (idx == coords) {
            if (!detail::divisible_by_x2y(m))
                out.push_back(m);
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            m[idx] = e;
            self(self, idx + 1, remaining - e);
        }
        m[idx] = 0;
    };
    rec(rec, 0, d);
    std::sort(out.begin(), out.end(), MonoLess{});
    std::vector<RingElement> elems;
    elems.reserve(out.size());
    for (auto& mono : out)
        elems.push_back(RingElement{s, Poly::from_mono(vars, std::move(mono), Scalar(1))});
    return elems;
}

// Chart projection onto {x != 0}: substitute y = (a + x b) / x^2. Injective
// on ring elements since the chart is dense.
inline LaurentPoly chart_project(const RingElement& e)
{
    const SurfaceSpec& s = *e.surface;
    const VarSet& vars = s.vars;
    LaurentPoly y_chart = to_laurent(s.relation_rhs()).shifted_x(-2);
    LaurentPoly one = LaurentPoly::constant(vars, Scalar(1));
    return e.nf.substitute(
        [&](Var v) -> LaurentPoly {
            if (v == Var::y())
                return y_chart;
            return LaurentPoly::variable(vars, v);
        },
        one);
}

struct HypothesisReport {
    bool deg_a_z0_ok = false;       // deg_{z0} a <= 2
    bool deg_b_z0_ok = false;       // deg_{z0} b <= 1
    bool z0_nondegenerate = false;  // not both deg_{z0} a and deg_{z0} b zero
    std::optional<int> k_window;
    std::optional<bool> smooth;  // decided only for n = 0 without parameters

    bool main_theorem_hypotheses() const
    {
        return deg_a_z0_ok && deg_b_z0_ok && z0_nondegenerate;
    }
};

// For n = 0 the surface is singular iff a, a' and b share a zero, i.e. iff
// gcd(a, a', b) is non-constant over Q(i)[z0].
inline std::optional<bool> surface_smooth_n0(const SurfaceSpec& s)
{
    if (s.n() != 0 || s.vars.params != 0)
        return std::nullopt;
    UniPoly a = UniPoly::from_poly(s.a, Var::z(0));
    UniPoly b = UniPoly::from_poly(s.b, Var::z(0));
    UniPoly g = gcd(gcd(a, a.derivative()), b);
    if (g.is_zero())
        return false;
    return g.degree() == 0;
}

inline HypothesisReport hypothesis_report(const SurfaceSpec& s)
{
    HypothesisReport r;
    Var z0 = Var::z(0);
    r.deg_a_z0_ok = s.a.degree_in(z0) <= 2;
    r.deg_b_z0_ok = s.b.degree_in(z0) <= 1;
    r.z0_nondegenerate = s.a.depends_on(z0) || s.b.depends_on(z0);
    r.k_window = detail::widest_k_window(s.vars, s.a, s.b);
    r.smooth = surface_smooth_n0(s);
    return r;
}

}  // namespace dpcert
