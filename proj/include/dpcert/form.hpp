#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dpcert/field.hpp"

namespace dpcert {

struct NotInRingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Differential form on the chart {x != 0} with Laurent coefficients. Basis
// 1-forms are indexed by bits: bit 0 is dx, bit 1+i is dz_i; a term maps a
// strictly increasing index set (bitmask) to a nonzero coefficient.
class ChartForm {
  public:
    using Mask = std::uint32_t;

    ChartForm(SurfacePtr s, int degree) : s_(std::move(s)), degree_(degree)
    {
        if (degree_ < 0 || degree_ > top_degree())
            throw std::invalid_argument("ChartForm: degree out of range");
    }

    static int chart_dim(const SurfaceSpec& s) { return 1 + s.vars.zvars; }
    int top_degree() const { return chart_dim(*s_); }

    const SurfacePtr& surface() const { return s_; }
    int degree() const { return degree_; }
    const std::map<Mask, LaurentPoly>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(Mask m, const LaurentPoly& c)
    {
        if (std::popcount(m) != degree_)
            throw std::invalid_argument("ChartForm: index set size does not match degree");
        if (m >= (Mask{1} << chart_dim(*s_)))
            throw std::invalid_argument("ChartForm: index outside chart");
        if (c.is_zero())
            return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    LaurentPoly coeff(Mask m) const
    {
        auto it = terms_.find(m);
        return it == terms_.end() ? LaurentPoly::zero(s_->vars) : it->second;
    }

    ChartForm operator-() const
    {
        ChartForm r(s_, degree_);
        for (const auto& [m, c] : terms_)
            r.terms_.emplace(m, -c);
        return r;
    }
    ChartForm& operator+=(const ChartForm& o)
    {
        check_compatible(o);
        for (const auto& [m, c] : o.terms_)
            add_term(m, c);
        return *this;
    }
    ChartForm& operator-=(const ChartForm& o)
    {
        check_compatible(o);
        for (const auto& [m, c] : o.terms_)
            add_term(m, -c);
        return *this;
    }
    friend ChartForm operator+(ChartForm a, const ChartForm& b) { return a += b; }
    friend ChartForm operator-(ChartForm a, const ChartForm& b) { return a -= b; }

    ChartForm scaled(const Scalar& c) const
    {
        ChartForm r(s_, degree_);
        if (c.is_zero())
            return r;
        for (const auto& [m, k] : terms_)
            r.terms_.emplace(m, k.scaled(c));
        return r;
    }

    ChartForm multiplied(const LaurentPoly& f) const
    {
        ChartForm r(s_, degree_);
        for (const auto& [m, k] : terms_)
            r.add_term(m, k * f);
        return r;
    }

    friend bool operator==(const ChartForm& a, const ChartForm& b)
    {
        return *a.s_ == *b.s_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const ChartForm& a, const ChartForm& b) { return !(a == b); }

  private:
    void check_compatible(const ChartForm& o) const
    {
        if (*s_ != *o.s_ || degree_ != o.degree_)
            throw std::invalid_argument("ChartForm: mixing degrees or surfaces");
    }

    SurfacePtr s_;
    int degree_;
    std::map<Mask, LaurentPoly> terms_;
};

// Chart image of a vector field: the d/dy component drops since y is
// eliminated on {x != 0}.
struct ChartField {
    SurfacePtr surface;
    LaurentPoly cx;
    std::vector<LaurentPoly> cz;

    const LaurentPoly& component(int chart_index) const
    {
        return chart_index == 0 ? cx : cz[chart_index - 1];
    }
};

inline ChartField chart_field(const VectorField& nu)
{
    const SurfacePtr& s = nu.surface();
    ChartField f{s, chart_project(RingElement{s, nu.cx()}), {}};
    f.cz.reserve(nu.cz().size());
    for (const auto& c : nu.cz())
        f.cz.push_back(chart_project(RingElement{s, c}));
    return f;
}

namespace detail {

inline Var chart_var(int chart_index)
{
    return chart_index == 0 ? Var::x() : Var::z(chart_index - 1);
}

inline int position_in(ChartForm::Mask set, int index)
{
    return std::popcount(set & ((ChartForm::Mask{1} << index) - 1));
}

}  // namespace detail

// omega = dx/x^2 ^ dz_0 ^ ... ^ dz_n, the top form of the family.
inline ChartForm omega(const SurfacePtr& s)
{
    int top = ChartForm::chart_dim(*s);
    ChartForm w(s, top);
    ChartForm::Mask all = (ChartForm::Mask{1} << top) - 1;
    w.add_term(all, to_laurent(Poly::constant(s->vars, Scalar(1))).shifted_x(-2));
    return w;
}

// Interior product: alternating contraction in the first slot.
inline ChartForm interior(const ChartField& nu, const ChartForm& phi)
{
    if (phi.degree() == 0)
        throw std::invalid_argument("interior: cannot contract a 0-form");
    ChartForm out(phi.surface(), phi.degree() - 1);
    for (const auto& [mask, c] : phi.terms()) {
        for (int j = 0; j < ChartForm::chart_dim(*phi.surface()); ++j) {
            if (!(mask & (ChartForm::Mask{1} << j)))
                continue;
            const LaurentPoly& comp = nu.component(j);
            if (comp.is_zero())
                continue;
            int pos = detail::position_in(mask, j);
            LaurentPoly contrib = comp * c;
            if (pos % 2 == 1)
                contrib = -contrib;
            out.add_term(mask & ~(ChartForm::Mask{1} << j), contrib);
        }
    }
    return out;
}

// Exterior derivative; the differential of a top form is the zero form one
// degree up, reported as an empty form of top degree.
inline ChartForm ext_d(const ChartForm& phi)
{
    int top = phi.top_degree();
    if (phi.degree() == top)
        return ChartForm(phi.surface(), top);  // zero: nothing above top degree
    ChartForm out(phi.surface(), phi.degree() + 1);
    for (const auto& [mask, c] : phi.terms()) {
        for (int j = 0; j < ChartForm::chart_dim(*phi.surface()); ++j) {
            if (mask & (ChartForm::Mask{1} << j))
                continue;
            LaurentPoly dc = c.partial(detail::chart_var(j));
            if (dc.is_zero())
                continue;
            if (detail::position_in(mask, j) % 2 == 1)
                dc = -dc;
            out.add_term(mask | (ChartForm::Mask{1} << j), dc);
        }
    }
    return out;
}

inline ChartForm wedge(const ChartForm& a, const ChartForm& b)
{
    if (*a.surface() != *b.surface())
        throw std::invalid_argument("wedge: surface mismatch");
    int d = a.degree() + b.degree();
    if (d > a.top_degree())
        return ChartForm(a.surface(), a.top_degree());  // zero above top
    ChartForm out(a.surface(), d);
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) {
            if (ma & mb)
                continue;
            int inversions = 0;
            for (int j = 0; j < ChartForm::chart_dim(*a.surface()); ++j)
                if (mb & (ChartForm::Mask{1} << j))
                    inversions += std::popcount(ma & ~((ChartForm::Mask{1} << (j + 1)) - 1));
            LaurentPoly c = ca * cb;
            if (inversions % 2 == 1)
                c = -c;
            out.add_term(ma | mb, c);
        }
    }
    return out;
}

// A 0-form from a ring element, and the basis wedge dz_0 ^ .. skip i .. ^ dz_n
// helpers used by identity suites.
inline ChartForm chart_zero_form(const RingElement& f)
{
    ChartForm out(f.surface, 0);
    out.add_term(0, chart_project(f));
    return out;
}

inline ChartForm theta_form(const VectorField& nu)
{
    return interior(chart_field(nu), omega(nu.surface()));
}

struct ThetaResult {
    ChartForm form;
    bool closed = false;  // i.e. the field is volume preserving
};

inline ThetaResult theta(const VectorField& nu)
{
    ThetaResult r{theta_form(nu), false};
    r.closed = ext_d(r.form).is_zero();
    return r;
}

inline ChartForm psi(const VectorField& nu, const VectorField& mu)
{
    return interior(chart_field(nu), interior(chart_field(mu), omega(nu.surface())));
}

// Exact inverse of the chart projection on a bounded-degree window: an
// echelonized span of the chart images of the basis monomials, with the
// ring-side combination tracked so membership yields the preimage.
class ChartInverter {
  public:
    ChartInverter(SurfacePtr s, int degree_bound) : s_(std::move(s))
    {
        for (RingElement& b : basis_monomials(s_, degree_bound)) {
            LaurentPoly img = chart_project(b);
            Poly combo = b.nf;
            reduce(img, combo);
            if (!img.is_zero())
                insert(std::move(img), std::move(combo));
        }
    }

    // Preimage of g under the chart projection, if any within the window.
    std::optional<RingElement> invert(LaurentPoly g) const
    {
        Poly combo = Poly::zero(s_->vars);
        reduce(g, combo);
        if (!g.is_zero())
            return std::nullopt;
        return RingElement{s_, -combo};
    }

  private:
    struct Row {
        LaurentPoly image;  // reduced, monic
        Poly combo;         // ring element with chart image == image
    };

    void insert(LaurentPoly img, Poly combo)
    {
        Scalar inv = img.lead_coeff().inverse();
        rows_.emplace(img.lead_mono(), Row{img.scaled(inv), combo.scaled(inv)});
    }

    // Eliminate leading terms of g against the rows; combo accumulates the
    // used combination so that chart(combo) + g stays invariant.
    void reduce(LaurentPoly& g, Poly& combo) const
    {
        while (!g.is_zero()) {
            auto it = rows_.find(g.lead_mono());
            if (it == rows_.end())
                return;
            Scalar c = g.lead_coeff();
            g -= it->second.image.scaled(c);
            combo -= it->second.combo.scaled(c);
        }
    }

    SurfacePtr s_;
    std::map<Mono, Row, MonoLess> rows_;
};

inline int default_divergence_bound(const VectorField& nu)
{
    int coeff_deg = std::max(nu.cx().degree(), nu.cy().degree());
    for (const auto& c : nu.cz())
        coeff_deg = std::max(coeff_deg, c.degree());
    const SurfaceSpec& s = *nu.surface();
    return coeff_deg + s.a.degree() + s.b.degree() + 4;
}

// d(i_nu omega) = (div nu) . omega; the chart quotient is the dx^dz...
// coefficient times x^2. The result is certified to be the chart image of a
// ring element, directly when no negative x-powers remain and otherwise via
// a bounded-degree solve.
inline RingElement divergence(const VectorField& nu, const ChartInverter* inverter = nullptr,
                              int degree_bound = -1)
{
    const SurfacePtr& s = nu.surface();
    ChartForm di = ext_d(theta_form(nu));
    ChartForm::Mask all = (ChartForm::Mask{1} << ChartForm::chart_dim(*s)) - 1;
    LaurentPoly div_chart = di.coeff(all).shifted_x(2);
    if (div_chart.is_zero())
        return ring_zero(s);
    if (div_chart.min_degree_in(Var::x()) >= 0)
        return RingElement{s, laurent_to_poly(div_chart)};
    if (inverter) {
        if (auto e = inverter->invert(div_chart))
            return *e;
        throw NotInRingError("divergence: no ring preimage within the inverter window");
    }
    if (degree_bound < 0)
        degree_bound = default_divergence_bound(nu);
    ChartInverter local(s, degree_bound);
    if (auto e = local.invert(div_chart))
        return *e;
    throw NotInRingError("divergence: no ring preimage within degree " +
                         std::to_string(degree_bound));
}

inline std::string to_string(const ChartForm& phi)
{
    if (phi.is_zero())
        return "0";
    const VarSet& vars = phi.surface()->vars;
    std::string out;
    for (const auto& [mask, c] : phi.terms()) {
        if (!out.empty())
            out += " + ";
        out += "(" + to_string(c) + ")";
        for (int j = 0; j < ChartForm::chart_dim(*phi.surface()); ++j) {
            if (!(mask & (ChartForm::Mask{1} << j)))
                continue;
            out += " ∧ d" + vars.name(detail::chart_var(j));
        }
    }
    return out;
}

}  // namespace dpcert
