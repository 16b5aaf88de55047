#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "dpcert/scalar.hpp"
#include "dpcert/varset.hpp"

namespace dpcert {

// Exponent vector; entry i is the exponent of the variable with index i.
using Mono = std::vector<int>;

inline int total_degree(const Mono& m)
{
    return std::accumulate(m.begin(), m.end(), 0);
}

// Graded lexicographic order in the fixed variable order y > x > z_0 > ...
struct MonoLess {
    bool operator()(const Mono& a, const Mono& b) const
    {
        int da = total_degree(a);
        int db = total_degree(b);
        if (da != db)
            return da < db;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

enum class PolyMode { Ordinary, Laurent };

template <PolyMode M>
class PolyT {
  public:
    using TermMap = std::map<Mono, Scalar, MonoLess>;

    PolyT() = default;
    explicit PolyT(VarSet vars) : vars_(vars) {}

    static PolyT zero(VarSet vars) { return PolyT(vars); }

    static PolyT constant(VarSet vars, Scalar c)
    {
        PolyT p(vars);
        if (!c.is_zero())
            p.terms_.emplace(Mono(vars.count(), 0), std::move(c));
        return p;
    }

    static PolyT variable(VarSet vars, Var v)
    {
        return monomial(vars, v, 1, Scalar(1));
    }

    static PolyT monomial(VarSet vars, Var v, int e, Scalar c)
    {
        if (!vars.contains(v))
            throw std::invalid_argument("PolyT: variable outside VarSet");
        Mono m(vars.count(), 0);
        m[v.idx] = e;
        PolyT p(vars);
        p.add_term(m, std::move(c));
        return p;
    }

    static PolyT from_mono(VarSet vars, Mono m, Scalar c)
    {
        PolyT p(vars);
        p.add_term(std::move(m), std::move(c));
        return p;
    }

    const VarSet& vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    bool is_constant() const
    {
        return terms_.empty() ||
               (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }

    Scalar constant_part() const
    {
        Mono unit(vars_.count(), 0);
        auto it = terms_.find(unit);
        return it == terms_.end() ? Scalar(0) : it->second;
    }

    // Largest monomial in the graded lex order.
    const Mono& lead_mono() const
    {
        if (terms_.empty())
            throw std::logic_error("PolyT: leading monomial of zero");
        return terms_.rbegin()->first;
    }
    const Scalar& lead_coeff() const
    {
        if (terms_.empty())
            throw std::logic_error("PolyT: leading coefficient of zero");
        return terms_.rbegin()->second;
    }

    Scalar coeff(const Mono& m) const
    {
        auto it = terms_.find(m);
        return it == terms_.end() ? Scalar(0) : it->second;
    }

    int degree() const
    {
        int d = 0;
        bool any = false;
        for (const auto& [m, c] : terms_) {
            d = std::max(d, total_degree(m));
            any = true;
        }
        return any ? d : 0;
    }

    int degree_in(Var v) const
    {
        int d = 0;
        for (const auto& [m, c] : terms_)
            d = std::max(d, m[v.idx]);
        return d;
    }

    int min_degree_in(Var v) const
    {
        int d = 0;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            d = first ? m[v.idx] : std::min(d, m[v.idx]);
            first = false;
        }
        return d;
    }

    bool depends_on(Var v) const
    {
        for (const auto& [m, c] : terms_)
            if (m[v.idx] != 0)
                return true;
        return false;
    }

    PolyT operator-() const
    {
        PolyT r(vars_);
        for (const auto& [m, c] : terms_)
            r.terms_.emplace(m, -c);
        return r;
    }

    PolyT& operator+=(const PolyT& o)
    {
        check_same(o);
        for (const auto& [m, c] : o.terms_)
            add_term(m, c);
        return *this;
    }
    PolyT& operator-=(const PolyT& o)
    {
        check_same(o);
        for (const auto& [m, c] : o.terms_)
            add_term(m, -c);
        return *this;
    }

    friend PolyT operator+(PolyT a, const PolyT& b) { return a += b; }
    friend PolyT operator-(PolyT a, const PolyT& b) { return a -= b; }

    friend PolyT operator*(const PolyT& a, const PolyT& b)
    {
        a.check_same(b);
        PolyT r(a.vars_);
        Mono m(a.vars_.count(), 0);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                for (int i = 0; i < a.vars_.count(); ++i)
                    m[i] = ma[i] + mb[i];
                r.add_term(m, ca * cb);
            }
        }
        return r;
    }

    PolyT& operator*=(const PolyT& o) { return *this = *this * o; }

    PolyT scaled(const Scalar& c) const
    {
        PolyT r(vars_);
        if (c.is_zero())
            return r;
        for (const auto& [m, k] : terms_)
            r.terms_.emplace(m, k * c);
        return r;
    }

    PolyT pow(unsigned e) const
    {
        PolyT acc = constant(vars_, Scalar(1));
        PolyT base = *this;
        while (e) {
            if (e & 1u)
                acc = acc * base;
            base = base * base;
            e >>= 1u;
        }
        return acc;
    }

    // Multiply by x^k; k may be negative in Laurent mode.
    PolyT shifted_x(int k) const
    {
        PolyT r(vars_);
        for (const auto& [m, c] : terms_) {
            Mono s = m;
            s[Var::x().idx] += k;
            r.add_term(std::move(s), c);
        }
        return r;
    }

    // Formal partial derivative; Laurent x-exponents follow the power rule
    // for negative k as well.
    PolyT partial(Var v) const
    {
        if (!vars_.contains(v))
            throw std::invalid_argument("PolyT: derivative in unknown variable");
        PolyT r(vars_);
        for (const auto& [m, c] : terms_) {
            int e = m[v.idx];
            if (e == 0)
                continue;
            Mono s = m;
            s[v.idx] = e - 1;
            r.add_term(std::move(s), c * Scalar(e));
        }
        return r;
    }

    // Exact composition into any commutative ring value R. `bind` maps every
    // variable to its image; `one` is the ring unit. Negative exponents (only
    // possible in Laurent mode) require the binding of x to be invertible,
    // which we only support for the identity-style monomial bindings used by
    // chart computations.
    template <class R, class Fn>
    R substitute(Fn&& bind, const R& one) const
    {
        R acc = ring_scale(one, Scalar(0));
        for (const auto& [m, c] : terms_) {
            R t = ring_scale(one, c);
            for (int i = 0; i < vars_.count(); ++i) {
                int e = m[i];
                if (e == 0)
                    continue;
                if (e > 0) {
                    t = t * ring_pow(bind(Var{i}), static_cast<unsigned>(e));
                } else {
                    t = t * ring_pow_negative(bind(Var{i}), e);
                }
            }
            acc = acc + t;
        }
        return acc;
    }

    Scalar eval(const std::vector<Scalar>& point) const
    {
        if (static_cast<int>(point.size()) != vars_.count())
            throw std::invalid_argument("PolyT: evaluation point has wrong arity");
        return substitute([&](Var v) { return point[v.idx]; }, Scalar(1));
    }

    friend bool operator==(const PolyT& a, const PolyT& b)
    {
        return a.vars_ == b.vars_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const PolyT& a, const PolyT& b) { return !(a == b); }

    void add_term(Mono m, Scalar c)
    {
        if (c.is_zero())
            return;
        validate(m);
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(std::move(m), std::move(c));
        } else {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

  private:
    void check_same(const PolyT& o) const
    {
        if (vars_ != o.vars_)
            throw std::invalid_argument("PolyT: mixed variable universes");
    }

    void validate(const Mono& m) const
    {
        if (static_cast<int>(m.size()) != vars_.count())
            throw std::invalid_argument("PolyT: exponent vector has wrong arity");
        if constexpr (M == PolyMode::Ordinary) {
            for (int e : m)
                if (e < 0)
                    throw std::invalid_argument("Poly: negative exponent");
        } else {
            if (m[Var::y().idx] != 0)
                throw std::invalid_argument("LaurentPoly: y must be eliminated");
            for (int i = 0; i < static_cast<int>(m.size()); ++i)
                if (i != Var::x().idx && m[i] < 0)
                    throw std::invalid_argument("LaurentPoly: negative non-x exponent");
        }
    }

    VarSet vars_;
    TermMap terms_;
};

using Poly = PolyT<PolyMode::Ordinary>;
using LaurentPoly = PolyT<PolyMode::Laurent>;

inline Scalar ring_scale(const Scalar& v, const Scalar& c) { return v * c; }
template <PolyMode M>
PolyT<M> ring_scale(const PolyT<M>& v, const Scalar& c) { return v.scaled(c); }

inline Scalar ring_pow(const Scalar& v, unsigned e) { return v.pow(e); }
template <PolyMode M>
PolyT<M> ring_pow(const PolyT<M>& v, unsigned e) { return v.pow(e); }

inline Scalar ring_pow_negative(const Scalar& v, int e)
{
    if (v.is_zero())
        throw std::domain_error("substitute: zero to a negative power");
    return v.inverse().pow(static_cast<unsigned>(-e));
}

// A negative power of a Laurent value is only defined when the base is a
// single scalar multiple of a power of x.
inline LaurentPoly ring_pow_negative(const LaurentPoly& v, int e)
{
    if (v.term_count() != 1)
        throw std::domain_error("substitute: negative power of a non-monomial");
    const auto& [m, c] = *v.terms().begin();
    for (int i = 0; i < static_cast<int>(m.size()); ++i)
        if (i != Var::x().idx && m[i] != 0)
            throw std::domain_error("substitute: negative power base must be a monomial in x");
    LaurentPoly r = LaurentPoly::constant(v.vars(), c.inverse().pow(static_cast<unsigned>(-e)));
    return r.shifted_x(m[Var::x().idx] * e);
}

inline Poly ring_pow_negative(const Poly&, int)
{
    throw std::domain_error("substitute: negative exponent in ordinary polynomial");
}

// Embed an ordinary polynomial with no y into the Laurent chart ring.
inline LaurentPoly to_laurent(const Poly& p)
{
    LaurentPoly r(p.vars());
    for (const auto& [m, c] : p.terms())
        r.add_term(m, c);
    return r;
}

// A Laurent polynomial with no negative x-powers is an ordinary polynomial.
inline Poly laurent_to_poly(const LaurentPoly& p)
{
    Poly r(p.vars());
    for (const auto& [m, c] : p.terms())
        r.add_term(m, c);
    return r;
}

}  // namespace dpcert
