#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dpcert/poly.hpp"

namespace dpcert {

// Dense univariate polynomial over Q(i), coefficients ascending.
class UniPoly {
  public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) { trim(); }

    static UniPoly from_poly(const Poly& p, Var v)
    {
        std::vector<Scalar> c;
        for (const auto& [m, k] : p.terms()) {
            for (int i = 0; i < static_cast<int>(m.size()); ++i)
                if (i != v.idx && m[i] != 0)
                    throw std::invalid_argument("UniPoly: input is not univariate");
            int e = m[v.idx];
            if (static_cast<int>(c.size()) <= e)
                c.resize(e + 1, Scalar(0));
            c[e] = k;
        }
        return UniPoly(std::move(c));
    }

    const std::vector<Scalar>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    const Scalar& lead() const
    {
        if (c_.empty())
            throw std::logic_error("UniPoly: lead of zero");
        return c_.back();
    }

    Scalar eval(const Scalar& t) const
    {
        Scalar acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = acc * t + *it;
        return acc;
    }

    UniPoly derivative() const
    {
        if (c_.size() <= 1)
            return UniPoly();
        std::vector<Scalar> d(c_.size() - 1, Scalar(0));
        for (std::size_t k = 1; k < c_.size(); ++k)
            d[k - 1] = c_[k] * Scalar(static_cast<long>(k));
        return UniPoly(std::move(d));
    }

    UniPoly monic() const
    {
        if (is_zero())
            return *this;
        Scalar inv = lead().inverse();
        std::vector<Scalar> r = c_;
        for (auto& k : r)
            k *= inv;
        return UniPoly(std::move(r));
    }

    friend UniPoly operator*(const UniPoly& a, const UniPoly& b)
    {
        if (a.is_zero() || b.is_zero())
            return UniPoly();
        std::vector<Scalar> r(a.c_.size() + b.c_.size() - 1, Scalar(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r[i + j] += a.c_[i] * b.c_[j];
        return UniPoly(std::move(r));
    }

    // Exact division with remainder over the field Q(i).
    static std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b)
    {
        if (b.is_zero())
            throw std::domain_error("UniPoly: division by zero");
        std::vector<Scalar> rem = a.c_;
        int db = b.degree();
        if (a.degree() < db)
            return {UniPoly(), a};
        std::vector<Scalar> quot(a.degree() - db + 1, Scalar(0));
        Scalar inv = b.lead().inverse();
        for (int k = a.degree(); k >= db; --k) {
            if (static_cast<int>(rem.size()) <= k || rem[k].is_zero())
                continue;
            Scalar q = rem[k] * inv;
            quot[k - db] = q;
            for (int j = 0; j <= db; ++j)
                rem[k - db + j] -= q * b.c_[j];
        }
        return {UniPoly(std::move(quot)), UniPoly(std::move(rem))};
    }

    friend UniPoly gcd(UniPoly a, UniPoly b)
    {
        while (!b.is_zero()) {
            UniPoly r = divmod(a, b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    UniPoly squarefree_part() const
    {
        if (is_zero() || degree() == 0)
            return monic();
        UniPoly g = gcd(*this, derivative());
        return divmod(*this, g).first.monic();
    }

  private:
    void trim()
    {
        while (!c_.empty() && c_.back().is_zero())
            c_.pop_back();
    }

    std::vector<Scalar> c_;
};

namespace detail {

inline std::vector<mpz_class> small_divisors(const mpz_class& n0)
{
    mpz_class n = abs(n0);
    std::vector<mpz_class> divs;
    for (mpz_class d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            divs.push_back(d);
            divs.push_back(n / d);
        }
    }
    return divs;
}

}  // namespace detail

struct RationalRoots {
    std::vector<mpq_class> roots;  // distinct rational roots
    bool complete = false;         // true iff every complex root is listed
};

// Rational roots of a nonzero univariate polynomial over Q(i). `complete`
// reports whether the square-free part splits into the rational linear
// factors found, i.e. whether the full complex zero set was enumerated.
inline RationalRoots rational_roots(const UniPoly& p)
{
    if (p.is_zero())
        throw std::invalid_argument("rational_roots: zero polynomial");
    RationalRoots out;
    UniPoly s = p.squarefree_part();
    if (s.degree() == 0) {
        out.complete = true;
        return out;
    }

    // Root at zero first.
    while (s.degree() > 0 && s.coeffs()[0].is_zero()) {
        out.roots.emplace_back(0);
        std::vector<Scalar> shifted(s.coeffs().begin() + 1, s.coeffs().end());
        s = UniPoly(std::move(shifted));
        break;  // square-free: at most once
    }
    if (s.degree() == 0) {
        out.complete = true;
        return out;
    }

    // Rational roots are common roots of the real and imaginary parts.
    std::vector<mpq_class> re(s.degree() + 1), im(s.degree() + 1);
    bool has_im = false;
    for (int k = 0; k <= s.degree(); ++k) {
        re[k] = s.coeffs()[k].re();
        im[k] = s.coeffs()[k].im();
        if (im[k] != 0)
            has_im = true;
    }
    // Integerize the real part (or imaginary if the real part vanishes).
    const std::vector<mpq_class>& base = [&]() -> const std::vector<mpq_class>& {
        for (const auto& q : re)
            if (q != 0)
                return re;
        return im;
    }();
    mpz_class lcm_den = 1;
    for (const auto& q : base)
        lcm_den = lcm(lcm_den, q.get_den());
    std::vector<mpz_class> zc(base.size());
    for (std::size_t k = 0; k < base.size(); ++k) {
        mpq_class v = base[k] * lcm_den;
        v.canonicalize();
        zc[k] = v.get_num();
    }
    while (!zc.empty() && zc.back() == 0)
        zc.pop_back();
    std::size_t low = 0;
    while (low < zc.size() && zc[low] == 0)
        ++low;

    mpz_class c0 = zc[low];
    mpz_class cd = zc.back();
    if (abs(c0) > mpz_class("1000000000000") || abs(cd) > mpz_class("1000000000000")) {
        out.complete = false;  // divisor enumeration out of proportion
        return out;
    }

    for (const mpz_class& r : detail::small_divisors(c0)) {
        for (const mpz_class& q : detail::small_divisors(cd)) {
            for (int sign = 0; sign < 2; ++sign) {
                mpq_class cand(sign ? -r : r, q);
                cand.canonicalize();
                Scalar val = s.eval(Scalar(cand));
                if (val.is_zero()) {
                    if (std::find(out.roots.begin(), out.roots.end(), cand) == out.roots.end()) {
                        out.roots.push_back(cand);
                        UniPoly lin(std::vector<Scalar>{Scalar(mpq_class(-cand)), Scalar(1)});
                        s = UniPoly::divmod(s, lin).first;
                    }
                }
            }
        }
    }
    (void)has_im;
    out.complete = (s.degree() <= 0);
    std::sort(out.roots.begin(), out.roots.end());
    return out;
}

// Coefficients of p viewed as a univariate polynomial in v, each a
// polynomial in the remaining variables.
inline std::vector<Poly> coeffs_in(const Poly& p, Var v)
{
    std::vector<Poly> c(p.degree_in(v) + 1, Poly::zero(p.vars()));
    for (const auto& [m, k] : p.terms()) {
        Mono rest = m;
        int e = rest[v.idx];
        rest[v.idx] = 0;
        c[e].add_term(std::move(rest), k);
    }
    return c;
}

namespace detail {

inline Poly det_poly(std::vector<std::vector<Poly>> m, VarSet vars)
{
    std::size_t n = m.size();
    if (n == 0)
        return Poly::constant(vars, Scalar(1));
    if (n == 1)
        return m[0][0];
    Poly acc = Poly::zero(vars);
    for (std::size_t r = 0; r < n; ++r) {
        if (m[r][0].is_zero())
            continue;
        std::vector<std::vector<Poly>> minor;
        minor.reserve(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r)
                continue;
            minor.emplace_back(m[i].begin() + 1, m[i].end());
        }
        Poly term = m[r][0] * det_poly(std::move(minor), vars);
        if (r % 2 == 0)
            acc += term;
        else
            acc -= term;
    }
    return acc;
}

}  // namespace detail

// Sylvester resultant of f and g with respect to v; zero iff f and g share a
// root over the algebraic closure (or both leading coefficients vanish).
inline Poly resultant(const Poly& f, const Poly& g, Var v)
{
    if (f.is_zero() || g.is_zero())
        return Poly::zero(f.vars());
    auto fc = coeffs_in(f, v);
    auto gc = coeffs_in(g, v);
    int df = static_cast<int>(fc.size()) - 1;
    int dg = static_cast<int>(gc.size()) - 1;
    if (df == 0)
        return fc[0].pow(static_cast<unsigned>(dg));
    if (dg == 0)
        return gc[0].pow(static_cast<unsigned>(df));
    int n = df + dg;
    std::vector<std::vector<Poly>> syl(n, std::vector<Poly>(n, Poly::zero(f.vars())));
    for (int r = 0; r < dg; ++r)
        for (int k = 0; k <= df; ++k)
            syl[r][r + df - k] = fc[k];
    for (int r = 0; r < df; ++r)
        for (int k = 0; k <= dg; ++k)
            syl[dg + r][r + dg - k] = gc[k];
    return detail::det_poly(std::move(syl), f.vars());
}

}  // namespace dpcert
