#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>

#include "dpcert/poly.hpp"

namespace dpcert {

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " at position " + std::to_string(pos)), position(pos)
    {
    }
};

// Recursive-descent parser for the polynomial grammar:
//   expression := term (('+'|'-') term)*
//   term       := factor ('*' factor)*
//   factor     := base ('^' natural)?
//   base       := rational | 'i' | 'x' | 'y' | 'z' natural | '(' expression ')'
//   rational   := integer ('/' positive-integer)?
// Unary minus is allowed before a term; whitespace is insignificant.
class PolyParser {
  public:
    PolyParser(std::string_view text, VarSet vars) : src_(text), vars_(vars) {}

    Poly parse()
    {
        Poly p = expression();
        skip_ws();
        if (pos_ != src_.size())
            throw ParseError("trailing input", pos_);
        return p;
    }

  private:
    Poly expression()
    {
        skip_ws();
        bool neg = eat('-');
        Poly acc = term();
        if (neg)
            acc = -acc;
        while (true) {
            skip_ws();
            if (eat('+')) {
                acc += term();
            } else if (eat('-')) {
                acc -= term();
            } else {
                break;
            }
        }
        return acc;
    }

    Poly term()
    {
        Poly acc = factor();
        while (true) {
            skip_ws();
            if (!eat('*'))
                break;
            acc *= factor();
        }
        return acc;
    }

    Poly factor()
    {
        Poly b = base();
        skip_ws();
        if (eat('^')) {
            unsigned e = natural();
            b = b.pow(e);
        }
        return b;
    }

    Poly base()
    {
        skip_ws();
        if (pos_ >= src_.size())
            throw ParseError("unexpected end of input", pos_);
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Poly p = expression();
            skip_ws();
            if (!eat(')'))
                throw ParseError("expected ')'", pos_);
            return p;
        }
        if (c == 'i') {
            ++pos_;
            return Poly::constant(vars_, Scalar::imaginary_unit());
        }
        if (c == 'x') {
            ++pos_;
            return Poly::variable(vars_, Var::x());
        }
        if (c == 'y') {
            ++pos_;
            return Poly::variable(vars_, Var::y());
        }
        if (c == 'z') {
            ++pos_;
            std::size_t at = pos_;
            unsigned idx = natural();
            if (static_cast<int>(idx) >= vars_.zvars)
                throw ParseError("unknown variable z" + std::to_string(idx), at);
            return Poly::variable(vars_, Var::z(static_cast<int>(idx)));
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            return rational();
        throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
    }

    Poly rational()
    {
        mpz_class num = digits();
        skip_ws();
        if (eat('/')) {
            std::size_t at = pos_;
            mpz_class den = digits();
            if (den == 0)
                throw ParseError("zero denominator", at);
            mpq_class q(num, den);
            q.canonicalize();
            return Poly::constant(vars_, Scalar(q));
        }
        return Poly::constant(vars_, Scalar(mpq_class(num)));
    }

    unsigned natural()
    {
        mpz_class d = digits();
        if (!d.fits_uint_p())
            throw ParseError("exponent too large", pos_);
        return static_cast<unsigned>(d.get_ui());
    }

    mpz_class digits()
    {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        if (pos_ == start)
            throw ParseError("expected a number", pos_);
        return mpz_class(std::string(src_.substr(start, pos_ - start)), 10);
    }

    void skip_ws()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
    }

    bool eat(char c)
    {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string_view src_;
    VarSet vars_;
    std::size_t pos_ = 0;
};

inline Poly parse_poly(std::string_view text, VarSet vars)
{
    return PolyParser(text, vars).parse();
}

namespace detail {

inline std::string rat_str(const mpq_class& q)
{
    return q.get_str();
}

// Coefficient rendered for use inside a term: sign pulled out when the value
// is purely real or purely imaginary, mixed values kept parenthesized.
struct CoeffText {
    bool negative = false;
    std::string body;  // empty means an implicit 1
};

inline CoeffText coeff_text(const Scalar& c)
{
    CoeffText t;
    if (c.is_real()) {
        mpq_class r = c.re();
        t.negative = r < 0;
        mpq_class mag = t.negative ? mpq_class(-r) : r;
        if (mag != 1)
            t.body = rat_str(mag);
        return t;
    }
    if (c.is_imaginary()) {
        mpq_class im = c.im();
        t.negative = im < 0;
        mpq_class mag = t.negative ? mpq_class(-im) : im;
        t.body = (mag == 1) ? "i" : rat_str(mag) + "*i";
        return t;
    }
    mpq_class im = c.im();
    bool im_neg = im < 0;
    mpq_class mag = im_neg ? mpq_class(-im) : im;
    std::string im_part = (mag == 1) ? "i" : rat_str(mag) + "*i";
    t.body = "(" + rat_str(c.re()) + (im_neg ? "-" : "+") + im_part + ")";
    return t;
}

template <PolyMode M>
std::string mono_str(const VarSet& vars, const Mono& m)
{
    // Display order inside a monomial: x, y, z_0..z_n, parameters.
    std::vector<int> order;
    order.push_back(Var::x().idx);
    order.push_back(Var::y().idx);
    for (int i = 0; i < vars.zvars; ++i)
        order.push_back(Var::z(i).idx);
    for (int p = 0; p < vars.params; ++p)
        order.push_back(vars.param(p).idx);

    std::string s;
    for (int idx : order) {
        int e = m[idx];
        if (e == 0)
            continue;
        if (!s.empty())
            s += "*";
        s += vars.name(Var{idx});
        if (e != 1)
            s += "^" + std::to_string(e);
    }
    return s;
}

}  // namespace detail

// Canonical printer: terms in descending monomial order, coefficients as
// p/q, p/q*i or (p/q+r/s*i). parse(to_string(p)) == p for ordinary
// polynomials without parameter variables.
template <PolyMode M>
std::string to_string(const PolyT<M>& p)
{
    if (p.is_zero())
        return "0";
    std::string out;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        auto coeff = detail::coeff_text(it->second);
        std::string mono = detail::mono_str<M>(p.vars(), it->first);
        std::string body;
        if (coeff.body.empty())
            body = mono.empty() ? "1" : mono;
        else if (mono.empty())
            body = coeff.body;
        else
            body = coeff.body + "*" + mono;
        if (first) {
            if (coeff.negative)
                out += "-";
            out += body;
            first = false;
        } else {
            out += coeff.negative ? " - " : " + ";
            out += body;
        }
    }
    return out;
}

inline std::string to_string(const Scalar& c)
{
    VarSet trivial(0, 0);
    return to_string(Poly::constant(trivial, c));
}

inline Scalar parse_scalar(std::string_view text)
{
    VarSet trivial(0, 0);
    Poly p = parse_poly(text, trivial);
    if (!p.is_constant())
        throw std::invalid_argument("expected a constant");
    return p.constant_part();
}

template <PolyMode M>
std::ostream& operator<<(std::ostream& os, const PolyT<M>& p)
{
    return os << to_string(p);
}

inline std::ostream& operator<<(std::ostream& os, const Scalar& c)
{
    return os << to_string(c);
}

}  // namespace dpcert
