#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <utility>

namespace dpcert {

// Exact element of Q(i). Both parts are kept canonical (lowest terms,
// positive denominator); equality is structural and arithmetic never rounds.
class Scalar {
  public:
    Scalar() : re_(0), im_(0) {}
    Scalar(long v) : re_(v), im_(0) {}  // NOLINT: implicit by design
    explicit Scalar(mpq_class re) : re_(std::move(re)), im_(0) { canon(); }
    Scalar(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) { canon(); }

    static Scalar imaginary_unit() { return Scalar(mpq_class(0), mpq_class(1)); }
    static Scalar fraction(long num, long den)
    {
        if (den == 0)
            throw std::invalid_argument("Scalar: zero denominator");
        mpq_class q(num, den);
        q.canonicalize();
        return Scalar(q);
    }

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_one() const { return re_ == 1 && im_ == 0; }
    bool is_real() const { return im_ == 0; }
    bool is_imaginary() const { return re_ == 0 && im_ != 0; }

    Scalar conj() const { return Scalar(re_, -im_); }

    Scalar operator-() const { return Scalar(-re_, -im_); }

    Scalar& operator+=(const Scalar& o)
    {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    Scalar& operator-=(const Scalar& o)
    {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    Scalar& operator*=(const Scalar& o)
    {
        mpq_class r = re_ * o.re_ - im_ * o.im_;
        mpq_class i = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }
    Scalar& operator/=(const Scalar& o)
    {
        if (o.is_zero())
            throw std::domain_error("Scalar: division by zero");
        mpq_class n = o.re_ * o.re_ + o.im_ * o.im_;
        mpq_class r = (re_ * o.re_ + im_ * o.im_) / n;
        mpq_class i = (im_ * o.re_ - re_ * o.im_) / n;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    friend bool operator==(const Scalar& a, const Scalar& b)
    {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    Scalar inverse() const
    {
        Scalar one(1);
        Scalar r = one;
        r /= *this;
        return r;
    }

    Scalar pow(unsigned e) const
    {
        Scalar acc(1);
        Scalar base = *this;
        while (e) {
            if (e & 1u)
                acc *= base;
            base *= base;
            e >>= 1u;
        }
        return acc;
    }

  private:
    void canon()
    {
        re_.canonicalize();
        im_.canonicalize();
    }

    mpq_class re_;
    mpq_class im_;
};

}  // namespace dpcert
