#pragma once

#include <map>
#include <utility>
#include <vector>

#include "dpcert/surface.hpp"

namespace dpcert {

// Echelonized exact span of polynomials, optionally modulo constants. Rows
// are immutable once inserted, monic, and keyed by leading monomial; since
// leading monomials are pairwise distinct, iterated leading-term elimination
// decides span membership.
class PolyEchelon {
  public:
    explicit PolyEchelon(bool mod_constants) : mod_constants_(mod_constants) {}

    bool mod_constants() const { return mod_constants_; }
    const std::vector<Poly>& rows() const { return rows_; }

    Poly strip(Poly f) const
    {
        if (mod_constants_ && !f.is_zero()) {
            Scalar c = f.constant_part();
            if (!c.is_zero())
                f.add_term(Mono(f.vars().count(), 0), -c);
        }
        return f;
    }

    // Leading-term reduction; when combo is given it receives (scalar, row)
    // pairs with f = sum scalar_i . row_i + remainder.
    Poly reduce(Poly f, std::vector<std::pair<Scalar, int>>* combo = nullptr) const
    {
        f = strip(std::move(f));
        while (!f.is_zero()) {
            auto it = by_lead_.find(f.lead_mono());
            if (it == by_lead_.end())
                return f;
            Scalar c = f.lead_coeff();
            f -= rows_[it->second].scaled(c);
            if (combo)
                combo->emplace_back(c, it->second);
        }
        return f;
    }

    bool spans(const Poly& f) const { return reduce(f).is_zero(); }

    // Insert after reduction; returns the new row id, or -1 when f lies in
    // the current span.
    int insert(Poly f)
    {
        f = reduce(std::move(f));
        if (f.is_zero())
            return -1;
        f = f.scaled(f.lead_coeff().inverse());
        int id = static_cast<int>(rows_.size());
        by_lead_.emplace(f.lead_mono(), id);
        rows_.push_back(std::move(f));
        return id;
    }

    // Mutual containment of reduced spans.
    friend bool same_span(const PolyEchelon& a, const PolyEchelon& b)
    {
        for (const Poly& r : a.rows_)
            if (!b.spans(r))
                return false;
        for (const Poly& r : b.rows_)
            if (!a.spans(r))
                return false;
        return true;
    }

  private:
    bool mod_constants_;
    std::vector<Poly> rows_;
    std::map<Mono, int, MonoLess> by_lead_;
};

// Exact dense row echelon over Q(i), pivots normalized to 1. Used for
// tangent-space spans, wedge spans and the dense saturation oracle.
class VecEchelon {
  public:
    explicit VecEchelon(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    int rank() const { return static_cast<int>(rows_.size()); }

    bool insert(std::vector<Scalar> v)
    {
        reduce(v);
        std::size_t p = pivot(v);
        if (p == dim_)
            return false;
        Scalar inv = v[p].inverse();
        for (auto& c : v)
            c *= inv;
        rows_.emplace(p, std::move(v));
        return true;
    }

    bool contains(std::vector<Scalar> v) const
    {
        reduce(v);
        return pivot(v) == dim_;
    }

    // Reconstruct the normalized basis, ordered by pivot.
    std::vector<std::vector<Scalar>> basis() const
    {
        std::vector<std::vector<Scalar>> out;
        out.reserve(rows_.size());
        for (const auto& [p, row] : rows_)
            out.push_back(row);
        return out;
    }

  private:
    std::size_t pivot(const std::vector<Scalar>& v) const
    {
        for (std::size_t i = 0; i < dim_; ++i)
            if (!v[i].is_zero())
                return i;
        return dim_;
    }

    void reduce(std::vector<Scalar>& v) const
    {
        for (const auto& [p, row] : rows_) {
            if (v[p].is_zero())
                continue;
            Scalar c = v[p];
            for (std::size_t i = p; i < dim_; ++i)
                v[i] -= c * row[i];
        }
    }

    std::size_t dim_;
    std::map<std::size_t, std::vector<Scalar>> rows_;
};

}  // namespace dpcert
