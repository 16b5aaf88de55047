#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpcert/echelon.hpp"
#include "dpcert/field.hpp"

namespace dpcert {

// Verification record for a (semi-)compatible pair. The kernel lists hold
// the verified hint monomials; for semi-compatibility the exact span of the
// pairwise products must cover every basis monomial up to span_degree, and
// one explicit nonzero product is kept as the ideal witness.
struct PairReport {
    bool semi_compatible = false;
    int span_degree = 0;
    std::size_t kernel_nu_count = 0;
    std::size_t kernel_mu_count = 0;
    std::optional<RingElement> rejected_hint;   // hint with nonzero image
    std::optional<RingElement> rejected_image;  // its image under the field
    std::optional<RingElement> unreachable;     // first monomial outside the span
    std::optional<RingElement> product_witness;

    bool compatible = false;
    std::optional<RingElement> h;
    std::optional<RingElement> nu_h;
    std::string failure;  // first violated condition, empty when fine
};

// All monomials of degree <= d in the given variables.
inline std::vector<RingElement> monomials_in(const SurfacePtr& s, const std::vector<Var>& vars,
                                             int d)
{
    std::vector<RingElement> out;
    Mono m(s->vars.count(), 0);
    auto rec = [&](auto&& self, std::size_t idx, int remaining) -> void {
        if (idx == vars.size()) {
            out.push_back(RingElement{s, Poly::from_mono(s->vars, m, Scalar(1))});
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            m[vars[idx].idx] = e;
            self(self, idx + 1, remaining - e);
        }
        m[vars[idx].idx] = 0;
    };
    rec(rec, 0, d);
    return out;
}

// Default kernel hints of the catalogue fields: v_x^i kills x and the other
// z's, v_y^j kills y and the other z's.
inline std::vector<Var> vx_kernel_vars(const SurfacePtr& s, int i)
{
    std::vector<Var> vars{Var::x()};
    for (int l = 0; l < s->vars.zvars; ++l)
        if (l != i)
            vars.push_back(Var::z(l));
    return vars;
}

inline std::vector<Var> vy_kernel_vars(const SurfacePtr& s, int j)
{
    std::vector<Var> vars{Var::y()};
    for (int l = 0; l < s->vars.zvars; ++l)
        if (l != j)
            vars.push_back(Var::z(l));
    return vars;
}

// Semi-compatibility: every hint monomial is verified to lie in the kernel
// of its field, then the span of the pairwise products of the hints must
// contain every basis monomial of degree <= d. A failed hint or a span gap
// leaves the report inconclusive with the offending element recorded.
inline PairReport check_semicompatible(const VectorField& nu, const VectorField& mu,
                                       const std::vector<Var>& nu_kernel_vars,
                                       const std::vector<Var>& mu_kernel_vars, int d)
{
    if (*nu.surface() != *mu.surface())
        throw std::invalid_argument("check_semicompatible: surface mismatch");
    const SurfacePtr& s = nu.surface();
    PairReport report;
    report.span_degree = d;

    std::vector<RingElement> hints_nu = monomials_in(s, nu_kernel_vars, d);
    std::vector<RingElement> hints_mu = monomials_in(s, mu_kernel_vars, d);
    report.kernel_nu_count = hints_nu.size();
    report.kernel_mu_count = hints_mu.size();
    for (const auto* pair : {&hints_nu, &hints_mu}) {
        const VectorField& field = (pair == &hints_nu) ? nu : mu;
        for (const RingElement& hint : *pair) {
            RingElement image = apply(field, hint);
            if (!image.is_zero()) {
                report.rejected_hint = hint;
                report.rejected_image = image;
                report.failure = "hint " + to_string(hint.nf) + " has nonzero image " +
                                 to_string(image.nf);
                return report;
            }
        }
    }

    PolyEchelon span(false);
    for (const RingElement& hn : hints_nu) {
        for (const RingElement& hm : hints_mu) {
            RingElement prod = hn * hm;
            if (!report.product_witness && !prod.is_zero() && !prod.nf.is_constant())
                report.product_witness = prod;
            span.insert(prod.nf);
        }
    }
    for (RingElement& b : basis_monomials(s, d)) {
        if (!span.spans(b.nf)) {
            report.unreachable = b;
            report.failure = "basis monomial " + to_string(b.nf) + " outside the product span";
            return report;
        }
    }
    report.semi_compatible = true;
    return report;
}

// Compatibility on top of a semi-compatible report: mu(h) = 0,
// nu(h) != 0 and nu(nu(h)) = 0, i.e. nu(h) is a nonzero kernel element.
inline PairReport check_compatible(const VectorField& nu, const VectorField& mu,
                                   const RingElement& h, PairReport report)
{
    report.h = h;
    RingElement mu_h = apply(mu, h);
    if (!mu_h.is_zero()) {
        report.failure = "mu(h) = " + to_string(mu_h.nf) + " is nonzero";
        return report;
    }
    RingElement nu_h = apply(nu, h);
    report.nu_h = nu_h;
    if (nu_h.is_zero()) {
        report.failure = "nu(h) vanishes";
        return report;
    }
    RingElement nu_nu_h = apply(nu, nu_h);
    if (!nu_nu_h.is_zero()) {
        report.failure = "nu(h) = " + to_string(nu_h.nf) + " is not in ker nu; image " +
                         to_string(nu_nu_h.nf);
        return report;
    }
    report.compatible = true;
    return report;
}

// The family's canonical pair: nu = v_x^i, mu = v_y^j with i != j and
// h = z_i.
inline PairReport check_catalogue_pair(const SurfacePtr& s, int i, int j, int d)
{
    VectorField nu = build_vx(s, i);
    VectorField mu = build_vy(s, j);
    PairReport report = check_semicompatible(nu, mu, vx_kernel_vars(s, i), vy_kernel_vars(s, j), d);
    if (!report.semi_compatible)
        return report;
    RingElement h{s, Poly::variable(s->vars, Var::z(i))};
    return check_compatible(nu, mu, h, std::move(report));
}

}  // namespace dpcert
