#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dpcert/parse.hpp"
#include "dpcert/surface.hpp"

namespace dpcert {

struct TangencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Derivation on the quotient ring, stored by its ambient coefficients on
// d/dx, d/dy, d/dz_i. Construction via make() verifies tangency: the field
// must annihilate the defining polynomial modulo the relation.
class VectorField {
  public:
    static VectorField make(SurfacePtr s, Poly cx, Poly cy, std::vector<Poly> cz)
    {
        VectorField v = unchecked(std::move(s), std::move(cx), std::move(cy), std::move(cz));
        Poly residual = reduce_against_relation(v.apply_ambient(v.s_->defining_poly()), *v.s_);
        if (!residual.is_zero())
            throw TangencyError("vector field is not tangent; residual " + to_string(residual));
        return v;
    }

    // No tangency validation; used to exhibit non-tangent fields in suites.
    static VectorField unchecked(SurfacePtr s, Poly cx, Poly cy, std::vector<Poly> cz)
    {
        if (static_cast<int>(cz.size()) != s->vars.zvars)
            throw std::invalid_argument("VectorField: wrong number of z coefficients");
        VectorField v;
        v.s_ = std::move(s);
        v.cx_ = reduce_against_relation(std::move(cx), *v.s_);
        v.cy_ = reduce_against_relation(std::move(cy), *v.s_);
        v.cz_.reserve(cz.size());
        for (auto& c : cz)
            v.cz_.push_back(reduce_against_relation(std::move(c), *v.s_));
        return v;
    }

    static VectorField zero(SurfacePtr s)
    {
        Poly z = Poly::zero(s->vars);
        return unchecked(std::move(s), z, z, std::vector<Poly>(z.vars().zvars, z));
    }

    const SurfacePtr& surface() const { return s_; }
    const Poly& cx() const { return cx_; }
    const Poly& cy() const { return cy_; }
    const std::vector<Poly>& cz() const { return cz_; }

    const Poly& coeff(Var v) const
    {
        if (v == Var::x())
            return cx_;
        if (v == Var::y())
            return cy_;
        if (s_->vars.is_z(v))
            return cz_[v.idx - 2];
        throw std::invalid_argument("VectorField: no coefficient for " + s_->vars.name(v));
    }

    bool is_zero() const
    {
        if (!cx_.is_zero() || !cy_.is_zero())
            return false;
        for (const auto& c : cz_)
            if (!c.is_zero())
                return false;
        return true;
    }

    // Derivation applied to an ambient representative, before reduction.
    Poly apply_ambient(const Poly& f) const
    {
        Poly acc = Poly::zero(s_->vars);
        acc += cx_ * f.partial(Var::x());
        acc += cy_ * f.partial(Var::y());
        for (int i = 0; i < s_->vars.zvars; ++i)
            acc += cz_[i] * f.partial(Var::z(i));
        return acc;
    }

    friend bool operator==(const VectorField& a, const VectorField& b)
    {
        return *a.s_ == *b.s_ && a.cx_ == b.cx_ && a.cy_ == b.cy_ && a.cz_ == b.cz_;
    }
    friend bool operator!=(const VectorField& a, const VectorField& b) { return !(a == b); }

  private:
    VectorField() = default;

    SurfacePtr s_;
    Poly cx_;
    Poly cy_;
    std::vector<Poly> cz_;
};

// nu(f): apply the derivation and reduce. Tangency makes the result
// independent of the chosen ambient representative.
inline RingElement apply(const VectorField& nu, const RingElement& f)
{
    if (*nu.surface() != *f.surface)
        throw std::invalid_argument("apply: surface mismatch");
    return normal_form(nu.apply_ambient(f.nf), f.surface);
}

inline bool kernel_member(const VectorField& nu, const RingElement& f)
{
    return apply(nu, f).is_zero();
}

inline VectorField operator*(const RingElement& f, const VectorField& nu)
{
    if (*nu.surface() != *f.surface)
        throw std::invalid_argument("multiplier: surface mismatch");
    std::vector<Poly> cz;
    cz.reserve(nu.cz().size());
    for (const auto& c : nu.cz())
        cz.push_back(f.nf * c);
    return VectorField::make(nu.surface(), f.nf * nu.cx(), f.nf * nu.cy(), std::move(cz));
}

inline VectorField operator+(const VectorField& a, const VectorField& b)
{
    if (*a.surface() != *b.surface())
        throw std::invalid_argument("field sum: surface mismatch");
    std::vector<Poly> cz;
    for (std::size_t i = 0; i < a.cz().size(); ++i)
        cz.push_back(a.cz()[i] + b.cz()[i]);
    return VectorField::make(a.surface(), a.cx() + b.cx(), a.cy() + b.cy(), std::move(cz));
}

inline VectorField operator-(const VectorField& a, const VectorField& b)
{
    if (*a.surface() != *b.surface())
        throw std::invalid_argument("field difference: surface mismatch");
    std::vector<Poly> cz;
    for (std::size_t i = 0; i < a.cz().size(); ++i)
        cz.push_back(a.cz()[i] - b.cz()[i]);
    return VectorField::make(a.surface(), a.cx() - b.cx(), a.cy() - b.cy(), std::move(cz));
}

// Lie bracket, componentwise nu(c^mu_u) - mu(c^nu_u); tangent by construction.
inline VectorField bracket(const VectorField& nu, const VectorField& mu)
{
    if (*nu.surface() != *mu.surface())
        throw std::invalid_argument("bracket: surface mismatch");
    const SurfacePtr& s = nu.surface();
    auto component = [&](Var v) {
        return reduce_against_relation(
            nu.apply_ambient(mu.coeff(v)) - mu.apply_ambient(nu.coeff(v)), *s);
    };
    std::vector<Poly> cz;
    for (int i = 0; i < s->vars.zvars; ++i)
        cz.push_back(component(Var::z(i)));
    return VectorField::make(s, component(Var::x()), component(Var::y()), std::move(cz));
}

// --- the catalogue -----------------------------------------------------

// v_x^i = (da/dz_i + x db/dz_i) d/dy + x^2 d/dz_i
inline VectorField build_vx(const SurfacePtr& s, int i)
{
    if (i < 0 || i >= s->vars.zvars)
        throw std::invalid_argument("build_vx: index out of range");
    const VarSet& vars = s->vars;
    Poly x = Poly::variable(vars, Var::x());
    Poly cy = s->a.partial(Var::z(i)) + x * s->b.partial(Var::z(i));
    std::vector<Poly> cz(vars.zvars, Poly::zero(vars));
    cz[i] = Poly::monomial(vars, Var::x(), 2, Scalar(1));
    return VectorField::make(s, Poly::zero(vars), std::move(cy), std::move(cz));
}

// v_y^j = (da/dz_j + x db/dz_j) d/dx + (2xy - b) d/dz_j, defined inside the
// degree window only (the linear-flow pattern needs it).
inline VectorField build_vy(const SurfacePtr& s, int j)
{
    if (j < 0 || j >= s->vars.zvars)
        throw std::invalid_argument("build_vy: index out of range");
    if (!s->k_window || j > *s->k_window) {
        Var zj = Var::z(j);
        std::string why = "build_vy: index " + std::to_string(j) + " outside degree window (";
        if (s->a.degree_in(zj) > 2)
            why += "deg_z" + std::to_string(j) + "(a) = " + std::to_string(s->a.degree_in(zj)) + " > 2";
        else
            why += "deg_z" + std::to_string(j) + "(b) = " + std::to_string(s->b.degree_in(zj)) + " > 1";
        throw std::invalid_argument(why + ")");
    }
    const VarSet& vars = s->vars;
    Poly x = Poly::variable(vars, Var::x());
    Poly cx = s->a.partial(Var::z(j)) + x * s->b.partial(Var::z(j));
    Poly two_xy = Poly::variable(vars, Var::x()) * Poly::variable(vars, Var::y());
    two_xy = two_xy.scaled(Scalar(2));
    std::vector<Poly> cz(vars.zvars, Poly::zero(vars));
    cz[j] = two_xy - s->b;
    return VectorField::make(s, std::move(cx), Poly::zero(vars), std::move(cz));
}

// v_z = a x d/dx - (2 a y - x y b + b^2) d/dy
inline VectorField build_vz(const SurfacePtr& s)
{
    const VarSet& vars = s->vars;
    Poly x = Poly::variable(vars, Var::x());
    Poly y = Poly::variable(vars, Var::y());
    Poly cx = s->a * x;
    Poly cy = -(s->a * y.scaled(Scalar(2)) - x * y * s->b + s->b * s->b);
    return VectorField::make(s, std::move(cx), std::move(cy),
                             std::vector<Poly>(vars.zvars, Poly::zero(vars)));
}

// Deliberately wrong n = 0 variant of v_z with x-coefficient z^2 x instead of
// (z^2 - beta) x; not tangent once beta != 0. Used to show the tangency suite
// catches a bad field.
inline VectorField build_vz_corrupted(const SurfacePtr& s)
{
    if (s->n() != 0)
        throw std::invalid_argument("build_vz_corrupted: n = 0 family only");
    const VarSet& vars = s->vars;
    Poly alpha = s->b;
    Poly z2 = Poly::monomial(vars, Var::z(0), 2, Scalar(1));
    Poly beta = z2 - s->a;
    Poly x = Poly::variable(vars, Var::x());
    Poly y = Poly::variable(vars, Var::y());
    Poly cx = z2 * x;
    Poly cy = -((z2 - beta) * y.scaled(Scalar(2)) - alpha * x * y + alpha * alpha);
    return VectorField::unchecked(s, std::move(cx), std::move(cy),
                                  std::vector<Poly>(vars.zvars, Poly::zero(vars)));
}

// --- completeness certificates -----------------------------------------

// A sufficient-condition certificate for completeness of the flow. LND
// records, per ambient generator, how many applications reach zero.
// BlockAffine records an ordered partition of the variables such that on
// each block the field acts affinely with coefficients from earlier blocks:
// the flow is then solved by iterated linear ODEs.
struct CompletenessCertificate {
    enum class Kind { LND, BlockAffine };

    struct AffineEntry {
        Var u;
        std::vector<std::pair<Var, Poly>> lin;  // coefficient of each same-block variable
        Poly constant;
    };

    Kind kind = Kind::LND;
    std::vector<std::pair<Var, int>> nilpotency;       // LND only
    std::vector<std::vector<AffineEntry>> blocks;      // BlockAffine only
};

namespace detail {

inline std::vector<Var> ambient_coordinates(const VarSet& vars)
{
    std::vector<Var> out{Var::y(), Var::x()};
    for (int i = 0; i < vars.zvars; ++i)
        out.push_back(Var::z(i));
    return out;
}

inline std::optional<CompletenessCertificate> try_lnd(const VectorField& nu, int bound)
{
    CompletenessCertificate cert;
    cert.kind = CompletenessCertificate::Kind::LND;
    for (Var u : ambient_coordinates(nu.surface()->vars)) {
        RingElement g{nu.surface(), Poly::variable(nu.surface()->vars, u)};
        int steps = 0;
        while (!g.is_zero() && steps <= bound) {
            g = apply(nu, g);
            ++steps;
        }
        if (!g.is_zero())
            return std::nullopt;
        cert.nilpotency.emplace_back(u, steps);
    }
    return cert;
}

// Affine check for one variable relative to a candidate block B and the set
// of already placed variables: every term of nu(u) must be a placed-variable
// monomial times at most one B-variable to the first power.
inline std::optional<CompletenessCertificate::AffineEntry> affine_entry(
    const VectorField& nu, Var u, const std::set<int>& block, const std::set<int>& placed)
{
    const VarSet& vars = nu.surface()->vars;
    Poly image = apply(nu, RingElement{nu.surface(), Poly::variable(vars, u)}).nf;
    CompletenessCertificate::AffineEntry entry;
    entry.u = u;
    entry.constant = Poly::zero(vars);
    std::map<int, Poly> lin;
    for (const auto& [m, c] : image.terms()) {
        int block_degree = 0;
        int block_var = -1;
        for (int i = 0; i < vars.count(); ++i) {
            if (m[i] == 0)
                continue;
            if (vars.is_param(Var{i}))
                continue;  // parameters are scalars of the flow
            if (block.count(i)) {
                block_degree += m[i];
                block_var = i;
            } else if (!placed.count(i)) {
                return std::nullopt;  // depends on a variable solved later
            }
        }
        if (block_degree > 1)
            return std::nullopt;
        Mono rest = m;
        if (block_degree == 1)
            rest[block_var] = 0;
        Poly& dst = (block_degree == 1)
                        ? lin.try_emplace(block_var, Poly::zero(vars)).first->second
                        : entry.constant;
        dst.add_term(std::move(rest), c);
    }
    for (auto& [idx, p] : lin)
        entry.lin.emplace_back(Var{idx}, std::move(p));
    return entry;
}

inline std::optional<CompletenessCertificate> try_block_affine(const VectorField& nu)
{
    const VarSet& vars = nu.surface()->vars;
    CompletenessCertificate cert;
    cert.kind = CompletenessCertificate::Kind::BlockAffine;

    std::set<int> placed;
    std::set<int> remaining;
    for (Var u : ambient_coordinates(vars))
        remaining.insert(u.idx);

    // Leading block: variables annihilated by the field.
    std::vector<CompletenessCertificate::AffineEntry> kernel_block;
    for (auto it = remaining.begin(); it != remaining.end();) {
        Var u{*it};
        if (kernel_member(nu, RingElement{nu.surface(), Poly::variable(vars, u)})) {
            CompletenessCertificate::AffineEntry e;
            e.u = u;
            e.constant = Poly::zero(vars);
            kernel_block.push_back(std::move(e));
            it = remaining.erase(it);
            placed.insert(u.idx);
        } else {
            ++it;
        }
    }
    if (kernel_block.empty())
        return std::nullopt;
    cert.blocks.push_back(std::move(kernel_block));

    while (!remaining.empty()) {
        // Greatest fixed point: drop variables until the block is jointly
        // affine over the placed ones; maximal block, deterministic order.
        std::set<int> block = remaining;
        bool changed = true;
        while (changed && !block.empty()) {
            changed = false;
            for (auto it = block.begin(); it != block.end();) {
                if (!affine_entry(nu, Var{*it}, block, placed)) {
                    it = block.erase(it);
                    changed = true;
                } else {
                    ++it;
                }
            }
        }
        if (block.empty())
            return std::nullopt;
        std::vector<CompletenessCertificate::AffineEntry> entries;
        for (int idx : block)
            entries.push_back(*affine_entry(nu, Var{idx}, block, placed));
        cert.blocks.push_back(std::move(entries));
        for (int idx : block) {
            placed.insert(idx);
            remaining.erase(idx);
        }
    }
    return cert;
}

}  // namespace detail

inline int default_lnd_bound(const SurfaceSpec& s)
{
    return 2 * (s.a.degree() + s.b.degree() + 3);
}

// Try the two completeness patterns on nu (or multiplier * nu). The
// multiplier, when given, must lie in ker nu. A null result means no
// certificate was found, never that the field is incomplete.
inline std::optional<CompletenessCertificate> certify_complete(
    const VectorField& nu, const std::optional<RingElement>& multiplier = std::nullopt,
    int lnd_bound = -1)
{
    VectorField field = nu;
    if (multiplier) {
        if (!kernel_member(nu, *multiplier))
            throw std::invalid_argument("certify_complete: multiplier " +
                                        to_string(multiplier->nf) + " is not in ker(field)");
        field = *multiplier * nu;
    }
    if (lnd_bound < 0)
        lnd_bound = default_lnd_bound(*nu.surface());
    if (auto lnd = detail::try_lnd(field, lnd_bound))
        return lnd;
    return detail::try_block_affine(field);
}

// Re-verify a certificate against the field it was issued for.
inline bool replay_certificate(const CompletenessCertificate& cert, const VectorField& nu)
{
    const VarSet& vars = nu.surface()->vars;
    if (cert.kind == CompletenessCertificate::Kind::LND) {
        for (const auto& [u, steps] : cert.nilpotency) {
            RingElement g{nu.surface(), Poly::variable(vars, u)};
            for (int t = 0; t < steps; ++t)
                g = apply(nu, g);
            if (!g.is_zero())
                return false;
        }
        return true;
    }
    std::set<int> placed;
    for (const auto& block : cert.blocks) {
        std::set<int> block_vars;
        for (const auto& e : block)
            block_vars.insert(e.u.idx);
        for (const auto& e : block) {
            Poly rebuilt = e.constant;
            for (const auto& [w, c] : e.lin) {
                if (!block_vars.count(w.idx))
                    return false;
                for (const auto& [m, s] : c.terms())
                    for (int i = 0; i < vars.count(); ++i)
                        if (m[i] != 0 && !vars.is_param(Var{i}) && !placed.count(i))
                            return false;
                rebuilt += c * Poly::variable(vars, w);
            }
            for (const auto& [m, s] : e.constant.terms())
                for (int i = 0; i < vars.count(); ++i)
                    if (m[i] != 0 && !vars.is_param(Var{i}) && !placed.count(i))
                        return false;
            Poly image = apply(nu, RingElement{nu.surface(), Poly::variable(vars, e.u)}).nf;
            if (reduce_against_relation(rebuilt, *nu.surface()) != image)
                return false;
        }
        for (int idx : block_vars)
            placed.insert(idx);
    }
    return true;
}

inline std::string to_string(const VectorField& v)
{
    const VarSet& vars = v.surface()->vars;
    std::string out;
    auto add = [&](const Poly& c, const std::string& d) {
        if (c.is_zero())
            return;
        if (!out.empty())
            out += " + ";
        out += "(" + to_string(c) + ") " + d;
    };
    add(v.cx(), "∂x");
    add(v.cy(), "∂y");
    for (int i = 0; i < vars.zvars; ++i)
        add(v.cz()[i], "∂z" + std::to_string(i));
    return out.empty() ? "0" : out;
}

}  // namespace dpcert
