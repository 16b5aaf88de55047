#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpcert/echelon.hpp"
#include "dpcert/form.hpp"

namespace dpcert {

// Exact rational point of the ambient space, indexed like the variables.
using Point = std::vector<Scalar>;

inline void check_point_on_surface(const SurfaceSpec& s, const Point& p)
{
    if (s.vars.params != 0)
        throw std::invalid_argument("points require a parameter-free surface");
    if (static_cast<int>(p.size()) != s.vars.count())
        throw std::invalid_argument("point arity mismatch");
    if (!s.defining_poly().eval(p).is_zero())
        throw std::invalid_argument("point does not satisfy the defining equation");
}

// Tangent vector of a field at a point, in ambient coordinates.
inline std::vector<Scalar> field_at(const VectorField& nu, const Point& p)
{
    const VarSet& vars = nu.surface()->vars;
    std::vector<Scalar> v(vars.count(), Scalar(0));
    v[Var::y().idx] = nu.cy().eval(p);
    v[Var::x().idx] = nu.cx().eval(p);
    for (int i = 0; i < vars.zvars; ++i)
        v[Var::z(i).idx] = nu.cz()[i].eval(p);
    return v;
}

// Induced tangent action of the time-one flow of f nu for f in ker nu with
// f(p) = 0: v -> v + v(f) nu[p], a linear map v -> v + <v, grad f(p)> nu[p].
struct TangentMove {
    VectorField field;
    RingElement multiplier;

    std::vector<Scalar> gradient_at(const Point& p) const
    {
        const VarSet& vars = field.surface()->vars;
        std::vector<Scalar> g(vars.count(), Scalar(0));
        for (int i = 0; i < vars.count(); ++i)
            g[i] = multiplier.nf.partial(Var{i}).eval(p);
        return g;
    }
};

inline void check_move(const TangentMove& move, const Point& p, bool volume_preserving)
{
    if (!kernel_member(move.field, move.multiplier))
        throw std::invalid_argument("move multiplier " + to_string(move.multiplier.nf) +
                                    " is not in the kernel of its field");
    if (!move.multiplier.nf.eval(p).is_zero())
        throw std::invalid_argument("move multiplier " + to_string(move.multiplier.nf) +
                                    " does not vanish at the base point");
    if (!certify_complete(move.field, move.multiplier))
        throw std::invalid_argument("move field has no completeness certificate");
    if (volume_preserving && !divergence(move.multiplier * move.field).is_zero())
        throw std::invalid_argument("move field is not volume preserving");
}

struct GensetReport {
    bool success = false;
    int dim_reached = 0;
    int dim_needed = 0;
    std::string reason;  // set when not successful
};

namespace detail {

// Dense matrices over Q(i), row-major, for the wedge action.
using Matrix = std::vector<std::vector<Scalar>>;

inline Matrix move_matrix(const TangentMove& move, const Point& p)
{
    std::vector<Scalar> w = field_at(move.field, p);
    std::vector<Scalar> g = move.gradient_at(p);
    std::size_t n = w.size();
    Matrix m(n, std::vector<Scalar>(n, Scalar(0)));
    for (std::size_t r = 0; r < n; ++r) {
        m[r][r] = Scalar(1);
        for (std::size_t c = 0; c < n; ++c)
            m[r][c] += w[r] * g[c];
    }
    return m;
}

inline std::vector<Scalar> apply_matrix(const Matrix& m, const std::vector<Scalar>& v)
{
    std::size_t n = v.size();
    std::vector<Scalar> out(n, Scalar(0));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            out[r] += m[r][c] * v[c];
    return out;
}

// A . M A M^T for antisymmetric A.
inline Matrix conjugate(const Matrix& m, const Matrix& a)
{
    std::size_t n = a.size();
    Matrix tmp(n, std::vector<Scalar>(n, Scalar(0)));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < n; ++k) {
            if (m[r][k].is_zero())
                continue;
            for (std::size_t c = 0; c < n; ++c)
                tmp[r][c] += m[r][k] * a[k][c];
        }
    Matrix out(n, std::vector<Scalar>(n, Scalar(0)));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < n; ++k) {
            if (tmp[r][k].is_zero())
                continue;
            for (std::size_t c = 0; c < n; ++c)
                out[r][c] += tmp[r][k] * m[c][k];
        }
    return out;
}

inline std::vector<Scalar> flatten_wedge(const Matrix& a)
{
    std::size_t n = a.size();
    std::vector<Scalar> v;
    v.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            v.push_back(a[i][j]);
    return v;
}

inline Matrix unflatten_wedge(const std::vector<Scalar>& v, std::size_t n)
{
    Matrix a(n, std::vector<Scalar>(n, Scalar(0)));
    std::size_t at = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            a[i][j] = v[at];
            a[j][i] = -v[at];
            ++at;
        }
    return a;
}

}  // namespace detail

// Close the span of the candidate tangent vectors under the induced move
// actions; SUCCESS when it fills the tangent space of the surface at p.
inline GensetReport generating_set_check(const SurfacePtr& s, const Point& p,
                                         const std::vector<VectorField>& candidates,
                                         const std::vector<TangentMove>& moves)
{
    check_point_on_surface(*s, p);
    for (const TangentMove& m : moves)
        check_move(m, p, /*volume_preserving=*/false);

    GensetReport report;
    report.dim_needed = s->vars.count() - 1;  // hypersurface tangent space

    Poly P = s->defining_poly();
    std::vector<Scalar> dP(s->vars.count(), Scalar(0));
    bool smooth_at_p = false;
    for (int i = 0; i < s->vars.count(); ++i) {
        dP[i] = P.partial(Var{i}).eval(p);
        smooth_at_p = smooth_at_p || !dP[i].is_zero();
    }
    if (!smooth_at_p) {
        report.reason = "the point is singular on the surface";
        return report;
    }

    VecEchelon span(p.size());
    for (const VectorField& c : candidates) {
        std::vector<Scalar> v = field_at(c, p);
        Scalar pairing(0);
        for (std::size_t i = 0; i < v.size(); ++i)
            pairing += v[i] * dP[i];
        if (!pairing.is_zero())
            throw std::invalid_argument("candidate field is not tangent at the point");
        span.insert(std::move(v));
    }

    std::vector<detail::Matrix> actions;
    actions.reserve(moves.size());
    for (const TangentMove& m : moves)
        actions.push_back(detail::move_matrix(m, p));

    bool grew = true;
    while (grew && span.rank() < report.dim_needed) {
        grew = false;
        for (const auto& v : span.basis())
            for (const auto& m : actions)
                grew = span.insert(detail::apply_matrix(m, v)) || grew;
    }
    report.dim_reached = span.rank();
    report.success = report.dim_reached == report.dim_needed;
    if (!report.success)
        report.reason = "span closed at dimension " + std::to_string(report.dim_reached) +
                        " of " + std::to_string(report.dim_needed);
    return report;
}

// Same closure in the second exterior power, with the moves acting as
// v ^ w -> M v ^ M w; SUCCESS when the span fills Lambda^2 of the tangent
// space. Moves must come from volume preserving fields.
inline GensetReport wedge_generating_check(
    const SurfacePtr& s, const Point& p,
    const std::vector<std::pair<VectorField, VectorField>>& pairs,
    const std::vector<TangentMove>& moves)
{
    check_point_on_surface(*s, p);
    for (const TangentMove& m : moves)
        check_move(m, p, /*volume_preserving=*/true);

    GensetReport report;
    int tangent_dim = s->vars.count() - 1;
    report.dim_needed = tangent_dim * (tangent_dim - 1) / 2;

    std::size_t n = p.size();
    VecEchelon span(n * (n - 1) / 2);
    for (const auto& [nu, mu] : pairs) {
        std::vector<Scalar> v = field_at(nu, p);
        std::vector<Scalar> w = field_at(mu, p);
        detail::Matrix a(n, std::vector<Scalar>(n, Scalar(0)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                a[i][j] = v[i] * w[j] - v[j] * w[i];
        span.insert(detail::flatten_wedge(a));
    }

    std::vector<detail::Matrix> actions;
    actions.reserve(moves.size());
    for (const TangentMove& m : moves)
        actions.push_back(detail::move_matrix(m, p));

    bool grew = true;
    while (grew && span.rank() < report.dim_needed) {
        grew = false;
        for (const auto& v : span.basis()) {
            detail::Matrix a = detail::unflatten_wedge(v, n);
            for (const auto& m : actions)
                grew = span.insert(detail::flatten_wedge(detail::conjugate(m, a))) || grew;
        }
    }
    report.dim_reached = span.rank();
    report.success = report.dim_reached == report.dim_needed;
    if (!report.success)
        report.reason = "wedge span closed at dimension " + std::to_string(report.dim_reached) +
                        " of " + std::to_string(report.dim_needed);
    return report;
}

// The move set used by the family's generating-set arguments:
// (v_x^i, x - x_0) for all i and (v_x^i, z_n - q_n) for i < n.
inline std::vector<TangentMove> default_moves(const SurfacePtr& s, const Point& p)
{
    std::vector<TangentMove> moves;
    const VarSet& vars = s->vars;
    Poly x_shift = Poly::variable(vars, Var::x()) -
                   Poly::constant(vars, p[Var::x().idx]);
    int zn = vars.zvars - 1;
    Poly zn_shift = Poly::variable(vars, Var::z(zn)) -
                    Poly::constant(vars, p[Var::z(zn).idx]);
    for (int i = 0; i < vars.zvars; ++i) {
        moves.push_back(TangentMove{build_vx(s, i), RingElement{s, x_shift}});
        if (i < zn)
            moves.push_back(TangentMove{build_vx(s, i), RingElement{s, zn_shift}});
    }
    return moves;
}

// Candidate rational witness points: x_0 in {1, 2}, integer z-coordinates in
// [-2, 2], y solved from the defining equation, filtered by the genericity
// requirement da/dz_0 + x_0 db/dz_0 != 0 at the point.
inline std::vector<Point> rational_point_candidates(const SurfacePtr& s)
{
    std::vector<Point> out;
    const VarSet& vars = s->vars;
    int nz = vars.zvars;
    std::vector<long> q(nz, -2);
    for (long x0 : {1L, 2L}) {
        std::fill(q.begin(), q.end(), -2L);
        while (true) {
            Point p(vars.count(), Scalar(0));
            p[Var::x().idx] = Scalar(x0);
            for (int i = 0; i < nz; ++i)
                p[Var::z(i).idx] = Scalar(q[i]);
            Scalar rhs = s->a.eval(p) + Scalar(x0) * s->b.eval(p);
            p[Var::y().idx] = rhs / Scalar(x0 * x0);
            Scalar generic = s->a.partial(Var::z(0)).eval(p) +
                             Scalar(x0) * s->b.partial(Var::z(0)).eval(p);
            if (!generic.is_zero())
                out.push_back(std::move(p));
            int at = 0;
            while (at < nz && ++q[at] > 2) {
                q[at] = -2;
                ++at;
            }
            if (at == nz)
                break;
        }
    }
    return out;
}

}  // namespace dpcert
