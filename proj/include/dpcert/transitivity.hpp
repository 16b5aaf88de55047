#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpcert/parse.hpp"
#include "dpcert/surface.hpp"
#include "dpcert/uni.hpp"

namespace dpcert {

enum class Cond { Holds, Fails, Undecided };

inline const char* to_string(Cond c)
{
    switch (c) {
        case Cond::Holds: return "HOLDS";
        case Cond::Fails: return "FAILS";
        default: return "UNDECIDED";
    }
}

struct ConditionBReport {
    Cond verdict = Cond::Undecided;
    std::optional<Scalar> witness_c;  // the annihilating constant on FAILS
    std::string reason;
};

struct ConditionAReport {
    Cond verdict = Cond::Undecided;
    std::vector<std::vector<Scalar>> zeros;        // enumerated common zeros (z-coordinates)
    std::optional<std::vector<Scalar>> witness;    // failing common zero on FAILS
    std::string failing_clause;
    std::string reason;  // blocking information on UNDECIDED
};

// Exact decision of condition (B): does some c in C^* make all the windowed
// partials da/dz_i + c db/dz_i vanish identically? Each monomial of each
// partial contributes one linear constraint on c.
inline ConditionBReport condition_B(const SurfaceSpec& s)
{
    ConditionBReport r;
    if (s.vars.params != 0) {
        r.reason = "symbolic parameters present";
        return r;
    }
    if (!s.k_window) {
        r.reason = "no admissible degree window";
        return r;
    }
    int k = *s.k_window;

    bool any_constraint = false;
    std::optional<Scalar> candidate;
    for (int i = 0; i <= k; ++i) {
        Poly da = s.a.partial(Var::z(i));
        Poly db = s.b.partial(Var::z(i));
        std::map<Mono, std::pair<Scalar, Scalar>, MonoLess> rows;
        for (const auto& [m, c] : da.terms())
            rows[m].first = c;
        for (const auto& [m, c] : db.terms())
            rows[m].second = c;
        for (const auto& [m, ab] : rows) {
            const auto& [A, B] = ab;
            any_constraint = true;
            if (B.is_zero()) {
                if (!A.is_zero()) {
                    r.verdict = Cond::Holds;  // A + c.0 = 0 unsolvable
                    return r;
                }
                continue;  // 0 + c.0: no information
            }
            Scalar c = -A / B;
            if (candidate && *candidate != c) {
                r.verdict = Cond::Holds;  // inconsistent requirements
                return r;
            }
            candidate = c;
        }
    }
    if (!any_constraint || (!candidate && any_constraint)) {
        // All windowed partials of both a and b vanish identically: every c
        // annihilates, including c = 1.
        bool all_zero = true;
        for (int i = 0; i <= k; ++i)
            all_zero = all_zero && s.a.partial(Var::z(i)).is_zero() &&
                       s.b.partial(Var::z(i)).is_zero();
        if (all_zero) {
            r.verdict = Cond::Fails;
            r.witness_c = Scalar(1);
            return r;
        }
        // Otherwise only c = 0 would work, which is excluded.
        r.verdict = Cond::Holds;
        return r;
    }
    if (candidate->is_zero()) {
        r.verdict = Cond::Holds;  // c must be nonzero
        return r;
    }
    // Re-validate the witness: every windowed partial must vanish with it.
    for (int i = 0; i <= k; ++i) {
        Poly combo = s.a.partial(Var::z(i)) + s.b.partial(Var::z(i)).scaled(*candidate);
        if (!combo.is_zero()) {
            r.verdict = Cond::Holds;
            return r;
        }
    }
    r.verdict = Cond::Fails;
    r.witness_c = candidate;
    return r;
}

namespace detail {

struct ZeroEnumeration {
    bool complete = false;
    std::vector<std::vector<Scalar>> points;  // z-coordinates
    std::string blocking;
};

inline Poly substitute_z(const Poly& p, const std::vector<std::optional<Scalar>>& assignment)
{
    const VarSet& vars = p.vars();
    return p.substitute(
        [&](Var v) -> Poly {
            if (vars.is_z(v)) {
                const auto& val = assignment[v.idx - 2];
                if (val)
                    return Poly::constant(vars, *val);
            }
            return Poly::variable(vars, v);
        },
        Poly::constant(vars, Scalar(1)));
}

inline std::optional<Var> sole_z_variable(const Poly& p)
{
    std::optional<Var> found;
    for (int i = 0; i < p.vars().zvars; ++i) {
        Var z = Var::z(i);
        if (p.depends_on(z)) {
            if (found)
                return std::nullopt;
            found = z;
        }
    }
    return found;
}

// Partial common-zero enumeration by substitution of rational roots of
// univariate constraints, with a single resultant step when two variables
// remain. Restricted to rational triangular solutions; anything else is
// reported as blocking.
inline void enumerate_zeros(std::vector<Poly> constraints,
                            std::vector<std::optional<Scalar>> assignment,
                            ZeroEnumeration& out)
{
    if (!out.blocking.empty())
        return;
    const VarSet vars = constraints.front().vars();

    std::vector<Poly> live;
    for (Poly& c : constraints) {
        Poly sub = substitute_z(c, assignment);
        if (sub.is_zero())
            continue;
        if (sub.is_constant())
            return;  // a nonzero constant: no zeros on this branch
        live.push_back(std::move(sub));
    }

    std::vector<int> unassigned;
    for (int i = 0; i < vars.zvars; ++i)
        if (!assignment[i])
            unassigned.push_back(i);

    if (live.empty()) {
        if (!unassigned.empty()) {
            out.blocking = "vanishing constraints leave z" + std::to_string(unassigned.front()) +
                           " free (positive-dimensional zero set)";
            return;
        }
        std::vector<Scalar> point;
        point.reserve(vars.zvars);
        for (int i = 0; i < vars.zvars; ++i)
            point.push_back(*assignment[i]);
        out.points.push_back(std::move(point));
        return;
    }
    if (unassigned.empty())
        return;  // live constraints with all variables fixed cannot vanish

    // Substitution step: a univariate constraint pins one coordinate. The
    // common zeros lie inside the root set of any single constraint, so
    // branch on one whose complex roots are all rational; only when every
    // univariate constraint has irrational roots is the branch blocked.
    bool saw_univariate = false;
    std::string first_incomplete;
    for (const Poly& c : live) {
        auto v = sole_z_variable(c);
        if (!v)
            continue;
        saw_univariate = true;
        UniPoly u = UniPoly::from_poly(c, *v);
        RationalRoots roots = rational_roots(u);
        if (!roots.complete) {
            if (first_incomplete.empty())
                first_incomplete = "constraint " + to_string(c) + " has non-rational roots";
            continue;
        }
        for (const mpq_class& q : roots.roots) {
            auto next = assignment;
            next[v->idx - 2] = Scalar(q);
            enumerate_zeros(constraints, std::move(next), out);
            if (!out.blocking.empty())
                return;
        }
        return;
    }
    if (saw_univariate) {
        out.blocking = first_incomplete;
        return;
    }

    // Elimination step: with exactly two live variables, project one away.
    if (unassigned.size() == 2 && live.size() >= 2) {
        Var eliminate = Var::z(unassigned[0]);
        Var keep = Var::z(unassigned[1]);
        Poly res = resultant(live[0], live[1], eliminate);
        if (res.is_zero()) {
            out.blocking = "resultant of " + to_string(live[0]) + " and " + to_string(live[1]) +
                           " vanishes identically (shared factor)";
            return;
        }
        if (res.is_constant())
            return;  // the two constraints have no common zero at all
        UniPoly u = UniPoly::from_poly(res, keep);
        RationalRoots roots = rational_roots(u);
        if (!roots.complete) {
            out.blocking = "eliminant " + to_string(res) + " has non-rational roots";
            return;
        }
        for (const mpq_class& q : roots.roots) {
            auto next = assignment;
            next[keep.idx - 2] = Scalar(q);
            enumerate_zeros(constraints, std::move(next), out);
            if (!out.blocking.empty())
                return;
        }
        return;
    }

    out.blocking = "cannot eliminate: " + std::to_string(unassigned.size()) +
                   " variables and no univariate constraint";
}

}  // namespace detail

// Partial decider for condition (A): enumerate the common zeros of a and its
// windowed partials (rational triangular configurations only); at each zero
// b must not vanish and some windowed partial must be nonzero along the
// coordinate line through the zero.
inline ConditionAReport condition_A(const SurfaceSpec& s)
{
    ConditionAReport r;
    if (s.vars.params != 0) {
        r.reason = "symbolic parameters present";
        return r;
    }
    if (!s.k_window) {
        r.reason = "no admissible degree window";
        return r;
    }
    int k = *s.k_window;

    std::vector<Poly> constraints{s.a};
    for (int j = 0; j <= k; ++j)
        constraints.push_back(s.a.partial(Var::z(j)));

    detail::ZeroEnumeration zeros;
    detail::enumerate_zeros(constraints,
                            std::vector<std::optional<Scalar>>(s.vars.zvars, std::nullopt),
                            zeros);
    if (!zeros.blocking.empty()) {
        r.verdict = Cond::Undecided;
        r.reason = zeros.blocking;
        return r;
    }
    r.zeros = zeros.points;

    for (const auto& q : r.zeros) {
        std::vector<std::optional<Scalar>> fixed(s.vars.zvars);
        for (int i = 0; i < s.vars.zvars; ++i)
            fixed[i] = q[i];
        Poly b_at = detail::substitute_z(s.b, fixed);
        if (b_at.is_zero() || b_at.constant_part().is_zero()) {
            r.verdict = Cond::Fails;
            r.witness = q;
            r.failing_clause = "b vanishes at a common zero";
            return r;
        }
        bool some_line_nonzero = false;
        for (int j = 0; j <= k && !some_line_nonzero; ++j) {
            auto line = fixed;
            line[j] = std::nullopt;  // restrict to the z_j coordinate line
            Poly restricted = detail::substitute_z(s.a.partial(Var::z(j)), line);
            some_line_nonzero = !restricted.is_zero();
        }
        if (!some_line_nonzero) {
            r.verdict = Cond::Fails;
            r.witness = q;
            r.failing_clause = "every windowed partial of a vanishes along the coordinate lines";
            return r;
        }
    }
    r.verdict = Cond::Holds;
    return r;
}

// Re-check a FAILS witness by direct evaluation.
inline bool validate_condition_A_witness(const SurfaceSpec& s, const std::vector<Scalar>& q)
{
    if (!s.k_window)
        return false;
    std::vector<std::optional<Scalar>> fixed(s.vars.zvars);
    for (int i = 0; i < s.vars.zvars; ++i)
        fixed[i] = q[i];
    Poly a_at = detail::substitute_z(s.a, fixed);
    if (!a_at.is_zero() && !a_at.constant_part().is_zero())
        return false;
    for (int j = 0; j <= *s.k_window; ++j) {
        Poly d_at = detail::substitute_z(s.a.partial(Var::z(j)), fixed);
        if (!d_at.is_zero() && !d_at.constant_part().is_zero())
            return false;
    }
    Poly b_at = detail::substitute_z(s.b, fixed);
    bool b_vanishes = b_at.is_zero() || b_at.constant_part().is_zero();
    bool all_lines_vanish = true;
    for (int j = 0; j <= *s.k_window && all_lines_vanish; ++j) {
        auto line = fixed;
        line[j] = std::nullopt;
        all_lines_vanish = detail::substitute_z(s.a.partial(Var::z(j)), line).is_zero();
    }
    return b_vanishes || all_lines_vanish;
}

enum class Established { Yes, NotEstablished, Undecided };

inline const char* to_string(Established e)
{
    switch (e) {
        case Established::Yes: return "ESTABLISHED";
        case Established::NotEstablished: return "NOT-ESTABLISHED";
        default: return "UNDECIDED";
    }
}

struct TransitivityReport {
    ConditionAReport a;
    ConditionBReport b;
    std::optional<int> k_used;
    // (A) gives transitivity of all holomorphic automorphisms; (A) and (B)
    // together the volume preserving ones. A failed condition only means the
    // catalogue flows do not see transitivity; other automorphisms may.
    Established aut_transitive = Established::Undecided;
    Established autw_transitive = Established::Undecided;
};

inline TransitivityReport transitivity_verdict(const SurfaceSpec& s)
{
    TransitivityReport r;
    r.a = condition_A(s);
    r.b = condition_B(s);
    r.k_used = s.k_window;
    switch (r.a.verdict) {
        case Cond::Holds: r.aut_transitive = Established::Yes; break;
        case Cond::Fails: r.aut_transitive = Established::NotEstablished; break;
        default: r.aut_transitive = Established::Undecided; break;
    }
    if (r.a.verdict == Cond::Holds && r.b.verdict == Cond::Holds)
        r.autw_transitive = Established::Yes;
    else if (r.a.verdict == Cond::Fails || r.b.verdict == Cond::Fails)
        r.autw_transitive = Established::NotEstablished;
    else
        r.autw_transitive = Established::Undecided;
    return r;
}

}  // namespace dpcert
