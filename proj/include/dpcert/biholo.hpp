#pragma once

#include "dpcert/surface.hpp"

namespace dpcert {

// Formal verification that (x, y, z) -> (x, Ey + (E + ax - 1)/x^2, Fz) maps
// the surface {x^2 y = z^2 - 1} into {x^2 y = z^2 - 1 + ax}, where E and F
// are adjoined indeterminates subject to F^2 = E (E plays e^{-ax}, F plays
// e^{-ax/2}). The image relation, multiplied by x^2, must reduce to zero
// modulo F^2 = E and the source relation.
struct BiholoCheck {
    bool ok = false;
    Poly residual;  // zero exactly when the identity holds
};

namespace detail {

inline Poly reduce_half_exponential(Poly p, Var e_var, Var f_var)
{
    Poly out(p.vars());
    for (const auto& [m, c] : p.terms()) {
        Mono r = m;
        r[e_var.idx] += r[f_var.idx] / 2;
        r[f_var.idx] %= 2;
        out.add_term(std::move(r), c);
    }
    return out;
}

}  // namespace detail

inline BiholoCheck biholomorphism_check(const Scalar& alpha, bool perturbed = false)
{
    // Variables: z0 is the surface coordinate, z1 = E, z2 = F.
    VarSet vars(2, 0);
    Var zc = Var::z(0);
    Var Ev = Var::z(1);
    Var Fv = Var::z(2);
    Poly a_src = Poly::monomial(vars, zc, 2, Scalar(1)) - Poly::constant(vars, Scalar(1));
    SurfacePtr source = make_surface(a_src, Poly::zero(vars));

    Poly x = Poly::variable(vars, Var::x());
    Poly y = Poly::variable(vars, Var::y());
    Poly z = Poly::variable(vars, zc);
    Poly E = Poly::variable(vars, Ev);
    Poly F = Poly::variable(vars, Fv);
    Poly one = Poly::constant(vars, Scalar(1));
    Poly ax = x.scaled(alpha);

    // x^2 Y for the image point, already cleared of the 1/x^2 denominator.
    Poly x2_Y = E * x * x * y;
    if (!perturbed)
        x2_Y += E + ax - one;
    Poly Z = F * z;

    // Target relation x^2 Y - Z^2 + 1 - alpha x, reduced by F^2 = E and by
    // the source relation.
    Poly residual = x2_Y - Z * Z + one - ax;
    residual = detail::reduce_half_exponential(std::move(residual), Ev, Fv);
    residual = reduce_against_relation(std::move(residual), *source);
    residual = detail::reduce_half_exponential(std::move(residual), Ev, Fv);

    BiholoCheck check;
    check.residual = std::move(residual);
    check.ok = check.residual.is_zero();
    return check;
}

}  // namespace dpcert
