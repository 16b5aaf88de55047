#pragma once

#include <stdexcept>
#include <string>

namespace dpcert {

// A variable of the ambient ring. Index layout fixes the monomial order
// y > x > z_0 > ... > z_n > parameters: idx 0 is y, idx 1 is x, idx 2+i is
// z_i, and parameter indeterminates come last.
struct Var {
    int idx = -1;

    static Var y() { return Var{0}; }
    static Var x() { return Var{1}; }
    static Var z(int i) { return Var{2 + i}; }

    friend bool operator==(Var a, Var b) { return a.idx == b.idx; }
    friend bool operator!=(Var a, Var b) { return a.idx != b.idx; }
};

// Variable universe for one surface family: y, x, z_0..z_n and optionally
// trailing parameter indeterminates (used for the symbolic constants of the
// n = 0 family). The order is fixed per session.
struct VarSet {
    int zvars = 1;   // number of z variables, i.e. n + 1
    int params = 0;  // trailing parameter indeterminates

    VarSet() = default;
    VarSet(int n_family, int nparams) : zvars(n_family + 1), params(nparams)
    {
        if (n_family < 0 || nparams < 0)
            throw std::invalid_argument("VarSet: negative dimension");
    }

    int n_family() const { return zvars - 1; }
    int count() const { return 2 + zvars + params; }

    Var param(int p) const { return Var{2 + zvars + p}; }

    bool is_z(Var v) const { return v.idx >= 2 && v.idx < 2 + zvars; }
    bool is_param(Var v) const { return v.idx >= 2 + zvars && v.idx < count(); }
    bool contains(Var v) const { return v.idx >= 0 && v.idx < count(); }

    std::string name(Var v) const
    {
        if (v.idx == 0)
            return "y";
        if (v.idx == 1)
            return "x";
        if (is_z(v))
            return "z" + std::to_string(v.idx - 2);
        if (is_param(v)) {
            int p = v.idx - 2 - zvars;
            if (p == 0)
                return "alpha";
            if (p == 1)
                return "beta";
            return "p" + std::to_string(p);
        }
        throw std::out_of_range("VarSet: bad variable index");
    }

    friend bool operator==(const VarSet& a, const VarSet& b)
    {
        return a.zvars == b.zvars && a.params == b.params;
    }
    friend bool operator!=(const VarSet& a, const VarSet& b) { return !(a == b); }
};

}  // namespace dpcert
