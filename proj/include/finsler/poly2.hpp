#pragma once
// Bivariate polynomial of degree <= 2 in (x1, x2).  This is the declarative
// form for every x-dependent family parameter and conformal factor; it covers
// all the paper's examples and evaluates on doubles or Jets alike.

#include <array>
#include <cmath>
#include <string>

#include "finsler/jet.hpp"

namespace finsler {

struct Poly2 {
    // coefficients over monomials {1, x1, x2, x1^2, x1*x2, x2^2}
    std::array<double, 6> c{};

    static Poly2 constant(double v) {
        Poly2 p;
        p.c[0] = v;
        return p;
    }
    static Poly2 linear(double c0, double c1, double c2) {
        Poly2 p;
        p.c = {c0, c1, c2, 0.0, 0.0, 0.0};
        return p;
    }

    bool is_constant() const {
        for (int i = 1; i < 6; ++i)
            if (c[i] != 0.0) return false;
        return true;
    }

    template <class T>
    T eval(const T& x1, const T& x2) const {
        return c[0] + x1 * c[1] + x2 * c[2] + x1 * x1 * c[3] + x1 * x2 * c[4] + x2 * x2 * c[5];
    }

    double operator()(double x1, double x2) const { return eval(x1, x2); }

    std::array<double, 2> grad(double x1, double x2) const {
        return {c[1] + 2.0 * c[3] * x1 + c[4] * x2, c[2] + c[4] * x1 + 2.0 * c[5] * x2};
    }
};

} // namespace finsler
