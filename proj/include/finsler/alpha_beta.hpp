#pragma once
// Three-dimensional (alpha, beta) example families with Euclidean-type alpha
// and beta proportional to y^1:
//
//   T_CLASS        phi(s) = s^((c b^2 - 1)/(c b^2)) (b^2 - s^2)^(1/(2 c b^2))
//   SIGMA_T_CLASS  phi(s) = c3 exp( int_0^s (c1 sqrt(b^2-t^2) + c2 t) /
//                                   (t (c1 sqrt(b^2-t^2) + c2 t) + 1) dt )
//   EXAMPLE_1      T_CLASS with c = 2, b = 1  (phi = sqrt(s)(1-s^2)^(1/4))
//   EXAMPLE_2      F = f(x^1)(a y^1 + sqrt(phi)) exp(a y^1/(a y^1 + sqrt(phi))),
//                  f(x^1) = exp(kappa x^1), phi = (y^2)^2 + (y^3)^2
//
// All live on conic domains with s = beta/alpha strictly inside (0, b) and,
// for EXAMPLE_2, with the transverse quadratic bounded away from zero.

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>

#include "finsler/jet.hpp"
#include "finsler/metric.hpp"
#include "finsler/quadrature.hpp"

namespace finsler {

enum class AlphaBetaKind { T_CLASS, SIGMA_T_CLASS, EXAMPLE_1, EXAMPLE_2 };

struct AlphaBetaParams {
    double c = 2.0, b = 1.0;              // T_CLASS
    double c1 = 1.0, c2 = 0.0, c3 = 1.0;  // SIGMA_T_CLASS (also uses b)
    double a = 1.0, kappa = 1.0;          // EXAMPLE_2
};

inline FinslerMetric build_alpha_beta(AlphaBetaKind kind, AlphaBetaParams p = {}) {
    if (kind == AlphaBetaKind::EXAMPLE_1) {
        p.c = 2.0;
        p.b = 1.0;
        kind = AlphaBetaKind::T_CLASS;
    }

    if (kind == AlphaBetaKind::EXAMPLE_2) {
        if (p.a == 0.0) throw std::invalid_argument("example2 needs a != 0");
        const double a = p.a, kappa = p.kappa;
        auto eval = [a, kappa](auto xs, auto ys) {
            using T = std::decay_t<decltype(xs[0])>;
            T phi = ys[1] * ys[1] + ys[2] * ys[2];
            T root = sqrt(phi);
            T base = ys[0] * a + root;
            return exp(xs[0] * kappa) * base * exp((ys[0] * a) / base);
        };
        auto domain = [a](std::span<const double> x, std::span<const double> y) {
            (void)x;
            const double phi = y[1] * y[1] + y[2] * y[2];
            const double nrm2 = y[0] * y[0] + phi;
            return y[0] > 1e-3 * std::sqrt(nrm2) && phi > 1e-6 * nrm2 &&
                   a * y[0] + std::sqrt(phi) > 1e-6 * std::sqrt(nrm2);
        };
        return make_metric(3, "example2", eval, domain);
    }

    const double b = p.b;
    if (!(b > 0.0)) throw std::invalid_argument("alpha-beta family needs b > 0");

    auto domain = [b](std::span<const double> x, std::span<const double> y) {
        (void)x;
        const double nrm = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
        const double s = b * y[0] / nrm;
        return s > 1e-6 && s < b - 1e-6 * b;
    };

    if (kind == AlphaBetaKind::T_CLASS) {
        const double cb2 = p.c * b * b;
        if (cb2 == 0.0) throw std::invalid_argument("T_CLASS needs c != 0");
        const double e1 = (cb2 - 1.0) / cb2, e2 = 1.0 / (2.0 * cb2);
        auto eval = [b, e1, e2](auto xs, auto ys) {
            using T = std::decay_t<decltype(xs[0])>;
            (void)xs;
            T alpha = sqrt(ys[0] * ys[0] + ys[1] * ys[1] + ys[2] * ys[2]);
            T s = (ys[0] * b) / alpha;
            return alpha * pow(s, e1) * pow(s * s * (-1.0) + b * b, e2);
        };
        return make_metric(3, "tclass", eval, domain);
    }

    // SIGMA_T_CLASS: phi via quadrature of the stated integrand from 0 to s
    const double c1 = p.c1, c2 = p.c2, c3 = p.c3;
    if (!(c3 > 0.0)) throw std::invalid_argument("SIGMA_T_CLASS needs c3 > 0");
    auto eval = [b, c1, c2, c3](auto xs, auto ys) {
        using T = std::decay_t<decltype(xs[0])>;
        (void)xs;
        T alpha = sqrt(ys[0] * ys[0] + ys[1] * ys[1] + ys[2] * ys[2]);
        T s = (ys[0] * b) / alpha;
        auto integrand = [&](const T& t) {
            T num = sqrt(t * t * (-1.0) + b * b) * c1 + t * c2;
            return num / (t * num + 1.0);
        };
        return alpha * c3 * exp(integral_to_limit(integrand, 0.0, s, 1e-11));
    };
    return make_metric(3, "sigmatclass", eval, domain);
}

} // namespace finsler
