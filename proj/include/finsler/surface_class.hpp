#pragma once
// The Q invariant of a Finsler surface, its reconstruction integral, and
// builders for the two classified vanishing-T families
//
//   branch TWO:  Q = a u + b                  (f = sqrt(a u^2 + b u + 1) * exp-term)
//   branch ONE:  Q = c3 - 4 c1 / (u + c2)     (f = sqrt(c3 u^2 + (c2 c3 - 4 c1 + 1) u + c2) * exp-term)
//
// Both closed forms are realized through the real antiderivative of
// int du / P(u) for the quadratic P, so negative discriminants (arctan
// branch) and |argument| > 1 (inverse-cotangent branch of arctanh) evaluate
// without complex arithmetic.  Near-degenerate discriminants or a
// near-vanishing quadratic coefficient fall back to quadrature of
// Q/(1 + u Q), which also defines the metric for jets.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

#include "finsler/jet.hpp"
#include "finsler/metric.hpp"
#include "finsler/poly2.hpp"
#include "finsler/quadrature.hpp"
#include "finsler/surface_form.hpp"

namespace finsler {

struct QProfile {
    double Q = 0.0, Q1 = 0.0, Q2 = 0.0, Q3 = 0.0;
    double Q1_alt = 0.0;  // f f'' / (f - u f')^2, the algebraic cross-route
};

inline QProfile q_from_f(const FForm& ff, std::span<const double> x, double u) {
    Jet f = ff.f_jet(x, u, 5, 0);
    Jet uj = Jet::variable(f.config(), 2, u);
    Jet fp = f.deriv(2);
    Jet fmu = f - uj * fp;
    if (std::abs(fmu.value()) < 1e-13)
        throw SingularMetricError("q_from_f: f - u f' = 0 (frame degenerates)");
    Jet Q = fp / fmu;
    QProfile qp;
    qp.Q = Q.value();
    qp.Q1 = Q.derivative(detail::miu(1));
    qp.Q2 = Q.derivative(detail::miu(2));
    qp.Q3 = Q.derivative(detail::miu(3));
    const double fpp = f.derivative(detail::miu(2));
    qp.Q1_alt = f.value() * fpp / (fmu.value() * fmu.value());
    return qp;
}

inline double q_ode_residual(const QProfile& qp) { return 2.0 * qp.Q1 * qp.Q3 - 3.0 * qp.Q2 * qp.Q2; }

/// f(x, u) = exp(int_{u0}^{u} Q/(1 + t Q) dt), normalized to f(u0) = 1.
inline double f_from_q(const std::function<double(double)>& q_eval, double u, double u0,
                       double abs_tol = 1e-10) {
    auto integrand = [&](double t) {
        const double Q = q_eval(t);
        const double den = 1.0 + t * Q;
        if (std::abs(den) < 1e-12)
            throw QuadratureError("f_from_q: pole of Q/(1 + u Q) inside the interval");
        return Q / den;
    };
    return std::exp(integrate_adaptive<double>(integrand, u0, u, abs_tol));
}

enum class ClassBranch { ONE, TWO };

struct ClassParams {
    ClassBranch branch = ClassBranch::TWO;
    Poly2 a = Poly2::constant(2.0), b = Poly2::constant(3.0);  // branch TWO
    Poly2 c1 = Poly2::constant(1.0), c2 = Poly2::constant(1.0),
          c3 = Poly2::constant(0.0);  // branch ONE
    std::array<double, 2> u_interval{-0.3, 1.2};
};

namespace detail {

inline bool all_zero(const Poly2& p) {
    for (double c : p.c)
        if (c != 0.0) return false;
    return true;
}

/// Real antiderivative A(u) of 1/P(u), P = alpha u^2 + beta u + gamma, on a
/// component where P does not vanish.  `alpha_zero` selects the exact linear
/// form when the quadratic coefficient is identically absent.
template <class T>
T quadratic_log_term(const T& alpha, const T& beta, const T& gamma, const T& u, bool alpha_zero) {
    if (alpha_zero) return log(beta * u + gamma) / beta;
    T disc = beta * beta - alpha * gamma * 4.0;
    T v = alpha * u * 2.0 + beta;
    const double d0 = jet_value(disc);
    if (d0 > 0.0) {
        T sd = sqrt(disc);
        T z = v / sd;
        T at = std::abs(jet_value(z)) < 1.0 ? atanh(z) : atanh(sd / v);
        return at * (-2.0) / sd;
    }
    T se = sqrt(-disc);
    return atan(v / se) * 2.0 / se;
}

struct ClassCoefficients {
    // P = alpha u^2 + beta u + gamma; f = sqrt(P) exp(lambda * A)
    template <class T>
    static void compute(const ClassParams& cp, const T& x1, const T& x2, T& alpha, T& beta,
                        T& gamma, T& lambda) {
        if (cp.branch == ClassBranch::TWO) {
            alpha = cp.a.eval(x1, x2);
            beta = cp.b.eval(x1, x2);
            gamma = beta * 0.0 + 1.0;
            lambda = beta * 0.5;
        } else {
            T c1 = cp.c1.eval(x1, x2), c2 = cp.c2.eval(x1, x2), c3 = cp.c3.eval(x1, x2);
            T w = c2 * c3 - c1 * 4.0;
            alpha = c3;
            beta = w + 1.0;
            gamma = c2;
            lambda = (w - 1.0) * 0.5;
        }
    }
};

/// Q(t) for the quadrature fallback, matching the closed form's parameters.
template <class T>
struct ClassQ {
    ClassBranch branch;
    T a, b;          // TWO
    T c1, c2, c3;    // ONE
    T operator()(const T& t) const {
        if (branch == ClassBranch::TWO) return a * t + b;
        return c3 - (c1 * 4.0) / (t + c2);
    }
};

} // namespace detail

/// True when the closed antiderivative form is well-conditioned for these
/// parameters everywhere on the probe grid; otherwise the builder integrates
/// Q/(1 + u Q) instead.  Decided once per metric so the realization cannot
/// switch between base points.
inline bool class_closed_form_ok(const ClassParams& cp) {
    const bool alpha_zero = cp.branch == ClassBranch::ONE && detail::all_zero(cp.c3);
    for (double x1 = -1.0; x1 <= 1.0; x1 += 0.5)
        for (double x2 = -1.0; x2 <= 1.0; x2 += 0.5) {
            double alpha, beta, gamma, lambda;
            detail::ClassCoefficients::compute(cp, x1, x2, alpha, beta, gamma, lambda);
            (void)lambda;
            const double scale = std::abs(alpha) + std::abs(beta) + std::abs(gamma);
            if (!alpha_zero && std::abs(alpha) < 1e-6 * scale) return false;
            if (!alpha_zero &&
                std::abs(beta * beta - 4.0 * alpha * gamma) < 1e-6 * scale * scale)
                return false;
        }
    return true;
}

/// Builds the classified vanishing-T surface metric F = y^1 f(x, u) on the
/// y^1 > 0 cone over the declared u-interval.
inline FinslerMetric build_class(const ClassParams& cp) {
    if (cp.u_interval[0] >= cp.u_interval[1])
        throw std::invalid_argument("build_class: empty u-interval");
    if (cp.branch == ClassBranch::TWO && detail::all_zero(cp.a))
        throw std::invalid_argument("build_class: branch TWO needs a != 0 (Q' vanishes otherwise)");
    if (cp.branch == ClassBranch::ONE && detail::all_zero(cp.c1))
        throw std::invalid_argument("build_class: branch ONE needs c1 != 0 (Q' vanishes otherwise)");
    const bool alpha_zero = cp.branch == ClassBranch::ONE && detail::all_zero(cp.c3);
    const double u_mid = 0.5 * (cp.u_interval[0] + cp.u_interval[1]);
    const bool closed = class_closed_form_ok(cp);

    auto eval = [cp, alpha_zero, u_mid, closed](auto xspan, auto yspan) {
        using T = std::decay_t<decltype(xspan[0])>;
        const T& x1 = xspan[0];
        const T& x2 = xspan[1];
        T u = yspan[1] / yspan[0];
        if (closed) {
            T alpha{}, beta{}, gamma{}, lambda{};
            detail::ClassCoefficients::compute(cp, x1, x2, alpha, beta, gamma, lambda);
            T P = (alpha * u + beta) * u + gamma;
            T A = detail::quadratic_log_term(alpha, beta, gamma, u, alpha_zero);
            return yspan[0] * sqrt(P) * exp(lambda * A);
        }
        // f normalized to f(x, u_mid) = 1; a conformal factor away from the
        // closed form, which keeps every class-level property intact
        detail::ClassQ<T> Q{cp.branch,          cp.a.eval(x1, x2),  cp.b.eval(x1, x2),
                            cp.c1.eval(x1, x2), cp.c2.eval(x1, x2), cp.c3.eval(x1, x2)};
        auto integrand = [&](const T& t) {
            T q = Q(t);
            return q / (t * q + 1.0);
        };
        return yspan[0] * exp(integral_to_limit(integrand, u_mid, u, 1e-11));
    };

    const auto lo = cp.u_interval[0], hi = cp.u_interval[1];
    auto domain = [lo, hi](std::span<const double> x, std::span<const double> y) {
        (void)x;
        if (!(y[0] > 1e-9)) return false;
        const double u = y[1] / y[0];
        return u >= lo && u <= hi;
    };

    FinslerMetric m;
    m.dim = 2;
    m.label = cp.branch == ClassBranch::TWO ? "class2" : "class1";
    m.eval_jets = [eval](std::span<const Jet> x, std::span<const Jet> y) -> Jet {
        return eval(x, y);
    };
    m.eval_value = [eval](std::span<const double> x, std::span<const double> y) -> double {
        return eval(x, y);
    };
    m.in_domain = domain;
    return m;
}

/// The Q profile the class parameters promise; used by identity checks.
inline double class_q_reference(const ClassParams& cp, std::span<const double> x, double u) {
    if (cp.branch == ClassBranch::TWO) return cp.a(x[0], x[1]) * u + cp.b(x[0], x[1]);
    return cp.c3(x[0], x[1]) - 4.0 * cp.c1(x[0], x[1]) / (u + cp.c2(x[0], x[1]));
}

} // namespace finsler
