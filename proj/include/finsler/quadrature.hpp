#pragma once
// Adaptive Gauss-Kronrod (G7,K15) quadrature, templated on the value type so
// integrands may return plain doubles or Jets (coefficient-wise integration).
// Error control uses sup_norm; panels split until the local estimate fits the
// width-proportional share of the absolute tolerance.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "finsler/jet.hpp"

namespace finsler {

namespace detail {

// QUADPACK dqk15 nodes/weights on [-1,1], symmetric halves.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

} // namespace detail

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class T, class F>
T gauss_kronrod_15(F&& f, double a, double b, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T fc = f(c);
    T kron = fc * (h * detail::kWgk[7]);
    T gauss = fc * (h * detail::kWg[3]);
    for (int i = 0; i < 7; ++i) {
        const double dx = h * detail::kXgk[i];
        T fl = f(c - dx);
        T fr = f(c + dx);
        T s = fl + fr;
        kron += s * (h * detail::kWgk[i]);
        if (i % 2 == 1) gauss += s * (h * detail::kWg[i / 2]);
    }
    err = sup_norm(kron - gauss);
    return kron;
}

template <class T, class F>
T integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-10, int max_panels = 1 << 14) {
    if (a == b) {
        double e;
        return gauss_kronrod_15<T>(f, a, a, e) * 0.0;
    }
    struct Panel {
        double a, b;
    };
    std::vector<Panel> stack{{a, b}};
    const double total = std::abs(b - a);
    bool have = false;
    T sum{};
    int panels = 0;
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        if (++panels > max_panels)
            throw QuadratureError("integrate_adaptive: panel limit exceeded (pole or non-smooth integrand?)");
        double err;
        T val = gauss_kronrod_15<T>(f, p.a, p.b, err);
        const double share = abs_tol * std::abs(p.b - p.a) / total;
        if (!(err <= share) && std::abs(p.b - p.a) < 1e-13 * total)
            throw QuadratureError("integrate_adaptive: no convergence at minimal panel width");
        if (err <= share) {
            if (have)
                sum += val;
            else {
                sum = val;
                have = true;
            }
        } else {
            const double m = 0.5 * (p.a + p.b);
            stack.push_back({p.a, m});
            stack.push_back({m, p.b});
        }
    }
    return sum;
}

/// Integral with a jet-valued upper limit: \int_{u0}^{u} q(t) dt evaluated by
/// the substitution t = u0 + s (u - u0), s in [0,1], so q is called on
/// T-valued arguments and the result carries the limit's jet structure.
template <class T, class Q>
T integral_to_limit(Q&& q, double u0, const T& u, double abs_tol = 1e-10) {
    T span = u - u0;
    auto g = [&](double s) -> T { return q(u0 + span * s) * span; };
    return integrate_adaptive<T>(g, 0.0, 1.0, abs_tol);
}

} // namespace finsler
