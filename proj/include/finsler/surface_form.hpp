#pragma once
// Surface form of a Finsler metric: F = |y^1| f(x, eps*u) with u = y^2/y^1 on
// the y^1 != 0 cone, the spray factors f1/f2, the four Landsberg components
// in that form, and the Landsberg PDE residual.

#include <array>
#include <cmath>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "finsler/jet.hpp"
#include "finsler/linalg.hpp"
#include "finsler/metric.hpp"

namespace finsler {

/// One branch (sign of y^1) of the surface form.  The eps = +1 branch is the
/// default working branch; eps = -1 exists for reconstruction checks.
struct FForm {
    FinslerMetric metric;
    double eps = 1.0;

    /// f(x, u) = F(x, eps, eps*u) as a jet in (x^1, x^2, u).
    Jet f_jet(std::span<const double> x, double u, int ord_u = 5, int ord_x = 1) const {
        auto cfg = JetConfig::make(2, 1, ord_x, ord_u);
        std::vector<Jet> xs;
        for (int i = 0; i < 2; ++i)
            xs.push_back(ord_x >= 1 ? Jet::variable(cfg, i, x[i]) : Jet::constant(cfg, x[i]));
        Jet uj = Jet::variable(cfg, 2, u);
        std::vector<Jet> ys{Jet::constant(cfg, eps), uj * eps};
        return metric.eval_jets(xs, ys);
    }

    double f(std::span<const double> x, double u) const {
        const std::array<double, 2> y{eps, eps * u};
        return metric.eval_value(x, y);
    }
};

/// Point evaluation of the f-form machinery at one (x, u).
struct FFormEval {
    double u = 0.0;
    double f = 0.0, fp = 0.0, fpp = 0.0;  // f and u-derivatives
    double f1 = 0.0, f2 = 0.0;            // spray factors of Eq. G^i = f_i (y^1)^2
    double f1ppp = 0.0, f2ppp = 0.0;      // third u-derivatives
    double l1 = 0.0, l2 = 0.0;            // l_i = dF/dy^i on the branch
};

inline FForm f_form(const FinslerMetric& F, double eps = 1.0) {
    if (F.dim != 2) throw std::invalid_argument("f_form: surface metrics only");
    if (eps != 1.0 && eps != -1.0) throw std::invalid_argument("f_form: eps must be +1 or -1");
    return FForm{F, eps};
}

namespace detail {

inline MultiIndex miu(int k) {
    MultiIndex e{};
    e[2] = static_cast<std::uint8_t>(k);
    return e;
}

} // namespace detail

inline FFormEval fform_eval(const FForm& ff, std::span<const double> x, double u) {
    Jet f = ff.f_jet(x, u, 5, 1);
    const auto cfg = f.config();
    Jet uj = Jet::variable(cfg, 2, u);
    Jet fp = f.deriv(2);
    Jet fpp = fp.deriv(2);
    if (std::abs(fpp.value()) < 1e-13)
        throw SingularMetricError("fform_eval: f'' = 0 at the probed u (degenerate surface form)");
    Jet d1f = f.deriv(0), d2f = f.deriv(1);
    Jet d1fp = fp.deriv(0), d2fp = fp.deriv(1);
    Jet den = f * fpp * 2.0;
    Jet a = d1f + uj * d2f;          // del_1 f + u del_2 f
    Jet b = d1fp + uj * d2fp - d2f;  // del_1 f' + u del_2 f' - del_2 f
    Jet f1 = (a * fpp - b * fp) / den;
    Jet f2 = (uj * a * fpp + b * (f - uj * fp)) / den;

    FFormEval ev;
    ev.u = u;
    ev.f = f.value();
    ev.fp = fp.value();
    ev.fpp = fpp.value();
    ev.f1 = f1.value();
    ev.f2 = f2.value();
    ev.f1ppp = f1.derivative(detail::miu(3));
    ev.f2ppp = f2.derivative(detail::miu(3));
    ev.l1 = ff.eps * (ev.f - u * ev.fp);
    ev.l2 = ff.eps * ev.fp;
    return ev;
}

/// Spray coefficients in the surface form: G^1 = f1 (y^1)^2, G^2 = f2 (y^1)^2.
inline Vec fform_spray(const FForm& ff, std::span<const double> x, std::span<const double> y) {
    if (y[0] * ff.eps <= 0.0)
        throw DomainError("fform_spray: y^1 sign does not match the branch");
    auto ev = fform_eval(ff, x, y[1] / y[0]);
    Vec G;
    G.n = 2;
    G[0] = ev.f1 * y[0] * y[0];
    G[1] = ev.f2 * y[0] * y[0];
    return G;
}

/// Landsberg components in the surface form.  With p = number of '2' indices,
/// L_{ijk} = (-1)^p u^{3-p} (f/2)(f1''' l_1 + f2''' l_2); the sign on L_122
/// follows the indicatory identity L_{ijk} y^k = 0 (cross-checked against the
/// general-formula tensor).
inline Ten3 landsberg_surface(const FForm& ff, std::span<const double> x,
                              std::span<const double> y) {
    if (y[0] * ff.eps <= 0.0)
        throw DomainError("landsberg_surface: y^1 sign does not match the branch");
    const double u = y[1] / y[0];
    auto ev = fform_eval(ff, x, u);
    const double K = ev.f1ppp * ev.l1 + ev.f2ppp * ev.l2;
    Ten3 L;
    L.n = 2;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                const int p = i + j + k;  // count of index value 2 (0-based slot 1)
                const double sign = (p % 2) ? -1.0 : 1.0;
                L(i, j, k) = sign * std::pow(u, 3 - p) * 0.5 * ev.f * K;
            }
    return L;
}

struct PdeResidual {
    double residual = 0.0;  // f1''' l_1 + f2''' l_2
    double factored = 0.0;  // eps (f - u f')(f1''' + Q f2''')
};

inline PdeResidual landsberg_pde_residual(const FForm& ff, std::span<const double> x, double u) {
    auto ev = fform_eval(ff, x, u);
    PdeResidual r;
    r.residual = ev.f1ppp * ev.l1 + ev.f2ppp * ev.l2;
    const double fmu = ev.f - u * ev.fp;
    const double Q = ev.fp / fmu;
    r.factored = ff.eps * fmu * (ev.f1ppp + Q * ev.f2ppp);
    return r;
}

} // namespace finsler
