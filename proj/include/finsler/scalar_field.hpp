#pragma once
// Frame components of derivatives of 0-homogeneous scalars on a Finsler
// surface: the horizontal covariant derivative split L_{|i} = L_,1 l_i +
// L_,2 m_i and the vertical split F dL/dy^i = L_;1 l_i + L_;2 m_i, plus the
// main-scalar field and the Landsberg/Berwald surface verdicts built on them.
//
// Contractions carry the signature: L_,2 = eps m^i L_{|i} etc., so the
// reconstruction identities hold for either sign of eps.

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "finsler/jet.hpp"
#include "finsler/metric.hpp"
#include "finsler/spray.hpp"

namespace finsler {

/// A jet-liftable scalar on the slit tangent bundle.  y_budget is the highest
/// fiber-derivative shift the evaluator applies internally; callers must add
/// their own extraction depth on top when choosing lattice orders.
struct ScalarField {
    std::function<Jet(std::span<const Jet>, std::span<const Jet>)> eval;
    int y_budget = 0;
};

struct HorizontalDerivatives {
    double value = 0.0;
    double d1 = 0.0;  // L_,1
    double d2 = 0.0;  // L_,2
    double v2 = 0.0;  // L_;2
    double v1 = 0.0;  // L_;1, ~0 for 0-homogeneous input
};

inline HorizontalDerivatives horizontal_scalar_derivatives(const FinslerMetric& F,
                                                           const ScalarField& field,
                                                           std::span<const double> x,
                                                           std::span<const double> y,
                                                           double homog_tol = 1e-6) {
    if (F.dim != 2)
        throw std::invalid_argument("horizontal_scalar_derivatives: surface metrics only");
    const int n = 2;
    auto cfg = JetConfig::make(n, n, 1, field.y_budget + 1);
    std::vector<Jet> xs, ys;
    for (int i = 0; i < n; ++i) xs.push_back(Jet::variable(cfg, i, x[i]));
    for (int i = 0; i < n; ++i) ys.push_back(Jet::variable(cfg, n + i, y[i]));
    Jet L = field.eval(xs, ys);

    std::array<double, 2> dLdx{}, dLdy{};
    for (int i = 0; i < n; ++i) {
        dLdx[i] = L.derivative(detail::mix({i}, n, {}));
        dLdy[i] = L.derivative(detail::miy(n, {i}));
    }
    Mat Gij = nonlinear_connection(F, x, y);
    BerwaldFrame fr = berwald_frame(F, x, y);

    std::array<double, 2> Lbar{};
    for (int i = 0; i < n; ++i) {
        double s = dLdx[i];
        for (int j = 0; j < n; ++j) s -= Gij(j, i) * dLdy[j];
        Lbar[i] = s;
    }
    HorizontalDerivatives hd;
    hd.value = L.value();
    for (int i = 0; i < n; ++i) {
        hd.d1 += fr.l_up[i] * Lbar[i];
        hd.d2 += fr.eps * fr.m_up[i] * Lbar[i];
        hd.v1 += fr.l_up[i] * fr.F * dLdy[i];
        hd.v2 += fr.eps * fr.m_up[i] * fr.F * dLdy[i];
    }
    if (std::abs(hd.v1) > homog_tol * std::max(1.0, std::abs(hd.v2)))
        throw std::invalid_argument(
            "horizontal_scalar_derivatives: scalar is not 0-homogeneous (L_;1 != 0)");
    return hd;
}

/// Main scalar I = eps F C_ijk m^i m^j m^k as a jet-liftable field.
inline ScalarField main_scalar_field(const FinslerMetric& F) {
    ScalarField sf;
    sf.y_budget = 3;
    auto eval = F.eval_jets;
    sf.eval = [eval](std::span<const Jet> xs, std::span<const Jet> ys) -> Jet {
        const int n = 2;
        Jet Fj = eval(xs, ys);
        Jet E = Fj * Fj * 0.5;
        std::vector<Jet> g(n * n, Jet{});
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                g[i * n + j] = E.deriv(n + i).deriv(n + j);
                if (j > i) g[j * n + i] = g[i * n + j];
            }
        auto ginv = detail::invert_jet_matrix(g, n);
        Jet lu0 = ys[0] / Fj, lu1 = ys[1] / Fj;
        Jet mt0 = -lu1, mt1 = lu0;
        Jet rho = ginv[0] * mt0 * mt0 + (ginv[1] + ginv[2]) * mt0 * mt1 + ginv[3] * mt1 * mt1;
        const double eps = rho.value() > 0 ? 1.0 : -1.0;
        Jet inv = Jet::constant(rho.config(), 1.0) / sqrt(rho * eps);
        Jet m0 = mt0 * inv, m1 = mt1 * inv;
        Jet mu0 = ginv[0] * m0 + ginv[1] * m1;
        Jet mu1 = ginv[2] * m0 + ginv[3] * m1;
        Jet acc = Jet::constant(rho.config(), 0.0);
        std::array<Jet, 2> mu{mu0, mu1};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    Jet C = E.deriv(n + i).deriv(n + j).deriv(n + k) * 0.5;
                    acc += C * mu[i] * mu[j] * mu[k];
                }
        return Fj * acc * eps;
    };
    return sf;
}

/// I_{,1;2} via a finite-difference lift of I_{,1} in y (central step 1e-5
/// scaled to |y|), contracted with eps m^i F.
inline double main_scalar_d1_vertical(const FinslerMetric& F, std::span<const double> x,
                                      std::span<const double> y) {
    ScalarField I = main_scalar_field(F);
    BerwaldFrame fr = berwald_frame(F, x, y);
    double out = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double h = 1e-5 * std::max(1.0, std::abs(y[i]));
        std::array<double, 2> yp{y[0], y[1]}, ym{y[0], y[1]};
        yp[i] += h;
        ym[i] -= h;
        const double dp = horizontal_scalar_derivatives(F, I, x, yp).d1;
        const double dm = horizontal_scalar_derivatives(F, I, x, ym).d1;
        out += fr.eps * fr.m_up[i] * fr.F * (dp - dm) / (2.0 * h);
    }
    return out;
}

struct SurfaceFlags {
    bool is_landsberg = false;
    bool is_berwald = false;
    double max_I1 = 0.0, max_I2 = 0.0;
    double max_L = 0.0, max_berwald_curv = 0.0;
    double lemma_b_residual = 0.0;  // Berwald tensor vs frame formula (FD-assisted)
    double tol = 1e-7;
};

template <class SampleRange>
SurfaceFlags surface_flags(const FinslerMetric& F, const SampleRange& samples, double tol = 1e-7,
                           bool with_lemma_b = true) {
    SurfaceFlags out;
    out.tol = tol;
    ScalarField I = main_scalar_field(F);
    for (const auto& s : samples) {
        auto xs = s.xs(2);
        auto ys = s.ys(2);
        auto hd = horizontal_scalar_derivatives(F, I, xs, ys);
        out.max_I1 = std::max(out.max_I1, std::abs(hd.d1));
        out.max_I2 = std::max(out.max_I2, std::abs(hd.d2));
        auto sd = spray(F, xs, ys);
        out.max_L = std::max(out.max_L, max_abs(landsberg_from_spray(sd)));
        out.max_berwald_curv = std::max(out.max_berwald_curv, max_abs(sd.G_h_ijk));
        if (with_lemma_b) {
            auto fr = berwald_frame(F, xs, ys);
            const double i12 = main_scalar_d1_vertical(F, xs, ys);
            for (int h = 0; h < 2; ++h)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        for (int k = 0; k < 2; ++k) {
                            const double want = (1.0 / fr.F) *
                                                (-2.0 * hd.d1 * fr.l_up[h] +
                                                 (hd.d2 + i12) * fr.m_up[h]) *
                                                fr.m_low[i] * fr.m_low[j] * fr.m_low[k];
                            out.lemma_b_residual = std::max(
                                out.lemma_b_residual, std::abs(sd.G_h_ijk(h, i, j, k) - want));
                        }
        }
    }
    out.is_landsberg = out.max_I1 < tol;
    out.is_berwald = out.is_landsberg && out.max_I2 < tol;
    return out;
}

} // namespace finsler
