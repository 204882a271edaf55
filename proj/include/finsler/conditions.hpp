#pragma once
// T-tensor, v-curvature, and the verdicts for the T-condition and the
// sigma-T-condition (point-wise kernel of the stacked constraints
// s_r T^r_jkl(x, y_a) = 0 over sampled directions).

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "finsler/jet.hpp"
#include "finsler/linalg.hpp"
#include "finsler/metric.hpp"
#include "finsler/sampling.hpp"

namespace finsler {

struct TTensor {
    Ten4 T;      // T_hijk, totally symmetric
    Ten4 T_up1;  // T^h_ijk
    Ten4 T_up2;  // T^{ri}_jk (first two slots raised)
};

namespace detail {

inline Ten4 t_tensor_lower(const Mat& g_inv, const Ten3& C, const Ten3& C_up, const Ten4& C_dot,
                           double Fv, const Vec& l_low) {
    const int n = C.n;
    Ten4 T;
    T.n = n;
    for (int h = 0; h < n; ++h)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double cc = 0.0;
                    for (int r = 0; r < n; ++r)
                        cc += C(r, i, j) * C_up(r, h, k) + C(r, j, h) * C_up(r, i, k) +
                              C(r, i, h) * C_up(r, j, k);
                    T(h, i, j, k) = Fv * C_dot(h, i, j, k) - Fv * cc + C(h, i, j) * l_low[k] +
                                    C(h, i, k) * l_low[j] + C(h, j, k) * l_low[i] +
                                    C(i, j, k) * l_low[h];
                }
    (void)g_inv;
    return T;
}

inline Ten4 raise_first(const Ten4& t, const Mat& g_inv) {
    const int n = t.n;
    Ten4 out;
    out.n = n;
    for (int h = 0; h < n; ++h)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double s = 0.0;
                    for (int r = 0; r < n; ++r) s += g_inv(h, r) * t(r, i, j, k);
                    out(h, i, j, k) = s;
                }
    return out;
}

inline Ten4 raise_second(const Ten4& t, const Mat& g_inv) {
    const int n = t.n;
    Ten4 out;
    out.n = n;
    for (int h = 0; h < n; ++h)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double s = 0.0;
                    for (int r = 0; r < n; ++r) s += g_inv(i, r) * t(h, r, j, k);
                    out(h, i, j, k) = s;
                }
    return out;
}

struct PointTensors {
    MetricTensor mt;
    CartanData cd;
    double F = 0.0;
    Vec l_low, l_up;
    TTensor tt;
};

inline PointTensors point_tensors(const FinslerMetric& F, std::span<const double> x,
                                  std::span<const double> y) {
    PointTensors pt;
    Jet Ejet = energy(F, x, y, 4, 0);
    const int n = F.dim;
    pt.mt = metric_from_g(extract_metric(Ejet, n));
    pt.cd = cartan_from_energy_jet(Ejet, pt.mt, n);
    pt.F = std::sqrt(2.0 * Ejet.value());
    pt.l_low.n = pt.l_up.n = n;
    for (int i = 0; i < n; ++i) {
        pt.l_low[i] = Ejet.derivative(miy(n, {i})) / pt.F;
        pt.l_up[i] = y[i] / pt.F;
    }
    pt.tt.T = t_tensor_lower(pt.mt.g_inv, pt.cd.C, pt.cd.C_up, pt.cd.C_dot, pt.F, pt.l_low);
    pt.tt.T_up1 = raise_first(pt.tt.T, pt.mt.g_inv);
    pt.tt.T_up2 = raise_second(pt.tt.T_up1, pt.mt.g_inv);
    return pt;
}

/// Residual scale for T verdicts: F * max|C| * ||g_inv||, the natural size of
/// the C-quadratic terms.  Falls back to 1 (raw residual) when the Cartan
/// tensor itself is numerically zero, e.g. Riemannian inputs.
inline double t_scale(const PointTensors& pt) {
    const double s = pt.F * max_abs(pt.cd.C) * max_abs(pt.mt.g_inv);
    return s > 1e-10 ? s : 1.0;
}

} // namespace detail

inline TTensor t_tensor(const FinslerMetric& F, std::span<const double> x,
                        std::span<const double> y) {
    return detail::point_tensors(F, x, y).tt;
}

/// v-curvature of the Cartan connection, S_i^h_jk stored as S(i,h,j,k).
inline Ten4 v_curvature(const FinslerMetric& F, std::span<const double> x,
                        std::span<const double> y) {
    auto pt = detail::point_tensors(F, x, y);
    const int n = F.dim;
    Ten4 S;
    S.n = n;
    for (int i = 0; i < n; ++i)
        for (int h = 0; h < n; ++h)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double s = 0.0;
                    for (int r = 0; r < n; ++r)
                        s += pt.cd.C_up(r, i, k) * pt.cd.C_up(h, r, j) -
                             pt.cd.C_up(r, i, j) * pt.cd.C_up(h, r, k);
                    S(i, h, j, k) = s;
                }
    return S;
}

struct TConditionReport {
    bool verdict = false;
    double tol = 1e-7;
    double max_residual = 0.0;  // scale-normalized max |T^h_ijk|
    double max_raw = 0.0;
    double mean_residual = 0.0;
    Sample argmax;
};

inline TConditionReport check_t_condition(const FinslerMetric& F, std::span<const Sample> samples,
                                          double tol = 1e-7) {
    if (samples.empty()) throw std::invalid_argument("check_t_condition: empty sample set");
    TConditionReport rep;
    rep.tol = tol;
    double sum = 0.0;
    for (const auto& s : samples) {
        auto pt = detail::point_tensors(F, s.xs(F.dim), s.ys(F.dim));
        const double raw = max_abs(pt.tt.T_up1);
        const double res = raw / detail::t_scale(pt);
        sum += res;
        if (res >= rep.max_residual) {
            rep.max_residual = res;
            rep.max_raw = raw;
            rep.argmax = s;
        }
    }
    rep.mean_residual = sum / samples.size();
    rep.verdict = rep.max_residual < tol;
    return rep;
}

enum class SigmaTVerdict { T_CONDITION, SIGMA_T_ONLY, NEITHER };

inline const char* to_string(SigmaTVerdict v) {
    switch (v) {
        case SigmaTVerdict::T_CONDITION: return "T_CONDITION";
        case SigmaTVerdict::SIGMA_T_ONLY: return "SIGMA_T_ONLY";
        case SigmaTVerdict::NEITHER: return "NEITHER";
    }
    return "?";
}

struct SigmaTReport {
    int kernel_dim = 0;
    SigmaTVerdict verdict = SigmaTVerdict::NEITHER;
    std::vector<std::array<double, 3>> witness;  // kernel basis vectors
    std::vector<double> singular_values;         // descending
    double max_t_residual = 0.0;                 // normalized max |T^h_ijk| over the directions
    double sigma_residual = -1.0;                // max |sigma_r T^r_jkl| if a gradient was given
};

/// Stacks the linear constraints s -> s_r T^r_jkl(x, y_a) over all sampled
/// directions at fixed x and reports the null space (singular values below
/// 1e-8 of the largest).  If sigma_grad is given, also reports the residual
/// of that specific gradient.
inline SigmaTReport check_sigma_t(const FinslerMetric& F, std::span<const double> x,
                                  std::span<const std::array<double, 3>> directions,
                                  const double* sigma_grad = nullptr, double sv_cutoff = 1e-8) {
    const int n = F.dim;
    if (static_cast<int>(directions.size()) < 2 * n)
        throw std::invalid_argument("check_sigma_t: need at least 2n direction samples");
    SigmaTReport rep;
    std::vector<std::array<double, 3>> rows;
    double sigma_res = 0.0;
    for (const auto& y : directions) {
        auto pt = detail::point_tensors(F, x, std::span<const double>(y.data(), n));
        const double scale = detail::t_scale(pt);
        rep.max_t_residual = std::max(rep.max_t_residual, max_abs(pt.tt.T_up1) / scale);
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k)
                for (int l = k; l < n; ++l) {
                    std::array<double, 3> row{};
                    for (int r = 0; r < n; ++r) row[r] = pt.tt.T_up1(r, j, k, l) / scale;
                    rows.push_back(row);
                    if (sigma_grad) {
                        double s = 0.0;
                        for (int r = 0; r < n; ++r) s += sigma_grad[r] * row[r];
                        sigma_res = std::max(sigma_res, std::abs(s));
                    }
                }
    }
    if (sigma_grad) rep.sigma_residual = sigma_res;

    auto svd = svd_small(rows, static_cast<int>(rows.size()), n);
    rep.singular_values = svd.sigma;
    const double smax = svd.sigma.front();
    if (smax <= 1e-12) {
        rep.kernel_dim = n;  // T vanished at every sampled direction
        for (int i = 0; i < n; ++i) {
            std::array<double, 3> e{};
            e[i] = 1.0;
            rep.witness.push_back(e);
        }
    } else {
        for (size_t i = 0; i < svd.sigma.size(); ++i)
            if (svd.sigma[i] <= sv_cutoff * smax) {
                ++rep.kernel_dim;
                rep.witness.push_back(svd.right[i]);
            }
    }
    rep.verdict = rep.kernel_dim == n  ? SigmaTVerdict::T_CONDITION
                  : rep.kernel_dim > 0 ? SigmaTVerdict::SIGMA_T_ONLY
                                       : SigmaTVerdict::NEITHER;
    return rep;
}

} // namespace finsler
