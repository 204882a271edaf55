#pragma once
// FinslerMetric and the point-wise fundamental objects: energy jet, metric
// tensor, Cartan tensor and its fiber derivative, angular metric, and the
// two-dimensional Berwald frame with the main scalar.

#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "finsler/jet.hpp"
#include "finsler/linalg.hpp"

namespace finsler {

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularMetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An evaluatable Finsler function.  The jet evaluator is the ground truth;
/// the value evaluator is the same expression instantiated on doubles.
/// Evaluators must be pure and re-entrant.
struct FinslerMetric {
    int dim = 2;
    std::string label;
    std::function<Jet(std::span<const Jet>, std::span<const Jet>)> eval_jets;
    std::function<double(std::span<const double>, std::span<const double>)> eval_value;
    std::function<bool(std::span<const double>, std::span<const double>)> in_domain;

    double value(std::span<const double> x, std::span<const double> y) const {
        return eval_value(x, y);
    }
    bool domain_ok(std::span<const double> x, std::span<const double> y) const {
        return !in_domain || in_domain(x, y);
    }
};

/// Builds both evaluators from one generic callable
/// `T f(std::span<const T> x, std::span<const T> y)`.
template <class F>
FinslerMetric make_metric(int dim, std::string label, F f,
                          std::function<bool(std::span<const double>, std::span<const double>)>
                              domain = nullptr) {
    FinslerMetric m;
    m.dim = dim;
    m.label = std::move(label);
    m.eval_jets = [f](std::span<const Jet> x, std::span<const Jet> y) -> Jet { return f(x, y); };
    m.eval_value = [f](std::span<const double> x, std::span<const double> y) -> double {
        return f(x, y);
    };
    m.in_domain = std::move(domain);
    return m;
}

struct MetricTensor {
    Mat g;
    Mat g_inv;
    double det_g = 0.0;
};

struct CartanData {
    Ten3 C;      // C_ijk, totally symmetric
    Ten4 C_dot;  // C_ijkh = d/dy^h C_ijk
    Ten3 C_up;   // C^h_ij (first slot raised)
};

struct BerwaldFrame {
    Vec l_low, l_up;  // l_i = dF/dy^i, l^i = y^i / F
    Vec m_low, m_up;
    double eps = 1.0;  // signature, +1 or -1
    double I = 0.0;    // main scalar
    double F = 0.0;
};

namespace detail {

inline MultiIndex miy(int dim, std::initializer_list<int> ys) {
    MultiIndex e{};
    for (int i : ys) {
        const int slot = dim + i;
        if (slot < 0 || slot >= kMaxJetVars) throw std::out_of_range("miy: slot out of range");
        e[slot] += 1;
    }
    return e;
}

inline MultiIndex mix(std::initializer_list<int> xs, int dim, std::initializer_list<int> ys) {
    MultiIndex e{};
    for (int i : xs) {
        if (i < 0 || i >= kMaxJetVars) throw std::out_of_range("mix: slot out of range");
        e[i] += 1;
    }
    for (int i : ys) {
        const int slot = dim + i;
        if (slot < 0 || slot >= kMaxJetVars) throw std::out_of_range("mix: slot out of range");
        e[slot] += 1;
    }
    return e;
}

inline Mat extract_metric(const Jet& Ejet, int dim) {
    Mat g;
    g.n = dim;
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) {
            const double v = Ejet.derivative(miy(dim, {i, j}));
            g(i, j) = v;
            g(j, i) = v;
        }
    return g;
}

inline Ten3 extract_cartan(const Jet& Ejet, int dim) {
    Ten3 C;
    C.n = dim;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k)
                C(i, j, k) = 0.5 * Ejet.derivative(miy(dim, {i, j, k}));
    return C;
}

inline Ten4 extract_cartan_dot(const Jet& Ejet, int dim) {
    Ten4 Cd;
    Cd.n = dim;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k)
                for (int h = 0; h < dim; ++h)
                    Cd(i, j, k, h) = 0.5 * Ejet.derivative(miy(dim, {i, j, k, h}));
    return Cd;
}

inline MetricTensor metric_from_g(const Mat& g) {
    const int n = g.n;
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale += std::abs(g(i, i));
    scale /= n;
    double thresh = 1e-12;
    for (int i = 0; i < n; ++i) thresh *= scale;
    const double d = det(g);
    if (std::abs(d) < thresh)
        throw SingularMetricError("metric tensor is degenerate (|det g| below scale threshold)");
    return MetricTensor{g, inverse(g, d), d};
}

} // namespace detail

/// Jet of the energy E = F^2/2 at (x, y), at the requested lattice orders.
inline Jet energy(const FinslerMetric& F, std::span<const double> x, std::span<const double> y,
                  int ord_y = 2, int ord_x = 0) {
    if (!F.domain_ok(x, y))
        throw DomainError("energy: (x, y) outside the metric's conic domain");
    auto cfg = JetConfig::make(F.dim, F.dim, ord_x, ord_y);
    std::vector<Jet> xs, ys;
    xs.reserve(F.dim);
    ys.reserve(F.dim);
    for (int i = 0; i < F.dim; ++i)
        xs.push_back(ord_x >= 1 ? Jet::variable(cfg, i, x[i]) : Jet::constant(cfg, x[i]));
    for (int i = 0; i < F.dim; ++i) ys.push_back(Jet::variable(cfg, F.dim + i, y[i]));
    Jet Fj = F.eval_jets(xs, ys);
    return Fj * Fj * 0.5;
}

inline MetricTensor metric_tensor(const FinslerMetric& F, std::span<const double> x,
                                  std::span<const double> y) {
    return detail::metric_from_g(detail::extract_metric(energy(F, x, y, 2, 0), F.dim));
}

inline CartanData cartan_from_energy_jet(const Jet& Ejet, const MetricTensor& mt, int dim) {
    CartanData cd;
    cd.C = detail::extract_cartan(Ejet, dim);
    cd.C_dot = detail::extract_cartan_dot(Ejet, dim);
    cd.C_up.n = dim;
    for (int h = 0; h < dim; ++h)
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                double s = 0.0;
                for (int l = 0; l < dim; ++l) s += mt.g_inv(h, l) * cd.C(l, i, j);
                cd.C_up(h, i, j) = s;
            }
    return cd;
}

inline CartanData cartan(const FinslerMetric& F, std::span<const double> x,
                         std::span<const double> y) {
    Jet Ejet = energy(F, x, y, 4, 0);
    MetricTensor mt = detail::metric_from_g(detail::extract_metric(Ejet, F.dim));
    return cartan_from_energy_jet(Ejet, mt, F.dim);
}

struct AngularMetric {
    Mat h_low;    // h_ij = g_ij - l_i l_j
    Mat h_mixed;  // h^i_j
    Mat h_up;     // h^ij
};

inline AngularMetric angular_metric(const MetricTensor& mt, const Vec& l_low) {
    const int n = mt.g.n;
    Vec l_up;
    l_up.n = n;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += mt.g_inv(i, j) * l_low[j];
        l_up[i] = s;
    }
    AngularMetric am;
    am.h_low.n = am.h_mixed.n = am.h_up.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            am.h_low(i, j) = mt.g(i, j) - l_low[i] * l_low[j];
            am.h_mixed(i, j) = (i == j ? 1.0 : 0.0) - l_up[i] * l_low[j];
            am.h_up(i, j) = mt.g_inv(i, j) - l_up[i] * l_up[j];
        }
    return am;
}

namespace detail {

inline BerwaldFrame frame_from_parts(const MetricTensor& mt, const CartanData& cd, double Fv,
                                     std::span<const double> y) {
    BerwaldFrame fr;
    fr.F = Fv;
    fr.l_low.n = fr.l_up.n = fr.m_low.n = fr.m_up.n = 2;
    for (int i = 0; i < 2; ++i) {
        double s = 0.0;
        for (int j = 0; j < 2; ++j) s += mt.g(i, j) * y[j];
        fr.l_low[i] = s / Fv;  // g_ij y^j = F l_i
        fr.l_up[i] = y[i] / Fv;
    }
    // orientation: m~_i = (-l^2, l^1); automatically annihilates l^i
    Vec mt_low;
    mt_low.n = 2;
    mt_low[0] = -fr.l_up[1];
    mt_low[1] = fr.l_up[0];
    double rho = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) rho += mt.g_inv(i, j) * mt_low[i] * mt_low[j];
    if (std::abs(rho) < 1e-14)
        throw SingularMetricError("berwald_frame: transverse norm vanished");
    fr.eps = rho > 0 ? 1.0 : -1.0;
    const double inv = 1.0 / std::sqrt(std::abs(rho));
    for (int i = 0; i < 2; ++i) fr.m_low[i] = mt_low[i] * inv;
    for (int i = 0; i < 2; ++i) {
        double s = 0.0;
        for (int j = 0; j < 2; ++j) s += mt.g_inv(i, j) * fr.m_low[j];
        fr.m_up[i] = s;
    }
    double cmmm = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) cmmm += cd.C(i, j, k) * fr.m_up[i] * fr.m_up[j] * fr.m_up[k];
    fr.I = fr.eps * Fv * cmmm;
    return fr;
}

} // namespace detail

inline BerwaldFrame berwald_frame(const FinslerMetric& F, std::span<const double> x,
                                  std::span<const double> y) {
    if (F.dim != 2) throw std::invalid_argument("berwald_frame: surface metrics only");
    Jet Ejet = energy(F, x, y, 3, 0);
    MetricTensor mt = detail::metric_from_g(detail::extract_metric(Ejet, 2));
    CartanData cd;
    cd.C = detail::extract_cartan(Ejet, 2);
    return detail::frame_from_parts(mt, cd, std::sqrt(2.0 * Ejet.value()), y);
}

} // namespace finsler
