#pragma once
// Geodesic spray, nonlinear and Berwald connections, Berwald curvature, and
// the general-formula Landsberg tensor.  Everything is extracted from one
// energy jet at fiber order 5 / base order 1, so the third fiber derivative
// of the spray coefficients is exact.

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "finsler/jet.hpp"
#include "finsler/linalg.hpp"
#include "finsler/metric.hpp"

namespace finsler {

struct SprayData {
    Vec G;         // spray coefficients G^i
    Mat G_i_j;     // nonlinear connection G^i_j = d G^i / dy^j
    Ten3 G_h_ij;   // Berwald connection coefficients
    Ten4 G_h_ijk;  // Berwald curvature tensor, symmetric in (i,j,k)
    double F = 0.0;
    Vec l_low;
};

namespace detail {

inline std::vector<Jet> invert_jet_matrix(const std::vector<Jet>& m, int n) {
    std::vector<Jet> inv(n * n, Jet{});
    auto at = [&](const std::vector<Jet>& a, int i, int j) -> const Jet& { return a[i * n + j]; };
    if (n == 2) {
        Jet d = at(m, 0, 0) * at(m, 1, 1) - at(m, 0, 1) * at(m, 1, 0);
        inv[0] = at(m, 1, 1) / d;
        inv[1] = -at(m, 0, 1) / d;
        inv[2] = -at(m, 1, 0) / d;
        inv[3] = at(m, 0, 0) / d;
    } else {
        Jet c00 = at(m, 1, 1) * at(m, 2, 2) - at(m, 1, 2) * at(m, 2, 1);
        Jet c01 = at(m, 1, 2) * at(m, 2, 0) - at(m, 1, 0) * at(m, 2, 2);
        Jet c02 = at(m, 1, 0) * at(m, 2, 1) - at(m, 1, 1) * at(m, 2, 0);
        Jet d = at(m, 0, 0) * c00 + at(m, 0, 1) * c01 + at(m, 0, 2) * c02;
        inv[0 * n + 0] = c00 / d;
        inv[0 * n + 1] = (at(m, 0, 2) * at(m, 2, 1) - at(m, 0, 1) * at(m, 2, 2)) / d;
        inv[0 * n + 2] = (at(m, 0, 1) * at(m, 1, 2) - at(m, 0, 2) * at(m, 1, 1)) / d;
        inv[1 * n + 0] = c01 / d;
        inv[1 * n + 1] = (at(m, 0, 0) * at(m, 2, 2) - at(m, 0, 2) * at(m, 2, 0)) / d;
        inv[1 * n + 2] = (at(m, 0, 2) * at(m, 1, 0) - at(m, 0, 0) * at(m, 1, 2)) / d;
        inv[2 * n + 0] = c02 / d;
        inv[2 * n + 1] = (at(m, 0, 1) * at(m, 2, 0) - at(m, 0, 0) * at(m, 2, 1)) / d;
        inv[2 * n + 2] = (at(m, 0, 0) * at(m, 1, 1) - at(m, 0, 1) * at(m, 1, 0)) / d;
    }
    return inv;
}

struct SprayJets {
    std::shared_ptr<const JetConfig> cfg;
    Jet E;
    std::vector<Jet> g;      // g_ij as derivative jets (exact to fiber order ord_y - 2)
    std::vector<Jet> g_inv;  // same validity
    std::vector<Jet> G;      // spray coefficient jets (exact to fiber order ord_y - 2)
};

/// G^i = 1/2 g^{il} (y^k d^2E/dy^l dx^k - dE/dx^l), all kept as jets so the
/// caller can extract successive fiber derivatives.
inline SprayJets spray_jets(const FinslerMetric& F, std::span<const double> x,
                            std::span<const double> y, int ord_y) {
    const int n = F.dim;
    SprayJets sj;
    sj.E = energy(F, x, y, ord_y, 1);
    sj.cfg = sj.E.config();
    sj.g.resize(n * n, Jet{});
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            sj.g[i * n + j] = sj.E.deriv(n + i).deriv(n + j);
            if (j > i) sj.g[j * n + i] = sj.g[i * n + j];
        }
    sj.g_inv = invert_jet_matrix(sj.g, n);
    sj.G.resize(n, Jet{});
    std::vector<Jet> rhs(n, Jet{});
    for (int l = 0; l < n; ++l) {
        Jet acc = -sj.E.deriv(l);  // - dE/dx^l
        for (int k = 0; k < n; ++k) {
            Jet yk = Jet::variable(sj.cfg, n + k, y[k]);
            acc += yk * sj.E.deriv(n + l).deriv(k);
        }
        rhs[l] = acc;
    }
    for (int i = 0; i < n; ++i) {
        Jet acc = sj.g_inv[i * n + 0] * rhs[0];
        for (int l = 1; l < n; ++l) acc += sj.g_inv[i * n + l] * rhs[l];
        sj.G[i] = acc * 0.5;
    }
    return sj;
}

} // namespace detail

inline SprayData spray(const FinslerMetric& F, std::span<const double> x,
                       std::span<const double> y) {
    const int n = F.dim;
    auto sj = detail::spray_jets(F, x, y, 5);
    SprayData sd;
    sd.G.n = n;
    sd.G_i_j.n = n;
    sd.G_h_ij.n = n;
    sd.G_h_ijk.n = n;
    sd.l_low.n = n;
    sd.F = std::sqrt(2.0 * sj.E.value());
    for (int i = 0; i < n; ++i) {
        sd.G[i] = sj.G[i].value();
        sd.l_low[i] = sj.E.derivative(detail::miy(n, {i})) / sd.F;
        for (int j = 0; j < n; ++j) {
            sd.G_i_j(i, j) = sj.G[i].derivative(detail::miy(n, {j}));
            for (int k = 0; k < n; ++k) {
                sd.G_h_ij(i, j, k) = sj.G[i].derivative(detail::miy(n, {j, k}));
                for (int h = 0; h < n; ++h)
                    sd.G_h_ijk(i, j, k, h) = sj.G[i].derivative(detail::miy(n, {j, k, h}));
            }
        }
    }
    return sd;
}

/// Nonlinear connection only (cheaper lattice than full curvature).
inline Mat nonlinear_connection(const FinslerMetric& F, std::span<const double> x,
                                std::span<const double> y) {
    const int n = F.dim;
    auto sj = detail::spray_jets(F, x, y, 3);
    Mat out;
    out.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = sj.G[i].derivative(detail::miy(n, {j}));
    return out;
}

inline Ten3 landsberg_from_spray(const SprayData& sd) {
    const int n = sd.G.n;
    Ten3 L;
    L.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int h = 0; h < n; ++h) s += sd.G_h_ijk(h, i, j, k) * sd.l_low[h];
                L(i, j, k) = -0.5 * sd.F * s;
            }
    return L;
}

/// Landsberg tensor L_ijk = -1/2 F G^h_ijk dF/dy^h.
inline Ten3 landsberg_general(const FinslerMetric& F, std::span<const double> x,
                              std::span<const double> y) {
    return landsberg_from_spray(spray(F, x, y));
}

} // namespace finsler
