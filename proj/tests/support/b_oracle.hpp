#pragma once
// Exact oracle for the conformal Berwald-difference tensor, independent of
// the term-group assembly under test.  From G-bar^i = G^i + (sigma_r y^r) y^i
// - E g^{il} sigma_l (derived by scaling the geodesic formula), the
// difference of Berwald curvatures is the third fiber derivative of the
// correction, extracted from order-5 jets.

#include <array>
#include <vector>

#include "finsler/conformal.hpp"
#include "finsler/metric.hpp"
#include "finsler/spray.hpp"

namespace oracles {

inline finsler::Ten4 b_tensor_direct(const finsler::FinslerMetric& F,
                                     const finsler::ConformalFactor& cf,
                                     std::span<const double> x, std::span<const double> y) {
    using namespace finsler;
    const int n = F.dim;
    Jet E = energy(F, x, y, 5, 0);
    auto cfg = E.config();
    std::vector<Jet> g(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            g[i * n + j] = E.deriv(n + i).deriv(n + j);
            if (j > i) g[j * n + i] = g[i * n + j];
        }
    auto ginv = finsler::detail::invert_jet_matrix(g, n);
    const auto sg = cf.grad(x);
    std::vector<Jet> yj;
    for (int i = 0; i < n; ++i) yj.push_back(Jet::variable(cfg, n + i, y[i]));
    Jet sy = yj[0] * sg[0];
    for (int r = 1; r < n; ++r) sy += yj[r] * sg[r];

    Ten4 B;
    B.n = n;
    for (int i = 0; i < n; ++i) {
        Jet gs = ginv[i * n + 0] * sg[0];
        for (int l = 1; l < n; ++l) gs += ginv[i * n + l] * sg[l];
        Jet D = sy * yj[i] - E * gs;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int h = 0; h < n; ++h)
                    B(i, j, k, h) = D.derivative(finsler::detail::miy(n, {j, k, h}));
    }
    return B;
}

} // namespace oracles
