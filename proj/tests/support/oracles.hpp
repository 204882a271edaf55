#pragma once
// Test-side oracles, independent of the jet implementation path:
//  - nested central finite differences for mixed partials up to order 3
//  - series summation for arctanh
// Step 1e-4 scaled to the coordinate magnitude, matching the documented
// cross-check tolerances (relative 1e-5 for order <= 3).

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace oracles {

using PointFn = std::function<double(std::span<const double>, std::span<const double>)>;

struct Shift {
    bool fiber;  // true: y-slot, false: x-slot
    int slot;
};

inline double fd_partial(const PointFn& f, std::span<const double> x, std::span<const double> y,
                         std::vector<Shift> shifts, double h0 = 0.0) {
    // step per total order: 1e-4 up to second order, 1e-3 for third (nested
    // central differences at 1e-4 are roundoff-dominated past order two)
    if (h0 == 0.0) h0 = shifts.size() >= 3 ? 1e-3 : 1e-4;
    if (shifts.empty()) return f(x, y);
    Shift s = shifts.back();
    shifts.pop_back();
    std::array<double, 3> xs{}, ys{};
    for (size_t i = 0; i < x.size(); ++i) xs[i] = x[i];
    for (size_t i = 0; i < y.size(); ++i) ys[i] = y[i];
    double& c = s.fiber ? ys[s.slot] : xs[s.slot];
    const double h = h0 * std::max(1.0, std::abs(c));
    const double c0 = c;
    c = c0 + h;
    const double fp = fd_partial(f, std::span<const double>(xs.data(), x.size()),
                                 std::span<const double>(ys.data(), y.size()), shifts, h0);
    c = c0 - h;
    const double fm = fd_partial(f, std::span<const double>(xs.data(), x.size()),
                                 std::span<const double>(ys.data(), y.size()), shifts, h0);
    return (fp - fm) / (2.0 * h);
}

inline double atanh_series(double z) {
    double term = z, sum = z;
    const double z2 = z * z;
    for (int k = 1; k < 200; ++k) {
        term *= z2;
        const double add = term / (2 * k + 1);
        sum += add;
        if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

} // namespace oracles
