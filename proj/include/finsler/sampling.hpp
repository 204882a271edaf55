#pragma once
// Deterministic sample plans: base points drawn from a seeded box, directions
// from low-discrepancy sequences restricted to a family's conic window.
// Identical plans produce identical samples on every platform (no
// implementation-defined std distributions).

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "finsler/metric.hpp"

namespace finsler {

struct Sample {
    std::array<double, 3> x{};
    std::array<double, 3> y{};
    std::span<const double> xs(int dim) const { return {x.data(), static_cast<size_t>(dim)}; }
    std::span<const double> ys(int dim) const { return {y.data(), static_cast<size_t>(dim)}; }
};

enum class DirKind {
    UWindow,  // 2D, y = (1, u)/norm with u in [lo, hi]
    Circle,   // 2D, full circle
    Sphere,   // 3D, Fibonacci sphere
    SWindow,  // 3D, y = (s, r cos phi, r sin phi) with s in [lo, hi], r = sqrt(1-s^2)
};

struct DirectionPlan {
    DirKind kind = DirKind::Circle;
    double lo = 0.0;
    double hi = 0.0;
};

struct SamplePlan {
    int count_x = 16;
    int count_dir = 16;
    std::uint64_t seed = 1;
    std::array<std::array<double, 2>, 3> x_box{{{-0.5, 0.5}, {-0.5, 0.5}, {-0.5, 0.5}}};
    double domain_margin = 1e-3;
};

namespace detail {

inline double frac(double v) { return v - std::floor(v); }
inline constexpr double kGolden = 0.6180339887498949;  // 1/phi

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::array<double, 3> direction(const DirectionPlan& dp, int k, int count, double margin) {
    std::array<double, 3> y{};
    switch (dp.kind) {
        case DirKind::UWindow: {
            const double lo = dp.lo + margin, hi = dp.hi - margin;
            const double u = lo + frac((k + 0.5) * kGolden) * (hi - lo);
            const double nrm = std::sqrt(1.0 + u * u);
            y[0] = 1.0 / nrm;
            y[1] = u / nrm;
            break;
        }
        case DirKind::Circle: {
            const double th = -3.14159265358979312 + frac((k + 0.5) * kGolden) * 2.0 * 3.14159265358979312;
            y[0] = std::cos(th);
            y[1] = std::sin(th);
            break;
        }
        case DirKind::Sphere: {
            const double z = 1.0 - 2.0 * (k + 0.5) / count;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = 2.0 * 3.14159265358979312 * frac(k * kGolden);
            y[0] = r * std::cos(phi);
            y[1] = r * std::sin(phi);
            y[2] = z;
            break;
        }
        case DirKind::SWindow: {
            const double lo = dp.lo + margin, hi = dp.hi - margin;
            const double s = lo + frac((k + 0.5) * kGolden) * (hi - lo);
            const double r = std::sqrt(std::max(0.0, 1.0 - s * s));
            const double phi = 2.0 * 3.14159265358979312 * frac(k * 0.7548776662466927);
            y[0] = s;
            y[1] = r * std::cos(phi);
            y[2] = r * std::sin(phi);
            break;
        }
    }
    return y;
}

} // namespace detail

inline std::vector<std::array<double, 3>> draw_base_points(int dim, const SamplePlan& plan) {
    std::mt19937_64 rng(plan.seed);
    std::vector<std::array<double, 3>> out;
    out.reserve(plan.count_x);
    for (int i = 0; i < plan.count_x; ++i) {
        std::array<double, 3> x{};
        for (int d = 0; d < dim; ++d) {
            const auto& b = plan.x_box[d];
            x[d] = b[0] + (b[1] - b[0]) * detail::uniform01(rng);
        }
        out.push_back(x);
    }
    return out;
}

inline std::vector<std::array<double, 3>> draw_directions(const FinslerMetric& F,
                                                          std::span<const double> x,
                                                          const DirectionPlan& dp,
                                                          const SamplePlan& plan) {
    std::vector<std::array<double, 3>> dirs;
    dirs.reserve(plan.count_dir);
    const int cap = plan.count_dir * 32;
    for (int k = 0; k < cap && static_cast<int>(dirs.size()) < plan.count_dir; ++k) {
        auto y = detail::direction(dp, k, plan.count_dir, plan.domain_margin);
        if (F.domain_ok(x, std::span<const double>(y.data(), F.dim))) dirs.push_back(y);
    }
    if (static_cast<int>(dirs.size()) < plan.count_dir)
        throw DomainError("sampling: cannot place requested directions inside the conic domain");
    return dirs;
}

inline std::vector<Sample> draw_samples(const FinslerMetric& F, const DirectionPlan& dp,
                                        const SamplePlan& plan) {
    std::vector<Sample> out;
    out.reserve(static_cast<size_t>(plan.count_x) * plan.count_dir);
    for (const auto& x : draw_base_points(F.dim, plan)) {
        auto dirs = draw_directions(F, std::span<const double>(x.data(), F.dim), dp, plan);
        for (const auto& y : dirs) out.push_back(Sample{x, y});
    }
    return out;
}

} // namespace finsler
